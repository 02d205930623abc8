#include <doctest.h>

#include <random>

#include "fomc/algebra.hpp"
#include "random_exprs.hpp"
#include "test_support.hpp"

using namespace fomc;
using namespace fomc::test;

namespace {

Expr V(const std::string& n) { return Expr::variable(n); }
Expr C(long v) { return Expr::constant(v); }

// g(l, m) body before simplification.
Expr g_body() {
    return Expr::sum("k", C(0), V("m"),
                     Expr::mul({Expr::indicator(0, V("k"), 1), Expr::binom(V("m"), V("k")),
                                Expr::call("g", {offset(V("l"), -1), Expr::add({V("m"), Expr::mul({C(-1), V("k")})})})}));
}

// f(m, n) = sum_{l=0}^{n} binom(n, l) * (-1)^(n - l) * g(l, m)
Expr f_body() {
    return Expr::sum("l", C(0), V("n"),
                     Expr::mul({Expr::binom(V("n"), V("l")),
                                Expr::pow(C(-1), Expr::add({V("n"), Expr::mul({C(-1), V("l")})})),
                                Expr::call("g", {V("l"), V("m")})}));
}

// Resolves g by direct recursion on its definition and base cases.
mpz_class g_value(long l, long m) {
    if (l == 0) return m == 0 ? 1 : 0;
    if (m == 0) return 1;
    CallOracle oracle = [](const std::string&, const std::vector<mpz_class>& a) -> std::optional<mpz_class> {
        return g_value(a[0].get_si(), a[1].get_si());
    };
    return expr_eval(g_body(), {{"l", l}, {"m", m}}, oracle);
}

mpz_class f_value(long m, long n) {
    CallOracle oracle = [](const std::string&, const std::vector<mpz_class>& a) -> std::optional<mpz_class> {
        return g_value(a[0].get_si(), a[1].get_si());
    };
    return expr_eval(f_body(), {{"m", m}, {"n", n}}, oracle);
}

}  // namespace

TEST_CASE("the bijection g-equation simplifies to two recursive terms") {
    Expr s = simplify(g_body());
    CHECK(to_string(s) == "g(l - 1, m) + m * g(l - 1, m - 1)");
    CHECK(simplify(s) == s);
}

TEST_CASE("bijection equations evaluate to factorials") {
    CHECK(f_value(2, 2) == 2);
    CHECK(f_value(3, 3) == 6);
    CHECK(f_value(2, 3) == 0);
    for (long n = 0; n <= 6; ++n) CHECK(f_value(n, n) == factorial(static_cast<unsigned long>(n)));
}

TEST_CASE("printer follows the usual notation") {
    CHECK(to_string(f_body()) == "sum_{l=0}^{n} binom(n, l) * (-1)^(n - l) * g(l, m)");
    CHECK(to_string(simplify(f_body())) == "sum_{l=0}^{n} binom(n, l) * (-1)^(n - l) * g(l, m)");
    CHECK(to_string(Expr::indicator(2, V("x"), std::nullopt)) == "[x >= 2]");
    CHECK(to_string(Expr::indicator(0, V("x"), 1)) == "[0 <= x <= 1]");
    CHECK(to_string(Expr::pow(C(0), V("m"))) == "0^m");
    CHECK(to_string(Expr::add({C(3), Expr::mul({C(-2), V("x")})})) == "3 - 2 * x");
    CHECK(to_string(Expr::mul({Expr::add({V("a"), C(1)}), V("b")})) == "(a + 1) * b");
    CHECK(to_string(Expr::add({Expr::sum("k", C(0), V("n"), V("k")), C(1)})) == "(sum_{k=0}^{n} k) + 1");
}

TEST_CASE("simplify identities") {
    CHECK(simplify(Expr::pow(V("x"), C(0))) == C(1));
    CHECK(simplify(Expr::pow(C(0), C(0))) == C(1));
    CHECK(simplify(Expr::pow(V("x"), C(1))) == V("x"));
    CHECK(simplify(Expr::mul({C(1), V("x")})) == V("x"));
    CHECK(simplify(Expr::add({C(0), V("x")})) == V("x"));
    CHECK(simplify(Expr::mul({C(0), Expr::call("f", {V("x")})})) == C(0));
    CHECK(simplify(Expr::add({C(2), Expr::mul({C(3), C(4)})})) == C(14));
    CHECK(simplify(Expr::mul({V("x"), Expr::mul({V("y"), C(2)})})) == Expr::mul({C(2), V("x"), V("y")}));
    CHECK(simplify(Expr::mul({V("x"), Expr::pow(V("x"), V("n"))})) == Expr::pow(V("x"), Expr::add({V("n"), C(1)})));
    CHECK(simplify(Expr::binom(V("n"), C(0))) == C(1));
    CHECK(simplify(Expr::binom(offset(V("n"), -1), C(0))) != C(1));
    CHECK(simplify(Expr::sum("k", C(0), V("n"), Expr::mul({Expr::indicator(5, V("k"), 4), Expr::call("f", {V("k")})}))) ==
          C(0));
    CHECK(simplify(Expr::sum("k", C(3), C(2), V("k"))) == C(0));
}

TEST_CASE("expr_eval basics") {
    CallOracle none = [](const std::string&, const std::vector<mpz_class>&) -> std::optional<mpz_class> {
        return std::nullopt;
    };
    CHECK(expr_eval(C(7), {}, none) == 7);
    CHECK(expr_eval(Expr::binom(C(3), C(5)), {}, none) == 0);
    CHECK(expr_eval(Expr::binom(C(5), C(-1)), {}, none) == 0);
    CHECK(expr_eval(Expr::sum("k", C(3), C(1), C(9)), {}, none) == 0);
    CHECK(expr_eval(Expr::pow(C(0), C(0)), {}, none) == 1);
    CHECK_THROWS_AS(expr_eval(Expr::pow(C(2), C(-1)), {}, none), InternalError);
    CHECK_THROWS_AS(expr_eval(Expr::call("f", {C(-1)}), {}, none), MissingBaseCase);
    CHECK_FALSE(evaluate(Expr::call("f", {C(1)}), {}, none).has_value());
    CHECK(evaluate(Expr::mul({C(0), Expr::call("f", {C(1)})}), {}, none) == mpz_class(0));
}

TEST_CASE("an unresolved evaluation reports every missing call") {
    std::vector<long> asked;
    CallOracle record = [&](const std::string&, const std::vector<mpz_class>& a) -> std::optional<mpz_class> {
        asked.push_back(a[0].get_si());
        return std::nullopt;
    };
    auto v = evaluate(Expr::add({Expr::call("f", {C(1)}), Expr::call("f", {C(2)})}), {}, record);
    CHECK_FALSE(v.has_value());
    CHECK(asked == std::vector<long>{1, 2});
}

TEST_CASE("substitution avoids capturing sum indices") {
    Expr s = Expr::sum("k", C(0), V("n"), Expr::mul({V("k"), V("x")}));
    Expr out = substitute(s, {{"x", V("k")}});
    CallOracle none = [](const std::string&, const std::vector<mpz_class>&) -> std::optional<mpz_class> {
        return std::nullopt;
    };
    // sum_{k'=0}^{2} k' * k with k = 5 is 15.
    CHECK(expr_eval(out, {{"n", 2}, {"k", 5}}, none) == 15);
    CHECK(free_variables(out) == std::set<std::string>{"k", "n"});
}

TEST_CASE("affine recognizes recursion-site arguments") {
    auto a = affine(offset(V("l"), -1));
    REQUIRE(a);
    CHECK(a->variable == "l");
    CHECK(a->offset == -1);
    CHECK(affine(C(3))->offset == 3);
    CHECK_FALSE(affine(Expr::mul({C(2), V("l")})).has_value());
}

TEST_CASE("equation printing and base-case detection") {
    Equation base{"g", {C(0), V("m")}, Expr::pow(C(0), V("m"))};
    Equation def{"g", {V("l"), V("m")}, simplify(g_body())};
    CHECK(base.is_base_case());
    CHECK_FALSE(def.is_base_case());
    CHECK(to_string(base) == "g(0, m) = 0^m");
    Program p;
    p.equations = {def, base};
    p.functions["g"] = FunctionInfo{"g", {"l", "m"}, {"Gamma", "Delta"}, {}, {}};
    CHECK(p.definition("g").body == def.body);
    CHECK(p.base_cases("g").size() == 1);
    CHECK_THROWS_AS(p.function("h"), InternalError);
}

namespace {

void collect_call_names(const Expr& e, std::set<std::string>& out) {
    for (const auto& c : calls(e)) out.insert(c.name());
}

}  // namespace

TEST_CASE("simplify preserves values on random expressions") {
    RandomExprs gen(2024);
    std::mt19937 env_rng(99);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        Expr e = gen.gen(5);
        Expr s = simplify(e);
        CAPTURE(to_string(e));
        CAPTURE(to_string(s));
        CHECK(simplify(s) == s);
        std::set<std::string> before, after;
        collect_call_names(e, before);
        collect_call_names(s, after);
        CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
        for (int j = 0; j < 10; ++j) {
            Env env{{"a", env_rng() % 5}, {"b", env_rng() % 5}, {"c", env_rng() % 5}};
            auto x = expr_eval(e, env, test_oracle);
            auto y = expr_eval(s, env, test_oracle);
            CHECK(x == y);
            ++checked;
        }
    }
    CHECK(checked == 10000);
}
