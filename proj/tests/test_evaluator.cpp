#include <doctest.h>

#include "fomc/basecase.hpp"
#include "fomc/evaluator.hpp"
#include "fomc/preprocess.hpp"
#include "sentences.hpp"
#include "test_support.hpp"

using namespace fomc;
using namespace fomc::test;

namespace {

Expr V(const std::string& n) { return Expr::variable(n); }
Expr C(long v) { return Expr::constant(v); }

FunctionInfo info(const std::string& name, std::vector<std::string> params) {
    FunctionInfo i;
    i.name = name;
    i.params = params;
    for (const auto& p : params) i.domains.push_back("D_" + p);
    return i;
}

// The bijection equations written out by hand.
Program bijections() {
    Program p;
    p.entry = "f";
    p.equations = {
        {"f", {V("m"), V("n")},
         Expr::sum("l", C(0), V("n"),
                   Expr::mul({Expr::binom(V("n"), V("l")), Expr::pow(C(-1), Expr::add({V("n"), Expr::mul({C(-1), V("l")})})),
                              Expr::call("g", {V("l"), V("m")})}))},
        {"g", {V("l"), V("m")},
         Expr::add({Expr::call("g", {offset(V("l"), -1), V("m")}),
                    Expr::mul({V("m"), Expr::call("g", {offset(V("l"), -1), offset(V("m"), -1)})})})},
        {"g", {C(0), V("m")}, Expr::pow(C(0), V("m"))},
        {"g", {V("l"), C(0)}, C(1)},
    };
    p.functions["f"] = info("f", {"m", "n"});
    p.functions["g"] = info("g", {"l", "m"});
    p.order = {"g", "f"};
    return p;
}

Program single(Equation definition, std::vector<Equation> bases = {}) {
    Program p;
    p.entry = definition.function;
    p.functions[p.entry] = info(p.entry, {"n"});
    p.equations.push_back(std::move(definition));
    for (auto& b : bases) p.equations.push_back(std::move(b));
    p.order = {p.entry};
    return p;
}

}  // namespace

TEST_CASE("the most specific equation applies") {
    Program p = bijections();
    Env env;
    CHECK(&match_equation(p, "g", {3, 2}, &env) == &p.equations[1]);
    CHECK(env.at("l") == 3);
    CHECK(&match_equation(p, "g", {0, 2}, &env) == &p.equations[2]);
    CHECK(env.at("m") == 2);
    CHECK(&match_equation(p, "g", {2, 0}) == &p.equations[3]);
    // Both base cases match; the one fixing the first argument wins.
    CHECK(&match_equation(p, "g", {0, 0}) == &p.equations[2]);

    p.equations.push_back({"g", {C(0), C(0)}, C(7)});
    CHECK(&match_equation(p, "g", {0, 0}) == &p.equations.back());
}

TEST_CASE("hand-written bijection equations count permutations") {
    Program p = bijections();
    for (long n = 0; n <= 10; ++n) CHECK(evaluate(p, {n, n}) == factorial(static_cast<unsigned long>(n)));
    CHECK(evaluate(p, {2, 3}) == 0);
    CHECK(evaluate(p, {3, 2}) == 0);
}

TEST_CASE("memoization changes the work, not the value") {
    Program p = bijections();
    EvalStats memo;
    EvalStats direct;
    EvalOptions off;
    off.memoize = false;
    CHECK(evaluate(p, {7, 7}, {}, &memo) == evaluate(p, {7, 7}, off, &direct));
    CHECK(memo.calls < direct.calls);
    for (long m = 0; m <= 5; ++m)
        for (long n = 0; n <= 5; ++n) CHECK(evaluate(p, {m, n}) == evaluate(p, {m, n}, off));
}

TEST_CASE("a missing base case is reported") {
    Program p = single({"h", {V("n")}, Expr::call("h", {offset(V("n"), -1)})});
    CHECK_THROWS_AS(evaluate(p, {3}), MissingBaseCase);
    EvalOptions off;
    off.memoize = false;
    CHECK_THROWS_AS(evaluate(p, {3}, off), MissingBaseCase);
    Program q = single({"h", {V("n")}, Expr::call("h", {offset(V("n"), -1)})}, {{"h", {C(1)}, C(5)}});
    CHECK(evaluate(q, {4}) == 5);
    CHECK_THROWS_AS(evaluate(q, {0}), MissingBaseCase);
}

TEST_CASE("cyclic definitions are detected") {
    Program p = single({"h", {V("n")}, Expr::add({C(1), Expr::call("h", {V("n")})})});
    CHECK_THROWS_AS(evaluate(p, {2}), TerminationViolation);
    EvalOptions off;
    off.memoize = false;
    CHECK_THROWS_AS(evaluate(p, {2}, off), TerminationViolation);
}

TEST_CASE("the step budget stops runaway evaluation") {
    Program p = bijections();
    EvalOptions tight;
    tight.step_budget = 50;
    CHECK_THROWS_AS(evaluate(p, {20, 20}, tight), TerminationViolation);
}

TEST_CASE("argument checks") {
    Program p = bijections();
    CHECK_THROWS_AS(evaluate(p, {1}), Error);
    CHECK_THROWS_AS(evaluate(p, "g", {-1, 2}), Error);
    CHECK(entry_arguments(p, {{"D_m", 4}, {"D_n", 5}}) == std::vector<std::int64_t>{4, 5});
    CHECK_THROWS_AS(entry_arguments(p, {{"D_m", 4}}), Error);

    auto constants = compile_with_base_cases(preprocess(load("constants.fo")));
    CHECK_THROWS_AS(evaluate(constants, {0}), Error);
    CHECK(evaluate(constants, {1}) > 0);
}

TEST_CASE("large arguments evaluate without exhausting the stack") {
    Program p = bijections();
    CHECK(evaluate(p, {300, 300}) == factorial(300));
}

TEST_CASE("the step budget never trips on compiled corpus programs") {
    for (const auto& file : corpus_files()) {
        CAPTURE(file);
        auto program = compile_with_base_cases(preprocess(load(file)));
        const auto arity = program.function(program.entry).params.size();
        std::vector<std::int64_t> args(arity, 0);
        // Corners and diagonal of the box [0, 50]^k.
        for (std::int64_t v : {0, 1, 2, 7, 50}) {
            std::fill(args.begin(), args.end(), v);
            try {
                evaluate(program, args);
            } catch (const TerminationViolation& e) {
                FAIL(e.what());
            } catch (const Error&) {
            }
        }
    }
}
