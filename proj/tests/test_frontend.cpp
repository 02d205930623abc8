#include <doctest.h>

#include <random>

#include "fomc/frontend.hpp"
#include "test_support.hpp"

using namespace fomc;
using namespace fomc::test;
using K = Formula::Kind;

TEST_CASE("bijections file parses into four conjuncts") {
    auto ast = load("bijections.fo");
    REQUIRE(ast.formulas.size() == 4);
    CHECK(ast.domains.size() == 2);
    CHECK(ast.sizes() == DomainSizes{{"Gamma", 2}, {"Delta", 2}});
    const auto& third = ast.formulas[2];
    CHECK(third->kind == K::Forall);
    CHECK(third->var == "x");
    CHECK(third->left->kind == K::Forall);
    CHECK(third->left->left->kind == K::Forall);
    auto body = third->left->left->left;
    REQUIRE(body->kind == K::Implies);
    CHECK(body->left->kind == K::And);
    CHECK(body->right->atom.is_equality());
    CHECK(body->right->atom.args[0].domain == "Delta");
}

TEST_CASE("quantifier scope extends over implication") {
    auto ast = parse_instance("domain D\npredicate S(D)\npredicate C(D)\nA x in D. S(x) -> C(x)\n");
    REQUIRE(ast.formulas.size() == 1);
    auto expected = Formula::forall(
        "x", "D",
        Formula::binary(K::Implies, Formula::make_atom(Atom::pred("S", {var("x", "D")})),
                        Formula::make_atom(Atom::pred("C", {var("x", "D")}))));
    CHECK(same_formula(ast.formulas[0], expected));
}

TEST_CASE("empty file gives an empty instance") {
    auto ast = parse_instance("");
    CHECK(ast.formulas.empty());
    CHECK(ast.conjunction() == nullptr);
    CHECK(load("empty.fo").formulas.empty());
}

TEST_CASE("operator precedence and associativity") {
    auto ast = parse_instance("predicate X\npredicate Y\npredicate W\nX | Y & W\nX -> Y -> W\nX <-> Y <-> W\n!X & Y\n");
    REQUIRE(ast.formulas.size() == 4);
    CHECK(ast.formulas[0]->kind == K::Or);
    CHECK(ast.formulas[0]->right->kind == K::And);
    CHECK(ast.formulas[1]->kind == K::Implies);
    CHECK(ast.formulas[1]->right->kind == K::Implies);
    CHECK(ast.formulas[2]->kind == K::Iff);
    CHECK(ast.formulas[2]->left->kind == K::Iff);
    CHECK(ast.formulas[3]->kind == K::And);
    CHECK(ast.formulas[3]->left->kind == K::Not);
}

TEST_CASE("weights, constants, inequality and nullary predicates") {
    auto ast = parse_instance(
        "domain D 4\npredicate S(D) 1 -1\npredicate Q()\npredicate R\nconstant c in D\n"
        "A x in D. x != c | Q | R() | S(c)\n");
    CHECK(ast.weights().at("S") == Weight{1, -1});
    REQUIRE(ast.constants.size() == 1);
    auto f = ast.formulas[0];
    CHECK(f->left->left->left->left->kind == K::Not);
    CHECK(f->left->left->left->left->left->atom.args[1].is_constant());
}

TEST_CASE("formulas may continue across lines") {
    auto ast = parse_instance("predicate X\npredicate Y\nX &\n  Y\n(X\n | Y)\nX\n  | Y\n");
    REQUIRE(ast.formulas.size() == 3);
    for (const auto& f : ast.formulas) CHECK(f->kind != K::Atom);
}

TEST_CASE("quantifier letters are reserved") {
    CHECK_THROWS_AS(parse_instance("predicate A\n"), ParseError);
}

TEST_CASE("declarations may follow their use") {
    auto ast = parse_instance("A x in D. P(x)\ndomain D\npredicate P(D)\n");
    CHECK(ast.formulas.size() == 1);
}

namespace {

void check_error(const std::string& text, std::size_t line, const std::string& fragment) {
    CAPTURE(text);
    try {
        parse_instance(text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == line);
        CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("diagnostics carry positions") {
    check_error("domain D\npredicate P(D)\nA x in D. P(y)\n", 3, "unbound variable 'y'");
    check_error("domain D\nA x in F. x = x\n", 2, "undeclared domain 'F'");
    check_error("domain D\nA x in D. Q(x)\n", 2, "undeclared predicate 'Q'");
    check_error("domain D\ndomain D\n", 2, "duplicate domain");
    check_error("domain D\npredicate P(D)\npredicate P(D)\n", 3, "duplicate predicate");
    check_error("domain D\npredicate P(D)\nA x in D. P(x\n", 4, "expected ')'");
    check_error("domain D\ndomain F\npredicate P(D)\nA x in F. P(x)\n", 4, "must be in 'D'");
    check_error("domain D\npredicate P(D)\nA x in D. P(x) $\n", 3, "unexpected character");
    check_error("domain D\ndomain F\nA x in D. A y in F. x = y\n", 3, "different sorts");
}

namespace {

FormulaPtr random_formula(std::mt19937& rng, int depth, std::vector<std::pair<std::string, std::string>>& scope) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
    int choice = pick(rng);
    if (choice <= 1) {
        if (choice == 0 || scope.empty()) return Formula::make_atom(Atom::pred("Q", {}));
        const auto& [v, d] = scope[rng() % scope.size()];
        if (d == "D") return Formula::make_atom(Atom::pred("P", {var(v, d)}));
        std::vector<std::string> same;
        for (const auto& [w, e] : scope)
            if (e == d) same.push_back(w);
        return Formula::make_atom(Atom::equality(var(v, d), var(same[rng() % same.size()], d)));
    }
    switch (choice) {
        case 2: return Formula::negation(random_formula(rng, depth - 1, scope));
        case 3:
        case 4: {
            std::string v = "v" + std::to_string(scope.size());
            std::string d = rng() % 2 ? "D" : "F";
            scope.emplace_back(v, d);
            auto body = random_formula(rng, depth - 1, scope);
            scope.pop_back();
            return choice == 3 ? Formula::forall(v, d, body) : Formula::exists(v, d, body);
        }
        default: {
            static const K kinds[] = {K::And, K::Or, K::Implies, K::Iff};
            auto l = random_formula(rng, depth - 1, scope);
            auto r = random_formula(rng, depth - 1, scope);
            return Formula::binary(kinds[rng() % 4], l, r);
        }
    }
}

}  // namespace

TEST_CASE("parse after print is the identity") {
    std::mt19937 rng(7);
    for (int i = 0; i < 300; ++i) {
        std::vector<std::pair<std::string, std::string>> scope;
        auto f = random_formula(rng, 5, scope);
        InstanceAst ast;
        ast.domains = {{"D", 2, {}}, {"F", {}, {}}};
        ast.predicates = {{"P", {"D"}, Weight{2, -1}, {}}, {"Q", {}, {}, {}}};
        ast.formulas = {f};
        auto text = print_instance(ast);
        CAPTURE(text);
        auto back = parse_instance(text);
        REQUIRE(back.formulas.size() == 1);
        CHECK(same_formula(back.formulas[0], f));
        CHECK(print_instance(back) == text);
    }
    for (const char* file : {"bijections.fo", "functions.fo", "fands.fo", "formula4.fo", "constants.fo"}) {
        auto ast = load(file);
        auto back = parse_instance(print_instance(ast));
        REQUIRE(back.formulas.size() == ast.formulas.size());
        for (std::size_t i = 0; i < ast.formulas.size(); ++i) CHECK(same_formula(back.formulas[i], ast.formulas[i]));
    }
}

TEST_CASE("parsing is total on mutated input") {
    std::mt19937 rng(11);
    const std::string base =
        "domain D 2\npredicate P(D, D)\nconstant c in D\nA x in D. E y in D. P(x, y) & !(x = c) -> (P(c, x) <-> x != y)\n";
    const std::string alphabet = "ADEP()., &|!-><=\n#xyc0123";
    for (int i = 0; i < 2000; ++i) {
        std::string text = base;
        int edits = 1 + static_cast<int>(rng() % 4);
        for (int e = 0; e < edits; ++e) {
            std::size_t at = rng() % (text.size() + 1);
            switch (rng() % 3) {
                case 0: text.insert(text.begin() + static_cast<long>(at), alphabet[rng() % alphabet.size()]); break;
                case 1: if (at < text.size()) text.erase(at, 1); break;
                default: if (at < text.size()) text[at] = alphabet[rng() % alphabet.size()];
            }
        }
        CAPTURE(text);
        try {
            parse_instance(text);
        } catch (const ParseError&) {
        }
    }
}
