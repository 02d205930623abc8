#include <doctest.h>

#include "fomc/oracle.hpp"
#include "fomc/preprocess.hpp"
#include "test_support.hpp"

using namespace fomc;
using namespace fomc::test;

TEST_CASE("bijections between two-element sets") {
    auto ast = load("bijections.fo");
    CHECK(brute_force_wfomc(ast, {{"Gamma", 2}, {"Delta", 2}}) == 2);
    CHECK(brute_force_wfomc(ast, {{"Gamma", 3}, {"Delta", 3}}) == 6);
    CHECK(brute_force_wfomc(ast, {{"Gamma", 2}, {"Delta", 3}}) == 0);
}

TEST_CASE("grounding the bijection sentence") {
    auto inst = preprocess(load("bijections.fo"));
    inst.sizes = {{"Gamma", 2}, {"Delta", 2}};
    auto g = ground(inst);
    int p_atoms = 0;
    for (const auto& a : g.atoms)
        if (a.rfind("P(", 0) == 0) ++p_atoms;
    CHECK(p_atoms == 4);
    CHECK(g.atoms.size() == 4 + 4 * 2);
    CHECK_FALSE(g.clauses.empty());
    CHECK(brute_force_wfomc(inst) == 2);
}

TEST_CASE("hand-written skolemized form counts 4 - 1") {
    auto inst = preprocess(load("formula4.fo"));
    inst.sizes = {{"Gamma", 1}, {"Delta", 2}};
    CHECK(brute_force_wfomc(inst) == 3);
    CHECK(brute_force_wfomc(load("formula3.fo"), {}) == 3);
}

TEST_CASE("friends and smokers") {
    auto ast = load("fands.fo");
    CHECK(brute_force_wfomc(ast, {{"Delta", 1}}) == 6);
    CHECK(brute_force_wfomc(ast, {{"Delta", 2}}) == 112);
    for (unsigned long n = 0; n <= 3; ++n) CHECK(brute_force_wfomc(ast, {{"Delta", n}}) == friends_smokers(n));
}

TEST_CASE("empty sentence") {
    auto inst = preprocess(load("empty.fo"));
    auto g = ground(inst);
    CHECK(g.atoms.empty());
    CHECK(g.clauses.empty());
    CHECK(brute_force_wfomc(inst) == 1);
}

TEST_CASE("unconstrained predicates count every structure") {
    auto ast = parse_instance("domain D\npredicate P(D)\npredicate R(D, D) 2 3\n");
    for (unsigned long n = 0; n <= 3; ++n) {
        mpz_class expected = power(2, n) * power(5, n * n);
        CHECK(brute_force_wfomc(ast, {{"D", n}}) == expected);
    }
}

TEST_CASE("counts depend only on sizes, not element names") {
    auto a = parse_instance("domain D\npredicate P(D, D)\nconstant c in D\nA x in D. P(x, c) | P(c, x)\n");
    auto b = parse_instance("domain D\npredicate P(D, D)\nconstant zed in D\nA x in D. P(x, zed) | P(zed, x)\n");
    for (unsigned long n = 1; n <= 3; ++n) CHECK(brute_force_wfomc(a, {{"D", n}}) == brute_force_wfomc(b, {{"D", n}}));
}

TEST_CASE("guard refuses oversized groundings") {
    auto ast = load("bijections.fo");
    CHECK_THROWS_AS(brute_force_wfomc(ast, {{"Gamma", 5}, {"Delta", 5}}), OracleGuardExceeded);
    OracleOptions tight;
    tight.max_atoms = 3;
    CHECK_THROWS_AS(brute_force_wfomc(ast, {{"Gamma", 2}, {"Delta", 2}}, tight), OracleGuardExceeded);
}

TEST_CASE("missing sizes are reported") {
    auto ast = parse_instance("domain D\npredicate P(D)\nA x in D. P(x)\n");
    CHECK_THROWS_AS(brute_force_wfomc(ast, {}), Error);
}

TEST_CASE("subdomains are prefixes of their parent") {
    Sentence s;
    s.add_domain({"G", {}});
    s.add_domain({"H", "G"});
    s.add_predicate({"P", {"G"}});
    s.add_clause(Clause({{"y", "H"}}, {pos("P", {var("y", "H")})}));
    for (unsigned long g = 0; g <= 3; ++g)
        for (unsigned long h = 0; h <= g; ++h)
            CHECK(brute_force_wfomc(WfomcInstance{s, {}, {{"G", g}, {"H", h}}, {}}) == power(2, g - h));
    auto elems = domain_elements(s, {{"G", 3}, {"H", 2}});
    CHECK(elems.at("G").size() == 3);
    CHECK(std::equal(elems.at("H").begin(), elems.at("H").end(), elems.at("G").begin()));
}

TEST_CASE("negative weights produce signed sums") {
    auto ast = parse_instance("domain D\npredicate S(D) 1 -1\n");
    CHECK(brute_force_wfomc(ast, {{"D", 0}}) == 1);
    CHECK(brute_force_wfomc(ast, {{"D", 2}}) == 0);
    auto big = parse_instance("domain D\npredicate S(D) 3 -2\n");
    CHECK(brute_force_wfomc(big, {{"D", 3}}) == 1);
}
