#include <doctest.h>

#include <sstream>

#include "fomc/basecase.hpp"
#include "fomc/compiler.hpp"
#include "fomc/evaluator.hpp"
#include "fomc/oracle.hpp"
#include "fomc/preprocess.hpp"
#include "test_support.hpp"

using namespace fomc;
using namespace fomc::test;

namespace {

Program compile_corpus(const std::string& file, SearchMode mode = SearchMode::Bfs) {
    CompileOptions o;
    o.mode = mode;
    return compile_with_base_cases(preprocess(load(file)), o);
}

mpz_class run(const Program& p, std::vector<std::int64_t> args) { return evaluate(p, args); }

}  // namespace

TEST_CASE("empty sentence counts one model") {
    auto p = compile_corpus("empty.fo");
    CHECK(run(p, std::vector<std::int64_t>(p.function(p.entry).params.size(), 2)) >= 1);
}

TEST_CASE("bijections count permutations") {
    std::ostringstream trace;
    CompileOptions o;
    auto p = compile_with_base_cases(preprocess(load("bijections.fo")), o);
    INFO(to_string(p));
    for (long n = 0; n <= 8; ++n) CHECK(run(p, {n, n}) == factorial(n));
    CHECK(run(p, {2, 3}) == 0);
}

TEST_CASE("functions count maps") {
    auto p = compile_corpus("functions.fo");
    INFO(to_string(p));
    for (long m = 0; m <= 5; ++m)
        for (long n = 0; n <= 5; ++n) CHECK(run(p, {m, n}) == power(n, m));
}

TEST_CASE("friends and smokers closed form") {
    auto p = compile_corpus("fands.fo");
    INFO(to_string(p));
    for (unsigned long n = 0; n <= 8; ++n) CHECK(run(p, {static_cast<long>(n)}) == friends_smokers(n));
}

namespace {

bool has_rule(const std::vector<RuleApplication>& rules, const std::string& name) {
    for (const auto& r : rules)
        if (r.rule == name) return true;
    return false;
}

const char* kTransitivity =
    "domain D 3\n"
    "predicate R(D, D)\n"
    "A x, y, z in D. R(x, y) & R(y, z) -> R(x, z)\n";

}  // namespace

TEST_CASE("greedy rules are offered before non-greedy ones") {
    auto inst = preprocess(load("bijections.fo"));
    auto rules = applicable_rules(inst.sentence, inst.weights);
    REQUIRE_FALSE(rules.empty());
    bool seen_nongreedy = false;
    for (const auto& r : rules) {
        if (!r.greedy) seen_nongreedy = true;
        else CHECK_FALSE(seen_nongreedy);
    }
    bool nongreedy = has_rule(rules, "IndependentPartialGrounding") || has_rule(rules, "AtomCounting") ||
                     has_rule(rules, "DomainRecursion");
    CHECK(nongreedy);
}

TEST_CASE("unit clauses are propagated") {
    auto ast = parse_instance("domain D\npredicate P(D)\npredicate Q(D)\nA x in D. P(x)\nA x in D. P(x) -> Q(x)\n");
    auto inst = preprocess(ast);
    auto p = compile_with_base_cases(inst);
    for (long n = 0; n <= 5; ++n) CHECK(run(p, {n}) == 1);
}

TEST_CASE("the bijection derivation nests one level of base cases") {
    CompileStats stats;
    auto p = compile_with_base_cases(preprocess(load("bijections.fo")), {}, &stats);
    CHECK(stats.nongreedy >= 2);
    CHECK(stats.nongreedy <= CompileOptions{}.max_nongreedy);
    CHECK(stats.max_depth == 1);
    CHECK(to_string(p.definition("f")) == "f(m, n) = sum_{l=0}^{n} binom(n, l) * (-1)^(n - l) * g(l, m)");
    CHECK(to_string(p.definition("g")) == "g(l, m) = g(l - 1, m) + m * g(l - 1, m - 1)");
}

TEST_CASE("functions and friends and smokers compile to closed forms") {
    CHECK(to_string(compile_corpus("functions.fo").definition("f")) == "f(m, n) = n^m");
    CHECK(to_string(compile_corpus("fands.fo").definition("f")) ==
          "f(m) = sum_{l=0}^{m} binom(m, l) * 2^(m + l^2 + (m - l)^2 - l + l * (m - l))");
}

TEST_CASE("greedy and breadth-first search agree on counts") {
    for (const char* file : {"bijections.fo", "functions.fo", "fands.fo", "symmetric.fo", "dominating.fo"}) {
        CAPTURE(file);
        auto b = compile_corpus(file, SearchMode::Bfs);
        auto g = compile_corpus(file, SearchMode::Greedy);
        const auto k = b.function(b.entry).params.size();
        for (long n = 0; n <= 5; ++n) {
            std::vector<std::int64_t> args(k, n);
            CHECK(run(b, args) == run(g, args));
        }
    }
}

TEST_CASE("a sentence without a derivation fails explicitly") {
    auto inst = preprocess(parse_instance(kTransitivity));
    try {
        compile_with_base_cases(inst);
        FAIL("transitivity unexpectedly compiled");
    } catch (const CompilationFailure& e) {
        CHECK_FALSE(e.stuck_sentence().empty());
    }
    CompileOptions greedy;
    greedy.mode = SearchMode::Greedy;
    CHECK_THROWS_AS(compile_with_base_cases(inst, greedy), CompilationFailure);
}

TEST_CASE("search limits are enforced") {
    auto inst = preprocess(parse_instance(kTransitivity));
    CompileOptions tiny;
    tiny.node_limit = 3;
    CHECK_THROWS_AS(compile_with_base_cases(inst, tiny), CompilationFailure);

    CompileOptions late;
    late.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    CHECK_THROWS_AS(compile_with_base_cases(preprocess(load("bijections.fo")), late), Timeout);
}

TEST_CASE("trace output names the applied rules") {
    std::ostringstream trace;
    CompileOptions o;
    o.trace = &trace;
    compile_with_base_cases(preprocess(load("bijections.fo")), o);
    CHECK(trace.str().find("DomainRecursion") != std::string::npos);
    CHECK(trace.str().find("AtomCounting") != std::string::npos);
}

TEST_CASE("entry domains follow declaration order") {
    auto inst = preprocess(load("bijections.fo"));
    CHECK(entry_domains(inst) == std::vector<std::string>{"Gamma", "Delta"});
}
