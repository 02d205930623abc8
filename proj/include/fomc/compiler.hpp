#pragma once

// Compilation of clausal sentences into recursive function definitions.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fomc/algebra.hpp"
#include "fomc/logic.hpp"

namespace fomc {

enum class SearchMode { Greedy, Bfs };

struct CompileOptions {
    SearchMode mode = SearchMode::Bfs;
    // Cap on non-greedy rule applications in one derivation.
    int max_nongreedy = 5;
    int greedy_budget = 8;
    // Search nodes visited before giving up on a sentence.
    std::size_t node_limit = 200000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::ostream* trace = nullptr;
    // Keep mixed clauses as tautologies when a domain is propagated to size zero.
    bool smoothing = true;
};

struct CompileStats {
    int nongreedy = 0;         // non-greedy rules in the chosen derivation
    std::size_t nodes = 0;     // search nodes visited
    int max_depth = 0;         // nesting of base-case compilations; 0 when none was needed
};

// One rule that applies to a sentence. Child holes in `skeleton` are the
// variables `#0`, `#1`, ...
struct RuleApplication {
    std::string rule;
    bool greedy = true;
    Expr skeleton;
    std::vector<Sentence> children;
};

// Rules applicable to the normalized form of `sentence`; greedy rules first.
std::vector<RuleApplication> applicable_rules(const Sentence& sentence, const Weights& weights);

// Compiles without base cases. The entry function takes the sizes of
// `entry_domains` in that order.
Program compile(const Sentence& sentence, const Weights& weights, const std::vector<std::string>& entry_domains,
                const CompileOptions& options = {}, CompileStats* stats = nullptr);
Program compile(const WfomcInstance& instance, const CompileOptions& options = {}, CompileStats* stats = nullptr);

// Entry domains of an instance: declaration order first, then any remaining
// domain by name. Domains with a fixed size are excluded.
std::vector<std::string> entry_domains(const WfomcInstance& instance);

}  // namespace fomc
