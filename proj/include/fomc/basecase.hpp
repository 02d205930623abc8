#pragma once

// Completing compiled definitions with base cases.

#include <cstdint>
#include <string>
#include <vector>

#include "fomc/algebra.hpp"
#include "fomc/compiler.hpp"

namespace fomc {

// A definition head with at least one argument fixed to a constant.
struct BaseCase {
    std::string function;
    std::vector<Expr> head;

    auto operator<=>(const BaseCase& other) const {
        if (auto c = function <=> other.function; c != 0) return c;
        for (std::size_t i = 0; i < head.size() && i < other.head.size(); ++i)
            if (int c = compare(head[i], other.head[i]); c != 0) return c <=> 0;
        return head.size() <=> other.head.size();
    }
    bool operator==(const BaseCase& other) const { return (*this <=> other) == 0; }
};

// Base cases demanded by the calls in the definitions of `equations`.
// Throws TerminationViolation when a recursive call has an argument that is
// neither `x - c` nor a constant.
std::vector<BaseCase> find_base_cases(const std::vector<Equation>& equations);

// Specializes `sentence` to |domain| = n.
Sentence propagate(const Sentence& sentence, const std::string& domain, std::uint64_t n, bool smoothing = true);

// Compiles and closes every recursive function with base cases.
Program compile_with_base_cases(const Sentence& sentence, const Weights& weights,
                                const std::vector<std::string>& entry_domains, const CompileOptions& options = {},
                                CompileStats* stats = nullptr);
Program compile_with_base_cases(const WfomcInstance& instance, const CompileOptions& options = {},
                                CompileStats* stats = nullptr);

}  // namespace fomc
