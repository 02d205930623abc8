#pragma once

// Exact evaluation of compiled programs with per-function memoization.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "fomc/algebra.hpp"
#include "fomc/logic.hpp"

namespace fomc {

struct EvalOptions {
    bool memoize = true;
    // Upper bound on expression nodes visited; exceeding it is a TerminationViolation.
    std::uint64_t step_budget = 1'000'000'000;
};

struct EvalStats {
    std::uint64_t calls = 0;  // function bodies evaluated to completion
    std::uint64_t steps = 0;
};

// The equation of `function` that applies to `args`: among matching heads the
// one with the most constants, ties going to the one whose constants come
// first. Binds head variables in `env`. Throws MissingBaseCase if none applies.
const Equation& match_equation(const Program& program, const std::string& function,
                               const std::vector<std::int64_t>& args, Env* env = nullptr);

mpz_class evaluate(const Program& program, const std::string& function, const std::vector<std::int64_t>& args,
                   const EvalOptions& options = {}, EvalStats* stats = nullptr);

// Evaluates the entry function; `args` follow its parameter order.
mpz_class evaluate(const Program& program, const std::vector<std::int64_t>& args, const EvalOptions& options = {},
                   EvalStats* stats = nullptr);

// Entry arguments for named domain sizes. Throws Error when a size is
// missing or a subdomain would be larger than its parent.
std::vector<std::int64_t> entry_arguments(const Program& program, const DomainSizes& sizes);

}  // namespace fomc
