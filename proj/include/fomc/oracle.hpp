#pragma once

// Ground-truth weighted model counting by explicit enumeration of
// structures. Deliberately naive: no caching, no decomposition.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fomc/frontend.hpp"
#include "fomc/logic.hpp"

namespace fomc {

struct OracleOptions {
    std::size_t max_atoms = 64;
    std::uint64_t max_structures = std::uint64_t{1} << 24;
};

struct GroundClause {
    std::uint64_t positive = 0;  // bit i set: atom i occurs positively
    std::uint64_t negative = 0;
};

struct GroundProblem {
    std::vector<std::string> atoms;  // e.g. "P(a, Delta#1)"
    std::vector<Weight> weights;     // per atom
    std::vector<GroundClause> clauses;
    bool contradiction = false;      // some clause grounds to the empty clause
};

// Element names for every domain the sentence needs. A subdomain's elements
// are a prefix of its parent's; sibling subdomains are disjoint. Constants
// are elements of their own domain.
std::map<std::string, std::vector<std::string>> domain_elements(const Sentence& sentence,
                                                                const DomainSizes& sizes);

GroundProblem ground(const WfomcInstance& instance, const OracleOptions& options = {});
mpz_class brute_force_wfomc(const WfomcInstance& instance, const OracleOptions& options = {});

// Counts an instance directly from its formula, before any clausal
// conversion or Skolemization. Sizes default to those declared in the file.
mpz_class brute_force_wfomc(const InstanceAst& instance, const DomainSizes& sizes,
                            const OracleOptions& options = {});

}  // namespace fomc
