#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fomc/algebra.hpp"
#include "fomc/compiler.hpp"
#include "fomc/logic.hpp"

namespace fomc::detail {

// A sentence together with a symbolic size for each of its domains.
struct Node {
    Sentence s;
    Weights w;
    std::map<std::string, Expr> size;
};

// Source of fresh names; every name it makes contains '#' except function names.
class Namer {
public:
    std::string predicate(const std::string& base) { return base_name(base) + "#" + std::to_string(++predicates_); }
    std::string domain(const std::string& base) { return base_name(base) + "#" + std::to_string(++domains_); }
    std::string variable(const std::string& base) { return base_name(base) + "#" + std::to_string(++variables_); }
    // f, g, h, g1, h1, g2, ...
    std::string function();

    static std::string base_name(const std::string& name) { return name.substr(0, name.find('#')); }

private:
    std::size_t predicates_ = 0;
    std::size_t domains_ = 0;
    std::size_t variables_ = 0;
    std::size_t functions_ = 0;
};

// Splits subdomains into disjoint cells, turns constants into singleton
// domains and drops empty or unused domains.
Node normalize(Node node, Namer& namer);

struct Reduction {
    std::vector<Expr> factors;
    bool zero = false;
    Node node;
    std::vector<std::string> rules;  // names of the rules that fired
};

// Exhaustively applies the single-child greedy rules to a normalized node.
Reduction reduce(Node node, Namer& namer);

struct Option {
    std::string rule;
    bool greedy = false;
    Expr skeleton;  // holes are the variables #0, #1, ...
    std::vector<Node> children;
    std::string domain;  // the recursion domain of DomainRecursion
};

Expr hole(std::size_t i);
Expr fill(const Expr& skeleton, const std::vector<Expr>& children);

// The first applicable branching greedy rule, if any.
std::optional<Option> branching_option(const Node& node, Namer& namer);
// Non-greedy candidates in rule order. `reserved` lists names a new sum
// index must avoid.
std::vector<Option> nongreedy_options(const Node& node, Namer& namer, const std::set<std::string>& reserved);

// Domain bijection a -> b under which the two normalized sentences agree up
// to renaming of predicates and variables.
std::optional<std::map<std::string, std::string>> match(const Sentence& a, const Weights& wa, const Sentence& b,
                                                        const Weights& wb);

std::string describe(const Node& node);

struct Compiled {
    std::string entry;
    std::vector<Equation> equations;  // entry first, then callees in creation order
    std::map<std::string, FunctionInfo> functions;
};

// Compiles `sentence` into a root function over `entry_domains` with the given
// parameter names. Domains outside that list must have a fixed size.
Compiled compile_root(const Sentence& sentence, const Weights& weights, const std::vector<std::string>& entry_domains,
                      const std::vector<std::string>& params, Namer& namer, const CompileOptions& options,
                      CompileStats* stats);

// m, n, p, q, ... for the given number of parameters.
std::vector<std::string> parameter_names(std::size_t count);

// Functions of `equations` with callees before callers.
std::vector<std::string> definition_order(const std::vector<Equation>& equations);

}  // namespace fomc::detail
