#pragma once

// Many-sorted, function-free clausal first-order logic.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fomc/error.hpp"

namespace fomc {

struct Domain {
    std::string name;
    std::optional<std::string> parent;  // set for compiler-introduced subdomains

    auto operator<=>(const Domain&) const = default;
};

struct Term {
    enum class Kind : std::uint8_t { Variable, Constant };

    Kind kind = Kind::Variable;
    std::string name;
    std::string domain;

    static Term variable(std::string name, std::string domain) {
        return {Kind::Variable, std::move(name), std::move(domain)};
    }
    static Term constant(std::string name, std::string domain) {
        return {Kind::Constant, std::move(name), std::move(domain)};
    }

    bool is_variable() const { return kind == Kind::Variable; }
    bool is_constant() const { return kind == Kind::Constant; }

    auto operator<=>(const Term&) const = default;
};

struct Predicate {
    std::string name;
    std::vector<std::string> arg_domains;

    std::size_t arity() const { return arg_domains.size(); }

    auto operator<=>(const Predicate&) const = default;
};

struct Atom {
    enum class Kind : std::uint8_t { Predicate, Equality };

    Kind kind = Kind::Predicate;
    std::string predicate;  // empty for equality
    std::vector<Term> args;  // exactly two for equality

    static Atom pred(std::string name, std::vector<Term> args) {
        return {Kind::Predicate, std::move(name), std::move(args)};
    }
    static Atom equality(Term left, Term right) {
        return {Kind::Equality, {}, {std::move(left), std::move(right)}};
    }

    bool is_equality() const { return kind == Kind::Equality; }
    bool is_ground() const;

    auto operator<=>(const Atom&) const = default;
};

struct Literal {
    Atom atom;
    bool positive = true;

    Literal negated() const { return {atom, !positive}; }

    auto operator<=>(const Literal&) const = default;
};

// A universally quantified disjunction of literals. Literals are kept as a
// sorted set so that equal clauses compare and hash equal.
struct Clause {
    std::map<std::string, std::string> binders;  // variable -> domain
    std::vector<Literal> literals;

    Clause() = default;
    Clause(std::map<std::string, std::string> binders, std::vector<Literal> literals);

    bool empty() const { return literals.empty(); }
    bool has_predicate(const std::string& name) const;
    // Variables that occur in at least one literal.
    std::set<std::string> used_variables() const;
    bool has_unused_binders() const;

    auto operator<=>(const Clause&) const = default;
};

struct Weight {
    std::int64_t positive = 1;
    std::int64_t negative = 1;

    auto operator<=>(const Weight&) const = default;
};

using Weights = std::map<std::string, Weight>;
using DomainSizes = std::map<std::string, std::uint64_t>;

Weight weight_of(const Weights& weights, const std::string& predicate);

struct Sentence {
    std::map<std::string, Domain> domains;
    std::map<std::string, Predicate> predicates;
    std::map<std::string, std::string> constants;  // constant -> domain
    std::vector<Clause> clauses;  // sorted, no duplicates
    // Domains whose cardinality the sentence itself pins down (set by Propagate).
    std::map<std::string, std::uint64_t> fixed_sizes;

    void add_clause(Clause clause);
    void set_clauses(std::vector<Clause> clauses);
    void add_domain(const Domain& domain);
    void add_predicate(const Predicate& predicate);

    // Domains mentioned by predicates, binders or constants.
    std::set<std::string> used_domains() const;
    // Predicates occurring in at least one clause.
    std::set<std::string> used_predicates() const;

    auto operator<=>(const Sentence&) const = default;
};

struct WfomcInstance {
    Sentence sentence;
    Weights weights;
    DomainSizes sizes;
    std::vector<std::string> domain_order;  // declaration order; positional arguments follow it
};

// Replace variables by terms. Substituted variables leave the binder prefix.
Clause substitute(const Clause& clause, const std::map<std::string, Term>& mapping);

std::set<std::string> doms(const Literal& literal);
// Domains of the clause's quantified variables.
std::set<std::string> doms(const Clause& clause);

bool is_descendant_or_self(const Sentence& sentence, const std::string& domain,
                           const std::string& ancestor);
std::string root_domain(const Sentence& sentence, const std::string& domain);

struct Diagnostic {
    std::optional<std::size_t> clause;
    std::optional<std::size_t> literal;
    std::string message;
};

std::vector<Diagnostic> validate(const Sentence& sentence);

std::string to_string(const Term& term);
std::string to_string(const Literal& literal);
std::string to_string(const Clause& clause);
std::string to_string(const Sentence& sentence);

}  // namespace fomc
