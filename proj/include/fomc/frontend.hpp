#pragma once

// Instance file parsing and pretty-printing.
//
//   domain <Name> [<size>]
//   predicate <Name>(<Domain>, ...) [<w+> <w->]
//   constant <name> in <Domain>
//   <formula>                      # one or more, conjoined
//
// Operators by increasing binding: <->, ->, |, &, !. A quantifier
// "A x, y in D." or "E x in D." extends to the end of the enclosing group.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fomc/logic.hpp"

namespace fomc {

struct Position {
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind : std::uint8_t { Forall, Exists, And, Or, Not, Implies, Iff, Atom };

    Kind kind = Kind::Atom;
    std::string var;     // quantifiers
    std::string domain;  // quantifiers
    FormulaPtr left;     // body for quantifiers and negation
    FormulaPtr right;
    fomc::Atom atom;     // Kind::Atom
    Position pos;

    static FormulaPtr forall(std::string var, std::string domain, FormulaPtr body, Position pos = {});
    static FormulaPtr exists(std::string var, std::string domain, FormulaPtr body, Position pos = {});
    static FormulaPtr binary(Kind kind, FormulaPtr l, FormulaPtr r, Position pos = {});
    static FormulaPtr negation(FormulaPtr body, Position pos = {});
    static FormulaPtr make_atom(fomc::Atom atom, Position pos = {});
};

// Structural equality ignoring source positions.
bool same_formula(const FormulaPtr& a, const FormulaPtr& b);

struct DomainDecl {
    std::string name;
    std::optional<std::uint64_t> size;
    Position pos;
};

struct PredicateDecl {
    std::string name;
    std::vector<std::string> domains;
    std::optional<Weight> weight;
    Position pos;
};

struct ConstantDecl {
    std::string name;
    std::string domain;
    Position pos;
};

struct InstanceAst {
    std::vector<DomainDecl> domains;
    std::vector<PredicateDecl> predicates;
    std::vector<ConstantDecl> constants;
    std::vector<FormulaPtr> formulas;

    // Conjunction of all formulas, or nullptr when there are none.
    FormulaPtr conjunction() const;
    // Declared vocabulary without clauses.
    Sentence vocabulary() const;
    Weights weights() const;
    DomainSizes sizes() const;
};

// Throws ParseError (with line/column) on syntax errors, unbound variables,
// undeclared symbols, duplicate declarations and sort violations.
InstanceAst parse_instance(std::string_view text);
InstanceAst parse_instance_file(const std::string& path);

std::string print_formula(const FormulaPtr& formula);
std::string print_instance(const InstanceAst& instance);

}  // namespace fomc
