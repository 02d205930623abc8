#pragma once

// Conversion of arbitrary first-order formulas into universally quantified
// clauses, Skolemization of existential quantifiers and removal of redundant
// clauses.

#include <string>
#include <utility>
#include <vector>

#include "fomc/frontend.hpp"
#include "fomc/logic.hpp"

namespace fomc {

// A clause that may still contain existential subformulas. Each entry of
// `exists` is a negation-normal-form formula rooted at an Exists node whose
// free variables are among the clause binders; semantically it is one more
// disjunct of the clause.
struct PreClause {
    Clause clause;
    std::vector<FormulaPtr> exists;
};

struct ClausalForm {
    Sentence vocabulary;  // declarations only; no clauses
    std::vector<PreClause> clauses;
};

// Predicates introduced by Skolemization start with this character, which the
// instance grammar cannot produce.
inline constexpr char kReservedPrefix = '@';

// Negation normal form (implications and equivalences expanded, negation on
// atoms only).
FormulaPtr to_nnf(const FormulaPtr& formula);

ClausalForm to_clausal(const FormulaPtr& formula, const Sentence& vocabulary);

// Replaces every existential subformula with fresh Z/S predicates so that the
// weighted model count is unchanged.
std::pair<Sentence, Weights> skolemize(const ClausalForm& form, const Weights& weights);

// True when `general` implies `specific` by a variable renaming that maps
// every binder of `general` to a binder of `specific` with the same domain.
bool subsumes(const Clause& general, const Clause& specific);
bool is_tautology(const Clause& clause);

// Removes tautologies and subsumed clauses; the declared vocabulary is kept.
Sentence drop_redundant(const Sentence& sentence);

// Full pipeline from a parsed instance to a clausal weighted instance.
WfomcInstance preprocess(const InstanceAst& instance);

}  // namespace fomc
