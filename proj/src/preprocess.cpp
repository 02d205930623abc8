#include "fomc/preprocess.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace fomc {

namespace {

using K = Formula::Kind;

FormulaPtr nnf(const FormulaPtr& f, bool negate) {
    switch (f->kind) {
        case K::Atom:
            return negate ? Formula::negation(f, f->pos) : f;
        case K::Not:
            return nnf(f->left, !negate);
        case K::And:
        case K::Or: {
            K k = (f->kind == K::And) != negate ? K::And : K::Or;
            return Formula::binary(k, nnf(f->left, negate), nnf(f->right, negate), f->pos);
        }
        case K::Implies:
            if (negate) return Formula::binary(K::And, nnf(f->left, false), nnf(f->right, true), f->pos);
            return Formula::binary(K::Or, nnf(f->left, true), nnf(f->right, false), f->pos);
        case K::Iff: {
            auto a = f->left;
            auto b = f->right;
            if (negate)
                return Formula::binary(K::And, Formula::binary(K::Or, nnf(a, false), nnf(b, false), f->pos),
                                       Formula::binary(K::Or, nnf(a, true), nnf(b, true), f->pos), f->pos);
            return Formula::binary(K::And, Formula::binary(K::Or, nnf(a, true), nnf(b, false), f->pos),
                                   Formula::binary(K::Or, nnf(a, false), nnf(b, true), f->pos), f->pos);
        }
        case K::Forall:
        case K::Exists: {
            bool universal = (f->kind == K::Forall) != negate;
            auto body = nnf(f->left, negate);
            return universal ? Formula::forall(f->var, f->domain, body, f->pos)
                             : Formula::exists(f->var, f->domain, body, f->pos);
        }
    }
    throw InternalError("unknown formula kind");
}

// Gives every quantifier a variable name that is unique across the formula.
class Renamer {
public:
    FormulaPtr run(const FormulaPtr& f) { return rename(f, {}); }

private:
    std::string fresh(const std::string& base) {
        if (used_.insert(base).second) return base;
        for (std::size_t i = 1;; ++i) {
            std::string name = base + std::to_string(i);
            if (used_.insert(name).second) return name;
        }
    }

    FormulaPtr rename(const FormulaPtr& f, const std::map<std::string, std::string>& scope) {
        switch (f->kind) {
            case K::Atom: {
                Atom a = f->atom;
                for (auto& t : a.args)
                    if (t.is_variable())
                        if (auto it = scope.find(t.name); it != scope.end()) t.name = it->second;
                return Formula::make_atom(std::move(a), f->pos);
            }
            case K::Not:
                return Formula::negation(rename(f->left, scope), f->pos);
            case K::Forall:
            case K::Exists: {
                auto inner = scope;
                std::string name = fresh(f->var);
                inner[f->var] = name;
                auto body = rename(f->left, inner);
                return f->kind == K::Forall ? Formula::forall(name, f->domain, body, f->pos)
                                            : Formula::exists(name, f->domain, body, f->pos);
            }
            default:
                return Formula::binary(f->kind, rename(f->left, scope), rename(f->right, scope), f->pos);
        }
    }

    std::set<std::string> used_;
};

Literal literal_of(const FormulaPtr& f) {
    if (f->kind == K::Atom) return {f->atom, true};
    if (f->kind == K::Not && f->left->kind == K::Atom) return {f->left->atom, false};
    throw InternalError("formula is not a literal");
}

std::vector<PreClause> clausify(const FormulaPtr& f) {
    switch (f->kind) {
        case K::Atom:
        case K::Not:
            return {PreClause{Clause({}, {literal_of(f)}), {}}};
        case K::And: {
            auto l = clausify(f->left);
            auto r = clausify(f->right);
            l.insert(l.end(), r.begin(), r.end());
            return l;
        }
        case K::Or: {
            auto l = clausify(f->left);
            auto r = clausify(f->right);
            std::vector<PreClause> out;
            out.reserve(l.size() * r.size());
            for (const auto& a : l) {
                for (const auto& b : r) {
                    auto binders = a.clause.binders;
                    binders.insert(b.clause.binders.begin(), b.clause.binders.end());
                    auto lits = a.clause.literals;
                    lits.insert(lits.end(), b.clause.literals.begin(), b.clause.literals.end());
                    auto ex = a.exists;
                    ex.insert(ex.end(), b.exists.begin(), b.exists.end());
                    out.push_back({Clause(std::move(binders), std::move(lits)), std::move(ex)});
                }
            }
            return out;
        }
        case K::Forall: {
            auto body = clausify(f->left);
            for (auto& pc : body) pc.clause.binders[f->var] = f->domain;
            return body;
        }
        case K::Exists:
            return {PreClause{Clause{}, {f}}};
        default:
            throw InternalError("formula is not in negation normal form");
    }
}

void free_variables(const FormulaPtr& f, std::set<std::string>& bound, std::map<std::string, std::string>& out) {
    switch (f->kind) {
        case K::Atom:
            for (const auto& t : f->atom.args)
                if (t.is_variable() && !bound.count(t.name)) out[t.name] = t.domain;
            return;
        case K::Not:
            free_variables(f->left, bound, out);
            return;
        case K::Forall:
        case K::Exists: {
            bool added = bound.insert(f->var).second;
            free_variables(f->left, bound, out);
            if (added) bound.erase(f->var);
            return;
        }
        default:
            free_variables(f->left, bound, out);
            free_variables(f->right, bound, out);
    }
}

std::string fresh_predicate(const Sentence& s, const char* base, std::size_t& counter) {
    while (true) {
        std::string name = std::string(1, kReservedPrefix) + base + std::to_string(++counter);
        if (!s.predicates.count(name)) return name;
    }
}

bool same_atom_ignoring_sign(const Literal& a, const Literal& b) { return a.atom == b.atom; }

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& formula) { return nnf(formula, false); }

ClausalForm to_clausal(const FormulaPtr& formula, const Sentence& vocabulary) {
    ClausalForm out;
    out.vocabulary = vocabulary;
    out.vocabulary.clauses.clear();
    if (!formula) return out;
    // Top-level conjuncts never share a clause, so each may reuse variable names.
    std::vector<FormulaPtr> conjuncts;
    std::vector<FormulaPtr> stack{formula};
    while (!stack.empty()) {
        auto f = stack.back();
        stack.pop_back();
        if (f->kind == K::And) {
            stack.push_back(f->right);
            stack.push_back(f->left);
        } else {
            conjuncts.push_back(f);
        }
    }
    for (const auto& c : conjuncts) {
        auto cs = clausify(Renamer().run(to_nnf(c)));
        out.clauses.insert(out.clauses.end(), cs.begin(), cs.end());
    }
    return out;
}

std::pair<Sentence, Weights> skolemize(const ClausalForm& form, const Weights& weights) {
    Sentence s = form.vocabulary;
    Weights w = weights;
    std::size_t counter = 0;
    std::vector<PreClause> work(form.clauses.rbegin(), form.clauses.rend());
    while (!work.empty()) {
        PreClause pc = std::move(work.back());
        work.pop_back();
        if (pc.exists.empty()) {
            s.add_clause(std::move(pc.clause));
            continue;
        }
        auto binders = pc.clause.binders;
        auto literals = pc.clause.literals;
        for (const auto& unit : pc.exists) {
            std::set<std::string> bound;
            std::map<std::string, std::string> context;
            free_variables(unit, bound, context);

            std::vector<std::string> arg_domains;
            std::vector<Term> args;
            for (const auto& [v, d] : context) {
                arg_domains.push_back(d);
                args.push_back(Term::variable(v, d));
            }
            std::string z = fresh_predicate(s, "Z", counter);
            std::string sk = "@S" + z.substr(2);
            s.add_predicate({z, arg_domains});
            s.add_predicate({sk, arg_domains});
            w[z] = Weight{1, 1};
            w[sk] = Weight{1, -1};
            literals.push_back({Atom::pred(z, args), true});

            auto z_atom = Formula::make_atom(Atom::pred(z, args));
            auto s_atom = Formula::make_atom(Atom::pred(sk, args));
            auto negated_body = to_nnf(Formula::negation(unit->left));
            auto close = [&](FormulaPtr f, bool with_witness) {
                if (with_witness) f = Formula::forall(unit->var, unit->domain, f);
                for (auto it = context.rbegin(); it != context.rend(); ++it)
                    f = Formula::forall(it->first, it->second, f);
                return f;
            };
            std::vector<FormulaPtr> extra = {
                close(Formula::binary(K::Or, z_atom, negated_body), true),
                close(Formula::binary(K::Or, s_atom, z_atom), false),
                close(Formula::binary(K::Or, s_atom, negated_body), true),
            };
            for (auto it = extra.rbegin(); it != extra.rend(); ++it) {
                auto cs = clausify(*it);
                for (auto c = cs.rbegin(); c != cs.rend(); ++c) work.push_back(std::move(*c));
            }
        }
        s.add_clause(Clause(std::move(binders), std::move(literals)));
    }
    return {std::move(s), std::move(w)};
}

bool is_tautology(const Clause& clause) {
    const auto& ls = clause.literals;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const auto& a = ls[i].atom;
        if (a.is_equality()) {
            bool same = a.args[0] == a.args[1];
            if (ls[i].positive && same) return true;
            if (!ls[i].positive && a.args[0].is_constant() && a.args[1].is_constant() && !same) return true;
        }
        for (std::size_t j = i + 1; j < ls.size(); ++j)
            if (ls[i].positive != ls[j].positive && same_atom_ignoring_sign(ls[i], ls[j])) return true;
    }
    return false;
}

bool subsumes(const Clause& general, const Clause& specific) {
    if (general.literals.size() > specific.literals.size() && general.binders.empty()) return false;
    std::vector<std::pair<std::string, std::string>> vars(general.binders.begin(), general.binders.end());
    std::map<std::string, Term> theta;
    std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
        if (i == vars.size()) {
            for (auto lit : general.literals) {
                for (auto& t : lit.atom.args)
                    if (t.is_variable()) t = theta.at(t.name);
                if (!std::binary_search(specific.literals.begin(), specific.literals.end(), lit)) return false;
            }
            return true;
        }
        for (const auto& [v, d] : specific.binders) {
            if (d != vars[i].second) continue;
            theta[vars[i].first] = Term::variable(v, d);
            if (search(i + 1)) return true;
        }
        theta.erase(vars[i].first);
        return false;
    };
    return search(0);
}

Sentence drop_redundant(const Sentence& sentence) {
    const auto& cs = sentence.clauses;
    std::vector<bool> dropped(cs.size(), false);
    for (std::size_t i = 0; i < cs.size(); ++i) dropped[i] = is_tautology(cs[i]);
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (dropped[i]) continue;
        for (std::size_t j = 0; j < cs.size(); ++j) {
            if (i == j || dropped[j] || !subsumes(cs[j], cs[i])) continue;
            if (j < i || !subsumes(cs[i], cs[j])) {
                dropped[i] = true;
                break;
            }
        }
    }
    Sentence out = sentence;
    std::vector<Clause> kept;
    for (std::size_t i = 0; i < cs.size(); ++i)
        if (!dropped[i]) kept.push_back(cs[i]);
    out.set_clauses(std::move(kept));
    return out;
}

WfomcInstance preprocess(const InstanceAst& instance) {
    auto form = to_clausal(instance.conjunction(), instance.vocabulary());
    auto [sentence, weights] = skolemize(form, instance.weights());
    WfomcInstance out;
    out.sentence = drop_redundant(sentence);
    out.weights = std::move(weights);
    out.sizes = instance.sizes();
    for (const auto& d : instance.domains) out.domain_order.push_back(d.name);
    return out;
}

}  // namespace fomc
