#include "fomc/logic.hpp"

#include <algorithm>
#include <sstream>

namespace fomc {

bool Atom::is_ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

Clause::Clause(std::map<std::string, std::string> binders_in, std::vector<Literal> literals_in)
    : binders(std::move(binders_in)), literals(std::move(literals_in)) {
    std::sort(literals.begin(), literals.end());
    literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
}

bool Clause::has_predicate(const std::string& name) const {
    return std::any_of(literals.begin(), literals.end(), [&](const Literal& l) {
        return !l.atom.is_equality() && l.atom.predicate == name;
    });
}

std::set<std::string> Clause::used_variables() const {
    std::set<std::string> out;
    for (const auto& l : literals)
        for (const auto& t : l.atom.args)
            if (t.is_variable()) out.insert(t.name);
    return out;
}

bool Clause::has_unused_binders() const { return used_variables().size() != binders.size(); }

Weight weight_of(const Weights& weights, const std::string& predicate) {
    auto it = weights.find(predicate);
    return it == weights.end() ? Weight{} : it->second;
}

void Sentence::add_clause(Clause clause) {
    auto it = std::lower_bound(clauses.begin(), clauses.end(), clause);
    if (it == clauses.end() || *it != clause) clauses.insert(it, std::move(clause));
}

void Sentence::set_clauses(std::vector<Clause> cs) {
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    clauses = std::move(cs);
}

void Sentence::add_domain(const Domain& domain) { domains[domain.name] = domain; }

void Sentence::add_predicate(const Predicate& predicate) { predicates[predicate.name] = predicate; }

std::set<std::string> Sentence::used_domains() const {
    std::set<std::string> out;
    for (const auto& [_, p] : predicates) out.insert(p.arg_domains.begin(), p.arg_domains.end());
    for (const auto& c : clauses) {
        for (const auto& [_, d] : c.binders) out.insert(d);
        for (const auto& l : c.literals)
            for (const auto& t : l.atom.args) out.insert(t.domain);
    }
    return out;
}

std::set<std::string> Sentence::used_predicates() const {
    std::set<std::string> out;
    for (const auto& c : clauses)
        for (const auto& l : c.literals)
            if (!l.atom.is_equality()) out.insert(l.atom.predicate);
    return out;
}

Clause substitute(const Clause& clause, const std::map<std::string, Term>& mapping) {
    auto binders = clause.binders;
    for (const auto& [var, term] : mapping) {
        auto it = binders.find(var);
        if (it == binders.end()) throw SortError("substitution of unbound variable '" + var + "'");
        if (it->second != term.domain)
            throw SortError("substitution " + var + " -> " + term.name + " crosses sorts (" +
                            it->second + " vs " + term.domain + ")");
        binders.erase(it);
    }
    for (const auto& [_, term] : mapping)
        if (term.is_variable()) binders[term.name] = term.domain;

    std::vector<Literal> literals;
    literals.reserve(clause.literals.size());
    for (auto l : clause.literals) {
        for (auto& t : l.atom.args) {
            if (!t.is_variable()) continue;
            if (auto m = mapping.find(t.name); m != mapping.end()) t = m->second;
        }
        literals.push_back(std::move(l));
    }
    return Clause(std::move(binders), std::move(literals));
}

std::set<std::string> doms(const Literal& literal) {
    std::set<std::string> out;
    for (const auto& t : literal.atom.args)
        if (t.is_variable()) out.insert(t.domain);
    return out;
}

std::set<std::string> doms(const Clause& clause) {
    std::set<std::string> out;
    for (const auto& [_, d] : clause.binders) out.insert(d);
    return out;
}

bool is_descendant_or_self(const Sentence& sentence, const std::string& domain,
                           const std::string& ancestor) {
    std::string cur = domain;
    for (std::size_t guard = 0; guard <= sentence.domains.size(); ++guard) {
        if (cur == ancestor) return true;
        auto it = sentence.domains.find(cur);
        if (it == sentence.domains.end() || !it->second.parent) return false;
        cur = *it->second.parent;
    }
    return false;
}

std::string root_domain(const Sentence& sentence, const std::string& domain) {
    std::string cur = domain;
    for (std::size_t guard = 0; guard <= sentence.domains.size(); ++guard) {
        auto it = sentence.domains.find(cur);
        if (it == sentence.domains.end() || !it->second.parent) return cur;
        cur = *it->second.parent;
    }
    return cur;
}

namespace {

void check_term(const Sentence& s, const Clause& c, const Term& t, std::size_t ci, std::size_t li,
                std::vector<Diagnostic>& out) {
    if (!s.domains.count(t.domain))
        out.push_back({ci, li, "term '" + t.name + "' uses undeclared domain '" + t.domain + "'"});
    if (t.is_variable()) {
        auto b = c.binders.find(t.name);
        if (b == c.binders.end())
            out.push_back({ci, li, "variable '" + t.name + "' is not quantified"});
        else if (b->second != t.domain)
            out.push_back({ci, li, "variable '" + t.name + "' is used with domain '" + t.domain +
                                       "' but quantified over '" + b->second + "'"});
    } else {
        auto k = s.constants.find(t.name);
        if (k == s.constants.end())
            out.push_back({ci, li, "undeclared constant '" + t.name + "'"});
        else if (k->second != t.domain)
            out.push_back({ci, li, "constant '" + t.name + "' belongs to '" + k->second + "'"});
    }
}

}  // namespace

std::vector<Diagnostic> validate(const Sentence& s) {
    std::vector<Diagnostic> out;
    for (const auto& [name, d] : s.domains) {
        if (name != d.name) out.push_back({{}, {}, "domain key mismatch for '" + name + "'"});
        std::string cur = name;
        std::set<std::string> seen;
        while (true) {
            if (!seen.insert(cur).second) {
                out.push_back({{}, {}, "domain '" + name + "' has a cyclic parent chain"});
                break;
            }
            auto it = s.domains.find(cur);
            if (it == s.domains.end()) {
                out.push_back({{}, {}, "domain '" + cur + "' is not declared"});
                break;
            }
            if (!it->second.parent) break;
            cur = *it->second.parent;
        }
    }
    for (const auto& [name, p] : s.predicates)
        for (const auto& d : p.arg_domains)
            if (!s.domains.count(d))
                out.push_back({{}, {}, "predicate '" + name + "' uses undeclared domain '" + d + "'"});
    for (const auto& [name, d] : s.constants)
        if (!s.domains.count(d))
            out.push_back({{}, {}, "constant '" + name + "' uses undeclared domain '" + d + "'"});

    for (std::size_t ci = 0; ci < s.clauses.size(); ++ci) {
        const auto& c = s.clauses[ci];
        for (const auto& [v, d] : c.binders)
            if (!s.domains.count(d))
                out.push_back({ci, {}, "variable '" + v + "' quantified over undeclared domain '" + d + "'"});
        for (std::size_t li = 0; li < c.literals.size(); ++li) {
            const auto& atom = c.literals[li].atom;
            for (const auto& t : atom.args) check_term(s, c, t, ci, li, out);
            if (atom.is_equality()) {
                if (atom.args.size() != 2) {
                    out.push_back({ci, li, "equality needs exactly two terms"});
                } else if (root_domain(s, atom.args[0].domain) != root_domain(s, atom.args[1].domain)) {
                    out.push_back({ci, li, "equality between terms of different sorts ('" +
                                               atom.args[0].domain + "' and '" + atom.args[1].domain +
                                               "')"});
                }
                continue;
            }
            auto p = s.predicates.find(atom.predicate);
            if (p == s.predicates.end()) {
                out.push_back({ci, li, "undeclared predicate '" + atom.predicate + "'"});
                continue;
            }
            if (p->second.arity() != atom.args.size()) {
                out.push_back({ci, li, "predicate '" + atom.predicate + "' expects " +
                                           std::to_string(p->second.arity()) + " arguments"});
                continue;
            }
            for (std::size_t i = 0; i < atom.args.size(); ++i)
                if (!is_descendant_or_self(s, atom.args[i].domain, p->second.arg_domains[i]))
                    out.push_back({ci, li, "argument " + std::to_string(i + 1) + " of '" +
                                               atom.predicate + "' has sort '" + atom.args[i].domain +
                                               "', expected '" + p->second.arg_domains[i] + "'"});
        }
    }
    return out;
}

std::string to_string(const Term& term) { return term.name; }

std::string to_string(const Literal& literal) {
    std::string out;
    const auto& a = literal.atom;
    if (a.is_equality()) {
        out = to_string(a.args[0]) + (literal.positive ? " = " : " != ") + to_string(a.args[1]);
        return out;
    }
    if (!literal.positive) out = "!";
    out += a.predicate;
    if (!a.args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i) out += ", ";
            out += to_string(a.args[i]);
        }
        out += ")";
    }
    return out;
}

std::string to_string(const Clause& clause) {
    std::ostringstream os;
    // Group binders by domain to mirror "A x, y in D." notation.
    std::map<std::string, std::vector<std::string>> by_domain;
    for (const auto& [v, d] : clause.binders) by_domain[d].push_back(v);
    for (const auto& [d, vars] : by_domain) {
        os << "A ";
        for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? ", " : "") << vars[i];
        os << " in " << d << ". ";
    }
    if (clause.literals.empty()) os << "false";
    for (std::size_t i = 0; i < clause.literals.size(); ++i)
        os << (i ? " | " : "") << to_string(clause.literals[i]);
    return os.str();
}

std::string to_string(const Sentence& sentence) {
    std::ostringstream os;
    for (const auto& c : sentence.clauses) os << to_string(c) << "\n";
    return os.str();
}

}  // namespace fomc
