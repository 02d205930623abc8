#include "fomc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>
#include <set>

namespace fomc {

namespace {

std::uint64_t size_of(const Sentence& s, const DomainSizes& sizes, const std::string& d, bool& known) {
    known = true;
    if (auto it = s.fixed_sizes.find(d); it != s.fixed_sizes.end()) return it->second;
    if (auto it = sizes.find(d); it != sizes.end()) return it->second;
    known = false;
    return 0;
}

std::string atom_key(const std::string& predicate, const std::vector<std::string>& elements) {
    std::string out = predicate;
    if (!elements.empty()) {
        out += "(";
        for (std::size_t i = 0; i < elements.size(); ++i) out += (i ? ", " : "") + elements[i];
        out += ")";
    }
    return out;
}

struct AtomTable {
    std::vector<std::string> names;
    std::vector<Weight> weights;
    std::map<std::string, std::size_t> index;

    void build(const Sentence& s, const Weights& w, const std::map<std::string, std::vector<std::string>>& elems,
               const OracleOptions& options) {
        for (const auto& [name, p] : s.predicates) {
            std::vector<const std::vector<std::string>*> lists;
            bool empty = false;
            for (const auto& d : p.arg_domains) {
                auto it = elems.find(d);
                if (it == elems.end()) throw Error("no size given for domain '" + d + "'");
                lists.push_back(&it->second);
                if (it->second.empty()) empty = true;
            }
            if (empty) continue;
            std::vector<std::size_t> idx(lists.size(), 0);
            while (true) {
                std::vector<std::string> tuple;
                for (std::size_t i = 0; i < lists.size(); ++i) tuple.push_back((*lists[i])[idx[i]]);
                if (names.size() >= options.max_atoms)
                    throw OracleGuardExceeded("more than " + std::to_string(options.max_atoms) + " ground atoms");
                index[atom_key(name, tuple)] = names.size();
                names.push_back(atom_key(name, tuple));
                weights.push_back(weight_of(w, name));
                std::size_t k = 0;
                for (; k < idx.size(); ++k) {
                    if (++idx[k] < lists[k]->size()) break;
                    idx[k] = 0;
                }
                if (k == idx.size()) break;
            }
        }
        if (names.size() >= 64 || (std::uint64_t{1} << names.size()) > options.max_structures)
            throw OracleGuardExceeded("2^" + std::to_string(names.size()) + " structures exceed the limit of " +
                                      std::to_string(options.max_structures));
    }

    std::size_t lookup(const std::string& predicate, const std::vector<std::string>& tuple) const {
        auto it = index.find(atom_key(predicate, tuple));
        if (it == index.end()) throw SortError("ground atom " + atom_key(predicate, tuple) + " is outside its domains");
        return it->second;
    }
};

// Sums model weights over all structures accepted by `is_model`.
mpz_class enumerate(const std::vector<Weight>& weights, const std::function<bool(std::uint64_t)>& is_model) {
    const std::size_t n = weights.size();
    bool unit = std::all_of(weights.begin(), weights.end(), [](const Weight& w) {
        return w.positive >= -1 && w.positive <= 1 && w.negative >= -1 && w.negative <= 1;
    });
    std::uint64_t pos_neg = 0, neg_neg = 0, pos_zero = 0, neg_zero = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (weights[i].positive == -1) pos_neg |= std::uint64_t{1} << i;
        if (weights[i].negative == -1) neg_neg |= std::uint64_t{1} << i;
        if (weights[i].positive == 0) pos_zero |= std::uint64_t{1} << i;
        if (weights[i].negative == 0) neg_zero |= std::uint64_t{1} << i;
    }
    const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    const std::uint64_t count = std::uint64_t{1} << n;
    mpz_class total = 0;
    std::int64_t fast = 0;
    for (std::uint64_t m = 0; m < count; ++m) {
        if (!is_model(m)) continue;
        if (unit) {
            std::uint64_t off = ~m & all;
            if ((m & pos_zero) || (off & neg_zero)) continue;
            int negatives = std::popcount(m & pos_neg) + std::popcount(off & neg_neg);
            fast += (negatives % 2) ? -1 : 1;
        } else {
            mpz_class w = 1;
            for (std::size_t i = 0; i < n; ++i)
                w *= ((m >> i) & 1) ? weights[i].positive : weights[i].negative;
            total += w;
        }
    }
    if (unit) total = mpz_class(static_cast<long>(fast));
    return total;
}

// Propositional formula over ground atoms.
struct GNode {
    enum class Kind : std::uint8_t { True, False, Atom, Not, And, Or } kind;
    std::size_t atom = 0;
    std::vector<int> children;
};

class FormulaGrounder {
public:
    FormulaGrounder(const AtomTable& table, const std::map<std::string, std::vector<std::string>>& elems)
        : table_(table), elems_(elems) {}

    int ground(const FormulaPtr& f, std::map<std::string, std::string>& env) {
        using K = Formula::Kind;
        switch (f->kind) {
            case K::Atom: {
                std::vector<std::string> tuple;
                for (const auto& t : f->atom.args) tuple.push_back(t.is_variable() ? env.at(t.name) : t.name);
                if (f->atom.is_equality()) return constant(tuple[0] == tuple[1]);
                return add({GNode::Kind::Atom, table_.lookup(f->atom.predicate, tuple), {}});
            }
            case K::Not: {
                int c = ground(f->left, env);
                if (nodes_[c].kind == GNode::Kind::True) return constant(false);
                if (nodes_[c].kind == GNode::Kind::False) return constant(true);
                return add({GNode::Kind::Not, 0, {c}});
            }
            case K::And:
                return combine(true, {ground(f->left, env), ground(f->right, env)});
            case K::Or:
                return combine(false, {ground(f->left, env), ground(f->right, env)});
            case K::Implies: {
                int a = ground(f->left, env);
                int b = ground(f->right, env);
                return combine(false, {negate(a), b});
            }
            case K::Iff: {
                int a = ground(f->left, env);
                int b = ground(f->right, env);
                return combine(false, {combine(true, {a, b}), combine(true, {negate(a), negate(b)})});
            }
            case K::Forall:
            case K::Exists: {
                auto it = elems_.find(f->domain);
                if (it == elems_.end()) throw Error("no size given for domain '" + f->domain + "'");
                std::vector<int> parts;
                auto saved = env.find(f->var) == env.end() ? std::optional<std::string>{} : env[f->var];
                for (const auto& e : it->second) {
                    env[f->var] = e;
                    parts.push_back(ground(f->left, env));
                }
                if (saved) env[f->var] = *saved; else env.erase(f->var);
                return combine(f->kind == K::Forall, parts);
            }
        }
        throw InternalError("unknown formula kind");
    }

    bool eval(int node, std::uint64_t m) const {
        const auto& g = nodes_[node];
        switch (g.kind) {
            case GNode::Kind::True: return true;
            case GNode::Kind::False: return false;
            case GNode::Kind::Atom: return (m >> g.atom) & 1;
            case GNode::Kind::Not: return !eval(g.children[0], m);
            case GNode::Kind::And:
                for (int c : g.children)
                    if (!eval(c, m)) return false;
                return true;
            case GNode::Kind::Or:
                for (int c : g.children)
                    if (eval(c, m)) return true;
                return false;
        }
        return false;
    }

private:
    int add(GNode n) {
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size() - 1);
    }
    int constant(bool v) { return add({v ? GNode::Kind::True : GNode::Kind::False, 0, {}}); }
    int negate(int c) {
        if (nodes_[c].kind == GNode::Kind::True) return constant(false);
        if (nodes_[c].kind == GNode::Kind::False) return constant(true);
        return add({GNode::Kind::Not, 0, {c}});
    }
    int combine(bool conj, const std::vector<int>& parts) {
        std::vector<int> kept;
        for (int p : parts) {
            auto k = nodes_[p].kind;
            if (k == (conj ? GNode::Kind::False : GNode::Kind::True)) return constant(!conj);
            if (k == (conj ? GNode::Kind::True : GNode::Kind::False)) continue;
            kept.push_back(p);
        }
        if (kept.empty()) return constant(conj);
        if (kept.size() == 1) return kept[0];
        return add({conj ? GNode::Kind::And : GNode::Kind::Or, 0, std::move(kept)});
    }

    const AtomTable& table_;
    const std::map<std::string, std::vector<std::string>>& elems_;
    std::vector<GNode> nodes_;
};

}  // namespace

std::map<std::string, std::vector<std::string>> domain_elements(const Sentence& s, const DomainSizes& sizes) {
    std::set<std::string> relevant;
    for (const auto& d : s.used_domains()) {
        std::string cur = d;
        for (std::size_t guard = 0; guard <= s.domains.size(); ++guard) {
            relevant.insert(cur);
            auto it = s.domains.find(cur);
            if (it == s.domains.end() || !it->second.parent) break;
            cur = *it->second.parent;
        }
    }
    for (const auto& [name, _] : s.domains) {
        bool known;
        size_of(s, sizes, name, known);
        if (known) relevant.insert(name);
    }

    std::map<std::string, std::vector<std::string>> children;
    for (const auto& d : relevant) {
        auto it = s.domains.find(d);
        if (it != s.domains.end() && it->second.parent && relevant.count(*it->second.parent))
            children[*it->second.parent].push_back(d);
    }
    std::map<std::string, std::vector<std::string>> constants;
    for (const auto& [c, d] : s.constants) constants[d].push_back(c);

    std::map<std::string, std::vector<std::string>> out;
    std::function<const std::vector<std::string>&(const std::string&)> build =
        [&](const std::string& d) -> const std::vector<std::string>& {
        if (auto it = out.find(d); it != out.end()) return it->second;
        std::vector<std::string> list;
        for (const auto& c : children[d]) {
            const auto& sub = build(c);
            list.insert(list.end(), sub.begin(), sub.end());
        }
        for (const auto& c : constants[d]) list.push_back(c);
        bool known;
        std::uint64_t n = size_of(s, sizes, d, known);
        if (!known) {
            if (!constants[d].empty() || !children[d].empty())
                n = list.size();
            else
                throw Error("no size given for domain '" + d + "'");
        }
        if (n < list.size())
            throw Error("domain '" + d + "' of size " + std::to_string(n) + " cannot hold its " +
                        std::to_string(list.size()) + " constants and subdomain elements");
        for (std::size_t i = list.size(), k = 1; i < n; ++i, ++k) list.push_back(d + "#" + std::to_string(k));
        return out[d] = std::move(list);
    };
    for (const auto& d : relevant) build(d);
    return out;
}

GroundProblem ground(const WfomcInstance& instance, const OracleOptions& options) {
    const Sentence& s = instance.sentence;
    auto elems = domain_elements(s, instance.sizes);
    AtomTable table;
    table.build(s, instance.weights, elems, options);

    GroundProblem out;
    out.atoms = table.names;
    out.weights = table.weights;
    for (const auto& clause : s.clauses) {
        std::vector<std::pair<std::string, const std::vector<std::string>*>> vars;
        bool vacuous = false;
        for (const auto& [v, d] : clause.binders) {
            auto it = elems.find(d);
            if (it == elems.end()) throw Error("no size given for domain '" + d + "'");
            if (it->second.empty()) vacuous = true;
            vars.emplace_back(v, &it->second);
        }
        if (vacuous) continue;
        std::vector<std::size_t> idx(vars.size(), 0);
        std::map<std::string, std::string> env;
        while (true) {
            for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i].first] = (*vars[i].second)[idx[i]];
            GroundClause g;
            bool satisfied = false;
            for (const auto& lit : clause.literals) {
                std::vector<std::string> tuple;
                for (const auto& t : lit.atom.args) tuple.push_back(t.is_variable() ? env.at(t.name) : t.name);
                if (lit.atom.is_equality()) {
                    if ((tuple[0] == tuple[1]) == lit.positive) satisfied = true;
                    continue;
                }
                std::uint64_t bit = std::uint64_t{1} << table.lookup(lit.atom.predicate, tuple);
                (lit.positive ? g.positive : g.negative) |= bit;
            }
            if (!satisfied && !(g.positive & g.negative)) {
                if (g.positive == 0 && g.negative == 0) out.contradiction = true;
                out.clauses.push_back(g);
            }
            std::size_t k = 0;
            for (; k < idx.size(); ++k) {
                if (++idx[k] < vars[k].second->size()) break;
                idx[k] = 0;
            }
            if (k == idx.size()) break;
        }
    }
    std::sort(out.clauses.begin(), out.clauses.end(), [](const GroundClause& a, const GroundClause& b) {
        return std::pair(a.positive, a.negative) < std::pair(b.positive, b.negative);
    });
    out.clauses.erase(std::unique(out.clauses.begin(), out.clauses.end(),
                                  [](const GroundClause& a, const GroundClause& b) {
                                      return a.positive == b.positive && a.negative == b.negative;
                                  }),
                      out.clauses.end());
    return out;
}

mpz_class brute_force_wfomc(const WfomcInstance& instance, const OracleOptions& options) {
    GroundProblem g = ground(instance, options);
    if (g.contradiction) return 0;
    return enumerate(g.weights, [&](std::uint64_t m) {
        for (const auto& c : g.clauses)
            if (!(m & c.positive) && !(~m & c.negative)) return false;
        return true;
    });
}

mpz_class brute_force_wfomc(const InstanceAst& instance, const DomainSizes& sizes, const OracleOptions& options) {
    Sentence vocab = instance.vocabulary();
    DomainSizes all = instance.sizes();
    for (const auto& [d, n] : sizes) all[d] = n;
    auto elems = domain_elements(vocab, all);
    AtomTable table;
    table.build(vocab, instance.weights(), elems, options);
    auto formula = instance.conjunction();
    if (!formula) return enumerate(table.weights, [](std::uint64_t) { return true; });
    FormulaGrounder grounder(table, elems);
    std::map<std::string, std::string> env;
    int root = grounder.ground(formula, env);
    return enumerate(table.weights, [&](std::uint64_t m) { return grounder.eval(root, m); });
}

}  // namespace fomc
