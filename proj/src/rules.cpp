#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "compiler_internal.hpp"

namespace fomc::detail {

std::string Namer::function() {
    static const char* letters[] = {"g", "h"};
    std::size_t i = functions_++;
    if (i == 0) return "f";
    --i;
    std::string name = letters[i % 2];
    if (i >= 2) name += std::to_string(i / 2);
    return name;
}

Expr hole(std::size_t i) { return Expr::variable("#" + std::to_string(i)); }

// Plain replacement: a hole under a sum is meant to see the sum's index.
Expr fill(const Expr& e, const std::vector<Expr>& children) {
    using K = Expr::Kind;
    auto each = [&]() {
        std::vector<Expr> out;
        for (const auto& c : e.children()) out.push_back(fill(c, children));
        return out;
    };
    switch (e.kind()) {
        case K::Const:
            return e;
        case K::Var:
            if (e.name().size() > 1 && e.name()[0] == '#') return children.at(std::stoul(e.name().substr(1)));
            return e;
        case K::Indicator:
            return Expr::indicator(e.low(), fill(e[0], children), e.high());
        case K::Binom:
            return Expr::binom(fill(e[0], children), fill(e[1], children));
        case K::Pow:
            return Expr::pow(fill(e[0], children), fill(e[1], children));
        case K::Add:
            return Expr::add(each());
        case K::Mul:
            return Expr::mul(each());
        case K::Sum:
            return Expr::sum(e.name(), fill(e[0], children), fill(e[1], children), fill(e[2], children));
        case K::Call:
            return Expr::call(e.name(), each());
    }
    throw InternalError("unknown expression kind");
}

std::string describe(const Node& node) {
    std::ostringstream os;
    for (const auto& [d, e] : node.size) os << "|" << d << "| = " << to_string(e) << "\n";
    for (const auto& [name, p] : node.s.predicates) {
        Weight w = weight_of(node.w, name);
        if (w == Weight{}) continue;
        os << "w(" << name << ") = (" << w.positive << ", " << w.negative << ")\n";
    }
    os << to_string(node.s);
    return os.str();
}

namespace {

Expr product_of_sizes(const Node& node, const std::vector<std::string>& domains) {
    std::vector<Expr> fs;
    for (const auto& d : domains) fs.push_back(node.size.at(d));
    if (fs.empty()) return Expr::constant(1L);
    if (fs.size() == 1) return fs[0];
    return Expr::mul(std::move(fs));
}

Expr power(long base, const Expr& exponent) { return Expr::pow(Expr::constant(base), exponent); }

Literal make_literal(Atom atom, bool positive) {
    if (atom.is_equality() && atom.args[1] < atom.args[0]) std::swap(atom.args[0], atom.args[1]);
    return {std::move(atom), positive};
}

// Removes domains no clause or predicate refers to.
void prune_domains(Node& node) {
    auto used = node.s.used_domains();
    for (auto it = node.s.domains.begin(); it != node.s.domains.end();) {
        if (used.count(it->first)) {
            ++it;
        } else {
            node.size.erase(it->first);
            it = node.s.domains.erase(it);
        }
    }
    for (auto it = node.size.begin(); it != node.size.end();) {
        if (node.s.domains.count(it->first)) ++it;
        else it = node.size.erase(it);
    }
    for (auto it = node.w.begin(); it != node.w.end();) {
        if (node.s.predicates.count(it->first)) ++it;
        else it = node.w.erase(it);
    }
}

// Drops a domain and everything that mentions it, as if it were empty.
void remove_domain(Node& node, const std::string& domain) {
    std::vector<Clause> kept;
    for (const auto& c : node.s.clauses) {
        bool mentions = std::any_of(c.binders.begin(), c.binders.end(), [&](const auto& b) { return b.second == domain; });
        if (!mentions) kept.push_back(c);
    }
    node.s.set_clauses(std::move(kept));
    for (auto it = node.s.predicates.begin(); it != node.s.predicates.end();) {
        const auto& ds = it->second.arg_domains;
        if (std::find(ds.begin(), ds.end(), domain) != ds.end()) it = node.s.predicates.erase(it);
        else ++it;
    }
    node.s.domains.erase(domain);
    node.size.erase(domain);
    prune_domains(node);
}

template <typename F>
void for_each_choice(const std::vector<std::vector<std::string>>& options, F&& f) {
    std::vector<std::size_t> idx(options.size(), 0);
    for (const auto& o : options)
        if (o.empty()) return;
    while (true) {
        std::vector<std::string> pick;
        pick.reserve(options.size());
        for (std::size_t i = 0; i < options.size(); ++i) pick.push_back(options[i][idx[i]]);
        f(pick);
        std::size_t i = 0;
        for (; i < options.size(); ++i) {
            if (++idx[i] < options[i].size()) break;
            idx[i] = 0;
        }
        if (i == options.size()) return;
    }
}

}  // namespace

Node normalize(Node node, Namer& namer) {
    Sentence& s = node.s;
    for (const auto& [name, d] : s.domains)
        if (!node.size.count(name)) {
            if (auto it = s.fixed_sizes.find(name); it != s.fixed_sizes.end())
                node.size[name] = Expr::constant(static_cast<long>(it->second));
            else
                throw InternalError("no size for domain '" + name + "'");
        }
    s.fixed_sizes.clear();

    if (!s.constants.empty()) {
        std::map<std::string, std::string> cell_of;
        for (const auto& [c, d] : s.constants) {
            std::string cell = namer.domain(d);
            s.add_domain({cell, d});
            node.size[cell] = Expr::constant(1L);
            cell_of[c] = cell;
        }
        std::vector<Clause> out;
        for (const auto& cl : s.clauses) {
            auto binders = cl.binders;
            std::map<std::string, std::string> var_of;
            std::vector<Literal> lits;
            for (const auto& l : cl.literals) {
                Atom a = l.atom;
                for (auto& t : a.args) {
                    if (!t.is_constant()) continue;
                    auto [it, inserted] = var_of.emplace(t.name, "");
                    if (inserted) {
                        it->second = namer.variable(t.name);
                        binders[it->second] = cell_of.at(t.name);
                    }
                    t = Term::variable(it->second, cell_of.at(t.name));
                }
                lits.push_back({std::move(a), l.positive});
            }
            out.emplace_back(std::move(binders), std::move(lits));
        }
        s.constants.clear();
        s.set_clauses(std::move(out));
    }

    std::map<std::string, std::vector<std::string>> children;
    for (const auto& [name, d] : s.domains)
        if (d.parent) children[*d.parent].push_back(name);

    if (!children.empty()) {
        std::map<std::string, std::vector<std::string>> cells;
        std::map<std::string, Expr> cell_size;
        std::function<const std::vector<std::string>&(const std::string&)> cells_of =
            [&](const std::string& d) -> const std::vector<std::string>& {
            if (auto it = cells.find(d); it != cells.end()) return it->second;
            std::vector<std::string> out;
            auto ch = children.find(d);
            if (ch == children.end()) {
                out.push_back(d);
                cell_size[d] = node.size.at(d);
            } else {
                std::vector<Expr> remainder{node.size.at(d)};
                for (const auto& c : ch->second) {
                    const auto& sub = cells_of(c);
                    out.insert(out.end(), sub.begin(), sub.end());
                    remainder.push_back(Expr::mul({Expr::constant(-1L), node.size.at(c)}));
                }
                out.push_back(d);
                cell_size[d] = simplify(Expr::add(std::move(remainder)));
            }
            return cells[d] = std::move(out);
        };
        for (const auto& [name, _] : s.domains) cells_of(name);

        Sentence out;
        std::map<std::pair<std::string, std::vector<std::string>>, std::string> split;
        Weights weights;
        for (const auto& [name, p] : s.predicates) {
            std::vector<std::vector<std::string>> options;
            for (const auto& d : p.arg_domains) options.push_back(cells.at(d));
            for_each_choice(options, [&](const std::vector<std::string>& pick) {
                std::string fresh = pick == p.arg_domains ? name : namer.predicate(name);
                split[{name, pick}] = fresh;
                out.add_predicate({fresh, pick});
                if (auto w = node.w.find(name); w != node.w.end()) weights[fresh] = w->second;
            });
        }
        std::vector<Clause> clauses;
        for (const auto& cl : s.clauses) {
            std::vector<std::string> vars;
            std::vector<std::vector<std::string>> options;
            for (const auto& [v, d] : cl.binders) {
                vars.push_back(v);
                options.push_back(cells.at(d));
            }
            for_each_choice(options, [&](const std::vector<std::string>& pick) {
                std::map<std::string, std::string> binders;
                for (std::size_t i = 0; i < vars.size(); ++i) binders[vars[i]] = pick[i];
                std::vector<Literal> lits;
                for (const auto& l : cl.literals) {
                    Atom a = l.atom;
                    for (auto& t : a.args) t.domain = binders.at(t.name);
                    if (a.is_equality()) {
                        if (a.args[0].domain != a.args[1].domain) {
                            if (!l.positive) return;  // x != y across cells holds
                            continue;
                        }
                    } else {
                        std::vector<std::string> ds;
                        for (const auto& t : a.args) ds.push_back(t.domain);
                        a.predicate = split.at({a.predicate, ds});
                    }
                    lits.push_back({std::move(a), l.positive});
                }
                clauses.emplace_back(std::move(binders), std::move(lits));
            });
        }
        out.set_clauses(std::move(clauses));
        for (const auto& [name, d] : s.domains) out.add_domain({name, std::nullopt});
        node.s = std::move(out);
        node.w = std::move(weights);
        node.size = std::move(cell_size);
    }

    for (const auto& [name, e] : std::map<std::string, Expr>(node.size)) {
        if (!e.is_const()) continue;
        if (e.value() < 0) throw Error("domain '" + name + "' has negative size " + e.value().get_str());
        if (e.value() == 0) remove_domain(node, name);
    }
    prune_domains(node);
    return node;
}

namespace {

bool drop_tautologies(Node& node) {
    bool changed = false;
    std::vector<Clause> out;
    for (const auto& c : node.s.clauses) {
        std::vector<Literal> lits;
        bool tautology = false;
        bool edited = false;
        for (const auto& l : c.literals) {
            if (l.atom.is_equality() && l.atom.args[0] == l.atom.args[1]) {
                edited = true;
                if (l.positive) tautology = true;
                continue;
            }
            Literal canon = make_literal(l.atom, l.positive);
            if (!(canon == l)) edited = true;
            lits.push_back(canon);
        }
        Clause nc(c.binders, std::move(lits));
        for (std::size_t i = 0; i + 1 < nc.literals.size() && !tautology; ++i)
            for (std::size_t j = i + 1; j < nc.literals.size(); ++j)
                if (nc.literals[i].atom == nc.literals[j].atom && nc.literals[i].positive != nc.literals[j].positive) {
                    tautology = true;
                    break;
                }
        if (tautology) {
            changed = true;
            continue;
        }
        if (edited) changed = true;
        out.push_back(std::move(nc));
    }
    if (changed) node.s.set_clauses(std::move(out));
    return changed;
}

bool drop_free_predicates(Node& node, std::vector<Expr>& factors) {
    auto used = node.s.used_predicates();
    bool changed = false;
    for (auto it = node.s.predicates.begin(); it != node.s.predicates.end();) {
        if (used.count(it->first)) {
            ++it;
            continue;
        }
        Weight w = weight_of(node.w, it->first);
        long total = w.positive + w.negative;
        if (total != 1) factors.push_back(power(total, product_of_sizes(node, it->second.arg_domains)));
        node.w.erase(it->first);
        it = node.s.predicates.erase(it);
        changed = true;
    }
    return changed;
}

// Fixes every atom of `pred` to `value` and simplifies clauses accordingly.
void assign_predicate(Node& node, const std::string& pred, bool value) {
    std::vector<Clause> out;
    for (const auto& c : node.s.clauses) {
        std::vector<Literal> lits;
        bool satisfied = false;
        for (const auto& l : c.literals) {
            if (!l.atom.is_equality() && l.atom.predicate == pred) {
                if (l.positive == value) satisfied = true;
                continue;
            }
            lits.push_back(l);
        }
        if (!satisfied) out.emplace_back(c.binders, std::move(lits));
    }
    node.s.set_clauses(std::move(out));
    node.s.predicates.erase(pred);
    node.w.erase(pred);
}

bool unit_propagate(Node& node, std::vector<Expr>& factors, std::vector<std::string>& rules) {
    for (const auto& c : node.s.clauses) {
        if (c.literals.size() != 1) continue;
        const Literal& l = c.literals[0];
        if (l.atom.is_equality()) continue;
        std::set<std::string> vars;
        for (const auto& t : l.atom.args) vars.insert(t.name);
        if (vars.size() != l.atom.args.size() || c.binders.size() != vars.size()) continue;
        std::string pred = l.atom.predicate;
        const auto& p = node.s.predicates.at(pred);
        Weight w = weight_of(node.w, pred);
        long value = l.positive ? w.positive : w.negative;
        if (value != 1) factors.push_back(power(value, product_of_sizes(node, p.arg_domains)));
        assign_predicate(node, pred, l.positive);
        rules.push_back("UnitPropagation");
        return true;
    }
    return false;
}

// Smallest number of colours for the conflict graph over `n` vertices.
std::size_t chromatic_number(std::size_t n, const std::set<std::pair<std::size_t, std::size_t>>& edges) {
    if (n == 0) return 0;
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::size_t> colour(n, 0);
        std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
            if (i == n) return true;
            for (std::size_t c = 0; c < k; ++c) {
                bool ok = true;
                for (std::size_t j = 0; j < i && ok; ++j)
                    if (colour[j] == c && (edges.count({j, i}) || edges.count({i, j}))) ok = false;
                if (!ok) continue;
                colour[i] = c;
                if (place(i + 1)) return true;
            }
            return false;
        };
        if (place(0)) return k;
    }
    return n;
}

// A clause made only of equalities constrains the sizes alone. Returns the
// factor [the clause holds], or nullopt if the clause always holds.
std::optional<Expr> equality_clause_factor(const Node& node, const Clause& c) {
    std::map<std::string, std::vector<std::string>> by_domain;
    for (const auto& [v, d] : c.binders) by_domain[d].push_back(v);
    std::vector<Expr> violated;  // per-domain conditions for a falsifying assignment
    std::vector<std::pair<std::string, std::int64_t>> thresholds;
    for (const auto& [d, vars] : by_domain) {
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = i;
        std::vector<std::size_t> parent(vars.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (const auto& l : c.literals) {
            if (l.positive || l.atom.args[0].domain != d) continue;
            parent[find(index.at(l.atom.args[0].name))] = find(index.at(l.atom.args[1].name));
        }
        std::map<std::size_t, std::size_t> cls;
        for (std::size_t i = 0; i < vars.size(); ++i) cls.emplace(find(i), cls.size());
        std::set<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& l : c.literals) {
            if (!l.positive || l.atom.args[0].domain != d) continue;
            std::size_t a = cls.at(find(index.at(l.atom.args[0].name)));
            std::size_t b = cls.at(find(index.at(l.atom.args[1].name)));
            if (a == b) return std::nullopt;
            edges.insert({std::min(a, b), std::max(a, b)});
        }
        std::int64_t t = static_cast<std::int64_t>(std::max<std::size_t>(1, chromatic_number(cls.size(), edges)));
        thresholds.push_back({d, t});
    }
    if (thresholds.empty()) return Expr::constant(0L);
    if (thresholds.size() == 1)
        return Expr::indicator(0, node.size.at(thresholds[0].first), thresholds[0].second - 1);
    std::vector<Expr> all;
    for (const auto& [d, t] : thresholds) all.push_back(Expr::indicator(t, node.size.at(d), std::nullopt));
    return Expr::add({Expr::constant(1L), Expr::mul({Expr::constant(-1L), Expr::mul(std::move(all))})});
}

bool drop_equality_clauses(Node& node, std::vector<Expr>& factors, std::vector<std::string>& rules) {
    bool changed = false;
    std::vector<Clause> out;
    for (const auto& c : node.s.clauses) {
        bool only_equalities =
            std::all_of(c.literals.begin(), c.literals.end(), [](const Literal& l) { return l.atom.is_equality(); });
        if (!only_equalities) {
            out.push_back(c);
            continue;
        }
        if (auto f = equality_clause_factor(node, c)) factors.push_back(*f);
        changed = true;
    }
    if (changed) {
        node.s.set_clauses(std::move(out));
        rules.push_back("EqualityConstraint");
    }
    return changed;
}

bool eliminate_singleton(Node& node, Namer& namer, std::vector<std::string>& rules) {
    std::string target;
    for (const auto& [d, e] : node.size)
        if (e.is_const(1)) {
            target = d;
            break;
        }
    if (target.empty()) return false;

    std::map<std::string, std::string> renamed;
    Sentence& s = node.s;
    std::vector<Predicate> preds;
    for (auto it = s.predicates.begin(); it != s.predicates.end();) {
        const auto& ds = it->second.arg_domains;
        if (std::find(ds.begin(), ds.end(), target) == ds.end()) {
            ++it;
            continue;
        }
        std::vector<std::string> rest;
        for (const auto& d : ds)
            if (d != target) rest.push_back(d);
        std::string fresh = namer.predicate(it->first);
        renamed[it->first] = fresh;
        preds.push_back({fresh, rest});
        if (auto w = node.w.find(it->first); w != node.w.end()) node.w[fresh] = w->second;
        node.w.erase(it->first);
        it = s.predicates.erase(it);
    }
    for (const auto& p : preds) s.add_predicate(p);

    std::vector<Clause> out;
    for (const auto& c : s.clauses) {
        std::map<std::string, std::string> binders;
        for (const auto& [v, d] : c.binders)
            if (d != target) binders[v] = d;
        std::vector<Literal> lits;
        bool satisfied = false;
        for (const auto& l : c.literals) {
            Atom a = l.atom;
            if (a.is_equality()) {
                if (a.args[0].domain == target) {
                    if (l.positive) satisfied = true;
                    continue;
                }
            } else if (auto it = renamed.find(a.predicate); it != renamed.end()) {
                a.predicate = it->second;
                std::vector<Term> args;
                for (const auto& t : a.args)
                    if (t.domain != target) args.push_back(t);
                a.args = std::move(args);
            }
            lits.push_back({std::move(a), l.positive});
        }
        if (!satisfied) out.emplace_back(std::move(binders), std::move(lits));
    }
    s.set_clauses(std::move(out));
    s.domains.erase(target);
    node.size.erase(target);
    rules.push_back("SingletonElimination");
    return true;
}

bool drop_unused_binders_on_nonempty(Node& node) {
    bool changed = false;
    std::vector<Clause> out;
    for (const auto& c : node.s.clauses) {
        auto used = c.used_variables();
        std::map<std::string, std::string> binders;
        for (const auto& [v, d] : c.binders) {
            bool nonempty = node.size.at(d).is_const() && node.size.at(d).value() >= 1;
            if (used.count(v) || !nonempty) binders[v] = d;
            else changed = true;
        }
        out.emplace_back(std::move(binders), c.literals);
    }
    if (changed) node.s.set_clauses(std::move(out));
    return changed;
}

}  // namespace

Reduction reduce(Node node, Namer& namer) {
    Reduction r;
    bool changed = true;
    while (changed) {
        changed = false;
        if (drop_tautologies(node)) {
            r.rules.push_back("TautologyRemoval");
            changed = true;
        }
        for (const auto& c : node.s.clauses)
            if (c.literals.empty() && c.binders.empty()) {
                r.rules.push_back("Contradiction");
                r.zero = true;
                r.node = std::move(node);
                return r;
            }
        if (drop_free_predicates(node, r.factors)) {
            r.rules.push_back("FreePredicate");
            changed = true;
        }
        if (unit_propagate(node, r.factors, r.rules)) {
            changed = true;
            continue;
        }
        if (drop_equality_clauses(node, r.factors, r.rules)) changed = true;
        if (eliminate_singleton(node, namer, r.rules)) changed = true;
        if (drop_unused_binders_on_nonempty(node)) changed = true;
        prune_domains(node);
    }
    for (const auto& f : r.factors)
        if (f.is_const(0)) r.zero = true;
    r.node = std::move(node);
    return r;
}

namespace {

Node restrict_to(const Node& node, std::vector<Clause> clauses) {
    Node out;
    out.s.set_clauses(std::move(clauses));
    for (const auto& p : out.s.used_predicates()) {
        out.s.add_predicate(node.s.predicates.at(p));
        if (auto w = node.w.find(p); w != node.w.end()) out.w[p] = w->second;
    }
    for (const auto& d : out.s.used_domains()) {
        out.s.add_domain(node.s.domains.at(d));
        out.size[d] = node.size.at(d);
    }
    return out;
}

std::optional<Option> independence(const Node& node) {
    const auto& cs = node.s.clauses;
    std::vector<std::size_t> parent(cs.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::map<std::string, std::size_t> owner;
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (const auto& l : cs[i].literals) {
            if (l.atom.is_equality()) continue;
            auto [it, inserted] = owner.emplace(l.atom.predicate, i);
            if (!inserted) parent[find(i)] = find(it->second);
        }
    std::map<std::size_t, std::vector<Clause>> groups;
    for (std::size_t i = 0; i < cs.size(); ++i) groups[find(i)].push_back(cs[i]);
    if (groups.size() < 2) return std::nullopt;
    Option o;
    o.rule = "Independence";
    o.greedy = true;
    std::vector<Expr> holes;
    for (auto& [_, g] : groups) {
        holes.push_back(hole(o.children.size()));
        o.children.push_back(restrict_to(node, std::move(g)));
    }
    o.skeleton = Expr::mul(std::move(holes));
    return o;
}

std::optional<Option> emptiness_split(const Node& node) {
    std::string target;
    for (const auto& c : node.s.clauses) {
        auto used = c.used_variables();
        for (const auto& [v, d] : c.binders)
            if (!used.count(v) && !node.size.at(d).is_const()) {
                target = d;
                break;
            }
        if (!target.empty()) break;
    }
    if (target.empty()) return std::nullopt;
    Option o;
    o.rule = "EmptinessSplit";
    o.greedy = true;
    o.domain = target;
    Node empty = node;
    remove_domain(empty, target);
    Node nonempty = node;
    std::vector<Clause> out;
    for (const auto& c : node.s.clauses) {
        auto used = c.used_variables();
        std::map<std::string, std::string> binders;
        for (const auto& [v, d] : c.binders)
            if (used.count(v) || d != target) binders[v] = d;
        out.emplace_back(std::move(binders), c.literals);
    }
    nonempty.s.set_clauses(std::move(out));
    prune_domains(nonempty);
    const Expr& s = node.size.at(target);
    o.children = {std::move(empty), std::move(nonempty)};
    o.skeleton = Expr::add({Expr::mul({Expr::indicator(0, s, 0), hole(0)}),
                            Expr::mul({Expr::indicator(1, s, std::nullopt), hole(1)})});
    return o;
}

Option shannon(const Node& node, const std::string& name) {
    {
        Weight w = weight_of(node.w, name);
        Node yes = node;
        assign_predicate(yes, name, true);
        prune_domains(yes);
        Node no = node;
        assign_predicate(no, name, false);
        prune_domains(no);
        Option o;
        o.rule = "Shannon";
        o.greedy = true;
        o.children = {std::move(yes), std::move(no)};
        o.skeleton = Expr::add({Expr::mul({Expr::constant(w.positive), hole(0)}),
                                Expr::mul({Expr::constant(w.negative), hole(1)})});
        return o;
    }
}

}  // namespace

std::optional<Option> branching_option(const Node& node, Namer&) {
    if (auto o = independence(node)) return o;
    if (auto o = emptiness_split(node)) return o;
    for (const auto& [name, p] : node.s.predicates)
        if (p.arity() == 0) return shannon(node, name);
    return std::nullopt;
}

namespace {

std::optional<Option> partial_grounding(const Node& node, const std::string& x, Namer& namer) {
    std::map<std::string, std::size_t> position;
    for (const auto& [name, p] : node.s.predicates) {
        auto n = std::count(p.arg_domains.begin(), p.arg_domains.end(), x);
        if (n != 1) return std::nullopt;
        position[name] =
            static_cast<std::size_t>(std::find(p.arg_domains.begin(), p.arg_domains.end(), x) - p.arg_domains.begin());
    }
    for (const auto& c : node.s.clauses) {
        std::string var;
        for (const auto& [v, d] : c.binders)
            if (d == x) {
                if (!var.empty()) return std::nullopt;
                var = v;
            }
        if (var.empty()) return std::nullopt;
        for (const auto& l : c.literals) {
            if (l.atom.is_equality()) {
                if (l.atom.args[0].domain == x) return std::nullopt;
                continue;
            }
            if (l.atom.args[position.at(l.atom.predicate)].name != var) return std::nullopt;
        }
    }
    Node child;
    std::map<std::string, std::string> renamed;
    for (const auto& [name, p] : node.s.predicates) {
        std::vector<std::string> rest = p.arg_domains;
        rest.erase(rest.begin() + static_cast<long>(position.at(name)));
        std::string fresh = namer.predicate(name);
        renamed[name] = fresh;
        child.s.add_predicate({fresh, rest});
        if (auto w = node.w.find(name); w != node.w.end()) child.w[fresh] = w->second;
    }
    std::vector<Clause> clauses;
    for (const auto& c : node.s.clauses) {
        std::map<std::string, std::string> binders;
        for (const auto& [v, d] : c.binders)
            if (d != x) binders[v] = d;
        std::vector<Literal> lits;
        for (const auto& l : c.literals) {
            Atom a = l.atom;
            if (!a.is_equality()) {
                a.args.erase(a.args.begin() + static_cast<long>(position.at(a.predicate)));
                a.predicate = renamed.at(a.predicate);
            }
            lits.push_back({std::move(a), l.positive});
        }
        clauses.emplace_back(std::move(binders), std::move(lits));
    }
    child.s.set_clauses(std::move(clauses));
    for (const auto& [d, dom] : node.s.domains)
        if (d != x) {
            child.s.add_domain(dom);
            child.size[d] = node.size.at(d);
        }
    prune_domains(child);
    Option o;
    o.rule = "IndependentPartialGrounding";
    o.domain = x;
    o.children = {std::move(child)};
    o.skeleton = Expr::pow(hole(0), node.size.at(x));
    return o;
}

std::string fresh_index(const std::set<std::string>& reserved) {
    static const char* pool[] = {"l", "k", "j", "i"};
    for (std::size_t round = 0;; ++round)
        for (const char* p : pool) {
            std::string name = round == 0 ? std::string(p) : std::string(p) + std::to_string(round);
            if (!reserved.count(name)) return name;
        }
}

Option atom_counting(const Node& node, const std::string& pred, Namer& namer, const std::set<std::string>& reserved) {
    const std::string& x = node.s.predicates.at(pred).arg_domains[0];
    std::string k = fresh_index(reserved);
    const Expr& s = node.size.at(x);
    Node child = node;
    std::string top = namer.domain(x);
    std::string bottom = namer.domain(x);
    child.s.add_domain({top, x});
    child.s.add_domain({bottom, x});
    child.size[top] = Expr::variable(k);
    child.size[bottom] = simplify(Expr::add({s, Expr::mul({Expr::constant(-1L), Expr::variable(k)})}));
    std::string v = namer.variable("x");
    child.s.add_clause(Clause({{v, top}}, {{Atom::pred(pred, {Term::variable(v, top)}), true}}));
    child.s.add_clause(Clause({{v, bottom}}, {{Atom::pred(pred, {Term::variable(v, bottom)}), false}}));
    Option o;
    o.rule = "AtomCounting";
    o.domain = x;
    o.children = {normalize(std::move(child), namer)};
    o.skeleton = Expr::sum(k, Expr::constant(0L), s, Expr::mul({Expr::binom(s, Expr::variable(k)), hole(0)}));
    return o;
}

}  // namespace

std::vector<Option> nongreedy_options(const Node& node, Namer& namer, const std::set<std::string>& reserved) {
    std::vector<Option> out;
    for (const auto& [x, _] : node.s.domains)
        if (auto o = partial_grounding(node, x, namer)) out.push_back(std::move(*o));
    for (auto it = node.s.predicates.rbegin(); it != node.s.predicates.rend(); ++it)
        if (it->second.arity() == 1) out.push_back(atom_counting(node, it->first, namer, reserved));
    std::set<std::string> unary_domains;
    for (const auto& [name, p] : node.s.predicates)
        if (p.arity() == 1) unary_domains.insert(p.arg_domains[0]);
    for (const auto& [x, e] : node.size)
        if (!e.is_const() && !unary_domains.count(x)) {
            Option o;
            o.rule = "DomainRecursion";
            o.domain = x;
            out.push_back(std::move(o));
        }
    return out;
}

}  // namespace fomc::detail
