#include <algorithm>
#include <functional>

#include "compiler_internal.hpp"

namespace fomc::detail {

namespace {

using NameMap = std::map<std::string, std::string>;

std::size_t occurrences(const Sentence& s, const std::string& pred) {
    std::size_t n = 0;
    for (const auto& c : s.clauses)
        for (const auto& l : c.literals)
            if (!l.atom.is_equality() && l.atom.predicate == pred) ++n;
    return n;
}

// Clause text after renaming predicates and domains, minimized over all
// renamings of variables that keep each variable's domain.
std::string canonical_clause(const Clause& c, const NameMap& preds, const NameMap& doms) {
    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& [v, d] : c.binders) groups[doms.at(d)].push_back(v);
    std::vector<std::vector<std::string>*> order;
    for (auto& [_, g] : groups) {
        std::sort(g.begin(), g.end());
        order.push_back(&g);
    }
    std::string best;
    bool first = true;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == order.size()) {
            NameMap var;
            std::string head;
            for (const auto& [d, g] : groups) {
                head += d + ":" + std::to_string(g.size()) + ";";
                for (std::size_t k = 0; k < g.size(); ++k) var[g[k]] = d + "." + std::to_string(k);
            }
            std::vector<std::string> lits;
            for (const auto& l : c.literals) {
                std::string t = l.positive ? "+" : "-";
                std::vector<std::string> args;
                for (const auto& a : l.atom.args) args.push_back(var.at(a.name));
                if (l.atom.is_equality()) {
                    std::sort(args.begin(), args.end());
                    t += "=";
                } else {
                    t += preds.at(l.atom.predicate);
                }
                for (const auto& a : args) t += "," + a;
                lits.push_back(t);
            }
            std::sort(lits.begin(), lits.end());
            std::string text = head;
            for (const auto& l : lits) text += l + "|";
            if (first || text < best) best = text;
            first = false;
            return;
        }
        auto& g = *order[i];
        std::sort(g.begin(), g.end());
        do {
            rec(i + 1);
        } while (std::next_permutation(g.begin(), g.end()));
    };
    rec(0);
    return best;
}

std::vector<std::string> canonical_clauses(const Sentence& s, const NameMap& preds, const NameMap& doms) {
    std::vector<std::string> out;
    for (const auto& c : s.clauses) out.push_back(canonical_clause(c, preds, doms));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::optional<std::map<std::string, std::string>> match(const Sentence& a, const Weights& wa, const Sentence& b,
                                                        const Weights& wb) {
    if (a.domains.size() != b.domains.size() || a.predicates.size() != b.predicates.size() ||
        a.clauses.size() != b.clauses.size() || !a.constants.empty() || !b.constants.empty())
        return std::nullopt;

    auto signature = [](const Sentence& s, const Weights& w, const std::string& p) {
        Weight wt = weight_of(w, p);
        return std::tuple(s.predicates.at(p).arity(), wt.positive, wt.negative, occurrences(s, p));
    };
    std::vector<std::string> pa, pb;
    for (const auto& [p, _] : a.predicates) pa.push_back(p);
    for (const auto& [p, _] : b.predicates) pb.push_back(p);
    {
        std::vector<std::tuple<std::size_t, std::int64_t, std::int64_t, std::size_t>> sa, sb;
        for (const auto& p : pa) sa.push_back(signature(a, wa, p));
        for (const auto& p : pb) sb.push_back(signature(b, wb, p));
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return std::nullopt;
    }

    NameMap identity;
    for (const auto& [d, _] : b.domains) identity[d] = d;
    NameMap pid;
    for (const auto& p : pb) pid[p] = p;
    const auto target = canonical_clauses(b, pid, identity);

    std::vector<std::string> da, db;
    for (const auto& [d, _] : a.domains) da.push_back(d);
    for (const auto& [d, _] : b.domains) db.push_back(d);
    std::vector<std::size_t> perm(db.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    do {
        NameMap dmap;
        for (std::size_t i = 0; i < da.size(); ++i) dmap[da[i]] = db[perm[i]];
        NameMap pmap;
        std::set<std::string> taken;
        std::optional<NameMap> found;
        std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
            if (i == pa.size()) {
                if (canonical_clauses(a, pmap, dmap) == target) {
                    found = dmap;
                    return true;
                }
                return false;
            }
            const auto& p = pa[i];
            std::vector<std::string> mapped;
            for (const auto& d : a.predicates.at(p).arg_domains) mapped.push_back(dmap.at(d));
            for (const auto& q : pb) {
                if (taken.count(q) || signature(a, wa, p) != signature(b, wb, q)) continue;
                if (b.predicates.at(q).arg_domains != mapped) continue;
                pmap[p] = q;
                taken.insert(q);
                if (assign(i + 1)) return true;
                taken.erase(q);
            }
            return false;
        };
        if (assign(0)) return found;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

}  // namespace fomc::detail
