#include "fomc/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace fomc {

struct Expr::Node {
    Kind kind = Kind::Const;
    mpz_class value;
    std::string name;
    std::vector<Expr> children;
    std::int64_t low = 0;
    std::optional<std::int64_t> high;
};

namespace {

using K = Expr::Kind;

const Expr& zero() {
    static const Expr z = Expr::constant(0L);
    return z;
}

}  // namespace

Expr::Expr() : Expr(zero()) {}

Expr Expr::constant(mpz_class value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = std::move(value);
    return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::add(std::vector<Expr> terms) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Add;
    n->children = std::move(terms);
    return Expr(std::move(n));
}

Expr Expr::mul(std::vector<Expr> factors) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mul;
    n->children = std::move(factors);
    return Expr(std::move(n));
}

Expr Expr::pow(Expr base, Expr exponent) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->children = {std::move(base), std::move(exponent)};
    return Expr(std::move(n));
}

Expr Expr::binom(Expr top, Expr k) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Binom;
    n->children = {std::move(top), std::move(k)};
    return Expr(std::move(n));
}

Expr Expr::indicator(std::int64_t low, Expr subject, std::optional<std::int64_t> high) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Indicator;
    n->low = low;
    n->high = high;
    n->children = {std::move(subject)};
    return Expr(std::move(n));
}

Expr Expr::sum(std::string index, Expr from, Expr to, Expr body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->name = std::move(index);
    n->children = {std::move(from), std::move(to), std::move(body)};
    return Expr(std::move(n));
}

Expr Expr::call(std::string function, std::vector<Expr> args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->name = std::move(function);
    n->children = std::move(args);
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const mpz_class& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::children() const { return node_->children; }
std::int64_t Expr::low() const { return node_->low; }
const std::optional<std::int64_t>& Expr::high() const { return node_->high; }

int compare(const Expr& a, const Expr& b) {
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case K::Const: {
            int c = cmp(a.value(), b.value());
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case K::Var:
            return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
        case K::Indicator:
            if (a.low() != b.low()) return a.low() < b.low() ? -1 : 1;
            if (a.high() != b.high()) {
                if (!a.high()) return 1;
                if (!b.high()) return -1;
                return *a.high() < *b.high() ? -1 : 1;
            }
            break;
        case K::Sum:
        case K::Call:
            if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
            break;
        default:
            break;
    }
    const auto& x = a.children();
    const auto& y = b.children();
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
        if (int c = compare(x[i], y[i]); c != 0) return c;
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    return 0;
}

Expr offset(const Expr& e, long c) {
    if (c == 0) return e;
    if (e.is_const()) return Expr::constant(e.value() + c);
    if (e.kind() == K::Add && !e.children().empty() && e.children().back().is_const()) {
        auto terms = e.children();
        mpz_class v = terms.back().value() + c;
        terms.pop_back();
        if (v != 0) terms.push_back(Expr::constant(v));
        return terms.size() == 1 ? terms[0] : Expr::add(std::move(terms));
    }
    return Expr::add({e, Expr::constant(c)});
}

namespace {

void collect_free(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (e.kind()) {
        case K::Var:
            if (!bound.count(e.name())) out.insert(e.name());
            return;
        case K::Sum: {
            collect_free(e[0], bound, out);
            collect_free(e[1], bound, out);
            bool added = bound.insert(e.name()).second;
            collect_free(e[2], bound, out);
            if (added) bound.erase(e.name());
            return;
        }
        default:
            for (const auto& c : e.children()) collect_free(c, bound, out);
    }
}

void collect_calls(const Expr& e, std::vector<Expr>& out) {
    if (e.is_call()) out.push_back(e);
    for (const auto& c : e.children()) collect_calls(c, out);
}

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
    std::set<std::string> bound, out;
    collect_free(e, bound, out);
    return out;
}

bool contains_call(const Expr& e) {
    if (e.is_call()) return true;
    for (const auto& c : e.children())
        if (contains_call(c)) return true;
    return false;
}

std::vector<Expr> calls(const Expr& e) {
    std::vector<Expr> out;
    collect_calls(e, out);
    return out;
}

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> children) {
    switch (e.kind()) {
        case K::Add: return Expr::add(std::move(children));
        case K::Mul: return Expr::mul(std::move(children));
        case K::Pow: return Expr::pow(children[0], children[1]);
        case K::Binom: return Expr::binom(children[0], children[1]);
        case K::Indicator: return Expr::indicator(e.low(), children[0], e.high());
        case K::Sum: return Expr::sum(e.name(), children[0], children[1], children[2]);
        case K::Call: return Expr::call(e.name(), std::move(children));
        default: return e;
    }
}

}  // namespace

Expr substitute(const Expr& e, const std::map<std::string, Expr>& mapping) {
    if (mapping.empty()) return e;
    switch (e.kind()) {
        case K::Const:
            return e;
        case K::Var: {
            auto it = mapping.find(e.name());
            return it == mapping.end() ? e : it->second;
        }
        case K::Sum: {
            Expr from = substitute(e[0], mapping);
            Expr to = substitute(e[1], mapping);
            auto inner = mapping;
            inner.erase(e.name());
            auto body_free = free_variables(e[2]);
            std::set<std::string> incoming;
            for (const auto& [v, r] : inner) {
                if (!body_free.count(v)) continue;
                auto f = free_variables(r);
                incoming.insert(f.begin(), f.end());
            }
            std::string index = e.name();
            if (incoming.count(index)) {
                for (std::size_t i = 1;; ++i) {
                    std::string candidate = e.name() + std::to_string(i);
                    if (!incoming.count(candidate) && !body_free.count(candidate) && !inner.count(candidate)) {
                        index = candidate;
                        break;
                    }
                }
                inner[e.name()] = Expr::variable(index);
            }
            return Expr::sum(index, from, to, substitute(e[2], inner));
        }
        default: {
            std::vector<Expr> cs;
            cs.reserve(e.children().size());
            for (const auto& c : e.children()) cs.push_back(substitute(c, mapping));
            return rebuild(e, std::move(cs));
        }
    }
}

Expr rename_calls(const Expr& e, const std::map<std::string, std::string>& mapping) {
    if (e.children().empty() && !e.is_call()) return e;
    std::vector<Expr> cs;
    for (const auto& c : e.children()) cs.push_back(rename_calls(c, mapping));
    if (e.is_call()) {
        auto it = mapping.find(e.name());
        return Expr::call(it == mapping.end() ? e.name() : it->second, std::move(cs));
    }
    return rebuild(e, std::move(cs));
}

bool is_nonnegative(const Expr& e, const std::set<std::string>& signed_vars) {
    switch (e.kind()) {
        case K::Const: return e.value() >= 0;
        case K::Var: return !signed_vars.count(e.name());
        case K::Add:
        case K::Mul:
            return std::all_of(e.children().begin(), e.children().end(),
                               [&](const Expr& c) { return is_nonnegative(c, signed_vars); });
        case K::Pow: return is_nonnegative(e[0], signed_vars);
        case K::Binom:
        case K::Indicator: return true;
        case K::Sum: {
            auto inner = signed_vars;
            if (is_nonnegative(e[0], signed_vars)) inner.erase(e.name());
            else inner.insert(e.name());
            return is_nonnegative(e[2], inner);
        }
        case K::Call: return false;
    }
    return false;
}

std::optional<Affine> affine(const Expr& e) {
    if (e.is_var()) return Affine{e.name(), 0};
    if (e.is_const() && e.value().fits_slong_p()) return Affine{std::nullopt, e.value().get_si()};
    if (e.kind() == K::Add && e.children().size() == 2) {
        const Expr* v = nullptr;
        const Expr* c = nullptr;
        for (const auto& t : e.children()) {
            if (t.is_var()) v = &t;
            else if (t.is_const()) c = &t;
        }
        if (v && c && c->value().fits_slong_p()) return Affine{v->name(), c->value().get_si()};
    }
    return std::nullopt;
}

namespace {

constexpr std::int64_t kMaxExpansion = 64;

Expr simplify_once(const Expr& e, const std::set<std::string>& signed_vars);

// Sorts sum terms by the calls they make, so recursive terms appear in
// argument order, then structurally.
bool add_term_less(const Expr& a, const Expr& b) {
    auto ca = calls(a);
    auto cb = calls(b);
    for (std::size_t i = 0; i < ca.size() && i < cb.size(); ++i)
        if (int c = compare(ca[i], cb[i]); c != 0) return c < 0;
    if (ca.size() != cb.size()) return ca.size() < cb.size();
    return compare(a, b) < 0;
}

Expr simplify_add(const Expr& e, const std::set<std::string>& signed_vars) {
    std::vector<Expr> flat;
    for (const auto& c : e.children()) {
        Expr s = simplify_once(c, signed_vars);
        if (s.kind() == K::Add) flat.insert(flat.end(), s.children().begin(), s.children().end());
        else flat.push_back(s);
    }
    mpz_class constant = 0;
    std::map<Expr, mpz_class> grouped;
    std::vector<Expr> order;
    for (const auto& t : flat) {
        if (t.is_const()) {
            constant += t.value();
            continue;
        }
        mpz_class coef = 1;
        Expr rest = t;
        if (t.kind() == K::Mul && t.children().size() >= 2 && t.children()[0].is_const()) {
            coef = t.children()[0].value();
            std::vector<Expr> fs(t.children().begin() + 1, t.children().end());
            rest = fs.size() == 1 ? fs[0] : Expr::mul(std::move(fs));
        }
        auto [it, inserted] = grouped.emplace(rest, 0);
        if (inserted) order.push_back(rest);
        it->second += coef;
    }
    std::vector<Expr> terms;
    for (const auto& rest : order) {
        const mpz_class& coef = grouped.at(rest);
        if (coef == 0) continue;
        if (coef == 1) {
            terms.push_back(rest);
            continue;
        }
        std::vector<Expr> fs{Expr::constant(coef)};
        if (rest.kind() == K::Mul) fs.insert(fs.end(), rest.children().begin(), rest.children().end());
        else fs.push_back(rest);
        terms.push_back(Expr::mul(std::move(fs)));
    }
    std::sort(terms.begin(), terms.end(), add_term_less);
    if (constant != 0) terms.push_back(Expr::constant(constant));
    if (terms.empty()) return Expr::constant(0L);
    if (terms.size() == 1) return terms[0];
    return Expr::add(std::move(terms));
}

Expr simplify_mul(const Expr& e, const std::set<std::string>& signed_vars) {
    std::vector<Expr> flat;
    for (const auto& c : e.children()) {
        Expr s = simplify_once(c, signed_vars);
        if (s.kind() == K::Mul) flat.insert(flat.end(), s.children().begin(), s.children().end());
        else flat.push_back(s);
    }
    mpz_class coef = 1;
    std::vector<std::pair<Expr, std::vector<Expr>>> groups;
    for (const auto& f : flat) {
        if (f.is_const()) {
            coef *= f.value();
            continue;
        }
        Expr base = f.kind() == K::Pow ? f[0] : f;
        Expr exp = f.kind() == K::Pow ? f[1] : Expr::constant(1L);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == base; });
        if (it == groups.end()) groups.push_back({base, {exp}});
        else it->second.push_back(exp);
    }
    if (coef == 0) return Expr::constant(0L);
    if (coef != 1 && groups.size() == 1 && groups[0].second.size() == 1 && groups[0].second[0].is_const(1) &&
        groups[0].first.kind() == K::Add) {
        std::vector<Expr> terms;
        for (const auto& t : groups[0].first.children()) terms.push_back(Expr::mul({Expr::constant(coef), t}));
        return simplify_once(Expr::add(std::move(terms)), signed_vars);
    }
    std::vector<Expr> plain, with_calls;
    for (auto& [base, exps] : groups) {
        Expr f;
        if (exps.size() == 1) f = exps[0].is_const(1) ? base : Expr::pow(base, exps[0]);
        else f = Expr::pow(base, Expr::add(exps));
        (contains_call(f) ? with_calls : plain).push_back(f);
    }
    std::sort(plain.begin(), plain.end());
    std::sort(with_calls.begin(), with_calls.end());
    std::vector<Expr> factors;
    if (coef != 1 || (plain.empty() && with_calls.empty())) factors.push_back(Expr::constant(coef));
    factors.insert(factors.end(), plain.begin(), plain.end());
    factors.insert(factors.end(), with_calls.begin(), with_calls.end());
    if (factors.size() == 1) return factors[0];
    return Expr::mul(std::move(factors));
}

Expr simplify_pow(const Expr& e, const std::set<std::string>& signed_vars) {
    Expr base = simplify_once(e[0], signed_vars);
    Expr exp = simplify_once(e[1], signed_vars);
    if (exp.is_const(0)) return Expr::constant(1L);
    if (exp.is_const(1)) return base;
    if (base.is_const(1)) return base;
    if (base.is_const() && exp.is_const() && exp.value() > 0 && exp.value().fits_ulong_p()) {
        unsigned long n = exp.value().get_ui();
        if (abs(base.value()) <= 1 || n <= 4096) {
            mpz_class out;
            mpz_pow_ui(out.get_mpz_t(), base.value().get_mpz_t(), n);
            return Expr::constant(out);
        }
    }
    return Expr::pow(base, exp);
}

Expr simplify_binom(const Expr& e, const std::set<std::string>& signed_vars) {
    Expr n = simplify_once(e[0], signed_vars);
    Expr k = simplify_once(e[1], signed_vars);
    if (k.is_const() && k.value() < 0) return Expr::constant(0L);
    if (n.is_const() && k.is_const()) {
        if (n.value() < 0 || k.value() > n.value() || !k.value().fits_ulong_p()) return Expr::constant(0L);
        mpz_class out;
        mpz_bin_ui(out.get_mpz_t(), n.value().get_mpz_t(), k.value().get_ui());
        return Expr::constant(out);
    }
    if (is_nonnegative(n, signed_vars)) {
        if (k.is_const(0) || k == n) return Expr::constant(1L);
        if (k.is_const(1)) return n;
    }
    return Expr::binom(n, k);
}

Expr simplify_indicator(const Expr& e, const std::set<std::string>& signed_vars) {
    Expr s = simplify_once(e[0], signed_vars);
    if (e.high() && *e.high() < e.low()) return Expr::constant(0L);
    if (s.is_const()) {
        bool in = s.value() >= e.low() && (!e.high() || s.value() <= *e.high());
        return Expr::constant(in ? 1L : 0L);
    }
    if (!e.high() && e.low() <= 0 && is_nonnegative(s, signed_vars)) return Expr::constant(1L);
    return Expr::indicator(e.low(), s, e.high());
}

std::vector<Expr> factors_of(const Expr& e) {
    if (e.kind() == K::Mul) return e.children();
    return {e};
}

Expr product(std::vector<Expr> fs) {
    if (fs.empty()) return Expr::constant(1L);
    if (fs.size() == 1) return fs[0];
    return Expr::mul(std::move(fs));
}

// A factor binom(to, c) with c >= j vanishes whenever to < j.
bool self_guarded(const std::vector<Expr>& factors, const Expr& to, std::int64_t j) {
    for (const auto& f : factors)
        if (f.kind() == K::Binom && f[0] == to && f[1].is_const() && f[1].value() >= j) return true;
    return false;
}

Expr simplify_sum(const Expr& e, const std::set<std::string>& signed_vars) {
    const std::string& idx = e.name();
    Expr from = simplify_once(e[0], signed_vars);
    Expr to = simplify_once(e[1], signed_vars);
    auto inner = signed_vars;
    if (is_nonnegative(from, signed_vars)) inner.erase(idx);
    else inner.insert(idx);
    Expr body = simplify_once(e[2], inner);

    if (body.is_const(0)) return body;
    if (from.is_const() && to.is_const()) {
        if (from.value() > to.value()) return Expr::constant(0L);
        mpz_class count = to.value() - from.value() + 1;
        if (count <= kMaxExpansion) {
            std::vector<Expr> terms;
            for (long j = from.value().get_si(); j <= to.value().get_si(); ++j)
                terms.push_back(substitute(body, {{idx, Expr::constant(j)}}));
            return Expr::add(std::move(terms));
        }
    }
    if (from == to) return substitute(body, {{idx, from}});

    if (from.is_const() && from.value().fits_slong_p()) {
        auto fs = factors_of(body);
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const Expr& ind = fs[i];
            if (ind.kind() != K::Indicator || !ind[0].is_var() || ind[0].name() != idx) continue;
            std::vector<Expr> rest;
            for (std::size_t j = 0; j < fs.size(); ++j)
                if (j != i) rest.push_back(fs[j]);
            std::int64_t lo = std::max<std::int64_t>(from.value().get_si(), ind.low());
            if (!ind.high()) return Expr::sum(idx, Expr::constant(lo), to, product(std::move(rest)));
            std::int64_t hi = *ind.high();
            if (to.is_const() && to.value() < hi) hi = to.value().get_si();
            if (hi < lo) return Expr::constant(0L);
            if (hi - lo + 1 > kMaxExpansion) break;
            Expr remainder = product(std::move(rest));
            std::vector<Expr> terms;
            for (std::int64_t j = lo; j <= hi; ++j) {
                Expr term = substitute(remainder, {{idx, Expr::constant(j)}});
                bool guarded = to.is_const() || (j <= 0 && is_nonnegative(to, signed_vars)) ||
                               self_guarded(factors_of(term), to, j);
                if (!guarded) term = Expr::mul({Expr::indicator(j, to, std::nullopt), term});
                terms.push_back(term);
            }
            return Expr::add(std::move(terms));
        }
    }
    return Expr::sum(idx, from, to, body);
}

Expr simplify_once(const Expr& e, const std::set<std::string>& signed_vars) {
    switch (e.kind()) {
        case K::Const:
        case K::Var: return e;
        case K::Add: return simplify_add(e, signed_vars);
        case K::Mul: return simplify_mul(e, signed_vars);
        case K::Pow: return simplify_pow(e, signed_vars);
        case K::Binom: return simplify_binom(e, signed_vars);
        case K::Indicator: return simplify_indicator(e, signed_vars);
        case K::Sum: return simplify_sum(e, signed_vars);
        case K::Call: {
            std::vector<Expr> args;
            for (const auto& a : e.children()) args.push_back(simplify_once(a, signed_vars));
            return Expr::call(e.name(), std::move(args));
        }
    }
    return e;
}

}  // namespace

Expr simplify(const Expr& e) {
    Expr current = e;
    for (int i = 0; i < 256; ++i) {
        Expr next = simplify_once(current, {});
        if (next == current) return current;
        current = std::move(next);
    }
    throw InternalError("simplify did not reach a fixpoint on " + to_string(e));
}

namespace {

struct Evaluator {
    Env env;
    const CallOracle& oracle;
    std::uint64_t* steps;

    std::optional<mpz_class> run(const Expr& e) {
        if (steps) ++*steps;
        switch (e.kind()) {
            case K::Const:
                return e.value();
            case K::Var: {
                auto it = env.find(e.name());
                if (it == env.end()) throw InternalError("unbound variable '" + e.name() + "'");
                return it->second;
            }
            case K::Add: {
                mpz_class total = 0;
                bool known = true;
                for (const auto& c : e.children()) {
                    auto v = run(c);
                    if (v) total += *v;
                    else known = false;
                }
                if (!known) return std::nullopt;
                return total;
            }
            case K::Mul: {
                mpz_class total = 1;
                bool known = true;
                for (const auto& c : e.children()) {
                    auto v = run(c);
                    if (!v) {
                        known = false;
                        continue;
                    }
                    if (*v == 0) return mpz_class(0);
                    total *= *v;
                }
                if (!known) return std::nullopt;
                return total;
            }
            case K::Pow: {
                auto b = run(e[0]);
                auto x = run(e[1]);
                if (!b || !x) return std::nullopt;
                if (*x < 0) throw InternalError("negative exponent in " + to_string(e));
                if (!x->fits_ulong_p()) {
                    if (abs(*b) <= 1) return *b == -1 ? mpz_class(mpz_odd_p(x->get_mpz_t()) ? -1 : 1) : *b;
                    throw InternalError("exponent too large in " + to_string(e));
                }
                mpz_class out;
                mpz_pow_ui(out.get_mpz_t(), b->get_mpz_t(), x->get_ui());
                return out;
            }
            case K::Binom: {
                auto n = run(e[0]);
                auto k = run(e[1]);
                if (!n || !k) return std::nullopt;
                if (*k < 0 || *n < 0 || *k > *n) return mpz_class(0);
                mpz_class out;
                mpz_bin_ui(out.get_mpz_t(), n->get_mpz_t(), k->get_ui());
                return out;
            }
            case K::Indicator: {
                auto s = run(e[0]);
                if (!s) return std::nullopt;
                bool in = *s >= e.low() && (!e.high() || *s <= *e.high());
                return mpz_class(in ? 1 : 0);
            }
            case K::Sum: {
                auto from = run(e[0]);
                auto to = run(e[1]);
                if (!from || !to) return std::nullopt;
                std::optional<mpz_class> saved;
                if (auto it = env.find(e.name()); it != env.end()) saved = it->second;
                mpz_class total = 0;
                bool known = true;
                for (mpz_class i = *from; i <= *to; ++i) {
                    env[e.name()] = i;
                    auto v = run(e[2]);
                    if (v) total += *v;
                    else known = false;
                }
                if (saved) env[e.name()] = *saved;
                else env.erase(e.name());
                if (!known) return std::nullopt;
                return total;
            }
            case K::Call: {
                std::vector<mpz_class> args;
                args.reserve(e.children().size());
                for (const auto& c : e.children()) {
                    auto v = run(c);
                    if (!v) return std::nullopt;
                    if (*v < 0) throw MissingBaseCase("domain underflow: " + to_string(e) + " reached a negative argument");
                    args.push_back(*v);
                }
                return oracle(e.name(), args);
            }
        }
        throw InternalError("unknown expression kind");
    }
};

}  // namespace

std::optional<mpz_class> evaluate(const Expr& e, const Env& env, const CallOracle& oracle, std::uint64_t* steps) {
    Evaluator ev{env, oracle, steps};
    return ev.run(e);
}

mpz_class expr_eval(const Expr& e, const Env& env, const CallOracle& oracle) {
    auto v = evaluate(e, env, oracle);
    if (!v) throw InternalError("unresolved call while evaluating " + to_string(e));
    return *v;
}

namespace {

enum Prec { kSum = 0, kAdd = 1, kMul = 2, kPow = 3, kAtom = 4 };

int precedence(const Expr& e) {
    switch (e.kind()) {
        case K::Const: return e.value() < 0 ? kAdd : kAtom;
        case K::Add: return kAdd;
        case K::Mul: return e.children()[0].is_const() && e.children()[0].value() < 0 ? kAdd : kMul;
        case K::Pow: return kPow;
        case K::Sum: return kSum;
        default: return kAtom;
    }
}

void print(std::ostream& os, const Expr& e);

void print_at(std::ostream& os, const Expr& e, int min_prec) {
    if (precedence(e) < min_prec) {
        os << '(';
        print(os, e);
        os << ')';
    } else {
        print(os, e);
    }
}

void print_factors(std::ostream& os, const std::vector<Expr>& fs, std::size_t start) {
    for (std::size_t i = start; i < fs.size(); ++i) {
        if (i > start) os << " * ";
        print_at(os, fs[i], kMul);
    }
}

// Writes a term of a sum, given whether it is the first one.
void print_term(std::ostream& os, const Expr& t, bool first) {
    bool negative = (t.is_const() && t.value() < 0) ||
                    (t.kind() == K::Mul && t.children()[0].is_const() && t.children()[0].value() < 0);
    if (!negative) {
        if (!first) os << " + ";
        print_at(os, t, kAdd);
        return;
    }
    os << (first ? "-" : " - ");
    if (t.is_const()) {
        os << mpz_class(-t.value()).get_str();
        return;
    }
    mpz_class c = -t.children()[0].value();
    if (c != 1) {
        os << c.get_str();
        if (t.children().size() > 1) os << " * ";
    }
    print_factors(os, t.children(), 1);
}

void print(std::ostream& os, const Expr& e) {
    switch (e.kind()) {
        case K::Const:
            os << e.value().get_str();
            return;
        case K::Var:
            os << e.name();
            return;
        case K::Add:
            for (std::size_t i = 0; i < e.children().size(); ++i) print_term(os, e.children()[i], i == 0);
            return;
        case K::Mul:
            if (precedence(e) == kAdd) {
                print_term(os, e, true);
                return;
            }
            print_factors(os, e.children(), 0);
            return;
        case K::Pow:
            print_at(os, e[0], kAtom);
            os << '^';
            print_at(os, e[1], kAtom);
            return;
        case K::Binom:
            os << "binom(";
            print(os, e[0]);
            os << ", ";
            print(os, e[1]);
            os << ')';
            return;
        case K::Indicator:
            os << '[';
            if (e.high()) {
                os << e.low() << " <= ";
                print(os, e[0]);
                os << " <= " << *e.high();
            } else {
                print(os, e[0]);
                os << " >= " << e.low();
            }
            os << ']';
            return;
        case K::Sum:
            os << "sum_{" << e.name() << '=';
            print(os, e[0]);
            os << "}^{";
            print(os, e[1]);
            os << "} ";
            print_at(os, e[2], kAdd + 1);
            return;
        case K::Call:
            os << e.name() << '(';
            for (std::size_t i = 0; i < e.children().size(); ++i) {
                if (i) os << ", ";
                print(os, e.children()[i]);
            }
            os << ')';
            return;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e);
    return os.str();
}

bool Equation::is_base_case() const {
    return std::any_of(head.begin(), head.end(), [](const Expr& a) { return a.is_const(); });
}

std::string to_string(const Equation& eq) {
    return to_string(Expr::call(eq.function, eq.head)) + " = " + to_string(eq.body);
}

const FunctionInfo& Program::function(const std::string& name) const {
    auto it = functions.find(name);
    if (it == functions.end()) throw InternalError("unknown function '" + name + "'");
    return it->second;
}

const Equation& Program::definition(const std::string& name) const {
    for (const auto& eq : equations)
        if (eq.function == name && !eq.is_base_case()) return eq;
    throw InternalError("function '" + name + "' has no definition");
}

std::vector<const Equation*> Program::base_cases(const std::string& name) const {
    std::vector<const Equation*> out;
    for (const auto& eq : equations)
        if (eq.function == name && eq.is_base_case()) out.push_back(&eq);
    return out;
}

std::string to_string(const Program& program) {
    std::string out;
    for (const auto& eq : program.equations) out += to_string(eq) + "\n";
    return out;
}

}  // namespace fomc
