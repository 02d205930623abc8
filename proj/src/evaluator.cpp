#include "fomc/evaluator.hpp"

#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace fomc {

namespace {

struct ArgsHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::size_t h = v.size();
        for (auto x : v) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

using Memo = std::unordered_map<std::vector<std::int64_t>, mpz_class, ArgsHash>;

std::string call_text(const std::string& f, const std::vector<std::int64_t>& args) {
    std::string s = f + "(";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + std::to_string(args[i]);
    return s + ")";
}

std::vector<std::int64_t> to_args(const std::string& f, const std::vector<mpz_class>& values) {
    std::vector<std::int64_t> out;
    for (const auto& v : values) {
        if (v < 0) throw MissingBaseCase("domain underflow in call to " + f);
        if (!v.fits_slong_p()) throw Error("argument too large in call to " + f);
        out.push_back(v.get_si());
    }
    return out;
}

class Evaluator {
public:
    Evaluator(const Program& p, const EvalOptions& o, EvalStats& s) : program_(p), options_(o), stats_(s) {}

    mpz_class run(const std::string& f, const std::vector<std::int64_t>& args) {
        return options_.memoize ? memoized(f, args) : direct(f, args);
    }

private:
    struct Key {
        std::string function;
        std::vector<std::int64_t> args;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const { return std::hash<std::string>{}(k.function) ^ ArgsHash{}(k.args); }
    };

    std::optional<mpz_class> body(const std::string& f, const std::vector<std::int64_t>& args,
                                  const CallOracle& oracle) {
        Env env;
        const Equation& eq = match_equation(program_, f, args, &env);
        auto v = fomc::evaluate(eq.body, env, oracle, &stats_.steps);
        if (stats_.steps > options_.step_budget)
            throw TerminationViolation("evaluation step budget exceeded at " + call_text(f, args));
        return v;
    }

    mpz_class memoized(const std::string& root, const std::vector<std::int64_t>& root_args) {
        std::vector<Key> stack{{root, root_args}};
        std::unordered_set<Key, KeyHash> expanded;
        while (!stack.empty()) {
            Key top = stack.back();
            Memo& memo = memo_[top.function];
            if (memo.count(top.args)) {
                stack.pop_back();
                continue;
            }
            std::vector<Key> missing;
            CallOracle oracle = [&](const std::string& g, const std::vector<mpz_class>& values) -> std::optional<mpz_class> {
                auto args = to_args(g, values);
                Memo& m = memo_[g];
                if (auto it = m.find(args); it != m.end()) return it->second;
                missing.push_back({g, std::move(args)});
                return std::nullopt;
            };
            auto v = body(top.function, top.args, oracle);
            if (v) {
                memo_[top.function].emplace(top.args, std::move(*v));
                ++stats_.calls;
                expanded.erase(top);
                stack.pop_back();
                continue;
            }
            if (!expanded.insert(top).second && missing.empty())
                throw InternalError("no progress evaluating " + call_text(top.function, top.args));
            for (auto& k : missing) {
                if (expanded.count(k))
                    throw TerminationViolation("cyclic dependency through " + call_text(k.function, k.args));
                stack.push_back(std::move(k));
            }
        }
        return memo_.at(root).at(root_args);
    }

    mpz_class direct(const std::string& f, const std::vector<std::int64_t>& args) {
        Key key{f, args};
        if (!active_.insert(key).second)
            throw TerminationViolation("cyclic dependency through " + call_text(f, args));
        CallOracle oracle = [&](const std::string& g, const std::vector<mpz_class>& values) -> std::optional<mpz_class> {
            return direct(g, to_args(g, values));
        };
        auto v = body(f, args, oracle);
        active_.erase(key);
        if (!v) throw InternalError("unresolved call while evaluating " + call_text(f, args));
        ++stats_.calls;
        return *v;
    }

    const Program& program_;
    const EvalOptions& options_;
    EvalStats& stats_;
    std::unordered_map<std::string, Memo> memo_;
    std::unordered_set<Key, KeyHash> active_;
};

}  // namespace

const Equation& match_equation(const Program& program, const std::string& function,
                               const std::vector<std::int64_t>& args, Env* env) {
    const Equation* best = nullptr;
    std::vector<bool> best_mask;
    std::size_t best_count = 0;
    for (const auto& eq : program.equations) {
        if (eq.function != function) continue;
        if (eq.head.size() != args.size())
            throw InternalError("arity mismatch calling " + call_text(function, args));
        bool ok = true;
        std::vector<bool> mask(args.size(), false);
        std::size_t count = 0;
        for (std::size_t i = 0; i < args.size() && ok; ++i) {
            if (!eq.head[i].is_const()) continue;
            mask[i] = true;
            ++count;
            if (eq.head[i].value() != args[i]) ok = false;
        }
        if (!ok) continue;
        // More constants wins; on a tie the mask that is lexicographically larger has its constants further left.
        if (!best || count > best_count || (count == best_count && mask > best_mask)) {
            best = &eq;
            best_mask = std::move(mask);
            best_count = count;
        }
    }
    if (!best) throw MissingBaseCase("no equation of " + function + " applies to " + call_text(function, args));
    if (env) {
        env->clear();
        for (std::size_t i = 0; i < args.size(); ++i)
            if (best->head[i].is_var()) (*env)[best->head[i].name()] = mpz_class(static_cast<long>(args[i]));
    }
    return *best;
}

mpz_class evaluate(const Program& program, const std::string& function, const std::vector<std::int64_t>& args,
                   const EvalOptions& options, EvalStats* stats) {
    for (auto a : args)
        if (a < 0) throw Error("negative domain size in " + call_text(function, args));
    EvalStats local;
    Evaluator e(program, options, stats ? *stats : local);
    return e.run(function, args);
}

mpz_class evaluate(const Program& program, const std::vector<std::int64_t>& args, const EvalOptions& options,
                   EvalStats* stats) {
    const FunctionInfo& info = program.function(program.entry);
    if (args.size() != info.params.size())
        throw Error("expected " + std::to_string(info.params.size()) + " arguments, got " +
                    std::to_string(args.size()));
    std::map<std::string, std::int64_t> by_domain;
    for (std::size_t i = 0; i < args.size(); ++i) by_domain[info.domains[i]] = args[i];
    std::map<std::string, std::int64_t> constants;
    for (const auto& [c, d] : info.sentence.constants) ++constants[d];
    for (const auto& [d, k] : constants)
        if (auto it = by_domain.find(d); it != by_domain.end() && it->second < k)
            throw Error("domain '" + d + "' of size " + std::to_string(it->second) + " cannot hold its " +
                        std::to_string(k) + " constants");
    for (const auto& [d, n] : by_domain) {
        auto it = info.sentence.domains.find(d);
        if (it == info.sentence.domains.end() || !it->second.parent) continue;
        if (auto p = by_domain.find(*it->second.parent); p != by_domain.end() && n > p->second)
            throw Error("subdomain '" + d + "' is larger than '" + p->first + "'");
    }
    return evaluate(program, program.entry, args, options, stats);
}

std::vector<std::int64_t> entry_arguments(const Program& program, const DomainSizes& sizes) {
    const FunctionInfo& info = program.function(program.entry);
    std::vector<std::int64_t> out;
    for (const auto& d : info.domains) {
        auto it = sizes.find(d);
        if (it == sizes.end()) throw Error("no size given for domain '" + d + "'");
        out.push_back(static_cast<std::int64_t>(it->second));
    }
    return out;
}

}  // namespace fomc
