#include "fomc/basecase.hpp"

#include <algorithm>
#include <functional>

#include "compiler_internal.hpp"
#include "fomc/preprocess.hpp"

namespace fomc {

namespace {

std::vector<std::string> ancestors_or_self(const Sentence& s, const std::string& domain) {
    std::vector<std::string> out{domain};
    while (true) {
        auto it = s.domains.find(out.back());
        if (it == s.domains.end() || !it->second.parent) return out;
        out.push_back(*it->second.parent);
    }
}

std::string lowest_common_ancestor(const Sentence& s, const std::string& a, const std::string& b) {
    auto chain = ancestors_or_self(s, a);
    for (const auto& d : ancestors_or_self(s, b))
        if (std::find(chain.begin(), chain.end(), d) != chain.end()) return d;
    throw InternalError("domains '" + a + "' and '" + b + "' share no ancestor");
}

// Rebuilds declarations around `clauses`. Predicates of `input` that occur
// in no input clause keep their declaration unless `keep_free` rejects them.
Sentence rebuild(const Sentence& input, std::vector<Clause> clauses, const std::map<std::string, std::string>& constants,
                 const std::function<bool(const Predicate&)>& keep_free) {
    Sentence out;
    out.set_clauses(std::move(clauses));
    out.constants = constants;

    std::map<std::string, std::vector<std::string>> positions;
    for (const auto& c : out.clauses)
        for (const auto& l : c.literals) {
            if (l.atom.is_equality()) continue;
            auto [it, inserted] = positions.emplace(l.atom.predicate, std::vector<std::string>{});
            for (std::size_t i = 0; i < l.atom.args.size(); ++i) {
                const std::string& d = l.atom.args[i].domain;
                if (inserted) it->second.push_back(d);
                else it->second[i] = lowest_common_ancestor(input, it->second[i], d);
            }
        }
    auto used_before = input.used_predicates();
    for (const auto& [name, p] : input.predicates) {
        if (auto it = positions.find(name); it != positions.end()) out.add_predicate({name, it->second});
        else if (!used_before.count(name) && keep_free(p)) out.add_predicate(p);
    }

    std::set<std::string> needed = out.used_domains();
    for (const auto& [c, d] : out.constants) needed.insert(d);
    for (const auto& d : std::set<std::string>(needed))
        for (const auto& a : ancestors_or_self(input, d)) needed.insert(a);
    for (const auto& d : needed) {
        auto it = input.domains.find(d);
        out.add_domain(it != input.domains.end() ? it->second : Domain{d, std::nullopt});
    }
    for (const auto& [d, n] : input.fixed_sizes)
        if (needed.count(d)) out.fixed_sizes[d] = n;
    return out;
}

}  // namespace

Sentence propagate(const Sentence& sentence, const std::string& domain, std::uint64_t n, bool smoothing) {
    if (!sentence.domains.count(domain)) return sentence;
    for (const auto& [name, d] : sentence.domains)
        if (d.parent && is_descendant_or_self(sentence, name, domain))
            throw Error("cannot propagate a size for '" + domain + "', which has subdomains");

    auto touches = [&](const std::string& d) { return d == domain; };
    std::vector<Clause> out;
    std::map<std::string, std::string> constants;

    if (n == 0) {
        for (const auto& [c, d] : sentence.constants)
            if (!touches(d)) constants[c] = d;
        for (const auto& c : sentence.clauses) {
            auto ds = doms(c);
            for (const auto& l : c.literals)
                for (const auto& d : doms(l)) ds.insert(d);
            if (!ds.count(domain)) {
                out.push_back(c);
                continue;
            }
            std::vector<Literal> rest;
            for (const auto& l : c.literals)
                if (!doms(l).count(domain)) rest.push_back(l);
            if (rest.empty() || !smoothing) continue;
            rest.push_back(rest.front().negated());
            std::map<std::string, std::string> binders;
            for (const auto& [v, d] : c.binders)
                if (!touches(d)) binders[v] = d;
            out.emplace_back(std::move(binders), std::move(rest));
        }
        return rebuild(sentence, std::move(out), constants, [&](const Predicate& p) {
            return std::none_of(p.arg_domains.begin(), p.arg_domains.end(), touches);
        });
    }

    constants = sentence.constants;
    std::vector<std::string> fresh;
    for (std::uint64_t i = 1; i <= n; ++i) {
        std::string c = std::string(1, kReservedPrefix) + domain + "_" + std::to_string(i);
        fresh.push_back(c);
        constants[c] = domain;
    }
    for (const auto& c : sentence.clauses) {
        std::vector<std::string> vars;
        for (const auto& [v, d] : c.binders)
            if (touches(d)) vars.push_back(v);
        if (vars.empty()) {
            out.push_back(c);
            continue;
        }
        std::vector<std::size_t> idx(vars.size(), 0);
        while (true) {
            std::map<std::string, Term> mapping;
            for (std::size_t i = 0; i < vars.size(); ++i) mapping[vars[i]] = Term::constant(fresh[idx[i]], domain);
            out.push_back(substitute(c, mapping));
            std::size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < fresh.size()) break;
                idx[i] = 0;
            }
            if (i == idx.size()) break;
        }
    }
    Sentence result = rebuild(sentence, std::move(out), constants, [](const Predicate&) { return true; });
    result.add_domain(sentence.domains.at(domain));
    result.fixed_sizes[domain] = n;
    return result;
}

std::vector<BaseCase> find_base_cases(const std::vector<Equation>& equations) {
    std::map<std::string, const Equation*> definitions;
    for (const auto& eq : equations)
        if (!eq.is_base_case()) definitions[eq.function] = &eq;

    std::set<BaseCase> found;
    for (const auto& eq : equations) {
        if (eq.is_base_case()) continue;
        for (const auto& call : calls(eq.body)) {
            auto def = definitions.find(call.name());
            if (def == definitions.end()) continue;
            const auto& head = def->second->head;
            bool self = call.name() == eq.function;
            for (std::size_t i = 0; i < call.children().size(); ++i) {
                auto a = affine(call[i]);
                if (!a) {
                    if (self) throw TerminationViolation("recursive call " + to_string(call) + " has argument " +
                                                         to_string(call[i]) + " of unsupported shape");
                    continue;
                }
                auto with = [&](std::int64_t value) {
                    auto h = head;
                    h[i] = Expr::constant(static_cast<long>(value));
                    found.insert({call.name(), std::move(h)});
                };
                if (!a->variable) {
                    if (a->offset < 0) throw TerminationViolation("call " + to_string(call) + " has a negative argument");
                    with(a->offset);
                } else if (self) {
                    if (*a->variable != head[i].name() || a->offset > 0)
                        throw TerminationViolation("recursive call " + to_string(call) + " does not shrink position " +
                                                   std::to_string(i + 1));
                    for (std::int64_t v = 0; v < -a->offset; ++v) with(v);
                }
            }
        }
    }
    return {found.begin(), found.end()};
}

namespace {

class BaseCaseCompiler {
public:
    BaseCaseCompiler(const CompileOptions& options, CompileStats& stats) : options_(options), stats_(stats) {}

    // Compiles a root and closes every function it creates; returns the root equation.
    Equation run(const Sentence& sentence, const Weights& weights, const std::vector<std::string>& entry,
                 const std::vector<std::string>& params, int depth, FunctionInfo* root_info) {
        stats_.max_depth = std::max(stats_.max_depth, depth);
        CompileStats local;
        local.nodes = stats_.nodes;
        auto c = detail::compile_root(sentence, weights, entry, params, namer_, options_, &local);
        stats_.nodes = local.nodes;
        if (depth == 0) stats_.nongreedy = local.nongreedy;

        Equation root = c.equations.front();
        if (root_info) *root_info = c.functions.at(c.entry);
        for (std::size_t i = 1; i < c.equations.size(); ++i) add(c.equations[i]);
        for (auto& [name, info] : c.functions)
            if (name != c.entry) functions_[name] = info;

        for (const auto& bc : find_base_cases(c.equations)) {
            if (defined(bc)) continue;
            const FunctionInfo& info = functions_.at(bc.function);
            Sentence psi = info.sentence;
            std::vector<std::string> rest_domains;
            std::vector<std::string> rest_params;
            for (std::size_t j = 0; j < bc.head.size(); ++j) {
                if (bc.head[j].is_const()) {
                    psi = propagate(psi, info.domains[j], bc.head[j].value().get_ui(), options_.smoothing);
                } else {
                    rest_domains.push_back(info.domains[j]);
                    rest_params.push_back(info.params[j]);
                }
            }
            Equation nested = run(psi, info.weights, rest_domains, rest_params, depth + 1, nullptr);
            add({bc.function, bc.head, nested.body});
        }
        return root;
    }

    void add(const Equation& eq) {
        for (const auto& e : equations_) {
            if (e.function != eq.function || e.head.size() != eq.head.size() ||
                !std::equal(e.head.begin(), e.head.end(), eq.head.begin()))
                continue;
            if (e.body != eq.body) throw InternalError("conflicting definitions for " + to_string(eq));
            return;
        }
        equations_.push_back(eq);
    }

    bool defined(const BaseCase& bc) const {
        return std::any_of(equations_.begin(), equations_.end(), [&](const Equation& e) {
            return e.function == bc.function && e.head.size() == bc.head.size() &&
                   std::equal(e.head.begin(), e.head.end(), bc.head.begin());
        });
    }

    std::vector<Equation> equations_;
    std::map<std::string, FunctionInfo> functions_;

private:
    const CompileOptions& options_;
    CompileStats& stats_;
    detail::Namer namer_;
};

}  // namespace

Program compile_with_base_cases(const Sentence& sentence, const Weights& weights,
                                const std::vector<std::string>& entry_domains, const CompileOptions& options,
                                CompileStats* stats) {
    CompileStats local;
    CompileStats& st = stats ? *stats : local;
    st = {};
    BaseCaseCompiler engine(options, st);
    FunctionInfo root_info;
    Equation root = engine.run(sentence, weights, entry_domains, detail::parameter_names(entry_domains.size()), 0,
                               &root_info);
    Program p;
    p.entry = root.function;
    p.equations.push_back(root);
    for (auto& e : engine.equations_) p.equations.push_back(std::move(e));
    p.functions = std::move(engine.functions_);
    p.functions[root.function] = std::move(root_info);
    p.order = detail::definition_order(p.equations);
    return p;
}

Program compile_with_base_cases(const WfomcInstance& instance, const CompileOptions& options, CompileStats* stats) {
    return compile_with_base_cases(instance.sentence, instance.weights, entry_domains(instance), options, stats);
}

}  // namespace fomc
