#include "fomc/compiler.hpp"

#include <algorithm>
#include <functional>
#include <ostream>

#include "compiler_internal.hpp"

namespace fomc {

namespace detail {

std::vector<std::string> parameter_names(std::size_t count) {
    static const char* pool[] = {"m", "n", "p", "q", "r", "s", "t", "u", "v", "w"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::string name = pool[i % 10];
        if (i >= 10) name += std::to_string(i / 10);
        out.push_back(name);
    }
    return out;
}

namespace {

struct Frame {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> domains;
    Sentence sentence;
    Weights weights;
};

// Child node of DomainRecursion: one element of `x` is split off and every
// domain size becomes a parameter.
Node recursion_body(const Node& node, const std::vector<std::string>& domains, const std::vector<std::string>& params,
                    Namer& namer) {
    Node body;
    body.s = node.s;
    body.w = node.w;
    for (std::size_t i = 0; i < domains.size(); ++i) body.size[domains[i]] = Expr::variable(params[i]);
    const std::string& x = domains[0];
    std::string rest = namer.domain(x);
    std::string element = namer.domain(x);
    body.s.add_domain({rest, x});
    body.s.add_domain({element, x});
    body.size[rest] = offset(Expr::variable(params[0]), -1);
    body.size[element] = Expr::constant(1L);
    return normalize(std::move(body), namer);
}

std::vector<std::string> recursion_domains(const Node& node, const std::string& x) {
    std::vector<std::string> out{x};
    for (const auto& [d, _] : node.s.domains)
        if (d != x) out.push_back(d);
    return out;
}

std::vector<std::string> recursion_params(const Node& node, const std::vector<std::string>& domains) {
    std::set<std::string> seen;
    std::vector<std::string> names;
    for (const auto& d : domains) {
        const Expr& e = node.size.at(d);
        if (!e.is_var() || !seen.insert(e.name()).second) return parameter_names(domains.size());
        names.push_back(e.name());
    }
    return names;
}

// Every argument is params[i] - c or a constant, and at least one decreases.
bool well_founded(const std::vector<Expr>& args, const std::vector<std::string>& params) {
    bool decreasing = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
        auto a = affine(args[i]);
        if (!a) return false;
        if (!a->variable) {
            if (a->offset < 0) return false;
            decreasing = true;
        } else {
            if (*a->variable != params[i] || a->offset > 0) return false;
            if (a->offset < 0) decreasing = true;
        }
    }
    return decreasing;
}

class Search {
public:
    Search(Namer& namer, const CompileOptions& options, CompileStats& stats)
        : namer_(namer), options_(options), stats_(stats) {}

    std::optional<Expr> solve(const Node& input, int& budget) {
        ++stats_.nodes;
        if (options_.deadline && std::chrono::steady_clock::now() > *options_.deadline)
            throw Timeout("compilation deadline exceeded");
        if (stats_.nodes > options_.node_limit)
            throw CompilationFailure("search node limit exceeded", describe(input));

        Reduction r = reduce(normalize(input, namer_), namer_);
        for (const auto& rule : r.rules) trace(rule);
        if (r.zero) return Expr::constant(0L);
        const Node& node = r.node;
        auto wrap = [&](Expr e) {
            std::vector<Expr> fs = r.factors;
            fs.push_back(std::move(e));
            return Expr::mul(std::move(fs));
        };
        if (node.s.clauses.empty()) return wrap(Expr::constant(1L));
        if (auto hit = cache_lookup(node)) {
            trace("CacheHit " + to_string(*hit));
            return wrap(*hit);
        }
        if (auto o = branching_option(node, namer_)) {
            trace(o->rule);
            std::vector<Expr> kids;
            ++depth_;
            for (const auto& child : o->children) {
                auto e = solve_child(child, budget);
                if (!e) {
                    --depth_;
                    return std::nullopt;
                }
                kids.push_back(*e);
            }
            --depth_;
            return wrap(fill(o->skeleton, kids));
        }
        if (budget <= 0) {
            last_stuck_ = describe(node);
            return std::nullopt;
        }
        std::set<std::string> reserved(scope_.begin(), scope_.end());
        for (const auto& [_, e] : node.size)
            for (const auto& v : free_variables(e)) reserved.insert(v);
        auto options = nongreedy_options(node, namer_, reserved);
        if (options.empty()) {
            last_stuck_ = describe(node);
            return std::nullopt;
        }
        for (const auto& o : options) {
            State saved = save();
            int b = budget - 1;
            trace(o.rule + (o.domain.empty() ? "" : " on " + o.domain));
            ++depth_;
            std::optional<Expr> e;
            if (o.rule == "DomainRecursion") {
                e = domain_recursion(node, o.domain, b);
            } else {
                bool sum = o.skeleton.kind() == Expr::Kind::Sum;
                if (sum) scope_.push_back(o.skeleton.name());
                std::vector<Expr> kids;
                for (const auto& child : o.children) {
                    auto k = o.children.size() == 1 ? solve(child, b) : solve_child(child, b);
                    if (!k) break;
                    kids.push_back(*k);
                }
                if (sum) scope_.pop_back();
                if (kids.size() == o.children.size()) e = fill(o.skeleton, kids);
            }
            --depth_;
            if (e) {
                budget = b;
                return wrap(*e);
            }
            restore(std::move(saved));
        }
        return std::nullopt;
    }

    std::vector<Equation> equations;
    std::map<std::string, FunctionInfo> functions;
    std::vector<std::string> completed;
    std::string last_stuck_;

private:
    struct State {
        Namer namer;
        std::vector<Equation> equations;
        std::map<std::string, FunctionInfo> functions;
        std::vector<std::string> completed;
    };

    State save() const { return {namer_, equations, functions, completed}; }
    void restore(State s) {
        namer_ = std::move(s.namer);
        equations = std::move(s.equations);
        functions = std::move(s.functions);
        completed = std::move(s.completed);
    }

    void trace(const std::string& line) const {
        if (options_.trace) *options_.trace << std::string(2 * static_cast<std::size_t>(depth_), ' ') << line << "\n";
    }

    std::optional<Expr> solve_child(const Node& child, int& budget) {
        if (options_.mode == SearchMode::Greedy) return solve(child, budget);
        for (int b = 0; b <= budget; ++b) {
            State saved = save();
            int left = b;
            if (auto e = solve(child, left)) {
                budget -= b - left;
                return e;
            }
            restore(std::move(saved));
        }
        return std::nullopt;
    }

    std::optional<std::vector<Expr>> arguments(const Node& node, const Sentence& key, const Weights& weights,
                                               const std::vector<std::string>& domains) const {
        auto m = match(node.s, node.w, key, weights);
        if (!m) return std::nullopt;
        std::map<std::string, std::string> inverse;
        for (const auto& [a, b] : *m) inverse[b] = a;
        std::vector<Expr> args;
        for (const auto& d : domains) args.push_back(node.size.at(inverse.at(d)));
        return args;
    }

    std::optional<Expr> cache_lookup(const Node& node) const {
        for (const auto& name : completed) {
            const auto& info = functions.at(name);
            if (auto args = arguments(node, info.sentence, info.weights, info.domains))
                return Expr::call(name, std::move(*args));
        }
        if (!stack_.empty()) {
            const Frame& f = stack_.back();
            if (auto args = arguments(node, f.sentence, f.weights, f.domains)) {
                std::vector<Expr> simplified;
                for (const auto& a : *args) simplified.push_back(simplify(a));
                bool same = true;
                for (std::size_t i = 0; i < simplified.size(); ++i)
                    same = same && simplified[i] == Expr::variable(f.params[i]);
                if (!same) return Expr::call(f.name, std::move(simplified));
            }
        }
        return std::nullopt;
    }

    std::optional<Expr> domain_recursion(const Node& node, const std::string& x, int& budget) {
        auto domains = recursion_domains(node, x);
        auto params = recursion_params(node, domains);
        std::string name = namer_.function();
        Node body = recursion_body(node, domains, params, namer_);
        stack_.push_back({name, params, domains, node.s, node.w});
        auto outer = std::move(scope_);
        scope_ = params;
        std::optional<Expr> e;
        try {
            e = solve(body, budget);
        } catch (...) {
            stack_.pop_back();
            scope_ = std::move(outer);
            throw;
        }
        stack_.pop_back();
        scope_ = std::move(outer);
        if (!e) return std::nullopt;
        Expr simplified = simplify(*e);
        for (const auto& c : calls(simplified))
            if (c.name() == name && !well_founded(c.children(), params)) return std::nullopt;
        std::set<std::string> allowed(params.begin(), params.end());
        for (const auto& v : free_variables(simplified))
            if (!allowed.count(v)) throw InternalError("definition of " + name + " mentions unbound '" + v + "'");

        std::vector<Expr> head;
        for (const auto& p : params) head.push_back(Expr::variable(p));
        functions[name] = FunctionInfo{name, params, domains, node.s, node.w};
        equations.push_back({name, std::move(head), simplified});
        completed.push_back(name);
        std::vector<Expr> args;
        for (const auto& d : domains) args.push_back(node.size.at(d));
        return Expr::call(name, std::move(args));
    }

    Namer& namer_;
    const CompileOptions& options_;
    CompileStats& stats_;
    std::vector<Frame> stack_;
    std::vector<std::string> scope_;
    int depth_ = 0;
};

Node root_node(const Sentence& sentence, const Weights& weights, const std::vector<std::string>& entry_domains,
               const std::vector<std::string>& params) {
    if (entry_domains.size() != params.size()) throw InternalError("entry domains and parameters differ in length");
    Node root;
    root.s = sentence;
    root.w = weights;
    for (std::size_t i = 0; i < entry_domains.size(); ++i) root.size[entry_domains[i]] = Expr::variable(params[i]);
    for (const auto& [d, n] : sentence.fixed_sizes) root.size[d] = Expr::constant(static_cast<long>(n));
    for (const auto& [d, dom] : sentence.domains)
        if (!dom.parent && !root.size.count(d)) throw Error("domain '" + d + "' has no size");
    return root;
}

}  // namespace

Compiled compile_root(const Sentence& sentence, const Weights& weights, const std::vector<std::string>& entry_domains,
                      const std::vector<std::string>& params, Namer& namer, const CompileOptions& options,
                      CompileStats* stats) {
    CompileStats local;
    CompileStats& st = stats ? *stats : local;
    Node root = root_node(sentence, weights, entry_domains, params);
    std::string name = namer.function();
    Search search(namer, options, st);

    std::optional<Expr> body;
    if (options.mode == SearchMode::Greedy) {
        int budget = options.greedy_budget;
        body = search.solve(root, budget);
        if (body) st.nongreedy = options.greedy_budget - budget;
    } else {
        Namer start = namer;
        for (int limit = 0; limit <= options.max_nongreedy && !body; ++limit) {
            namer = start;
            search.equations.clear();
            search.functions.clear();
            search.completed.clear();
            int budget = limit;
            body = search.solve(root, budget);
            if (body) st.nongreedy = limit - budget;
        }
    }
    if (!body) {
        std::string stuck = search.last_stuck_.empty() ? describe(root) : search.last_stuck_;
        throw CompilationFailure("no derivation found", stuck);
    }

    Compiled out;
    out.entry = name;
    std::vector<Expr> head;
    for (const auto& p : params) head.push_back(Expr::variable(p));
    out.equations.push_back({name, std::move(head), simplify(*body)});
    out.functions[name] = FunctionInfo{name, params, entry_domains, sentence, weights};
    for (auto& e : search.equations) out.equations.push_back(std::move(e));
    for (auto& [n, f] : search.functions) out.functions[n] = std::move(f);
    return out;
}

std::vector<std::string> definition_order(const std::vector<Equation>& equations) {
    std::map<std::string, std::set<std::string>> callees;
    std::vector<std::string> names;
    for (const auto& eq : equations) {
        if (!callees.count(eq.function)) names.push_back(eq.function);
        auto& out = callees[eq.function];
        for (const auto& c : calls(eq.body))
            if (c.name() != eq.function) out.insert(c.name());
    }
    std::vector<std::string> order;
    std::map<std::string, int> state;
    std::function<void(const std::string&)> visit = [&](const std::string& f) {
        int& s = state[f];
        if (s == 2) return;
        if (s == 1) throw InternalError("mutual recursion through '" + f + "'");
        s = 1;
        if (auto it = callees.find(f); it != callees.end())
            for (const auto& g : it->second) visit(g);
        state[f] = 2;
        order.push_back(f);
    };
    for (const auto& n : names) visit(n);
    return order;
}

}  // namespace detail

std::vector<std::string> entry_domains(const WfomcInstance& instance) {
    const Sentence& s = instance.sentence;
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& d : instance.domain_order)
        if (!s.fixed_sizes.count(d) && seen.insert(d).second) out.push_back(d);
    for (const auto& [d, dom] : s.domains)
        if (!dom.parent && !s.fixed_sizes.count(d) && seen.insert(d).second) out.push_back(d);
    return out;
}

Program compile(const Sentence& sentence, const Weights& weights, const std::vector<std::string>& entry,
                const CompileOptions& options, CompileStats* stats) {
    detail::Namer namer;
    auto c = detail::compile_root(sentence, weights, entry, detail::parameter_names(entry.size()), namer, options,
                                  stats);
    Program p;
    p.entry = c.entry;
    p.equations = std::move(c.equations);
    p.functions = std::move(c.functions);
    p.order = detail::definition_order(p.equations);
    return p;
}

Program compile(const WfomcInstance& instance, const CompileOptions& options, CompileStats* stats) {
    return compile(instance.sentence, instance.weights, entry_domains(instance), options, stats);
}

std::vector<RuleApplication> applicable_rules(const Sentence& sentence, const Weights& weights) {
    using namespace detail;
    std::vector<std::string> entry;
    for (const auto& [d, dom] : sentence.domains)
        if (!dom.parent && !sentence.fixed_sizes.count(d)) entry.push_back(d);
    Namer namer;
    Node root = normalize(root_node(sentence, weights, entry, parameter_names(entry.size())), namer);
    Reduction r = reduce(root, namer);
    std::vector<RuleApplication> out;
    std::set<std::string> seen;
    for (const auto& rule : r.rules) {
        if (!seen.insert(rule).second) continue;
        std::vector<Expr> fs = r.factors;
        fs.push_back(hole(0));
        out.push_back({rule, true, r.zero ? Expr::constant(0L) : Expr::mul(fs), {r.node.s}});
    }
    if (r.zero || r.node.s.clauses.empty()) return out;
    if (auto o = branching_option(r.node, namer)) {
        RuleApplication a{o->rule, true, o->skeleton, {}};
        for (const auto& c : o->children) a.children.push_back(c.s);
        out.push_back(std::move(a));
    }
    std::set<std::string> reserved;
    for (const auto& [_, e] : r.node.size)
        for (const auto& v : free_variables(e)) reserved.insert(v);
    for (const auto& o : nongreedy_options(r.node, namer, reserved)) {
        RuleApplication a{o.rule, false, o.skeleton, {}};
        if (o.rule == "DomainRecursion") {
            auto domains = recursion_domains(r.node, o.domain);
            auto params = recursion_params(r.node, domains);
            std::string name = namer.function();
            std::vector<Expr> args;
            for (const auto& d : domains) args.push_back(r.node.size.at(d));
            a.skeleton = Expr::call(name, std::move(args));
            a.children.push_back(recursion_body(r.node, domains, params, namer).s);
        } else {
            for (const auto& c : o.children) a.children.push_back(c.s);
        }
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace fomc
