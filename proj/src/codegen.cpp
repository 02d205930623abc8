#include "fomc/codegen.hpp"

#include <algorithm>
#include <sstream>

namespace fomc {

namespace {

std::string fn(const std::string& name) { return "fn_" + name; }
std::string var(const std::string& name) { return "v_" + name; }

std::string int_literal(const mpz_class& v) {
    if (!v.fits_slong_p()) throw Error("constant " + v.get_str() + " does not fit a machine integer");
    return "fomc_rt::Int(" + v.get_str() + ")";
}

std::string big_literal(const mpz_class& v) {
    if (v.fits_slong_p()) return "fomc_rt::BigInt(" + v.get_str() + "L)";
    return "fomc_rt::big(\"" + v.get_str() + "\")";
}

class Emitter {
public:
    std::string big(const Expr& e) {
        switch (e.kind()) {
            case Expr::Kind::Const:
                return big_literal(e.value());
            case Expr::Kind::Var:
                return "fomc_rt::BigInt(static_cast<long>(" + var(e.name()) + "))";
            case Expr::Kind::Indicator:
                return "fomc_rt::indicator(" + std::to_string(e.low()) + ", " + integer(e[0]) + ", " +
                       std::to_string(e.high().value_or(0)) + ", " + (e.high() ? "true" : "false") + ")";
            case Expr::Kind::Binom:
                return "fomc_rt::binom(" + integer(e[0]) + ", " + integer(e[1]) + ")";
            case Expr::Kind::Pow:
                if (e[0].is_const(-1)) return "fomc_rt::sign_power(" + integer(e[1]) + ")";
                return "fomc_rt::pow(" + big(e[0]) + ", " + integer(e[1]) + ")";
            case Expr::Kind::Add:
            case Expr::Kind::Mul: {
                const char* op = e.kind() == Expr::Kind::Add ? " + " : " * ";
                std::string s = "fomc_rt::BigInt(" + big(e.children()[0]) + ")";
                for (std::size_t i = 1; i < e.children().size(); ++i) s = "(" + s + op + big(e.children()[i]) + ")";
                return s;
            }
            case Expr::Kind::Sum:
                return "[&] { fomc_rt::BigInt acc = 0; for (fomc_rt::Int " + var(e.name()) + " = " + integer(e[0]) +
                       "; " + var(e.name()) + " <= " + integer(e[1]) + "; ++" + var(e.name()) + ") acc += " +
                       big(e[2]) + "; return acc; }()";
            case Expr::Kind::Call: {
                std::string s = fn(e.name()) + "(";
                for (std::size_t i = 0; i < e.children().size(); ++i) s += (i ? ", " : "") + integer(e[i]);
                return s + ")";
            }
        }
        throw InternalError("unknown expression kind");
    }

    // Machine-integer rendering for sizes, indices and exponents.
    std::string integer(const Expr& e) {
        switch (e.kind()) {
            case Expr::Kind::Const:
                return int_literal(e.value());
            case Expr::Kind::Var:
                return var(e.name());
            case Expr::Kind::Add:
            case Expr::Kind::Mul: {
                const char* op = e.kind() == Expr::Kind::Add ? " + " : " * ";
                std::string s;
                for (std::size_t i = 0; i < e.children().size(); ++i) s += (i ? op : "") + integer(e.children()[i]);
                return "(" + s + ")";
            }
            default:
                return "fomc_rt::to_int(" + big(e) + ")";
        }
    }
};

std::string head_condition(const Equation& eq, const std::vector<std::string>& params) {
    std::string s;
    for (std::size_t i = 0; i < eq.head.size(); ++i)
        if (eq.head[i].is_const()) s += (s.empty() ? "" : " && ") + var(params[i]) + " == " + eq.head[i].value().get_str();
    return s;
}

std::string case_name(const Equation& eq) {
    std::string s = eq.function;
    for (const auto& h : eq.head) s += "_" + (h.is_const() ? h.value().get_str() : std::string("x"));
    return s;
}

std::string signature(const std::string& name, const std::vector<std::string>& params) {
    std::string s = "fomc_rt::BigInt " + name + "(";
    for (std::size_t i = 0; i < params.size(); ++i) s += (i ? ", " : "") + std::string("fomc_rt::Int ") + var(params[i]);
    return s + ")";
}

std::string key(const std::vector<std::string>& params) {
    std::string s = "{";
    for (std::size_t i = 0; i < params.size(); ++i) s += (i ? ", " : "") + var(params[i]);
    return s + "}";
}

}  // namespace

std::string emit_program(const Program& program) {
    std::map<std::string, std::vector<const Equation*>> cases;
    std::map<std::string, const Equation*> general;
    for (const auto& eq : program.equations) {
        if (!eq.is_base_case()) {
            if (general.count(eq.function)) throw Error("function " + eq.function + " has two general definitions");
            general[eq.function] = &eq;
        } else {
            cases[eq.function].push_back(&eq);
        }
    }
    for (const auto& name : program.order)
        if (!general.count(name)) throw Error("function " + name + " has no general definition");

    Emitter em;
    std::ostringstream os;
    os << "// Generated by fomc. Runtime header version " << kRuntimeVersion << ".\n";
    os << "#include \"" << kRuntimeHeader << "\"\n\n";
    os << "#if FOMC_RUNTIME_VERSION != " << kRuntimeVersion << "\n#error \"runtime header version mismatch\"\n#endif\n\n";
    for (const auto& name : program.order)
        os << signature(fn(name), program.function(name).params) << ";\n";
    os << "\n";

    for (const auto& name : program.order) {
        const auto& params = program.function(name).params;
        const std::size_t n = params.size();
        auto base = cases[name];
        std::stable_sort(base.begin(), base.end(), [](const Equation* a, const Equation* b) {
            std::vector<bool> ma, mb;
            for (const auto& h : a->head) ma.push_back(h.is_const());
            for (const auto& h : b->head) mb.push_back(h.is_const());
            auto ca = std::count(ma.begin(), ma.end(), true);
            auto cb = std::count(mb.begin(), mb.end(), true);
            return ca != cb ? ca > cb : ma > mb;
        });

        for (const Equation* eq : base) {
            std::string c = case_name(*eq);
            os << "static fomc_rt::Cache<" << n << "> cache_" << c << ";\n";
            os << "static " << signature("case_" + c, params) << " {\n";
            for (std::size_t i = 0; i < n; ++i)
                if (eq->head[i].is_var() && eq->head[i].name() != params[i])
                    throw Error("base case " + to_string(*eq) + " renames parameter " + params[i]);
            os << "    auto it = cache_" << c << ".find(" << key(params) << ");\n";
            os << "    if (it != cache_" << c << ".end()) return it->second;\n";
            os << "    fomc_rt::BigInt value = " << em.big(eq->body) << ";\n";
            os << "    cache_" << c << ".emplace(fomc_rt::Key<" << n << ">" << key(params) << ", value);\n";
            os << "    return value;\n}\n\n";
        }

        os << "static fomc_rt::Cache<" << n << "> cache_" << name << ";\n";
        os << signature(fn(name), params) << " {\n";
        os << "    auto it = cache_" << name << ".find(" << key(params) << ");\n";
        os << "    if (it != cache_" << name << ".end()) return it->second;\n";
        for (const Equation* eq : base)
            os << "    if (" << head_condition(*eq, params) << ") return case_" << case_name(*eq) << "("
               << key(params).substr(1, key(params).size() - 2) << ");\n";
        os << "    fomc_rt::BigInt value = " << em.big(general.at(name)->body) << ";\n";
        os << "    cache_" << name << ".emplace(fomc_rt::Key<" << n << ">" << key(params) << ", value);\n";
        os << "    return value;\n}\n\n";
    }

    const auto& entry = program.function(program.entry);
    std::string usage;
    for (std::size_t i = 0; i < entry.domains.size(); ++i) usage += (i ? " " : "") + std::string("|") + entry.domains[i] + "|";
    os << "int main(int argc, char** argv) {\n";
    os << "    auto args = fomc_rt::parse_args(argc, argv, " << entry.params.size() << ", \"" << usage << "\");\n";
    os << "    std::cout << " << fn(program.entry) << "(";
    for (std::size_t i = 0; i < entry.params.size(); ++i) os << (i ? ", " : "") << "args[" << i << "]";
    os << ").get_str() << \"\\n\";\n";
    os << "    return 0;\n}\n";
    return os.str();
}

}  // namespace fomc
