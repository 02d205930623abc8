#pragma once

// Algebraic IR for compiled function definitions.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fomc/logic.hpp"

namespace fomc {

// Immutable expression tree with value semantics (nodes are shared).
class Expr {
public:
    enum class Kind : std::uint8_t { Const, Var, Indicator, Binom, Pow, Add, Mul, Sum, Call };

    Expr();  // Const 0

    static Expr constant(mpz_class value);
    static Expr constant(long value) { return constant(mpz_class(value)); }
    static Expr variable(std::string name);
    static Expr add(std::vector<Expr> terms);
    static Expr mul(std::vector<Expr> factors);
    static Expr pow(Expr base, Expr exponent);
    static Expr binom(Expr n, Expr k);
    // [low <= subject <= high]; a missing high means no upper bound.
    static Expr indicator(std::int64_t low, Expr subject, std::optional<std::int64_t> high);
    static Expr sum(std::string index, Expr from, Expr to, Expr body);
    static Expr call(std::string function, std::vector<Expr> args);

    Kind kind() const;
    const mpz_class& value() const;
    // Variable name, sum index or called function.
    const std::string& name() const;
    const std::vector<Expr>& children() const;
    std::int64_t low() const;
    const std::optional<std::int64_t>& high() const;

    // Pow: base, exponent. Binom: n, k. Indicator: subject. Sum: from, to, body.
    const Expr& operator[](std::size_t i) const { return children()[i]; }

    bool is_const() const { return kind() == Kind::Const; }
    bool is_const(long v) const { return is_const() && value() == v; }
    bool is_var() const { return kind() == Kind::Var; }
    bool is_call() const { return kind() == Kind::Call; }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Total structural order.
int compare(const Expr& a, const Expr& b);
inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
inline bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }
inline bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

// e + c, kept unsimplified apart from dropping c = 0.
Expr offset(const Expr& e, long c);

std::set<std::string> free_variables(const Expr& e);
bool contains_call(const Expr& e);
// Every Call node, outermost first, including calls under sums.
std::vector<Expr> calls(const Expr& e);
// Capture-avoiding replacement of free variables.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& mapping);
// Renames called functions.
Expr rename_calls(const Expr& e, const std::map<std::string, std::string>& mapping);

// True when e is non-negative for every non-negative assignment of its free
// variables other than those in `signed_vars`.
bool is_nonnegative(const Expr& e, const std::set<std::string>& signed_vars = {});

// Recognizes `x`, `x - c`, `x + c` and constants.
struct Affine {
    std::optional<std::string> variable;
    std::int64_t offset = 0;
};
std::optional<Affine> affine(const Expr& e);

Expr simplify(const Expr& e);

// Returns nullopt for a call whose value is not available yet.
using CallOracle = std::function<std::optional<mpz_class>(const std::string&, const std::vector<mpz_class>&)>;
using Env = std::map<std::string, mpz_class>;

// Evaluates e. The result is nullopt when some needed call was unresolved;
// every unresolved call met on the way is still passed to the oracle, so a
// caller can resolve them all before retrying. `steps` counts visited nodes.
std::optional<mpz_class> evaluate(const Expr& e, const Env& env, const CallOracle& oracle,
                                  std::uint64_t* steps = nullptr);
// Throws InternalError if a call is left unresolved.
mpz_class expr_eval(const Expr& e, const Env& env, const CallOracle& oracle);

std::string to_string(const Expr& e);

struct Equation {
    std::string function;
    std::vector<Expr> head;  // each a variable or a constant
    Expr body;

    bool is_base_case() const;
};

std::string to_string(const Equation& eq);

// Per-function record: parameter names, the domain behind each position and
// the sentence (with weights) the function counts.
struct FunctionInfo {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> domains;
    Sentence sentence;
    Weights weights;
};

struct Program {
    std::vector<Equation> equations;
    std::map<std::string, FunctionInfo> functions;
    std::vector<std::string> order;  // functions in definition order, callees first
    std::string entry;

    const FunctionInfo& function(const std::string& name) const;
    // The unique non-base-case equation of a function.
    const Equation& definition(const std::string& name) const;
    std::vector<const Equation*> base_cases(const std::string& name) const;
};

std::string to_string(const Program& program);

}  // namespace fomc
