#pragma once

#include <gmpxx.h>

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fomc/algebra.hpp"

namespace fomc::test {

// Random expressions over the free variables a, b, c and the uninterpreted
// functions h and q, evaluable whenever those variables are non-negative.
struct RandomExprs {
    std::mt19937 rng;
    std::vector<std::string> free{"a", "b", "c"};
    std::vector<std::string> indices;

    explicit RandomExprs(unsigned seed) : rng(seed) {}

    int pick(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

    Expr nonneg_var() {
        if (!indices.empty() && pick(2)) return Expr::variable(indices[pick(static_cast<int>(indices.size()))]);
        return Expr::variable(free[pick(3)]);
    }

    // Non-negative under every non-negative assignment.
    Expr small(int depth) {
        switch (depth <= 0 ? pick(2) : pick(4)) {
            case 0: return Expr::constant(pick(3));
            case 1: return nonneg_var();
            case 2: return Expr::add({small(depth - 1), Expr::constant(pick(2))});
            default: return Expr::indicator(pick(2), small(depth - 1), std::nullopt);
        }
    }

    Expr gen(int depth) {
        int choice = depth <= 0 ? pick(3) : pick(12);
        switch (choice) {
            case 0: return Expr::constant(pick(7) - 3);
            case 1:
            case 2: return nonneg_var();
            case 3: {
                std::vector<Expr> ts;
                for (int i = 0, n = 2 + pick(3); i < n; ++i) ts.push_back(gen(depth - 1));
                return Expr::add(std::move(ts));
            }
            case 4: {
                std::vector<Expr> fs;
                for (int i = 0, n = 2 + pick(2); i < n; ++i) fs.push_back(gen(depth - 1));
                return Expr::mul(std::move(fs));
            }
            case 5: return Expr::pow(gen(depth - 2), pick(2) ? Expr::constant(pick(3)) : small(1));
            case 6: return Expr::binom(gen(depth - 1), gen(depth - 1));
            case 7: {
                long lo = pick(4) - 1;
                std::optional<std::int64_t> hi;
                if (pick(2)) hi = lo + pick(3) - 1;
                return Expr::indicator(lo, gen(depth - 1), hi);
            }
            case 8:
            case 9: {
                std::string k = "k" + std::to_string(indices.size());
                Expr from = Expr::constant(pick(3));
                Expr to = pick(3) ? nonneg_var() : Expr::constant(pick(4));
                if (pick(2)) to = offset(to, pick(2));
                indices.push_back(k);
                std::vector<Expr> fs;
                if (pick(3)) fs.push_back(Expr::indicator(pick(3), Expr::variable(k), pick(3) ? std::optional<std::int64_t>(pick(3)) : std::nullopt));
                if (pick(2)) fs.push_back(Expr::binom(to, Expr::variable(k)));
                fs.push_back(gen(depth - 2));
                if (pick(2)) fs.push_back(Expr::call("h", {Expr::variable(k), nonneg_var()}));
                indices.pop_back();
                return Expr::sum(k, from, to, Expr::mul(std::move(fs)));
            }
            default: {
                std::vector<Expr> args;
                for (int i = 0; i < 2; ++i) args.push_back(small(1));
                return Expr::call(pick(2) ? "h" : "q", std::move(args));
            }
        }
    }
};

// Stand-in values for calls to h and q.
inline std::optional<mpz_class> test_oracle(const std::string& f, const std::vector<mpz_class>& a) {
    mpz_class v = f == "h" ? mpz_class(3 * a[0] - 2 * a[1] + 1) : mpz_class(a[0] * a[0] - a[1]);
    return v;
}

}  // namespace fomc::test
