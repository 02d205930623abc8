#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "fomc/frontend.hpp"
#include "fomc/logic.hpp"

namespace fomc::test {

inline std::string corpus_path(const std::string& name) { return std::string(FOMC_CORPUS_DIR) + "/" + name; }

inline InstanceAst load(const std::string& name) { return parse_instance_file(corpus_path(name)); }

inline Term var(const std::string& name, const std::string& domain) { return Term::variable(name, domain); }
inline Term cst(const std::string& name, const std::string& domain) { return Term::constant(name, domain); }

inline Literal pos(const std::string& p, std::vector<Term> args) { return {Atom::pred(p, std::move(args)), true}; }
inline Literal neg(const std::string& p, std::vector<Term> args) { return {Atom::pred(p, std::move(args)), false}; }
inline Literal eq(Term a, Term b) { return {Atom::equality(std::move(a), std::move(b)), true}; }
inline Literal neq(Term a, Term b) { return {Atom::equality(std::move(a), std::move(b)), false}; }

inline mpz_class factorial(unsigned long n) {
    mpz_class out = 1;
    for (unsigned long i = 2; i <= n; ++i) out *= i;
    return out;
}

inline mpz_class power(unsigned long base, unsigned long exp) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
    return out;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

// Closed form for friends and smokers: with k smokers, friendships from
// smokers to non-smokers are forbidden, cancer is forced on smokers and free
// elsewhere.
inline mpz_class friends_smokers(unsigned long n) {
    mpz_class total = 0;
    for (unsigned long k = 0; k <= n; ++k) total += binomial(n, k) * power(2, n * n - k * (n - k) + n - k);
    return total;
}

// Every size vector over `domains` with entries in [0, max].
inline std::vector<DomainSizes> size_grid(const std::vector<std::string>& domains, std::uint64_t max) {
    std::vector<DomainSizes> out{{}};
    for (const auto& d : domains) {
        std::vector<DomainSizes> next;
        for (const auto& s : out)
            for (std::uint64_t v = 0; v <= max; ++v) {
                auto t = s;
                t[d] = v;
                next.push_back(t);
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace fomc::test
