#pragma once

// Support code for programs emitted by the fomc compiler. Requires GMP's C++
// interface (link with -lgmpxx -lgmp).

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <unordered_map>
#include <vector>

#define FOMC_RUNTIME_VERSION 1

namespace fomc_rt {

using BigInt = mpz_class;
using Int = std::int64_t;

template <std::size_t N>
using Key = std::array<Int, N>;

template <std::size_t N>
struct KeyHash {
    std::size_t operator()(const Key<N>& key) const {
        std::size_t h = N;
        for (Int x : key) h ^= std::hash<Int>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

template <std::size_t N>
using Cache = std::unordered_map<Key<N>, BigInt, KeyHash<N>>;

inline BigInt big(const char* digits) { return BigInt(digits, 10); }

inline BigInt pow(const BigInt& base, Int exponent) {
    if (exponent < 0) {
        std::cerr << "negative exponent\n";
        std::exit(3);
    }
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exponent));
    return out;
}

inline BigInt sign_power(Int exponent) { return exponent % 2 == 0 ? BigInt(1) : BigInt(-1); }

// Iterative product over k terms; zero outside 0 <= k <= n.
inline BigInt binom(Int n, Int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt out = 1;
    for (Int i = 1; i <= k; ++i) {
        out *= n - k + i;
        out /= i;
    }
    return out;
}

inline BigInt indicator(Int low, Int subject, Int high, bool bounded) {
    return subject >= low && (!bounded || subject <= high) ? BigInt(1) : BigInt(0);
}

inline Int to_int(const BigInt& value) { return value.get_si(); }

// Reads exactly `count` non-negative decimal arguments or exits with status 2.
inline std::vector<Int> parse_args(int argc, char** argv, std::size_t count, const char* usage) {
    if (static_cast<std::size_t>(argc - 1) != count) {
        std::cerr << "usage: " << argv[0] << " " << usage << "\n";
        std::exit(2);
    }
    std::vector<Int> out;
    for (int i = 1; i < argc; ++i) {
        std::string s = argv[i];
        bool digits = !s.empty() && s.size() <= 18;
        for (char c : s) digits = digits && c >= '0' && c <= '9';
        if (!digits) {
            std::cerr << "invalid size '" << s << "'\nusage: " << argv[0] << " " << usage << "\n";
            std::exit(2);
        }
        out.push_back(std::stoll(s));
    }
    return out;
}

}  // namespace fomc_rt
