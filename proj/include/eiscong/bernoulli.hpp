#pragma once

#include <mutex>
#include <vector>

#include "eiscong/arith.hpp"

namespace eiscong {

/// Binomial coefficient C(n, k).
inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline Int factorial(long n) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

/// Bernoulli number B_n with B_1 = -1/2.
inline Rat bernoulli(long n) {
    static std::mutex mu;
    static std::vector<Rat> table{Rat(1)};
    std::lock_guard<std::mutex> lock(mu);
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    while (static_cast<long>(table.size()) <= n) {
        const long m = static_cast<long>(table.size());
        Rat s = 0;
        for (long j = 0; j < m; ++j) s += Rat(binomial(m + 1, j)) * table[static_cast<std::size_t>(j)];
        table.push_back(-s / Rat(m + 1));
    }
    return table[static_cast<std::size_t>(n)];
}

/// Bernoulli polynomial B_n(x) = sum_j C(n, j) B_j x^(n-j).
inline Rat bernoulli_poly(long n, const Rat& x) {
    Rat s = 0, xp = 1;
    // Horner from the top coefficient B_n down would need the reversed order;
    // accumulate powers of x directly instead.
    for (long j = n; j >= 0; --j) {
        s += Rat(binomial(n, j)) * bernoulli(j) * xp;
        xp *= x;
    }
    return s;
}

} // namespace eiscong
