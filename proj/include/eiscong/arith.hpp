#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "eiscong/error.hpp"

namespace eiscong {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// "n" for integers, "num/den" otherwise.
inline std::string to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string to_string(const Int& z) { return z.get_str(); }

inline Rat parse_rat(const std::string& s) {
    Rat r;
    if (s.empty() || r.set_str(s, 10) != 0)
        fail(ErrorKind::parse, "not a rational number: '" + s + "'");
    if (r.get_den() == 0) fail(ErrorKind::parse, "zero denominator: '" + s + "'");
    r.canonicalize();
    return r;
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    if (r < 0) r += abs(m);
    return r;
}

inline Int floor_rat(const Rat& r) { return floor_div(r.get_num(), r.get_den()); }

inline Int ipow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Rat rpow(const Rat& b, long e) {
    if (e < 0) {
        require(b != 0, ErrorKind::domain, "zero to a negative power");
        return rpow(1 / b, -e);
    }
    Int n, d;
    mpz_pow_ui(n.get_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(e));
    return make_rat(n, d);
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline long lcm(long a, long b) { return a / std::gcd(a, b) * b; }

inline bool is_probable_prime(const Int& n) {
    return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

/// Exact integer square root when n is a perfect square.
inline bool exact_sqrt(const Int& n, Int& root) {
    if (n < 0) return false;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    return true;
}

inline std::vector<long> primes_up_to(long n) {
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    for (long i = 2; i <= n; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        out.push_back(i);
        for (long j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    return out;
}

namespace detail {

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
inline Int pollard_brent(const Int& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        Int y = 2, x, q = 1, g = 1, ys;
        const unsigned long m = 64;
        unsigned long r = 1;
        auto f = [&](const Int& v) { return mod_pos(v * v + c, n); };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mod_pos(q * abs(x - y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        } while (g == 1 && r < (1ul << 24));
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(abs(x - ys), n);
            } while (g == 1);
        }
        if (g != n && g != 1) return g;
    }
}

inline void factor_into(const Int& n, std::map<Int, unsigned>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        ++out[n];
        return;
    }
    Int d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace detail

/// Prime factorization of |n| (n != 0), ascending.
inline std::vector<std::pair<Int, unsigned>> factor_integer(const Int& n_in) {
    require(n_in != 0, ErrorKind::domain, "cannot factor zero");
    Int n = abs(n_in);
    std::map<Int, unsigned> acc;
    for (unsigned long p = 2; p < 1000 && n > 1; ++p) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++acc[Int(p)];
            n /= p;
        }
    }
    detail::factor_into(n, acc);
    return {acc.begin(), acc.end()};
}

inline std::vector<Int> prime_divisors(const Int& n) {
    std::vector<Int> out;
    for (auto& [p, e] : factor_integer(n)) out.push_back(p);
    return out;
}

inline bool is_squarefree(const Int& n) {
    for (auto& [p, e] : factor_integer(n))
        if (e > 1) return false;
    return true;
}

inline long to_long(const Int& z) {
    require(z.fits_slong_p(), ErrorKind::resource, "integer too large: " + z.get_str());
    return z.get_si();
}

/// Multiplicative order of a modulo n (gcd(a, n) = 1).
inline long multiplicative_order(long a, long n) {
    if (n == 1) return 1;
    long x = ((a % n) + n) % n, k = 1;
    while (x != 1) {
        x = static_cast<long>((static_cast<__int128>(x) * a) % n);
        x = (x + n) % n;
        ++k;
        require(k <= n, ErrorKind::domain, "element not invertible");
    }
    return k;
}

/// Square root of a modulo an odd prime p (Tonelli-Shanks); false if a is a non-residue.
inline bool sqrt_mod(const Int& a_in, const Int& p, Int& root) {
    Int a = mod_pos(a_in, p);
    if (a == 0) {
        root = 0;
        return true;
    }
    if (p == 2) {
        root = a;
        return true;
    }
    if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) return false;
    Int q = p - 1;
    unsigned long s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    Int c, x, t, b;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    Int e = (q + 1) / 2;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    unsigned long m = s;
    while (t != 1) {
        unsigned long i = 0;
        Int tt = t;
        while (tt != 1) {
            tt = mod_pos(tt * tt, p);
            ++i;
        }
        b = c;
        for (unsigned long j = 0; j + i + 1 < m; ++j) b = mod_pos(b * b, p);
        x = mod_pos(x * b, p);
        c = mod_pos(b * b, p);
        t = mod_pos(t * c, p);
        m = i;
    }
    root = x;
    return true;
}

inline long euler_phi(long n) {
    long r = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

} // namespace eiscong
