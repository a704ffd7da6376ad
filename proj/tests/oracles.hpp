#pragma once
// Independent reference computations. None of these call into the library's
// arithmetic except to read character values.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <tuple>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eiscong/eiscong.hpp"

namespace oracle {

using eiscong::Int;
using eiscong::Rat;

inline Int power(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Int sigma(long n, unsigned long e) {
    Int s = 0;
    for (long a = 1; a <= n; ++a)
        if (n % a == 0) s += power(Int(a), e);
    return s;
}

/// Bernoulli numbers B_0..B_n (B_1 = +1/2) by the Akiyama-Tanigawa algorithm.
inline std::vector<Rat> bernoulli_table(long n) {
    std::vector<Rat> out(n + 1), a(n + 1);
    for (long m = 0; m <= n; ++m) {
        a[m] = Rat(1, m + 1);
        for (long j = m; j >= 1; --j) {
            a[j - 1] = Rat(j) * (a[j - 1] - a[j]);
            a[j - 1].canonicalize();
        }
        out[m] = a[0];
    }
    return out;
}

/// B_k(x) from the binomial expansion, with the B_1 = -1/2 convention.
inline Rat bernoulli_polynomial(long k, const Rat& x) {
    auto B = bernoulli_table(k);
    if (k >= 1) B[1] = Rat(-1, 2);
    Rat s = 0, xp = 1;
    std::vector<Rat> xs(k + 1);
    for (long i = 0; i <= k; ++i) {
        xs[i] = xp;
        xp *= x;
    }
    Int binom = 1;
    for (long j = 0; j <= k; ++j) {
        s += Rat(binom) * B[j] * xs[k - j];
        binom = binom * (k - j) / (j + 1);
    }
    return s;
}

/// L(chi_D, 1 - k) for the Kronecker character of a fundamental discriminant D.
inline Rat kronecker_l_value(long D, long k) {
    const long M = std::labs(D);
    Rat s = 0;
    for (long a = 1; a <= M; ++a) {
        int chi = mpz_kronecker_si(Int(D).get_mpz_t(), a);
        if (chi) s += Rat(chi) * bernoulli_polynomial(k, Rat(a, M));
    }
    s *= Rat(power(Int(M), k - 1)) / Rat(-k);
    return s;
}

inline Rat riemann_zeta_negative(long k) { // zeta(1 - k), k >= 2
    return -bernoulli_table(k)[k] / Rat(k);
}

inline long fundamental_discriminant(long D) { return D % 4 == 1 ? D : 4 * D; }

/// zeta_F(1 - k) for F = Q(sqrt D) by Siegel's formula
///   zeta_F(1 - k) = 2 zeta(1 - 2k) sum_{b^2 < disc, b = disc mod 2} sigma_{k-1}((disc - b^2) / 4),
/// valid for k = 2 and k = 4.
inline Rat siegel_zeta(long D, long k) {
    const long disc = fundamental_discriminant(D);
    Int s = 0;
    for (long b = -disc; b <= disc; ++b) {
        if (b * b >= disc || ((b - disc) % 2 + 2) % 2 != 0) continue;
        s += sigma((disc - b * b) / 4, static_cast<unsigned long>(k - 1));
    }
    return Rat(2) * riemann_zeta_negative(2 * k) * Rat(s);
}

/// Product formula zeta_F(1 - k) = zeta(1 - k) L(chi_disc, 1 - k).
inline Rat dedekind_zeta_product(long D, long k) {
    return riemann_zeta_negative(k) * kronecker_l_value(fundamental_discriminant(D), k);
}

/// Ramanujan tau(1..N) from q prod (1 - q^n)^24 via n a_n = -24 sum sigma_1(j) a_{n-j}.
inline std::vector<__int128> ramanujan_tau(long N) {
    std::vector<__int128> a(N + 1, 0), tau(N + 1, 0);
    std::vector<long> s1(N + 1, 0);
    for (long d = 1; d <= N; ++d)
        for (long m = d; m <= N; m += d) s1[m] += d;
    a[0] = 1;
    for (long n = 1; n < N; ++n) {
        __int128 s = 0;
        for (long j = 1; j <= n; ++j) s += static_cast<__int128>(s1[j]) * a[n - j];
        a[n] = -24 * s / n;
    }
    for (long n = 1; n <= N; ++n) tau[n] = a[n - 1];
    return tau;
}

inline std::string to_string(__int128 x) {
    bool neg = x < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-x) : static_cast<unsigned __int128>(x);
    std::string s;
    do {
        s += static_cast<char>('0' + static_cast<int>(u % 10));
        u /= 10;
    } while (u);
    if (neg) s += '-';
    return {s.rbegin(), s.rend()};
}

/// Eigenform data for Delta: eigenvalue tau(q) at every prime q <= N.
inline eiscong::EigenformData delta_eigenform(long N) {
    auto tau = ramanujan_tau(N);
    eiscong::EigenformData d;
    d.field = "rational";
    d.level = "1";
    d.k = 12;
    d.character = "trivial";
    d.polynomial = {Rat(0), Rat(1)};
    d.provenance = "q prod (1 - q^n)^24";
    for (long q : eiscong::primes_up_to(N)) d.eigenvalues.push_back({std::to_string(q) + ".1", {Rat(Int(to_string(tau[q])))}});
    return d;
}

/// Narrow and wide class numbers of Q(sqrt D) from cycles of reduced
/// indefinite binary quadratic forms of the field discriminant.
struct FormClassNumbers {
    long h = 0, h_plus = 0;
};

inline FormClassNumbers form_class_numbers(long D) {
    using Form = std::tuple<long, long, long>;
    const long disc = fundamental_discriminant(D);
    long s = 0;
    while ((s + 1) * (s + 1) <= disc) ++s; // floor sqrt; disc is not a square
    auto reduced = [&](long a, long b) { return b >= 1 && b <= s && 2 * std::labs(a) + b > s && 2 * std::labs(a) - b <= s; };
    std::set<Form> forms;
    for (long b = 1; b <= s; ++b) {
        if ((b - disc) % 2 != 0) continue;
        long ac = (b * b - disc) / 4; // negative
        for (long a = 1; a <= -ac; ++a) {
            if ((-ac) % a) continue;
            for (long sa : {a, -a}) {
                long c = ac / sa;
                if (reduced(sa, b)) forms.insert({sa, b, c});
            }
        }
    }
    auto rho = [&](const Form& f) {
        auto [a, b, c] = f;
        long m = 2 * std::labs(c);
        long bp = -b;
        // Largest b' <= s with b' = -b mod 2|c|.
        bp = s - (((s - bp) % m) + m) % m;
        long ap = (bp * bp - disc) / (4 * c);
        return Form{c, bp, ap};
    };
    std::map<Form, int> cycle;
    int cycles = 0;
    for (const auto& f : forms) {
        if (cycle.count(f)) continue;
        Form g = f;
        while (!cycle.count(g)) {
            cycle[g] = cycles;
            g = rho(g);
        }
        ++cycles;
    }
    // Wide classes: identify (a, b, c) with (-a, b, -c).
    std::map<int, int> parent;
    for (int i = 0; i < cycles; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& [f, id] : cycle) {
        auto [a, b, c] = f;
        Form neg{-a, b, -c};
        auto it = cycle.find(neg);
        if (it != cycle.end()) parent[find(id)] = find(it->second);
    }
    std::set<int> roots;
    for (int i = 0; i < cycles; ++i) roots.insert(find(i));
    return {static_cast<long>(roots.size()), cycles};
}

/// Number of primitive Dirichlet characters mod m.
inline long primitive_dirichlet_count(long m) {
    // Multiplicative: p -> p - 2, p^e (e >= 2) -> p^(e-2) (p - 1)^2.
    long r = 1;
    auto local = [](long p, int e) {
        long pe2 = 1;
        for (int i = 0; i < e - 2; ++i) pe2 *= p;
        return e == 1 ? p - 2 : pe2 * (p - 1) * (p - 1);
    };
    for (long p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e) r *= local(p, e);
    }
    if (m > 1) r *= local(m, 1);
    return r;
}

inline long euler_phi(long m) {
    long r = 0;
    for (long a = 1; a <= m; ++a)
        if (std::gcd(a, m) == 1) ++r;
    return r;
}

/// Complex value of a cyclotomic number in the standard embedding zeta_n = e(1/n).
inline std::complex<long double> embed(const eiscong::Cyclo& v) {
    std::complex<long double> s = 0;
    const long n = v.conductor();
    for (std::size_t i = 0; i < v.coeffs().size(); ++i) {
        long double a = 2 * M_PIl * static_cast<long double>(i) / static_cast<long double>(n);
        s += static_cast<long double>(v.coeffs()[i].get_d()) * std::complex<long double>(cosl(a), sinl(a));
    }
    return s;
}

} // namespace oracle
