#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "eiscong/cyclotomic.hpp"

namespace eiscong {

/// Prime field F_l with elements as reduced Ints.
struct PrimeField {
    using E = Int;
    Int l;

    explicit PrimeField(Int p) : l(std::move(p)) {}
    E zero() const { return 0; }
    E one() const { return 1; }
    E reduce(const Int& a) const { return mod_pos(a, l); }
    E add(const E& a, const E& b) const { return reduce(a + b); }
    E sub(const E& a, const E& b) const { return reduce(a - b); }
    E mul(const E& a, const E& b) const { return reduce(a * b); }
    E neg(const E& a) const { return reduce(-a); }
    bool is_zero(const E& a) const { return a == 0; }
    bool equal(const E& a, const E& b) const { return a == b; }
    E inv(const E& a) const {
        Int r;
        require(mpz_invert(r.get_mpz_t(), a.get_mpz_t(), l.get_mpz_t()) != 0, ErrorKind::domain, "zero has no inverse");
        return r;
    }
    E from_rat(const Rat& r) const {
        require(r.get_den() % l != 0, ErrorKind::valuation, "denominator divisible by " + l.get_str());
        return mul(reduce(r.get_num()), inv(reduce(r.get_den())));
    }
    template <class Rng> E random(Rng& rng) const {
        gmp_randclass& g = rand_state(rng);
        return Int(g.get_z_range(l));
    }
    Int order() const { return l; }
    long degree() const { return 1; }
    const Int& characteristic() const { return l; }

private:
    template <class Rng> static gmp_randclass& rand_state(Rng& rng) {
        thread_local gmp_randclass g(gmp_randinit_mt);
        g.seed(static_cast<unsigned long>(rng()));
        return g;
    }
};

/// Univariate polynomials over a field K (low degree first, trimmed).
template <class K> struct PolyRing {
    using E = typename K::E;
    using P = std::vector<E>;
    const K& k;

    void trim(P& a) const {
        while (!a.empty() && k.is_zero(a.back())) a.pop_back();
    }
    long deg(const P& a) const { return static_cast<long>(a.size()) - 1; }
    P x() const { return {k.zero(), k.one()}; }
    P constant(const E& c) const {
        P r{c};
        trim(r);
        return r;
    }
    P add(const P& a, const P& b) const {
        P r(std::max(a.size(), b.size()), k.zero());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = k.add(r[i], a[i]);
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = k.add(r[i], b[i]);
        trim(r);
        return r;
    }
    P sub(const P& a, const P& b) const {
        P r(std::max(a.size(), b.size()), k.zero());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = k.add(r[i], a[i]);
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = k.sub(r[i], b[i]);
        trim(r);
        return r;
    }
    P mul(const P& a, const P& b) const {
        if (a.empty() || b.empty()) return {};
        P r(a.size() + b.size() - 1, k.zero());
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (k.is_zero(a[i])) continue;
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
        }
        trim(r);
        return r;
    }
    P scale(const P& a, const E& c) const {
        P r;
        for (const auto& x : a) r.push_back(k.mul(x, c));
        trim(r);
        return r;
    }
    P monic(const P& a) const {
        if (a.empty()) return a;
        return scale(a, k.inv(a.back()));
    }
    std::pair<P, P> divmod(P a, const P& b) const {
        require(!b.empty(), ErrorKind::domain, "polynomial division by zero");
        const E lead_inv = k.inv(b.back());
        if (a.size() < b.size()) return {{}, a};
        P q(a.size() - b.size() + 1, k.zero());
        for (std::size_t i = a.size(); i-- >= b.size();) {
            E c = k.mul(a[i], lead_inv);
            q[i - b.size() + 1] = c;
            if (!k.is_zero(c))
                for (std::size_t j = 0; j < b.size(); ++j) a[i - b.size() + 1 + j] = k.sub(a[i - b.size() + 1 + j], k.mul(c, b[j]));
            if (i == b.size() - 1) break;
        }
        trim(q);
        a.resize(b.size() - 1);
        trim(a);
        return {q, a};
    }
    P mod(const P& a, const P& b) const { return divmod(a, b).second; }
    P gcd(P a, P b) const {
        while (!b.empty()) {
            P r = mod(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monic(a);
    }
    P mulmod(const P& a, const P& b, const P& m) const { return mod(mul(a, b), m); }
    P powmod(P base, Int e, const P& m) const {
        P r = mod(constant(k.one()), m);
        base = mod(base, m);
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mulmod(r, base, m);
            e >>= 1;
            if (e > 0) base = mulmod(base, base, m);
        }
        return r;
    }
    E eval(const P& a, const E& x) const {
        E r = k.zero();
        for (std::size_t i = a.size(); i-- > 0;) r = k.add(k.mul(r, x), a[i]);
        return r;
    }
    P derivative(const P& a) const {
        P r;
        for (std::size_t i = 1; i < a.size(); ++i) {
            E c = k.zero();
            for (std::size_t j = 0; j < i; ++j) c = k.add(c, a[i]);
            r.push_back(c);
        }
        trim(r);
        return r;
    }
    template <class Rng> P random(long degree_below, Rng& rng) const {
        P r;
        for (long i = 0; i < degree_below; ++i) r.push_back(k.random(rng));
        trim(r);
        return r;
    }
};

/// Extension F_l[y] / (g) for an irreducible monic g over F_l.
struct ExtField {
    using E = std::vector<Int>;
    PrimeField base;
    std::vector<Int> g; // monic, low degree first

    ExtField(const PrimeField& k, std::vector<Int> modulus) : base(k), g(std::move(modulus)) {}

    long degree() const { return static_cast<long>(g.size()) - 1; }
    E zero() const { return {}; }
    E one() const { return {1}; }
    E add(const E& a, const E& b) const { return ring().add(a, b); }
    E sub(const E& a, const E& b) const { return ring().sub(a, b); }
    E neg(const E& a) const { return ring().sub({}, a); }
    E mul(const E& a, const E& b) const { return ring().mulmod(a, b, g); }
    bool is_zero(const E& a) const { return a.empty(); }
    bool equal(const E& a, const E& b) const { return a == b; }
    E inv(const E& a) const {
        require(!a.empty(), ErrorKind::domain, "zero has no inverse");
        // a^(q - 2)
        return ring().powmod(a, order() - 2, g);
    }
    E from_base(const Int& c) const {
        E r{base.reduce(c)};
        ring().trim(r);
        return r;
    }
    E pow(const E& a, const Int& e) const { return ring().powmod(a, e, g); }
    template <class Rng> E random(Rng& rng) const { return ring().random(degree(), rng); }
    Int order() const { return ipow(base.l, static_cast<unsigned long>(degree())); }
    const Int& characteristic() const { return base.l; }
    E frobenius(const E& a) const { return pow(a, base.l); }

private:
    PolyRing<PrimeField> ring() const { return PolyRing<PrimeField>{base}; }
};

namespace detail {

inline std::mt19937_64& ff_rng() {
    thread_local std::mt19937_64 rng(0x5eed);
    return rng;
}

/// Irreducible monic factors of degree d of a squarefree f whose factors all have degree d.
template <class K>
std::vector<typename PolyRing<K>::P> equal_degree_factor(const K& k, const typename PolyRing<K>::P& f, long d) {
    using P = typename PolyRing<K>::P;
    PolyRing<K> R{k};
    const long n = R.deg(f);
    if (n <= 0) return {};
    if (n == d) return {R.monic(f)};
    auto& rng = ff_rng();
    const Int qd = ipow(k.order(), static_cast<unsigned long>(d));
    for (;;) {
        P a = R.random(n, rng);
        if (R.deg(a) < 1) continue;
        P b;
        if (k.characteristic() == 2) {
            // trace map a + a^2 + ... + a^(2^(m-1)), q^d = 2^m
            const long m = static_cast<long>(mpz_sizeinbase(qd.get_mpz_t(), 2)) - 1;
            P t = R.mod(a, f), s = t;
            for (long i = 1; i < m; ++i) {
                t = R.mulmod(t, t, f);
                s = R.add(s, t);
            }
            b = s;
        } else {
            b = R.sub(R.powmod(a, (qd - 1) / 2, f), R.constant(k.one()));
        }
        P g = R.gcd(f, b);
        if (R.deg(g) > 0 && R.deg(g) < n) {
            auto left = equal_degree_factor(k, g, d);
            auto right = equal_degree_factor(k, R.divmod(f, g).first, d);
            left.insert(left.end(), right.begin(), right.end());
            return left;
        }
    }
}

/// Full factorization of a squarefree monic polynomial (distinct then equal degree).
template <class K> std::vector<typename PolyRing<K>::P> factor_squarefree(const K& k, typename PolyRing<K>::P f) {
    using P = typename PolyRing<K>::P;
    PolyRing<K> R{k};
    f = R.monic(f);
    std::vector<P> out;
    P xq = R.mod(R.x(), f);
    for (long d = 1; R.deg(f) >= 2 * d; ++d) {
        xq = R.powmod(xq, k.order(), f);
        P g = R.gcd(f, R.sub(xq, R.mod(R.x(), f)));
        if (R.deg(g) > 0) {
            for (auto& h : equal_degree_factor(k, g, d)) out.push_back(h);
            f = R.divmod(f, g).first;
            xq = R.mod(xq, f);
        }
    }
    if (R.deg(f) > 0) out.push_back(R.monic(f));
    return out;
}

/// Distinct roots in k of a polynomial over k.
template <class K> std::vector<typename K::E> roots(const K& k, const typename PolyRing<K>::P& f) {
    using P = typename PolyRing<K>::P;
    PolyRing<K> R{k};
    P xq = R.powmod(R.x(), k.order(), f);
    P g = R.gcd(f, R.sub(xq, R.x()));
    std::vector<typename K::E> out;
    for (auto& h : equal_degree_factor(k, g, 1)) out.push_back(k.neg(h[0]));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Int> reduce_poly(const PrimeField& k, const IntVec& p) {
    std::vector<Int> r;
    for (const auto& c : p) r.push_back(k.reduce(c));
    PolyRing<PrimeField>{k}.trim(r);
    return r;
}

/// Some irreducible monic polynomial of degree d over F_l (Rabin test on random candidates).
inline std::vector<Int> irreducible_of_degree(const PrimeField& k, long d) {
    PolyRing<PrimeField> R{k};
    if (d == 1) return {0, 1};
    auto& rng = ff_rng();
    std::vector<long> prime_factors;
    for (const auto& [q, e] : factor_integer(Int(d))) prime_factors.push_back(to_long(q));
    for (;;) {
        auto f = R.random(d, rng);
        f.resize(static_cast<std::size_t>(d) + 1, 0);
        f[static_cast<std::size_t>(d)] = 1;
        auto frob = [&](long times) {
            auto x = R.mod(R.x(), f);
            for (long i = 0; i < times; ++i) x = R.powmod(x, k.l, f);
            return x;
        };
        if (R.sub(frob(d), R.mod(R.x(), f)).size() != 0) continue;
        bool ok = true;
        for (long q : prime_factors)
            if (R.deg(R.gcd(f, R.sub(frob(d / q), R.mod(R.x(), f)))) != 0) ok = false;
        if (ok) return f;
    }
}

} // namespace detail

/// Reduction Z[zeta_n] -> Z[zeta_n] / Lambda' = F_l[T] / (g), zeta_n -> T, for a
/// prime Lambda' above an unramified l; one map per irreducible factor g of Phi_n mod l.
class ResidueMap {
public:
    ResidueMap(Int l, long n, std::vector<Int> g, int index)
        : k_(l), field_(k_, std::move(g)), n_(n), index_(index) {}

    const Int& l() const { return k_.l; }
    long conductor() const { return n_; }
    const std::vector<Int>& factor() const { return field_.g; }
    int index() const { return index_; }
    long residue_degree() const { return field_.degree(); }
    const ExtField& field() const { return field_; }
    std::string label() const {
        return k_.l.get_str() + "/" + std::to_string(n_) + "/" + std::to_string(index_);
    }

    /// Image of an l-integral cyclotomic number whose conductor divides n.
    ExtField::E operator()(const Cyclo& xin) const {
        const Cyclo x = xin.simplified();
        require(n_ % x.conductor() == 0, ErrorKind::domain,
                "conductor " + std::to_string(x.conductor()) + " does not divide " + std::to_string(n_) +
                    "; extend the residue map first");
        require(x.denominator() % k_.l != 0, ErrorKind::valuation,
                "element " + x.to_string() + " has " + k_.l.get_str() + " in its denominator");
        const long step = n_ / x.conductor();
        PolyRing<PrimeField> R{k_};
        std::vector<Int> poly;
        const auto& c = x.coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            const std::size_t pos = i * static_cast<std::size_t>(step);
            if (poly.size() <= pos) poly.resize(pos + 1, 0);
            poly[pos] = k_.from_rat(c[i]);
        }
        R.trim(poly);
        return R.mod(poly, field_.g);
    }

    /// ord_{Lambda'}(x) > 0 for an l-integral x.
    bool kills(const Cyclo& x) const { return field_.is_zero((*this)(x)); }

    /// The maps above this one in Q(zeta_N) for a multiple N of n (prime to l):
    /// factors G of Phi_N with G | g(T^(N/n)).
    std::vector<ResidueMap> extensions(long N) const;

    friend bool operator==(const ResidueMap& a, const ResidueMap& b) {
        return a.l() == b.l() && a.n_ == b.n_ && a.factor() == b.factor();
    }

private:
    PrimeField k_;
    ExtField field_;
    long n_;
    int index_;
};

/// One map per irreducible factor of Phi_n mod l, in a deterministic order.
inline std::vector<ResidueMap> residue_maps_above(const Int& l, long n) {
    require(is_probable_prime(l), ErrorKind::domain, l.get_str() + " is not prime");
    require(n >= 1, ErrorKind::domain, "conductor must be positive");
    require(Int(n) % l != 0, ErrorKind::domain, l.get_str() + " ramifies in Q(zeta_" + std::to_string(n) + ")");
    static std::mutex mu;
    static std::map<std::pair<Int, long>, std::vector<ResidueMap>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({l, n});
        if (it != cache.end()) return it->second;
    }
    PrimeField k(l);
    const auto phi = detail::reduce_poly(k, cyclotomic_polynomial(n));
    long f = 1;
    if (n > 2) f = multiplicative_order(to_long(mod_pos(l, Int(n))), n);
    auto factors = detail::equal_degree_factor(k, phi, f);
    std::sort(factors.begin(), factors.end(), [](const auto& a, const auto& b) {
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    std::vector<ResidueMap> out;
    for (std::size_t i = 0; i < factors.size(); ++i) out.emplace_back(l, n, factors[i], static_cast<int>(i) + 1);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_pair(l, n), out);
    return out;
}

inline std::vector<ResidueMap> ResidueMap::extensions(long N) const {
    require(N % n_ == 0, ErrorKind::domain, "extension conductor must be a multiple");
    PrimeField k = k_;
    PolyRing<PrimeField> R{k};
    // g(T^(N/n))
    std::vector<Int> gs;
    const std::size_t step = static_cast<std::size_t>(N / n_);
    for (std::size_t i = 0; i < field_.g.size(); ++i) {
        if (gs.size() <= i * step) gs.resize(i * step + 1, 0);
        gs[i * step] = field_.g[i];
    }
    std::vector<ResidueMap> out;
    for (const auto& m : residue_maps_above(k_.l, N))
        if (R.mod(gs, m.factor()).empty()) out.push_back(m);
    return out;
}

/// Lowest common conductor for evaluating x under some extension of `map`.
inline std::vector<ResidueMap> maps_for(const ResidueMap& map, const Cyclo& x) {
    const long N = lcm(map.conductor(), x.simplified().conductor());
    if (N == map.conductor()) return {map};
    return map.extensions(N);
}

} // namespace eiscong
