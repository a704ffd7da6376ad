#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "eiscong/matrix.hpp"

namespace eiscong {

namespace detail {

inline std::vector<long> divisors_of(long n) {
    std::vector<long> out;
    for (long d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    std::sort(out.begin(), out.end());
    return out;
}

// Exact division of integer polynomials (divisor monic), low degree first.
inline IntVec poly_div_exact(IntVec a, const IntVec& b) {
    const std::size_t db = b.size() - 1;
    if (a.size() <= db) return {0};
    IntVec q(a.size() - db, 0);
    for (std::size_t i = a.size() - 1; i + 1 > db; --i) {
        Int c = a[i];
        q[i - db] = c;
        if (c != 0)
            for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
        if (i == db) break;
    }
    return q;
}

struct CycloData {
    IntVec phi;                                    // n-th cyclotomic polynomial, monic
    std::vector<std::pair<std::size_t, Int>> tail; // nonzero non-leading terms of phi
};

inline const CycloData& cyclo_data(long n) {
    static std::mutex mu;
    static std::map<long, std::unique_ptr<CycloData>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return *it->second;
    }
    require(n >= 1 && n <= 1000000, ErrorKind::resource, "cyclotomic conductor out of range");
    auto data = std::make_unique<CycloData>();
    // x^n - 1 divided by Phi_d for every proper divisor d.
    IntVec p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = -1;
    p[static_cast<std::size_t>(n)] = 1;
    for (long d : divisors_of(n))
        if (d != n) p = poly_div_exact(p, cyclo_data(d).phi);
    data->phi = p;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i] != 0) data->tail.emplace_back(i, p[i]);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(n, std::move(data));
    return *it->second;
}

/// Reduce a polynomial (low degree first) modulo Phi_n in place.
inline void reduce_mod_phi(RatVec& poly, long n) {
    const auto& d = cyclo_data(n);
    const std::size_t deg = d.phi.size() - 1;
    for (std::size_t i = poly.size(); i-- > deg;) {
        if (poly[i] == 0) continue;
        const Rat c = poly[i];
        for (const auto& [j, a] : d.tail) poly[i - deg + j] -= c * a;
        poly[i] = 0;
    }
    poly.resize(deg, 0);
}

} // namespace detail

inline IntVec cyclotomic_polynomial(long n) { return detail::cyclo_data(n).phi; }

/// Element of Q(zeta_n) in the power basis modulo the n-th cyclotomic polynomial.
class Cyclo {
public:
    Cyclo() : n_(1), c_{0} {}
    Cyclo(const Rat& r) : n_(1), c_{r} {}  // NOLINT(google-explicit-constructor)
    Cyclo(long n, RatVec coeffs) : n_(n), c_(std::move(coeffs)) {
        require(static_cast<long>(c_.size()) == degree_of(n), ErrorKind::structural,
                "cyclotomic coefficient vector has wrong length");
    }

    static long degree_of(long n) { return static_cast<long>(detail::cyclo_data(n).phi.size()) - 1; }

    /// zeta_n^k.
    static Cyclo zeta(long n, long k) {
        const std::size_t j = static_cast<std::size_t>(((k % n) + n) % n);
        RatVec poly(std::max<std::size_t>(j + 1, static_cast<std::size_t>(degree_of(n))), 0);
        poly[j] = 1;
        detail::reduce_mod_phi(poly, n);
        return Cyclo(n, std::move(poly));
    }

    /// sum_j coeffs[j] zeta_n^j for a vector of length n.
    static Cyclo from_group_ring(long n, RatVec coeffs) {
        require(static_cast<long>(coeffs.size()) == n, ErrorKind::structural, "group ring vector has wrong length");
        if (coeffs.size() < static_cast<std::size_t>(degree_of(n))) coeffs.resize(degree_of(n), 0);
        detail::reduce_mod_phi(coeffs, n);
        return Cyclo(n, std::move(coeffs));
    }

    long conductor() const { return n_; }
    const RatVec& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    Rat rational() const {
        require(is_rational(), ErrorKind::domain, "cyclotomic number is not rational");
        return c_[0];
    }

    /// Image in Q(zeta_N) for a multiple N of the conductor.
    Cyclo lift(long N) const {
        require(N % n_ == 0, ErrorKind::structural, "lift target is not a multiple of the conductor");
        if (N == n_) return *this;
        const std::size_t step = static_cast<std::size_t>(N / n_);
        RatVec poly(std::max((c_.size() - 1) * step + 1, static_cast<std::size_t>(degree_of(N))), 0);
        for (std::size_t i = 0; i < c_.size(); ++i) poly[i * step] = c_[i];
        detail::reduce_mod_phi(poly, N);
        return Cyclo(N, std::move(poly));
    }

    /// Same number over the smallest conductor dividing n_ that contains it.
    Cyclo simplified() const {
        if (is_rational()) return Cyclo(c_[0]);
        for (long m : detail::divisors_of(n_)) {
            if (m == n_) break;
            auto pre = descend(m);
            if (pre) return *pre;
        }
        return *this;
    }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
        long N = lcm(a.n_, b.n_);
        Cyclo x = a.lift(N), y = b.lift(N);
        for (std::size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
        return x;
    }
    friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }
    Cyclo operator-() const {
        Cyclo r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }
    Cyclo& operator-=(const Cyclo& o) { return *this = *this - o; }
    Cyclo& operator*=(const Cyclo& o) { return *this = *this * o; }

    friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
        if (a.n_ == 1 && b.n_ == 1) return Cyclo(a.c_[0] * b.c_[0]);
        if (b.n_ == 1) return a.scaled(b.c_[0]);
        if (a.n_ == 1) return b.scaled(a.c_[0]);
        long N = lcm(a.n_, b.n_);
        Cyclo x = a.lift(N), y = b.lift(N);
        const std::size_t deg = x.c_.size();
        RatVec prod(2 * deg, 0);
        for (std::size_t i = 0; i < deg; ++i) {
            if (x.c_[i] == 0) continue;
            for (std::size_t j = 0; j < deg; ++j)
                if (y.c_[j] != 0) prod[i + j] += x.c_[i] * y.c_[j];
        }
        detail::reduce_mod_phi(prod, N);
        return Cyclo(N, std::move(prod));
    }

    Cyclo scaled(const Rat& s) const {
        Cyclo r = *this;
        for (auto& x : r.c_) x *= s;
        return r;
    }

    friend bool operator==(const Cyclo& a, const Cyclo& b) {
        if (a.n_ == b.n_) return a.c_ == b.c_;
        long N = lcm(a.n_, b.n_);
        return a.lift(N).c_ == b.lift(N).c_;
    }
    friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

    /// Matrix of multiplication by this element on the power basis (row convention).
    RatMatrix mult_matrix() const {
        const std::size_t deg = c_.size();
        RatMatrix m(deg);
        for (std::size_t i = 0; i < deg; ++i) m[i] = (*this * zeta(n_, static_cast<long>(i))).lift(n_).c_;
        return m;
    }

    Cyclo inverse() const {
        require(!is_zero(), ErrorKind::domain, "inverse of zero");
        if (n_ == 1) return Cyclo(1 / c_[0]);
        RatVec one(c_.size(), 0);
        one[0] = 1;
        return Cyclo(n_, solve_left(mult_matrix(), one));
    }
    friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }

    /// Norm from Q(zeta_n) to Q.
    Rat norm() const {
        if (n_ == 1) return c_[0];
        return determinant(mult_matrix());
    }

    /// Galois action zeta_n -> zeta_n^a, gcd(a, n) = 1.
    Cyclo galois(long a) const {
        require(std::gcd(((a % n_) + n_) % n_, n_) == 1, ErrorKind::domain, "Galois exponent not coprime to conductor");
        if (n_ == 1) return *this;
        RatVec ring(static_cast<std::size_t>(n_), 0);
        const long am = ((a % n_) + n_) % n_;
        for (std::size_t i = 0; i < c_.size(); ++i)
            ring[static_cast<std::size_t>((am * static_cast<long>(i)) % n_)] += c_[i];
        return from_group_ring(n_, std::move(ring));
    }

    /// Complex conjugate.
    Cyclo conj() const { return galois(-1); }

    /// Least common denominator of the coefficients.
    Int denominator() const {
        Int d = 1;
        for (const auto& x : c_) d = lcm(d, Int(x.get_den()));
        return d;
    }

    std::string to_string() const {
        if (is_rational()) return eiscong::to_string(c_[0]);
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            std::string term = eiscong::to_string(c_[i]);
            if (!s.empty() && term[0] != '-') s += "+";
            s += term;
            if (i > 0) s += "*z" + std::to_string(n_) + (i > 1 ? "^" + std::to_string(i) : "");
        }
        return s;
    }

private:
    std::optional<Cyclo> descend(long m) const {
        // Solve y * E = c where row i of E is the image of x^i from Q(zeta_m).
        const long deg_m = degree_of(m);
        RatMatrix E;
        for (long i = 0; i < deg_m; ++i) E.push_back(zeta(m, i).lift(n_).c_);
        // Gaussian elimination on columns of the augmented system E^T y^T = c^T.
        const std::size_t rows = c_.size(), cols = static_cast<std::size_t>(deg_m);
        RatMatrix A(rows, RatVec(cols + 1));
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) A[r][c] = E[c][r];
            A[r][cols] = c_[r];
        }
        std::size_t piv_row = 0;
        std::vector<std::size_t> pivcol;
        for (std::size_t c = 0; c < cols && piv_row < rows; ++c) {
            std::size_t p = piv_row;
            while (p < rows && A[p][c] == 0) ++p;
            if (p == rows) continue;
            std::swap(A[p], A[piv_row]);
            Rat inv = 1 / A[piv_row][c];
            for (auto& x : A[piv_row]) x *= inv;
            for (std::size_t r = 0; r < rows; ++r) {
                if (r == piv_row || A[r][c] == 0) continue;
                Rat f = A[r][c];
                for (std::size_t t = 0; t <= cols; ++t) A[r][t] -= f * A[piv_row][t];
            }
            pivcol.push_back(c);
            ++piv_row;
        }
        for (std::size_t r = piv_row; r < rows; ++r)
            if (A[r][cols] != 0) return std::nullopt;
        RatVec y(cols, 0);
        for (std::size_t r = 0; r < pivcol.size(); ++r) y[pivcol[r]] = A[r][cols];
        return Cyclo(m, y);
    }

    long n_;
    RatVec c_;
};

inline Cyclo pow(const Cyclo& x, long e) {
    if (e < 0) return pow(x.inverse(), -e);
    Cyclo r(Rat(1)), b = x;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

} // namespace eiscong
