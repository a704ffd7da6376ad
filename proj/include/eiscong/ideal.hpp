#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "eiscong/field.hpp"

namespace eiscong {

/// Fractional ideal (1/den) * L where L is the row lattice of an upper
/// triangular HNF and den is the least positive integer with den * I integral.
/// The zero ideal is represented by an empty matrix.
class Ideal {
public:
    Ideal() = default;

    static Ideal zero(const NumberField& f) {
        Ideal r;
        r.field_ = &f;
        r.den_ = 1;
        return r;
    }

    static Ideal unit(const NumberField& f) { return from_lattice(f, identity_int(f.degree()), 1); }

    /// Ideal generated by the rows of an integer lattice divided by den.
    static Ideal from_lattice(const NumberField& f, IntMatrix rows, const Int& den) {
        Ideal r;
        r.field_ = &f;
        IntMatrix h = hnf(std::move(rows));
        if (h.empty()) {
            r.den_ = 1;
            return r;
        }
        require(static_cast<int>(h.size()) == f.degree(), ErrorKind::structural,
                "lattice is not of full rank");
        Int g = den;
        for (const auto& row : h)
            for (const auto& x : row) g = gcd(g, x);
        for (auto& row : h)
            for (auto& x : row) x /= g;
        r.h_ = std::move(h);
        r.den_ = den / g;
        return r;
    }

    /// O-ideal generated by the given elements.
    static Ideal generated_by(const NumberField& f, const std::vector<FieldElement>& gens) {
        Int den = 1;
        for (const auto& g : gens)
            for (const auto& c : g.coords()) den = lcm(den, Int(c.get_den()));
        IntMatrix rows;
        for (const auto& g : gens) {
            if (g.is_zero()) continue;
            FieldElement s = g * Rat(den);
            for (int i = 0; i < f.degree(); ++i) rows.push_back((s * f.basis(i)).int_coords());
        }
        if (rows.empty()) return zero(f);
        return from_lattice(f, std::move(rows), den);
    }

    static Ideal principal(const FieldElement& x) { return generated_by(*x.field(), {x}); }
    static Ideal principal(const NumberField& f, const Rat& r) {
        return generated_by(f, {f.from_rational(r)});
    }

    const NumberField& field() const { return *field_; }
    const NumberField* field_ptr() const { return field_; }
    const IntMatrix& hnf_matrix() const { return h_; }
    const Int& den() const { return den_; }
    bool is_zero() const { return h_.empty(); }
    bool is_integral() const { return den_ == 1; }
    int degree() const { return field_->degree(); }

    /// Absolute norm (0 for the zero ideal).
    Rat norm() const {
        if (is_zero()) return 0;
        Int det = 1;
        for (int i = 0; i < degree(); ++i) det *= h_[i][i];
        return make_rat(det, ipow(den_, static_cast<unsigned long>(degree())));
    }
    Int norm_int() const {
        Rat n = norm();
        require(n.get_den() == 1, ErrorKind::domain, "ideal is not integral");
        return n.get_num();
    }

    bool is_unit() const { return !is_zero() && den_ == 1 && norm() == 1; }

    friend bool operator==(const Ideal& a, const Ideal& b) {
        return a.field_ == b.field_ && a.den_ == b.den_ && a.h_ == b.h_;
    }
    friend bool operator!=(const Ideal& a, const Ideal& b) { return !(a == b); }

    /// Deterministic order: norm, then denominator, then HNF entries.
    friend bool operator<(const Ideal& a, const Ideal& b) {
        Rat na = a.norm(), nb = b.norm();
        if (na != nb) return na < nb;
        if (a.den_ != b.den_) return a.den_ < b.den_;
        return a.h_ < b.h_;
    }

    /// Z-basis elements of the ideal.
    std::vector<FieldElement> basis() const {
        std::vector<FieldElement> out;
        for (const auto& row : h_) {
            RatVec v;
            for (const auto& x : row) v.push_back(make_rat(x, den_));
            out.push_back(field_->element(v));
        }
        return out;
    }

    /// Comma-joined upper triangle of the HNF, "/den" appended for fractional ideals.
    std::string digest() const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = 0; i < degree(); ++i)
            for (int j = i; j < degree(); ++j) {
                if (!s.empty()) s += ",";
                s += h_[i][j].get_str();
            }
        if (den_ != 1) s += "/" + den_.get_str();
        return s;
    }

    static Ideal parse_digest(const NumberField& f, const std::string& text) {
        std::string body = text;
        Int den = 1;
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            body = text.substr(0, slash);
            Rat d = parse_rat(text.substr(slash + 1));
            require(d > 0 && d.get_den() == 1, ErrorKind::parse, "bad ideal denominator: " + text);
            den = d.get_num();
        }
        std::vector<Int> vals;
        std::size_t pos = 0;
        while (pos <= body.size()) {
            auto comma = body.find(',', pos);
            std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            Rat v = parse_rat(tok);
            require(v.get_den() == 1, ErrorKind::parse, "ideal entries must be integers: " + text);
            vals.push_back(v.get_num());
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        const int d = f.degree();
        if (vals.size() == 1) {
            require(vals[0] != 0, ErrorKind::parse, "zero ideal is not accepted here");
            return principal(f, make_rat(abs(vals[0]), den));
        }
        require(vals.size() == static_cast<std::size_t>(d * (d + 1) / 2), ErrorKind::parse,
                "ideal digest has wrong number of entries: " + text);
        IntMatrix m(d, IntVec(d, 0));
        std::size_t k = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) m[i][j] = vals[k++];
        Ideal r = from_lattice(f, m, den);
        // Rows must already generate an O-module.
        require(r * unit(f) == r, ErrorKind::parse, "lattice is not an ideal: " + text);
        return r;
    }

    friend Ideal operator*(const Ideal& a, const Ideal& b) {
        a.check_same(b);
        if (a.is_zero() || b.is_zero()) return zero(*a.field_);
        const NumberField& f = *a.field_;
        IntMatrix rows;
        for (const auto& x : a.h_)
            for (const auto& y : b.h_) rows.push_back((f.element(x) * f.element(y)).int_coords());
        return from_lattice(f, std::move(rows), a.den_ * b.den_);
    }

    friend Ideal operator+(const Ideal& a, const Ideal& b) {
        a.check_same(b);
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        Int L = lcm(a.den_, b.den_);
        IntMatrix rows = a.scaled(L / a.den_);
        IntMatrix rb = b.scaled(L / b.den_);
        rows.insert(rows.end(), rb.begin(), rb.end());
        return from_lattice(*a.field_, std::move(rows), L);
    }

    Ideal intersect(const Ideal& b) const {
        check_same(b);
        if (is_zero() || b.is_zero()) return zero(*field_);
        const int d = degree();
        Int L = lcm(den_, b.den_);
        IntMatrix A = scaled(L / den_), B = b.scaled(L / b.den_);
        IntMatrix stacked = A;
        for (auto row : B) {
            for (auto& x : row) x = -x;
            stacked.push_back(row);
        }
        IntMatrix ker = left_kernel(stacked);
        IntMatrix rows;
        for (const auto& v : ker) {
            IntVec coeff(v.begin(), v.begin() + d);
            rows.push_back(vec_mat(coeff, A));
        }
        return from_lattice(*field_, std::move(rows), L);
    }

    Ideal inverse() const {
        require(!is_zero(), ErrorKind::domain, "inverse of the zero ideal");
        const NumberField& f = *field_;
        const int d = degree();
        // L^{-1} = (1/n) { y in O : y * L subset n O } with n = N(L) in L.
        Int n = 1;
        for (int i = 0; i < d; ++i) n *= h_[i][i];
        IntMatrix big(d + d * d, IntVec(d * d, 0));
        for (int g = 0; g < d; ++g) {
            FieldElement gen = f.element(h_[g]);
            for (int j = 0; j < d; ++j) {
                IntVec c = (f.basis(j) * gen).int_coords();
                for (int t = 0; t < d; ++t) big[j][g * d + t] = c[t];
            }
        }
        for (int i = 0; i < d * d; ++i) big[d + i][i] = n;
        IntMatrix ker = left_kernel(big);
        IntMatrix rows;
        for (const auto& v : ker) rows.emplace_back(v.begin(), v.begin() + d);
        Ideal inv_lattice = from_lattice(f, std::move(rows), n);
        // (L / den)^{-1} = den * L^{-1}
        return inv_lattice * principal(f, Rat(den_));
    }

    friend Ideal operator/(const Ideal& a, const Ideal& b) { return a * b.inverse(); }

    Ideal pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Ideal r = unit(*field_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    /// this subset of b.
    bool is_subset_of(const Ideal& b) const {
        if (is_zero()) return true;
        if (b.is_zero()) return false;
        return (*this + b) == b;
    }
    /// b divides this (for nonzero fractional ideals: this subset of b).
    bool divisible_by(const Ideal& b) const { return is_subset_of(b); }

    bool is_coprime_to(const Ideal& b) const { return (*this + b).is_unit(); }

    Ideal gcd_with(const Ideal& b) const { return *this + b; }
    Ideal lcm_with(const Ideal& b) const { return intersect(b); }

    bool contains(const FieldElement& x) const {
        if (x.is_zero()) return true;
        if (is_zero()) return false;
        FieldElement s = x * Rat(den_);
        if (!s.is_integral()) return false;
        return reduce_lattice(s.int_coords()) == IntVec(degree(), 0);
    }

    /// Canonical representative of an integral x modulo this integral ideal:
    /// coordinates 0 <= x_i < h_ii.
    FieldElement reduce(const FieldElement& x) const {
        require(is_integral() && !is_zero(), ErrorKind::domain, "reduction needs a nonzero integral ideal");
        return field_->element(reduce_lattice(x.int_coords()));
    }

    /// Smallest positive rational integer in this integral ideal.
    Int min_integer() const {
        require(is_integral() && !is_zero(), ErrorKind::domain, "needs a nonzero integral ideal");
        const int d = degree();
        if (d == 1) return h_[0][0];
        IntMatrix tail(d, IntVec(d - 1));
        for (int i = 0; i < d; ++i)
            for (int j = 1; j < d; ++j) tail[i][j - 1] = h_[i][j];
        IntMatrix ker = left_kernel(tail);
        require(ker.size() == 1, ErrorKind::structural, "unexpected kernel rank");
        return abs(vec_mat(ker[0], h_)[0]);
    }

    /// All residues of O modulo this integral ideal in canonical form.
    std::vector<FieldElement> residues() const {
        require(is_integral() && !is_zero(), ErrorKind::domain, "needs a nonzero integral ideal");
        const int d = degree();
        Int total = norm_int();
        require(total <= Int(5000000), ErrorKind::resource, "residue ring too large: " + total.get_str());
        std::vector<FieldElement> out;
        IntVec cur(d, 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == d) {
                out.push_back(field_->element(cur));
                return;
            }
            for (Int v = 0; v < h_[i][i]; ++v) {
                cur[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
        return out;
    }

    std::string to_string() const {
        if (is_zero()) return "(0)";
        return "[" + digest() + "]";
    }

private:
    void check_same(const Ideal& b) const {
        require(field_ == b.field_ && field_ != nullptr, ErrorKind::structural, "ideals of different fields");
    }

    IntMatrix scaled(const Int& s) const {
        IntMatrix m = h_;
        for (auto& row : m)
            for (auto& x : row) x *= s;
        return m;
    }

    IntVec reduce_lattice(IntVec v) const {
        const int d = degree();
        for (int i = 0; i < d; ++i) {
            Int q = floor_div(v[i], h_[i][i]);
            if (q == 0) continue;
            for (int j = i; j < d; ++j) v[j] -= q * h_[i][j];
        }
        return v;
    }

    const NumberField* field_ = nullptr;
    IntMatrix h_;
    Int den_ = 1;
};

/// Prime ideal with its cached inverse and label data.
struct PrimeIdeal {
    Ideal ideal;
    Ideal inverse;
    Int p;
    int residue_degree = 1;
    int ramification = 1;
    int index = 1; // 1-based among primes above p

    Int norm() const { return ideal.norm_int(); }
    std::string label() const { return p.get_str() + "." + std::to_string(index); }
    friend bool operator==(const PrimeIdeal& a, const PrimeIdeal& b) { return a.ideal == b.ideal; }
    friend bool operator<(const PrimeIdeal& a, const PrimeIdeal& b) { return a.ideal < b.ideal; }
};

namespace detail {

inline std::vector<PrimeIdeal> compute_primes_above(const NumberField& f, const Int& p) {
    require(is_probable_prime(p), ErrorKind::domain, p.get_str() + " is not prime");
    std::vector<PrimeIdeal> out;
    auto make = [&](Ideal P, int fdeg, int e) {
        PrimeIdeal q;
        q.inverse = P.inverse();
        q.ideal = std::move(P);
        q.p = p;
        q.residue_degree = fdeg;
        q.ramification = e;
        out.push_back(std::move(q));
    };
    if (f.degree() == 1) {
        make(Ideal::principal(f, Rat(p)), 1, 1);
    } else {
        require(f.kind() == FieldKind::real_quadratic, ErrorKind::capability,
                "prime decomposition needs degree <= 2");
        // Minimal polynomial of w: x^2 - x - c (D = 1 mod 4) or x^2 - D.
        const Int& D = f.D();
        const bool one_mod_four = mod_pos(D, 4) == 1;
        Int b = one_mod_four ? Int(-1) : Int(0);
        Int c = one_mod_four ? Int(-(D - 1) / 4) : Int(-D);
        std::vector<Int> roots;
        if (p == 2) {
            for (Int r = 0; r < 2; ++r)
                if (mod_pos(r * r + b * r + c, 2) == 0) roots.push_back(r);
        } else {
            Int disc = mod_pos(b * b - 4 * c, p), s;
            if (sqrt_mod(disc, p, s)) {
                Int inv2;
                Int two = 2;
                mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p.get_mpz_t());
                Int r1 = mod_pos((-b + s) * inv2, p), r2 = mod_pos((-b - s) * inv2, p);
                roots.push_back(r1);
                if (r2 != r1) roots.push_back(r2);
            }
        }
        Ideal pO = Ideal::principal(f, Rat(p));
        if (roots.empty()) {
            make(pO, 2, 1);
        } else {
            bool ramified = mpz_divisible_p(f.discriminant().get_mpz_t(), p.get_mpz_t()) != 0;
            for (const auto& r : roots) {
                FieldElement g = f.basis(1) - f.from_rational(Rat(r));
                make(Ideal::generated_by(f, {f.from_rational(Rat(p)), g}), 1, ramified ? 2 : 1);
                if (ramified) break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = static_cast<int>(i) + 1;
    return out;
}

} // namespace detail

/// Prime ideals above the rational prime p, ordered by (norm, HNF).
inline const std::vector<PrimeIdeal>& primes_above(const NumberField& f, const Int& p) {
    auto v = f.memo<std::vector<PrimeIdeal>>("primes_above:" + p.get_str(),
                                             [&] { return detail::compute_primes_above(f, p); });
    // The memo keeps the vector alive as long as the field.
    return *v;
}

/// Exponent of P in the integral ideal a.
inline int valuation(const Ideal& a, const PrimeIdeal& P) {
    require(!a.is_zero(), ErrorKind::domain, "valuation of the zero ideal");
    int v = 0;
    Ideal cur = a;
    while (cur.is_integral() && cur.is_subset_of(P.ideal)) {
        cur = cur * P.inverse;
        ++v;
    }
    return v;
}

using Factorization = std::vector<std::pair<PrimeIdeal, int>>;

/// Factorization of a nonzero fractional ideal (negative exponents for the denominator).
inline Factorization factor_ideal(const Ideal& a) {
    require(!a.is_zero(), ErrorKind::domain, "cannot factor the zero ideal");
    const NumberField& f = a.field();
    Factorization out;
    if (a.is_unit()) return out;
    Ideal num = a * Ideal::principal(f, Rat(a.den()));
    Int den = a.den();
    Int n = num.norm_int();
    std::vector<Int> ps = n == 1 ? std::vector<Int>{} : prime_divisors(n);
    if (den != 1)
        for (const auto& q : prime_divisors(den)) ps.push_back(q);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    Ideal denO = Ideal::principal(f, Rat(den));
    for (const auto& p : ps)
        for (const auto& P : primes_above(f, p)) {
            int e = valuation(num, P) - (den == 1 ? 0 : valuation(denO, P));
            if (e != 0) out.emplace_back(P, e);
        }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

inline Ideal multiply_out(const NumberField& f, const Factorization& fac) {
    Ideal r = Ideal::unit(f);
    for (const auto& [P, e] : fac) r = r * P.ideal.pow(e);
    return r;
}

/// Prime ideal from a label "<p>.<index>".
inline PrimeIdeal prime_from_label(const NumberField& f, const std::string& label) {
    auto dot = label.find('.');
    std::string ps = label.substr(0, dot);
    int idx = 1;
    if (dot != std::string::npos) {
        Rat r = parse_rat(label.substr(dot + 1));
        require(r.get_den() == 1 && r > 0, ErrorKind::parse, "bad prime label: " + label);
        idx = static_cast<int>(to_long(r.get_num()));
    }
    Rat p = parse_rat(ps);
    require(p.get_den() == 1 && is_probable_prime(p.get_num()), ErrorKind::parse,
            "bad prime label: " + label);
    const auto& primes = primes_above(f, p.get_num());
    require(idx >= 1 && idx <= static_cast<int>(primes.size()), ErrorKind::parse,
            "prime label index out of range: " + label);
    return primes[idx - 1];
}

/// All prime ideals of norm <= bound, sorted.
inline std::vector<PrimeIdeal> primes_up_to_norm(const NumberField& f, long bound) {
    std::vector<PrimeIdeal> out;
    for (long p : primes_up_to(bound))
        for (const auto& P : primes_above(f, Int(p)))
            if (P.norm() <= bound) out.push_back(P);
    std::sort(out.begin(), out.end());
    return out;
}

/// Integral ideal together with its factorization.
struct FactoredIdeal {
    Ideal ideal;
    Factorization factors;
    Int norm() const { return ideal.norm_int(); }
};

/// All nonzero integral ideals of norm <= bound, sorted by (norm, HNF).
inline std::vector<FactoredIdeal> ideals_up_to_norm(const NumberField& f, long bound) {
    std::vector<PrimeIdeal> primes = primes_up_to_norm(f, bound);
    std::vector<FactoredIdeal> out;
    FactoredIdeal cur{Ideal::unit(f), {}};
    std::function<void(std::size_t, long, const Ideal&)> rec = [&](std::size_t start, long n, const Ideal& I) {
        FactoredIdeal fi{I, cur.factors};
        out.push_back(fi);
        for (std::size_t i = start; i < primes.size(); ++i) {
            long q = to_long(primes[i].norm());
            if (n * q > bound) break;
            long m = n;
            Ideal J = I;
            int e = 0;
            while (m * q <= bound) {
                m *= q;
                J = J * primes[i].ideal;
                ++e;
                cur.factors.emplace_back(primes[i], e);
                rec(i + 1, m, J);
                cur.factors.pop_back();
            }
        }
    };
    rec(0, 1, Ideal::unit(f));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.ideal < b.ideal; });
    return out;
}

/// All integral divisors of an integral ideal with the given factorization.
inline std::vector<FactoredIdeal> divisors(const NumberField& f, const Factorization& fac) {
    std::vector<FactoredIdeal> out{{Ideal::unit(f), {}}};
    for (const auto& [P, e] : fac) {
        require(e > 0, ErrorKind::domain, "divisors need an integral ideal");
        std::vector<FactoredIdeal> next;
        for (const auto& d : out) {
            Ideal J = d.ideal;
            next.push_back(d);
            for (int j = 1; j <= e; ++j) {
                J = J * P.ideal;
                FactoredIdeal nd{J, d.factors};
                nd.factors.emplace_back(P, j);
                next.push_back(std::move(nd));
            }
        }
        out = std::move(next);
    }
    return out;
}

/// The different: inverse of the trace dual of O.
inline const Ideal& different(const NumberField& f) {
    auto v = f.memo<Ideal>("different", [&] {
        const int d = f.degree();
        RatMatrix t(d, RatVec(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) t[i][j] = f.trace(f.basis(i) * f.basis(j));
        RatMatrix dual = inverse(t);
        Int L = 1;
        for (const auto& row : dual)
            for (const auto& x : row) L = lcm(L, Int(x.get_den()));
        IntMatrix rows(d, IntVec(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Rat s = dual[i][j] * L;
                rows[i][j] = s.get_num();
            }
        return Ideal::from_lattice(f, rows, L).inverse();
    });
    return *v;
}

} // namespace eiscong
