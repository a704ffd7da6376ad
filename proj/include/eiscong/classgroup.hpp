#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "eiscong/abelian.hpp"
#include "eiscong/ideal.hpp"

namespace eiscong {

/// Ceiling on the Minkowski bound accepted by class group computations.
inline constexpr long kMinkowskiCeiling = 1000000;

namespace detail {

/// Some alpha with alpha O = a for an integral nonzero ideal a, found in a
/// box derived from the embeddings and the fundamental unit. Floating point
/// only bounds the search; every hit is checked exactly.
inline std::optional<FieldElement> search_generator_integral(const Ideal& a) {
    const NumberField& f = a.field();
    const Int N = a.norm_int();
    if (f.degree() == 1) return f.from_rational(Rat(N));
    require(f.kind() == FieldKind::real_quadratic, ErrorKind::capability,
            "principality test needs degree <= 2");
    auto B = a.basis();
    const long double eps = f.approx(f.units().fundamental, 0);
    long double m[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m[i][j] = f.approx(B[j], i);
    const long double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const long double R = std::sqrt(static_cast<long double>(N.get_d()) * eps) * (1 + 1e-9L) + 1e-9L;
    const long double mi[2][2] = {{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}};
    const long double X = R * (std::fabs(mi[0][0]) + std::fabs(mi[0][1])) + 1;
    require(X < 1e7L, ErrorKind::resource, "generator search box too large");
    const long xmax = static_cast<long>(std::ceil(X));
    for (long x = 0; x <= xmax; ++x) {
        // |m00 x + m01 y| <= R and |m10 x + m11 y| <= R
        long double lo = -1e30L, hi = 1e30L;
        for (int i = 0; i < 2; ++i) {
            long double a0 = (-R - m[i][0] * x) / m[i][1], a1 = (R - m[i][0] * x) / m[i][1];
            if (a0 > a1) std::swap(a0, a1);
            lo = std::max(lo, a0);
            hi = std::min(hi, a1);
        }
        if (lo > hi + 1) continue;
        long ylo = static_cast<long>(std::floor(lo)) - 1, yhi = static_cast<long>(std::ceil(hi)) + 1;
        for (long y = ylo; y <= yhi; ++y) {
            if (x == 0 && y <= 0) continue;
            FieldElement alpha = B[0] * Rat(x) + B[1] * Rat(y);
            if (abs(f.norm(alpha)) == N) return alpha;
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Some generator of a nonzero fractional ideal, or none when not principal.
inline std::optional<FieldElement> principal_generator(const Ideal& a) {
    require(!a.is_zero(), ErrorKind::domain, "zero ideal");
    const NumberField& f = a.field();
    Rat den(a.den());
    Ideal b = a * Ideal::principal(f, den);
    auto g = detail::search_generator_integral(b);
    if (!g) return std::nullopt;
    return *g * (1 / den);
}

/// Adjust a generator by a unit to make it totally positive, when possible.
inline std::optional<FieldElement> make_totally_positive(const FieldElement& alpha) {
    const NumberField& f = *alpha.field();
    auto s = f.signs(alpha);
    bool all_pos = true, all_neg = true;
    for (int x : s) {
        all_pos = all_pos && x > 0;
        all_neg = all_neg && x < 0;
    }
    if (all_pos) return alpha;
    if (all_neg) return -alpha;
    if (f.degree() == 2 && f.units().fundamental_norm == -1) {
        FieldElement e = f.units().fundamental;
        FieldElement r = alpha * e;
        if (f.is_totally_positive(r)) return r;
        if (f.is_totally_positive(-r)) return -r;
    }
    return std::nullopt;
}

/// Totally positive generator of a nonzero fractional ideal, or none.
inline std::optional<FieldElement> totally_positive_generator(const Ideal& a) {
    auto g = principal_generator(a);
    if (!g) return std::nullopt;
    return make_totally_positive(*g);
}

/// Number of sign vectors realised by units: 2^d / |sign image| = h+/h.
inline long narrow_index(const NumberField& f) {
    if (f.degree() == 1) return 1;
    require(f.kind() == FieldKind::real_quadratic, ErrorKind::capability, "unit signs need degree <= 2");
    return f.units().fundamental_norm == -1 ? 1 : 2;
}

inline Rat minkowski_bound_squared(const NumberField& f) {
    // (d! / d^d)^2 |disc|
    if (f.degree() == 1) return 1;
    return Rat(abs(f.discriminant())) / 4;
}

/// Wide or narrow class group with representatives coprime to a modulus.
class ClassGroup {
public:
    ClassGroup(const NumberField& f, bool narrow, const Ideal& coprime_to)
        : field_(&f), narrow_(narrow), modulus_(coprime_to) {
        require(f.degree() <= 2, ErrorKind::capability, "class groups need degree <= 2");
        Rat mb2 = minkowski_bound_squared(f);
        Int mb = floor_rat(mb2);
        Int root;
        mpz_sqrt(root.get_mpz_t(), mb.get_mpz_t());
        if ((root + 1) * (root + 1) <= mb2) ++root;
        require(root <= Int(kMinkowskiCeiling), ErrorKind::resource,
                "Minkowski bound " + root.get_str() + " exceeds the configured ceiling");
        const long bound = std::max<long>(1, to_long(root));
        // Every wide class holds an integral ideal of norm <= Minkowski bound.
        std::vector<Ideal> found;
        for (const auto& fi : ideals_up_to_norm(f, bound)) {
            if (classify(found, fi.ideal, false) < 0) found.push_back(fi.ideal);
        }
        std::size_t target = found.size();
        if (narrow) target *= static_cast<std::size_t>(narrow_index(f));
        // Canonical representatives: smallest norm coprime to the modulus.
        reps_.assign(target, Ideal());
        std::vector<bool> have(target, false);
        std::vector<Ideal> keys; // arbitrary members of each class, in discovery order
        std::size_t filled = 0;
        for (long B = std::max<long>(bound, 8); filled < target; B *= 2) {
            require(B <= 1 << 22, ErrorKind::resource, "class representative search exhausted");
            for (const auto& fi : ideals_up_to_norm(f, B)) {
                int k = classify(keys, fi.ideal, narrow);
                if (k < 0) {
                    keys.push_back(fi.ideal);
                    k = static_cast<int>(keys.size()) - 1;
                    require(keys.size() <= target, ErrorKind::structural, "class count mismatch");
                }
                if (!have[k] && fi.ideal.is_coprime_to(modulus_)) {
                    have[k] = true;
                    reps_[k] = fi.ideal;
                    ++filled;
                }
            }
        }
        // Order classes by their representative.
        std::sort(reps_.begin(), reps_.end());
        const std::size_t n = reps_.size();
        std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                int k = index_of(reps_[i] * reps_[j]);
                table[i][j] = table[j][i] = static_cast<std::size_t>(k);
            }
        group_ = ExplicitGroup(n, [&](std::size_t a, std::size_t b) { return table[a][b]; });
    }

    const NumberField& field() const { return *field_; }
    bool narrow() const { return narrow_; }
    std::size_t size() const { return reps_.size(); }
    const std::vector<Ideal>& representatives() const { return reps_; }
    const ExplicitGroup& group() const { return group_; }
    const std::vector<Int>& invariants() const { return group_.invariants(); }

    /// Index of the class of a nonzero fractional ideal.
    int index_of(const Ideal& a) const {
        int k = classify(reps_, a, narrow_);
        require(k >= 0, ErrorKind::structural, "ideal class not found");
        return k;
    }

    /// (index i, beta) with a = beta * reps[i]; beta totally positive for the narrow group.
    std::pair<int, FieldElement> decompose(const Ideal& a) const {
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            auto g = generator_for(a / reps_[i], narrow_);
            if (g) return {static_cast<int>(i), *g};
        }
        fail(ErrorKind::structural, "ideal class not found");
    }

    IntVec dlog(const Ideal& a) const { return group_.dlog(static_cast<std::size_t>(index_of(a))); }

private:
    static std::optional<FieldElement> generator_for(const Ideal& a, bool narrow) {
        return narrow ? totally_positive_generator(a) : principal_generator(a);
    }

    static int classify(const std::vector<Ideal>& reps, const Ideal& a, bool narrow) {
        for (std::size_t i = 0; i < reps.size(); ++i) {
            if (reps[i].is_zero()) continue;
            if (generator_for(a / reps[i], narrow)) return static_cast<int>(i);
        }
        return -1;
    }

    const NumberField* field_;
    bool narrow_;
    Ideal modulus_;
    std::vector<Ideal> reps_;
    ExplicitGroup group_;
};

/// Wide and narrow class groups for a given coprimality modulus.
struct ClassData {
    std::shared_ptr<const ClassGroup> wide, narrow;
    std::size_t h() const { return wide->size(); }
    std::size_t h_plus() const { return narrow->size(); }
};

inline ClassData class_groups(const NumberField& f, const Ideal& coprime_to) {
    const std::string key = coprime_to.digest();
    ClassData c;
    c.wide = f.memo<ClassGroup>("cl:" + key, [&] { return ClassGroup(f, false, coprime_to); });
    c.narrow = f.memo<ClassGroup>("cl+:" + key, [&] { return ClassGroup(f, true, coprime_to); });
    return c;
}

inline ClassData class_groups(const NumberField& f) { return class_groups(f, Ideal::unit(f)); }

} // namespace eiscong
