#pragma once

#include <optional>
#include <vector>

#include "eiscong/classgroup.hpp"

namespace eiscong {

/// A cusp [alpha : gamma] normalised against class representatives:
///   alpha O = n1 c_i,  gamma O = n2 d t c_i,  beta in (d t c_i)^-1,  delta in c_i^-1,
/// with alpha delta - beta gamma = 1 and n1 + n2 = O. The ideal t is the narrow
/// class representative the datum was built against.
struct CuspDatum {
    int lambda = 0;
    int i = 0;
    FieldElement alpha, beta, gamma, delta;
    Ideal n1, n2; // n1 is the zero ideal when alpha = 0, n2 when gamma = 0
    Ideal t;
    Ideal c;

    bool is_infinity() const { return gamma.is_zero(); }
};

namespace detail {

/// x in A, y in B with x + y = 1 for integral ideals A + B = O (A may be zero).
inline std::pair<FieldElement, FieldElement> split_one(const Ideal& A, const Ideal& B) {
    const NumberField& f = B.field();
    const int d = f.degree();
    IntMatrix rows;
    std::vector<FieldElement> gens;
    for (const auto& b : A.basis()) {
        rows.push_back(b.int_coords());
        gens.push_back(b);
    }
    const std::size_t na = rows.size();
    for (const auto& b : B.basis()) {
        rows.push_back(b.int_coords());
        gens.push_back(b);
    }
    auto res = hnf_with_transform(rows);
    // The sum is O, whose HNF in the integral basis {1, ...} is the identity.
    require(res.h.size() == static_cast<std::size_t>(d) && res.h[0][0] == 1, ErrorKind::domain,
            "ideals are not coprime");
    for (int j = 1; j < d; ++j) require(res.h[0][static_cast<std::size_t>(j)] == 0, ErrorKind::structural, "unexpected HNF");
    FieldElement x = f.zero(), y = f.zero();
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const Int& u = res.transform[0][j];
        if (u == 0) continue;
        (j < na ? x : y) += gens[j] * Rat(u);
    }
    return {x, y};
}

} // namespace detail

/// Cusp datum for [alpha : gamma] in the component of the narrow class
/// representative t; wide representatives come from `wide` (coprime to the level).
inline CuspDatum construct_cusp_matrix(const FieldElement& alpha, const FieldElement& gamma, int lambda,
                                       const Ideal& t, const ClassGroup& wide) {
    const NumberField& f = *alpha.field();
    require(alpha.is_integral() && gamma.is_integral(), ErrorKind::domain, "cusp entries must be integral");
    const Ideal A = Ideal::principal(alpha), G = Ideal::principal(gamma);
    require(!(alpha.is_zero() && gamma.is_zero()), ErrorKind::domain, "cusp [0 : 0]");
    require((A + G).is_unit(), ErrorKind::domain, "cusp entries are not coprime");
    const Ideal dt = different(f) * t;

    CuspDatum x;
    x.lambda = lambda;
    x.t = t;
    const Ideal I0 = A + G * dt.inverse();
    x.i = wide.index_of(I0);
    x.c = wide.representatives()[static_cast<std::size_t>(x.i)];
    // Rescale by a generator kappa of c_i / I0 so that alpha O + gamma (d t)^-1 = c_i.
    auto kappa = principal_generator(x.c / I0);
    require(kappa.has_value(), ErrorKind::structural, "class representative mismatch");
    x.alpha = alpha * *kappa;
    x.gamma = gamma * *kappa;
    x.n1 = alpha.is_zero() ? Ideal::zero(f) : Ideal::principal(x.alpha) / x.c;
    x.n2 = gamma.is_zero() ? Ideal::zero(f) : Ideal::principal(x.gamma) / (dt * x.c);
    require(x.n1.is_integral() && x.n2.is_integral(), ErrorKind::structural, "cusp ideals not integral");

    // alpha delta - beta gamma = 1 with alpha delta in n1 and -beta gamma in n2.
    auto [u, v] = detail::split_one(x.n1, x.n2);
    x.delta = alpha.is_zero() ? f.zero() : u / x.alpha;
    x.beta = gamma.is_zero() ? f.zero() : -(v / x.gamma);
    if (gamma.is_zero()) x.delta = f.inverse(x.alpha);

    require(x.alpha * x.delta - x.beta * x.gamma == f.one(), ErrorKind::structural, "cusp matrix determinant");
    require(x.delta.is_zero() || Ideal::principal(x.delta).is_subset_of(x.c.inverse()), ErrorKind::structural,
            "delta outside c_i^-1");
    require(x.beta.is_zero() || Ideal::principal(x.beta).is_subset_of((dt * x.c).inverse()), ErrorKind::structural,
            "beta outside (d t c_i)^-1");
    return x;
}

/// Cusps [alpha : gamma] with alpha, gamma small integral and coprime, one per
/// (alpha, gamma) up to sign; a desk-scale sweep, not a set of orbit representatives.
inline std::vector<std::pair<FieldElement, FieldElement>> small_cusps(const NumberField& f, long box) {
    std::vector<FieldElement> elems;
    const int d = f.degree();
    std::vector<long> c(static_cast<std::size_t>(d), -box);
    for (;;) {
        RatVec v;
        for (long x : c) v.push_back(Rat(x));
        elems.push_back(f.element(v));
        std::size_t j = 0;
        while (j < c.size() && c[j] == box) c[j++] = -box;
        if (j == c.size()) break;
        ++c[j];
    }
    std::vector<std::pair<FieldElement, FieldElement>> out;
    for (const auto& a : elems)
        for (const auto& g : elems) {
            if (g.is_zero()) continue;
            if (a.is_zero() && !(g == f.one())) continue;
            if (!(Ideal::principal(a) + Ideal::principal(g)).is_unit()) continue;
            out.emplace_back(a, g);
        }
    return out;
}

} // namespace eiscong
