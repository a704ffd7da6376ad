#pragma once

#include <array>
#include <string>
#include <vector>

#include "eiscong/bernoulli.hpp"
#include "eiscong/character.hpp"

namespace eiscong {

/// L(chi, 1 - k) for a ray class character, imprimitive Euler factors
/// removed (the L-function of chi exactly as given on its modulus).
struct LValue {
    Cyclo value;
    long k = 0;
    std::string method; // "bernoulli-d1" or "shintani-d2"
};

namespace detail {

/// Representatives modulo Z^d of a lattice L containing Z^d, given by the rows
/// of q (a basis of L in standard coordinates).
inline std::vector<RatVec> lattice_mod_unit(const RatMatrix& q) {
    const std::size_t d = q.size();
    // Rows of inverse(q) express e_j in the basis of L; they are integral.
    RatMatrix qi = inverse(q);
    IntMatrix M(d, IntVec(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            require(qi[i][j].get_den() == 1, ErrorKind::structural, "lattice does not contain Z^d");
            M[i][j] = qi[i][j].get_num();
        }
    IntMatrix H = hnf(M);
    std::vector<RatVec> out{RatVec(d, 0)};
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<RatVec> next;
        for (const auto& x : out)
            for (Int c = 0; c < H[i][i]; ++c) {
                RatVec y = x;
                for (std::size_t t = 0; t < d; ++t) y[t] += Rat(c) * q[i][t];
                next.push_back(std::move(y));
            }
        out = std::move(next);
    }
    return out;
}

/// Coefficients t = 0..len-1 of (v + w y)^e, e >= -1, as a power series in y.
inline std::vector<FieldElement> linear_power_series(const FieldElement& v, const FieldElement& w, long e,
                                                     long len) {
    const NumberField& f = *v.field();
    std::vector<FieldElement> out;
    if (e >= 0) {
        for (long t = 0; t < len; ++t) {
            if (t > e) {
                out.push_back(f.zero());
                continue;
            }
            out.push_back(pow(v, e - t) * pow(w, t) * Rat(binomial(e, t)));
        }
    } else {
        FieldElement vi = f.inverse(v), r = -(w * vi), cur = vi;
        for (long t = 0; t < len; ++t) {
            out.push_back(cur);
            cur = cur * r;
        }
    }
    return out;
}

/// Shintani's value zeta(1 - k, A, x) for the cone on {1, eps} as a
/// polynomial in x: coefficient [a][b] of x_1^a x_2^b (b = 0 when d = 1).
inline RatMatrix cone_polynomial(const NumberField& f, const FieldElement& eps, long k) {
    const int d = f.degree();
    if (d == 1) {
        // -B_k(x) / k
        RatMatrix p(static_cast<std::size_t>(k + 1), RatVec(1, 0));
        for (long j = 0; j <= k; ++j)
            p[static_cast<std::size_t>(j)][0] = -Rat(binomial(k, j)) * bernoulli(k - j) / Rat(k);
        return p;
    }
    const long N = 2 * k;
    FieldElement one = f.one(), epsc = f.conjugate(eps);
    std::vector<std::vector<FieldElement>> s1, s2;
    for (long e = -1; e < N; ++e) {
        s1.push_back(linear_power_series(one, one, e, k));
        s2.push_back(linear_power_series(eps, epsc, e, k));
    }
    // tr[l1] = Tr of the y^(k-1) coefficient of (1 + y)^(l1 - 1) (eps + eps' y)^(l2 - 1)
    std::vector<Rat> tr(static_cast<std::size_t>(N + 1));
    for (long l1 = 0; l1 <= N; ++l1) {
        const auto& a = s1[static_cast<std::size_t>(l1)];
        const auto& b = s2[static_cast<std::size_t>(N - l1)];
        FieldElement c = f.zero();
        for (long t = 0; t < k; ++t) c += a[static_cast<std::size_t>(t)] * b[static_cast<std::size_t>(k - 1 - t)];
        tr[static_cast<std::size_t>(l1)] = f.trace(c);
    }
    // bc[l][j]: coefficient of x^j in B_l(x) / l!
    RatMatrix bc(static_cast<std::size_t>(N + 1), RatVec(static_cast<std::size_t>(N + 1), 0));
    for (long l = 0; l <= N; ++l) {
        Rat fl(factorial(l));
        for (long j = 0; j <= l; ++j)
            bc[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = Rat(binomial(l, j)) * bernoulli(l - j) / fl;
    }
    Rat kf(factorial(k - 1));
    const Rat pref = kf * kf / 2; // (-1)^(l1 + l2) = 1 since l1 + l2 = 2k
    RatMatrix p(static_cast<std::size_t>(N + 1), RatVec(static_cast<std::size_t>(N + 1), 0));
    for (long l1 = 0; l1 <= N; ++l1) {
        const long l2 = N - l1;
        const Rat& t = tr[static_cast<std::size_t>(l1)];
        if (t == 0) continue;
        for (long a = 0; a <= l1; ++a)
            for (long b = 0; b <= l2; ++b)
                p[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
                    pref * t * bc[static_cast<std::size_t>(l1)][static_cast<std::size_t>(a)] *
                    bc[static_cast<std::size_t>(l2)][static_cast<std::size_t>(b)];
    }
    return p;
}

/// Points x of a shifted lattice in the half-open parallelepiped, scaled by a
/// common denominator: x = X / den.
struct ConePoints {
    Int den = 1;
    std::vector<std::array<Int, 2>> X;
};

} // namespace detail

/// Cone data for every narrow ray class mod m, ordered as class_representatives():
/// ideals in the class of b0 are (alpha) b0 with alpha in 1 + m b0^-1, alpha >> 0,
/// taken modulo eps^J, the totally positive units = 1 mod m.
inline std::shared_ptr<const std::vector<detail::ConePoints>> cone_points(const RayClassGroupPtr& g) {
    const NumberField& f = g->field();
    const int d = f.degree();
    require(d <= 2, ErrorKind::capability, "cone decomposition implemented for degree <= 2 only");
    const Ideal& m = g->modulus();
    return f.memo<std::vector<detail::ConePoints>>("cone:" + m.digest(), [&] {
        FieldElement eps = d == 1 ? f.one() : f.totally_positive_unit();
        long J = 1;
        FieldElement epsJ = eps;
        while (!m.contains(epsJ - f.one())) {
            epsJ = epsJ * eps;
            ++J;
        }
        // Cone generators v1 = N1, v2 = N1 eps lie in m, hence in every m b0^-1.
        const Int N1 = m.min_integer();
        RatMatrix V(static_cast<std::size_t>(d));
        V[0] = (f.one() * Rat(N1)).coords();
        if (d == 2) V[1] = (eps * Rat(N1)).coords();
        RatMatrix Vi = inverse(V);
        auto vcoords = [&](const FieldElement& y) {
            RatVec t(static_cast<std::size_t>(d), 0);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) t[static_cast<std::size_t>(j)] += y[i] * Vi[i][j];
            return t;
        };
        std::vector<RatVec> shifts{vcoords(f.one())};
        FieldElement epsinv = f.inverse(eps), cur = f.one();
        for (long j = 1; j < J; ++j) {
            cur = cur * epsinv;
            shifts.push_back(vcoords(cur));
        }
        std::vector<detail::ConePoints> out;
        for (const auto& [w, b0] : g->class_representatives()) {
            Ideal lat = m * b0.inverse();
            RatMatrix q;
            for (const auto& b : lat.basis()) q.push_back(vcoords(b));
            auto reps = detail::lattice_mod_unit(q);
            std::vector<RatVec> pts;
            Int den = 1;
            for (const auto& t0 : shifts)
                for (const auto& r : reps) {
                    RatVec x(static_cast<std::size_t>(d));
                    // x_1 in (0, 1], x_2 in [0, 1): the ray through 1 is in, the ray through eps out.
                    for (std::size_t j = 0; j < x.size(); ++j) {
                        Rat u = t0[j] + r[j];
                        x[j] = u - Rat(floor_rat(u));
                        den = lcm(den, x[j].get_den());
                    }
                    if (x[0] == 0) x[0] = 1;
                    pts.push_back(std::move(x));
                }
            detail::ConePoints cp;
            cp.den = den;
            for (const auto& x : pts) {
                std::array<Int, 2> X{0, 0};
                for (std::size_t j = 0; j < x.size(); ++j) X[j] = x[j].get_num() * (den / x[j].get_den());
                cp.X.push_back(X);
            }
            out.push_back(std::move(cp));
        }
        return out;
    });
}

/// Partial zeta values zeta(1 - k, C) for every narrow ray class C mod m,
/// ordered as class_representatives().
inline std::shared_ptr<const std::vector<Rat>> partial_zeta_values(const RayClassGroupPtr& g, long k) {
    require(k >= 1, ErrorKind::domain, "k must be at least 1");
    const NumberField& f = g->field();
    const int d = f.degree();
    require(d <= 2, ErrorKind::capability, "cone decomposition implemented for degree <= 2 only");
    const Ideal& m = g->modulus();
    return f.memo<std::vector<Rat>>("pz:" + m.digest() + ":" + std::to_string(k), [&] {
        FieldElement eps = d == 1 ? f.one() : f.totally_positive_unit();
        const RatMatrix poly = detail::cone_polynomial(f, eps, k);
        const std::size_t na = poly.size(), nb = poly[0].size();
        const Rat scale = rpow(Rat(m.min_integer()), static_cast<long>(d) * (k - 1));
        auto pts = cone_points(g);
        const auto& reps = g->class_representatives();
        std::vector<Rat> out;
        IntVec p1(na), p2(nb);
        for (std::size_t c = 0; c < reps.size(); ++c) {
            const auto& cp = (*pts)[c];
            IntMatrix S(na, IntVec(nb, 0));
            for (const auto& X : cp.X) {
                p1[0] = 1;
                for (std::size_t a = 1; a < na; ++a) p1[a] = p1[a - 1] * X[0];
                p2[0] = 1;
                for (std::size_t b = 1; b < nb; ++b) p2[b] = p2[b - 1] * X[1];
                for (std::size_t a = 0; a < na; ++a)
                    for (std::size_t b = 0; a + b < na && b < nb; ++b) S[a][b] += p1[a] * p2[b];
            }
            Rat total = 0;
            for (std::size_t a = 0; a < na; ++a)
                for (std::size_t b = 0; a + b < na && b < nb; ++b)
                    if (poly[a][b] != 0)
                        total += poly[a][b] * Rat(S[a][b]) / Rat(ipow(cp.den, static_cast<unsigned long>(a + b)));
            out.push_back(total * scale * rpow(reps[c].second.norm(), k - 1));
        }
        return out;
    });
}

/// L(chi, 1 - k) by summing partial zeta values against chi.
inline Cyclo l_value_cone(const Character& chi, long k) {
    const auto& g = chi.group_ptr();
    auto z = partial_zeta_values(g, k);
    const long N = chi.value_conductor();
    RatVec ring(static_cast<std::size_t>(N), 0);
    const auto& reps = g->class_representatives();
    for (std::size_t i = 0; i < reps.size(); ++i) {
        Rat pos = chi.theta_of(reps[i].first) * Rat(N);
        ring[static_cast<std::size_t>(to_long(pos.get_num()))] += (*z)[i];
    }
    return Cyclo::from_group_ring(N, ring).simplified();
}

/// L(chi, 1 - k) = -B_{k,chi} / k over Q with B_{k,chi} = M^(k-1) sum_a chi(a) B_k(a / M).
inline Cyclo l_value_bernoulli(const Character& chi, long k) {
    require(k >= 1, ErrorKind::domain, "k must be at least 1");
    const NumberField& f = chi.field();
    require(f.degree() == 1, ErrorKind::capability, "generalized Bernoulli path needs F = Q");
    const Int M = chi.modulus().min_integer();
    const long N = chi.value_conductor();
    RatVec ring(static_cast<std::size_t>(N), 0);
    const Rat scale = rpow(Rat(M), k - 1) / Rat(-k);
    for (Int a = 1; a <= M; ++a) {
        auto t = chi.theta(Ideal::principal(f, Rat(a)));
        if (!t) continue;
        Rat pos = *t * Rat(N);
        ring[static_cast<std::size_t>(to_long(pos.get_num()))] += bernoulli_poly(k, Rat(a) / Rat(M)) * scale;
    }
    return Cyclo::from_group_ring(N, ring).simplified();
}

inline LValue hecke_l_value(const Character& chi, long k) {
    require(k >= 1, ErrorKind::domain, "k must be at least 1");
    const int d = chi.field().degree();
    require(d <= 2, ErrorKind::capability, "L-values implemented for degree <= 2 only");
    if (d == 1) return {l_value_bernoulli(chi, k), k, "bernoulli-d1"};
    return {l_value_cone(chi, k), k, "shintani-d2"};
}

} // namespace eiscong
