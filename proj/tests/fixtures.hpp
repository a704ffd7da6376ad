#pragma once
// Shared configurations for the eigenform and constant-term suites.

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace fixture {

using namespace eiscong;

struct Config {
    std::shared_ptr<NumberField> field;
    Character eta, psi;
    long k;
};

inline std::vector<Character> primitive_characters(const NumberField& f, const Ideal& m) {
    std::vector<Character> out;
    for (const auto& c : characters_of(ray_class_group(f, m)))
        if (c.is_primitive()) out.push_back(c);
    return out;
}

/// Admissible (eta, psi, k) drawn with a fixed seed; `count` per field.
inline std::vector<Config> random_configurations(std::size_t count, std::uint64_t seed = 20261016) {
    std::mt19937_64 rng(seed);
    std::vector<Config> out;
    auto Q = NumberField::rational();
    auto F = NumberField::real_quadratic(5);
    struct Pool {
        std::shared_ptr<NumberField> f;
        std::vector<Character> chars;
    };
    std::vector<Pool> pools;
    {
        Pool p{Q, {}};
        for (long m : {1, 3, 4, 5, 7, 8})
            for (const auto& c : primitive_characters(*Q, Ideal::principal(*Q, Rat(m)))) p.chars.push_back(c);
        pools.push_back(p);
    }
    {
        Pool p{F, {}};
        p.chars.push_back(trivial_character(*F));
        for (const auto& m : {Ideal::principal(*F, Rat(4)), primes_above(*F, 11)[0].ideal, primes_above(*F, 5)[0].ideal})
            for (const auto& c : primitive_characters(*F, m)) p.chars.push_back(c);
        pools.push_back(p);
    }
    std::set<std::string> seen;
    for (const auto& pool : pools) {
        std::size_t made = 0;
        for (int attempt = 0; made < count && attempt < 10000; ++attempt) {
            const auto& eta = pool.chars[rng() % pool.chars.size()];
            const auto& psi = pool.chars[rng() % pool.chars.size()];
            long k = 1 + static_cast<long>(rng() % 6);
            if (eta.modulus().norm_int() * psi.modulus().norm_int() > 60) continue;
            if (!seen.insert(eta.label() + "|" + psi.label() + "|" + std::to_string(k)).second) continue;
            try {
                EisensteinSeries E(eta, psi, k);
            } catch (const Error&) {
                continue;
            }
            out.push_back({pool.f, eta, psi, k});
            ++made;
        }
    }
    return out;
}

/// Constant term of E | gamma at a finite cusp, estimated by averaging
/// f(gamma z) (cz + d)^-k over one period of the transformed expansion.
/// Only over Q, against the first narrow component; `shift` is 1 for E and
/// N(p) for the raised series.
inline std::complex<long double> numerical_cusp_term(const EisensteinSeries& E, const CuspDatum& x, const Ideal& level,
                                                     long shift, const std::vector<std::complex<long double>>& coeffs) {
    using C = std::complex<long double>;
    auto rd = [](const FieldElement& e) { return static_cast<long double>(e.coords()[0].get_d()); };
    const long NT = static_cast<long>(coeffs.size()) - 1;
    long double t = std::fabs(rd(x.t.basis()[0]));
    const long double al = rd(x.alpha), be = rd(x.beta), ga = rd(x.gamma), de = rd(x.delta);
    const Rat ar = x.alpha.coords()[0], gr = x.gamma.coords()[0], tr = x.t.norm();
    const Rat Nm(level.norm_int());
    Int h = 1;
    for (const Rat& r : {Rat(ar * ar * tr), Rat(gr * gr / (Nm * tr)), Rat(ar * gr / Nm)}) h = lcm(h, Int(r.get_den()));
    const long double W = h.get_d(), y = W / 2, xs = -de / ga;
    const long M = 128;
    const C c0 = oracle::embed(E.constant_term_infty(0));
    C s = 0;
    for (long j = 0; j < M; ++j) {
        C z(xs - W / 2 + W * static_cast<long double>(j) / M, y);
        C w = (al * z + be) / (ga * z + de);
        C f = c0;
        C q = std::exp(C(0, 2 * M_PIl * t * static_cast<long double>(shift)) * w), qn = q;
        for (long n = 1; n * shift <= NT; ++n) {
            f += coeffs[static_cast<std::size_t>(n)] * qn;
            qn *= q;
            if (std::abs(qn) < 1e-30L) break;
        }
        s += f * std::pow(ga * z + de, -static_cast<long double>(E.k()));
    }
    return s / static_cast<long double>(M);
}

} // namespace fixture
