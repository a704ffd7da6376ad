#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eiscong/eisenstein.hpp"
#include "eiscong/finite_field.hpp"

namespace eiscong {

/// Newform condition at one residue map: both Euler-type factors and the
/// level-raising quantity c^2 - phi(p) N(p)^(k-2) (N(p) + 1)^2, c = eta(p) + psi(p) N(p)^(k-1).
struct NewformCheck {
    bool first_vanishes = false;  // Lambda' | eta(p) - psi(p) N(p)^k
    bool second_vanishes = false; // Lambda' | eta(p) - psi(p) N(p)^(k-2)
    bool taylor_vanishes = false;
    bool holds() const { return first_vanishes || second_vanishes; }
    std::string which_case() const {
        if (first_vanishes && second_vanishes) return "A+B";
        if (first_vanishes) return "A";
        if (second_vanishes) return "B";
        return "none";
    }
};

struct Candidate {
    Int l;
    ResidueMap map;
    bool integral = true;       // false: l divides the denominator of X
    bool ord_positive = false;
    bool l_gt_k_plus_1 = false;
    bool unramified = false;
    bool degree_ok = false;     // [F(zeta_l):F] >= 4, i.e. l >= 5 for unramified l
    NewformCheck newform;

    bool theorem_applicable() const { return integral && ord_positive && l_gt_k_plus_1 && unramified && degree_ok; }
    bool newform_possible() const { return theorem_applicable() && newform.holds(); }
};

struct CongruenceReport {
    std::string field;
    std::string eta, psi, prime;
    long k = 0;
    std::vector<std::string> hypothesis_failures; // empty when the theorem hypotheses hold
    Cyclo l_value;     // L(eta^-1 psi, 1 - k) on the modulus ab
    Cyclo euler;       // eta(p) - psi(p) N(p)^k
    Cyclo second;      // eta(p) - psi(p) N(p)^(k-2)
    Cyclo x;           // l_value * euler
    Rat norm;          // absolute norm of x
    long value_conductor = 1;
    std::vector<Candidate> candidates;
    std::string degree_rule = "unramified l gives [F(zeta_l):F] = l - 1, so the degree condition reads l >= 5";

    bool hypotheses_met() const { return hypothesis_failures.empty(); }
    std::vector<Int> applicable_primes() const {
        std::vector<Int> out;
        for (const auto& c : candidates)
            if (c.theorem_applicable() && (out.empty() || out.back() != c.l)) out.push_back(c.l);
        return out;
    }
    bool any_newform_possible() const {
        for (const auto& c : candidates)
            if (c.newform_possible()) return true;
        return false;
    }
};

inline NewformCheck newform_criterion(const EisensteinSeries& E, const PrimeIdeal& p, const ResidueMap& map) {
    const Rat N(p.norm());
    const long k = E.k();
    const Cyclo eta = E.eta()(p.ideal), psi = E.psi()(p.ideal);
    const Cyclo first = eta - psi.scaled(rpow(N, k));
    const Cyclo second = eta - psi.scaled(rpow(N, k - 2));
    const Cyclo c = eta + psi.scaled(rpow(N, k - 1));
    const Cyclo taylor = c * c - (eta * psi).scaled(rpow(N, k - 2) * (N + 1) * (N + 1));
    auto zero = [&](const Cyclo& v) {
        for (const auto& m : maps_for(map, v))
            if (!m.kills(v)) return false;
        return true;
    };
    NewformCheck out;
    out.first_vanishes = zero(first);
    out.second_vanishes = zero(second);
    out.taylor_vanishes = zero(taylor);
    return out;
}

/// Candidates l for Lambda' | L(eta^-1 psi, 1 - k) (eta(p) - psi(p) N(p)^k), with every
/// side condition evaluated per residue map above l.
inline CongruenceReport search_congruence_primes(const EisensteinSeries& E, const PrimeIdeal& p) {
    const NumberField& f = E.field();
    const long k = E.k();
    CongruenceReport rep;
    rep.field = f.id();
    rep.eta = E.eta().label();
    rep.psi = E.psi().label();
    rep.prime = p.label();
    rep.k = k;
    if (k <= 2) rep.hypothesis_failures.push_back("k <= 2");
    for (const auto& [Q, e] : factor_ideal(E.level()))
        if (e > 1) {
            rep.hypothesis_failures.push_back("level is not squarefree");
            break;
        }
    if (E.level().is_subset_of(p.ideal)) rep.hypothesis_failures.push_back("p divides the level");

    const Rat N(p.norm());
    const Cyclo eta = E.eta()(p.ideal), psi = E.psi()(p.ideal);
    rep.l_value = hecke_l_value(multiply(E.eta().inverse(), E.psi()), k).value;
    rep.euler = (eta - psi.scaled(rpow(N, k))).simplified();
    rep.second = (eta - psi.scaled(rpow(N, k - 2))).simplified();
    rep.x = (rep.l_value * rep.euler).simplified();
    rep.norm = rep.x.norm();
    rep.value_conductor = rep.x.conductor();
    if (rep.x.is_zero()) return rep; // every l divides zero; nothing to rank

    const Int disc = f.discriminant();
    const Int den = rep.x.denominator();
    for (const auto& l : prime_divisors(abs(rep.norm.get_num()))) {
        if (Int(rep.value_conductor) % l == 0) {
            // ramified in the value field: no residue maps, report the l alone
            Candidate c{l, ResidueMap(l, 1, {0, 1}, 0)};
            c.integral = den % l != 0;
            c.ord_positive = false;
            c.l_gt_k_plus_1 = l > k + 1;
            c.unramified = disc % l != 0;
            c.degree_ok = l >= 5;
            rep.candidates.push_back(c);
            continue;
        }
        for (const auto& m : residue_maps_above(l, rep.value_conductor)) {
            Candidate c{l, m};
            c.integral = den % l != 0;
            c.ord_positive = c.integral && m.kills(rep.x);
            c.l_gt_k_plus_1 = l > k + 1;
            c.unramified = disc % l != 0;
            c.degree_ok = l >= 5;
            if (c.ord_positive) c.newform = newform_criterion(E, p, m);
            rep.candidates.push_back(c);
        }
    }
    return rep;
}

/// Eigenvalues of a Hilbert eigenform as coordinates in the power basis of
/// Q[x] / (polynomial).
struct EigenformData {
    std::string schema_version = "1";
    std::string field;
    std::string level;     // ideal digest
    long k = 0;
    std::string character; // label
    RatVec polynomial;     // low degree first, monic
    std::vector<std::pair<std::string, RatVec>> eigenvalues;
    std::string provenance;
    std::map<std::string, std::string> extra; // unknown fields, kept verbatim as JSON text
};

struct CompositumPrime {
    int coefficient_factor = 0; // index of the factor of the coefficient polynomial mod l
    int orbit = 0;
    ResidueMap character_map;   // the Lambda' it lies above
    bool passed = true;
    long checked = 0;
    std::optional<std::string> counterexample; // prime label
};

struct VerificationReport {
    Int l;
    long bound = 0;
    std::vector<std::string> skipped; // primes dividing m p l
    std::vector<CompositumPrime> primes;
    bool all_pass() const {
        for (const auto& p : primes)
            if (!p.passed) return false;
        return !primes.empty();
    }
    bool any_pass() const {
        for (const auto& p : primes)
            if (p.passed) return true;
        return false;
    }
};

/// Checks c(q, f) = eta(q) + psi(q) N(q)^(k-1) mod Lambda for every prime Lambda of
/// the compositum of the coefficient field and Q(eta, psi) above l, over primes
/// q not dividing m p l of norm <= bound.
inline VerificationReport verify_congruence(const EisensteinSeries& E, const PrimeIdeal& p, const EigenformData& data,
                                            const Int& l, long bound) {
    const NumberField& f = E.field();
    require(data.k == E.k(), ErrorKind::validation, "eigenform weight differs from the series weight");
    require(data.field.empty() || data.field == f.id(), ErrorKind::validation, "eigenform field differs");
    require(is_probable_prime(l), ErrorKind::domain, l.get_str() + " is not prime");
    const Ideal mpl = E.level() * p.ideal * Ideal::principal(f, Rat(l));

    // Eigenvalues for every prime in range, gaps collected before any arithmetic.
    std::map<std::string, RatVec> given(data.eigenvalues.begin(), data.eigenvalues.end());
    VerificationReport rep;
    rep.l = l;
    rep.bound = bound;
    std::vector<std::pair<PrimeIdeal, const RatVec*>> work;
    std::vector<std::string> gaps;
    for (const auto& Q : primes_up_to_norm(f, bound)) {
        if (mpl.is_subset_of(Q.ideal)) {
            rep.skipped.push_back(Q.label());
            continue;
        }
        auto it = given.find(Q.label());
        if (it == given.end()) gaps.push_back(Q.label());
        else work.emplace_back(Q, &it->second);
    }
    if (!gaps.empty()) {
        std::string msg = "missing eigenvalues for";
        for (const auto& g : gaps) msg += " " + g;
        fail(ErrorKind::incomplete_data, msg);
    }

    // Eisenstein eigenvalues and their common conductor.
    std::vector<Cyclo> lam;
    long n = 1;
    for (const auto& [Q, v] : work) {
        lam.push_back(E.eigenvalue(Q));
        n = lcm(n, lam.back().conductor());
    }
    require(Int(n) % l != 0, ErrorKind::domain, l.get_str() + " ramifies in the character value field");

    PrimeField k(l);
    PolyRing<PrimeField> R{k};
    require(!data.polynomial.empty() && data.polynomial.back() == 1, ErrorKind::validation,
            "coefficient polynomial must be monic");
    std::vector<Int> P;
    for (const auto& c : data.polynomial) P.push_back(k.from_rat(c));
    R.trim(P);
    require(R.deg(R.gcd(P, R.derivative(P))) == 0, ErrorKind::capability,
            l.get_str() + " divides the discriminant of the coefficient polynomial");
    auto hs = detail::factor_squarefree(k, P);
    std::sort(hs.begin(), hs.end());

    for (const auto& gmap : residue_maps_above(l, n)) {
        const long dg = gmap.residue_degree();
        for (std::size_t hi = 0; hi < hs.size(); ++hi) {
            const long dh = R.deg(hs[hi]);
            const long L = lcm(dg, dh);
            ExtField Ef(k, L == dg ? gmap.factor() : detail::irreducible_of_degree(k, L));
            PolyRing<ExtField> RE{Ef};
            auto lift = [&](const std::vector<Int>& poly) {
                std::vector<ExtField::E> out;
                for (const auto& c : poly) out.push_back(Ef.from_base(c));
                RE.trim(out);
                return out;
            };
            const auto s0 = L == dg ? ExtField::E{0, 1} : detail::roots(Ef, lift(gmap.factor())).at(0);
            auto rh = detail::roots(Ef, lift(hs[hi]));
            // Orbits of roots of h under x -> x^(l^dg); each gives one prime above (h, g).
            std::vector<bool> seen(rh.size(), false);
            int orbit = 0;
            for (std::size_t i = 0; i < rh.size(); ++i) {
                if (seen[i]) continue;
                auto x = rh[i];
                for (long j = 0; j < L / dg; ++j) {
                    auto pos = std::find(rh.begin(), rh.end(), x) - rh.begin();
                    seen[static_cast<std::size_t>(pos)] = true;
                    x = Ef.pow(x, ipow(l, static_cast<unsigned long>(dg)));
                }
                CompositumPrime cp{static_cast<int>(hi) + 1, ++orbit, gmap};
                const auto& r = rh[i];
                for (std::size_t w = 0; w < work.size() && cp.passed; ++w) {
                    const RatVec& v = *work[w].second;
                    require(v.size() + 1 == data.polynomial.size(), ErrorKind::validation,
                            "eigenvalue vector for " + work[w].first.label() + " has the wrong length");
                    ExtField::E fv = Ef.zero(), rp = Ef.one();
                    for (const auto& c : v) {
                        fv = Ef.add(fv, Ef.mul(Ef.from_base(k.from_rat(c)), rp));
                        rp = Ef.mul(rp, r);
                    }
                    const Cyclo& e = lam[w];
                    require(e.denominator() % l != 0, ErrorKind::valuation, "Eisenstein eigenvalue not l-integral");
                    ExtField::E ev = Ef.zero();
                    const auto zeta = Ef.pow(s0, Int(n / e.conductor()));
                    ExtField::E zp = Ef.one();
                    for (const auto& c : e.coeffs()) {
                        ev = Ef.add(ev, Ef.mul(Ef.from_base(k.from_rat(c)), zp));
                        zp = Ef.mul(zp, zeta);
                    }
                    ++cp.checked;
                    if (!Ef.equal(fv, ev)) {
                        cp.passed = false;
                        cp.counterexample = work[w].first.label();
                    }
                }
                rep.primes.push_back(cp);
            }
        }
    }
    return rep;
}

} // namespace eiscong
