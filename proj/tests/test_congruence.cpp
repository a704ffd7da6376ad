#include <gtest/gtest.h>

#include <chrono>

#include "fixtures.hpp"

using namespace eiscong;

namespace {

struct MapCase {
    long l, n;
    std::size_t maps;
    long degree;
};

class ResidueMaps : public ::testing::TestWithParam<MapCase> {};

TEST_P(ResidueMaps, CountDegreeAndRootOfUnity) {
    const auto c = GetParam();
    auto ms = residue_maps_above(Int(c.l), c.n);
    ASSERT_EQ(ms.size(), c.maps);
    // The residue degree is the order of l mod n.
    if (c.n > 1) EXPECT_EQ(c.degree, multiplicative_order(c.l, c.n));
    for (const auto& m : ms) {
        EXPECT_EQ(m.residue_degree(), c.degree);
        EXPECT_TRUE(m.kills(Cyclo::zeta(c.n, 0) - Cyclo(Rat(1))));
        auto z = m(Cyclo::zeta(c.n, 1));
        EXPECT_TRUE(m.field().equal(m.field().pow(z, Int(c.n)), m.field().one()));
        for (long d = 1; d < c.n; ++d)
            if (c.n % d == 0) EXPECT_FALSE(m.field().equal(m.field().pow(z, Int(d)), m.field().one()));
    }
}

INSTANTIATE_TEST_SUITE_P(Small, ResidueMaps,
                         ::testing::Values(MapCase{5, 4, 2, 1}, MapCase{7, 4, 1, 2}, MapCase{2, 7, 2, 3}, MapCase{691, 1, 1, 1},
                                           MapCase{11, 5, 4, 1}, MapCase{3, 80, 8, 4}, MapCase{2, 105, 4, 12},
                                           MapCase{13, 12, 4, 1}));

TEST(ResidueMap, RingHomomorphism) {
    Cyclo a = Cyclo::zeta(12, 1) + Cyclo(Rat(3));
    Cyclo b = Cyclo::zeta(12, 5).scaled(Rat(2, 7)) + Cyclo::zeta(4, 1);
    for (long l : {13L, 5L, 11L}) {
        for (const auto& m : residue_maps_above(Int(l), 12)) {
            EXPECT_TRUE(m.field().equal(m(a * b), m.field().mul(m(a), m(b))));
            EXPECT_TRUE(m.field().equal(m(a + b), m.field().add(m(a), m(b))));
        }
    }
}

TEST(ResidueMap, ExtensionsRestrictToTheBaseMap) {
    auto base = residue_maps_above(Int(11), 5);
    std::size_t total = 0;
    for (const auto& m : base) {
        auto ext = m.extensions(15);
        total += ext.size();
        Cyclo x = Cyclo::zeta(5, 2) + Cyclo(Rat(4));
        for (const auto& e : ext) EXPECT_EQ(e.kills(x), m.kills(x));
        // zeta_5 - r is killed above the map sending zeta_5 to r.
        auto r = m(Cyclo::zeta(5, 1));
        Cyclo y = Cyclo::zeta(5, 1) - Cyclo(Rat(r.empty() ? Int(0) : r[0]));
        EXPECT_TRUE(m.kills(y));
        for (const auto& e : ext) EXPECT_TRUE(e.kills(y));
    }
    EXPECT_EQ(total, residue_maps_above(Int(11), 15).size());
}

TEST(ResidueMap, Errors) {
    EXPECT_THROW(residue_maps_above(Int(5), 10), Error);
    auto m = residue_maps_above(Int(5), 1)[0];
    try {
        m(Cyclo(Rat(1, 5)));
        FAIL() << "no exception";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::valuation);
    }
}

TEST(ResidueMap, ConductorTwoSimplifies) {
    auto m = residue_maps_above(Int(2), 1)[0];
    EXPECT_TRUE(m.kills(Cyclo::zeta(2, 1) + Cyclo(Rat(1))));
}

TEST(Search, RamanujanReproduction) {
    auto t0 = std::chrono::steady_clock::now();
    auto Q = NumberField::rational();
    auto t = trivial_character(*Q);
    EisensteinSeries E(t, t, 12);
    auto r = search_congruence_primes(E, prime_from_label(*Q, "2"));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_TRUE(r.hypotheses_met());
    EXPECT_EQ(r.x, Cyclo(Rat(-691, 8)));
    EXPECT_EQ(r.applicable_primes(), std::vector<Int>{Int(691)});
    EXPECT_FALSE(r.any_newform_possible());
    ASSERT_EQ(r.candidates.size(), 1u);
    EXPECT_EQ(r.candidates[0].newform.which_case(), "none");
    EXPECT_LT(secs, 1.0);
}

TEST(Search, XIsLValueTimesEulerFactor) {
    // X = L(eta^-1 psi, 1 - k) (eta(p) - psi(p) N(p)^k), compared with an independent L-value.
    auto Q = NumberField::rational();
    auto t = trivial_character(*Q);
    for (long k : {4, 6, 8, 10, 12})
        for (long pl : {2, 3, 5}) {
            EisensteinSeries E(t, t, k);
            auto r = search_congruence_primes(E, prime_from_label(*Q, std::to_string(pl)));
            Rat expected = oracle::riemann_zeta_negative(k) * (Rat(1) - Rat(oracle::power(Int(pl), static_cast<unsigned long>(k))));
            EXPECT_EQ(r.x, Cyclo(expected)) << "k " << k << " p " << pl;
            // Every candidate divides the numerator of the norm.
            for (const auto& c : r.candidates) EXPECT_EQ(Int(r.norm.get_num()) % c.l, 0);
        }
}

TEST(Search, RealQuadraticWeightFour) {
    auto F = NumberField::real_quadratic(5);
    auto t = trivial_character(*F);
    EisensteinSeries E(t, t, 4);
    auto r = search_congruence_primes(E, prime_from_label(*F, "2"));
    // zeta_F(-3) = 1/60 and (1 - N(2)^4) = -255 give X = -17/4.
    EXPECT_EQ(oracle::siegel_zeta(5, 4), Rat(1, 60));
    EXPECT_EQ(r.x, Cyclo(Rat(-17, 4)));
    EXPECT_EQ(r.applicable_primes(), std::vector<Int>{Int(17)});
}

TEST(Search, OutsideHypotheses) {
    auto Q = NumberField::rational();
    auto t = trivial_character(*Q);
    EisensteinSeries E(t, t, 2);
    auto r = search_congruence_primes(E, prime_from_label(*Q, "5"));
    EXPECT_FALSE(r.hypotheses_met());
    EXPECT_FALSE(r.hypothesis_failures.empty());
}

TEST(Search, SmallPrimesAreFilteredOut) {
    // k = 12, p = 3: X = zeta(-11) (1 - 3^12) has 2, 3, 5, 7, 13, 691 in play; only l >= 5, l > k + 1 survive.
    auto Q = NumberField::rational();
    auto t = trivial_character(*Q);
    EisensteinSeries E(t, t, 12);
    auto r = search_congruence_primes(E, prime_from_label(*Q, "3"));
    for (const auto& c : r.candidates) {
        if (c.l <= 13) EXPECT_FALSE(c.theorem_applicable()) << c.l;
        if (c.theorem_applicable()) {
            EXPECT_GT(c.l, 13);
            EXPECT_TRUE(c.integral && c.ord_positive && c.unramified && c.degree_ok);
        }
    }
    auto ap = r.applicable_primes();
    EXPECT_NE(std::find(ap.begin(), ap.end(), Int(691)), ap.end());
}

class Verify : public ::testing::Test {
protected:
    static const EigenformData& delta() {
        static const auto d = oracle::delta_eigenform(3000);
        return d;
    }
};

TEST_F(Verify, RamanujanPassesAt691) {
    auto Q = NumberField::rational();
    auto t = trivial_character(*Q);
    EisensteinSeries E(t, t, 12);
    auto v = verify_congruence(E, prime_from_label(*Q, "2"), delta(), Int(691), 3000);
    EXPECT_TRUE(v.all_pass());
    ASSERT_EQ(v.primes.size(), 1u);
    EXPECT_GT(v.primes[0].checked, 400);
    EXPECT_EQ(v.skipped, (std::vector<std::string>{"2.1", "691.1"}));
}

TEST_F(Verify, FailsAtFiveWithWitness) {
    auto Q = NumberField::rational();
    auto t = trivial_character(*Q);
    EisensteinSeries E(t, t, 12);
    auto v = verify_congruence(E, prime_from_label(*Q, "2"), delta(), Int(5), 3000);
    EXPECT_FALSE(v.any_pass());
    ASSERT_EQ(v.primes.size(), 1u);
    ASSERT_TRUE(v.primes[0].counterexample.has_value());
    // The witness really is a counterexample: tau(q) != 1 + q^11 mod 5.
    const std::string w = *v.primes[0].counterexample;
    long q = std::stol(w.substr(0, w.find('.')));
    auto tau = oracle::ramanujan_tau(q);
    Int diff = Int(oracle::to_string(tau[q])) - 1 - oracle::power(Int(q), 11);
    EXPECT_NE(diff % 5, 0);
}

TEST_F(Verify, MissingEigenvaluesAreIncompleteData) {
    auto Q = NumberField::rational();
    auto t = trivial_character(*Q);
    EisensteinSeries E(t, t, 12);
    EigenformData d = delta();
    d.eigenvalues.erase(d.eigenvalues.begin() + 3);
    try {
        verify_congruence(E, prime_from_label(*Q, "2"), d, Int(691), 3000);
        FAIL() << "no exception";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::incomplete_data);
        EXPECT_NE(std::string(e.what()).find("7.1"), std::string::npos);
    }
}

TEST_F(Verify, RepeatedFactorModLIsCapabilityError) {
    auto Q = NumberField::rational();
    auto t = trivial_character(*Q);
    EisensteinSeries E(t, t, 12);
    EigenformData d = delta();
    d.polynomial = {Rat(0), Rat(691), Rat(1)}; // x^2 + 691 x = x^2 mod 691
    for (auto& [label, v] : d.eigenvalues) v.push_back(Rat(0));
    try {
        verify_congruence(E, prime_from_label(*Q, "2"), d, Int(691), 200);
        FAIL() << "no exception";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::capability);
    }
}

TEST(VerifyQuadraticCoefficients, SplitsIntoOrbits) {
    // Coefficient field Q(i) given with eigenvalues in Q: x^2 + 1 splits mod 5 and stays inert mod 7.
    auto Q = NumberField::rational();
    auto t = trivial_character(*Q);
    EisensteinSeries E(t, t, 12);
    EigenformData d = oracle::delta_eigenform(500);
    d.polynomial = {Rat(1), Rat(0), Rat(1)};
    for (auto& [label, v] : d.eigenvalues) v.push_back(Rat(0));
    auto v5 = verify_congruence(E, prime_from_label(*Q, "2"), d, Int(5), 500);
    EXPECT_EQ(v5.primes.size(), 2u);
    auto v691 = verify_congruence(E, prime_from_label(*Q, "2"), d, Int(691), 500);
    EXPECT_TRUE(v691.all_pass());
}

TEST(Linkage, FlaggedCandidatesKillStabilizedConstantTerms) {
    auto Q = NumberField::rational();
    auto t = trivial_character(*Q);
    long checked = 0;
    for (const auto& psi : fixture::primitive_characters(*Q, Ideal::principal(*Q, Rat(5))))
        for (long k = 3; k <= 6; ++k)
            for (long pl : {2, 3}) {
                std::unique_ptr<EisensteinSeries> E;
                try {
                    E = std::make_unique<EisensteinSeries>(t, psi, k);
                } catch (const Error&) {
                    continue;
                }
                auto p = prime_from_label(*Q, std::to_string(pl));
                auto rep = search_congruence_primes(*E, p);
                StabilizedSeries S(*E, p, Stabilizer::eta);
                CuspFrame fr(*E, S.level());
                std::vector<Cyclo> vals{S.constant_term_infty(0)};
                for (const auto& [a, g] : small_cusps(*Q, 3)) vals.push_back(constant_term_at_cusp(*E, SeriesKind::delta_eta, p, fr.datum(a, g, 0)));
                for (const auto& c : rep.candidates) {
                    if (!c.theorem_applicable()) continue;
                    for (const auto& v : vals)
                        for (const auto& m : maps_for(c.map, v)) {
                            EXPECT_TRUE(m.kills(v)) << psi.label() << " k " << k << " l " << c.l;
                            ++checked;
                        }
                }
            }
    EXPECT_GT(checked, 0);
}

} // namespace
