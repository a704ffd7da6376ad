#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace eiscong;

namespace {

class QuadraticFields : public ::testing::TestWithParam<long> {};

TEST_P(QuadraticFields, DiscriminantAndUnits) {
    const long D = GetParam();
    auto F = NumberField::real_quadratic(D);
    EXPECT_EQ(F->degree(), 2);
    EXPECT_EQ(F->discriminant(), Int(oracle::fundamental_discriminant(D)));
    EXPECT_EQ(different(*F).norm_int(), F->discriminant());

    const auto& u = F->units();
    EXPECT_TRUE(u.fundamental.is_integral());
    EXPECT_EQ(F->norm(u.fundamental), Rat(u.fundamental_norm));
    EXPECT_GT(F->approx(u.fundamental, 0), 1.0L);
    EXPECT_TRUE(F->is_totally_positive(u.totally_positive));
    EXPECT_EQ(F->norm(u.totally_positive), Rat(1));
}

TEST_P(QuadraticFields, IdealCountsMatchDivisorSum) {
    // #{a : N(a) = n} = sum_{d | n} chi_disc(d).
    const long D = GetParam();
    auto F = NumberField::real_quadratic(D);
    const long disc = oracle::fundamental_discriminant(D);
    const long B = 120;
    std::map<long, long> counts;
    for (const auto& fi : ideals_up_to_norm(*F, B)) ++counts[to_long(fi.norm())];
    for (long n = 1; n <= B; ++n) {
        long expected = 0;
        for (long d = 1; d <= n; ++d)
            if (n % d == 0) expected += mpz_kronecker_si(Int(disc).get_mpz_t(), d);
        EXPECT_EQ(counts[n], expected) << "norm " << n;
    }
}

TEST_P(QuadraticFields, FactorizationMultipliesBack) {
    auto F = NumberField::real_quadratic(GetParam());
    for (const auto& fi : ideals_up_to_norm(*F, 150)) {
        EXPECT_EQ(multiply_out(*F, fi.factors), fi.ideal);
        EXPECT_EQ(multiply_out(*F, factor_ideal(fi.ideal)), fi.ideal);
        EXPECT_TRUE((fi.ideal * fi.ideal.inverse()).is_unit());
        EXPECT_EQ(Ideal::parse_digest(*F, fi.ideal.digest()), fi.ideal);
    }
}

TEST_P(QuadraticFields, NormIsMultiplicative) {
    auto F = NumberField::real_quadratic(GetParam());
    auto ids = ideals_up_to_norm(*F, 30);
    for (const auto& a : ids)
        for (const auto& b : ids) EXPECT_EQ((a.ideal * b.ideal).norm(), a.ideal.norm() * b.ideal.norm());
}

TEST_P(QuadraticFields, ClassNumbersMatchReducedForms) {
    const long D = GetParam();
    auto F = NumberField::real_quadratic(D);
    auto cd = class_groups(*F);
    auto expected = oracle::form_class_numbers(D);
    EXPECT_EQ(static_cast<long>(cd.h()), expected.h);
    EXPECT_EQ(static_cast<long>(cd.h_plus()), expected.h_plus);
}

INSTANTIATE_TEST_SUITE_P(Small, QuadraticFields, ::testing::Values(2, 3, 5, 6, 7, 10, 13, 15, 30, 79, 82));

TEST(Rational, RayClassGroupOrderIsTotient) {
    auto Q = NumberField::rational();
    for (long m = 1; m <= 40; ++m) {
        auto g = ray_class_group(*Q, Ideal::principal(*Q, Rat(m)));
        EXPECT_EQ(g->order(), Int(oracle::euler_phi(m))) << "m = " << m;
    }
}

TEST(Rational, PrimeLabels) {
    auto Q = NumberField::rational();
    auto p = prime_from_label(*Q, "7");
    EXPECT_EQ(p.label(), "7.1");
    EXPECT_EQ(p.norm(), 7);
    EXPECT_EQ(prime_from_label(*Q, "7.1").ideal, p.ideal);
}

TEST(RealQuadratic, SplittingOfSmallPrimes) {
    auto F = NumberField::real_quadratic(5);
    EXPECT_EQ(primes_above(*F, 5).size(), 1u); // ramified
    EXPECT_EQ(primes_above(*F, 11).size(), 2u);
    EXPECT_EQ(primes_above(*F, 7).size(), 1u);
    EXPECT_EQ(primes_above(*F, 7)[0].norm(), 49);
    auto P5 = primes_above(*F, 5)[0];
    EXPECT_EQ(valuation(Ideal::principal(*F, Rat(5)), P5), 2);
}

TEST(RealQuadratic, NarrowGroupDiffersWhenUnitNormIsPositive) {
    auto F = NumberField::real_quadratic(3);
    EXPECT_EQ(F->units().fundamental_norm, 1);
    auto cd = class_groups(*F);
    EXPECT_EQ(cd.h(), 1u);
    EXPECT_EQ(cd.h_plus(), 2u);
}

TEST(Errors, BadDigestIsParseError) {
    auto Q = NumberField::rational();
    try {
        Ideal::parse_digest(*Q, "x,y");
        FAIL() << "no exception";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parse);
    }
}

} // namespace
