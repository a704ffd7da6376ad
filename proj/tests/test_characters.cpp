#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace eiscong;

namespace {

Cyclo sign_of_minus_one(const Character& psi) {
    int s = 1;
    for (int r : psi.signature())
        if (r) s = -s;
    return Cyclo(Rat(s));
}

/// tau(psi) tau(psi^-1) = sgn(-1)^r N(b) for every primitive character of modulus norm <= B.
void check_gauss_identity(const NumberField& f, long B) {
    long checked = 0;
    for (const auto& fi : ideals_up_to_norm(f, B)) {
        for (const auto& psi : characters_of(ray_class_group(f, fi.ideal))) {
            if (!psi.is_primitive()) continue;
            Cyclo lhs = (gauss_sum(psi) * gauss_sum(psi.inverse())).simplified();
            Cyclo rhs = sign_of_minus_one(psi).scaled(Rat(fi.norm()));
            EXPECT_EQ(lhs, rhs) << psi.label();
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Gauss, IdentityOverQ) { check_gauss_identity(*NumberField::rational(), 50); }

TEST(Gauss, IdentityOverQsqrt5) { check_gauss_identity(*NumberField::real_quadratic(5), 50); }

TEST(Gauss, QuadraticCharacterMod5) {
    // The real character mod 5 has tau = sqrt 5.
    auto Q = NumberField::rational();
    for (const auto& psi : characters_of(ray_class_group(*Q, Ideal::principal(*Q, Rat(5))))) {
        if (psi.order() != 2) continue;
        Cyclo t = gauss_sum(psi);
        EXPECT_EQ((t * t).simplified(), Cyclo(Rat(5)));
        EXPECT_NEAR(static_cast<double>(oracle::embed(t).real()), std::sqrt(5.0), 1e-12);
    }
}

TEST(Characters, PrimitiveCountsOverQ) {
    auto Q = NumberField::rational();
    for (long m = 1; m <= 40; ++m) {
        long n = 0;
        for (const auto& c : characters_of(ray_class_group(*Q, Ideal::principal(*Q, Rat(m)))))
            if (c.is_primitive()) ++n;
        EXPECT_EQ(n, oracle::primitive_dirichlet_count(m)) << "m = " << m;
    }
}

TEST(Characters, ValuesMatchKroneckerSymbol) {
    // The quadratic character of conductor 12 is a -> (12 / a).
    auto Q = NumberField::rational();
    int found = 0;
    for (const auto& c : characters_of(ray_class_group(*Q, Ideal::principal(*Q, Rat(12))))) {
        if (!c.is_primitive()) continue;
        ++found;
        for (long a = 1; a < 100; ++a)
            EXPECT_EQ(c(Ideal::principal(*Q, Rat(a))), Cyclo(Rat(mpz_kronecker_si(Int(12).get_mpz_t(), a))));
        EXPECT_EQ(c.signature(), std::vector<int>{0});
    }
    EXPECT_EQ(found, 1);
}

TEST(Characters, GroupLaws) {
    auto F = NumberField::real_quadratic(5);
    auto P11 = primes_above(*F, 11)[0];
    auto g = ray_class_group(*F, P11.ideal);
    auto chars = characters_of(g);
    ASSERT_EQ(static_cast<long>(chars.size()), to_long(g->order()));
    auto ideals = ideals_up_to_norm(*F, 60);
    for (const auto& a : chars) {
        EXPECT_TRUE(multiply(a, a.inverse()).is_trivial());
        EXPECT_EQ(a.pow(a.order()).is_trivial(), true);
        for (const auto& b : chars) {
            Character ab = multiply(a, b);
            for (const auto& fi : ideals)
                EXPECT_EQ(ab(fi.ideal), (a(fi.ideal) * b(fi.ideal)).simplified());
        }
    }
}

TEST(Characters, MultiplicativeOnIdeals) {
    auto F = NumberField::real_quadratic(5);
    auto g = ray_class_group(*F, Ideal::principal(*F, Rat(4)));
    auto ideals = ideals_up_to_norm(*F, 25);
    for (const auto& chi : characters_of(g))
        for (const auto& a : ideals)
            for (const auto& b : ideals)
                EXPECT_EQ(chi(a.ideal * b.ideal), (chi(a.ideal) * chi(b.ideal)).simplified());
}

TEST(Characters, TrivialOnTotallyPositiveOneModM) {
    auto F = NumberField::real_quadratic(5);
    auto m = Ideal::principal(*F, Rat(11));
    auto g = ray_class_group(*F, m);
    // Elements x = 1 + 11 y that are totally positive.
    for (long a = -3; a <= 3; ++a)
        for (long b = -3; b <= 3; ++b) {
            FieldElement x = F->one() + F->element(RatVec{Rat(11 * a), Rat(11 * b)});
            if (x.is_zero() || !F->is_totally_positive(x)) continue;
            for (const auto& chi : characters_of(g)) EXPECT_EQ(chi(Ideal::principal(x)), Cyclo(Rat(1)));
        }
}

TEST(Characters, LiftAndPrimitiveAgree) {
    auto Q = NumberField::rational();
    auto five = Ideal::principal(*Q, Rat(5)), fifteen = Ideal::principal(*Q, Rat(15));
    for (const auto& chi : characters_of(ray_class_group(*Q, five))) {
        Character up = lift(chi, fifteen);
        EXPECT_EQ(up.modulus(), fifteen);
        EXPECT_EQ(primitive(up).conductor().finite, chi.conductor().finite);
        for (long a = 1; a < 60; ++a) {
            if (a % 3 == 0) continue;
            auto I = Ideal::principal(*Q, Rat(a));
            EXPECT_EQ(up(I), chi(I));
        }
    }
}

TEST(Characters, LabelsAreStable) {
    auto F = NumberField::real_quadratic(5);
    auto g = ray_class_group(*F, Ideal::principal(*F, Rat(4)));
    std::set<std::string> seen;
    for (const auto& chi : characters_of(g)) EXPECT_TRUE(seen.insert(chi.label()).second);
    EXPECT_EQ(trivial_character(*F).label(), "trivial");
}

} // namespace
