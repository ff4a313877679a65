#include "cyclebound/bernstein.hpp"

#include "support/bernstein_cases.hpp"

#include <gtest/gtest.h>

using namespace cyclebound;

TEST(ZeroBounds, SpotValues) {
    auto z = zero_bound_b1(Rational(4), Rational(1, 2));
    ASSERT_TRUE(z.bound);
    EXPECT_EQ(*z.bound, 6u);
    EXPECT_EQ(zero_radius_b2(2, Rational(1), Rational(2)).R2, Rational(1, 128));
    EXPECT_EQ(zero_radius_b2(0, Rational(1), Rational(1)).N, 2u);
}

TEST(ZeroBounds, AlphaOneIsUnbounded) {
    auto z = zero_bound_b1(Rational(3), Rational(1));
    EXPECT_FALSE(z.bound);
    EXPECT_EQ(z.note, "unbounded at alpha = 1");
    EXPECT_EQ(*zero_bound_b1(Rational(1), Rational(1, 3)).bound, 0u);
}

TEST(Conversions, B1FromB2ClosedForm) {
    // alpha = 1/2, N = 1, beta = 1/2, c = 2: K = 2 (1 + 1/2 * 1/2 / 1/2 + 2) = 7.
    EXPECT_EQ(b1_from_b2(1, Rational(1), Rational(2), Rational(1, 2), Rational(1, 2)), Rational(7));
    EXPECT_THROW(b1_from_b2(1, Rational(1), Rational(2), Rational(1), Rational(1, 2)), InputError);
}

TEST(Conversions, B2FromB1RaisesNUntilTheTailConditionHolds) {
    auto p = b2_from_b1(Rational(1), Rational(1, 2), Rational(4));
    EXPECT_LE(Rational(4) * rpow(Rational(1, 2), p.N + 1) / Rational(1, 2), Rational(1, 2));
    EXPECT_GE(p.N, p.formula_N);
    EXPECT_EQ(p.c, Rational(4 * 9) / Rational(1, 4));
}

TEST(B2Check, FlagsTheFirstFailingIndex) {
    std::vector<Rational> a{1, 1, 10};
    auto r = b2_check(a, 1, Rational(1), Rational(2));
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.first_failure, std::optional<std::size_t>(2));
    EXPECT_TRUE(b2_check(a, 1, Rational(1), Rational(10)).ok());
    std::vector<double> ad{1.0, 1.0, 10.0};
    EXPECT_TRUE(b2_check(ad, 1, 1.0, 10.0).ok());
}

TEST(RandomInstances, RootCountsRespectTheBounds) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 40; ++i) {
        auto c = testgen::bernstein_case(rng);
        EXPECT_TRUE(c.ok) << "instance " << i << ": " << c.why;
    }
}

TEST(DisplacementCertificate, LambdaZeroEchoesTheRadius) {
    DivisionConstants dc{1.0, 2.0, 3.0};
    std::vector<double> lam(6, 0.0);
    auto cert = displacement_certificate(1.0, 0.0, 0.5, 4.0, dc, lam, 3);
    EXPECT_DOUBLE_EQ(cert.lambda_bar, 1.0);
    EXPECT_DOUBLE_EQ(cert.R, 1.0 / (2.0 * 4.0));
    EXPECT_DOUBLE_EQ(cert.c, 3.0 * 1.0 * 0.5 / std::pow(cert.R, 3));
    EXPECT_DOUBLE_EQ(cert.R2, cert.R / (std::pow(2.0, 6) * cert.c));
    EXPECT_EQ(cert.zero_bound, 2u);
    EXPECT_THROW(displacement_certificate(1.0, 0.0, 0.5, 4.0, dc, lam, 1), InputError);
}

TEST(DisplacementCertificate, ShrinksWithLargerParameters) {
    DivisionConstants dc{1.0, 1.5, 2.0};
    std::vector<double> small{0.1, -0.2}, large{3.0, -5.0};
    auto a = displacement_certificate(1.0, 0.0, 0.2, 6.0, dc, small, 4);
    auto b = displacement_certificate(1.0, 0.0, 0.2, 6.0, dc, large, 4);
    EXPECT_DOUBLE_EQ(b.lambda_bar, 5.0);
    EXPECT_LT(b.R, a.R);
    EXPECT_LT(b.R2, a.R2);
    EXPECT_GT(b.R2, 0.0);
}
