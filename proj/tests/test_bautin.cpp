#include "cyclebound/bautin.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cyclebound;

namespace {

/// Random rational point with entries k/100, |k| <= 10.
std::vector<Rational> random_point(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> k(-10, 10);
    std::vector<Rational> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(ratio(k(rng), 100));
    return p;
}

double value_at(const PiPoly& p, const std::vector<Rational>& pt) {
    std::vector<PiFrac> q(pt.begin(), pt.end());
    return p.evaluate(q).value();
}

ParamPoly lin(const RingPtr& r, std::vector<Rational> c) {
    ParamPoly p(r);
    for (std::size_t i = 0; i < c.size(); ++i) p += ParamPoly::variable(r, i).scaled(c[i]);
    return p;
}

} // namespace

TEST(FieldSpec, SymbolicRingOrderAndNames) {
    auto f = FieldSpec::symbolic(2);
    EXPECT_EQ(f.ring->names(), (std::vector<std::string>{"a20", "a11", "a02", "b20", "b11", "b02"}));
    EXPECT_EQ(f.a[2], ParamPoly::variable(f.ring, "a20"));
    EXPECT_EQ(f.b[0], ParamPoly::variable(f.ring, "b02"));
    EXPECT_THROW(FieldSpec::symbolic(1), InputError);
}

TEST(FieldSpec, AtProducesConcreteValues) {
    auto f = FieldSpec::symbolic(2);
    std::vector<Rational> pt{1, 2, 3, 4, 5, 6};
    auto g = f.at(pt);
    EXPECT_TRUE(g.is_concrete());
    EXPECT_EQ(g.values(), pt);
}

TEST(BuildAB, MatchesPolarFormulas) {
    auto f = FieldSpec::symbolic(3);
    auto [A, B] = build_AB(f);
    std::vector<double> lam{0.3, -0.2, 0.5, 0.1, -0.4, 0.7, 0.25, -0.6};
    // Ring order a30, a21, a12, a03, b30, ...: a[i] multiplies x^i y^(3-i).
    for (double th : {0.1, 1.0, 2.5, 5.9}) {
        double c = std::cos(th), s = std::sin(th), P = 0, Q = 0;
        for (unsigned i = 0; i <= 3; ++i) {
            double m = std::pow(c, i) * std::pow(s, 3 - i);
            P += lam[3 - i] * m;
            Q += lam[7 - i] * m;
        }
        EXPECT_NEAR(A.eval(th, lam), c * P + s * Q, 1e-13);
        EXPECT_NEAR(B.eval(th, lam), c * Q - s * P, 1e-13);
    }
}

TEST(Recursion, LowOrdersVanishIdentically) {
    for (unsigned d : {2u, 3u, 4u}) {
        auto rs = run_recursion(FieldSpec::symbolic(d), d + 1);
        for (unsigned k = 2; k < d; ++k) EXPECT_TRUE(rs.v[k].is_zero()) << "d=" << d << " k=" << k;
        EXPECT_FALSE(rs.v[d].is_zero());
    }
}

TEST(Recursion, MatchesNumericSeriesOracle) {
    std::mt19937_64 rng(7);
    for (unsigned d : {2u, 3u}) {
        const unsigned K = 7;
        auto sym = FieldSpec::symbolic(d);
        auto rs = run_recursion(sym, K);
        for (int trial = 0; trial < 3; ++trial) {
            auto pt = random_point(rng, sym.ring->size());
            auto conc = sym.at(pt);
            std::vector<double> a(d + 1), b(d + 1);
            auto vals = conc.values();
            for (unsigned k = 0; k <= d; ++k) {
                a[d - k] = vals[k].get_d();
                b[d - k] = vals[d + 1 + k].get_d();
            }
            auto ref = oracle::return_series(d, a, b, K);
            for (unsigned k = 2; k <= K; ++k) {
                double exact = value_at(rs.L[k], pt);
                EXPECT_NEAR(exact, ref[k], 1e-9 * std::max(1e-6, std::abs(exact))) << "d=" << d << " k=" << k;
            }
        }
    }
}

TEST(Recursion, FirstFocalValueOfTheQuadraticFamily) {
    // Frozen after agreement with the numeric series oracle above.
    auto f = FieldSpec::symbolic(2);
    auto rs = run_recursion(f, 3);
    EXPECT_EQ(rs.L[3].to_string(),
              "1/4*pi^1*a20*a11 - 1/2*pi^1*a20*b20 + 1/4*pi^1*a11*a02 + 1/2*pi^1*a02*b02 - 1/4*pi^1*b20*b11 - "
              "1/4*pi^1*b11*b02");
}

TEST(Recursion, HamiltonianQuadraticIsACenter) {
    auto f = FieldSpec::concrete(2, {0, 0, 0}, {0, 0, 1});
    auto rs = run_recursion(f, 9);
    for (unsigned k = 2; k <= 9; ++k) EXPECT_TRUE(rs.L[k].is_zero()) << k;
}

TEST(Recursion, ResourceLimitKeepsThePartialSeries) {
    RecursionLimits lim;
    lim.max_terms = 10;
    try {
        run_recursion(FieldSpec::symbolic(2), 9, lim);
        FAIL() << "expected RecursionAborted";
    } catch (const RecursionAborted& e) {
        EXPECT_GE(e.partial().K, 2u);
        EXPECT_LT(e.partial().K, 9u);
        EXPECT_EQ(e.partial().L.size(), e.partial().K + 1);
    }
}

TEST(Rotation, QuadraticGoldenMatrix) {
    // Coefficients of the rotated parameters for (c, s) = (3/5, 4/5), from an
    // independent symbolic expansion of c P(Rx) + s Q(Rx) and -s P(Rx) + c Q(Rx).
    auto f = FieldSpec::symbolic(2);
    auto g = rotate_params(f, Rational(3, 5), Rational(4, 5));
    auto q = [](int n) { return ratio(n, 125); };
    auto r = f.ring;
    EXPECT_EQ(g.a[2], lin(r, {q(27), q(36), q(48), q(36), q(48), q(64)}));
    EXPECT_EQ(g.a[1], lin(r, {q(-72), q(-21), q(72), q(-96), q(-28), q(96)}));
    EXPECT_EQ(g.a[0], lin(r, {q(48), q(-36), q(27), q(64), q(-48), q(36)}));
    EXPECT_EQ(g.b[2], lin(r, {q(-36), q(-48), q(-64), q(27), q(36), q(48)}));
    EXPECT_EQ(g.b[1], lin(r, {q(96), q(28), q(-96), q(-72), q(-21), q(72)}));
    EXPECT_EQ(g.b[0], lin(r, {q(-64), q(48), q(-36), q(48), q(-36), q(27)}));
    EXPECT_THROW(rotate_params(f, Rational(1, 2), Rational(1, 2)), InputError);
}

TEST(Invariants, FirstInvariantIsFocalValueOverTwoPi) {
    auto rs = run_recursion(FieldSpec::symbolic(2), 5);
    auto inv = invariant_series(rs);
    auto two_pi_z3 = to_pi_poly(inv.z[3]).scaled(PiFrac::pi_power(1, 2));
    EXPECT_EQ(two_pi_z3, rs.L[3]);
    for (unsigned k = 2; k <= 5; ++k) EXPECT_TRUE(inv.s[k].coefficient({0, 0, Phase::cos}).is_zero()) << k;
}

TEST(Invariants, RotationInvariantUpToOrderSeven) {
    auto f = FieldSpec::symbolic(2);
    auto inv = invariant_series(run_recursion(f, 7));
    for (auto [c, s] : {std::pair{Rational(3, 5), Rational(4, 5)}, std::pair{Rational(5, 13), Rational(12, 13)}}) {
        auto images = parameter_images(f, rotate_params(f, c, s));
        for (unsigned k = 2; k <= 7; ++k) EXPECT_EQ(inv.z[k].substitute(images), inv.z[k]) << k;
    }
}

TEST(Invariants, FirstFocalValueIsRotationInvariant) {
    auto f = FieldSpec::symbolic(2);
    auto rs = run_recursion(f, 5);
    auto images = parameter_images(f, rotate_params(f, Rational(3, 5), Rational(4, 5)));
    auto L3 = specialize_pi(rs.L[3], Rational(355, 113));
    EXPECT_EQ(L3.substitute(images), L3);
}

TEST(A0Series, ConstantsForQuadratic) {
    auto c = a0_constants(2);
    EXPECT_EQ(c.K1, Rational(1));
    EXPECT_EQ(c.K2, Rational(0));
    EXPECT_DOUBLE_EQ(c.K4, 6.0);
    EXPECT_DOUBLE_EQ(c.K3, 1.0 / 6.0);
    EXPECT_GT(c.K4v, c.K4);
}

TEST(A0Series, QuadraticSeriesSatisfiesTheBounds) {
    auto rs = run_recursion(FieldSpec::symbolic(2), 7);
    auto cert = a0_certify(rs);
    EXPECT_TRUE(cert.valid()) << (cert.violations.empty() ? "" : cert.violations.front());
    EXPECT_EQ(cert.verified_upto, 7u);
}

TEST(DefaultOrder, PerDegree) {
    EXPECT_EQ(default_order(2), 9u);
    EXPECT_EQ(default_order(3), 13u);
}
