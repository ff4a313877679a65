#pragma once

/**
 * @file bernstein.hpp
 * @brief Bernstein classes of power series and the zero-count bounds
 * they give.
 *
 * B1(R, alpha, K): max|f| on the disc of radius R is at most K times max|f|
 * on the disc of radius alpha*R. B2(N, R, c): |a_j| R^j <= c max_{i<=N} |a_i| R^i
 * for every j. Conversions keep rational arithmetic whenever the inputs are
 * rational; logarithms are only used to seed integer searches that are then
 * checked exactly.
 */

#include "bautin.hpp"

#include <cmath>
#include <optional>

namespace cyclebound {

inline Rational rabs(const Rational& x) { return sgn(x) < 0 ? Rational(-x) : x; }

inline Rational rpow(const Rational& x, unsigned n) {
    Rational r = 1;
    for (unsigned i = 0; i < n; ++i) r *= x;
    return r;
}

struct B2Check {
    Rational witness;           ///< max_{i<=N} |a_i| R^i
    std::vector<bool> passes;   ///< per index j
    std::optional<std::size_t> first_failure;
    bool ok() const { return !first_failure; }
};

/// Checks |a_j| R^j <= c * max_{i<=N} |a_i| R^i for every available j.
inline B2Check b2_check(const std::vector<Rational>& a, unsigned N, const Rational& R, const Rational& c) {
    if (a.size() <= N) throw InputError("b2_check needs more than N coefficients");
    if (sgn(R) <= 0 || sgn(c) < 0) throw InputError("b2_check needs R > 0 and c >= 0");
    B2Check out;
    out.witness = 0;
    for (unsigned i = 0; i <= N; ++i) out.witness = std::max(out.witness, Rational(rabs(a[i]) * rpow(R, i)));
    Rational bound = c * out.witness;
    for (std::size_t j = 0; j < a.size(); ++j) {
        bool ok = rabs(a[j]) * rpow(R, static_cast<unsigned>(j)) <= bound || j <= N;
        out.passes.push_back(ok);
        if (!ok && !out.first_failure) out.first_failure = j;
    }
    return out;
}

/// Floating-point variant for numerically evaluated coefficients.
inline B2Check b2_check(const std::vector<double>& a, unsigned N, double R, double c) {
    std::vector<Rational> q;
    for (double x : a) q.emplace_back(x);
    return b2_check(q, N, Rational(R), Rational(c));
}

/**
 * @brief B2(N, R, c) implies B1(R', alpha, K) with
 * K = alpha^-N [1 + alpha(1 - alpha^N)/(1 - alpha) + c beta/(1 - beta)], beta = R'/R.
 */
inline Rational b1_from_b2(unsigned N, const Rational& R, const Rational& c, const Rational& Rprime,
                           const Rational& alpha) {
    if (sgn(alpha) <= 0 || alpha >= 1) throw InputError("alpha must lie in (0, 1)");
    if (sgn(R) <= 0 || sgn(Rprime) <= 0) throw InputError("radii must be positive");
    Rational beta = Rprime / R;
    if (beta >= 1) throw InputError("R' must be smaller than R");
    Rational aN = rpow(alpha, N);
    Rational bracket = 1 + alpha * (1 - aN) / (1 - alpha) + c * beta / (1 - beta);
    return bracket / aN;
}

struct B2Params {
    unsigned N = 0;
    Rational c;
    unsigned formula_N = 0;  ///< integer part of the printed expression, before any correction
};

/**
 * @brief B1(R, alpha, K) implies B2(N, R, c) with
 * N = floor((log2 K - log2(1 - alpha) + 1) / log2(1/alpha)), c = K(2K+1)/(1-alpha)^2.
 * N is raised if needed until K alpha^(N+1)/(1-alpha) <= 1/2 holds exactly.
 */
inline B2Params b2_from_b1(const Rational& R, const Rational& alpha, const Rational& K) {
    if (sgn(alpha) <= 0 || alpha >= 1) throw InputError("alpha must lie in (0, 1)");
    if (K < 1) throw InputError("K must be at least 1");
    if (sgn(R) <= 0) throw InputError("R must be positive");
    double num = std::log2(K.get_d()) - std::log2(Rational(1 - alpha).get_d()) + 1;
    double den = std::log2(Rational(1 / alpha).get_d());
    double raw = num / den;
    B2Params p;
    p.formula_N = static_cast<unsigned>(std::max(0.0, std::floor(raw)));
    p.N = p.formula_N;
    while (K * rpow(alpha, p.N + 1) / (1 - alpha) > Rational(1, 2)) ++p.N;
    p.c = K * (2 * K + 1) / ((1 - alpha) * (1 - alpha));
    return p;
}

struct ZeroBound {
    std::optional<unsigned> bound;  ///< empty when unbounded
    std::string note;
};

/**
 * @brief Zeros of a B1(R, alpha, K) function in the disc of radius alpha*R:
 * at most floor(log2 K / log2((1 + alpha^2) / (2 alpha))).
 * Computed exactly as the largest n with q^n <= K, q = (1 + alpha^2)/(2 alpha).
 */
inline ZeroBound zero_bound_b1(const Rational& K, const Rational& alpha) {
    if (sgn(alpha) <= 0 || alpha > 1) throw InputError("alpha must lie in (0, 1]");
    if (K < 1) throw InputError("K must be at least 1");
    ZeroBound z;
    if (K == 1) {
        z.bound = 0;
        return z;
    }
    Rational q = (1 + alpha * alpha) / (2 * alpha);
    if (q == 1) {
        z.note = "unbounded at alpha = 1";
        return z;
    }
    unsigned n = 0;
    Rational p = q;
    while (p <= K) {
        ++n;
        p *= q;
    }
    z.bound = n;
    return z;
}

struct ZeroRadius {
    Rational R2;     ///< R'' = R / (2^(3N) max(c, 2))
    unsigned N = 2;  ///< zero-count bound (N >= 2)
};

inline ZeroRadius zero_radius_b2(unsigned N, const Rational& R, const Rational& c) {
    if (sgn(R) <= 0 || sgn(c) < 0) throw InputError("zero_radius_b2 needs R > 0 and c >= 0");
    ZeroRadius z;
    z.N = std::max(N, 2u);
    Rational m = c > 2 ? c : Rational(2);
    z.R2 = R / (rpow(Rational(2), 3 * z.N) * m);
    return z;
}

/// Division and cofactor constants of the Gröbner basis of the Bautin ideal.
struct DivisionConstants {
    double C = 1.0;   ///< max 1/|initial coefficient|
    double C1 = 1.0;  ///< empirical geometric growth of the quotients
    double M = 1.0;   ///< max_j sum_l norm(Phi_jl)
};

struct DisplacementCert {
    unsigned d = 2;  ///< Bautin index used
    double R = 0, c = 0, R2 = 0;
    unsigned zero_bound = 1;
    double lambda_bar = 1;
    double K1 = 0, K2 = 0, K3 = 0, K4 = 0;
    DivisionConstants division;
};

/**
 * @brief R = [(C1 lambda_bar)^K1 K4]^-1, c = M C K3 (C1 lambda_bar)^K2 / R^d
 * (or / R when R > 1), R'' = R / [2^(3(d-1)) max(c, 2)], at most d-1 zeros.
 * lambda_bar = max(1, max_i |lambda_i|).
 */
inline DisplacementCert displacement_certificate(double K1, double K2, double K3, double K4,
                                                 const DivisionConstants& dc, std::span<const double> lambda,
                                                 unsigned d) {
    if (d < 2) throw InputError("displacement certificate needs a Bautin index of at least 2");
    DisplacementCert cert;
    cert.d = d;
    cert.K1 = K1;
    cert.K2 = K2;
    cert.K3 = K3;
    cert.K4 = K4;
    cert.division = dc;
    double lam = 1.0;
    for (double x : lambda) lam = std::max(lam, std::abs(x));
    cert.lambda_bar = lam;
    double base = dc.C1 * lam;
    cert.R = 1.0 / (std::pow(base, K1) * K4);
    double head = dc.M * dc.C * K3 * std::pow(base, K2);
    cert.c = cert.R <= 1.0 ? head / std::pow(cert.R, static_cast<double>(d)) : head / cert.R;
    cert.R2 = cert.R / (std::pow(2.0, 3.0 * (d - 1)) * std::max(cert.c, 2.0));
    cert.zero_bound = d - 1;
    return cert;
}

inline DisplacementCert displacement_certificate(const A0Cert& a0, const DivisionConstants& dc,
                                                 std::span<const double> lambda, unsigned d) {
    return displacement_certificate(a0.K1.get_d(), a0.K2.get_d(), a0.K3v, a0.K4v, dc, lambda, d);
}

} // namespace cyclebound
