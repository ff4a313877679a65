#pragma once

// Random polynomials with certificates built from their own coefficients,
// checked against companion-matrix root counts.

#include "cyclebound/bernstein.hpp"

#include "oracles.hpp"

#include <random>
#include <string>

namespace testgen {

struct BernsteinCase {
    bool ok = true;
    std::string why;
};

inline double max_modulus(const std::vector<double>& a, double r, int samples = 2048) {
    double m = 0;
    for (int j = 0; j < samples; ++j) {
        std::complex<double> z = std::polar(r, 2 * std::numbers::pi * j / samples), s = 0;
        for (std::size_t i = a.size(); i-- > 0;) s = s * z + a[i];
        m = std::max(m, std::abs(s));
    }
    return m;
}

/// One random instance: a B2 certificate from the coefficients and a B1
/// certificate from an upper bound on the outer maximum over a sampled inner maximum.
inline BernsteinCase bernstein_case(std::mt19937_64& rng) {
    using cyclebound::Rational;
    std::uniform_int_distribution<int> deg(2, 10), num(-20, 20), den(1, 8), Npick(0, 4), Rpick(1, 8);
    const int n = deg(rng);
    std::vector<Rational> a;
    for (int i = 0; i <= n; ++i) a.push_back(cyclebound::ratio(num(rng), den(rng)));
    if (sgn(a[n]) == 0) a[n] = 1;
    std::vector<double> ad;
    for (const auto& q : a) ad.push_back(q.get_d());
    BernsteinCase out;
    auto fail = [&](std::string w) {
        out.ok = false;
        out.why = std::move(w);
    };

    // B2(N, R, c) with the smallest valid c.
    const unsigned N = std::min<unsigned>(Npick(rng), n - 1);
    const Rational R(Rpick(rng), 4);
    Rational head = 0, top = 0;
    for (int i = 0; i <= n; ++i) {
        Rational v = cyclebound::rabs(a[i]) * cyclebound::rpow(R, i);
        if (i <= static_cast<int>(N)) head = std::max(head, v);
        top = std::max(top, v);
    }
    if (sgn(head) == 0) return out;  // the certificate needs a nonzero head
    Rational c = top / head;
    if (!cyclebound::b2_check(a, N, R, c).ok()) fail("constructed B2 certificate does not check");
    auto zr = cyclebound::zero_radius_b2(N, R, c);
    std::size_t inside = oracle::roots_in_disc(ad, zr.R2.get_d());
    if (inside > zr.N) fail("B2 bound: " + std::to_string(inside) + " zeros > " + std::to_string(zr.N));

    // B2 -> B1 conversion must give a valid B1 constant on R' = R/2.
    const Rational alpha(1, 2), Rp = R / 2;
    Rational Kconv = cyclebound::b1_from_b2(N, R, c, Rp, alpha);
    double outer = max_modulus(ad, Rp.get_d()), inner = max_modulus(ad, Rational(alpha * Rp).get_d());
    if (outer > Kconv.get_d() * inner * (1 + 1e-9)) fail("B2 -> B1 constant too small");

    // B1(R, alpha, K) with K an upper bound for the true ratio.
    double sumabs = 0;
    for (int i = 0; i <= n; ++i) sumabs += std::abs(ad[i]) * std::pow(R.get_d(), i);
    double inner_max = max_modulus(ad, Rational(alpha * R).get_d());
    if (inner_max <= 0) return out;
    Rational K(std::max(1.0, sumabs / inner_max * (1 + 1e-12)));
    auto zb = cyclebound::zero_bound_b1(K, alpha);
    if (!zb.bound) fail("zero bound unexpectedly unbounded");
    std::size_t in_disc = oracle::roots_in_disc(ad, Rational(alpha * R).get_d());
    if (zb.bound && in_disc > *zb.bound)
        fail("B1 bound: " + std::to_string(in_disc) + " zeros > " + std::to_string(*zb.bound));

    // B1 -> B2 conversion: the resulting coefficients certificate must hold.
    auto p = cyclebound::b2_from_b1(R, alpha, K);
    if (p.N < static_cast<unsigned>(n) && !cyclebound::b2_check(a, p.N, R, p.c).ok())
        fail("B1 -> B2 certificate fails on the coefficients");
    return out;
}

} // namespace testgen
