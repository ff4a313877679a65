#pragma once

/**
 * @file pipeline.hpp
 * @brief End-to-end displacement certificate: symbolic L_k for a family of
 * degree-d perturbations, Bautin index and standard basis of the generators,
 * division constants, and the certificate at a concrete parameter point,
 * confirmed by counting numerical displacement zeros.
 */

#include "bernstein.hpp"
#include "idealkit.hpp"
#include "numlab.hpp"

#include <random>

namespace cyclebound {

struct IdealData {
    unsigned d = 2;
    unsigned K = 9;
    bool use_invariants = false;
    bool numerify = false;
    RingPtr ring;
    std::vector<PiPoly> coeffs;  ///< coeffs[i] is the generator candidate of order d + i
    IndexResult index;
    GrobnerBasis<PiFrac> basis;  ///< basis of the ideal of the new generators, with cofactors
    DivisionConstants constants;
    double seconds_recursion = 0, seconds_ideal = 0;
};

/// Order-k coefficients L_d..L_K (or 2 pi z_k with invariants), optionally with pi numerified.
inline std::vector<PiPoly> generator_candidates(const ReturnSeries& rs, bool use_invariants, bool numerify,
                                                const Rational& pi_value = default_pi_stand_in()) {
    std::vector<PiPoly> out;
    std::optional<InvariantSeries> inv;
    if (use_invariants) inv = invariant_series(rs);
    for (unsigned k = rs.d; k <= rs.K; ++k) {
        PiPoly p = use_invariants ? to_pi_poly(inv->z[k]) : rs.L[k];
        if (numerify) p = to_pi_poly(specialize_pi(p, pi_value));
        out.push_back(std::move(p));
    }
    return out;
}

/// Deterministic random polynomials for the empirical C1 fit.
inline std::vector<PiPoly> c1_probe_polys(const RingPtr& ring, unsigned max_deg, std::size_t count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5), deg(0, static_cast<int>(max_deg));
    std::uniform_int_distribution<std::size_t> var(0, ring->size() - 1);
    std::vector<PiPoly> out;
    for (std::size_t n = 0; n < count; ++n) {
        PolyAccumulator<PiFrac> acc;
        for (int t = 0; t < 6; ++t) {
            std::vector<unsigned> ex(ring->size(), 0);
            int dg = deg(rng);
            for (int e = 0; e < dg; ++e) ++ex[var(rng)];
            acc.add_term(Monomial::from_exponents(ex), PiFrac(ratio(num(rng), den(rng))));
        }
        out.push_back(acc.take(ring));
    }
    return out;
}

/// Ideal data of the family `family` (its symbolic entries are the parameters).
inline IdealData build_ideal_data(const FieldSpec& family, unsigned K, bool use_invariants, bool numerify) {
    IdealData D;
    const unsigned d = family.d;
    D.d = d;
    D.K = K;
    D.use_invariants = use_invariants;
    D.numerify = numerify;
    D.ring = family.ring;
    auto t0 = std::chrono::steady_clock::now();
    ReturnSeries rs = run_recursion(family, K);
    auto t1 = std::chrono::steady_clock::now();
    D.coeffs = generator_candidates(rs, use_invariants, numerify);
    D.index = bautin_index(D.coeffs, d);
    std::vector<PiPoly> gens;
    for (unsigned k : D.index.new_generators) gens.push_back(D.coeffs[k - d]);
    BuchbergerOptions opt;
    opt.degree_bound = max_degree(D.coeffs);
    D.basis = gens.empty() ? GrobnerBasis<PiFrac>{D.ring, {}, {}, {}, opt.degree_bound} : buchberger(gens, opt);

    std::vector<std::pair<PiPoly, DivisionResult<PiFrac>>> runs;
    if (!D.basis.gens.empty()) {
        for (const auto& c : D.coeffs) runs.emplace_back(c, hironaka_divide(c, D.basis.gens));
        if (D.ring->size() > 0)
            for (const auto& f : c1_probe_polys(D.ring, 6, 50, 20261016))
                runs.emplace_back(f, hironaka_divide(f, D.basis.gens));
        D.constants.C = NormTraits<PiFrac>::to_double(division_C(D.basis.gens));
        D.constants.C1 = fit_C1(runs);
        D.constants.M = std::max(1.0, D.basis.cofactor_norm());
    }
    D.seconds_recursion = std::chrono::duration<double>(t1 - t0).count();
    D.seconds_ideal = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    return D;
}

struct CertifyOutcome {
    DisplacementCert cert;
    ZeroCount zeros;
    unsigned bautin_index = 0;
    std::vector<double> lambda;
    std::vector<std::string> violations;
};

/// Certificate at a parameter point of the family plus the numerical zero count on (0, R''].
inline CertifyOutcome certify_point(const IdealData& D, const FieldSpec& family, std::span<const Rational> point,
                                    const IntegratorConfig& cfg = {}) {
    if (family.d != D.d) throw InputError("field degree does not match the ideal data");
    FieldSpec concrete = family.at(point);
    CertifyOutcome out;
    for (const auto& v : point) out.lambda.push_back(v.get_d());
    out.bautin_index = D.index.identically_center ? D.d : D.index.k0;
    A0Cert a0 = a0_constants(D.d);
    out.cert = displacement_certificate(a0, D.constants, out.lambda, std::max(2u, out.bautin_index));
    if (!(out.cert.R2 > 0)) out.violations.push_back("R'' is not positive");
    NumericField F = NumericField::from_spec(concrete);
    out.zeros = count_displacement_zeros(F, out.cert.R2, cfg);
    if (out.zeros.count > out.cert.zero_bound)
        out.violations.push_back("numerical zero count " + std::to_string(out.zeros.count) + " exceeds the bound " +
                                 std::to_string(out.cert.zero_bound));
    return out;
}

} // namespace cyclebound
