#pragma once

/**
 * @file bautin.hpp
 * @brief Return-map coefficients of x' = -y + P, y' = x + Q with P, Q
 * homogeneous of degree d, by Bautin's recursion in polar coordinates.
 *
 * In polar form dr/dtheta = r^d A / (1 + r^(d-1) B) = sum_k R_k(theta) r^k.
 * Writing r = r0 + sum_k v_k(theta) r0^k, each v_k is the antiderivative of
 * sum_i B_ik[v] R_i where B_ik is the coefficient of r0^k in r^i. The
 * Lyapunov coefficients are L_k = v_k(2 pi).
 */

#include "trigsym.hpp"

#include <chrono>
#include <cmath>
#include <optional>

namespace cyclebound {

/**
 * @brief Homogeneous degree-d perturbation. a[i] is the coefficient of
 * x^i y^(d-i) in P, b[i] the same for Q. Entries are parameter polynomials:
 * variables for symbolic entries, constants for concrete ones.
 */
struct FieldSpec {
    unsigned d = 2;
    RingPtr ring;
    std::vector<ParamPoly> a;
    std::vector<ParamPoly> b;

    /// Name of the parameter for x^i y^j in P (kind 'a') or Q (kind 'b').
    static std::string param_name(char kind, unsigned i, unsigned j) {
        return std::string(1, kind) + std::to_string(i) + std::to_string(j);
    }

    /// Every coefficient symbolic: ring a_{d,0}, ..., a_{0,d}, b_{d,0}, ..., b_{0,d}.
    static FieldSpec symbolic(unsigned d) {
        std::vector<std::optional<Rational>> none(d + 1);
        return mixed(d, none, none);
    }

    static FieldSpec concrete(unsigned d, const std::vector<Rational>& a, const std::vector<Rational>& b) {
        std::vector<std::optional<Rational>> oa(a.begin(), a.end()), ob(b.begin(), b.end());
        return mixed(d, oa, ob);
    }

    /// Entries given by value are constants, nullopt entries become ring variables.
    /// Index i of each vector is the x-exponent.
    static FieldSpec mixed(unsigned d, const std::vector<std::optional<Rational>>& a,
                           const std::vector<std::optional<Rational>>& b) {
        if (d < 2) throw InputError("perturbation degree must be at least 2");
        if (d > 6) throw InputError("perturbation degree above 6 is not supported");
        if (a.size() != d + 1 || b.size() != d + 1) throw InputError("expected d+1 coefficients for P and Q");
        std::vector<std::string> names;
        for (unsigned i = d + 1; i-- > 0;)
            if (!a[i]) names.push_back(param_name('a', i, d - i));
        for (unsigned i = d + 1; i-- > 0;)
            if (!b[i]) names.push_back(param_name('b', i, d - i));
        FieldSpec f;
        f.d = d;
        f.ring = make_ring(names);
        f.a.assign(d + 1, ParamPoly(f.ring));
        f.b.assign(d + 1, ParamPoly(f.ring));
        for (unsigned i = 0; i <= d; ++i) {
            f.a[i] = a[i] ? ParamPoly::constant(f.ring, *a[i])
                          : ParamPoly::variable(f.ring, param_name('a', i, d - i));
            f.b[i] = b[i] ? ParamPoly::constant(f.ring, *b[i])
                          : ParamPoly::variable(f.ring, param_name('b', i, d - i));
        }
        return f;
    }

    bool is_concrete() const { return ring->size() == 0; }

    /// Parameter values in the order a_{d,0}..a_{0,d}, b_{d,0}..b_{0,d} (concrete specs only).
    std::vector<Rational> values() const {
        std::vector<Rational> out;
        for (const auto* v : {&a, &b})
            for (unsigned i = d + 1; i-- > 0;) {
                const auto& p = (*v)[i];
                if (p.is_zero()) out.push_back(0);
                else if (p.size() == 1 && p.terms()[0].mono.is_one()) out.push_back(p.terms()[0].coeff);
                else throw InputError("field has symbolic parameters");
            }
        return out;
    }

    /// Fixes every ring variable to a value (ring order), giving a concrete spec.
    FieldSpec at(std::span<const Rational> point) const {
        if (point.size() != ring->size()) throw InputError("parameter point has wrong dimension");
        FieldSpec f;
        f.d = d;
        f.ring = make_ring({});
        for (const auto* v : {&a, &b}) {
            std::vector<ParamPoly> out;
            for (const auto& p : *v) out.push_back(ParamPoly::constant(f.ring, p.evaluate(point)));
            (v == &a ? f.a : f.b) = std::move(out);
        }
        return f;
    }
};

/// cos^i * sin^j as a trigonometric polynomial with coefficient 1.
inline TrigPoly cos_sin_power(const RingPtr& ring, unsigned i, unsigned j) {
    TrigPoly c = TrigPoly::term(ring, {0, 1, Phase::cos}, Rational(1));
    TrigPoly s = TrigPoly::term(ring, {0, 1, Phase::sin}, Rational(1));
    TrigPoly r = TrigPoly::constant(ring, ParamPoly::constant(ring, Rational(1)));
    for (unsigned k = 0; k < i; ++k) r = r * c;
    for (unsigned k = 0; k < j; ++k) r = r * s;
    return r;
}

/// A = (xP + yQ)(cos, sin), B = (xQ - yP)(cos, sin).
inline std::pair<TrigPoly, TrigPoly> build_AB(const FieldSpec& f) {
    TrigPoly A(f.ring), B(f.ring);
    for (unsigned i = 0; i <= f.d; ++i) {
        unsigned j = f.d - i;
        TrigPoly xm = cos_sin_power(f.ring, i + 1, j);  // x * x^i y^j
        TrigPoly ym = cos_sin_power(f.ring, i, j + 1);  // y * x^i y^j
        A += xm.times(f.a[i]);
        A += ym.times(f.b[i]);
        B += xm.times(f.b[i]);
        B -= ym.times(f.a[i]);
    }
    return {A, B};
}

/// R_k for k = 0..K (zero unless k = d + j(d-1), where R_k = (-1)^j A B^j).
inline std::vector<TrigPoly> series_R(const FieldSpec& f, unsigned K) {
    if (K < f.d) throw InputError("truncation order must be at least d");
    auto [A, B] = build_AB(f);
    std::vector<TrigPoly> R(K + 1, TrigPoly(f.ring));
    TrigPoly term = A;
    for (unsigned j = 0, k = f.d; k <= K; ++j, k += f.d - 1) {
        R[k] = (j % 2 == 0) ? term : -term;
        if (k + f.d - 1 <= K) term = term * B;
    }
    return R;
}

/**
 * @brief Table of the coefficients B_ik = [r0^k] (sum_p w_p r0^p)^i with
 * w_1 = 1, filled one column k at a time as the w_p become available.
 */
class CompositionTable {
public:
    CompositionTable(RingPtr ring, unsigned K) : ring_(std::move(ring)), K_(K) {
        w_.assign(K + 1, TrigPoly(ring_));
        table_.assign(K + 1, std::vector<TrigPoly>(K + 1, TrigPoly(ring_)));
        w_[1] = TrigPoly::constant(ring_, ParamPoly::constant(ring_, Rational(1)));
        table_[1][1] = w_[1];
        filled_ = 1;
    }

    /// Fills column k for i = 2..k; needs w_1..w_{k-1}.
    void fill_column(unsigned k) {
        if (k != filled_ + 1 || k > K_) throw InternalError("composition table filled out of order");
        for (unsigned i = 2; i <= k; ++i) {
            TrigPoly acc = table_[i - 1][k - 1];  // p = 1 term, w_1 = 1
            for (unsigned p = 2; p + i - 1 <= k; ++p) {
                if (w_[p].is_zero() || table_[i - 1][k - p].is_zero()) continue;
                acc += w_[p] * table_[i - 1][k - p];
            }
            table_[i][k] = std::move(acc);
        }
    }

    /// Supplies w_k once column k is filled.
    void set_w(unsigned k, TrigPoly w) {
        if (k != filled_ + 1) throw InternalError("composition table: coefficient set out of order");
        w_[k] = std::move(w);
        table_[1][k] = w_[k];
        filled_ = k;
    }

    const TrigPoly& coeff(unsigned i, unsigned k) const { return table_.at(i).at(k); }

private:
    RingPtr ring_;
    unsigned K_;
    unsigned filled_;
    std::vector<TrigPoly> w_;
    std::vector<std::vector<TrigPoly>> table_;
};

/// B_ik for a given list of series coefficients v (v[p] for p >= 2; v[0], v[1] ignored).
inline TrigPoly composition_coeff(unsigned i, unsigned k, const std::vector<TrigPoly>& v, const RingPtr& ring) {
    if (i < 1 || k < i) throw InputError("composition coefficient needs 1 <= i <= k");
    CompositionTable t(ring, k);
    for (unsigned n = 2; n <= k; ++n) {
        t.fill_column(n);
        t.set_w(n, n < v.size() ? v[n] : TrigPoly(ring));
    }
    return t.coeff(i, k);
}

struct ReturnSeries {
    unsigned d = 2;
    unsigned K = 2;
    RingPtr ring;
    std::vector<TrigPoly> R;  ///< indexed by k
    std::vector<TrigPoly> v;  ///< v[k], k = 0..K; v[1] = 1, v[0] unused
    std::vector<PiPoly> L;    ///< L[k] = v_k(2 pi)
    double seconds = 0.0;
};

/// Thrown when a resource limit stops the recursion; carries the orders already computed.
class RecursionAborted : public ComputationError {
public:
    RecursionAborted(const std::string& what, ReturnSeries partial)
        : ComputationError(what), partial_(std::make_shared<ReturnSeries>(std::move(partial))) {}
    const ReturnSeries& partial() const { return *partial_; }

private:
    std::shared_ptr<ReturnSeries> partial_;
};

struct RecursionLimits {
    std::size_t max_terms = 20'000'000;  ///< total parameter-monomial count across one v_k
    double max_seconds = 3600.0;
};

inline std::size_t term_count(const TrigPoly& t) {
    std::size_t n = 0;
    for (const auto& [k, c] : t.terms()) n += c.size();
    return n;
}

inline ReturnSeries run_recursion(const FieldSpec& f, unsigned K, const RecursionLimits& limits = {}) {
    auto start = std::chrono::steady_clock::now();
    ReturnSeries rs;
    rs.d = f.d;
    rs.K = K;
    rs.ring = f.ring;
    rs.R = series_R(f, K);
    rs.v.assign(K + 1, TrigPoly(f.ring));
    rs.L.assign(K + 1, PiPoly(f.ring));
    rs.v[1] = TrigPoly::constant(f.ring, ParamPoly::constant(f.ring, Rational(1)));
    CompositionTable table(f.ring, K);
    for (unsigned k = 2; k <= K; ++k) {
        table.fill_column(k);
        TrigPoly rhs(f.ring);
        for (unsigned i = f.d; i <= k; ++i) {
            if (rs.R[i].is_zero()) continue;
            const TrigPoly& bik = table.coeff(i, k);
            if (bik.is_zero()) continue;
            rhs += bik * rs.R[i];
        }
        rs.v[k] = rhs.antiderivative();
        rs.L[k] = rs.v[k].eval_2pi();
        table.set_w(k, rs.v[k]);
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (term_count(rs.v[k]) > limits.max_terms || elapsed > limits.max_seconds) {
            rs.K = k;
            rs.v.resize(k + 1);
            rs.L.resize(k + 1);
            rs.R.resize(k + 1);
            rs.seconds = elapsed;
            throw RecursionAborted("return-map recursion stopped at order " + std::to_string(k) +
                                       " by resource limit",
                                   std::move(rs));
        }
    }
    rs.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rs;
}

/// Default truncation order for a perturbation degree.
inline unsigned default_order(unsigned d) {
    if (d == 2) return 9;
    if (d == 3) return 13;
    return 3 * d + 1;
}

/**
 * @brief S^1-invariant generators from the recursion that keeps only the
 * periodic parts: T_k = sum_i B_ik[s] R_i, z_k = mean of T_k,
 * s_k = the zero-mean antiderivative of T_k - z_k.
 *
 * Zero mean (rather than s_k(0) = 0) is the normalization that commutes
 * with shifting theta, which is what makes each z_k rotation invariant.
 */
struct InvariantSeries {
    unsigned d = 2;
    unsigned K = 2;
    RingPtr ring;
    std::vector<ParamPoly> z;  ///< z[k]
    std::vector<TrigPoly> s;   ///< s[k]
};

inline InvariantSeries invariant_series(const ReturnSeries& rs) {
    InvariantSeries out;
    out.d = rs.d;
    out.K = rs.K;
    out.ring = rs.ring;
    out.z.assign(rs.K + 1, ParamPoly(rs.ring));
    out.s.assign(rs.K + 1, TrigPoly(rs.ring));
    out.s[1] = rs.v[1];
    CompositionTable table(rs.ring, rs.K);
    for (unsigned k = 2; k <= rs.K; ++k) {
        table.fill_column(k);
        TrigPoly T(rs.ring);
        for (unsigned i = rs.d; i <= k; ++i) {
            if (rs.R[i].is_zero()) continue;
            const TrigPoly& bik = table.coeff(i, k);
            if (!bik.is_zero()) T += bik * rs.R[i];
        }
        ParamPoly mean = T.coefficient({0, 0, Phase::cos});
        out.z[k] = mean;
        T.add_term({0, 0, Phase::cos}, -mean);
        TrigPoly sk = T.antiderivative();
        sk.add_term({0, 0, Phase::cos}, -sk.coefficient({0, 0, Phase::cos}));
        out.s[k] = sk;
        table.set_w(k, sk);
    }
    return out;
}

/**
 * @brief Field in rotated coordinates x = c x' - s y', y = s x' + c y'.
 * The new parameters are linear forms in the old ones.
 */
inline FieldSpec rotate_params(const FieldSpec& f, const Rational& c, const Rational& s) {
    if (c * c + s * s != 1) throw InputError("rotation needs c^2 + s^2 = 1 exactly");
    const unsigned d = f.d;
    // xs[i][e] = coefficient of x'^e y'^(i-e) in (c x' - s y')^i; likewise ys for (s x' + c y').
    auto binomial_powers = [d](const Rational& u, const Rational& w) {
        std::vector<std::vector<Rational>> out(d + 1);
        out[0] = {Rational(1)};
        for (unsigned i = 1; i <= d; ++i) {
            out[i].assign(i + 1, Rational(0));
            for (unsigned e = 0; e < i; ++e) {
                out[i][e + 1] += out[i - 1][e] * u;  // times u x'
                out[i][e] += out[i - 1][e] * w;      // times w y'
            }
        }
        return out;
    };
    auto xs = binomial_powers(c, -s);
    auto ys = binomial_powers(s, c);
    // P(Rx')[e] and Q(Rx')[e], e = exponent of x'.
    std::vector<ParamPoly> Pr(d + 1, ParamPoly(f.ring)), Qr(d + 1, ParamPoly(f.ring));
    for (unsigned i = 0; i <= d; ++i) {
        unsigned j = d - i;
        for (unsigned e1 = 0; e1 <= i; ++e1)
            for (unsigned e2 = 0; e2 <= j; ++e2) {
                Rational w = xs[i][e1] * ys[j][e2];
                if (sgn(w) == 0) continue;
                Pr[e1 + e2] += f.a[i].scaled(w);
                Qr[e1 + e2] += f.b[i].scaled(w);
            }
    }
    FieldSpec g;
    g.d = d;
    g.ring = f.ring;
    g.a.assign(d + 1, ParamPoly(f.ring));
    g.b.assign(d + 1, ParamPoly(f.ring));
    for (unsigned e = 0; e <= d; ++e) {
        g.a[e] = Pr[e].scaled(c) + Qr[e].scaled(s);
        g.b[e] = Qr[e].scaled(c) - Pr[e].scaled(s);
    }
    return g;
}

/// Images of the ring variables under a parameter map, for use with Poly::substitute.
/// The input spec must be symbolic in every coefficient.
inline std::vector<ParamPoly> parameter_images(const FieldSpec& original, const FieldSpec& mapped) {
    std::vector<ParamPoly> images(original.ring->size(), ParamPoly(mapped.ring));
    for (unsigned i = 0; i <= original.d; ++i) {
        for (int kind = 0; kind < 2; ++kind) {
            const ParamPoly& p = kind == 0 ? original.a[i] : original.b[i];
            if (p.size() != 1 || p.terms()[0].mono.degree() != 1 || p.terms()[0].coeff != 1) continue;
            auto idx = original.ring->index_of(
                FieldSpec::param_name(kind == 0 ? 'a' : 'b', i, original.d - i));
            if (idx) images[*idx] = kind == 0 ? mapped.a[i] : mapped.b[i];
        }
    }
    return images;
}

/// Numeric bound on sup_theta of the parameter norm of T over [0, 2 pi].
inline double sup_param_norm(const TrigPoly& t) {
    // Group cos/sin pairs with the same (m, l) per parameter monomial.
    std::map<std::tuple<Monomial, unsigned, unsigned>, std::pair<double, double>> pairs;
    for (const auto& [k, c] : t.terms())
        for (const auto& term : c.terms()) {
            auto& e = pairs[{term.mono, k.m, k.l}];
            (k.phase == Phase::cos ? e.first : e.second) = std::abs(term.coeff.get_d());
        }
    double total = 0.0;
    for (const auto& [key, cs] : pairs)
        total += std::pow(2 * std::numbers::pi, std::get<1>(key)) * std::hypot(cs.first, cs.second);
    return total * (1 + 1e-12);
}

/**
 * @brief A_0-series constants and the checks made against them.
 *
 * K3 K4^k majorizes |R_k|, with K4 = [2(d+1)]^(1/(d-1)), K3 = 1/K4 and
 * K1 = 1/(d-1), K2 = 0. The constants for v_k come from the majorant equation
 * C y^2 - (1 + K4 x) y + x = 0 with C = K4 + 2 pi K3 K4^2: its branch point
 * x* is the smaller root of the discriminant, K4' = 1/x*, and
 * K3' = y(x*) = (1 + K4 x*) / (2C) bounds psi_k x*^k.
 */
struct A0Cert {
    unsigned d = 2;
    Rational K1;
    Rational K2;
    double K3 = 0, K4 = 0;
    double K3v = 0, K4v = 0;  ///< constants for the v_k series
    unsigned verified_upto = 0;
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

inline A0Cert a0_constants(unsigned d) {
    A0Cert c;
    c.d = d;
    c.K1 = Rational(1, d - 1);
    c.K2 = 0;
    c.K4 = std::pow(2.0 * (d + 1), 1.0 / (d - 1));
    c.K3 = 1.0 / c.K4;
    double C = c.K4 + 2 * std::numbers::pi * c.K3 * c.K4 * c.K4;
    double p = 2 * C - c.K4;
    double xstar = (p - std::sqrt(p * p - c.K4 * c.K4)) / (c.K4 * c.K4);
    c.K4v = 1.0 / xstar;
    c.K3v = (1 + c.K4 * xstar) / (2 * C);
    return c;
}

inline A0Cert a0_certify(const ReturnSeries& rs) {
    A0Cert c = a0_constants(rs.d);
    const unsigned d = rs.d;
    const Rational base = 2 * (d + 1);
    for (unsigned k = d; k <= rs.K; ++k) {
        const TrigPoly& R = rs.R[k];
        if (!R.is_zero()) {
            if ((k - 1) % (d - 1) != 0) {
                c.violations.push_back("R_" + std::to_string(k) + " is nonzero off the lattice k = d + j(d-1)");
            } else {
                unsigned e = (k - 1) / (d - 1);
                if (R.param_degree() > Degree(static_cast<int>(e)))
                    c.violations.push_back("deg R_" + std::to_string(k) + " exceeds " + std::to_string(e));
                Rational bound = 1;
                for (unsigned i = 0; i < e; ++i) bound *= base;
                if (R.param_norm() > bound)
                    c.violations.push_back("norm R_" + std::to_string(k) + " exceeds " + bound.get_str());
            }
        }
        const TrigPoly& v = rs.v[k];
        if (!v.is_zero()) {
            if (Rational(v.param_degree().value()) * (d - 1) > k)
                c.violations.push_back("deg v_" + std::to_string(k) + " exceeds k/(d-1)");
            double bound = c.K3v * std::pow(c.K4v, k);
            if (sup_param_norm(v) > bound)
                c.violations.push_back("norm v_" + std::to_string(k) + " exceeds the majorant bound");
        }
    }
    c.verified_upto = rs.K;
    return c;
}

} // namespace cyclebound
