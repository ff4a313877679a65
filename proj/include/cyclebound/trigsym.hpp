#pragma once

/**
 * @file trigsym.hpp
 * @brief Sums c(lambda) * theta^m * cos(l theta) / sin(l theta) with exact
 * parameter-polynomial coefficients.
 *
 * Products go through the product-to-sum identities, antiderivatives are
 * closed form, and evaluation at theta = 2*pi produces a polynomial with
 * coefficients in Q(pi).
 */

#include "pifield.hpp"

#include <cmath>
#include <map>

namespace cyclebound {

enum class Phase : std::uint8_t { cos = 0, sin = 1 };

/// (theta power, harmonic, phase). (l = 0, sin) never occurs.
struct TrigKey {
    unsigned m = 0;
    unsigned l = 0;
    Phase phase = Phase::cos;
    friend auto operator<=>(const TrigKey&, const TrigKey&) = default;
};

inline std::string to_string(const TrigKey& k) {
    std::string s;
    if (k.m > 0) s += k.m == 1 ? "theta" : "theta^" + std::to_string(k.m);
    if (k.l > 0) {
        if (!s.empty()) s += "*";
        s += k.phase == Phase::cos ? "cos(" : "sin(";
        s += (k.l == 1 ? std::string("") : std::to_string(k.l) + "*") + "theta)";
    }
    return s.empty() ? "1" : s;
}

class TrigPoly {
public:
    using Map = std::map<TrigKey, ParamPoly>;

    TrigPoly() = default;
    explicit TrigPoly(RingPtr ring) : ring_(std::move(ring)) {}

    static TrigPoly constant(RingPtr ring, const ParamPoly& c) { return term(std::move(ring), {0, 0, Phase::cos}, c); }

    static TrigPoly term(RingPtr ring, TrigKey key, const ParamPoly& c) {
        if (key.l == 0 && key.phase == Phase::sin) throw InputError("sin(0*theta) is not a canonical term");
        TrigPoly t(std::move(ring));
        if (!c.is_zero()) t.terms_.emplace(key, c);
        return t;
    }

    static TrigPoly term(RingPtr ring, TrigKey key, const Rational& c) {
        ParamPoly p = ParamPoly::constant(ring, c);
        return term(std::move(ring), key, p);
    }

    const RingPtr& ring() const { return ring_; }
    const Map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    ParamPoly coefficient(const TrigKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? ParamPoly(ring_) : it->second;
    }

    /// Adds c * key, dropping the entry if it cancels.
    void add_term(const TrigKey& k, const ParamPoly& c) {
        if (k.l == 0 && k.phase == Phase::sin) return;
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    TrigPoly& operator+=(const TrigPoly& o) {
        adopt_ring(o);
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    TrigPoly& operator-=(const TrigPoly& o) {
        adopt_ring(o);
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
    TrigPoly operator-() const {
        TrigPoly r = *this;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }

    TrigPoly scaled(const Rational& s) const {
        TrigPoly r(ring_);
        if (sgn(s) == 0) return r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, c.scaled(s));
        return r;
    }

    TrigPoly times(const ParamPoly& p) const {
        TrigPoly r(ring_);
        for (const auto& [k, c] : terms_) r.add_term(k, c * p);
        return r;
    }

    /// Exact product, re-expressed in canonical harmonics.
    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
        RingPtr ring = a.ring_ ? a.ring_ : b.ring_;
        if (a.ring_ && b.ring_ && !same_ring(a.ring_, b.ring_))
            throw InputError("trig polynomials over different parameter sets");
        TrigPoly r(ring);
        if (a.is_zero() || b.is_zero()) return r;
        // Every product-to-sum identity carries a factor 1/2; apply it once at the end.
        std::map<TrigKey, PolyAccumulator<Rational>> acc;
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) {
                ParamPoly prod = ca * cb;
                unsigned m = ka.m + kb.m;
                unsigned sum = ka.l + kb.l;
                unsigned diff = ka.l >= kb.l ? ka.l - kb.l : kb.l - ka.l;
                bool acos = ka.phase == Phase::cos, bcos = kb.phase == Phase::cos;
                if (acos && bcos) {
                    acc[{m, diff, Phase::cos}].add(prod);
                    acc[{m, sum, Phase::cos}].add(prod);
                } else if (!acos && !bcos) {
                    acc[{m, diff, Phase::cos}].add(prod);
                    acc[{m, sum, Phase::cos}].add_scaled(prod, Rational(-1));
                } else {
                    // sin x cos y = [sin(x+y) + sin(x-y)]/2 with x the sine argument.
                    unsigned ls = acos ? kb.l : ka.l;
                    unsigned lc = acos ? ka.l : kb.l;
                    acc[{m, sum, Phase::sin}].add(prod);
                    if (diff != 0) {
                        bool positive = ls > lc;
                        if (positive) acc[{m, diff, Phase::sin}].add(prod);
                        else acc[{m, diff, Phase::sin}].add_scaled(prod, Rational(-1));
                    }
                }
            }
        }
        Rational half(1, 2);
        for (auto& [k, ac] : acc) {
            ParamPoly p = ac.take(ring);
            if (!p.is_zero()) r.terms_.emplace(k, p.scaled(half));
        }
        return r;
    }

    TrigPoly& operator*=(const TrigPoly& o) { return *this = *this * o; }

    /// F with F' = T and F(0) = 0.
    TrigPoly antiderivative() const {
        TrigPoly r(ring_);
        for (const auto& [k, c] : terms_)
            for (const auto& [uk, uc] : unit_antiderivative(k)) r.add_term(uk, c.scaled(uc));
        ParamPoly at_zero = r.eval_zero();
        r.add_term({0, 0, Phase::cos}, -at_zero);
        return r;
    }

    TrigPoly derivative() const {
        TrigPoly r(ring_);
        for (const auto& [k, c] : terms_) {
            if (k.m > 0) r.add_term({k.m - 1, k.l, k.phase}, c.scaled(Rational(k.m)));
            if (k.l > 0) {
                if (k.phase == Phase::cos) r.add_term({k.m, k.l, Phase::sin}, c.scaled(-Rational(k.l)));
                else r.add_term({k.m, k.l, Phase::cos}, c.scaled(Rational(k.l)));
            }
        }
        return r;
    }

    /// Value at theta = 0.
    ParamPoly eval_zero() const {
        ParamPoly s(ring_);
        for (const auto& [k, c] : terms_)
            if (k.m == 0 && k.phase == Phase::cos) s += c;
        return s;
    }

    /// Value at theta = 2*pi: cos -> 1, sin -> 0, theta^m -> (2 pi)^m.
    PiPoly eval_2pi() const {
        PolyAccumulator<PiFrac> acc;
        for (const auto& [k, c] : terms_) {
            if (k.phase == Phase::sin) continue;
            Rational two_m = 1;
            for (unsigned i = 0; i < k.m; ++i) two_m *= 2;
            PiFrac w = PiFrac::pi_power(k.m, two_m);
            for (const auto& t : c.terms()) acc.add_term(t.mono, PiFrac(t.coeff) * w);
        }
        return acc.take(ring_);
    }

    /// Numeric value at (theta, lambda).
    double eval(double theta, std::span<const double> lambda) const {
        double s = 0.0;
        for (const auto& [k, c] : terms_) {
            double trig = k.phase == Phase::cos ? std::cos(k.l * theta) : std::sin(k.l * theta);
            s += c.evaluate_double(lambda) * std::pow(theta, k.m) * trig;
        }
        return s;
    }

    /// Sum of the l1 norms of the coefficients (real harmonic basis).
    Rational param_norm() const {
        Rational s = 0;
        for (const auto& [k, c] : terms_) s += norm(c);
        return s;
    }

    Degree param_degree() const {
        Degree d = Degree::minus_infinity();
        for (const auto& [k, c] : terms_) d = std::max(d, c.degree());
        return d;
    }

    Degree theta_degree() const {
        Degree d = Degree::minus_infinity();
        for (const auto& [k, c] : terms_) d = std::max(d, Degree(static_cast<int>(k.m)));
        return d;
    }

    unsigned max_harmonic() const {
        unsigned l = 0;
        for (const auto& [k, c] : terms_) l = std::max(l, k.l);
        return l;
    }

    /// Replaces every coefficient by its image under f (e.g. a parameter substitution).
    template <class F>
    TrigPoly map_coeffs(RingPtr ring, F&& f) const {
        TrigPoly r(std::move(ring));
        for (const auto& [k, c] : terms_) r.add_term(k, f(c));
        return r;
    }

    friend bool operator==(const TrigPoly& a, const TrigPoly& b) { return a.terms_ == b.terms_; }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [k, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.to_string() + ")";
            if (!(k.m == 0 && k.l == 0)) out += "*" + cyclebound::to_string(k);
        }
        return out;
    }

private:
    void adopt_ring(const TrigPoly& o) {
        if (!ring_) ring_ = o.ring_;
        else if (o.ring_ && !same_ring(ring_, o.ring_))
            throw InputError("trig polynomials over different parameter sets");
    }

    using UnitTerms = std::vector<std::pair<TrigKey, Rational>>;

    // Antiderivative of a single theta^m trig(l theta), without the F(0) fix.
    static const UnitTerms& unit_antiderivative(const TrigKey& k) {
        thread_local std::map<TrigKey, UnitTerms> cache;
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        UnitTerms out;
        if (k.l == 0) {
            out.push_back({{k.m + 1, 0, Phase::cos}, Rational(1, k.m + 1)});
        } else {
            Rational inv_l(1, k.l);
            if (k.phase == Phase::cos) {
                // int th^m cos = th^m sin / l - (m/l) int th^(m-1) sin
                out.push_back({{k.m, k.l, Phase::sin}, inv_l});
                if (k.m > 0) {
                    for (const auto& [uk, uc] : unit_antiderivative({k.m - 1, k.l, Phase::sin}))
                        out.push_back({uk, -Rational(k.m) * inv_l * uc});
                }
            } else {
                // int th^m sin = -th^m cos / l + (m/l) int th^(m-1) cos
                out.push_back({{k.m, k.l, Phase::cos}, -inv_l});
                if (k.m > 0) {
                    for (const auto& [uk, uc] : unit_antiderivative({k.m - 1, k.l, Phase::cos}))
                        out.push_back({uk, Rational(k.m) * inv_l * uc});
                }
            }
        }
        return cache.emplace(k, std::move(out)).first->second;
    }

    RingPtr ring_;
    Map terms_;
};

/// Result of splitting v = z*theta + sum_j r_j theta^j + s(theta) + mixed.
struct InvariantSplit {
    ParamPoly z;
    std::vector<ParamPoly> r;  ///< r[0] is the theta^2 coefficient, r[1] theta^3, ...
    TrigPoly s;                ///< pure trigonometric part, s(0) = 0
    TrigPoly mixed;            ///< theta^m * trig(l theta) terms with m, l >= 1
};

/**
 * @brief Sorts the terms of v into the theta-polynomial part, the periodic
 * part and the mixed remainder. Constant terms are pushed into s so that
 * s(0) = 0 (they cancel for outputs of antiderivative()).
 */
inline InvariantSplit split_invariant(const TrigPoly& v) {
    InvariantSplit out{ParamPoly(v.ring()), {}, TrigPoly(v.ring()), TrigPoly(v.ring())};
    for (const auto& [k, c] : v.terms()) {
        if (k.l == 0 && k.m == 1) {
            out.z = c;
        } else if (k.l == 0 && k.m >= 2) {
            if (out.r.size() < k.m - 1) out.r.resize(k.m - 1, ParamPoly(v.ring()));
            out.r[k.m - 2] = c;
        } else if (k.m == 0) {
            out.s.add_term(k, c);
        } else {
            out.mixed.add_term(k, c);
        }
    }
    ParamPoly s0 = out.s.eval_zero();
    out.s.add_term({0, 0, Phase::cos}, -s0);
    return out;
}

/// As split_invariant, but a non-empty mixed part is an internal error.
inline InvariantSplit split_invariant_strict(const TrigPoly& v) {
    auto out = split_invariant(v);
    if (!out.mixed.is_zero())
        throw InternalError("theta-dependent trigonometric terms left after splitting: " + out.mixed.to_string());
    return out;
}

} // namespace cyclebound
