#pragma once

/**
 * @file pifield.hpp
 * @brief Exact arithmetic in Q(pi), the field of rational functions in pi.
 *
 * Return-map coefficients are polynomials in pi once theta = 2*pi is
 * substituted. Because pi is transcendental, Q(pi) is isomorphic to the
 * field of rational functions in one indeterminate, so an ideal computation
 * with PiFrac coefficients gives exactly the answer over the reals. Most
 * values have denominator 1 and take the polynomial fast paths.
 */

#include "polycore.hpp"

#include <cmath>
#include <numbers>

namespace cyclebound {

namespace detail {

/// Dense univariate polynomial over Q, ascending powers, no trailing zeros.
using QPoly = std::vector<Rational>;

inline void trim(QPoly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline QPoly qp_add(const QPoly& a, const QPoly& b, bool subtract = false) {
    QPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] = a[i];
        if (i < b.size()) {
            if (subtract) r[i] -= b[i];
            else r[i] += b[i];
        }
    }
    trim(r);
    return r;
}

inline QPoly qp_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

inline QPoly qp_scale(const QPoly& a, const Rational& s) {
    if (sgn(s) == 0) return {};
    QPoly r = a;
    for (auto& c : r) c *= s;
    return r;
}

/// Polynomial long division a = q*b + r.
inline std::pair<QPoly, QPoly> qp_divmod(const QPoly& a, const QPoly& b) {
    if (b.empty()) throw DomainError("division by the zero polynomial in pi");
    QPoly r = a, q;
    if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, Rational(0));
    while (!r.empty() && r.size() >= b.size()) {
        std::size_t shift = r.size() - b.size();
        Rational f = r.back() / b.back();
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
        r.pop_back();
        trim(r);
    }
    trim(q);
    return {q, r};
}

inline QPoly qp_monic(const QPoly& a) {
    if (a.empty()) return a;
    Rational lc = a.back();
    return qp_scale(a, 1 / lc);
}

inline QPoly qp_gcd(QPoly a, QPoly b) {
    while (!b.empty()) {
        auto r = qp_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return qp_monic(a);
}

inline bool qp_is_one(const QPoly& a) { return a.size() == 1 && a[0] == 1; }

template <class T>
T qp_eval(const QPoly& a, const T& x) {
    T v(0);
    for (std::size_t i = a.size(); i-- > 0;) v = v * x + T(a[i]);
    return v;
}

inline double qp_eval_double(const QPoly& a, double x) {
    double v = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * x + a[i].get_d();
    return v;
}

inline std::string qp_to_string(const QPoly& a) {
    if (a.empty()) return "0";
    std::string out;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (sgn(a[i]) == 0) continue;
        Rational c = a[i];
        bool neg = sgn(c) < 0;
        if (neg) c = -c;
        if (out.empty()) out += neg ? "-" : "";
        else out += neg ? " - " : " + ";
        out += c.get_str();
        if (i > 0) out += "*pi^" + std::to_string(i);
    }
    return out;
}

} // namespace detail

/**
 * @brief num(pi)/den(pi) with den monic and gcd(num, den) = 1.
 */
class PiFrac {
public:
    PiFrac() : den_{Rational(1)} {}
    PiFrac(int v) : PiFrac(Rational(v)) {}
    PiFrac(const Rational& v) : den_{Rational(1)} {
        if (sgn(v) != 0) num_.push_back(v);
    }

    static PiFrac pi_power(unsigned k, const Rational& scale = 1) {
        PiFrac f;
        if (sgn(scale) == 0) return f;
        f.num_.assign(k + 1, Rational(0));
        f.num_[k] = scale;
        return f;
    }
    static PiFrac pi() { return pi_power(1); }

    static PiFrac from_parts(detail::QPoly num, detail::QPoly den) {
        PiFrac f;
        f.num_ = std::move(num);
        f.den_ = std::move(den);
        detail::trim(f.num_);
        detail::trim(f.den_);
        f.normalize();
        return f;
    }

    const detail::QPoly& num() const { return num_; }
    const detail::QPoly& den() const { return den_; }

    bool zero() const { return num_.empty(); }
    bool is_polynomial() const { return detail::qp_is_one(den_); }
    bool is_rational() const { return is_polynomial() && num_.size() <= 1; }
    Rational rational_value() const {
        if (!is_rational()) throw DomainError("value depends on pi");
        return num_.empty() ? Rational(0) : num_[0];
    }

    double value() const {
        return detail::qp_eval_double(num_, std::numbers::pi) / detail::qp_eval_double(den_, std::numbers::pi);
    }

    /// Evaluates with pi replaced by a rational stand-in.
    Rational specialize(const Rational& pi_value) const {
        Rational d = detail::qp_eval(den_, pi_value);
        if (sgn(d) == 0) throw DomainError("denominator vanishes at the chosen value of pi");
        return detail::qp_eval(num_, pi_value) / d;
    }

    PiFrac operator-() const {
        PiFrac r = *this;
        for (auto& c : r.num_) c = -c;
        return r;
    }

    friend PiFrac operator+(const PiFrac& a, const PiFrac& b) { return add(a, b, false); }
    friend PiFrac operator-(const PiFrac& a, const PiFrac& b) { return add(a, b, true); }

    friend PiFrac operator*(const PiFrac& a, const PiFrac& b) {
        if (a.zero() || b.zero()) return PiFrac();
        if (a.is_polynomial() && b.is_polynomial()) {
            PiFrac r;
            r.num_ = detail::qp_mul(a.num_, b.num_);
            return r;
        }
        return from_parts(detail::qp_mul(a.num_, b.num_), detail::qp_mul(a.den_, b.den_));
    }

    friend PiFrac operator/(const PiFrac& a, const PiFrac& b) {
        if (b.zero()) throw DomainError("division by zero in Q(pi)");
        if (a.zero()) return PiFrac();
        if (b.is_rational()) {
            PiFrac r = a;
            r.num_ = detail::qp_scale(a.num_, 1 / b.num_[0]);
            return r;
        }
        return from_parts(detail::qp_mul(a.num_, b.den_), detail::qp_mul(a.den_, b.num_));
    }

    PiFrac& operator+=(const PiFrac& o) { return *this = *this + o; }
    PiFrac& operator-=(const PiFrac& o) { return *this = *this - o; }
    PiFrac& operator*=(const PiFrac& o) { return *this = *this * o; }
    PiFrac& operator/=(const PiFrac& o) { return *this = *this / o; }

    friend bool operator==(const PiFrac& a, const PiFrac& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    std::string to_string() const {
        if (is_polynomial()) return detail::qp_to_string(num_);
        return "(" + detail::qp_to_string(num_) + ")/(" + detail::qp_to_string(den_) + ")";
    }

private:
    static PiFrac add(const PiFrac& a, const PiFrac& b, bool subtract) {
        if (a.is_polynomial() && b.is_polynomial()) {
            PiFrac r;
            r.num_ = detail::qp_add(a.num_, b.num_, subtract);
            return r;
        }
        if (a.den_ == b.den_) return from_parts(detail::qp_add(a.num_, b.num_, subtract), a.den_);
        return from_parts(detail::qp_add(detail::qp_mul(a.num_, b.den_), detail::qp_mul(b.num_, a.den_), subtract),
                          detail::qp_mul(a.den_, b.den_));
    }

    void normalize() {
        if (den_.empty()) throw DomainError("zero denominator in Q(pi)");
        if (num_.empty()) {
            den_ = {Rational(1)};
            return;
        }
        if (den_.size() > 1) {
            auto g = detail::qp_gcd(num_, den_);
            if (g.size() > 1) {
                num_ = detail::qp_divmod(num_, g).first;
                den_ = detail::qp_divmod(den_, g).first;
            }
        }
        Rational lc = den_.back();
        if (lc != 1) {
            num_ = detail::qp_scale(num_, 1 / lc);
            den_ = detail::qp_scale(den_, 1 / lc);
        }
    }

    detail::QPoly num_;
    detail::QPoly den_;
};

inline bool is_zero(const PiFrac& c) { return c.zero(); }
inline double to_double(const PiFrac& c) { return c.value(); }
inline double magnitude(const PiFrac& c) { return std::abs(c.value()); }
inline std::string coeff_to_string(const PiFrac& c) { return c.to_string(); }

/// Polynomials in the parameters with coefficients in Q(pi).
using PiPoly = Poly<PiFrac>;

inline PiPoly to_pi_poly(const ParamPoly& p) {
    return p.map_coeffs<PiFrac>([](const Rational& c) { return PiFrac(c); });
}

/// Replaces pi by a rational stand-in (the "numerify" toggle).
inline ParamPoly specialize_pi(const PiPoly& p, const Rational& pi_value) {
    return p.map_coeffs<Rational>([&](const PiFrac& c) { return c.specialize(pi_value); });
}

/// The default rational stand-in for pi when ideal computations are numerified.
inline Rational default_pi_stand_in() { return Rational(355, 113); }

} // namespace cyclebound
