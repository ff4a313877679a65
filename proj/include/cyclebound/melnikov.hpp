#pragma once

/**
 * @file melnikov.hpp
 * @brief Successive derivatives of the return map of X0 + eps X1, where
 * X0 = x d/dy - y d/dx is the rotation with first integral f = (x^2+y^2)/2
 * and X1 = P d/dx + Q d/dy is a polynomial perturbation.
 *
 * Along orbits df = eps * eta with eta = P dy - Q dx. If the first k-1
 * circle integrals vanish, the k-th order term of L(c, eps) - c is the
 * integral over the circle f = c of omega_k, where omega_1 = eta and
 * omega_{k+1} = g_k eta for the decomposition omega_k = g_k df + dR_k.
 * Circles are oriented counterclockwise (the direction of X0).
 */

#include "pifield.hpp"

#include <map>
#include <set>

namespace cyclebound {

/// Partial derivative with respect to ring variable `var`.
inline ParamPoly partial(const ParamPoly& p, std::size_t var) {
    std::vector<Term<Rational>> out;
    for (const auto& t : p.terms()) {
        unsigned e = t.mono[var];
        if (e == 0) continue;
        auto ex = t.mono.exponents(p.nvars());
        ex[var] -= 1;
        out.push_back({Monomial::from_exponents(ex), t.coeff * e});
    }
    return ParamPoly::from_terms(p.ring(), std::move(out));
}

/**
 * @brief A polynomial vector field perturbation over the ring (x, y, params...).
 * Variables 0 and 1 are x and y; the rest are symbolic parameters.
 */
struct PlanarField {
    RingPtr ring;
    ParamPoly P;
    ParamPoly Q;

    static RingPtr make_field_ring(const std::vector<std::string>& params) {
        std::vector<std::string> names{"x", "y"};
        names.insert(names.end(), params.begin(), params.end());
        return make_ring(names);
    }

    std::size_t nparams() const { return ring->size() - 2; }
};

/// omega = A dx + B dy.
struct PForm {
    ParamPoly A;
    ParamPoly B;
    bool is_zero() const { return A.is_zero() && B.is_zero(); }
    friend bool operator==(const PForm& u, const PForm& v) { return u.A == v.A && u.B == v.B; }
};

/// iota_{P d/dx + Q d/dy}(dx ^ dy) = P dy - Q dx.
inline PForm interior_product(const PlanarField& X) { return PForm{-X.Q, X.P}; }

/// Ring (c, params...) for circle integrals of forms over (x, y, params...).
inline RingPtr level_ring(const RingPtr& xy_ring) {
    std::vector<std::string> names{"c"};
    for (std::size_t i = 2; i < xy_ring->size(); ++i) names.push_back(xy_ring->name(i));
    return make_ring(names);
}

namespace detail {

inline Rational double_factorial(long n) {
    Rational r = 1;
    for (long k = n; k > 1; k -= 2) r *= k;
    return r;
}

/// (1/2pi) * integral over [0, 2pi] of cos^a sin^b.
inline Rational trig_moment(unsigned a, unsigned b) {
    if (a % 2 || b % 2) return 0;
    return double_factorial(static_cast<long>(a) - 1) * double_factorial(static_cast<long>(b) - 1) /
           double_factorial(static_cast<long>(a + b));
}

} // namespace detail

/**
 * @brief Integral of omega over the circle x^2 + y^2 = 2c (counterclockwise),
 * as a polynomial in c and the parameters with coefficients in Q*pi.
 */
inline PiPoly circle_integral(const PForm& w, const RingPtr& xy_ring) {
    RingPtr out_ring = level_ring(xy_ring);
    PolyAccumulator<PiFrac> acc;
    const std::size_t np = xy_ring->size() - 2;
    auto emit = [&](const Term<Rational>& t, unsigned a, unsigned b, int sign) {
        Rational m = detail::trig_moment(a, b);
        if (sgn(m) == 0) return;
        // rho^(p+q+1) with rho^2 = 2c; p+q+1 = a+b is even here.
        unsigned half = (a + b) / 2;
        Rational coeff = t.coeff * m * 2 * sign;
        for (unsigned i = 0; i < half; ++i) coeff *= 2;
        std::vector<unsigned> ex(np + 1);
        ex[0] = half;
        for (std::size_t i = 0; i < np; ++i) ex[i + 1] = t.mono[i + 2];
        acc.add_term(Monomial::from_exponents(ex), PiFrac::pi_power(1, coeff));
    };
    for (const auto& t : w.A.terms()) emit(t, t.mono[0], t.mono[1] + 1, -1);  // dx = -rho sin dt
    for (const auto& t : w.B.terms()) emit(t, t.mono[0] + 1, t.mono[1], +1);  // dy = rho cos dt
    return acc.take(out_ring);
}

inline PiPoly circle_integral(const PForm& w) {
    RingPtr r = w.A.ring() ? w.A.ring() : w.B.ring();
    return circle_integral(w, r);
}

/// Precondition failure of the decomposition: the form has a nonzero period.
class PeriodError : public DomainError {
public:
    PeriodError(const std::string& what, PiPoly period) : DomainError(what), period_(std::move(period)) {}
    const PiPoly& period() const { return period_; }

private:
    PiPoly period_;
};

struct StarDecomposition {
    ParamPoly g;
    ParamPoly R;
};

namespace detail {

/// Coefficients of x^i y^(n-i) of a form component, keyed by (i, n), as parameter polynomials.
inline std::map<std::pair<unsigned, unsigned>, ParamPoly> split_xy(const ParamPoly& p) {
    std::map<std::pair<unsigned, unsigned>, ParamPoly> out;
    const std::size_t nv = p.nvars();
    std::map<std::pair<unsigned, unsigned>, std::vector<Term<Rational>>> bins;
    for (const auto& t : p.terms()) {
        auto ex = t.mono.exponents(nv);
        unsigned i = ex[0], j = ex[1];
        ex[0] = ex[1] = 0;
        bins[{i, i + j}].push_back({Monomial::from_exponents(ex), t.coeff});
    }
    for (auto& [k, terms] : bins) out.emplace(k, ParamPoly::from_terms(p.ring(), std::move(terms)));
    return out;
}

inline ParamPoly xy_monomial(const RingPtr& ring, unsigned i, unsigned j) {
    std::vector<unsigned> ex(ring->size(), 0);
    ex[0] = i;
    ex[1] = j;
    return ParamPoly::monomial(ring, Monomial::from_exponents(ex), Rational(1));
}

} // namespace detail

/**
 * @brief omega = g df + dR with f = (x^2 + y^2)/2, solved degree by degree
 * as an exact linear system. Unknowns are ordered g before R (lower degree
 * first) and by decreasing x-exponent; the free unknown of an odd degree
 * (kernel R = f^m, g = -m f^(m-1)) is set to zero.
 */
inline StarDecomposition star_decompose(const PForm& w) {
    RingPtr ring = w.A.ring() ? w.A.ring() : w.B.ring();
    PiPoly period = circle_integral(w, ring);
    if (!period.is_zero())
        throw PeriodError("form has a nonzero period over the level circles: " + period.to_string(), period);
    auto As = detail::split_xy(w.A);
    auto Bs = detail::split_xy(w.B);
    std::set<unsigned> degrees;
    for (const auto& [k, v] : As) degrees.insert(k.second);
    for (const auto& [k, v] : Bs) degrees.insert(k.second);

    StarDecomposition out{ParamPoly(ring), ParamPoly(ring)};
    for (unsigned n : degrees) {
        const unsigned ng = n, nr = n + 2, nu = ng + nr;  // g: x^j y^(n-1-j), j < n; R: x^j y^(n+1-j)
        auto gcol = [&](unsigned j) { return n - 1 - j; };                // decreasing x-exponent
        auto rcol = [&](unsigned j) { return ng + (n + 1 - j); };
        std::vector<std::vector<Rational>> M(2 * (n + 1), std::vector<Rational>(nu, Rational(0)));
        std::vector<ParamPoly> rhs(2 * (n + 1), ParamPoly(ring));
        for (unsigned i = 0; i <= n; ++i) {
            // dx row: coefficient of x^i y^(n-i) in g x + R_x.
            if (i >= 1) M[i][gcol(i - 1)] += 1;
            M[i][rcol(i + 1)] += Rational(i + 1);
            // dy row: coefficient of x^i y^(n-i) in g y + R_y.
            if (i + 1 <= n) M[n + 1 + i][gcol(i)] += 1;
            M[n + 1 + i][rcol(i)] += Rational(n + 1 - i);
            if (auto it = As.find({i, n}); it != As.end()) rhs[i] = it->second;
            if (auto it = Bs.find({i, n}); it != Bs.end()) rhs[n + 1 + i] = it->second;
        }
        // Gauss-Jordan elimination over Q with polynomial right-hand sides.
        std::vector<int> pivot_row_of(nu, -1);
        std::size_t row = 0;
        for (unsigned col = 0; col < nu && row < M.size(); ++col) {
            std::size_t p = row;
            while (p < M.size() && sgn(M[p][col]) == 0) ++p;
            if (p == M.size()) continue;
            std::swap(M[p], M[row]);
            std::swap(rhs[p], rhs[row]);
            Rational inv = 1 / M[row][col];
            for (auto& x : M[row]) x *= inv;
            rhs[row] = rhs[row].scaled(inv);
            for (std::size_t r = 0; r < M.size(); ++r) {
                if (r == row || sgn(M[r][col]) == 0) continue;
                Rational fct = M[r][col];
                for (unsigned c2 = 0; c2 < nu; ++c2) M[r][c2] -= fct * M[row][c2];
                rhs[r] -= rhs[row].scaled(fct);
            }
            pivot_row_of[col] = static_cast<int>(row);
            ++row;
        }
        for (std::size_t r = row; r < M.size(); ++r)
            if (!rhs[r].is_zero()) throw InternalError("star decomposition: inconsistent system in degree " + std::to_string(n));
        for (unsigned j = 0; j < ng; ++j)
            if (int pr = pivot_row_of[gcol(j)]; pr >= 0)
                out.g += rhs[pr] * detail::xy_monomial(ring, j, n - 1 - j);
        for (unsigned j = 0; j <= n + 1; ++j)
            if (int pr = pivot_row_of[rcol(j)]; pr >= 0)
                out.R += rhs[pr] * detail::xy_monomial(ring, j, n + 1 - j);
    }
    // Re-expand g df + dR and compare with omega.
    ParamPoly x = ParamPoly::variable(ring, 0), y = ParamPoly::variable(ring, 1);
    PForm back{out.g * x + partial(out.R, 0), out.g * y + partial(out.R, 1)};
    if (!(back == w)) throw InternalError("star decomposition does not re-expand to the input form");
    return out;
}

struct MelnikovResult {
    std::optional<unsigned> k_star;  ///< first order with a nonzero derivative
    PiPoly M;                        ///< that derivative as a polynomial in c (and parameters)
    std::vector<PiPoly> L;           ///< L[k-1] for k = 1..last computed
    std::vector<StarDecomposition> trail;
    unsigned kmax = 1;
};

inline MelnikovResult successive_melnikov(const PlanarField& X, unsigned kmax) {
    if (kmax < 1) throw InputError("kmax must be at least 1");
    MelnikovResult res;
    res.kmax = kmax;
    PForm eta = interior_product(X);
    PForm omega = eta;
    for (unsigned k = 1; k <= kmax; ++k) {
        PiPoly Lk = circle_integral(omega, X.ring);
        res.L.push_back(Lk);
        if (!Lk.is_zero()) {
            res.k_star = k;
            res.M = Lk;
            return res;
        }
        if (k == kmax) break;
        StarDecomposition dec;
        try {
            dec = star_decompose(omega);
        } catch (const PeriodError& e) {
            throw InternalError(std::string("decomposition failed although the period vanished: ") + e.what());
        }
        res.trail.push_back(dec);
        omega = PForm{dec.g * eta.A, dec.g * eta.B};
    }
    res.M = PiPoly(level_ring(X.ring));
    return res;
}

} // namespace cyclebound
