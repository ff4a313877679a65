#pragma once

/**
 * @file numlab.hpp
 * @brief Floating-point checks: adaptive Dormand-Prince integration of the
 * polar return equation and of the planar eps-perturbed rotation, Taylor
 * fits of the displacement map, zero counting and eps-scaling tables.
 */

#include "bautin.hpp"
#include "melnikov.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <thread>

namespace cyclebound {

struct IntegratorConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    std::size_t max_steps = 2'000'000;
    double initial_step = 1e-3;
};

namespace detail {

inline double err_component(double e, double y0, double y1, const IntegratorConfig& cfg) {
    return e / (cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0), std::abs(y1)));
}

inline double err_norm(double e, double y0, double y1, const IntegratorConfig& cfg) {
    return std::abs(err_component(std::abs(e), y0, y1, cfg));
}

inline double err_norm(std::complex<double> e, std::complex<double> y0, std::complex<double> y1,
                       const IntegratorConfig& cfg) {
    return std::abs(e) / (cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0), std::abs(y1)));
}

template <int N>
double err_norm(const Eigen::Matrix<double, N, 1>& e, const Eigen::Matrix<double, N, 1>& y0,
                const Eigen::Matrix<double, N, 1>& y1, const IntegratorConfig& cfg) {
    double s = 0.0;
    for (int i = 0; i < e.size(); ++i) {
        double c = err_component(std::abs(e[i]), y0[i], y1[i], cfg);
        s += c * c;
    }
    return std::sqrt(s / e.size());
}

} // namespace detail

/**
 * @brief One Dormand-Prince 5(4) step: returns the 5th-order solution and
 * the embedded error estimate.
 */
template <class State, class F>
std::pair<State, State> dopri_step(const F& f, double t, const State& y, double h) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    State k1 = f(t, y);
    State k2 = f(t + c2 * h, State(y + h * (a21 * k1)));
    State k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
    State k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    State k5 = f(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    State k6 = f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    State y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    State k7 = f(t + h, y1);
    State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y1, err};
}

/// Adaptive integration from t0 to t1. `guard(t, y)` may throw to abort.
template <class State, class F, class Guard>
State dopri_integrate(const F& f, double t0, double t1, State y, const IntegratorConfig& cfg, const Guard& guard,
                      std::size_t* steps_out = nullptr) {
    double t = t0;
    double h = std::min(cfg.initial_step, t1 - t0);
    std::size_t steps = 0;
    while (t < t1) {
        if (++steps > cfg.max_steps) throw ComputationError("integrator: step limit reached");
        if (t + h > t1) h = t1 - t;
        auto [y1, err] = dopri_step(f, t, y, h);
        double en = detail::err_norm(err, y, y1, cfg);
        if (!std::isfinite(en)) {
            h *= 0.25;
            if (h < 1e-14 * (t1 - t0)) throw ComputationError("integrator: non-finite state");
            continue;
        }
        if (en <= 1.0) {
            t += h;
            y = y1;
            guard(t, y);
        }
        double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        h *= factor;
        if (h < 1e-14 * (t1 - t0) && t < t1) throw ComputationError("integrator: step size underflow");
    }
    if (steps_out) *steps_out = steps;
    return y;
}

template <class State, class F>
State dopri_integrate(const F& f, double t0, double t1, State y, const IntegratorConfig& cfg) {
    return dopri_integrate(f, t0, t1, std::move(y), cfg, [](double, const State&) {});
}

/// Fixed-step integration with the 5th-order solution (for order checks).
template <class State, class F>
State dopri_fixed(const F& f, double t0, double t1, State y, std::size_t n) {
    double h = (t1 - t0) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) y = dopri_step(f, t0 + i * h, y, h).first;
    return y;
}

/// Concrete homogeneous perturbation in floating point; a[i], b[i] multiply x^i y^(d-i).
struct NumericField {
    unsigned d = 2;
    std::vector<double> a, b;

    static NumericField from_spec(const FieldSpec& f) {
        NumericField n;
        n.d = f.d;
        auto vals = f.values();  // a_{d,0}..a_{0,d}, b_{d,0}..b_{0,d}
        n.a.assign(f.d + 1, 0.0);
        n.b.assign(f.d + 1, 0.0);
        for (unsigned k = 0; k <= f.d; ++k) {
            n.a[f.d - k] = vals[k].get_d();
            n.b[f.d - k] = vals[f.d + 1 + k].get_d();
        }
        return n;
    }

    /// A(theta), B(theta) of the polar equation.
    std::pair<double, double> AB(double theta) const {
        double c = std::cos(theta), s = std::sin(theta);
        double P = 0, Q = 0;
        for (unsigned i = 0; i <= d; ++i) {
            double m = std::pow(c, i) * std::pow(s, d - i);
            P += a[i] * m;
            Q += b[i] * m;
        }
        return {c * P + s * Q, c * Q - s * P};
    }

    double PQ_norm() const {
        double s = 0;
        for (double v : a) s += std::abs(v);
        for (double v : b) s += std::abs(v);
        return s;
    }
};

/**
 * @brief r(2 pi) for dr/dtheta = r^d A / (1 + r^(d-1) B), r(0) = r0.
 * Works for real or complex r0 (analytic continuation of the return map).
 */
template <class Scalar>
Scalar integrate_return(const NumericField& F, Scalar r0, const IntegratorConfig& cfg = {}) {
    auto rhs = [&](double th, const Scalar& r) -> Scalar {
        auto [A, B] = F.AB(th);
        Scalar rd1 = std::pow(r, static_cast<int>(F.d - 1));
        return rd1 * r * A / (Scalar(1) + rd1 * B);
    };
    auto guard = [&](double th, const Scalar& r) {
        auto [A, B] = F.AB(th);
        Scalar den = Scalar(1) + std::pow(r, static_cast<int>(F.d - 1)) * B;
        if constexpr (std::is_same_v<Scalar, double>) {
            if (!(den > 1e-6)) throw ComputationError("return equation: 1 + r^(d-1) B is not positive");
        } else {
            if (!(std::abs(den) > 1e-6)) throw ComputationError("return equation: 1 + r^(d-1) B degenerates");
        }
    };
    return dopri_integrate(rhs, 0.0, 2 * std::numbers::pi, r0, cfg, guard);
}

/**
 * @brief Relative displacement u(2 pi) where r = r0 (1 + u): integrates
 * du/dtheta = r0^(d-1) (1+u)^d A / (1 + r0^(d-1) (1+u)^(d-1) B), which keeps
 * relative accuracy for very small r0.
 */
inline double relative_displacement(const NumericField& F, double r0, const IntegratorConfig& cfg = {}) {
    const double s = std::pow(r0, static_cast<int>(F.d - 1));
    auto rhs = [&](double th, const double& u) -> double {
        auto [A, B] = F.AB(th);
        double w = std::pow(1 + u, static_cast<int>(F.d - 1));
        return s * w * (1 + u) * A / (1 + s * w * B);
    };
    IntegratorConfig c = cfg;
    c.abs_tol = std::min(cfg.abs_tol, 1e-300);
    auto guard = [&](double th, const double& u) {
        auto [A, B] = F.AB(th);
        if (!(1 + s * std::pow(1 + u, static_cast<int>(F.d - 1)) * B > 1e-6) || !(1 + u > 0))
            throw ComputationError("return equation: orbit leaves the polar chart");
    };
    return dopri_integrate(rhs, 0.0, 2 * std::numbers::pi, 0.0, c, guard);
}

/// Worker count from CYCLEBOUND_THREADS (default: hardware concurrency, at least 1).
inline unsigned worker_count() {
    if (const char* env = std::getenv("CYCLEBOUND_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on worker threads; results must be written per index.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(m);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

enum class GridKind {
    complex_circle,   ///< r0 = rho e^{i phi_j}: least squares is a discrete Cauchy integral
    real_geometric,   ///< r0 in [r_min, r_max] geometric
};

struct FitGrid {
    GridKind kind = GridKind::complex_circle;
    std::size_t points = 48;
    double rho = 0.0;  ///< circle radius; 0 picks 0.5 / max(1, sum |lambda|)
    double r_min = 1e-3, r_max = 5e-2;
    unsigned extra_orders = 20;  ///< orders fitted beyond the four reported ones
};

struct FitReport {
    unsigned first_order = 2;
    std::vector<double> coeffs;  ///< fitted L_k, k = first_order .. first_order+3
    std::vector<std::complex<double>> samples_r0;
    double condition = 0.0;
    double residual = 0.0;
    bool ill_conditioned = false;
};

/// Least-squares fit of r(2 pi) - r0 = sum_k L_k r0^k, k = d .. d + 3 + extra.
inline FitReport fit_displacement(const NumericField& F, const IntegratorConfig& cfg = {}, FitGrid grid = {}) {
    FitReport rep;
    rep.first_order = F.d;
    const unsigned m = 4 + grid.extra_orders;
    const std::size_t n = grid.points;
    if (n < m) throw InputError("fit grid has fewer points than fitted orders");
    using Cd = std::complex<double>;
    std::vector<Cd> r0(n), disp(n);
    if (grid.kind == GridKind::complex_circle) {
        double rho = grid.rho > 0 ? grid.rho : 0.5 / std::max(1.0, F.PQ_norm());
        for (std::size_t j = 0; j < n; ++j) r0[j] = std::polar(rho, 2 * std::numbers::pi * (j + 0.5) / n);
    } else {
        for (std::size_t j = 0; j < n; ++j)
            r0[j] = grid.r_min * std::pow(grid.r_max / grid.r_min, static_cast<double>(j) / (n - 1));
    }
    parallel_for(n, [&](std::size_t j) {
        if (grid.kind == GridKind::complex_circle) disp[j] = integrate_return<Cd>(F, r0[j], cfg) - r0[j];
        else disp[j] = integrate_return<double>(F, r0[j].real(), cfg) - r0[j].real();
    });
    // Columns scaled by the sample magnitude so the system stays well conditioned.
    double scale = 0;
    for (const auto& z : r0) scale = std::max(scale, std::abs(z));
    Eigen::MatrixXcd V(n, m);
    Eigen::VectorXcd y(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (unsigned k = 0; k < m; ++k) V(j, k) = std::pow(r0[j] / scale, static_cast<int>(F.d + k));
        y(j) = disp[j];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXcd x = svd.solve(y);
    auto sv = svd.singularValues();
    rep.condition = sv(0) / sv(sv.size() - 1);
    rep.ill_conditioned = rep.condition > 1e10;
    rep.residual = (V * x - y).norm();
    for (unsigned k = 0; k < 4; ++k) rep.coeffs.push_back((x(k) / std::pow(scale, static_cast<int>(F.d + k))).real());
    rep.samples_r0 = r0;
    return rep;
}

struct ZeroCount {
    std::size_t count = 0;            ///< trusted sign changes of the displacement
    bool center_like = false;         ///< displacement indistinguishable from zero everywhere
    std::size_t undetermined = 0;     ///< samples below the noise floor
    std::vector<double> zeros;        ///< refined zero locations
    std::vector<double> grid;
};

/**
 * @brief Counts isolated zeros of r(2 pi) - r0 for r0 in (0, R]: geometric
 * grid down to R * 1e-6, sign changes between samples above the noise
 * floor, bisection refinement.
 *
 * The floor is 10 rel_tol 2 pi max|A| r^(d-1); measured errors of the
 * relative displacement sit near 2% of rel_tol 2 pi max|A| r^(d-1).
 */
inline ZeroCount count_displacement_zeros(const NumericField& F, double R, const IntegratorConfig& cfg = {},
                                          std::size_t samples = 200) {
    if (!(R > 0)) throw InputError("zero counting needs R > 0");
    ZeroCount zc;
    const double r_lo = R * 1e-6;
    std::vector<double> grid(samples), u(samples), noise(samples);
    for (std::size_t j = 0; j < samples; ++j)
        grid[j] = r_lo * std::pow(R / r_lo, static_cast<double>(j) / (samples - 1));
    double amax = 0;
    for (int i = 0; i < 256; ++i) {
        auto [A, B] = F.AB(2 * std::numbers::pi * i / 256);
        amax = std::max(amax, std::abs(A));
    }
    auto floor_at = [&](double r) {
        return 10 * cfg.rel_tol * 2 * std::numbers::pi * (amax + 1e-300) * std::pow(r, static_cast<int>(F.d - 1));
    };
    parallel_for(samples, [&](std::size_t j) {
        u[j] = relative_displacement(F, grid[j], cfg);
        noise[j] = floor_at(grid[j]);
    });
    zc.grid = grid;
    int last_sign = 0;
    std::size_t last_index = 0;
    bool any_signal = false;
    for (std::size_t j = 0; j < samples; ++j) {
        if (std::abs(u[j]) <= noise[j]) {
            ++zc.undetermined;
            continue;
        }
        any_signal = true;
        int s = u[j] > 0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) {
            double lo = grid[last_index], hi = grid[j];
            double flo = u[last_index];
            for (int it = 0; it < 60; ++it) {
                double mid = std::sqrt(lo * hi);
                double fm = relative_displacement(F, mid, cfg);
                if ((fm > 0) == (flo > 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zc.zeros.push_back(std::sqrt(lo * hi));
            ++zc.count;
        }
        last_sign = s;
        last_index = j;
    }
    zc.center_like = !any_signal;
    return zc;
}

/// Concrete planar perturbation X1 = P d/dx + Q d/dy in floating point.
struct NumericPlanarField {
    std::vector<std::tuple<unsigned, unsigned, double>> P, Q;  // (i, j, coefficient of x^i y^j)

    static NumericPlanarField from_field(const PlanarField& X, std::span<const double> params = {}) {
        if (params.size() != X.nparams()) throw InputError("planar field: wrong number of parameter values");
        NumericPlanarField n;
        auto collect = [&](const ParamPoly& p, auto& out) {
            std::map<std::pair<unsigned, unsigned>, double> acc;
            for (const auto& t : p.terms()) {
                double v = t.coeff.get_d();
                for (std::size_t i = 0; i < params.size(); ++i) v *= std::pow(params[i], t.mono[i + 2]);
                acc[{t.mono[0], t.mono[1]}] += v;
            }
            for (auto& [k, v] : acc) out.emplace_back(k.first, k.second, v);
        };
        collect(X.P, n.P);
        collect(X.Q, n.Q);
        return n;
    }

    static double eval(const std::vector<std::tuple<unsigned, unsigned, double>>& p, double x, double y) {
        double s = 0;
        for (const auto& [i, j, c] : p) s += c * std::pow(x, i) * std::pow(y, j);
        return s;
    }
};

/**
 * @brief L(c, eps) - c for the return map of x' = -y + eps P, y' = x + eps Q
 * on the section {y = 0, x > 0}, with c = (x^2 + y^2)/2.
 *
 * The orbit is written as R(t)(z0 + eps w) with R(t) the unperturbed
 * rotation and z0 = (sqrt(2c), 0); w obeys w' = R(-t) X1(R(t)(z0 + eps w)).
 * The section is reached when t + arg(z0 + eps w) = 2 pi, located by
 * bisection on the angle. Working with w keeps L - c free of cancellation.
 */
inline double planar_displacement(const NumericPlanarField& X1, double eps, double c, const IntegratorConfig& cfg = {}) {
    using V2 = Eigen::Vector2d;
    const V2 z0(std::sqrt(2 * c), 0.0);
    auto rhs = [&](double t, const V2& w) -> V2 {
        V2 p = z0 + eps * w;
        double ct = std::cos(t), st = std::sin(t);
        double x = ct * p[0] - st * p[1], y = st * p[0] + ct * p[1];
        double P = NumericPlanarField::eval(X1.P, x, y), Q = NumericPlanarField::eval(X1.Q, x, y);
        return V2(ct * P + st * Q, -st * P + ct * Q);
    };
    auto angle_gap = [&](double t, const V2& w) {
        V2 p = z0 + eps * w;
        return t + std::atan2(p[1], p[0]) - 2 * std::numbers::pi;
    };
    IntegratorConfig tight = cfg;
    tight.abs_tol = std::min(cfg.abs_tol, 1e-18);
    V2 w(0.0, 0.0);
    double t = 0, h = 1e-2;
    std::size_t steps = 0;
    const double t_max = 4 * std::numbers::pi;
    while (t < t_max) {
        if (++steps > cfg.max_steps) throw ComputationError("planar integrator: step limit reached");
        auto [w1, err] = dopri_step(rhs, t, w, h);
        double en = detail::err_norm<2>(err, w, w1, tight);
        if (!std::isfinite(en)) throw ComputationError("planar integrator: non-finite state");
        if (en <= 1.0) {
            if ((z0 + eps * w1).norm() < 1e-3 * z0.norm())
                throw ComputationError("planar integrator: orbit collapses toward the origin");
            if (angle_gap(t + h, w1) >= 0) {
                double lo = 0, hi = h;
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (angle_gap(t + mid, dopri_step(rhs, t, w, mid).first) < 0) lo = mid;
                    else hi = mid;
                }
                V2 wc = dopri_step(rhs, t, w, 0.5 * (lo + hi)).first;
                return eps * z0.dot(wc) + 0.5 * eps * eps * wc.squaredNorm();
            }
            t += h;
            w = w1;
        }
        double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        h = std::min(h * factor, 0.05);
    }
    throw ComputationError("planar integrator: orbit did not return to the section");
}

inline double planar_return(const NumericPlanarField& X1, double eps, double c, const IntegratorConfig& cfg = {}) {
    return c + planar_displacement(X1, eps, c, cfg);
}

struct ScalingRow {
    double eps;
    double deviation;                 ///< max over the c grid of |(L - c)/eps^k - M(c)|
    std::vector<double> scaled;       ///< (L - c)/eps^k per c
};

struct ScalingReport {
    unsigned k_star = 1;
    std::vector<double> c_grid;
    std::vector<double> M_values;
    std::vector<ScalingRow> rows;
    std::vector<double> ratios;  ///< deviation(eps_{i+1}) / deviation(eps_i)
    double max_abs_scaled = 0;   ///< max |(L - c)/eps^k| (used when M = 0)
};

/**
 * @brief Tabulates (L(c, eps) - c)/eps^k against M(c) for each eps and
 * reports deviation ratios between consecutive eps values.
 */
inline ScalingReport epsilon_scaling(const NumericPlanarField& X1, unsigned k_star,
                                     const std::function<double(double)>& M, const std::vector<double>& eps_list,
                                     const std::vector<double>& c_grid, const IntegratorConfig& cfg = {}) {
    ScalingReport rep;
    rep.k_star = k_star;
    rep.c_grid = c_grid;
    for (double c : c_grid) rep.M_values.push_back(M(c));
    rep.rows.resize(eps_list.size());
    std::vector<double> table(eps_list.size() * c_grid.size());
    parallel_for(table.size(), [&](std::size_t idx) {
        std::size_t e = idx / c_grid.size(), j = idx % c_grid.size();
        double eps = eps_list[e], c = c_grid[j];
        table[idx] = planar_displacement(X1, eps, c, cfg) / std::pow(eps, static_cast<int>(k_star));
    });
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        ScalingRow row{eps_list[e], 0.0, {}};
        for (std::size_t j = 0; j < c_grid.size(); ++j) {
            double v = table[e * c_grid.size() + j];
            row.scaled.push_back(v);
            row.deviation = std::max(row.deviation, std::abs(v - rep.M_values[j]));
            rep.max_abs_scaled = std::max(rep.max_abs_scaled, std::abs(v));
        }
        rep.rows[e] = std::move(row);
    }
    for (std::size_t e = 1; e < rep.rows.size(); ++e)
        rep.ratios.push_back(rep.rows[e - 1].deviation > 0 ? rep.rows[e].deviation / rep.rows[e - 1].deviation : 0.0);
    return rep;
}

} // namespace cyclebound
