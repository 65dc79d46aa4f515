// three_level_dynamics.hpp - per-Fock-sector evolution of the Lambda atom
//
// In the sector {|1,n>, |2,n+1>, |3,n+1>} the amplitudes obey
//
//     i d/dt (A, B, C)^T = H_n (A, B, C)^T,
//     H_n = [[v1, g1, g2], [g1, v2, 0], [g2, 0, v3]]
//
// with v1 = chi n(n-1), v2 = delta1 + chi n(n+1), v3 = delta2 + chi n(n+1) and
// g_l = lambda_l sqrt(n+1). Two independent routes are provided: a closed form
// (trigonometric cubic roots plus cross-product eigenvectors) and a fixed-step
// RK4 integration of the same system.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace kerrlambda {

using cdouble = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

struct ModelParams {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double chi = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double theta = 0.0;  // initial superposition angle
    double phi = 0.0;    // relative phase of the |3, n+1> component

    void validate() const {
        if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) throw std::invalid_argument("lambda1: coupling must be finite and > 0");
        if (!(lambda2 > 0.0) || !std::isfinite(lambda2)) throw std::invalid_argument("lambda2: coupling must be finite and > 0");
        if (!(chi >= 0.0) || !std::isfinite(chi)) throw std::invalid_argument("chi: Kerr parameter must be finite and >= 0");
        if (!std::isfinite(delta1)) throw std::invalid_argument("delta1: must be finite");
        if (!std::isfinite(delta2)) throw std::invalid_argument("delta2: must be finite");
        if (!std::isfinite(theta)) throw std::invalid_argument("theta: must be finite");
        if (!std::isfinite(phi)) throw std::invalid_argument("phi: must be finite");
    }
};

/// Ingredients of the Doppler- and recoil-shifted detunings (1D projection along k).
struct DetuningInputs {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double omega3 = 0.0;
    double Omega = 0.0;
    double k = 1.0;
    double P0 = 0.0;
    double M = 1.0;

    void validate() const {
        if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("M: atomic mass must be finite and > 0");
    }
};

struct Detunings {
    double delta1;
    double delta2;
};

inline Detunings detunings(const DetuningInputs& d) {
    d.validate();
    const double motional = -d.k * d.P0 / d.M + d.k * d.k / (2.0 * d.M);
    return {d.omega2 - d.omega1 + d.Omega + motional, d.omega3 - d.omega1 + d.Omega + motional};
}

struct SectorCoefficients {
    double v1, v2, v3;
    double g1, g2;
    std::size_t n;
};

inline SectorCoefficients sector_coefficients(const ModelParams& p, std::size_t n) {
    const double nd = static_cast<double>(n);
    const double root = std::sqrt(nd + 1.0);
    return {
        .v1 = p.chi * nd * (nd - 1.0),
        .v2 = p.delta1 + p.chi * nd * (nd + 1.0),
        .v3 = p.delta2 + p.chi * nd * (nd + 1.0),
        .g1 = p.lambda1 * root,
        .g2 = p.lambda2 * root,
        .n = n,
    };
}

/// The real-symmetric sector generator H_n.
inline Mat3 generator(const SectorCoefficients& s) {
    return {{{s.v1, s.g1, s.g2}, {s.g1, s.v2, 0.0}, {s.g2, 0.0, s.v3}}};
}

/// Coefficients of det(mu I - (H_n - shift I)) = mu^3 + x1 mu^2 + x2 mu + x3.
struct CharacteristicCoefficients {
    double x1, x2, x3;
};

inline CharacteristicCoefficients characteristic(const SectorCoefficients& s, double shift = 0.0) {
    const double a = s.v1 - shift;
    const double b = s.v2 - shift;
    const double c = s.v3 - shift;
    const double g1sq = s.g1 * s.g1;
    const double g2sq = s.g2 * s.g2;
    return {
        .x1 = -(a + b + c),
        .x2 = a * b + a * c + b * c - g1sq - g2sq,
        .x3 = -(a * b * c - g1sq * c - g2sq * b),
    };
}

inline double cubic_value(double x1, double x2, double x3, double mu) {
    return ((mu + x1) * mu + x2) * mu + x3;
}

/// Three real roots of mu^3 + x1 mu^2 + x2 mu + x3, ascending.
///
/// Trigonometric (Viete) form, cos^-1 argument clamped, followed by a guarded
/// Newton polish. Throws std::domain_error when the roots are not all real.
inline std::array<double, 3> cubic_roots(double x1, double x2, double x3) {
    const double scale = std::max(1.0, x1 * x1);
    const double spread = x1 * x1 - 3.0 * x2;
    if (spread < -1e-12 * scale) {
        throw std::domain_error("cubic_roots: complex roots (x1^2 - 3 x2 = " + std::to_string(spread) + ")");
    }
    const double shift = -x1 / 3.0;
    if (spread <= 1e-300) {
        const double q = x3 - x1 * x2 / 3.0 + 2.0 * x1 * x1 * x1 / 27.0;
        if (std::abs(q) > 1e-12 * std::max(1.0, std::abs(x1 * x1 * x1))) {
            throw std::domain_error("cubic_roots: complex roots (one real root, depressed constant " + std::to_string(q) + ")");
        }
        return {shift, shift, shift};
    }

    const double radius = std::sqrt(spread);
    double arg = (9.0 * x1 * x2 - 2.0 * x1 * x1 * x1 - 27.0 * x3) / (2.0 * spread * radius);
    if (std::abs(arg) > 1.0 + 1e-6) {
        throw std::domain_error("cubic_roots: complex roots (cos^-1 argument " + std::to_string(arg) + ")");
    }
    arg = std::clamp(arg, -1.0, 1.0);
    const double angle = std::acos(arg) / 3.0;

    std::array<double, 3> mu{};
    for (int j = 0; j < 3; ++j) {
        mu[j] = shift + (2.0 / 3.0) * radius * std::cos(angle + 2.0 * std::numbers::pi * j / 3.0);
    }
    for (double& m : mu) {
        for (int it = 0; it < 3; ++it) {
            const double f = cubic_value(x1, x2, x3, m);
            const double df = (3.0 * m + 2.0 * x1) * m + x2;
            if (f == 0.0 || df == 0.0) break;
            const double next = m - f / df;
            if (!(std::abs(cubic_value(x1, x2, x3, next)) < std::abs(f))) break;
            m = next;
        }
    }
    std::sort(mu.begin(), mu.end());
    return mu;
}

struct AmplitudeTriple {
    cdouble A{0.0, 0.0};
    cdouble B{0.0, 0.0};
    cdouble C{0.0, 0.0};

    double norm_sq() const { return std::norm(A) + std::norm(B) + std::norm(C); }
    /// Population of the two lower levels, |B|^2 + |C|^2.
    double lower_population() const { return std::norm(B) + std::norm(C); }

    cdouble& operator[](std::size_t i) { return i == 0 ? A : (i == 1 ? B : C); }
    const cdouble& operator[](std::size_t i) const { return i == 0 ? A : (i == 1 ? B : C); }
};

/// Largest component-wise modulus of the difference.
inline double max_component_error(const AmplitudeTriple& a, const AmplitudeTriple& b) {
    return std::max({std::abs(a.A - b.A), std::abs(a.B - b.B), std::abs(a.C - b.C)});
}

/// A = cos(theta), B = 0, C = sin(theta) e^{i phi}.
inline AmplitudeTriple initial_triple(const ModelParams& p) {
    return {std::cos(p.theta), 0.0, std::sin(p.theta) * std::exp(cdouble{0.0, p.phi})};
}

/// Eigenfrequencies of H_n, ascending. The cubic is formed for H_n - (tr/3) I
/// and the shift added back: at large n the Kerr terms make the unshifted
/// coefficients cancel catastrophically around clustered roots.
inline std::array<double, 3> sector_eigenvalues(const SectorCoefficients& s) {
    const double shift = (s.v1 + s.v2 + s.v3) / 3.0;
    const CharacteristicCoefficients cc = characteristic(s, shift);
    std::array<double, 3> mu = cubic_roots(cc.x1, cc.x2, cc.x3);
    for (double& m : mu) m += shift;
    return mu;
}

/// Eigen-decomposition of one sector plus the projection of the initial triple.
struct SectorSolution {
    std::array<double, 3> mu{};  // ascending eigenfrequencies
    std::array<Vec3, 3> modes{};  // orthonormal eigenvectors, real for a real-symmetric generator
    std::array<cdouble, 3> weights{};
    bool used_fallback = false;

    /// psi(t) = sum_j w_j e^{-i mu_j t} modes_j
    AmplitudeTriple at(double t) const {
        AmplitudeTriple out;
        for (std::size_t j = 0; j < 3; ++j) {
            const cdouble c = weights[j] * std::exp(cdouble{0.0, -mu[j] * t});
            for (std::size_t i = 0; i < 3; ++i) out[i] += c * modes[j][i];
        }
        return out;
    }
};

namespace detail {

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Largest-magnitude component made positive.
inline void fix_sign(Vec3& v) {
    std::size_t big = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        if (std::abs(v[i]) > std::abs(v[big])) big = i;
    }
    if (v[big] < 0.0) {
        for (double& x : v) x = -x;
    }
}

// Null vector of (H - mu I) from the best-conditioned pair of rows.
inline Vec3 null_vector(const Mat3& h, double mu) {
    Mat3 m = h;
    for (std::size_t i = 0; i < 3; ++i) m[i][i] -= mu;
    const std::array<Vec3, 3> candidates{cross(m[0], m[1]), cross(m[0], m[2]), cross(m[1], m[2])};
    const Vec3* best = &candidates[0];
    for (const auto& c : candidates) {
        if (dot(c, c) > dot(*best, *best)) best = &c;
    }
    Vec3 v = *best;
    const double norm = std::sqrt(dot(v, v));
    for (double& x : v) x /= norm;
    fix_sign(v);
    return v;
}

// Orthonormal eigenvectors for distinct ascending eigenvalues. Only the most
// isolated eigenvalue goes through the cross product; the other two come from
// an exact 2x2 rotation in its orthogonal complement, so orthogonality holds
// to rounding regardless of how the remaining gap compares to the scale.
inline std::array<Vec3, 3> orthonormal_modes(const Mat3& h, const std::array<double, 3>& mu) {
    const bool low_isolated = (mu[1] - mu[0]) > (mu[2] - mu[1]);
    const std::size_t iso = low_isolated ? 0 : 2;
    const std::size_t lo = low_isolated ? 1 : 0;
    const std::size_t hi = low_isolated ? 2 : 1;

    const Vec3 w = null_vector(h, mu[iso]);
    // u: unit vector orthogonal to w built from its two largest components.
    Vec3 u{};
    if (std::abs(w[0]) > std::abs(w[1])) {
        const double inv = 1.0 / std::hypot(w[0], w[2]);
        u = {-w[2] * inv, 0.0, w[0] * inv};
    } else {
        const double inv = 1.0 / std::hypot(w[1], w[2]);
        u = {0.0, w[2] * inv, -w[1] * inv};
    }
    const Vec3 v = cross(w, u);

    auto apply = [&](const Vec3& x) {
        return Vec3{dot(h[0], x), dot(h[1], x), dot(h[2], x)};
    };
    const Vec3 hu = apply(u);
    const Vec3 hv = apply(v);
    const double a = dot(u, hu);
    const double b = dot(u, hv);
    const double c = dot(v, hv);
    const double angle = 0.5 * std::atan2(2.0 * b, a - c);
    const double cs = std::cos(angle);
    const double sn = std::sin(angle);

    std::array<Vec3, 3> modes{};
    modes[iso] = w;
    for (std::size_t i = 0; i < 3; ++i) {
        modes[hi][i] = cs * u[i] + sn * v[i];
        modes[lo][i] = -sn * u[i] + cs * v[i];
    }
    fix_sign(modes[lo]);
    fix_sign(modes[hi]);
    return modes;
}

}  // namespace detail

/// Relative root gap below which the dense eigen-solver takes over.
inline constexpr double kDegeneracyThreshold = 1e-7;

inline SectorSolution solve_sector(const ModelParams& p, std::size_t n) {
    const SectorCoefficients sc = sector_coefficients(p, n);
    const Mat3 h = generator(sc);
    SectorSolution sol;
    sol.mu = sector_eigenvalues(sc);
    const double gap = std::min(sol.mu[1] - sol.mu[0], sol.mu[2] - sol.mu[1]);
    const double x1 = sc.v1 + sc.v2 + sc.v3;

    if (gap < kDegeneracyThreshold * std::max(1.0, std::abs(x1))) {
        Eigen::Matrix3d m;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m(i, j) = h[i][j];
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
        for (int j = 0; j < 3; ++j) {
            sol.mu[j] = es.eigenvalues()(j);
            for (int i = 0; i < 3; ++i) sol.modes[j][i] = es.eigenvectors()(i, j);
            detail::fix_sign(sol.modes[j]);
        }
        sol.used_fallback = true;
    } else {
        const double shift = x1 / 3.0;
        Mat3 shifted = h;
        std::array<double, 3> mu_shifted = sol.mu;
        for (std::size_t i = 0; i < 3; ++i) {
            shifted[i][i] -= shift;
            mu_shifted[i] -= shift;
        }
        sol.modes = detail::orthonormal_modes(shifted, mu_shifted);
    }

    const AmplitudeTriple psi0 = initial_triple(p);
    for (std::size_t j = 0; j < 3; ++j) {
        sol.weights[j] = sol.modes[j][0] * psi0.A + sol.modes[j][1] * psi0.B + sol.modes[j][2] * psi0.C;
    }
    return sol;
}

inline AmplitudeTriple evolve_analytic(const ModelParams& p, std::size_t n, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("evolve_analytic: t must be >= 0");
    return solve_sector(p, n).at(t);
}

namespace detail {

// -i (H - shift I) psi
inline AmplitudeTriple schrodinger_rhs(const Mat3& h, double shift, const AmplitudeTriple& psi) {
    AmplitudeTriple out;
    for (std::size_t i = 0; i < 3; ++i) {
        cdouble acc = -shift * psi[i];
        for (std::size_t j = 0; j < 3; ++j) acc += h[i][j] * psi[j];
        out[i] = cdouble{acc.imag(), -acc.real()};
    }
    return out;
}

inline AmplitudeTriple axpy(const AmplitudeTriple& y, double a, const AmplitudeTriple& x) {
    return {y.A + a * x.A, y.B + a * x.B, y.C + a * x.C};
}

inline AmplitudeTriple rk4_step(const Mat3& h, double shift, const AmplitudeTriple& y, double dt) {
    const AmplitudeTriple k1 = schrodinger_rhs(h, shift, y);
    const AmplitudeTriple k2 = schrodinger_rhs(h, shift, axpy(y, dt / 2.0, k1));
    const AmplitudeTriple k3 = schrodinger_rhs(h, shift, axpy(y, dt / 2.0, k2));
    const AmplitudeTriple k4 = schrodinger_rhs(h, shift, axpy(y, dt, k3));
    AmplitudeTriple out;
    for (std::size_t i = 0; i < 3; ++i) out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace detail

/// Classic RK4 integration of the sector system, sampled at each of `times`
/// (must be ascending and >= 0). Each sample is reached exactly by shortening
/// the last step before it.
///
/// The generator is integrated in a frame shifted by tr(H)/3 and the scalar
/// phase e^{-i tr(H) t / 3} is restored on output; large Kerr shifts at high n
/// would otherwise dominate the RK4 phase error.
inline std::vector<AmplitudeTriple> evolve_ode_series(const ModelParams& p, std::size_t n, std::span<const double> times, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_ode: dt must be > 0");
    const Mat3 h = generator(sector_coefficients(p, n));
    const double shift = (h[0][0] + h[1][1] + h[2][2]) / 3.0;

    std::vector<AmplitudeTriple> out;
    out.reserve(times.size());
    AmplitudeTriple psi = initial_triple(p);
    double now = 0.0;
    for (const double target : times) {
        if (!(target >= now)) throw std::invalid_argument("evolve_ode: times must be ascending and >= 0");
        const double span_t = target - now;
        const auto full_steps = static_cast<long long>(std::floor(span_t / dt));
        for (long long s = 0; s < full_steps; ++s) psi = detail::rk4_step(h, shift, psi, dt);
        const double rest = span_t - static_cast<double>(full_steps) * dt;
        if (rest > 0.0) psi = detail::rk4_step(h, shift, psi, rest);
        now = target;

        const cdouble phase = std::exp(cdouble{0.0, -shift * target});
        out.push_back({psi.A * phase, psi.B * phase, psi.C * phase});
    }
    return out;
}

inline AmplitudeTriple evolve_ode(const ModelParams& p, std::size_t n, double t, double dt) {
    if (!(t >= 0.0)) throw std::invalid_argument("evolve_ode: t must be >= 0");
    const double times[] = {t};
    return evolve_ode_series(p, n, times, dt).front();
}

}  // namespace kerrlambda
