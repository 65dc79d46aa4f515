// fock_distribution.hpp - photon-number distribution of a squeezed coherent field
//
// P(n) = (tanh r / 2)^n / (n! cosh r) * |H_n(beta / sqrt(sinh 2r))|^2
//        * exp(-|beta|^2 + Re(beta^2) tanh r),   beta = alpha cosh r + alpha* sinh r
//
// Everything is evaluated in log space; at n ~ 150 the individual factors
// overflow a double long before P(n) itself becomes small.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrlambda/scaled_value.hpp"

namespace kerrlambda {

/// Below this squeeze parameter the coherent-state Poisson limit is used.
inline constexpr double kPoissonThreshold = 1e-8;

struct FieldParams {
    double alpha_mag = std::sqrt(5.0);  // |alpha|
    double xi = 0.0;                    // phase of alpha, radians
    double r = std::asinh(1.0);         // squeeze parameter
    double epsilon_tail = 1e-12;
    std::size_t n_cap = 512;

    static FieldParams coherent(double alpha_mag) {
        FieldParams fp;
        fp.alpha_mag = alpha_mag;
        fp.r = 0.0;
        return fp;
    }

    void validate() const {
        if (!(alpha_mag >= 0.0) || !std::isfinite(alpha_mag)) throw std::invalid_argument("alpha_sq: |alpha| must be finite and >= 0");
        if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("r: squeeze parameter must be finite and >= 0");
        if (!std::isfinite(xi)) throw std::invalid_argument("xi: phase must be finite");
        if (!(epsilon_tail > 0.0 && epsilon_tail < 1.0)) throw std::invalid_argument("epsilon_tail: must lie in (0, 1)");
        if (n_cap < 1) throw std::invalid_argument("n_cap: must be >= 1");
    }

    /// Mean photon number of the field, |alpha|^2 + sinh^2 r.
    double mean_photon_number() const {
        const double s = std::sinh(r);
        return alpha_mag * alpha_mag + s * s;
    }
};

/// Truncated, normalized P(n) for n = 0..n_max. Immutable once built.
class PhotonDistribution {
public:
    PhotonDistribution() = default;

    /// Normalizes `weights` (nonnegative, not all zero) into a distribution.
    static PhotonDistribution from_weights(std::vector<double> weights, double tail_mass = 0.0, bool saturated = false) {
        if (weights.empty()) throw std::invalid_argument("photon distribution needs at least one entry");
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("photon distribution weights must be finite and >= 0");
            total += w;
        }
        if (!(total > 0.0)) throw std::invalid_argument("photon distribution weights sum to zero");
        for (double& w : weights) w /= total;
        PhotonDistribution d;
        d.probs_ = std::move(weights);
        d.tail_mass_ = tail_mass;
        d.saturated_ = saturated;
        return d;
    }

    /// Pure Fock state |n>.
    static PhotonDistribution fock(std::size_t n) {
        std::vector<double> w(n + 1, 0.0);
        w[n] = 1.0;
        return from_weights(std::move(w));
    }

    const std::vector<double>& probs() const { return probs_; }
    double operator[](std::size_t n) const { return probs_[n]; }
    std::size_t size() const { return probs_.size(); }
    std::size_t n_max() const { return probs_.size() - 1; }
    /// Estimated probability mass beyond n_max before renormalization.
    double tail_mass() const { return tail_mass_; }
    /// True when n_cap was reached before the tail fell below epsilon_tail.
    bool saturated() const { return saturated_; }

    double moment(unsigned power) const {
        double acc = 0.0;
        for (std::size_t n = 0; n < probs_.size(); ++n) acc += probs_[n] * std::pow(static_cast<double>(n), power);
        return acc;
    }

private:
    std::vector<double> probs_;
    double tail_mass_ = 0.0;
    bool saturated_ = false;
};

namespace detail {

inline double log_cosh(double x) {
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

inline double log_poisson(double alpha_mag, std::size_t n) {
    const double mean = alpha_mag * alpha_mag;
    if (n == 0) return -mean;
    if (alpha_mag == 0.0) return -std::numeric_limits<double>::infinity();
    const double nd = static_cast<double>(n);
    return -mean + 2.0 * nd * std::log(alpha_mag) - std::lgamma(nd + 1.0);
}

}  // namespace detail

/// log of the unnormalized squeezed-state P(n). Requires r > kPoissonThreshold.
inline double squeezed_log_pn(const FieldParams& fp, std::size_t n) {
    if (!(fp.r > kPoissonThreshold)) {
        throw std::domain_error("squeezed_log_pn: r = " + std::to_string(fp.r) + " is in the Poisson regime");
    }
    const double r = fp.r;
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    const double th = std::tanh(r);
    const std::complex<double> alpha = std::polar(fp.alpha_mag, fp.xi);
    const std::complex<double> beta = alpha * ch + std::conj(alpha) * sh;
    const std::complex<double> z = beta / std::sqrt(std::sinh(2.0 * r));

    double log_h = 0.0;
    if (z.imag() == 0.0) {
        log_h = hermite_scaled(static_cast<unsigned>(n), z.real()).log_abs();
    } else {
        log_h = hermite_scaled(static_cast<unsigned>(n), z).log_abs();
    }
    if (std::isinf(log_h)) return -std::numeric_limits<double>::infinity();

    const double nd = static_cast<double>(n);
    const double gauss = -std::norm(beta) + (beta * beta).real() * th;
    return -std::lgamma(nd + 1.0) - detail::log_cosh(r) + nd * std::log(th / 2.0) + 2.0 * log_h + gauss;
}

/// Builds P(n), stopping once the geometric tail bound, weighted by (n+1)^2,
/// drops below epsilon_tail. The weight keeps the first two photon moments as
/// accurate as the mass itself.
///
/// Consecutive pairs (P(n-1) + P(n)) feed the ratio test so that the exact
/// parity zeros of squeezed vacuum do not stall it. The bound is only trusted
/// past the analytic mean photon number.
inline PhotonDistribution build_distribution(const FieldParams& fp) {
    fp.validate();
    const bool poisson = fp.r <= kPoissonThreshold;
    const double mean = fp.mean_photon_number();

    std::vector<double> weights;
    weights.reserve(std::min<std::size_t>(fp.n_cap + 1, 256));
    double tail = std::numeric_limits<double>::infinity();
    double running = 0.0;

    for (std::size_t n = 0; n <= fp.n_cap; ++n) {
        const double lp = poisson ? detail::log_poisson(fp.alpha_mag, n) : squeezed_log_pn(fp, n);
        const double p = std::exp(lp);
        weights.push_back(p);
        running += p;

        if (n < 3 || static_cast<double>(n) <= mean) continue;
        const double pair_now = weights[n] + weights[n - 1];
        const double pair_prev = weights[n - 2] + weights[n - 3];
        if (pair_now == 0.0) {
            tail = 0.0;
        } else if (pair_prev > 0.0 && pair_now < pair_prev) {
            const double ratio = pair_now / pair_prev;
            tail = pair_now * ratio / (1.0 - ratio);
        } else {
            continue;
        }
        const double weight = static_cast<double>(n + 1) * static_cast<double>(n + 1);
        if (tail * weight < fp.epsilon_tail) {
            return PhotonDistribution::from_weights(std::move(weights), tail, false);
        }
    }
    if (std::isinf(tail)) tail = std::max(0.0, 1.0 - running);
    return PhotonDistribution::from_weights(std::move(weights), tail, true);
}

}  // namespace kerrlambda
