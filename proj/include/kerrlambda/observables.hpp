// observables.hpp - field and atomic-momentum observables of an evolved state

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrlambda/fock_distribution.hpp"
#include "kerrlambda/three_level_dynamics.hpp"

namespace kerrlambda {

/// Sector amplitudes at one time, weighted by the initial P(n).
class EvolvedState {
public:
    EvolvedState(PhotonDistribution dist, std::vector<AmplitudeTriple> triples, double t)
        : dist_(std::move(dist)), triples_(std::move(triples)), t_(t) {
        if (triples_.size() != dist_.size()) {
            throw std::invalid_argument("EvolvedState: " + std::to_string(triples_.size()) + " triples for " +
                                        std::to_string(dist_.size()) + " Fock indices");
        }
    }

    const PhotonDistribution& dist() const { return dist_; }
    const std::vector<AmplitudeTriple>& triples() const { return triples_; }
    double t() const { return t_; }

    /// Largest |norm - 1| over all sectors.
    double max_sector_norm_error() const {
        double worst = 0.0;
        for (const auto& tr : triples_) worst = std::max(worst, std::abs(tr.norm_sq() - 1.0));
        return worst;
    }

private:
    PhotonDistribution dist_;
    std::vector<AmplitudeTriple> triples_;
    double t_;
};

/// <S|S>, <T|T>, <U|U>; equal to the level populations rho11, rho22, rho33.
struct ComponentNorms {
    double sS = 0.0;
    double sT = 0.0;
    double sU = 0.0;

    double excited() const { return sT + sU; }
};

inline ComponentNorms component_norms(const EvolvedState& state) {
    ComponentNorms out;
    const auto& p = state.dist().probs();
    for (std::size_t n = 0; n < p.size(); ++n) {
        const auto& tr = state.triples()[n];
        out.sS += p[n] * std::norm(tr.A);
        out.sT += p[n] * std::norm(tr.B);
        out.sU += p[n] * std::norm(tr.C);
    }
    return out;
}

// Both use s = <T|T> + <U|U>, the probability that one photon was absorbed.
inline double momentum_increment(const EvolvedState& state, double k) {
    return -k * component_norms(state).excited();
}

inline double momentum_diffusion(const EvolvedState& state, double k) {
    const double s = component_norms(state).excited();
    return k * k * (s - s * s);
}

/// <n^power> = sum_n P(n) [n^power |A|^2 + (n+1)^power (|B|^2 + |C|^2)]
inline double photon_moment(const EvolvedState& state, unsigned power) {
    const auto& p = state.dist().probs();
    double acc = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        const auto& tr = state.triples()[n];
        const double nd = static_cast<double>(n);
        acc += p[n] * (std::pow(nd, power) * std::norm(tr.A) + std::pow(nd + 1.0, power) * tr.lower_population());
    }
    return acc;
}

/// <n> at or below this counts as the vacuum, where Q is undefined. The
/// eigen-expansion leaves ~1e-32 of rounding in an empty field.
inline constexpr double kVacuumMean = 1e-14;

/// Mandel Q with the variance <n^2> - <n>^2. Empty for the vacuum.
inline std::optional<double> mandel_q(const EvolvedState& state) {
    const double m1 = photon_moment(state, 1);
    if (!(m1 > kVacuumMean)) return std::nullopt;
    const double m2 = photon_moment(state, 2);
    return (m2 - m1 * m1 - m1) / m1;
}

/// <n> - (rho22 + rho33); constant under the evolution.
inline double excitation_number(const EvolvedState& state) {
    return photon_moment(state, 1) - component_norms(state).excited();
}

/// <P> + k <n> along the photon momentum, with <P> = P0 + <dP>.
inline double total_momentum(const EvolvedState& state, double k, double P0) {
    return P0 + momentum_increment(state, k) + k * photon_moment(state, 1);
}

struct ObservableRow {
    double t_scaled = 0.0;
    double s_excited = 0.0;
    double dP_over_k = 0.0;
    double dP2_over_k2 = 0.0;
    std::optional<double> q_mandel;
    double rho11 = 0.0;
    double rho22 = 0.0;
    double rho33 = 0.0;
    double n_mean = 0.0;
    double excitation_residual = 0.0;
};

/// Reduces a state to one output row. `reference_excitation` is the t = 0
/// value of excitation_number for the same initial state.
inline ObservableRow observable_row(const EvolvedState& state, double t_scaled, double reference_excitation) {
    const ComponentNorms c = component_norms(state);
    const double s = c.excited();
    const double m1 = photon_moment(state, 1);
    ObservableRow row;
    row.t_scaled = t_scaled;
    row.s_excited = s;
    row.dP_over_k = -s;
    row.dP2_over_k2 = s - s * s;
    row.q_mandel = mandel_q(state);
    row.rho11 = c.sS;
    row.rho22 = c.sT;
    row.rho33 = c.sU;
    row.n_mean = m1;
    row.excitation_residual = std::abs((m1 - s) - reference_excitation);
    return row;
}

}  // namespace kerrlambda
