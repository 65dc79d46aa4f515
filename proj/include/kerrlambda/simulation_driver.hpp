// simulation_driver.hpp - full experiments over a lambda*t grid and Kerr sweeps

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kerrlambda/fock_distribution.hpp"
#include "kerrlambda/number_format.hpp"
#include "kerrlambda/observables.hpp"
#include "kerrlambda/three_level_dynamics.hpp"

namespace kerrlambda {

/// Thrown when a conservation law or norm drifts past 10x its tolerance.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string name = "experiment";
    ModelParams model;
    std::optional<DetuningInputs> detuning;  // when set, overrides model.delta1/delta2
    FieldParams field;
    double t_max_scaled = 50.0;
    std::size_t n_time = 2001;
    bool oracle_check = false;
    double oracle_dt = 1e-4;  // in units of 1/lambda1
    unsigned threads = 1;

    void validate() const {
        model.validate();
        field.validate();
        if (detuning) detuning->validate();
        if (!(t_max_scaled > 0.0) || !std::isfinite(t_max_scaled)) throw std::invalid_argument("t_max_scaled: must be finite and > 0");
        if (n_time < 2) throw std::invalid_argument("n_time: must be >= 2");
        if (!(oracle_dt > 0.0) || !std::isfinite(oracle_dt)) throw std::invalid_argument("oracle_dt: must be finite and > 0");
    }

    /// Model with the detunings derived from the detuning block, if any.
    ModelParams resolved_model() const {
        ModelParams m = model;
        if (detuning) {
            const Detunings d = detunings(*detuning);
            m.delta1 = d.delta1;
            m.delta2 = d.delta2;
        }
        return m;
    }

    double k() const { return detuning ? detuning->k : 1.0; }
    double P0() const { return detuning ? detuning->P0 : 0.0; }

    double scaled_time(std::size_t i) const {
        return t_max_scaled * (static_cast<double>(i) / static_cast<double>(n_time - 1));
    }
};

struct TimeSeries {
    std::vector<ObservableRow> rows;
    ExperimentConfig config_echo;
    std::optional<double> max_oracle_error;
    bool distribution_saturated = false;
    std::size_t n_max = 0;
};

// Tolerances asserted by the test suite; run() aborts at 10x.
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kConservationTolerance = 1e-8;

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += threads) fn(i);
        });
    }
}

}  // namespace detail

/// Runs one experiment. Every time point is evaluated independently from the
/// per-sector eigen-decomposition, so results do not depend on the grid or
/// on the thread count.
inline TimeSeries run(const ExperimentConfig& config) {
    config.validate();
    const ModelParams model = config.resolved_model();
    const PhotonDistribution dist = build_distribution(config.field);
    const std::size_t sectors = dist.size();
    const double lambda = model.lambda1;
    const double k = config.k();
    const double P0 = config.P0();

    std::vector<SectorSolution> solutions(sectors);
    detail::parallel_for(sectors, config.threads, [&](std::size_t n) { solutions[n] = solve_sector(model, n); });

    std::vector<AmplitudeTriple> initial(sectors, initial_triple(model));
    const EvolvedState start(dist, std::move(initial), 0.0);
    const double reference_excitation = excitation_number(start);
    const double reference_momentum = total_momentum(start, k, P0);

    TimeSeries out;
    out.config_echo = config;
    out.distribution_saturated = dist.saturated();
    out.n_max = dist.n_max();
    out.rows.resize(config.n_time);
    std::vector<std::string> failures(config.n_time);

    detail::parallel_for(config.n_time, config.threads, [&](std::size_t i) {
        const double ts = config.scaled_time(i);
        const double t = ts / lambda;
        std::vector<AmplitudeTriple> triples(sectors);
        for (std::size_t n = 0; n < sectors; ++n) triples[n] = solutions[n].at(t);
        const EvolvedState state(dist, std::move(triples), t);
        ObservableRow row = observable_row(state, ts, reference_excitation);

        const double closure = std::abs(row.rho11 + row.rho22 + row.rho33 - 1.0);
        const double sector_norm = state.max_sector_norm_error();
        const double momentum_drift = std::abs(total_momentum(state, k, P0) - reference_momentum);
        if (closure > 10 * kNormTolerance || sector_norm > 10 * kNormTolerance) {
            failures[i] = "norm drift at lambda*t = " + std::to_string(ts);
        } else if (row.excitation_residual > 10 * kConservationTolerance || momentum_drift > 10 * kConservationTolerance) {
            failures[i] = "conservation drift at lambda*t = " + std::to_string(ts);
        }
        out.rows[i] = row;
    });
    for (const auto& f : failures) {
        if (!f.empty()) throw InvariantViolation(config.name + ": " + f);
    }

    if (config.oracle_check) {
        std::vector<std::size_t> checked;
        for (std::size_t i = 0; i < config.n_time; i += 10) checked.push_back(i);
        std::vector<double> times;
        for (std::size_t i : checked) times.push_back(config.scaled_time(i) / lambda);
        std::vector<std::size_t> oracle_sectors;
        for (std::size_t n = 0; n < sectors; n += 5) oracle_sectors.push_back(n);

        std::vector<double> worst(oracle_sectors.size(), 0.0);
        detail::parallel_for(oracle_sectors.size(), config.threads, [&](std::size_t s) {
            const std::size_t n = oracle_sectors[s];
            const auto ode = evolve_ode_series(model, n, times, config.oracle_dt / lambda);
            for (std::size_t j = 0; j < times.size(); ++j) {
                worst[s] = std::max(worst[s], max_component_error(ode[j], solutions[n].at(times[j])));
            }
        });
        out.max_oracle_error = worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
    }
    return out;
}

struct SweepSummary {
    double chi = 0.0;
    double min_dP_over_k = 0.0;
    double max_dP2_over_k2 = 0.0;
    double fraction_q_negative = 0.0;
};

inline SweepSummary summarize(const TimeSeries& series) {
    SweepSummary s;
    s.chi = series.config_echo.model.chi;
    s.min_dP_over_k = series.rows.front().dP_over_k;
    s.max_dP2_over_k2 = series.rows.front().dP2_over_k2;
    std::size_t negative = 0;
    for (const auto& row : series.rows) {
        s.min_dP_over_k = std::min(s.min_dP_over_k, row.dP_over_k);
        s.max_dP2_over_k2 = std::max(s.max_dP2_over_k2, row.dP2_over_k2);
        if (row.q_mandel && *row.q_mandel < 0.0) ++negative;
    }
    s.fraction_q_negative = static_cast<double>(negative) / static_cast<double>(series.rows.size());
    return s;
}

struct SweepResult {
    std::vector<TimeSeries> series;
    std::vector<SweepSummary> summaries;
};

/// One run per Kerr parameter, everything else taken from `base`.
inline SweepResult run_kerr_sweep(const ExperimentConfig& base, const std::vector<double>& chis) {
    if (chis.empty()) throw std::invalid_argument("run_kerr_sweep: empty chi list");
    SweepResult out;
    for (const double chi : chis) {
        ExperimentConfig cfg = base;
        cfg.model.chi = chi;
        cfg.name = base.name + "_chi" + format_number(chi);
        out.series.push_back(run(cfg));
        out.summaries.push_back(summarize(out.series.back()));
    }
    return out;
}

}  // namespace kerrlambda
