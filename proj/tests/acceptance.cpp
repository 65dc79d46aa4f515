// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kerrlambda/kerrlambda.hpp"

namespace fs = std::filesystem;
using namespace kerrlambda;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %-34s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::array<double, 3> companion_roots(double x1, double x2, double x3) {
    Eigen::Matrix3d c;
    c << -x1, -x2, -x3, 1, 0, 0, 0, 1, 0;
    const Eigen::EigenSolver<Eigen::Matrix3d> es(c, false);
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) out[i] = es.eigenvalues()(i).real();
    std::sort(out.begin(), out.end());
    return out;
}

// Companion-matrix roots of det(mu I - H_n), formed for H_n - (tr/3) I from
// principal minors computed here, then shifted back.
std::array<double, 3> companion_sector_roots(const SectorCoefficients& sc) {
    Eigen::Matrix3d h;
    h << sc.v1, sc.g1, sc.g2, sc.g1, sc.v2, 0.0, sc.g2, 0.0, sc.v3;
    const double shift = h.trace() / 3.0;
    const Eigen::Matrix3d m = h - shift * Eigen::Matrix3d::Identity();
    const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                          m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    auto roots = companion_roots(-m.trace(), minors, -m.determinant());
    for (double& r : roots) r += shift;
    return roots;
}

// Peak-to-peak oscillation amplitude of `values` over consecutive windows of `width` in lambda*t.
std::vector<double> window_amplitude(const TimeSeries& s, double width) {
    std::vector<double> env;
    double lo = 0, hi = 0, edge = width;
    bool open = false;
    for (const auto& row : s.rows) {
        if (row.t_scaled >= edge) {
            env.push_back(hi - lo);
            open = false;
            edge += width;
        }
        if (!open) {
            lo = hi = row.dP2_over_k2;
            open = true;
        }
        lo = std::min(lo, row.dP2_over_k2);
        hi = std::max(hi, row.dP2_over_k2);
    }
    if (open) env.push_back(hi - lo);
    return env;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main() {
    const std::vector<std::string> panels{"fig2a", "fig2b", "fig2c"};

    criterion("analytic-oracle equivalence", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<double> times;
        for (int i = 1; i <= 20; ++i) times.push_back(static_cast<double>(i));  // lambda*t in (0, 20]
        double worst = 0.0;
        for (const auto& name : panels) {
            const ModelParams p = preset(name).resolved_model();
            for (std::size_t n = 0; n <= 40; ++n) {
                const SectorSolution sol = solve_sector(p, n);
                const auto ode = evolve_ode_series(p, n, times, 1e-4 / p.lambda1);
                for (std::size_t j = 0; j < times.size(); ++j) worst = std::max(worst, max_component_error(sol.at(times[j]), ode[j]));
            }
        }
        const double secs = elapsed_since(t0);
        return Outcome{worst < 1e-6 && secs < 60.0, "max |analytic - rk4| = " + fmt(worst) + " (< 1e-6), " + fmt(secs) + " s (< 60)"};
    });

    // The default sweep over lambda*t in [0, 50], shared by the trend criteria.
    const auto sweep_t0 = std::chrono::steady_clock::now();
    const SweepPreset sp = sweep_preset("fig2");
    const SweepResult sweep = run_kerr_sweep(sp.base, sp.chis);
    const double sweep_secs = elapsed_since(sweep_t0);

    criterion("unitarity", [&] {
        double closure = 0.0, sector = 0.0;
        for (const auto& s : sweep.series) {
            for (const auto& row : s.rows) closure = std::max(closure, std::abs(row.rho11 + row.rho22 + row.rho33 - 1.0));
            const ModelParams p = s.config_echo.resolved_model();
            for (std::size_t n = 0; n <= s.n_max; ++n) {
                const SectorSolution sol = solve_sector(p, n);
                for (const auto& row : s.rows) sector = std::max(sector, std::abs(sol.at(row.t_scaled / p.lambda1).norm_sq() - 1.0));
            }
        }
        return Outcome{closure < 1e-9 && sector < 1e-9,
                       "row closure " + fmt(closure) + ", sector norms " + fmt(sector) + " (< 1e-9)"};
    });

    criterion("conservation", [&] {
        double excitation = 0.0, momentum = 0.0;
        std::vector<TimeSeries> all = sweep.series;
        ExperimentConfig moving = preset("fig2b");
        moving.detuning = DetuningInputs{.omega1 = 0.0, .omega2 = 1.0, .omega3 = 1.3, .Omega = -1.0, .k = 0.5, .P0 = 1.0, .M = 2.0};
        moving.model.theta = 0.6;
        moving.model.phi = 0.5;
        all.push_back(run(moving));
        for (const auto& s : all) {
            const double k = s.config_echo.k();
            const double P0 = s.config_echo.P0();
            const auto& r0 = s.rows.front();
            const double ref = P0 + k * r0.dP_over_k + k * r0.n_mean;
            for (const auto& row : s.rows) {
                excitation = std::max(excitation, row.excitation_residual);
                momentum = std::max(momentum, std::abs(P0 + k * row.dP_over_k + k * row.n_mean - ref));
            }
        }
        return Outcome{excitation < 1e-8 && momentum < 1e-8,
                       "excitation residual " + fmt(excitation) + ", <P> + k<n> drift " + fmt(momentum) + " (< 1e-8)"};
    });

    criterion("cubic-root correctness", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::uniform_int_distribution<int> pick_n(0, 120);
        double residual = 0.0, vieta = 0.0, oracle = 0.0;
        for (int i = 0; i < 10000; ++i) {
            ModelParams p{.lambda1 = 0.1 + 2.0 * u(rng), .lambda2 = 0.1 + 2.0 * u(rng), .chi = u(rng),
                          .delta1 = 6.0 * (u(rng) - 0.5), .delta2 = 6.0 * (u(rng) - 0.5)};
            const SectorCoefficients sc = sector_coefficients(p, static_cast<std::size_t>(pick_n(rng)));
            const auto cc = characteristic(sc);
            const auto mu = sector_eigenvalues(sc);
            const double cube = std::max(1.0, std::pow(std::abs(cc.x1), 3));
            const double scale = std::max(1.0, std::abs(cc.x1));
            const auto ref = companion_sector_roots(sc);
            for (int j = 0; j < 3; ++j) {
                residual = std::max(residual, std::abs(cubic_value(cc.x1, cc.x2, cc.x3, mu[j])) / cube);
                oracle = std::max(oracle, std::abs(mu[j] - ref[j]) / scale);
            }
            vieta = std::max({vieta, std::abs(mu[0] + mu[1] + mu[2] + cc.x1) / scale,
                              std::abs(mu[0] * mu[1] + mu[0] * mu[2] + mu[1] * mu[2] - cc.x2) / std::max(1.0, std::abs(cc.x2)),
                              std::abs(mu[0] * mu[1] * mu[2] + cc.x3) / std::max(1.0, std::abs(cc.x3))});
        }
        const double secs = elapsed_since(t0);
        return Outcome{residual < 1e-9 && vieta < 1e-9 && oracle < 1e-9 && secs < 5.0,
                       "residual " + fmt(residual) + ", Vieta " + fmt(vieta) + ", companion " + fmt(oracle) + " (< 1e-9), " +
                           fmt(secs) + " s (< 5)"};
    });

    criterion("distribution sanity", [&] {
        const PhotonDistribution sq = build_distribution(FieldParams{});
        double sum = 0.0;
        for (double p : sq.probs()) sum += p;
        const PhotonDistribution coh = build_distribution(FieldParams::coherent(std::sqrt(5.0)));
        FieldParams tiny = FieldParams::coherent(std::sqrt(5.0));
        tiny.r = 1e-9;
        const PhotonDistribution near = build_distribution(tiny);
        double tv = 0.0;
        for (std::size_t n = 0; n < std::max(coh.size(), near.size()); ++n) {
            tv += std::abs((n < coh.size() ? coh[n] : 0.0) - (n < near.size() ? near[n] : 0.0));
        }
        tv /= 2.0;
        FieldParams vac;
        vac.alpha_mag = 0.0;
        vac.r = 1.0;
        const PhotonDistribution sv = build_distribution(vac);
        bool odd_zero = true;
        for (std::size_t n = 1; n < sv.size(); n += 2) odd_zero = odd_zero && sv[n] == 0.0;
        return Outcome{std::abs(sum - 1.0) < 1e-12 && tv < 1e-6 && odd_zero,
                       "|sum - 1| = " + fmt(std::abs(sum - 1.0)) + ", TV(r=1e-9, Poisson) = " + fmt(tv) +
                           ", odd zeros " + (odd_zero ? "exact" : "broken")};
    });

    criterion("fig2 Kerr trend", [&] {
        const auto& s = sweep.summaries;
        bool ok = sweep_secs < 30.0;
        std::string detail;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i > 0) ok = ok && s[i].min_dP_over_k >= s[i - 1].min_dP_over_k && s[i].max_dP2_over_k2 <= s[i - 1].max_dP2_over_k2;
            detail += "chi=" + format_number(s[i].chi) + ": min dP/k " + fmt(s[i].min_dP_over_k) + ", max dP2/k2 " +
                      format_number(s[i].max_dP2_over_k2) + "; ";
        }
        return Outcome{ok, detail + fmt(sweep_secs) + " s (< 30)"};
    });

    criterion("fig2 collapse-revival", [&] {
        const TimeSeries& weak = sweep.series.front();
        const std::vector<double> env = window_amplitude(weak, 2.0);
        const double peak = env.front();
        std::size_t collapse = 0;
        while (collapse < env.size() && env[collapse] >= peak / 2.0) ++collapse;
        std::size_t revival = env.size();
        for (std::size_t i = collapse + 1; i + 1 < env.size(); ++i) {
            if (env[i] >= env[i - 1] && env[i] >= env[i + 1] && env[i] > peak / 2.0) {
                revival = i;
                break;
            }
        }
        const bool ok = collapse < env.size() && revival < env.size();
        std::string detail = "initial amplitude " + fmt(peak);
        if (collapse < env.size()) detail += ", collapse to " + fmt(env[collapse]) + " at lambda*t " + fmt(2.0 * collapse);
        if (revival < env.size()) detail += ", revival " + fmt(env[revival]) + " at lambda*t " + fmt(2.0 * revival);
        return Outcome{ok, detail};
    });

    criterion("fig3 sub-Poissonian trend", [&] {
        const auto& s = sweep.summaries;
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i > 0) ok = ok && s[i].fraction_q_negative >= s[i - 1].fraction_q_negative;
            detail += "chi=" + format_number(s[i].chi) + ": " + fmt(s[i].fraction_q_negative) + "; ";
        }
        return Outcome{ok, "fraction Q<0 " + detail};
    });

    criterion("Mandel Q anchors", [&] {
        auto q0 = [](const PhotonDistribution& d) {
            std::vector<AmplitudeTriple> triples(d.size(), initial_triple(ModelParams{}));
            return *mandel_q(EvolvedState(d, std::move(triples), 0.0));
        };
        const double coherent = q0(build_distribution(FieldParams::coherent(std::sqrt(5.0))));
        const double fock = q0(PhotonDistribution::fock(7));
        const double squeezed = q0(build_distribution(FieldParams{}));

        // Oracle: direct summation of the closed-form P(n) moments, independent of build_distribution.
        const FieldParams fp;
        long double m0 = 0, m1 = 0, m2 = 0;
        for (std::size_t n = 0; n < 400; ++n) {
            const long double p = std::exp(static_cast<long double>(squeezed_log_pn(fp, n)));
            m0 += p;
            m1 += p * n;
            m2 += p * n * n;
        }
        m1 /= m0;
        m2 /= m0;
        const double oracle = static_cast<double>((m2 - m1 * m1 - m1) / m1);
        const double pinned = -0.190355937288491748;  // 50-digit evaluation
        const bool ok = std::abs(coherent) < 1e-9 && std::abs(fock + 1.0) < 1e-12 && std::abs(squeezed - oracle) < 1e-9 &&
                        std::abs(squeezed - pinned) < 1e-9;
        return Outcome{ok, "coherent " + fmt(coherent) + ", Fock " + format_number(fock) + ", squeezed " + format_number(squeezed) +
                               " vs oracle " + format_number(oracle)};
    });

    criterion("end-to-end determinism", [&] {
        const fs::path root = fs::temp_directory_path() / "kerrlambda_acceptance";
        fs::remove_all(root);
        for (const char* run_dir : {"a", "b"}) {
            const std::string cmd = std::string(KERRLAMBDA_CLI) + " sweep --preset fig2 --out " + (root / run_dir).string() + " > /dev/null";
            if (std::system(cmd.c_str()) != 0) return Outcome{false, "sweep command failed"};
        }
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(root / "a")) {
            const fs::path other = root / "b" / entry.path().filename();
            if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
                return Outcome{false, entry.path().filename().string() + " differs"};
            }
            ++files;
        }
        std::size_t svgs = 0;
        for (const auto& entry : fs::directory_iterator(root / "a")) svgs += entry.path().extension() == ".svg";
        return Outcome{files >= 4 && svgs == 3, std::to_string(files) + " files byte-identical (" + std::to_string(svgs) + " SVG)"};
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
