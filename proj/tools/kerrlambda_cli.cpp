// kerrlambda - command-line front end for the Kerr-medium Lambda-atom simulator
//
//   kerrlambda run --config exp.json [--out dir] [--svg] [--pn]
//   kerrlambda run --preset fig2b
//   kerrlambda sweep --preset fig2 [--chis 0.001,0.2,0.6]
//   kerrlambda presets
//   kerrlambda validate --config exp.json
//
// Exit codes: 0 success, 1 config error, 2 runtime invariant violation, 3 I/O error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kerrlambda/kerrlambda.hpp"

namespace fs = std::filesystem;
using namespace kerrlambda;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitIo = 3;

const std::vector<std::string> kPlotQuantities{"dP_over_k", "dP2_over_k2", "q_mandel"};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void warn_saturation(const TimeSeries& s) {
    if (s.distribution_saturated) {
        std::cerr << "warning: " << s.config_echo.name << ": photon distribution hit n_cap = " << s.config_echo.field.n_cap
                  << " before the tail fell below epsilon_tail\n";
    }
}

void report(const TimeSeries& s) {
    const SweepSummary sum = summarize(s);
    std::cout << s.config_echo.name << ": " << s.rows.size() << " rows, n_max = " << s.n_max
              << ", min dP/k = " << format_number(sum.min_dP_over_k) << ", max dP2/k2 = " << format_number(sum.max_dP2_over_k2)
              << ", Q<0 fraction = " << format_number(sum.fraction_q_negative);
    if (s.max_oracle_error) std::cout << ", max oracle error = " << format_number(*s.max_oracle_error);
    std::cout << '\n';
}

ExperimentConfig resolve(const std::string& config_path, const std::string& preset_name) {
    if (!config_path.empty() && !preset_name.empty()) throw ConfigError("", "give either --config or --preset, not both");
    if (!config_path.empty()) return load_config(config_path);
    if (!preset_name.empty()) return preset(preset_name);
    throw ConfigError("", "a --config file or a --preset name is required");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moving Lambda atom in a Kerr cavity: momentum increment, diffusion and Mandel Q"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir = ".";
    bool emit_svg = false, emit_pn = false, force_oracle = false;
    unsigned threads = 0;
    std::vector<double> chis;

    auto* run_cmd = app.add_subcommand("run", "run one experiment and write <out>/<name>.csv");
    run_cmd->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    run_cmd->add_option("--preset", preset_name, "named preset (fig2a, fig2b, fig2c)");
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_flag("--svg", emit_svg, "also write <name>_<quantity>.svg plots");
    run_cmd->add_flag("--pn", emit_pn, "also write the initial photon distribution <name>_pn.csv");
    run_cmd->add_flag("--oracle", force_oracle, "cross-check against the RK4 oracle");
    run_cmd->add_option("--threads", threads, "worker threads (overrides the config)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Kerr-parameter sweep with CSV per chi, summary CSV and SVG plots");
    sweep_cmd->add_option("--preset", preset_name, "sweep preset (fig2, fig3)");
    sweep_cmd->add_option("--config", config_path, "base configuration instead of a preset")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--chis", chis, "comma-separated Kerr parameters")->delimiter(',');
    sweep_cmd->add_option("--out", out_dir, "output directory");
    sweep_cmd->add_flag("--pn", emit_pn, "also write the initial photon distribution");
    sweep_cmd->add_option("--threads", threads, "worker threads");

    auto* presets_cmd = app.add_subcommand("presets", "list the named presets with their full parameters");

    auto* validate_cmd = app.add_subcommand("validate", "check a configuration file");
    validate_cmd->add_option("--config", config_path, "JSON configuration file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*presets_cmd) {
            nlohmann::ordered_json listing;
            for (const auto& [name, chi] : figure_presets()) listing["run"][name] = config_to_json(preset(name));
            for (const std::string name : {"fig2", "fig3"}) {
                const SweepPreset sp = sweep_preset(name);
                listing["sweep"][name]["base"] = config_to_json(sp.base);
                listing["sweep"][name]["chis"] = sp.chis;
            }
            std::cout << listing.dump(2) << '\n';
            return 0;
        }

        if (*validate_cmd) {
            const ExperimentConfig cfg = load_config(config_path);
            std::cout << config_to_json(cfg).dump(2) << "\nok\n";
            return 0;
        }

        const fs::path out(out_dir);

        if (*run_cmd) {
            ExperimentConfig cfg = resolve(config_path, preset_name);
            if (force_oracle) cfg.oracle_check = true;
            if (threads > 0) cfg.threads = threads;
            const TimeSeries series = run(cfg);
            warn_saturation(series);
            ensure_dir(out);
            write_csv(series, out / (cfg.name + ".csv"));
            if (emit_pn) write_text(out / (cfg.name + "_pn.csv"), distribution_to_csv(build_distribution(cfg.field)));
            if (emit_svg) {
                for (const auto& q : kPlotQuantities) write_svg({series}, q, out / (cfg.name + "_" + q + ".svg"));
            }
            report(series);
            return 0;
        }

        if (*sweep_cmd) {
            ExperimentConfig base;
            std::vector<double> sweep_chis;
            if (!config_path.empty() && !preset_name.empty()) throw ConfigError("", "give either --config or --preset, not both");
            if (!config_path.empty()) {
                base = load_config(config_path);
                sweep_chis = sweep_preset("fig2").chis;
            } else {
                const SweepPreset sp = sweep_preset(preset_name.empty() ? "fig2" : preset_name);
                base = sp.base;
                sweep_chis = sp.chis;
            }
            if (!chis.empty()) sweep_chis = chis;
            if (threads > 0) base.threads = threads;

            const SweepResult result = run_kerr_sweep(base, sweep_chis);
            ensure_dir(out);
            for (const auto& s : result.series) {
                warn_saturation(s);
                write_csv(s, out / (s.config_echo.name + ".csv"));
                report(s);
            }
            if (emit_pn) write_text(out / (base.name + "_pn.csv"), distribution_to_csv(build_distribution(base.field)));
            write_text(out / (base.name + "_summary.csv"), summary_to_csv(result.summaries));
            for (const auto& q : kPlotQuantities) write_svg(result.series, q, out / (base.name + "_" + q + ".svg"));
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
