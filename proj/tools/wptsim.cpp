// SPDX-License-Identifier: Apache-2.0
//
// wptsim: run wireless-power-transfer control scenarios from JSON configs.
//
//   wptsim run --scenario fig2 --out results/
//   wptsim run --scenario fig4 --trials 200 --seed 7
//   wptsim validate --scenario my_scenario.json --set system.tau_s=2e-6
//
// Explicit ER layouts produce trace.csv and summary.json; distance
// distributions produce sweep.csv and summary.json. Output files are
// buffered in memory and written only after the run succeeds.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wpt/channel.hpp"
#include "wpt/common.hpp"
#include "wpt/experiments.hpp"
#include "wpt/kernels.hpp"
#include "wpt/params.hpp"
#include "wpt/power_control.hpp"
#include "wpt/retro.hpp"
#include "wpt/scenario.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Options {
    std::string scenario;
    std::string mode;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> iters;
    std::vector<std::string> overrides;
};

/// Loads the referenced document, applies --set overrides, then the
/// dedicated flags (which therefore win over --set).
json resolve_document(const Options& opts) {
    json doc = wpt::load_scenario_json(opts.scenario);
    for (const auto& assignment : opts.overrides) {
        wpt::apply_override(doc, assignment);
    }
    if (!opts.mode.empty()) {
        wpt::apply_override(doc, "control.measurement=" + opts.mode);
    }
    if (opts.seed.has_value()) {
        wpt::apply_override(doc, "seed=" + std::to_string(*opts.seed));
    }
    if (opts.trials.has_value()) {
        wpt::apply_override(doc, "control.trials=" + std::to_string(*opts.trials));
    }
    if (opts.iters.has_value()) {
        wpt::apply_override(doc, "control.n_iters=" + std::to_string(*opts.iters));
    }
    return doc;
}

std::string resolve_out_dir(const Options& opts) {
    if (!opts.out_dir.empty()) {
        return opts.out_dir;
    }
    if (const char* dir = std::getenv("WPTSIM_OUT_DIR")) {
        if (dir[0] != '\0') {
            return dir;
        }
    }
    return ".";
}

json run_metadata(const wpt::Scenario& sc) {
    json meta;
    meta["mode"] = wpt::measurement_mode_name(sc.mode);
    meta["seed"] = sc.seed;
    meta["kernel_backend"] = wpt::kernels::backend_name(wpt::kernels::active_backend());
    meta["p_init_w"] = wpt::initial_beacon_power(sc);
    return meta;
}

bool row_capped(double p_w, double p_max_w) { return p_w >= p_max_w * (1.0 - 1e-9); }

int cmd_run(const Options& opts) {
    const json doc = resolve_document(opts);
    const wpt::Scenario sc = wpt::scenario_from_json(doc);
    const auto violations = wpt::validate_scenario(sc);
    if (!violations.empty()) {
        for (const auto& v : violations) {
            std::cerr << "error: " << v << "\n";
        }
        return kExitValidation;
    }

    json summary;
    summary["scenario"] = wpt::scenario_to_json(sc);
    summary["metadata"] = run_metadata(sc);

    std::string csv_name;
    std::ostringstream csv;
    if (sc.distance_dist.has_value()) {
        const wpt::SweepResult res = wpt::run_full_sweep(sc);
        csv_name = "sweep.csv";
        csv << "target_w,scheme,pct_achieving,stddev\n";
        for (std::size_t i = 0; i < res.target_grid_w.size(); ++i) {
            for (const auto& curve : res.schemes) {
                csv << g17(res.target_grid_w[i]) << ',' << curve.scheme << ','
                    << g17(curve.pct_achieving[i]) << ',' << g17(curve.stddev[i]) << '\n';
            }
        }
        summary["kind"] = "sweep";
        summary["target_grid_w"] = res.target_grid_w;
        summary["n_trials"] = res.n_trials;
        json schemes = json::array();
        for (const auto& curve : res.schemes) {
            schemes.push_back({{"scheme", curve.scheme},
                               {"pct_achieving", curve.pct_achieving},
                               {"stddev", curve.stddev}});
        }
        summary["schemes"] = std::move(schemes);
    } else {
        const wpt::ControlTrace trace = wpt::run_convergence_scenario(sc);
        csv_name = "trace.csv";
        csv << "iteration,er_id,beacon_power_w,harvested_power_w,capped\n";
        for (const auto& rec : trace.iterations) {
            for (std::size_t k = 0; k < rec.p.size(); ++k) {
                csv << rec.block << ',' << k + 1 << ',' << g17(rec.p[k]) << ','
                    << g17(rec.q.q_total[k]) << ','
                    << (row_capped(rec.p[k], sc.params.p_max_w) ? 1 : 0) << '\n';
            }
        }
        summary["kind"] = "convergence";
        summary["converged"] = trace.converged;
        summary["iterations"] = trace.updates;
        summary["p_star_w"] = trace.p_star.watts;
        std::vector<std::size_t> capped_one_based;
        capped_one_based.reserve(trace.capped_set.size());
        for (std::size_t k : trace.capped_set) {
            capped_one_based.push_back(k + 1);
        }
        summary["capped_set"] = capped_one_based;
        if (sc.mode == wpt::MeasurementMode::asymptotic) {
            std::vector<double> betas;
            betas.reserve(sc.explicit_distances_m.size());
            for (double r : sc.explicit_distances_m) {
                betas.push_back(wpt::path_loss(sc.path_loss, r));
            }
            summary["q_at_p_star_w"] =
                wpt::harvested_power_asymptotic(betas, trace.p_star, sc.params).q_total;
        } else {
            summary["q_at_p_star_w"] = trace.iterations.back().q.q_total;
        }
    }

    namespace fs = std::filesystem;
    const fs::path out_dir = resolve_out_dir(opts);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw wpt::ValidationError("cannot create output directory '" + out_dir.string() +
                                   "': " + ec.message());
    }
    const auto write_file = [&](const fs::path& name, const std::string& text) {
        const fs::path path = out_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw wpt::ValidationError("cannot write '" + path.string() + "'");
        }
        out << text;
    };
    write_file(csv_name, csv.str());
    write_file("summary.json", summary.dump(2) + "\n");
    std::cout << "wrote " << (out_dir / csv_name).string() << " and "
              << (out_dir / "summary.json").string() << "\n";
    return kExitOk;
}

int cmd_validate(const Options& opts) {
    const json doc = resolve_document(opts);
    const wpt::Scenario sc = wpt::scenario_from_json(doc);

    std::ostringstream table;
    table << "scenario          " << (sc.name.empty() ? "(unnamed)" : sc.name) << "\n"
          << "m_t               " << sc.params.m_t << "\n"
          << "p_t_w             " << g17(sc.params.p_t_w) << "\n"
          << "p_max_w           " << g17(sc.params.p_max_w) << "\n"
          << "tau_s             " << g17(sc.params.tau_s) << "\n"
          << "n0_w_per_hz       " << g17(sc.params.n0_w_per_hz) << "\n"
          << "f_c_hz            " << g17(sc.params.f_c_hz) << "\n"
          << "path_loss c0      " << g17(sc.path_loss.c0) << "\n"
          << "path_loss r0_m    " << g17(sc.path_loss.r0_m) << "\n"
          << "path_loss alpha   " << g17(sc.path_loss.alpha) << "\n"
          << "measurement       " << wpt::measurement_mode_name(sc.mode) << "\n"
          << "redraw            " << wpt::channel_redraw_name(sc.redraw) << "\n"
          << "n_iters           " << sc.n_iters << "\n"
          << "trials            " << sc.n_trials << "\n"
          << "seed              " << sc.seed << "\n"
          << "p_init_w          " << g17(wpt::initial_beacon_power(sc)) << "\n";
    if (sc.distance_dist.has_value()) {
        table << "ers               " << sc.distance_dist->count << " at r ~ U("
              << g17(sc.distance_dist->r_lo_m) << ", " << g17(sc.distance_dist->r_hi_m)
              << ") m\n"
              << "target grid       " << sc.target_grid_w.size() << " points, "
              << g17(sc.target_grid_w.front()) << " .. " << g17(sc.target_grid_w.back())
              << " W\n";
    } else {
        table << "er  distance_m  beta  target_w  floor_w\n";
        for (std::size_t k = 0; k < sc.explicit_distances_m.size(); ++k) {
            const double r = sc.explicit_distances_m[k];
            const double beta = wpt::path_loss(sc.path_loss, r);
            const double target =
                k < sc.targets_w.size() ? sc.targets_w[k] : 0.0;
            table << k + 1 << "  " << g17(r) << "  " << g17(beta) << "  " << g17(target) << "  "
                  << g17(wpt::eta_for(sc.params, k) * sc.params.p_t_w * beta) << "\n";
        }
    }
    std::cout << table.str();

    const auto violations = wpt::validate_scenario(sc);
    if (!violations.empty()) {
        std::cout << "invalid: " << violations.size() << " violation(s)\n";
        for (const auto& v : violations) {
            std::cerr << "error: " << v << "\n";
        }
        return kExitValidation;
    }
    std::cout << "valid\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"retrodirective wireless power transfer simulator"};
    app.require_subcommand(1);

    Options opts;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", opts.scenario,
                        "scenario reference: file path, $WPTSIM_SCENARIO_DIR entry, or "
                        "built-in preset (fig2, fig3, fig4)")
            ->required();
        cmd->add_option("--mode", opts.mode,
                        "measurement model: asymptotic, exact, exact_per_block, exact_averaged");
        cmd->add_option("--seed", opts.seed, "RNG seed (overrides the scenario)");
        cmd->add_option("--trials", opts.trials, "Monte-Carlo trial count (overrides)");
        cmd->add_option("--iters", opts.iters, "update-iteration budget (overrides)");
        cmd->add_option("--set", opts.overrides,
                        "scenario override key.path=value (repeatable, applied in order)");
    };
    CLI::App* run = app.add_subcommand("run", "run a scenario and write trace/sweep outputs");
    add_common(run);
    run->add_option("--out", opts.out_dir,
                    "output directory (default: $WPTSIM_OUT_DIR, else the working directory)");
    CLI::App* validate =
        app.add_subcommand("validate", "parse a scenario, print the resolved parameter "
                                       "table, and check every invariant");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) {
            return cmd_run(opts);
        }
        return cmd_validate(opts);
    } catch (const wpt::UnknownScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const wpt::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
