// SPDX-License-Identifier: Apache-2.0

#include "wpt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "wpt/rng.hpp"

namespace wpt {

namespace {

constexpr std::uint64_t kSaltTrial = 0x747269616Cull;  // "trial"

// An ER converged onto its target satisfies Q = Q_bar only up to roundoff,
// so the achievement count compares with relative slack.
constexpr double kAchieveRelSlack = 1e-9;

bool achieves(double q_w, double target_w) { return q_w >= target_w * (1.0 - kAchieveRelSlack); }

std::vector<double> draw_distances(const DistanceDistribution& dist, std::uint64_t trial_seed) {
    Philox4x32 rng(trial_seed, kStreamDistance);
    std::vector<double> distances(dist.count);
    for (auto& r : distances) {
        r = dist.r_lo_m + (dist.r_hi_m - dist.r_lo_m) * rng.next_double();
    }
    return distances;
}

std::string fraction_scheme_name(double fraction) {
    if (fraction == 1.0) {
        return "fixed_p_max";
    }
    std::ostringstream name;
    name << "fixed_" << fraction << "_p_max";
    return name.str();
}

struct SchemeSpec {
    std::string name;
    bool proposed = false;
    double fraction = 1.0;
};

std::vector<double> evaluate_harvest(const Scenario& sc, std::span<const double> betas,
                                     const BeaconPowerVector& p, std::uint64_t trial_seed,
                                     std::uint64_t block_salt) {
    if (sc.mode == MeasurementMode::asymptotic) {
        return harvested_power_asymptotic(betas, p, sc.params).q_total;
    }
    const std::uint64_t draw_seed = mix_seed(trial_seed, block_salt, 0);
    const ChannelRealization ch = draw_channel(sc.params, betas, draw_seed);
    const cvector noise = draw_beacon_noise(sc.params, draw_seed);
    return harvested_power_exact(ch, p, noise, sc.params).q_total;
}

SweepResult sweep_impl(const Scenario& sc, std::vector<double> grid,
                       const std::vector<SchemeSpec>& specs) {
    const auto violations = validate_scenario(sc);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "invalid scenario:";
        for (const auto& v : violations) {
            msg << "\n  - " << v;
        }
        throw ValidationError(msg.str());
    }
    if (!sc.distance_dist.has_value()) {
        throw ValidationError("fairness sweeps need a distance distribution, not explicit ERs");
    }
    if (grid.empty()) {
        grid = default_target_grid();
    }

    const DistanceDistribution dist = *sc.distance_dist;
    const std::size_t k_count = dist.count;
    const std::size_t n_targets = grid.size();
    const std::size_t n_trials = static_cast<std::size_t>(sc.n_trials);
    const double p0 = initial_beacon_power(sc);

    // pct[s][ti][t]: per-trial percentages, written to disjoint slots so the
    // aggregate is independent of thread scheduling.
    std::vector<std::vector<std::vector<double>>> pct(
        specs.size(), std::vector<std::vector<double>>(n_targets, std::vector<double>(n_trials)));

    const auto run_trial = [&](std::size_t t) {
        const std::uint64_t trial_seed = mix_seed(sc.seed, kSaltTrial, t);
        const std::vector<double> distances = draw_distances(dist, trial_seed);
        std::vector<double> betas(k_count);
        for (std::size_t k = 0; k < k_count; ++k) {
            betas[k] = path_loss(sc.path_loss, distances[k]);
        }

        for (std::size_t s = 0; s < specs.size(); ++s) {
            const SchemeSpec& spec = specs[s];
            if (!spec.proposed) {
                BeaconPowerVector p;
                p.watts.assign(k_count, spec.fraction * sc.params.p_max_w);
                const std::vector<double> q = evaluate_harvest(sc, betas, p, trial_seed, 1);
                for (std::size_t ti = 0; ti < n_targets; ++ti) {
                    std::size_t achieved = 0;
                    for (std::size_t k = 0; k < k_count; ++k) {
                        achieved += achieves(q[k], grid[ti]) ? 1 : 0;
                    }
                    pct[s][ti][t] = 100.0 * static_cast<double>(achieved) /
                                    static_cast<double>(k_count);
                }
                continue;
            }
            for (std::size_t ti = 0; ti < n_targets; ++ti) {
                ControlScenario cs;
                cs.params = sc.params;
                cs.redraw = sc.redraw;
                cs.measurement_blocks = sc.measurement_blocks;
                cs.floor_blocks = sc.floor_blocks;
                cs.seed = trial_seed;
                cs.ers.reserve(k_count);
                for (std::size_t k = 0; k < k_count; ++k) {
                    ErProfile er = make_er_profile_from_beta(betas[k], grid[ti], sc.params, k);
                    er.distance_m = distances[k];
                    // Targets below an ER's floor are already met; the beamed
                    // target clamps to zero and the ER never transmits.
                    er.target_beamed_w = std::max(0.0, er.target_beamed_w);
                    cs.ers.push_back(er);
                }
                BeaconPowerVector p_init;
                p_init.watts.assign(k_count, p0);
                // Achievement is scored at the iterate after exactly n_iters
                // updates, so the early-stop tolerance is disabled.
                const ControlTrace trace =
                    run_distributed_control(cs, p_init, sc.mode, sc.n_iters, 0.0);
                const std::vector<double> q = evaluate_harvest(
                    sc, betas, trace.p_star, trial_seed,
                    static_cast<std::uint64_t>(sc.n_iters) + 1);
                std::size_t achieved = 0;
                for (std::size_t k = 0; k < k_count; ++k) {
                    achieved += achieves(q[k], grid[ti]) ? 1 : 0;
                }
                pct[s][ti][t] = 100.0 * static_cast<double>(achieved) /
                                static_cast<double>(k_count);
            }
        }
    };

    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(sc.threads), n_trials);
    if (n_workers <= 1) {
        for (std::size_t t = 0; t < n_trials; ++t) {
            run_trial(t);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            workers.emplace_back([&] {
                for (std::size_t t = next.fetch_add(1); t < n_trials; t = next.fetch_add(1)) {
                    run_trial(t);
                }
            });
        }
        for (auto& worker : workers) {
            worker.join();
        }
    }

    SweepResult result;
    result.target_grid_w = std::move(grid);
    result.n_trials = sc.n_trials;
    result.seed = sc.seed;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        SchemeCurve curve;
        curve.scheme = specs[s].name;
        curve.pct_achieving.resize(n_targets);
        curve.stddev.resize(n_targets);
        for (std::size_t ti = 0; ti < n_targets; ++ti) {
            const auto& samples = pct[s][ti];
            double mean = 0.0;
            for (const double x : samples) {
                mean += x;
            }
            mean /= static_cast<double>(n_trials);
            double var = 0.0;
            if (n_trials > 1) {
                for (const double x : samples) {
                    var += (x - mean) * (x - mean);
                }
                var /= static_cast<double>(n_trials - 1);
            }
            curve.pct_achieving[ti] = mean;
            curve.stddev[ti] = std::sqrt(var);
        }
        result.schemes.push_back(std::move(curve));
    }
    return result;
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& sc) {
    std::vector<std::string> violations;
    for (const auto& v : check_params(sc.params)) {
        violations.push_back("system: " + v);
    }
    const auto model_violations = check_path_loss_model(sc.path_loss);
    for (const auto& v : model_violations) {
        violations.push_back("path_loss: " + v);
    }
    const bool model_ok = model_violations.empty();

    const bool has_explicit = !sc.explicit_distances_m.empty();
    const bool has_dist = sc.distance_dist.has_value();
    if (has_explicit == has_dist) {
        violations.push_back(
            "exactly one of explicit ER distances or a distance distribution must be set");
    }

    if (has_explicit) {
        const std::size_t k_count = sc.explicit_distances_m.size();
        if (sc.targets_w.size() != k_count) {
            std::ostringstream msg;
            msg << "targets: " << sc.targets_w.size() << " entries for " << k_count << " ERs";
            violations.push_back(msg.str());
        }
        if (!(sc.params.eta.size() == 1 || sc.params.eta.size() == k_count)) {
            violations.push_back("system: eta must have 1 entry or one per ER");
        }
        for (std::size_t k = 0; k < k_count; ++k) {
            const double r = sc.explicit_distances_m[k];
            if (!(r > 0.0)) {
                std::ostringstream msg;
                msg << "er " << k + 1 << ": distance must be > 0, got " << r;
                violations.push_back(msg.str());
                continue;
            }
            if (!model_ok || sc.targets_w.size() != k_count) {
                continue;
            }
            const double target = sc.targets_w[k];
            if (!(target >= 0.0)) {
                std::ostringstream msg;
                msg << "er " << k + 1 << ": target must be >= 0, got " << target;
                violations.push_back(msg.str());
                continue;
            }
            const double beta = path_loss(sc.path_loss, r);
            const std::size_t eta_idx = sc.params.eta.size() == 1 ? 0 : k;
            if (eta_idx < sc.params.eta.size() && sc.params.p_t_w > 0.0) {
                const double floor = sc.params.eta[eta_idx] * sc.params.p_t_w * beta;
                if (target < floor) {
                    std::ostringstream msg;
                    msg << "er " << k + 1 << ": target " << target
                        << " W is below the isotropic floor " << floor << " W";
                    violations.push_back(msg.str());
                }
            }
        }
        if (!sc.target_grid_w.empty()) {
            violations.push_back("targets: a sweep grid needs a distance distribution");
        }
    }

    if (has_dist) {
        const DistanceDistribution& dist = *sc.distance_dist;
        if (!(dist.r_lo_m > 0.0)) {
            violations.push_back("distance distribution: r_lo_m must be > 0");
        }
        if (!(dist.r_hi_m >= dist.r_lo_m)) {
            violations.push_back("distance distribution: r_hi_m must be >= r_lo_m");
        }
        if (dist.count < 1) {
            violations.push_back("distance distribution: count must be >= 1");
        }
        if (!(sc.params.eta.size() == 1 || sc.params.eta.size() == dist.count)) {
            violations.push_back("system: eta must have 1 entry or one per ER");
        }
        if (!sc.targets_w.empty()) {
            violations.push_back("targets: per-ER targets need explicit ER distances");
        }
        for (std::size_t i = 0; i < sc.target_grid_w.size(); ++i) {
            if (!(sc.target_grid_w[i] > 0.0)) {
                std::ostringstream msg;
                msg << "targets: grid entry " << i + 1 << " must be > 0, got "
                    << sc.target_grid_w[i];
                violations.push_back(msg.str());
            }
        }
    }

    if (sc.n_iters < 1) {
        violations.push_back("control: n_iters must be >= 1");
    }
    if (sc.n_trials < 1) {
        violations.push_back("control: trials must be >= 1");
    }
    if (!(sc.tol >= 0.0)) {
        violations.push_back("control: tol must be >= 0");
    }
    if (sc.measurement_blocks < 1) {
        violations.push_back("control: measurement_blocks must be >= 1");
    }
    if (sc.floor_blocks < 1) {
        violations.push_back("control: floor_blocks must be >= 1");
    }
    if (sc.threads < 1) {
        violations.push_back("control: threads must be >= 1");
    }
    if (sc.p_init_w.has_value()) {
        if (!(*sc.p_init_w > 0.0) || *sc.p_init_w > sc.params.p_max_w) {
            std::ostringstream msg;
            msg << "control: p_init_w must lie in (0, P_max], got " << *sc.p_init_w;
            violations.push_back(msg.str());
        }
    } else if (!(sc.p_init_fraction > 0.0) || sc.p_init_fraction > 1.0) {
        std::ostringstream msg;
        msg << "control: p_init_fraction_of_p_max must lie in (0, 1], got "
            << sc.p_init_fraction;
        violations.push_back(msg.str());
    }
    return violations;
}

double initial_beacon_power(const Scenario& sc) {
    return sc.p_init_w.has_value() ? *sc.p_init_w : sc.p_init_fraction * sc.params.p_max_w;
}

ControlTrace run_convergence_scenario(const Scenario& sc) {
    const auto violations = validate_scenario(sc);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "invalid scenario:";
        for (const auto& v : violations) {
            msg << "\n  - " << v;
        }
        throw ValidationError(msg.str());
    }
    if (sc.explicit_distances_m.empty()) {
        throw ValidationError("convergence scenarios need explicit ER distances");
    }
    ControlScenario cs;
    cs.params = sc.params;
    cs.redraw = sc.redraw;
    cs.measurement_blocks = sc.measurement_blocks;
    cs.floor_blocks = sc.floor_blocks;
    cs.seed = sc.seed;
    cs.ers.reserve(sc.explicit_distances_m.size());
    for (std::size_t k = 0; k < sc.explicit_distances_m.size(); ++k) {
        cs.ers.push_back(make_er_profile(sc.explicit_distances_m[k], sc.targets_w[k],
                                         sc.path_loss, sc.params, k));
    }
    BeaconPowerVector p_init;
    p_init.watts.assign(cs.ers.size(), initial_beacon_power(sc));
    return run_distributed_control(cs, p_init, sc.mode, sc.n_iters, sc.tol);
}

SweepResult run_fairness_sweep(const Scenario& sc, const std::vector<double>& target_grid_w) {
    return sweep_impl(sc, target_grid_w, {{"proposed", true, 0.0}});
}

SweepResult benchmark_fixed_power(const Scenario& sc, double fraction,
                                  const std::vector<double>& target_grid_w) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        std::ostringstream msg;
        msg << "benchmark fraction must lie in (0, 1], got " << fraction;
        throw ValidationError(msg.str());
    }
    return sweep_impl(sc, target_grid_w, {{fraction_scheme_name(fraction), false, fraction}});
}

SweepResult run_full_sweep(const Scenario& sc) {
    return sweep_impl(sc, sc.target_grid_w,
                      {{"proposed", true, 0.0},
                       {fraction_scheme_name(1.0), false, 1.0},
                       {fraction_scheme_name(0.1), false, 0.1}});
}

std::vector<double> default_target_grid() {
    std::vector<double> grid(21);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = std::pow(10.0, -6.0 + 3.0 * static_cast<double>(i) / 20.0);
    }
    return grid;
}

}  // namespace wpt
