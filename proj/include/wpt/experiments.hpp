// SPDX-License-Identifier: Apache-2.0
//
// Scenario runners. A scenario either fixes the ER layout (convergence
// traces) or draws it per trial from a distance distribution (fairness
// sweeps over a target grid, with the proposed power control compared
// against two fixed-beacon-power benchmark schemes).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wpt/power_control.hpp"

namespace wpt {

struct DistanceDistribution {
    double r_lo_m = 5.0;
    double r_hi_m = 15.0;
    std::size_t count = 1;
};

struct Scenario {
    std::string name;
    SystemParams params;
    PathLossModel path_loss;

    // Exactly one of the two layouts is set.
    std::vector<double> explicit_distances_m;
    std::optional<DistanceDistribution> distance_dist;

    std::vector<double> targets_w;      // per-ER targets (explicit layouts)
    std::vector<double> target_grid_w;  // sweep grid (distribution layouts)

    double p_init_fraction = 1.0;       // of P_max
    std::optional<double> p_init_w;     // absolute initial power, overrides the fraction
    int n_iters = 1000;
    int n_trials = 1;
    double tol = 1e-9;
    MeasurementMode mode = MeasurementMode::asymptotic;
    ChannelRedraw redraw = ChannelRedraw::per_block;
    int measurement_blocks = 1;
    int floor_blocks = 100;
    std::uint64_t seed = 0;
    int threads = 1;
};

/// Every invariant violation in the scenario, empty when valid.
std::vector<std::string> validate_scenario(const Scenario& sc);

/// Initial beacon power per ER (the fraction rule or the absolute value).
double initial_beacon_power(const Scenario& sc);

/// Runs the power-control loop on an explicit ER layout.
ControlTrace run_convergence_scenario(const Scenario& sc);

struct SchemeCurve {
    std::string scheme;
    std::vector<double> pct_achieving;  // mean over trials, one per grid target
    std::vector<double> stddev;         // per-trial standard deviation of the percentage
};

struct SweepResult {
    std::vector<double> target_grid_w;
    std::vector<SchemeCurve> schemes;
    int n_trials = 0;
    std::uint64_t seed = 0;
};

/// Proposed scheme only: per target and trial, draw distances, run n_iters
/// updates, count ERs whose harvested power meets the raw target.
SweepResult run_fairness_sweep(const Scenario& sc, const std::vector<double>& target_grid_w);

/// Benchmark scheme: every ER transmits fraction * P_max, no iteration.
SweepResult benchmark_fixed_power(const Scenario& sc, double fraction,
                                  const std::vector<double>& target_grid_w);

/// Proposed plus both fixed-power benchmarks (fractions 1 and 0.1) over the
/// scenario's grid (or the default grid when none is configured), sharing
/// per-trial layouts.
SweepResult run_full_sweep(const Scenario& sc);

/// 21 log-spaced targets from 1 uW to 1 mW.
std::vector<double> default_target_grid();

}  // namespace wpt
