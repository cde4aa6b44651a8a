// SPDX-License-Identifier: Apache-2.0
//
// Distributed beacon power control. Each ER knows only its own target and
// its own harvested-power measurements; the update
//
//   p_k[n+1] = min{ P_max, (q_bar_k / q_k(p[n])) * p_k[n] }
//
// is run synchronously once per block. The module also provides the
// matrix form of the target inequalities and a centralized active-set
// oracle that computes the capped fixed point directly, used to verify
// the iteration's limit.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wpt/channel.hpp"
#include "wpt/common.hpp"
#include "wpt/params.hpp"
#include "wpt/retro.hpp"

namespace wpt {

enum class MeasurementMode { asymptotic, exact_per_block, exact_averaged };

enum class ChannelRedraw { per_block, fixed };

const char* measurement_mode_name(MeasurementMode mode);
const char* channel_redraw_name(ChannelRedraw redraw);

struct ErProfile {
    double distance_m = 0.0;      // 0 when the ER was specified by beta directly
    double beta = 0.0;            // large-scale gain
    double target_total_w = 0.0;  // harvested-power target Q_bar
    double target_beamed_w = 0.0; // Q_bar minus the isotropic floor
};

/// Builds a profile from a distance, deriving beta from the path-loss model
/// and the beamed target from the floor eta_k * P_t * beta.
ErProfile make_er_profile(double distance_m, double target_total_w, const PathLossModel& model,
                          const SystemParams& params, std::size_t k);

/// Same, with beta given directly.
ErProfile make_er_profile_from_beta(double beta, double target_total_w,
                                    const SystemParams& params, std::size_t k);

struct ControlScenario {
    SystemParams params;
    std::vector<ErProfile> ers;
    ChannelRedraw redraw = ChannelRedraw::per_block;
    int measurement_blocks = 1;  // sub-draws averaged per measurement (exact_averaged)
    int floor_blocks = 100;      // blocks averaged for the initial floor estimate
    std::uint64_t seed = 0;
};

struct IterationRecord {
    int block = 0;
    BeaconPowerVector p;
    HarvestReport q;
};

struct ControlTrace {
    std::vector<IterationRecord> iterations;
    int updates = 0;  // update steps actually applied
    bool converged = false;
    BeaconPowerVector p_star;
    std::vector<std::size_t> capped_set;  // 0-based ER indices with p_star at P_max
};

/// One synchronous update of every ER. Total: targets at or below zero pin
/// the ER to zero, a zero power stays zero, and a non-positive measurement
/// with a positive target drives the ER to P_max (unbounded ratio, capped).
BeaconPowerVector beacon_update_step(const BeaconPowerVector& p_n, std::span<const double> q_n,
                                     std::span<const double> q_bar, double p_max_w);

/// The harvested power an ER measures when nobody transmits a beacon.
/// Asymptotic mode returns eta_k * P_t * beta_k exactly; exact mode averages
/// measured power over scenario.floor_blocks seeded blocks.
double estimate_isotropic_floor(MeasurementMode mode, std::size_t er_index,
                                const ControlScenario& scenario);

/// Floor estimates for every ER at once (one channel draw per block).
std::vector<double> estimate_isotropic_floors(MeasurementMode mode,
                                              const ControlScenario& scenario);

/// Runs the update loop from p_init until the relative sup-norm change of p
/// falls to tol or max_iters blocks elapse. Entries of p_init must lie in
/// (0, P_max]; ERs whose effective beamed target is non-positive are pinned
/// to zero from the start.
ControlTrace run_distributed_control(const ControlScenario& scenario,
                                     const BeaconPowerVector& p_init, MeasurementMode mode,
                                     int max_iters = 1000, double tol = 1e-9);

struct FeasibilityMatrices {
    std::vector<double> a_diag;  // q_bar_k / (eta_k * P_t * (M_t - 1) * beta_k^2)
    std::vector<double> b;       // row-major K x K, column l constant beta_l
    std::vector<double> eta_vec; // all entries N0/tau
    std::size_t k = 0;
};

FeasibilityMatrices make_feasibility_matrices(std::span<const double> betas,
                                              std::span<const double> q_bar,
                                              const SystemParams& params);

/// The map p -> A(Bp + eta): beacon power ER k would need, with everyone
/// else held at p, for its beamed power to meet the target exactly.
std::vector<double> required_beacon_power(const FeasibilityMatrices& matrices,
                                          const BeaconPowerVector& p);

/// Per-ER test of p_k >= [A(Bp + eta)]_k, with relative slack for
/// fixed-point equality.
std::vector<bool> feasibility_check(const BeaconPowerVector& p,
                                    const FeasibilityMatrices& matrices,
                                    double rel_slack = 1e-9);

struct FixedPoint {
    BeaconPowerVector p_star;
    std::vector<std::size_t> capped_set;  // 0-based
};

/// Centralized solution of the capped fixed point. Requirements share the
/// common factor S = sum_l beta_l p_l + N0/tau, so the capped set is a
/// prefix of the ERs ordered by q_bar_k / (eta_k beta_k^2) descending; the
/// prefix sizes are scanned for the unique self-consistent one.
FixedPoint fixed_point_oracle(std::span<const double> betas, std::span<const double> q_bar,
                              const SystemParams& params);

}  // namespace wpt
