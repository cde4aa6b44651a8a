// SPDX-License-Identifier: Apache-2.0

#include "wpt/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wpt/rng.hpp"

namespace wpt {

namespace {

// Guards the relative-change denominator when an entry converges to zero.
constexpr double kPowerFloorW = 1e-30;
// Entries within this relative distance of P_max count as capped.
constexpr double kCapRelTol = 1e-9;

std::vector<double> betas_of(const std::vector<ErProfile>& ers) {
    std::vector<double> betas(ers.size());
    for (std::size_t k = 0; k < ers.size(); ++k) {
        betas[k] = ers[k].beta;
    }
    return betas;
}

std::vector<std::size_t> capped_indices(const BeaconPowerVector& p, double p_max_w) {
    std::vector<std::size_t> capped;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] >= p_max_w * (1.0 - kCapRelTol)) {
            capped.push_back(k);
        }
    }
    return capped;
}

class ExactMeasurer {
public:
    ExactMeasurer(const ControlScenario& sc, std::vector<double> betas)
        : sc_(sc), betas_(std::move(betas)) {
        if (sc.redraw == ChannelRedraw::fixed) {
            fixed_ch_ = draw_channel(sc.params, betas_, mix_seed(sc.seed, 0, 0));
        }
    }

    /// Mean harvested power over `sub_draws` (channel, noise) draws addressed
    /// by (scenario seed, salt, sub-draw index).
    std::vector<double> measure(const BeaconPowerVector& p, std::uint64_t salt,
                                int sub_draws) const {
        std::vector<double> q_total(betas_.size(), 0.0);
        for (int j = 0; j < sub_draws; ++j) {
            const std::uint64_t draw_seed = mix_seed(sc_.seed, salt, static_cast<std::uint64_t>(j));
            const cvector noise = draw_beacon_noise(sc_.params, draw_seed);
            HarvestReport rep;
            if (fixed_ch_.has_value()) {
                rep = harvested_power_exact(*fixed_ch_, p, noise, sc_.params);
            } else {
                const ChannelRealization ch = draw_channel(sc_.params, betas_, draw_seed);
                rep = harvested_power_exact(ch, p, noise, sc_.params);
            }
            for (std::size_t k = 0; k < q_total.size(); ++k) {
                q_total[k] += rep.q_total[k];
            }
        }
        for (auto& q : q_total) {
            q /= static_cast<double>(sub_draws);
        }
        return q_total;
    }

private:
    const ControlScenario& sc_;
    std::vector<double> betas_;
    std::optional<ChannelRealization> fixed_ch_;
};

}  // namespace

const char* measurement_mode_name(MeasurementMode mode) {
    switch (mode) {
        case MeasurementMode::asymptotic:
            return "asymptotic";
        case MeasurementMode::exact_per_block:
            return "exact_per_block";
        case MeasurementMode::exact_averaged:
            return "exact_averaged";
    }
    return "unknown";
}

const char* channel_redraw_name(ChannelRedraw redraw) {
    return redraw == ChannelRedraw::fixed ? "fixed" : "per_block";
}

ErProfile make_er_profile(double distance_m, double target_total_w, const PathLossModel& model,
                          const SystemParams& params, std::size_t k) {
    ErProfile er;
    er.distance_m = distance_m;
    er.beta = path_loss(model, distance_m);
    er.target_total_w = target_total_w;
    er.target_beamed_w = target_total_w - eta_for(params, k) * params.p_t_w * er.beta;
    return er;
}

ErProfile make_er_profile_from_beta(double beta, double target_total_w,
                                    const SystemParams& params, std::size_t k) {
    ErProfile er;
    er.distance_m = 0.0;
    er.beta = beta;
    er.target_total_w = target_total_w;
    er.target_beamed_w = target_total_w - eta_for(params, k) * params.p_t_w * beta;
    return er;
}

BeaconPowerVector beacon_update_step(const BeaconPowerVector& p_n, std::span<const double> q_n,
                                     std::span<const double> q_bar, double p_max_w) {
    const std::size_t k_count = p_n.size();
    if (q_n.size() != k_count || q_bar.size() != k_count) {
        std::ostringstream msg;
        msg << "beacon_update_step length mismatch: p " << k_count << ", q " << q_n.size()
            << ", q_bar " << q_bar.size();
        throw ValidationError(msg.str());
    }
    BeaconPowerVector next;
    next.watts.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        if (q_bar[k] <= 0.0 || p_n[k] <= 0.0) {
            next[k] = 0.0;
        } else if (q_n[k] <= 0.0) {
            next[k] = p_max_w;
        } else {
            next[k] = std::min(p_max_w, (q_bar[k] / q_n[k]) * p_n[k]);
        }
    }
    return next;
}

std::vector<double> estimate_isotropic_floors(MeasurementMode mode,
                                              const ControlScenario& scenario) {
    const std::size_t k_count = scenario.ers.size();
    std::vector<double> floors(k_count, 0.0);
    if (mode == MeasurementMode::asymptotic) {
        for (std::size_t k = 0; k < k_count; ++k) {
            floors[k] = eta_for(scenario.params, k) * scenario.params.p_t_w * scenario.ers[k].beta;
        }
        return floors;
    }
    if (scenario.floor_blocks < 1) {
        throw ValidationError("floor_blocks must be >= 1 for exact-mode floor estimation");
    }
    const ExactMeasurer measurer(scenario, betas_of(scenario.ers));
    BeaconPowerVector zero;
    zero.watts.assign(k_count, 0.0);
    return measurer.measure(zero, kStreamFloor, scenario.floor_blocks);
}

double estimate_isotropic_floor(MeasurementMode mode, std::size_t er_index,
                                const ControlScenario& scenario) {
    return estimate_isotropic_floors(mode, scenario).at(er_index);
}

ControlTrace run_distributed_control(const ControlScenario& scenario,
                                     const BeaconPowerVector& p_init, MeasurementMode mode,
                                     int max_iters, double tol) {
    validate_params(scenario.params);
    const std::size_t k_count = scenario.ers.size();
    if (k_count == 0) {
        throw ValidationError("scenario has no ERs");
    }
    if (p_init.size() != k_count) {
        std::ostringstream msg;
        msg << "p_init has " << p_init.size() << " entries for " << k_count << " ERs";
        throw ValidationError(msg.str());
    }
    const double p_max = scenario.params.p_max_w;
    for (std::size_t k = 0; k < k_count; ++k) {
        if (!(p_init[k] > 0.0) || p_init[k] > p_max) {
            std::ostringstream msg;
            msg << "p_init at ER " << k + 1 << " is " << p_init[k]
                << " W; the update requires 0 < p_init <= P_max = " << p_max << " W";
            throw ValidationError(msg.str());
        }
        if (scenario.ers[k].target_beamed_w < 0.0) {
            std::ostringstream msg;
            msg << "ER " << k + 1 << " has beamed target " << scenario.ers[k].target_beamed_w
                << " W; targets below the isotropic floor are not allowed";
            throw ValidationError(msg.str());
        }
    }
    if (max_iters < 1) {
        throw ValidationError("max_iters must be >= 1");
    }
    if (!(tol >= 0.0)) {
        throw ValidationError("tol must be >= 0");
    }
    if (mode == MeasurementMode::exact_averaged && scenario.measurement_blocks < 1) {
        throw ValidationError("measurement_blocks must be >= 1 in exact_averaged mode");
    }

    const std::vector<double> betas = betas_of(scenario.ers);
    const std::vector<double> floors = estimate_isotropic_floors(mode, scenario);

    // The controller's view: targets and measurements are both taken
    // relative to the floor it estimated in block 0.
    std::vector<double> q_bar_eff(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        q_bar_eff[k] = mode == MeasurementMode::asymptotic
                           ? scenario.ers[k].target_beamed_w
                           : scenario.ers[k].target_total_w - floors[k];
    }

    std::optional<ExactMeasurer> measurer;
    if (mode != MeasurementMode::asymptotic) {
        measurer.emplace(scenario, betas);
    }
    const int sub_draws = mode == MeasurementMode::exact_averaged ? scenario.measurement_blocks : 1;

    const auto measure = [&](const BeaconPowerVector& p, int block) -> HarvestReport {
        if (mode == MeasurementMode::asymptotic) {
            return harvested_power_asymptotic(betas, p, scenario.params);
        }
        HarvestReport rep;
        rep.model = HarvestModel::exact;
        rep.q_total = measurer->measure(p, static_cast<std::uint64_t>(block), sub_draws);
        rep.q_beamed.resize(k_count);
        for (std::size_t k = 0; k < k_count; ++k) {
            rep.q_beamed[k] = rep.q_total[k] - floors[k];
        }
        return rep;
    };

    BeaconPowerVector p = p_init;
    for (std::size_t k = 0; k < k_count; ++k) {
        if (q_bar_eff[k] <= 0.0) {
            p[k] = 0.0;
        }
    }

    ControlTrace trace;
    for (int n = 1; n <= max_iters; ++n) {
        const HarvestReport rep = measure(p, n);
        trace.iterations.push_back({n, p, rep});
        if (mode != MeasurementMode::asymptotic) {
            for (std::size_t k = 0; k < k_count; ++k) {
                if (p[k] > 0.0 && q_bar_eff[k] > 0.0 && rep.q_beamed[k] <= 0.0) {
                    std::ostringstream msg;
                    msg << "ER " << k + 1 << " measured non-positive beamed power "
                        << rep.q_beamed[k] << " W in block " << n
                        << "; the multiplicative update has no valid ratio";
                    throw MeasurementDegenerateError(k, n, msg.str());
                }
            }
        }
        const BeaconPowerVector p_next =
            beacon_update_step(p, rep.q_beamed, q_bar_eff, p_max);
        trace.updates = n;
        double rel_change = 0.0;
        for (std::size_t k = 0; k < k_count; ++k) {
            const double denom = std::max(p_next[k], kPowerFloorW);
            rel_change = std::max(rel_change, std::abs(p_next[k] - p[k]) / denom);
        }
        if (rel_change <= tol) {
            trace.converged = true;
            trace.p_star = p_next;
            if (p_next.watts != p.watts) {
                trace.iterations.push_back({n + 1, p_next, measure(p_next, n + 1)});
            }
            break;
        }
        p = p_next;
    }
    if (!trace.converged) {
        trace.p_star = p;
    }
    trace.capped_set = capped_indices(trace.p_star, p_max);
    return trace;
}

FeasibilityMatrices make_feasibility_matrices(std::span<const double> betas,
                                              std::span<const double> q_bar,
                                              const SystemParams& params) {
    validate_params(params);
    const std::size_t k_count = betas.size();
    if (q_bar.size() != k_count) {
        throw ValidationError("betas and q_bar must have the same length");
    }
    FeasibilityMatrices m;
    m.k = k_count;
    m.a_diag.resize(k_count);
    m.b.resize(k_count * k_count);
    m.eta_vec.assign(k_count, noise_variance(params));
    const double gain = params.p_t_w * static_cast<double>(params.m_t - 1);
    for (std::size_t k = 0; k < k_count; ++k) {
        if (q_bar[k] < 0.0) {
            std::ostringstream msg;
            msg << "q_bar[" << k << "] is negative";
            throw ValidationError(msg.str());
        }
        if (q_bar[k] > 0.0) {
            if (!(betas[k] > 0.0)) {
                std::ostringstream msg;
                msg << "ER " << k + 1 << " has a positive beamed target but beta = " << betas[k];
                throw ValidationError(msg.str());
            }
            if (params.m_t < 2) {
                throw ValidationError(
                    "beamed-power targets require at least 2 ET antennas (M_t >= 2)");
            }
        }
        m.a_diag[k] = q_bar[k] <= 0.0 ? 0.0
                                      : q_bar[k] / (eta_for(params, k) * gain * betas[k] *
                                                    betas[k]);
        for (std::size_t l = 0; l < k_count; ++l) {
            m.b[k * k_count + l] = betas[l];
        }
    }
    return m;
}

std::vector<double> required_beacon_power(const FeasibilityMatrices& matrices,
                                          const BeaconPowerVector& p) {
    if (p.size() != matrices.k) {
        throw ValidationError("beacon power vector does not match the matrices' ER count");
    }
    std::vector<double> required(matrices.k);
    for (std::size_t k = 0; k < matrices.k; ++k) {
        double interference = matrices.eta_vec[k];
        for (std::size_t l = 0; l < matrices.k; ++l) {
            interference += matrices.b[k * matrices.k + l] * p[l];
        }
        required[k] = matrices.a_diag[k] * interference;
    }
    return required;
}

std::vector<bool> feasibility_check(const BeaconPowerVector& p,
                                    const FeasibilityMatrices& matrices, double rel_slack) {
    const std::vector<double> required = required_beacon_power(matrices, p);
    std::vector<bool> ok(matrices.k);
    for (std::size_t k = 0; k < matrices.k; ++k) {
        ok[k] = p[k] >= required[k] * (1.0 - rel_slack);
    }
    return ok;
}

FixedPoint fixed_point_oracle(std::span<const double> betas, std::span<const double> q_bar,
                              const SystemParams& params) {
    validate_params(params);
    const std::size_t k_count = betas.size();
    if (q_bar.size() != k_count) {
        throw ValidationError("betas and q_bar must have the same length");
    }
    for (std::size_t k = 0; k < k_count; ++k) {
        if (q_bar[k] < 0.0) {
            std::ostringstream msg;
            msg << "q_bar[" << k << "] is negative";
            throw ValidationError(msg.str());
        }
    }
    const double p_max = params.p_max_w;
    FixedPoint fp;
    fp.p_star.watts.assign(k_count, 0.0);

    const double gain = params.p_t_w * static_cast<double>(params.m_t - 1);
    if (params.m_t < 2) {
        // No beamforming gain at all: any positive requirement is
        // unreachable and drives the ER to the cap.
        for (std::size_t k = 0; k < k_count; ++k) {
            fp.p_star[k] = q_bar[k] > 0.0 ? p_max : 0.0;
        }
        fp.capped_set = capped_indices(fp.p_star, p_max);
        return fp;
    }

    // Requirements share the factor S = sum_l beta_l p_l + N0/tau, so the
    // capped set is a prefix of the ERs ordered by rho = q_bar/(eta beta^2).
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> rho(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        if (q_bar[k] <= 0.0) {
            rho[k] = -1.0;
        } else if (betas[k] <= 0.0) {
            rho[k] = kInf;
        } else {
            rho[k] = q_bar[k] / (eta_for(params, k) * betas[k] * betas[k]);
        }
    }
    std::vector<std::size_t> order(k_count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rho[a] > rho[b]; });

    std::size_t forced = 0;
    std::size_t eligible = 0;
    for (std::size_t k = 0; k < k_count; ++k) {
        forced += rho[k] == kInf ? 1 : 0;
        eligible += rho[k] > 0.0 ? 1 : 0;
    }

    for (std::size_t c = forced; c <= eligible; ++c) {
        double sigma = 0.0;
        for (std::size_t i = c; i < k_count; ++i) {
            const std::size_t l = order[i];
            if (q_bar[l] > 0.0) {
                sigma += q_bar[l] / (eta_for(params, l) * gain * betas[l]);
            }
        }
        if (sigma >= 1.0) {
            continue;
        }
        double capped_load = noise_variance(params);
        for (std::size_t i = 0; i < c; ++i) {
            capped_load += betas[order[i]] * p_max;
        }
        const double s = capped_load / (1.0 - sigma);

        bool consistent = true;
        std::vector<double> p(k_count, 0.0);
        for (std::size_t i = 0; i < c && consistent; ++i) {
            const std::size_t l = order[i];
            const double req = rho[l] == kInf ? kInf : rho[l] * s / gain;
            if (req < p_max * (1.0 - 1e-12)) {
                consistent = false;
            }
            p[l] = p_max;
        }
        for (std::size_t i = c; i < k_count && consistent; ++i) {
            const std::size_t l = order[i];
            if (q_bar[l] <= 0.0) {
                continue;
            }
            const double sol = rho[l] * s / gain;
            if (sol > p_max * (1.0 + 1e-12)) {
                consistent = false;
            }
            p[l] = std::min(sol, p_max);
        }
        if (consistent) {
            fp.p_star.watts = std::move(p);
            fp.capped_set = capped_indices(fp.p_star, p_max);
            return fp;
        }
    }
    throw std::logic_error("fixed_point_oracle found no self-consistent capped set");
}

}  // namespace wpt
