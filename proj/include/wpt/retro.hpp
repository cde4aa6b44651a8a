// SPDX-License-Identifier: Apache-2.0
//
// The beacon-phase matched filter and the retrodirective downlink. The ET
// never estimates per-ER channels: it conjugates its received sum signal
// and rescales it to the total power budget. Harvested power is available
// in two models, the exact finite-antenna form and its large-M_t limit.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "wpt/channel.hpp"
#include "wpt/common.hpp"
#include "wpt/params.hpp"

namespace wpt {

struct BeaconPowerVector {
    std::vector<double> watts;

    std::size_t size() const { return watts.size(); }
    double operator[](std::size_t k) const { return watts[k]; }
    double& operator[](std::size_t k) { return watts[k]; }
};

enum class HarvestModel { exact, asymptotic };

struct HarvestReport {
    std::vector<double> q_total;   // harvested power Q_k
    std::vector<double> q_beamed;  // Q_k minus the isotropic floor
    HarvestModel model = HarvestModel::exact;
};

/// Uplink sum signal at the ET: g = sum_k sqrt(p_k) * conj(row_k).
/// Throws std::domain_error for negative beacon power.
cvector effective_uplink_channel(const ChannelRealization& ch, const BeaconPowerVector& p);

/// Matched-filter output g_hat = g + g_noise.
cvector matched_filter_estimate(std::span<const cdouble> g, std::span<const cdouble> g_noise);

/// Downlink signal x = sqrt(P_t) * conj(g_hat) / ||g_hat||, so ||x||^2 = P_t.
/// Throws DegenerateSignalError when g_hat is the zero vector.
cvector et_transmit_signal(std::span<const cdouble> g_hat, double p_t_w);

/// Finite-antenna harvested power: Q_k = eta_k * |<row_k, x>|^2 with x built
/// from this realization's matched filter.
HarvestReport harvested_power_exact(const ChannelRealization& ch, const BeaconPowerVector& p,
                                    std::span<const cdouble> g_noise, const SystemParams& params);

/// Large-M_t harvested power:
/// Q_k = eta_k * (P_t*beta_k + P_t*p_k*beta_k^2*(M_t-1) / (sum_l p_l*beta_l + N0/tau)).
/// When the denominator is zero (p = 0 and N0 = 0) the isotropic floor is
/// returned.
HarvestReport harvested_power_asymptotic(std::span<const double> betas,
                                         const BeaconPowerVector& p, const SystemParams& params);

}  // namespace wpt
