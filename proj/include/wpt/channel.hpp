// SPDX-License-Identifier: Apache-2.0
//
// Large-scale path loss and per-block Rayleigh channel realizations.
// Channels are flat within a block; entry (k, m) of a realization is the
// gain between ER k and ET antenna m, with variance beta_k. Draws are
// reproducible: identical (params, betas, seed) gives bitwise-identical
// matrices on every platform.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wpt/common.hpp"
#include "wpt/params.hpp"

namespace wpt {

struct PathLossModel {
    double c0 = 1e-3;    // linear reference attenuation
    double r0_m = 1.0;   // reference distance
    double alpha = 3.0;  // path-loss exponent
};

std::vector<std::string> check_path_loss_model(const PathLossModel& model);

/// beta = c0 * (r / r0)^(-alpha). Throws std::domain_error for r <= 0.
double path_loss(const PathLossModel& model, double r_m);

struct ChannelRealization {
    std::size_t num_ers = 0;
    std::size_t num_antennas = 0;
    cvector gains;  // row-major K x M_t
    std::vector<double> betas;

    std::span<const cdouble> row(std::size_t k) const {
        return {gains.data() + k * num_antennas, num_antennas};
    }
    std::span<cdouble> row(std::size_t k) {
        return {gains.data() + k * num_antennas, num_antennas};
    }
};

/// Draws a K x M_t matrix with independent CN(0, beta_k) entries in row k.
ChannelRealization draw_channel(const SystemParams& params, std::span<const double> betas,
                                std::uint64_t seed);

/// Draws the matched-filter noise vector, i.i.d. CN(0, N0/tau) per antenna.
/// Throws std::domain_error when tau <= 0 or N0 < 0.
cvector draw_beacon_noise(const SystemParams& params, std::uint64_t seed);

}  // namespace wpt
