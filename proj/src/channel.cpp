// SPDX-License-Identifier: Apache-2.0

#include "wpt/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wpt/rng.hpp"

namespace wpt {

std::vector<std::string> check_path_loss_model(const PathLossModel& model) {
    std::vector<std::string> violations;
    if (!(model.c0 > 0.0)) {
        violations.push_back("c0 must be > 0");
    }
    if (!(model.r0_m > 0.0)) {
        violations.push_back("r0_m must be > 0");
    }
    if (!(model.alpha > 0.0)) {
        violations.push_back("alpha must be > 0");
    }
    return violations;
}

double path_loss(const PathLossModel& model, double r_m) {
    if (!(r_m > 0.0)) {
        std::ostringstream msg;
        msg << "path_loss requires a positive distance, got " << r_m;
        throw std::domain_error(msg.str());
    }
    return model.c0 * std::pow(r_m / model.r0_m, -model.alpha);
}

ChannelRealization draw_channel(const SystemParams& params, std::span<const double> betas,
                                std::uint64_t seed) {
    if (betas.empty() || params.m_t < 1) {
        throw ValidationError("draw_channel requires K >= 1 and m_t >= 1");
    }
    for (std::size_t k = 0; k < betas.size(); ++k) {
        if (!(betas[k] >= 0.0)) {
            std::ostringstream msg;
            msg << "draw_channel requires beta >= 0, got " << betas[k] << " for ER " << k + 1;
            throw std::domain_error(msg.str());
        }
    }
    ChannelRealization ch;
    ch.num_ers = betas.size();
    ch.num_antennas = params.m_t;
    ch.betas.assign(betas.begin(), betas.end());
    ch.gains.resize(ch.num_ers * ch.num_antennas);

    Philox4x32 rng(seed, kStreamChannel);
    for (std::size_t k = 0; k < ch.num_ers; ++k) {
        const double beta = betas[k];
        auto row = ch.row(k);
        // The generator is advanced even for beta = 0 so that one ER's
        // gain never shifts another ER's draw.
        for (std::size_t m = 0; m < ch.num_antennas; ++m) {
            row[m] = rng.next_cgaussian(beta);
        }
    }
    return ch;
}

cvector draw_beacon_noise(const SystemParams& params, std::uint64_t seed) {
    if (!(params.tau_s > 0.0)) {
        throw std::domain_error("draw_beacon_noise requires tau > 0");
    }
    if (params.n0_w_per_hz < 0.0) {
        throw std::domain_error("draw_beacon_noise requires N0 >= 0");
    }
    const double variance = noise_variance(params);
    cvector noise(params.m_t);
    Philox4x32 rng(seed, kStreamNoise);
    for (auto& entry : noise) {
        entry = rng.next_cgaussian(variance);
    }
    return noise;
}

}  // namespace wpt
