// SPDX-License-Identifier: Apache-2.0

#include "wpt/retro.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wpt/kernels.hpp"

namespace wpt {

cvector effective_uplink_channel(const ChannelRealization& ch, const BeaconPowerVector& p) {
    if (p.size() != ch.num_ers) {
        std::ostringstream msg;
        msg << "beacon power vector has " << p.size() << " entries for " << ch.num_ers << " ERs";
        throw ValidationError(msg.str());
    }
    cvector g(ch.num_antennas, cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < ch.num_ers; ++k) {
        const double p_k = p[k];
        if (p_k < 0.0) {
            std::ostringstream msg;
            msg << "negative beacon power " << p_k << " at ER " << k + 1;
            throw std::domain_error(msg.str());
        }
        if (p_k == 0.0) {
            continue;
        }
        kernels::add_scaled_conj(g, ch.row(k), std::sqrt(p_k));
    }
    return g;
}

cvector matched_filter_estimate(std::span<const cdouble> g, std::span<const cdouble> g_noise) {
    if (g.size() != g_noise.size()) {
        std::ostringstream msg;
        msg << "matched filter length mismatch: signal " << g.size() << ", noise "
            << g_noise.size();
        throw ValidationError(msg.str());
    }
    cvector g_hat(g.begin(), g.end());
    for (std::size_t m = 0; m < g_hat.size(); ++m) {
        g_hat[m] += g_noise[m];
    }
    return g_hat;
}

cvector et_transmit_signal(std::span<const cdouble> g_hat, double p_t_w) {
    if (!(p_t_w > 0.0)) {
        throw std::domain_error("transmit power must be > 0");
    }
    const double norm_sq = kernels::sum_abs2(g_hat);
    if (norm_sq == 0.0) {
        throw DegenerateSignalError(
            "matched-filter output is the zero vector; the retrodirective "
            "transmit direction is undefined (no beacon and no noise)");
    }
    cvector x(g_hat.size());
    kernels::scale_conj(x, g_hat, std::sqrt(p_t_w / norm_sq));
    return x;
}

HarvestReport harvested_power_exact(const ChannelRealization& ch, const BeaconPowerVector& p,
                                    std::span<const cdouble> g_noise, const SystemParams& params) {
    if (g_noise.size() != ch.num_antennas) {
        std::ostringstream msg;
        msg << "noise vector length " << g_noise.size() << " does not match " << ch.num_antennas
            << " antennas";
        throw ValidationError(msg.str());
    }
    const cvector g = effective_uplink_channel(ch, p);
    const cvector g_hat = matched_filter_estimate(g, g_noise);
    const cvector x = et_transmit_signal(g_hat, params.p_t_w);

    HarvestReport report;
    report.model = HarvestModel::exact;
    report.q_total.resize(ch.num_ers);
    report.q_beamed.resize(ch.num_ers);
    for (std::size_t k = 0; k < ch.num_ers; ++k) {
        const cdouble received_symbol = kernels::dot_conj(ch.row(k), x);
        const double q = eta_for(params, k) * std::norm(received_symbol);
        report.q_total[k] = q;
        report.q_beamed[k] = q - eta_for(params, k) * params.p_t_w * ch.betas[k];
    }
    return report;
}

HarvestReport harvested_power_asymptotic(std::span<const double> betas,
                                         const BeaconPowerVector& p,
                                         const SystemParams& params) {
    if (p.size() != betas.size()) {
        std::ostringstream msg;
        msg << "beacon power vector has " << p.size() << " entries for " << betas.size()
            << " ERs";
        throw ValidationError(msg.str());
    }
    double denom = noise_variance(params);
    for (std::size_t l = 0; l < betas.size(); ++l) {
        if (p[l] < 0.0) {
            std::ostringstream msg;
            msg << "negative beacon power " << p[l] << " at ER " << l + 1;
            throw std::domain_error(msg.str());
        }
        denom += p[l] * betas[l];
    }

    HarvestReport report;
    report.model = HarvestModel::asymptotic;
    report.q_total.resize(betas.size());
    report.q_beamed.resize(betas.size());
    const double gain = params.p_t_w * static_cast<double>(params.m_t - 1);
    for (std::size_t k = 0; k < betas.size(); ++k) {
        const double eta = eta_for(params, k);
        const double floor = eta * params.p_t_w * betas[k];
        double beamed = 0.0;
        if (denom > 0.0) {
            beamed = eta * gain * p[k] * betas[k] * betas[k] / denom;
        }
        report.q_beamed[k] = beamed;
        report.q_total[k] = floor + beamed;
    }
    return report;
}

}  // namespace wpt
