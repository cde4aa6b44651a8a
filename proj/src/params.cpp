// SPDX-License-Identifier: Apache-2.0

#include "wpt/params.hpp"

#include <cmath>
#include <sstream>

#include "wpt/common.hpp"

namespace wpt {

double noise_variance(const SystemParams& params) { return params.n0_w_per_hz / params.tau_s; }

double eta_for(const SystemParams& params, std::size_t k) {
    if (params.eta.size() == 1) {
        return params.eta[0];
    }
    return params.eta.at(k);
}

std::vector<std::string> check_params(const SystemParams& params) {
    std::vector<std::string> violations;
    if (params.m_t < 1) {
        violations.push_back("m_t must be >= 1");
    }
    if (!(params.p_t_w > 0.0)) {
        violations.push_back("p_t_w must be > 0");
    }
    if (!(params.p_max_w > 0.0)) {
        violations.push_back("p_max_w must be > 0");
    }
    if (!(params.tau_s > 0.0)) {
        violations.push_back("tau_s must be > 0");
    }
    if (!(params.n0_w_per_hz >= 0.0)) {
        violations.push_back("n0_w_per_hz must be >= 0");
    }
    if (params.eta.empty()) {
        violations.push_back("eta must have at least one entry");
    }
    for (std::size_t k = 0; k < params.eta.size(); ++k) {
        if (!(params.eta[k] > 0.0 && params.eta[k] <= 1.0)) {
            std::ostringstream msg;
            msg << "eta[" << k << "] must be in (0, 1], got " << params.eta[k];
            violations.push_back(msg.str());
        }
    }
    return violations;
}

void validate_params(const SystemParams& params) {
    const auto violations = check_params(params);
    if (violations.empty()) {
        return;
    }
    std::ostringstream msg;
    msg << "invalid system parameters:";
    for (const auto& v : violations) {
        msg << "\n  - " << v;
    }
    throw ValidationError(msg.str());
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace wpt
