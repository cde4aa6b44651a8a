// SPDX-License-Identifier: Apache-2.0
//
// Global link constants shared by every module. All quantities are linear
// SI units (watts, seconds, Hz); dB/dBm conversion happens once at config
// parse time.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wpt {

struct SystemParams {
    std::size_t m_t = 1;        // ET antenna count
    double p_t_w = 1.0;         // ET total transmit power
    double p_max_w = 0.1;       // per-ER maximum beacon power
    double tau_s = 1e-6;        // beacon-phase duration
    double n0_w_per_hz = 0.0;   // noise power spectral density
    std::vector<double> eta{1.0};  // RF-to-DC efficiencies, length K or 1 (broadcast)
    double f_c_hz = 900e6;      // carrier frequency, carried as metadata only
};

/// Post-matched-filter noise variance per antenna.
double noise_variance(const SystemParams& params);

/// Efficiency for ER k, broadcasting a length-1 eta vector.
double eta_for(const SystemParams& params, std::size_t k);

/// All invariant violations, empty when the parameters are valid.
std::vector<std::string> check_params(const SystemParams& params);

/// Throws ValidationError listing every violation.
void validate_params(const SystemParams& params);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace wpt
