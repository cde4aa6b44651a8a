// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "wpt/channel.hpp"
#include "wpt/kernels.hpp"
#include "wpt/retro.hpp"
#include "wpt/rng.hpp"

using namespace wpt;

namespace {

SystemParams sec_v_params() {
    SystemParams params;
    params.m_t = 500;
    params.p_t_w = 1.0;
    params.p_max_w = 0.1;
    params.tau_s = 1e-6;
    params.n0_w_per_hz = 1e-20;  // -170 dBm/Hz
    params.eta = {1.0};
    return params;
}

ChannelRealization manual_channel(std::size_t m_t, const std::vector<cvector>& rows) {
    ChannelRealization ch;
    ch.num_ers = rows.size();
    ch.num_antennas = m_t;
    ch.betas.assign(rows.size(), 1.0);
    for (const auto& row : rows) {
        ch.gains.insert(ch.gains.end(), row.begin(), row.end());
    }
    return ch;
}

}  // namespace

TEST_CASE("no beacon gives a zero uplink signal") {
    const ChannelRealization ch = manual_channel(3, {{{1.0, 2.0}, {0.5, -1.0}, {0.0, 3.0}}});
    const cvector g = effective_uplink_channel(ch, {{0.0}});
    for (const cdouble& z : g) {
        CHECK(z == cdouble{0.0, 0.0});
    }
}

TEST_CASE("single ER at unit power returns its conjugated row") {
    const ChannelRealization ch = manual_channel(2, {{{1.0, 2.0}, {-0.5, 3.0}}});
    const cvector g = effective_uplink_channel(ch, {{1.0}});
    CHECK(g[0] == cdouble{1.0, -2.0});
    CHECK(g[1] == cdouble{-0.5, -3.0});
}

TEST_CASE("orthogonal rows add power without cross terms") {
    const cvector h1 = {{2.0, 1.0}, {0.0, 0.0}};
    const cvector h2 = {{0.0, 0.0}, {1.0, -3.0}};
    const ChannelRealization ch = manual_channel(2, {h1, h2});
    const double p1 = 0.07;
    const double p2 = 0.02;
    const cvector g = effective_uplink_channel(ch, {{p1, p2}});
    const double norm_sq = kernels::sum_abs2(g);
    const double expect = p1 * kernels::sum_abs2(h1) + p2 * kernels::sum_abs2(h2);
    CHECK(norm_sq == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("negative beacon power names the offending ER") {
    const ChannelRealization ch = manual_channel(1, {{{1.0, 0.0}}});
    try {
        (void)effective_uplink_channel(ch, {{-0.5}});
        FAIL("expected a domain error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("ER 1") != std::string::npos);
    }
}

TEST_CASE("transmit signal carries exactly the power budget") {
    Philox4x32 rng(17, 0);
    for (int trial = 0; trial < 50; ++trial) {
        cvector g_hat(25);
        for (auto& z : g_hat) {
            z = rng.next_cgaussian(1.0);
        }
        const double p_t = 0.5 + trial * 0.1;
        const cvector x = et_transmit_signal(g_hat, p_t);
        CHECK(kernels::sum_abs2(x) == doctest::Approx(p_t).epsilon(1e-12));
    }
}

TEST_CASE("zero matched-filter output is degenerate") {
    const cvector zeros(4, cdouble{0.0, 0.0});
    CHECK_THROWS_AS((void)et_transmit_signal(zeros, 1.0), DegenerateSignalError);
    CHECK_THROWS_AS((void)et_transmit_signal(cvector{{1.0, 0.0}}, 0.0), std::domain_error);
}

TEST_CASE("matched filter adds noise elementwise and checks lengths") {
    const cvector g = {{1.0, 1.0}, {2.0, -1.0}};
    const cvector w = {{0.5, 0.0}, {0.0, 0.25}};
    const cvector g_hat = matched_filter_estimate(g, w);
    CHECK(g_hat[0] == cdouble{1.5, 1.0});
    CHECK(g_hat[1] == cdouble{2.0, -0.75});
    CHECK_THROWS_AS((void)matched_filter_estimate(g, cvector(3)), ValidationError);
}

// Exact harvested power on a tiny system, checked against a direct
// term-by-term evaluation with std::complex (no library kernels).
TEST_CASE("exact harvested power matches a hand-expanded K=2, M_t=3 system") {
    const cvector h1 = {{1.0, 0.5}, {-0.25, 1.0}, {0.0, -2.0}};
    const cvector h2 = {{0.5, -0.5}, {2.0, 0.0}, {1.0, 1.0}};
    const cvector noise = {{0.01, -0.02}, {0.0, 0.03}, {-0.01, 0.0}};
    const double p1 = 0.04;
    const double p2 = 0.09;

    SystemParams params;
    params.m_t = 3;
    params.p_t_w = 2.0;
    params.tau_s = 1e-6;
    params.n0_w_per_hz = 0.0;
    params.eta = {0.8, 1.0};

    ChannelRealization ch = manual_channel(3, {h1, h2});
    ch.betas = {0.25, 0.5};

    const HarvestReport rep = harvested_power_exact(ch, {{p1, p2}}, noise, params);

    // Direct expansion: g_hat = sqrt(p1) h1* + sqrt(p2) h2* + w,
    // x = sqrt(P_t) g_hat* / ||g_hat||, r_k = <h_k, x>, Q_k = eta_k |r_k|^2.
    std::vector<std::complex<double>> g_hat(3);
    for (int m = 0; m < 3; ++m) {
        g_hat[m] = std::sqrt(p1) * std::conj(h1[m]) + std::sqrt(p2) * std::conj(h2[m]) + noise[m];
    }
    double norm_sq = 0.0;
    for (const auto& z : g_hat) {
        norm_sq += std::norm(z);
    }
    std::vector<std::complex<double>> x(3);
    for (int m = 0; m < 3; ++m) {
        x[m] = std::sqrt(params.p_t_w / norm_sq) * std::conj(g_hat[m]);
    }
    const std::vector<cvector> rows = {h1, h2};
    const std::vector<double> etas = {0.8, 1.0};
    for (int k = 0; k < 2; ++k) {
        std::complex<double> received_symbol = 0.0;
        for (int m = 0; m < 3; ++m) {
            received_symbol += std::conj(rows[k][m]) * x[m];
        }
        const double q_expect = etas[k] * std::norm(received_symbol);
        CHECK(rep.q_total[k] == doctest::Approx(q_expect).epsilon(1e-13));
        CHECK(rep.q_beamed[k] ==
              doctest::Approx(q_expect - etas[k] * params.p_t_w * ch.betas[k]).epsilon(1e-13));
    }
}

TEST_CASE("asymptotic harvested power at the reference operating point") {
    const SystemParams params = sec_v_params();
    const std::vector<double> betas = {8e-6, 1e-6, 2.9629629629629629e-07};
    const HarvestReport rep = harvested_power_asymptotic(betas, {{0.1, 0.1, 0.1}}, params);
    CHECK(rep.model == HarvestModel::asymptotic);
    CHECK(rep.q_total[0] == doctest::Approx(0.0034433465765918896).epsilon(1e-12));
    CHECK(rep.q_total[1] == doctest::Approx(5.4677290259248269e-05).epsilon(1e-12));
    CHECK(rep.q_total[2] == doctest::Approx(5.0087058663811927e-06).epsilon(1e-12));
    CHECK(rep.q_beamed[0] == doctest::Approx(0.0034353465765918894).epsilon(1e-12));
    CHECK(rep.q_beamed[1] == doctest::Approx(5.3677290259248272e-05).epsilon(1e-12));
    CHECK(rep.q_beamed[2] == doctest::Approx(4.7124095700848962e-06).epsilon(1e-12));
}

TEST_CASE("asymptotic beamed power scales with beta squared") {
    SystemParams params = sec_v_params();
    params.n0_w_per_hz = 0.0;
    const std::vector<double> betas = {6e-6, 2e-6};
    const HarvestReport rep = harvested_power_asymptotic(betas, {{0.05, 0.05}}, params);
    const double ratio = rep.q_beamed[0] / rep.q_beamed[1];
    CHECK(ratio == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("asymptotic harvested power grows with own beacon power") {
    const SystemParams params = sec_v_params();
    const std::vector<double> betas = {8e-6, 1e-6};
    double prev = 0.0;
    for (const double p1 : {0.0, 0.01, 0.05, 0.1}) {
        const HarvestReport rep = harvested_power_asymptotic(betas, {{p1, 0.02}}, params);
        CHECK(rep.q_total[0] > prev);
        prev = rep.q_total[0];
    }
}

TEST_CASE("asymptotic model is invariant to common power scaling when noiseless") {
    SystemParams params = sec_v_params();
    params.n0_w_per_hz = 0.0;
    const std::vector<double> betas = {8e-6, 1e-6, 3e-7};
    const HarvestReport a = harvested_power_asymptotic(betas, {{0.1, 0.02, 0.07}}, params);
    const HarvestReport b = harvested_power_asymptotic(betas, {{0.01, 0.002, 0.007}}, params);
    for (int k = 0; k < 3; ++k) {
        CHECK(a.q_total[k] == doctest::Approx(b.q_total[k]).epsilon(1e-14));
    }
}

TEST_CASE("all-zero beacon with no noise collapses to the isotropic floor") {
    SystemParams params = sec_v_params();
    params.n0_w_per_hz = 0.0;
    const std::vector<double> betas = {8e-6, 1e-6};
    const HarvestReport rep = harvested_power_asymptotic(betas, {{0.0, 0.0}}, params);
    CHECK(rep.q_total[0] == params.p_t_w * betas[0]);
    CHECK(rep.q_total[1] == params.p_t_w * betas[1]);
    CHECK(rep.q_beamed[0] == 0.0);
    CHECK(rep.q_beamed[1] == 0.0);
}

TEST_CASE("efficiency scales harvested power linearly") {
    SystemParams params = sec_v_params();
    const std::vector<double> betas = {8e-6, 1e-6};
    const HarvestReport full = harvested_power_asymptotic(betas, {{0.1, 0.1}}, params);
    params.eta = {0.5, 0.25};
    const HarvestReport scaled = harvested_power_asymptotic(betas, {{0.1, 0.1}}, params);
    CHECK(scaled.q_total[0] == doctest::Approx(0.5 * full.q_total[0]).epsilon(1e-14));
    CHECK(scaled.q_total[1] == doctest::Approx(0.25 * full.q_total[1]).epsilon(1e-14));
}

TEST_CASE("harvested_power_exact validates dimensions") {
    const ChannelRealization ch = manual_channel(2, {{{1.0, 0.0}, {0.0, 1.0}}});
    SystemParams params;
    params.m_t = 2;
    CHECK_THROWS_AS((void)harvested_power_exact(ch, {{1.0}}, cvector(3), params),
                    ValidationError);
    CHECK_THROWS_AS((void)harvested_power_exact(ch, {{1.0, 1.0}}, cvector(2), params),
                    ValidationError);
    CHECK_THROWS_AS(
        (void)harvested_power_asymptotic(std::vector<double>{1e-6}, {{1.0, 2.0}}, params),
        ValidationError);
}
