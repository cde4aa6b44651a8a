// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wpt/experiments.hpp"

using namespace wpt;

namespace {

Scenario sweep_scenario(std::size_t k_count, int trials) {
    Scenario sc;
    sc.params.m_t = 500;
    sc.params.p_t_w = 1.0;
    sc.params.p_max_w = 0.1;
    sc.params.tau_s = 1e-6;
    sc.params.n0_w_per_hz = 1e-20;
    sc.distance_dist = DistanceDistribution{5.0, 15.0, k_count};
    sc.n_iters = 20;
    sc.n_trials = trials;
    sc.seed = 11;
    return sc;
}

Scenario convergence_scenario(double target_w) {
    Scenario sc;
    sc.params.m_t = 500;
    sc.params.p_t_w = 1.0;
    sc.params.p_max_w = 0.1;
    sc.params.tau_s = 1e-6;
    sc.params.n0_w_per_hz = 1e-20;
    sc.explicit_distances_m = {5.0, 10.0, 15.0};
    sc.targets_w.assign(3, target_w);
    sc.n_iters = 500;
    sc.tol = 1e-9;
    sc.seed = 1;
    return sc;
}

}  // namespace

TEST_CASE("default grid spans 1 uW to 1 mW in 21 log-spaced steps") {
    const std::vector<double> grid = default_target_grid();
    REQUIRE(grid.size() == 21);
    CHECK(grid.front() == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(grid.back() == doctest::Approx(1e-3).epsilon(1e-12));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(grid[i] / grid[i - 1] ==
              doctest::Approx(std::pow(10.0, 3.0 / 20.0)).epsilon(1e-12));
    }
}

TEST_CASE("extreme targets bracket the sweep") {
    const Scenario sc = sweep_scenario(6, 10);
    // 1e-10 W is below every ER's isotropic floor; 1 W is above the
    // single-user beamforming bound M_t * P_t * beta(5 m) = 4e-3 W.
    const SweepResult res = run_full_sweep([&] {
        Scenario s = sc;
        s.target_grid_w = {1e-10, 1.0};
        return s;
    }());
    REQUIRE(res.schemes.size() == 3);
    for (const auto& curve : res.schemes) {
        CHECK(curve.pct_achieving.front() == 100.0);
        CHECK(curve.stddev.front() == 0.0);
        CHECK(curve.pct_achieving.back() == 0.0);
        CHECK(curve.stddev.back() == 0.0);
    }
}

TEST_CASE("every scheme's curve is non-increasing in the target") {
    Scenario sc = sweep_scenario(8, 30);
    const SweepResult res = run_full_sweep(sc);
    REQUIRE(res.target_grid_w.size() == 21);
    for (const auto& curve : res.schemes) {
        for (std::size_t i = 1; i < curve.pct_achieving.size(); ++i) {
            CHECK(curve.pct_achieving[i] <= curve.pct_achieving[i - 1] + 1e-12);
        }
    }
}

TEST_CASE("the adaptive scheme dominates both benchmarks") {
    Scenario sc = sweep_scenario(8, 30);
    const SweepResult res = run_full_sweep(sc);
    const auto& proposed = res.schemes[0];
    REQUIRE(proposed.scheme == "proposed");
    for (std::size_t s = 1; s < res.schemes.size(); ++s) {
        for (std::size_t i = 0; i < proposed.pct_achieving.size(); ++i) {
            CHECK(proposed.pct_achieving[i] >= res.schemes[s].pct_achieving[i] - 1e-12);
        }
    }
}

TEST_CASE("scheme names and shapes") {
    Scenario sc = sweep_scenario(4, 3);
    sc.target_grid_w = {1e-5, 1e-4};
    const SweepResult res = run_full_sweep(sc);
    REQUIRE(res.schemes.size() == 3);
    CHECK(res.schemes[0].scheme == "proposed");
    CHECK(res.schemes[1].scheme == "fixed_p_max");
    CHECK(res.schemes[2].scheme == "fixed_0.1_p_max");
    CHECK(res.n_trials == 3);
    CHECK(res.seed == sc.seed);
    for (const auto& curve : res.schemes) {
        CHECK(curve.pct_achieving.size() == 2);
        CHECK(curve.stddev.size() == 2);
        for (const double pct : curve.pct_achieving) {
            CHECK(pct >= 0.0);
            CHECK(pct <= 100.0);
        }
    }
}

TEST_CASE("sweeps are bitwise deterministic and thread-count independent") {
    Scenario sc = sweep_scenario(5, 12);
    sc.target_grid_w = {1e-5, 5e-5, 2e-4};
    const SweepResult serial = run_full_sweep(sc);
    const SweepResult again = run_full_sweep(sc);
    sc.threads = 4;
    const SweepResult threaded = run_full_sweep(sc);
    for (std::size_t s = 0; s < serial.schemes.size(); ++s) {
        CHECK(serial.schemes[s].pct_achieving == again.schemes[s].pct_achieving);
        CHECK(serial.schemes[s].pct_achieving == threaded.schemes[s].pct_achieving);
        CHECK(serial.schemes[s].stddev == threaded.schemes[s].stddev);
    }
}

TEST_CASE("a different seed moves the Monte-Carlo result") {
    Scenario sc = sweep_scenario(8, 12);
    sc.target_grid_w = {2e-4};
    const SweepResult a = run_full_sweep(sc);
    sc.seed = 999;
    const SweepResult b = run_full_sweep(sc);
    bool any_diff = false;
    for (std::size_t s = 0; s < a.schemes.size(); ++s) {
        any_diff = any_diff || a.schemes[s].pct_achieving != b.schemes[s].pct_achieving;
    }
    CHECK(any_diff);
}

TEST_CASE("noiseless benchmarks are invariant to the power fraction") {
    Scenario sc = sweep_scenario(6, 10);
    sc.params.n0_w_per_hz = 0.0;
    sc.target_grid_w = {1e-5, 5e-5, 2e-4};
    const SweepResult full = benchmark_fixed_power(sc, 1.0, sc.target_grid_w);
    const SweepResult tenth = benchmark_fixed_power(sc, 0.1, sc.target_grid_w);
    CHECK(full.schemes[0].pct_achieving == tenth.schemes[0].pct_achieving);
}

TEST_CASE("benchmark fractions outside (0, 1] are rejected") {
    const Scenario sc = sweep_scenario(4, 2);
    CHECK_THROWS_AS((void)benchmark_fixed_power(sc, 0.0, {1e-5}), ValidationError);
    CHECK_THROWS_AS((void)benchmark_fixed_power(sc, 1.5, {1e-5}), ValidationError);
}

TEST_CASE("convergence runner reproduces the preset outcomes") {
    const ControlTrace met = run_convergence_scenario(convergence_scenario(1e-4));
    CHECK(met.converged);
    CHECK(met.capped_set.empty());
    const ControlTrace saturated = run_convergence_scenario(convergence_scenario(2.4e-4));
    CHECK(saturated.converged);
    CHECK(saturated.capped_set == std::vector<std::size_t>{2});
}

TEST_CASE("convergence runner needs explicit distances") {
    Scenario sc = sweep_scenario(4, 2);
    CHECK_THROWS_AS((void)run_convergence_scenario(sc), ValidationError);
}

TEST_CASE("fairness sweep needs a distance distribution") {
    const Scenario sc = convergence_scenario(1e-4);
    CHECK_THROWS_AS((void)run_fairness_sweep(sc, {1e-5}), ValidationError);
}

TEST_CASE("scenario validation lists every violation") {
    Scenario sc = convergence_scenario(1e-4);
    sc.params.tau_s = 0.0;
    sc.targets_w[0] = 1e-8;  // below the 8e-6 W floor at 5 m
    sc.n_trials = 0;
    const auto violations = validate_scenario(sc);
    REQUIRE(violations.size() == 3);
    const auto contains = [&](const std::string& needle) {
        return std::any_of(violations.begin(), violations.end(), [&](const std::string& v) {
            return v.find(needle) != std::string::npos;
        });
    };
    CHECK(contains("tau"));
    CHECK(contains("er 1"));
    CHECK(contains("isotropic floor"));
    CHECK(contains("trials"));
}

TEST_CASE("valid scenarios produce no violations") {
    CHECK(validate_scenario(convergence_scenario(1e-4)).empty());
    CHECK(validate_scenario(sweep_scenario(4, 5)).empty());
}

TEST_CASE("initial beacon power follows the fraction unless given absolutely") {
    Scenario sc = convergence_scenario(1e-4);
    CHECK(initial_beacon_power(sc) == 0.1);
    sc.p_init_fraction = 0.25;
    CHECK(initial_beacon_power(sc) == doctest::Approx(0.025));
    sc.p_init_w = 0.01;
    CHECK(initial_beacon_power(sc) == 0.01);
}
