#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hawkes/core.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/stats.hpp"

#include <cmath>

using namespace hawkes;

TEST_CASE("simulation is deterministic given the seed") {
    SimConfig config;
    config.spec = ModelSpec::linear(1);
    config.params = HawkesParams::univariate(1.0, 0.6, 2.0);
    config.horizon = 200.0;
    config.seed = 42;
    const Realization first = simulate_hawkes(config);
    const Realization second = simulate_hawkes(config);
    REQUIRE(first.size() == second.size());
    for (std::size_t k = 0; k < first.size(); ++k) {
        CHECK(first.events()[k].time == second.events()[k].time);
        CHECK(first.events()[k].component == second.events()[k].component);
    }
    config.seed = 43;
    const Realization third = simulate_hawkes(config);
    CHECK(first.size() != third.size());
}

TEST_CASE("poisson counts concentrate around rate times horizon") {
    double mean = 0.0;
    const int seeds = 40;
    bool all_within_wide_band = true;
    for (int s = 0; s < seeds; ++s) {
        const Realization r = simulate_poisson(1.0, 5000.0, 1000 + s);
        mean += static_cast<double>(r.size());
        all_within_wide_band = all_within_wide_band && r.size() > 4700 && r.size() < 5300;
    }
    mean /= seeds;
    // 3 sigma band for the mean of `seeds` Poisson(5000) counts
    const double se = std::sqrt(5000.0 / seeds);
    CHECK(std::abs(mean - 5000.0) <= 3.0 * se);
    CHECK(all_within_wide_band);
}

TEST_CASE("poisson times are conditionally uniform") {
    Vec pooled;
    for (int s = 0; s < 100; ++s) {
        const Realization r = simulate_poisson(2.0, 3.0, 500 + s);
        for (const auto& e : r.events()) pooled.push_back(e.time / 3.0);
    }
    const auto report = stats::ks_test_uniform(pooled);
    CHECK(report.pvalue > 1e-3);
}

TEST_CASE("linear hawkes reproduces the stationary mean rate") {
    SimConfig config;
    config.spec = ModelSpec::linear(1);
    config.params = HawkesParams::univariate(1.0, 0.6, 2.0);
    config.horizon = 2000.0;
    config.seed = 7;
    const std::vector<Realization> reps = simulate_repetitions(config, 20);
    double mean = 0.0;
    for (const auto& r : reps) mean += static_cast<double>(r.size());
    mean /= static_cast<double>(reps.size());
    const double expected = 2000.0 / (1.0 - 0.3); // T m / (1 - a/b)
    CHECK(std::abs(mean - expected) / expected < 0.03);
}

TEST_CASE("inhibition lowers the rate below the baseline") {
    SimConfig config;
    config.spec = ModelSpec::nonlinear(1);
    config.params = HawkesParams::univariate(1.0, -0.2, 2.0);
    config.horizon = 5000.0;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        config.seed = seed;
        const Realization r = simulate_hawkes(config);
        CHECK(r.size() < 5000);
        CHECK(r.size() > 3500); // still well above half the baseline count
    }
}

TEST_CASE("accepted points never use a negative intensity") {
    SimConfig config;
    config.spec = ModelSpec::nonlinear(1);
    config.params = HawkesParams::univariate(1.0, -3.0, 1.0);
    config.horizon = 300.0;
    config.seed = 5;
    const Realization r = simulate_hawkes(config);
    // at every accepted event the left-limit truncated intensity is positive
    for (const auto& e : r.events()) {
        const IntensityValue v = intensity_at(config.params, config.spec, r, e.time);
        CHECK(v.lambda[0] >= 0.0);
        CHECK(v.lambda[0] > 0.0);
    }
}

TEST_CASE("marked simulation draws exponential marks") {
    SimConfig config;
    config.spec = ModelSpec::linear(1).with_mark(MarkLinkKind::NormalizedExp);
    config.params = HawkesParams::univariate(1.0, 0.6, 2.0, 0.5, 1.0);
    config.horizon = 3000.0;
    config.seed = 9;
    const Realization r = simulate_hawkes(config);
    CHECK(r.marked());
    double mean_mark = 0.0;
    for (const auto& e : r.events()) {
        REQUIRE(e.has_mark());
        mean_mark += e.mark;
    }
    mean_mark /= static_cast<double>(r.size());
    CHECK(mean_mark == doctest::Approx(1.0).epsilon(0.1)); // Exp(1) marks

    // PIT of the marks is uniform
    Vec pit;
    for (const auto& e : r.events()) pit.push_back(-std::expm1(-e.mark));
    CHECK(stats::ks_test_uniform(pit).pvalue > 1e-3);
}

TEST_CASE("explosive configurations hit the cap") {
    SimConfig config;
    config.spec = ModelSpec::linear(1);
    config.params = HawkesParams::univariate(1.0, 3.0, 1.0); // radius 3
    config.horizon = 10000.0;
    config.seed = 3;
    config.max_events = 2000;
    SimDiagnostics diag;
    CHECK_THROWS_AS(simulate_hawkes(config, &diag), Error);
}

TEST_CASE("stationarity warning is reported in the diagnostics") {
    SimConfig config;
    config.spec = ModelSpec::linear(1);
    config.params = HawkesParams::univariate(1.0, 1.2, 1.0);
    config.horizon = 5.0;
    config.seed = 1;
    SimDiagnostics diag;
    simulate_hawkes(config, &diag);
    CHECK(diag.stationary_warning);
    CHECK(diag.spectral_radius == doctest::Approx(1.2));
}

TEST_CASE("repetitions are reproducible and independent") {
    SimConfig config;
    config.spec = ModelSpec::linear(1);
    config.params = HawkesParams::univariate(1.0, 0.6, 2.0);
    config.horizon = 100.0;
    config.seed = 21;
    CHECK(simulate_repetitions(config, 0).empty());
    const auto first = simulate_repetitions(config, 4);
    const auto second = simulate_repetitions(config, 4);
    REQUIRE(first.size() == 4);
    for (std::size_t r = 0; r < 4; ++r) {
        REQUIRE(first[r].size() == second[r].size());
        for (std::size_t k = 0; k < first[r].size(); ++k)
            CHECK(first[r].events()[k].time == second[r].events()[k].time);
    }
    CHECK(first[0].size() != first[1].size());
}

TEST_CASE("per-repetition poisson counts pass a dispersion test") {
    SimConfig config;
    config.spec = ModelSpec::poisson(1);
    config.params = HawkesParams::zeros(config.spec);
    config.params.m[0] = 1.0;
    config.horizon = 500.0;
    config.seed = 1234;
    const auto reps = simulate_repetitions(config, 100);
    double mean = 0.0;
    for (const auto& r : reps) mean += static_cast<double>(r.size());
    mean /= static_cast<double>(reps.size());
    double statistic = 0.0;
    for (const auto& r : reps) {
        const double diff = static_cast<double>(r.size()) - mean;
        statistic += diff * diff / mean;
    }
    // chi-square with n-1 dof at the 1% level, both tails
    CHECK(statistic > 61.75);  // qchisq(0.005, 99)
    CHECK(statistic < 139.0);  // qchisq(0.995, 99)
}

TEST_CASE("time change round trip gives unit exponential increments") {
    SimConfig config;
    config.spec = ModelSpec::linear(1);
    config.params = HawkesParams::univariate(1.0, 0.6, 2.0);
    config.horizon = 800.0;
    int rejections = 0;
    const int reps = 40;
    for (int r = 0; r < reps; ++r) {
        config.seed = 4000 + r;
        const Realization realization = simulate_hawkes(config);
        const TimeChangeResult tc = time_change(config.params, config.spec, realization);
        Vec increments;
        double prev = 0.0;
        for (double t : tc.merged_times) {
            increments.push_back(t - prev);
            prev = t;
        }
        if (stats::ks_test_exp1(increments).pvalue < 0.05) ++rejections;
    }
    CHECK(rejections <= 7); // about 5% expected under the time-change theorem
}

TEST_CASE("nonlinear time change round trip") {
    SimConfig config;
    config.spec = ModelSpec::nonlinear(1);
    config.params = HawkesParams::univariate(1.0, -0.6, 2.0);
    config.horizon = 1500.0;
    int rejections = 0;
    const int reps = 30;
    for (int r = 0; r < reps; ++r) {
        config.seed = 8800 + r;
        const Realization realization = simulate_hawkes(config);
        const TimeChangeResult tc = time_change(config.params, config.spec, realization);
        Vec increments;
        double prev = 0.0;
        for (double t : tc.merged_times) {
            increments.push_back(t - prev);
            prev = t;
        }
        if (stats::ks_test_exp1(increments).pvalue < 0.05) ++rejections;
    }
    CHECK(rejections <= 6);
}

TEST_CASE("frozen intensity from an empty history is homogeneous") {
    const ModelSpec spec = ModelSpec::linear(1);
    const HawkesParams params = HawkesParams::univariate(1.5, 0.6, 2.0);
    const Realization empty(std::vector<MarkedEvent>{}, 1000.0, 1, false);
    double mean = 0.0;
    const int seeds = 30;
    for (int s = 0; s < seeds; ++s) {
        const Realization sim = simulate_inhomogeneous_poisson(params, spec, empty, 1000.0,
                                                               600 + s);
        mean += static_cast<double>(sim.size());
    }
    mean /= seeds;
    const double se = std::sqrt(1500.0 / seeds);
    CHECK(std::abs(mean - 1500.0) <= 3.5 * se);
}

TEST_CASE("frozen hawkes intensity reproduces its compensator mass") {
    SimConfig config;
    config.spec = ModelSpec::linear(1);
    config.params = HawkesParams::univariate(1.0, 0.6, 2.0);
    config.horizon = 500.0;
    config.seed = 77;
    const Realization history = simulate_hawkes(config);
    const double mass =
        compensator(config.params, config.spec, history, config.horizon).total;

    double mean = 0.0;
    const int seeds = 60;
    for (int s = 0; s < seeds; ++s) {
        const Realization sim = simulate_inhomogeneous_poisson(
            config.params, config.spec, history, config.horizon, 900 + s);
        mean += static_cast<double>(sim.size());
    }
    mean /= seeds;
    CHECK(std::abs(mean - mass) <= 3.5 * std::sqrt(mass / seeds));

    // and the frozen time change is unit-rate Poisson: uniform after rescaling
    const Realization sim =
        simulate_inhomogeneous_poisson(config.params, config.spec, history, config.horizon, 5);
    Vec rescaled;
    for (const auto& e : sim.events()) {
        const double lam = compensator(config.params, config.spec, history, e.time).total;
        rescaled.push_back(lam / mass);
    }
    CHECK(stats::ks_test_uniform(rescaled).pvalue > 1e-3);
}
