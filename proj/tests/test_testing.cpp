#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hawkes/experiments.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/testing.hpp"

#include <algorithm>
#include <cmath>

using namespace hawkes;
using namespace hawkes::testing;

namespace {

std::vector<Realization> poisson_reps(std::size_t n, double horizon, std::uint64_t seed) {
    SimConfig config = experiments::poisson_scenario(1.0, horizon, seed);
    return simulate_repetitions(config, n);
}

} // namespace

TEST_CASE("single-coefficient test keeps H0 at the estimate itself") {
    SimConfig config = experiments::linear_scenario(0.6, 2.0, 2000.0, 42);
    const Realization realization = simulate_hawkes(config);
    const FitResult fit = fit_mle(config.spec, realization);
    REQUIRE(fit.converged);

    const ParamLayout layout(config.spec);
    const double a_hat = fit.params.a(0, 0);
    const TestReport at_estimate =
        test_single_coefficient(fit, 2000.0, "a[1,1]", a_hat, 0.05);
    CHECK(at_estimate.statistic == doctest::Approx(0.0));
    CHECK(at_estimate.pvalue == doctest::Approx(1.0));
    CHECK_FALSE(at_estimate.reject);

    // H0 at the true value is kept here
    const TestReport at_truth = test_single_coefficient(fit, 2000.0, "a[1,1]", 0.6, 0.05);
    CHECK(std::abs(at_truth.statistic) < 2.5);

    // H0 far from the truth is rejected
    const TestReport far = test_single_coefficient(fit, 2000.0, "a[1,1]", 1.8, 0.05);
    CHECK(far.reject);

    // one-sided variants use the single-tail quantile
    const TestReport greater =
        test_single_coefficient(fit, 2000.0, "a[1,1]", 0.0, 0.05, Tail::Greater);
    CHECK(greater.pvalue == doctest::Approx(1.0 - stats::normal_cdf(greater.statistic)));
    const TestReport less =
        test_single_coefficient(fit, 2000.0, "a[1,1]", 0.0, 0.05, Tail::Less);
    CHECK(less.pvalue == doctest::Approx(stats::normal_cdf(less.statistic)));
}

TEST_CASE("equality test on the same index keeps trivially") {
    SimConfig config = experiments::linear_scenario(0.6, 2.0, 800.0, 7);
    const Realization realization = simulate_hawkes(config);
    const FitResult fit = fit_mle(config.spec, realization);
    const TestReport report = test_coefficient_equality(fit, 800.0, 0, 0, 0.05);
    CHECK(report.statistic == doctest::Approx(0.0));
    CHECK_FALSE(report.reject);
}

TEST_CASE("equality test separates distinct decay rates") {
    SimConfig config = experiments::bivariate_scenario(1.5, 4000.0, 11);
    const Realization realization = simulate_hawkes(config);
    const FitResult fit = fit_mle(config.spec, realization);
    REQUIRE(fit.converged);
    const TestReport unequal = test_coefficient_equality(fit, 4000.0, "b[1]", "b[2]", 0.05);
    CHECK(std::abs(unequal.statistic) > 1.96);
    CHECK(unequal.reject);
}

TEST_CASE("multiple testing corrections") {
    // a single p-value is left untouched by Bonferroni
    const CorrectionResult single =
        multiple_testing_correct({0.03}, Correction::Bonferroni, 0.05);
    CHECK(single.reject[0]);
    CHECK(single.adjusted[0] == doctest::Approx(0.03));

    // K = 10, all p = 0.004 < 0.05/10
    const std::vector<double> ten(10, 0.004);
    const CorrectionResult bonf = multiple_testing_correct(ten, Correction::Bonferroni, 0.05);
    for (bool r : bonf.reject) CHECK(r);

    // Benjamini-Hochberg step-up rejects all three here
    const CorrectionResult bh =
        multiple_testing_correct({0.01, 0.02, 0.04}, Correction::BenjaminiHochberg, 0.05);
    CHECK(bh.reject[0]);
    CHECK(bh.reject[1]);
    CHECK(bh.reject[2]);

    const CorrectionResult partial =
        multiple_testing_correct({0.01, 0.4, 0.9}, Correction::BenjaminiHochberg, 0.05);
    CHECK(partial.reject[0]);
    CHECK_FALSE(partial.reject[1]);
    CHECK_FALSE(partial.reject[2]);
}

TEST_CASE("score test detects the mark influence") {
    const ModelSpec unmarked = ModelSpec::linear(1);
    const ModelSpec marked = ModelSpec::linear(1).with_mark(MarkLinkKind::NormalizedExp);

    // marked data: gamma = 0.5, psi = 1
    SimConfig h1 = experiments::marked_normalized_scenario(0.6, 1.0, 0.5, 1.0, 2000.0, 21);
    const Realization marked_data = simulate_hawkes(h1);
    const TestReport reject_report = test_mark_zscore(marked_data, unmarked, marked, 0.05);
    CHECK(reject_report.reject);
    CHECK(reject_report.pvalue < 0.01);

    // data without mark influence: gamma = 0
    SimConfig h0 = experiments::marked_normalized_scenario(0.6, 1.0, 0.0, 1.0, 2000.0, 22);
    const Realization plain_data = simulate_hawkes(h0);
    const TestReport keep_report = test_mark_zscore(plain_data, unmarked, marked, 0.05);
    CHECK(keep_report.pvalue > 0.01);

    // a non-normalized link is refused
    const ModelSpec bad = ModelSpec::linear(1).with_mark(MarkLinkKind::Exp);
    CHECK_THROWS_AS(test_mark_zscore(marked_data, unmarked, bad, 0.05), Error);
}

TEST_CASE("score test respects gamma tying") {
    const ModelSpec unmarked = ModelSpec::linear(1);
    const ModelSpec marked = ModelSpec::linear(1).with_mark(MarkLinkKind::NormalizedExp);
    SimConfig config = experiments::marked_normalized_scenario(0.6, 1.0, 0.5, 1.0, 1500.0, 33);
    const Realization data = simulate_hawkes(config);
    const TestReport common = test_mark_zscore(data, unmarked, marked, 0.05,
                                               GammaTying::Common);
    CHECK(common.details.at("dof") == doctest::Approx(1.0));
    const TestReport per_pair = test_mark_zscore(data, unmarked, marked, 0.05,
                                                 GammaTying::PerPair);
    CHECK(per_pair.details.at("dof") == doctest::Approx(1.0)); // d = 1: same thing
    CHECK(common.statistic == doctest::Approx(per_pair.statistic).epsilon(1e-9));
}

TEST_CASE("bootstrap test keeps H0 at the estimate and rejects a = 0") {
    SimConfig config = experiments::linear_scenario(0.6, 2.0, 800.0, 55);
    const Realization realization = simulate_hawkes(config);

    CHECK_THROWS_AS(test_bootstrap_coefficient(realization, config.spec, "a[1,1]", 0.0, 10,
                                               0.05, 1),
                    Error); // B too small

    const FitResult fit = fit_mle(config.spec, realization);
    const double a_hat = fit.params.a(0, 0);
    const TestReport keep = test_bootstrap_coefficient(realization, config.spec, "a[1,1]",
                                                       a_hat, 60, 0.05, 777);
    CHECK(keep.statistic == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK_FALSE(keep.reject);

    const TestReport reject = test_bootstrap_coefficient(realization, config.spec, "a[1,1]",
                                                         0.0, 60, 0.05, 777);
    CHECK(reject.reject);
    CHECK(reject.details.at("replicates_used") >= 48.0);

    // doubling B leaves the bootstrap sd at the same scale
    const TestReport doubled = test_bootstrap_coefficient(realization, config.spec, "a[1,1]",
                                                          0.0, 120, 0.05, 777);
    const double ratio =
        doubled.details.at("sigma_bootstrap") / reject.details.at("sigma_bootstrap");
    CHECK(ratio > 0.6);
    CHECK(ratio < 1.6);
}

TEST_CASE("subsampled goodness of fit keeps a well-specified poisson model") {
    const std::vector<Realization> reps = poisson_reps(80, 400.0, 91);
    GofOptions options;
    options.num_subsets = 120;
    options.seed = 5;
    const GofReport report = gof_subsample_test(reps, ModelSpec::poisson(1), options);
    CHECK(report.band.inside);
    CHECK(report.p_of_n_used == 9); // ceil(sqrt(80))
    CHECK(report.rejection_count_at_05 < 20);
    for (double p : report.per_subset_pvalues) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("subsampled goodness of fit rejects a misspecified poisson model") {
    SimConfig config = experiments::linear_scenario(0.6, 1.0, 400.0, 92);
    const std::vector<Realization> reps = simulate_repetitions(config, 80);
    GofOptions options;
    options.num_subsets = 120;
    options.seed = 5;
    const GofReport report = gof_subsample_test(reps, ModelSpec::poisson(1), options);
    CHECK_FALSE(report.band.inside);
    CHECK(report.rejection_count_at_05 > 60);
}

TEST_CASE("goodness of fit p-values are invariant to relabeling the repetitions") {
    std::vector<Realization> reps = poisson_reps(40, 300.0, 93);
    GofOptions options;
    options.num_subsets = 50;
    options.seed = 17;
    const GofReport base = gof_subsample_test(reps, ModelSpec::poisson(1), options);

    std::vector<Realization> shuffled = reps;
    Rng rng(3);
    for (std::size_t k = shuffled.size(); k > 1; --k)
        std::swap(shuffled[k - 1],
                  shuffled[static_cast<std::size_t>(rng.uniform() * static_cast<double>(k))]);
    const GofReport permuted = gof_subsample_test(shuffled, ModelSpec::poisson(1), options);
    REQUIRE(base.per_subset_pvalues.size() == permuted.per_subset_pvalues.size());
    for (std::size_t s = 0; s < base.per_subset_pvalues.size(); ++s)
        CHECK(base.per_subset_pvalues[s] ==
              doctest::Approx(permuted.per_subset_pvalues[s]).epsilon(1e-12));
}

TEST_CASE("single-subset variant matches the first subset of the full run") {
    const std::vector<Realization> reps = poisson_reps(40, 300.0, 94);
    GofOptions options;
    options.num_subsets = 10;
    options.seed = 29;
    const GofReport full = gof_subsample_test(reps, ModelSpec::poisson(1), options);
    const double single = gof_single_subset(reps, ModelSpec::poisson(1), options);
    CHECK(single == doctest::Approx(full.per_subset_pvalues[0]).epsilon(1e-12));
}

TEST_CASE("xi beyond the subset mass is rejected") {
    const std::vector<Realization> reps = poisson_reps(20, 100.0, 95);
    GofOptions options;
    options.num_subsets = 4;
    options.xi = 1e9;
    CHECK_THROWS_AS(gof_subsample_test(reps, ModelSpec::poisson(1), options), Error);
}

TEST_CASE("model comparison is deterministic and ranks the true model first") {
    SimConfig config = experiments::linear_scenario(0.6, 1.0, 400.0, 96);
    const std::vector<Realization> reps = simulate_repetitions(config, 60);
    GofOptions options;
    options.num_subsets = 80;
    options.seed = 31;
    const auto comparison =
        model_comparison(reps, {ModelSpec::poisson(1), ModelSpec::linear(1)}, options);
    REQUIRE(comparison.reports.size() == 2);
    CHECK(comparison.ranking[0] == 1); // the Hawkes spec fits the Hawkes data best

    // identical specs with shared seeds produce identical reports
    const auto twins =
        model_comparison(reps, {ModelSpec::poisson(1), ModelSpec::poisson(1)}, options);
    for (std::size_t s = 0; s < twins.reports[0].per_subset_pvalues.size(); ++s)
        CHECK(twins.reports[0].per_subset_pvalues[s] ==
              doctest::Approx(twins.reports[1].per_subset_pvalues[s]));
}

TEST_CASE("residual diagnostics structure") {
    SimConfig config = experiments::marked_exp_scenario(0.6, 1.0, 0.5, 2.0, 800.0, 97);
    const Realization realization = simulate_hawkes(config);
    const ResidualReport report =
        residual_diagnostics(config.params, config.spec, realization);
    REQUIRE(report.per_component.size() == 1);
    CHECK(report.per_component[0].pvalue >= 0.0);
    CHECK(report.per_component[0].pvalue <= 1.0);
    CHECK(report.per_component_increments[0].size() == realization.size());
    CHECK(report.has_mark_report);
    // marks drawn from the true law: the PIT is uniform
    CHECK(report.mark_uniform.pvalue > 1e-4);
}

TEST_CASE("pooled fit matches the closed form for poisson data") {
    const std::vector<Realization> reps = poisson_reps(10, 500.0, 98);
    const FitResult pooled = fit_pooled(ModelSpec::poisson(1), reps);
    double events = 0.0;
    for (const auto& r : reps) events += static_cast<double>(r.size());
    CHECK(pooled.params.m[0] == doctest::Approx(events / 5000.0).epsilon(1e-12));

    // pooled linear fit lands near the truth
    SimConfig config = experiments::linear_scenario(0.6, 2.0, 500.0, 99);
    const std::vector<Realization> hawkes_reps = simulate_repetitions(config, 6);
    const FitResult linear_pooled = fit_pooled(ModelSpec::linear(1), hawkes_reps);
    CHECK(linear_pooled.converged);
    CHECK(std::abs(linear_pooled.params.a(0, 0) - 0.6) < 0.15);
    CHECK(std::abs(linear_pooled.params.b(0, 0) - 2.0) < 0.5);
}
