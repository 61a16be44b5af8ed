#pragma once

#include "hawkes/likelihood.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/stats.hpp"

#include <map>
#include <string>
#include <vector>

namespace hawkes::testing {

struct TestReport {
    std::string name;
    double statistic = 0.0;
    double pvalue = 1.0;
    double alpha = 0.05;
    bool reject = false;
    std::map<std::string, double> details;
};

enum class Tail { TwoSided, Greater, Less };

// Wald test of a single coefficient against theta0, standardized by the
// inverse Fisher estimate.
TestReport test_single_coefficient(const FitResult& fit, double t_max, int coef_index,
                                   double theta0, double alpha, Tail tail = Tail::TwoSided);
TestReport test_single_coefficient(const FitResult& fit, double t_max,
                                   const std::string& coef_name, double theta0, double alpha,
                                   Tail tail = Tail::TwoSided);

TestReport test_coefficient_equality(const FitResult& fit, double t_max, int index_i,
                                     int index_j, double alpha);
TestReport test_coefficient_equality(const FitResult& fit, double t_max,
                                     const std::string& name_i, const std::string& name_j,
                                     double alpha);

enum class Correction { Bonferroni, BenjaminiHochberg };

struct CorrectionResult {
    std::vector<bool> reject;
    std::vector<double> adjusted;
};

CorrectionResult multiple_testing_correct(const std::vector<double>& pvalues,
                                          Correction method, double alpha);

enum class GammaTying { PerPair, PerReceiver, Common };

// Score test of gamma = 0: unmarked fit, zero-gamma embedding into the
// normalized marked model, chi-square statistic from the gamma block of the
// inverse total Fisher information.
TestReport test_mark_zscore(const Realization& realization, const ModelSpec& unmarked_spec,
                            const ModelSpec& marked_spec, double alpha,
                            GammaTying tying = GammaTying::PerPair,
                            const FitOptions& fit_options = {});

TestReport test_bootstrap_coefficient(const Realization& realization, const ModelSpec& spec,
                                      const std::string& coef_name, double theta0,
                                      int num_bootstrap, double alpha, std::uint64_t seed,
                                      const FitOptions& fit_options = {});

struct GofOptions {
    std::size_t p_of_n = 0;     // 0: ceil(sqrt(n))
    std::size_t num_subsets = 200;
    double xi = 0.0;            // 0: auto-calibrated with a 0.8 margin
    double alpha = 0.05;
    std::uint64_t seed = 20240001;
    int component = 0;          // 0: merged process, k >= 1: component k only
    bool pooled_fit = false;    // pooled-likelihood common parameter instead of the mean
    int jobs = 0;
    int band_mc_reps = 10000;
    FitOptions fit_options{};
};

struct GofReport {
    std::vector<double> per_subset_pvalues;
    stats::BandResult band;
    std::size_t rejection_count_at_05 = 0;
    double ks_distance_to_uniform = 0.0;
    std::string model_label;
    HawkesParams common_params;
    std::size_t fits_used = 0;
    double xi_used = 0.0;
    std::size_t p_of_n_used = 0;
};

GofReport gof_subsample_test(const std::vector<Realization>& reps, const ModelSpec& spec,
                             const GofOptions& options = {});

// Single random subset, single KS p-value (matches subset 0 of the full run).
double gof_single_subset(const std::vector<Realization>& reps, const ModelSpec& spec,
                         const GofOptions& options = {});

struct ModelComparisonResult {
    std::vector<GofReport> reports;   // one per spec, in input order
    std::vector<std::size_t> ranking; // spec indices, best fit first
};

ModelComparisonResult model_comparison(const std::vector<Realization>& reps,
                                       const std::vector<ModelSpec>& specs,
                                       const GofOptions& options = {});

struct ResidualReport {
    std::vector<Vec> per_component_increments;
    std::vector<stats::KsReport> per_component; // increments vs Exp(1)
    stats::KsReport merged_uniform;             // event times rescaled by total mass
    stats::KsReport mark_uniform;               // PIT of marks, marked models only
    bool has_mark_report = false;
};

// Time-change residuals. A diagnostic, not a calibrated test, when params
// were fitted on the same realization.
ResidualReport residual_diagnostics(const HawkesParams& params, const ModelSpec& spec,
                                    const Realization& realization);

// Pooled-likelihood MLE across repetitions (non-default Test 5 variant).
FitResult fit_pooled(const ModelSpec& spec, const std::vector<Realization>& reps,
                     const FitOptions& options = {});

} // namespace hawkes::testing
