#pragma once

#include "hawkes/linalg.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hawkes::stats {

double normal_cdf(double x);
double normal_quantile(double p);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double chi2_sf(double x, int dof);

// Regularized incomplete beta I_x(a,b) and its inverse in x.
double incbeta(double a, double b, double x);
double beta_quantile(double p, double a, double b);

// One-sample KS statistic against Uniform(0,1); `sample` must be sorted.
double ks_statistic(const Vec& sorted_sample);
// Asymptotic Kolmogorov p-value with the finite-n argument correction.
double ks_pvalue(double d_statistic, std::size_t n);

struct KsReport {
    double statistic = 0.0;
    double pvalue = 1.0;
};

KsReport ks_test_uniform(Vec sample);            // sorts a copy
KsReport ks_test_exp1(const Vec& increments);    // x -> 1 - exp(-x), then uniform KS

struct BandResult {
    std::size_t n = 0;
    double global_alpha = 0.0;
    double local_level = 0.0; // calibrated pointwise level eta
    Vec lower;
    Vec upper;
    bool inside = false;
    std::optional<std::size_t> first_violation; // 1-based order-statistic index
};

// Simultaneous equal-local-level confidence band for the order statistics of
// n i.i.d. Uniform(0,1) draws. Pointwise bounds are Beta(k, n-k+1) quantiles
// at a level calibrated by Monte Carlo so joint coverage is 1 - global_alpha.
BandResult uniform_band(std::size_t n, double global_alpha, int mc_reps = 10000,
                        std::uint64_t mc_seed = 987654321);

// Checks a sample (sorted internally) against a precomputed band.
BandResult band_check(Vec sample, const BandResult& band);

// Band check of a raw sample against N(0,1) via the probability integral
// transform x -> normal_cdf(x).
BandResult normal_band_check(const Vec& sample, double global_alpha, int mc_reps = 10000);

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

Moments empirical_moments(const Vec& sample);
double empirical_covariance(const Vec& x, const Vec& y);

} // namespace hawkes::stats
