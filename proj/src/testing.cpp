#include "hawkes/testing.hpp"

#include "hawkes/parallel.hpp"
#include "hawkes/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace hawkes::testing {

namespace {

constexpr double kConditionGuard = 1e12;

Matrix require_fisher(const FitResult& fit) {
    if (fit.fisher.empty())
        throw Error(ErrorCode::SingularFisher, "fit carries no usable Fisher estimate");
    return fit.fisher;
}

double two_sided_pvalue(double z) { return 2.0 * (1.0 - stats::normal_cdf(std::abs(z))); }

} // namespace

TestReport test_single_coefficient(const FitResult& fit, double t_max, int coef_index,
                                   double theta0, double alpha, Tail tail) {
    if (!fit.converged)
        throw Error(ErrorCode::NumericalFailure, "coefficient test requires a converged fit");
    const Matrix fisher = require_fisher(fit);
    const Matrix inv = guarded_inverse(fisher, kConditionGuard);
    const double var = inv(coef_index, coef_index);
    if (!(var > 0.0))
        throw Error(ErrorCode::NonPositiveVariance, "nonpositive variance estimate");
    const double sigma = std::sqrt(var);
    const ParamLayout layout(fit.spec);
    const Vec theta = layout.pack(fit.params);
    const double z = std::sqrt(t_max) * (theta[coef_index] - theta0) / sigma;

    TestReport report;
    report.name = "coef:" + layout.entry(coef_index).name;
    report.statistic = z;
    report.alpha = alpha;
    switch (tail) {
        case Tail::TwoSided: report.pvalue = two_sided_pvalue(z); break;
        case Tail::Greater: report.pvalue = 1.0 - stats::normal_cdf(z); break;
        case Tail::Less: report.pvalue = stats::normal_cdf(z); break;
    }
    report.reject = report.pvalue < alpha;
    report.details["sigma_hat"] = sigma;
    report.details["estimate"] = theta[coef_index];
    report.details["theta0"] = theta0;
    return report;
}

TestReport test_single_coefficient(const FitResult& fit, double t_max,
                                   const std::string& coef_name, double theta0, double alpha,
                                   Tail tail) {
    const ParamLayout layout(fit.spec);
    return test_single_coefficient(fit, t_max, layout.index_of(coef_name), theta0, alpha, tail);
}

TestReport test_coefficient_equality(const FitResult& fit, double t_max, int index_i,
                                     int index_j, double alpha) {
    if (!fit.converged)
        throw Error(ErrorCode::NumericalFailure, "equality test requires a converged fit");
    const ParamLayout layout(fit.spec);
    const Vec theta = layout.pack(fit.params);

    TestReport report;
    report.name = "equality:" + layout.entry(index_i).name + "=" + layout.entry(index_j).name;
    report.alpha = alpha;
    if (index_i == index_j) {
        report.statistic = 0.0;
        report.pvalue = 1.0;
        report.reject = false;
        return report;
    }
    const Matrix inv = guarded_inverse(require_fisher(fit), kConditionGuard);
    const double var = inv(index_i, index_i) - 2.0 * inv(index_i, index_j) +
                       inv(index_j, index_j);
    if (!(var > 0.0))
        throw Error(ErrorCode::NonPositiveVariance, "nonpositive variance of the difference");
    const double z = std::sqrt(t_max) * (theta[index_i] - theta[index_j]) / std::sqrt(var);
    report.statistic = z;
    report.pvalue = two_sided_pvalue(z);
    report.reject = report.pvalue < alpha;
    report.details["difference"] = theta[index_i] - theta[index_j];
    report.details["sigma_hat"] = std::sqrt(var / t_max);
    return report;
}

TestReport test_coefficient_equality(const FitResult& fit, double t_max,
                                     const std::string& name_i, const std::string& name_j,
                                     double alpha) {
    const ParamLayout layout(fit.spec);
    return test_coefficient_equality(fit, t_max, layout.index_of(name_i),
                                     layout.index_of(name_j), alpha);
}

CorrectionResult multiple_testing_correct(const std::vector<double>& pvalues,
                                          Correction method, double alpha) {
    const std::size_t k = pvalues.size();
    CorrectionResult out;
    out.reject.assign(k, false);
    out.adjusted.assign(k, 1.0);
    if (k == 0) return out;

    if (method == Correction::Bonferroni) {
        for (std::size_t i = 0; i < k; ++i) {
            out.adjusted[i] = std::min(1.0, pvalues[i] * static_cast<double>(k));
            out.reject[i] = pvalues[i] < alpha / static_cast<double>(k);
        }
        return out;
    }

    // Benjamini-Hochberg step-up
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
    std::size_t cutoff = 0; // number of rejections
    for (std::size_t r = k; r >= 1; --r) {
        if (pvalues[order[r - 1]] <= static_cast<double>(r) / static_cast<double>(k) * alpha) {
            cutoff = r;
            break;
        }
    }
    for (std::size_t r = 0; r < cutoff; ++r) out.reject[order[r]] = true;
    double running = 1.0;
    for (std::size_t r = k; r >= 1; --r) {
        const double adj =
            pvalues[order[r - 1]] * static_cast<double>(k) / static_cast<double>(r);
        running = std::min(running, adj);
        out.adjusted[order[r - 1]] = running;
    }
    return out;
}

TestReport test_mark_zscore(const Realization& realization, const ModelSpec& unmarked_spec,
                            const ModelSpec& marked_spec, double alpha, GammaTying tying,
                            const FitOptions& fit_options) {
    if (!link_is_normalized(marked_spec.mark_link))
        throw Error(ErrorCode::NotNormalizedLink,
                    "the score test requires a normalized mark link");
    if (!realization.marked())
        throw Error(ErrorCode::MissingMark, "the score test requires marked data");
    const IdentifiabilityReport ident = identifiability_check(realization, marked_spec);
    if (!ident.ok)
        throw Error(ErrorCode::InvalidData,
                    "marks do not identify the link parameters (need two distinct positive "
                    "marks per component)");

    FitOptions unmarked_options = fit_options;
    const FitResult unmarked_fit = fit_mle(unmarked_spec, realization, std::nullopt,
                                           std::nullopt, unmarked_options);
    if (!unmarked_fit.converged)
        throw Error(ErrorCode::NumericalFailure, "unmarked fit did not converge");

    // zero-gamma embedding of the unmarked MLE into the marked model
    HawkesParams embedded = HawkesParams::zeros(marked_spec);
    embedded.m = unmarked_fit.params.m;
    embedded.a = unmarked_fit.params.a;
    embedded.b = unmarked_fit.params.b;
    embedded.psi = fit_mark_psi(realization);

    const ParamLayout layout(marked_spec);
    const Vec score = log_likelihood_gradient(embedded, marked_spec, realization, false);
    // outer-product information: positive semidefinite by construction, so the
    // statistic stays a proper quadratic form away from H0 as well
    const Matrix fisher_rate =
        fisher_estimate(embedded, marked_spec, realization, FisherMethod::OuterProduct);
    Matrix fisher_total = fisher_rate; // unnormalized: T * Ihat
    for (auto& v : fisher_total.data()) v *= realization.horizon();

    const std::vector<int> gamma_idx = layout.gamma_indices();
    const int d = marked_spec.dimension;

    // optional tying of the gamma coordinates
    std::vector<std::vector<int>> groups;
    switch (tying) {
        case GammaTying::PerPair:
            for (int g : gamma_idx) groups.push_back({g});
            break;
        case GammaTying::PerReceiver:
            groups.assign(d, {});
            for (int g : gamma_idx) groups[layout.entry(g).i].push_back(g);
            break;
        case GammaTying::Common:
            groups.assign(1, {});
            for (int g : gamma_idx) groups[0].push_back(g);
            break;
    }
    const int p_full = layout.size();
    const int p_tied = p_full - static_cast<int>(gamma_idx.size()) +
                       static_cast<int>(groups.size());

    // Jacobian of full params w.r.t. tied params (identity off the gamma block)
    Matrix jac(p_full, p_tied);
    {
        std::vector<int> tied_of_full(p_full, -1);
        int next = 0;
        std::vector<int> group_col(groups.size(), -1);
        for (int k = 0; k < p_full; ++k) {
            const bool is_gamma =
                std::find(gamma_idx.begin(), gamma_idx.end(), k) != gamma_idx.end();
            if (!is_gamma) {
                tied_of_full[k] = next++;
            }
        }
        for (std::size_t g = 0; g < groups.size(); ++g) group_col[g] = next++;
        for (int k = 0; k < p_full; ++k)
            if (tied_of_full[k] >= 0) jac(k, tied_of_full[k]) = 1.0;
        for (std::size_t g = 0; g < groups.size(); ++g)
            for (int k : groups[g]) jac(k, group_col[g]) = 1.0;

        Vec tied_score(p_tied, 0.0);
        for (int k = 0; k < p_full; ++k)
            for (int c = 0; c < p_tied; ++c) tied_score[c] += jac(k, c) * score[k];
        const Matrix tied_fisher = mat_mul(mat_mul(jac.transposed(), fisher_total), jac);
        const Matrix inv = guarded_inverse(tied_fisher, kConditionGuard);

        double statistic = 0.0;
        for (std::size_t gi = 0; gi < groups.size(); ++gi)
            for (std::size_t gj = 0; gj < groups.size(); ++gj)
                statistic += tied_score[group_col[gi]] * inv(group_col[gi], group_col[gj]) *
                             tied_score[group_col[gj]];

        TestReport report;
        report.name = "mark_zscore";
        report.statistic = statistic;
        report.alpha = alpha;
        const int dof = static_cast<int>(groups.size());
        report.pvalue = stats::chi2_sf(std::max(statistic, 0.0), dof);
        report.reject = report.pvalue < alpha;
        report.details["dof"] = dof;
        report.details["psi_hat"] = embedded.psi;
        double score_norm = 0.0;
        for (int g : gamma_idx) score_norm += score[g] * score[g];
        report.details["score_norm"] = std::sqrt(score_norm);
        return report;
    }
}

TestReport test_bootstrap_coefficient(const Realization& realization, const ModelSpec& spec,
                                      const std::string& coef_name, double theta0,
                                      int num_bootstrap, double alpha, std::uint64_t seed,
                                      const FitOptions& fit_options) {
    if (num_bootstrap < 50)
        throw Error(ErrorCode::InvalidConfig, "bootstrap requires at least 50 replicates");
    const FitResult fit = fit_mle(spec, realization, std::nullopt, std::nullopt, fit_options);
    if (!fit.converged)
        throw Error(ErrorCode::NumericalFailure, "bootstrap base fit did not converge");

    const ParamLayout layout(spec);
    const int coef = layout.index_of(coef_name);
    const double t_max = realization.horizon();

    std::vector<double> draws(num_bootstrap,
                              std::numeric_limits<double>::quiet_NaN());
    FitOptions refit_options = fit_options;
    refit_options.multistart = 1; // refits start from the fitted parameter
    refit_options.jobs = 1;
    refit_options.compute_fisher = false;
    const int jobs = fit_options.jobs > 0 ? fit_options.jobs : default_jobs();
    parallel_for_index(static_cast<std::size_t>(num_bootstrap), jobs, [&](std::size_t b) {
        try {
            const Realization sim = simulate_inhomogeneous_poisson(
                fit.params, spec, realization, t_max, derive_stream(seed, b));
            if (sim.size() == 0) return;
            const FitResult refit =
                fit_cross_mle(spec, realization, sim, t_max, fit.params, refit_options);
            if (!refit.usable()) return;
            draws[b] = layout.pack(refit.params)[coef];
        } catch (const Error&) {
            // failed replicate dropped below
        }
    });

    Vec kept;
    kept.reserve(draws.size());
    for (double v : draws)
        if (std::isfinite(v)) kept.push_back(v);
    if (kept.size() < static_cast<std::size_t>(0.8 * num_bootstrap))
        throw Error(ErrorCode::NumericalFailure,
                    "more than 20% of bootstrap replicates failed to refit");

    const stats::Moments moments = stats::empirical_moments(kept);
    if (!(moments.sd > 0.0))
        throw Error(ErrorCode::NonPositiveVariance, "bootstrap standard deviation is zero");
    const double estimate = layout.pack(fit.params)[coef];
    const double z = (estimate - theta0) / moments.sd;

    TestReport report;
    report.name = "bootstrap:" + layout.entry(coef).name;
    report.statistic = z;
    report.alpha = alpha;
    report.pvalue = two_sided_pvalue(z);
    report.reject = report.pvalue < alpha;
    report.details["sigma_bootstrap"] = moments.sd;
    report.details["bootstrap_mean"] = moments.mean;
    report.details["estimate"] = estimate;
    report.details["theta0"] = theta0;
    report.details["replicates_used"] = static_cast<double>(kept.size());
    return report;
}

namespace {

struct TransformedRep {
    Vec times;     // time-changed event times for the tested component/merge
    double mass = 0.0; // Lambda at the horizon
};

// canonical content order makes subset draws invariant to input relabeling
std::vector<std::size_t> canonical_order(const std::vector<Realization>& reps) {
    std::vector<std::size_t> order(reps.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](std::size_t r) {
        const auto& events = reps[r].events();
        const double first = events.empty() ? 0.0 : events.front().time;
        double sum = 0.0;
        for (const auto& e : events) sum += e.time;
        return std::tuple<std::size_t, double, double>(events.size(), first, sum);
    };
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    return order;
}

std::vector<std::size_t> draw_subset(Rng& rng, std::size_t n, std::size_t p) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t k = 0; k < p; ++k) {
        const std::size_t j =
            k + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - k));
        std::swap(pool[k], pool[std::min(j, n - 1)]);
    }
    pool.resize(p);
    return pool;
}

struct GofPrepared {
    std::vector<TransformedRep> transformed; // in canonical order
    HawkesParams common_params;
    std::size_t fits_used = 0;
    std::size_t p_of_n = 0;
    double xi = 0.0;
};

GofPrepared gof_prepare(const std::vector<Realization>& reps, const ModelSpec& spec,
                        const GofOptions& options) {
    const std::size_t n = reps.size();
    if (n < 2) throw Error(ErrorCode::RequiresRepetitions, "Test 5 requires repetitions");
    GofPrepared prep;
    prep.p_of_n = options.p_of_n > 0
                      ? options.p_of_n
                      : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    if (prep.p_of_n < 1 || prep.p_of_n > n)
        throw Error(ErrorCode::InvalidConfig, "p_of_n must lie in 1..n");

    // Step 1-2: per-repetition MLEs and their mean (or the pooled MLE)
    if (options.pooled_fit) {
        const FitResult pooled = fit_pooled(spec, reps, options.fit_options);
        prep.common_params = pooled.params;
        prep.fits_used = n;
    } else {
        FitOptions fo = options.fit_options;
        fo.compute_fisher = false;
        fo.jobs = options.jobs;
        const RepetitionFits fits = fit_repetitions(spec, reps, std::nullopt, fo);
        const double failure_rate =
            1.0 - static_cast<double>(fits.used) / static_cast<double>(n);
        if (failure_rate > 0.05)
            throw Error(ErrorCode::NumericalFailure,
                        "more than 5% of per-repetition fits failed; aborting the GoF run");
        prep.common_params = fits.mean_params;
        prep.fits_used = fits.used;
    }

    // Step 3a: time-change every repetition at the common parameter
    const std::vector<std::size_t> order = canonical_order(reps);
    prep.transformed.resize(n);
    const int jobs = options.jobs > 0 ? options.jobs : default_jobs();
    parallel_for_index(n, jobs, [&](std::size_t slot) {
        const Realization& rep = reps[order[slot]];
        const TimeChangeResult tc = time_change(prep.common_params, spec, rep);
        TransformedRep tr;
        if (options.component == 0) {
            tr.times = tc.merged_times;
            tr.mass = tc.horizon_mass_total;
        } else {
            if (options.component < 1 || options.component > spec.dimension)
                throw Error(ErrorCode::InvalidConfig, "component out of range");
            tr.times = tc.per_component[options.component - 1];
            tr.mass = tc.horizon_mass[options.component - 1];
        }
        prep.transformed[slot] = std::move(tr);
    });

    // Step 3c: xi, auto-calibrated against a pre-scan of candidate subsets
    if (options.xi > 0.0) {
        prep.xi = options.xi;
    } else {
        double min_mass = std::numeric_limits<double>::infinity();
        for (int scan = 0; scan < 1000; ++scan) {
            Rng rng(derive_stream(options.seed ^ 0xA5C3ULL, static_cast<std::uint64_t>(scan)));
            const auto subset = draw_subset(rng, n, prep.p_of_n);
            double mass = 0.0;
            for (std::size_t r : subset) mass += prep.transformed[r].mass;
            min_mass = std::min(min_mass, mass);
        }
        prep.xi = 0.8 * min_mass / static_cast<double>(prep.p_of_n);
    }
    return prep;
}

double subset_pvalue(const GofPrepared& prep, const std::vector<std::size_t>& subset) {
    const double window = prep.xi * static_cast<double>(prep.p_of_n);
    double mass = 0.0;
    for (std::size_t r : subset) mass += prep.transformed[r].mass;
    if (!(window < mass))
        throw Error(ErrorCode::XiTooLarge,
                    "xi * p exceeds the cumulated compensator mass of a subset");

    Vec cumulated;
    double offset = 0.0;
    for (std::size_t r : subset) {
        for (double t : prep.transformed[r].times) {
            const double shifted = offset + t;
            if (shifted <= window) cumulated.push_back(shifted / window);
        }
        offset += prep.transformed[r].mass;
        if (offset > window) break;
    }
    if (cumulated.empty())
        throw Error(ErrorCode::EmptySample, "no transformed points fall inside the window");
    return stats::ks_test_uniform(std::move(cumulated)).pvalue;
}

} // namespace

FitResult fit_pooled(const ModelSpec& spec, const std::vector<Realization>& reps,
                     const FitOptions& options) {
    if (reps.empty()) throw Error(ErrorCode::RequiresRepetitions, "no repetitions");
    if (spec.baseline_only) {
        FitResult fit;
        fit.spec = spec;
        fit.params = HawkesParams::zeros(spec);
        double horizon_sum = 0.0;
        Vec counts(spec.dimension, 0.0);
        for (const auto& rep : reps) {
            horizon_sum += rep.horizon();
            for (int i = 0; i < spec.dimension; ++i)
                counts[i] += static_cast<double>(rep.count_component(i + 1));
        }
        for (int i = 0; i < spec.dimension; ++i) {
            if (!(counts[i] > 0.0))
                throw Error(ErrorCode::EmptyComponent, "empty component in pooled fit");
            fit.params.m[i] = counts[i] / horizon_sum;
        }
        fit.converged = true;
        for (const auto& rep : reps) fit.log_lik += log_likelihood(fit.params, spec, rep);
        return fit;
    }

    // start from the mean of per-repetition fits, then ascend the pooled sum
    FitOptions rep_options = options;
    rep_options.compute_fisher = false;
    const RepetitionFits fits = fit_repetitions(spec, reps, std::nullopt, rep_options);
    const ParamLayout layout(spec);
    const bool include_mark = link_is_normalized(spec.mark_link);

    auto pooled_value = [&](const HawkesParams& params) {
        double total = 0.0;
        for (const auto& rep : reps) {
            detail::PassOptions po;
            po.include_mark_density = include_mark;
            const detail::PassResult res = detail::likelihood_pass(
                params, spec, rep.events(), rep.events(), rep.horizon(), layout, po);
            if (!std::isfinite(res.value)) return res.value;
            total += res.value;
        }
        return total;
    };

    Objective pooled = [&](const Vec& x, Vec* grad) -> double {
        Vec raw = x;
        for (int k = 0; k < layout.size(); ++k)
            if (layout.entry(k).log_transformed) raw[k] = std::exp(x[k]);
        HawkesParams params = layout.unpack(raw);
        double total = 0.0;
        Vec raw_grad(layout.size(), 0.0);
        const bool analytic = spec.linearity == Linearity::Linear;
        if (analytic || grad == nullptr) {
            for (const auto& rep : reps) {
                detail::PassOptions po;
                po.include_mark_density = include_mark;
                po.want_gradient = grad != nullptr;
                const detail::PassResult res = detail::likelihood_pass(
                    params, spec, rep.events(), rep.events(), rep.horizon(), layout, po);
                if (!std::isfinite(res.value)) {
                    if (grad) grad->assign(x.size(), 0.0);
                    return res.value;
                }
                total += res.value;
                if (po.want_gradient)
                    for (int k = 0; k < layout.size(); ++k) raw_grad[k] += res.gradient[k];
            }
        } else {
            total = pooled_value(params);
            if (!std::isfinite(total)) {
                grad->assign(x.size(), 0.0);
                return total;
            }
            const FitBounds fbl = FitBounds::defaults(layout);
            for (int k = 0; k < layout.size(); ++k) {
                const double h = 6.0554544523933e-06 * std::max(1.0, std::abs(raw[k]));
                Vec hi = raw, lo = raw;
                hi[k] += h;
                double denom = 2.0 * h;
                if (raw[k] - h > fbl.lower[k]) {
                    lo[k] -= h;
                } else {
                    lo = raw;
                    denom = h;
                }
                raw_grad[k] =
                    (pooled_value(layout.unpack(hi)) - pooled_value(layout.unpack(lo))) / denom;
            }
        }
        if (grad) {
            grad->resize(layout.size());
            for (int k = 0; k < layout.size(); ++k)
                (*grad)[k] = layout.entry(k).log_transformed ? raw_grad[k] * raw[k]
                                                             : raw_grad[k];
        }
        return total;
    };

    const FitBounds fb = FitBounds::defaults(layout);
    Vec lower = fb.lower, upper = fb.upper;
    Vec x0 = layout.pack(fits.mean_params);
    for (int k = 0; k < layout.size(); ++k)
        if (layout.entry(k).log_transformed) {
            lower[k] = std::log(std::max(fb.lower[k], 1e-12));
            upper[k] = std::log(fb.upper[k]);
            x0[k] = std::log(x0[k]);
        }
    const OptimResult opt = maximize_bfgs(pooled, x0, lower, upper, options.optim);

    FitResult fit;
    fit.spec = spec;
    Vec raw = opt.x;
    for (int k = 0; k < layout.size(); ++k)
        if (layout.entry(k).log_transformed) raw[k] = std::exp(opt.x[k]);
    fit.params = layout.unpack(raw);
    if (spec.marked() && spec.has_mark_density && !include_mark)
        fit.params.psi = fits.mean_params.psi;
    fit.log_lik = opt.value;
    fit.converged = opt.converged;
    fit.iterations = opt.iterations;
    fit.gradient_norm = opt.grad_norm;
    return fit;
}

GofReport gof_subsample_test(const std::vector<Realization>& reps, const ModelSpec& spec,
                             const GofOptions& options) {
    const GofPrepared prep = gof_prepare(reps, spec, options);
    const std::size_t n = reps.size();

    GofReport report;
    report.per_subset_pvalues.assign(options.num_subsets, 0.0);
    const int jobs = options.jobs > 0 ? options.jobs : default_jobs();
    parallel_for_index(options.num_subsets, jobs, [&](std::size_t s) {
        Rng rng(derive_stream(options.seed, s));
        const auto subset = draw_subset(rng, n, prep.p_of_n);
        report.per_subset_pvalues[s] = subset_pvalue(prep, subset);
    });

    const stats::BandResult band =
        stats::uniform_band(options.num_subsets, options.alpha, options.band_mc_reps);
    report.band = stats::band_check(report.per_subset_pvalues, band);
    for (double p : report.per_subset_pvalues)
        if (p < 0.05) ++report.rejection_count_at_05;
    Vec sorted = report.per_subset_pvalues;
    std::sort(sorted.begin(), sorted.end());
    report.ks_distance_to_uniform = stats::ks_statistic(sorted);
    report.common_params = prep.common_params;
    report.fits_used = prep.fits_used;
    report.xi_used = prep.xi;
    report.p_of_n_used = prep.p_of_n;
    return report;
}

double gof_single_subset(const std::vector<Realization>& reps, const ModelSpec& spec,
                         const GofOptions& options) {
    const GofPrepared prep = gof_prepare(reps, spec, options);
    Rng rng(derive_stream(options.seed, 0));
    const auto subset = draw_subset(rng, reps.size(), prep.p_of_n);
    return subset_pvalue(prep, subset);
}

ModelComparisonResult model_comparison(const std::vector<Realization>& reps,
                                       const std::vector<ModelSpec>& specs,
                                       const GofOptions& options) {
    if (specs.size() < 2)
        throw Error(ErrorCode::InvalidConfig, "model comparison requires at least two specs");
    ModelComparisonResult out;
    out.reports.reserve(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        GofReport report = gof_subsample_test(reps, specs[s], options); // shared subset seeds
        if (report.model_label.empty())
            report.model_label = "spec" + std::to_string(s + 1);
        out.reports.push_back(std::move(report));
    }
    out.ranking.resize(specs.size());
    std::iota(out.ranking.begin(), out.ranking.end(), 0);
    std::stable_sort(out.ranking.begin(), out.ranking.end(), [&](std::size_t a, std::size_t b) {
        return out.reports[a].ks_distance_to_uniform < out.reports[b].ks_distance_to_uniform;
    });
    return out;
}

ResidualReport residual_diagnostics(const HawkesParams& params, const ModelSpec& spec,
                                    const Realization& realization) {
    const TimeChangeResult tc = time_change(params, spec, realization);
    ResidualReport report;
    report.per_component_increments.resize(spec.dimension);
    for (int i = 0; i < spec.dimension; ++i) {
        Vec increments;
        double prev = 0.0;
        for (double t : tc.per_component[i]) {
            increments.push_back(t - prev);
            prev = t;
        }
        report.per_component_increments[i] = increments;
        if (!increments.empty())
            report.per_component.push_back(stats::ks_test_exp1(increments));
        else
            report.per_component.push_back(stats::KsReport{0.0, 1.0});
    }
    if (!tc.merged_times.empty() && tc.horizon_mass_total > 0.0) {
        Vec rescaled;
        rescaled.reserve(tc.merged_times.size());
        for (double t : tc.merged_times) rescaled.push_back(t / tc.horizon_mass_total);
        report.merged_uniform = stats::ks_test_uniform(std::move(rescaled));
    }
    if (!tc.mark_pit.empty()) {
        report.mark_uniform = stats::ks_test_uniform(tc.mark_pit);
        report.has_mark_report = true;
    }
    return report;
}

} // namespace hawkes::testing
