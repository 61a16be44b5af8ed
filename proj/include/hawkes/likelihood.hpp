#pragma once

#include "hawkes/core.hpp"
#include "hawkes/optim.hpp"
#include "hawkes/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hawkes {

enum class ParamKind { Baseline, Interaction, Decay, Gamma, Psi };

struct ParamEntry {
    ParamKind kind;
    int i = 0; // receiver index (0-based)
    int j = 0; // source index (0-based)
    bool log_transformed = false;
    std::string name;
};

// Canonical flattening of HawkesParams for a given spec: m block, then a,
// then b (per receiver or full), then gamma, then psi for normalized links.
class ParamLayout {
public:
    explicit ParamLayout(const ModelSpec& spec);

    const ModelSpec& spec() const noexcept { return spec_; }
    int size() const noexcept { return static_cast<int>(entries_.size()); }
    const std::vector<ParamEntry>& entries() const noexcept { return entries_; }
    const ParamEntry& entry(int k) const { return entries_[k]; }

    Vec pack(const HawkesParams& params) const;
    HawkesParams unpack(const Vec& theta) const;

    int index_of(const std::string& name) const;
    std::vector<int> gamma_indices() const;

private:
    ModelSpec spec_;
    std::vector<ParamEntry> entries_;
};

struct FitBounds {
    Vec lower;
    Vec upper;

    static FitBounds defaults(const ParamLayout& layout);
    void set(const ParamLayout& layout, const std::string& name, double lo, double hi);
    void fix(const ParamLayout& layout, const std::string& name, double value);
};

struct FitOptions {
    int multistart = 5;
    OptimOptions optim{};
    std::uint64_t seed = 0x5eed0001u; // stream for multistart draws
    int jobs = 0;
    bool compute_fisher = true;
};

struct FitResult {
    HawkesParams params;
    double log_lik = 0.0;
    Matrix fisher; // (-1/T) * Hessian at the optimum, symmetrized
    bool converged = false;
    bool stalled = false; // stopped at the objective's evaluation-noise floor
    int iterations = 0;
    double gradient_norm = 0.0;
    std::vector<double> trajectory;
    ModelSpec spec;

    ParamLayout layout() const { return ParamLayout(spec); }
    // a point usable as a maximizer: converged, or stagnated on a flat ridge
    bool usable() const { return converged || stalled; }
};

double log_likelihood(const HawkesParams& params, const ModelSpec& spec,
                      const Realization& realization, bool include_mark_density = false);

// Layout-ordered gradient: analytic for linear models, central finite
// differences for nonlinear ones.
Vec log_likelihood_gradient(const HawkesParams& params, const ModelSpec& spec,
                            const Realization& realization, bool include_mark_density = false);

FitResult fit_mle(const ModelSpec& spec, const Realization& realization,
                  const std::optional<HawkesParams>& init = std::nullopt,
                  const std::optional<FitBounds>& bounds = std::nullopt,
                  const FitOptions& options = {});

enum class FisherMethod { Hessian, OuterProduct };

Matrix fisher_estimate(const HawkesParams& params, const ModelSpec& spec,
                       const Realization& realization,
                       FisherMethod method = FisherMethod::Hessian);

struct RepetitionFits {
    std::vector<FitResult> per_rep;
    HawkesParams mean_params;
    std::vector<std::string> warnings;
    std::size_t used = 0; // repetitions contributing to the mean
};

RepetitionFits fit_repetitions(const ModelSpec& spec, const std::vector<Realization>& reps,
                               const std::optional<FitBounds>& bounds = std::nullopt,
                               const FitOptions& options = {});

// Likelihood of `eval_points` under the intensity driven by `history`,
// frozen at `params` (both terms use history's events only).
double cross_log_likelihood(const HawkesParams& params, const ModelSpec& spec,
                            const Realization& history, const Realization& eval_points,
                            double t_end);

Vec cross_log_likelihood_gradient(const HawkesParams& params, const ModelSpec& spec,
                                  const Realization& history, const Realization& eval_points,
                                  double t_end);

FitResult fit_cross_mle(const ModelSpec& spec, const Realization& history,
                        const Realization& eval_points, double t_end,
                        const std::optional<HawkesParams>& init = std::nullopt,
                        const FitOptions& options = {});

// Closed-form Exponential(psi) MLE for the mark sample.
double fit_mark_psi(const Realization& realization);

namespace detail {

struct PassOptions {
    bool include_mark_density = false;
    bool want_gradient = false;              // analytic; linear specs only
    std::vector<Vec>* event_scores = nullptr; // per counted event: dlambda/lambda
};

struct PassResult {
    double value = 0.0;
    Vec gradient; // layout order, empty unless want_gradient
};

PassResult likelihood_pass(const HawkesParams& params, const ModelSpec& spec,
                           const std::vector<MarkedEvent>& exciting,
                           const std::vector<MarkedEvent>& counted, double t_end,
                           const ParamLayout& layout, const PassOptions& options);

} // namespace detail

} // namespace hawkes
