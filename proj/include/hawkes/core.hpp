#pragma once

#include "hawkes/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace hawkes {

// phi_ij(kappa) and its gamma/psi partial derivatives for one (i,j) pair.
double mark_link_eval(const ModelSpec& spec, const HawkesParams& params, int i, int j,
                      double kappa);
double link_value(MarkLinkKind kind, double gamma, double psi, double kappa);
double link_dgamma(MarkLinkKind kind, double gamma, double psi, double kappa);
double link_dpsi(MarkLinkKind kind, double gamma, double psi, double kappa);

// Markov state of the exponential kernel sums: s(i,j) holds
// sum_{T_k^j <= t} a_ij phi_ij(kappa_k) exp(-b_ij (t - T_k^j)) at t+.
class IntensityState {
public:
    IntensityState(const ModelSpec& spec, const HawkesParams& params);

    void advance(double dt);
    void apply_event(int component, double mark = kNoMark);

    double last_time() const noexcept { return time_; }
    void set_time(double t) noexcept { time_ = t; }

    double lambda_star(int i) const;       // at current time+
    double lambda_star_at(int i, double dt) const; // decayed by dt, no state change
    Vec lambda_star_vector() const;
    double jump_size(int i, int source, double mark) const;

    const Matrix& raw() const noexcept { return s_; }

private:
    const ModelSpec* spec_;
    const HawkesParams* params_;
    Matrix s_;
    double time_ = 0.0;
};

struct IntensityValue {
    Vec lambda_star; // may be negative under the nonlinear model
    Vec lambda;      // max(lambda_star, 0)
};

// Left limit at t: only events strictly before t contribute.
IntensityValue intensity_at(const HawkesParams& params, const ModelSpec& spec,
                            const Realization& realization, double t);

struct EventLimits {
    std::vector<Vec> left;  // lambda*_i(T_k)
    std::vector<Vec> right; // lambda*_i(T_k+)
};

EventLimits event_left_right_limits(const HawkesParams& params, const ModelSpec& spec,
                                    const Realization& realization);

struct CompensatorResult {
    Vec per_component;
    double total = 0.0;
};

CompensatorResult compensator_linear(const HawkesParams& params, const ModelSpec& spec,
                                     const Realization& realization, double t_end);
CompensatorResult compensator_nonlinear(const HawkesParams& params, const ModelSpec& spec,
                                        const Realization& realization, double t_end);
// Dispatches on spec.linearity.
CompensatorResult compensator(const HawkesParams& params, const ModelSpec& spec,
                              const Realization& realization, double t_end);

// First instant in [t_k, t_next] where a truncated intensity returns to
// positivity after an event.
double restart_time(double lambda_star_plus, double m_i, double b_i, double t_k, double t_next);

struct TimeChangeResult {
    std::vector<Vec> per_component; // Lambda_i at the times of component i's events
    Vec merged_times;               // total Lambda at every event time
    Vec mark_pit;                   // F_psi(kappa_j), empty when unmarked
    Vec horizon_mass;               // Lambda_i(horizon)
    double horizon_mass_total = 0.0;
};

TimeChangeResult time_change(const HawkesParams& params, const ModelSpec& spec,
                             const Realization& realization);

struct StationarityReport {
    double spectral_radius = 0.0;
    bool stationary = false;
    bool normalized = false;
};

StationarityReport stationarity_check(const HawkesParams& params, const ModelSpec& spec,
                                      std::uint64_t mc_seed = 12345, int mc_samples = 200000);

struct IdentifiabilityReport {
    bool ok = false;
    std::vector<std::vector<bool>> per_pair; // d x d
};

IdentifiabilityReport identifiability_check(const Realization& realization,
                                            const ModelSpec& spec);

namespace detail {

// Integrates max(lambda*_i, 0) (or lambda*_i itself when truncate=false) with
// adaptive Simpson splits at event times and sign changes. Brute-force O(N)
// intensity evaluation throughout: this is the test oracle, kept independent
// of the recursive compensator path.
double quadrature_compensator_component(const HawkesParams& params, const ModelSpec& spec,
                                        const Realization& realization, int i, double t_end,
                                        bool truncate, double abs_tol = 1e-10);

} // namespace detail

} // namespace hawkes
