#include "hawkes/simulate.hpp"

#include "hawkes/parallel.hpp"
#include "hawkes/rng.hpp"

#include <algorithm>
#include <cmath>

namespace hawkes {

void SimConfig::validate() const {
    spec.validate();
    params.validate(spec);
    if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidConfig, "horizon must be positive");
    if (max_events == 0) throw Error(ErrorCode::InvalidConfig, "max_events must be positive");
    if (spec.marked() && (!spec.has_mark_density || !(params.psi > 0.0)))
        throw Error(ErrorCode::InvalidConfig,
                    "simulating a marked model requires the Exponential(psi) mark density");
}

namespace {

// Valid dominating rate until the next accepted event: each lambda*_i is
// monotone toward m_i between events (per-receiver decay), and bounded by
// its current value when all kernel terms are nonnegative (linear case).
double dominating_rate(const IntensityState& state, const HawkesParams& params, int d) {
    double bound = 0.0;
    for (int i = 0; i < d; ++i) bound += std::max(state.lambda_star(i), params.m[i]);
    return bound;
}

int draw_component(Rng& rng, const Vec& lambda, double total) {
    const double threshold = rng.uniform() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        cum += lambda[i];
        if (threshold <= cum) return static_cast<int>(i) + 1;
    }
    return static_cast<int>(lambda.size());
}

} // namespace

Realization simulate_hawkes(const SimConfig& config, SimDiagnostics* diagnostics) {
    config.validate();
    const ModelSpec& spec = config.spec;
    const HawkesParams& params = config.params;
    const int d = spec.dimension;

    SimDiagnostics local;
    const StationarityReport stationarity = stationarity_check(params, spec);
    local.spectral_radius = stationarity.spectral_radius;
    local.stationary_warning = !stationarity.stationary;

    Rng rng(config.seed);
    const ExponentialMarkDistribution mark_dist{params.psi > 0.0 ? params.psi : 1.0};

    std::vector<MarkedEvent> events;
    IntensityState state(spec, params);
    Vec lambda(d);
    double t = 0.0;

    while (true) {
        const double bound = dominating_rate(state, params, d);
        const double wait = rng.exponential(bound);
        const double candidate = t + wait;
        if (candidate >= config.horizon) break;

        state.advance(candidate - t);
        t = candidate;
        ++local.candidates;

        double total = 0.0;
        for (int i = 0; i < d; ++i) {
            const double star = state.lambda_star(i);
            lambda[i] = spec.linearity == Linearity::Linear ? star : std::max(star, 0.0);
            total += lambda[i];
        }
        if (rng.uniform() * bound <= total && total > 0.0) {
            const int component = draw_component(rng, lambda, total);
            double mark = kNoMark;
            if (spec.marked()) mark = mark_dist.sample(rng);
            state.apply_event(component, mark);
            events.push_back(MarkedEvent{t, component, mark});
            ++local.accepted;
            if (events.size() >= config.max_events)
                throw Error(ErrorCode::CapExceeded,
                            "simulation event cap reached; spectral radius is likely >= 1");
        }
    }

    if (diagnostics) *diagnostics = local;
    return Realization(std::move(events), config.horizon, d, spec.marked());
}

Realization simulate_poisson(double rate, double horizon, std::uint64_t seed) {
    if (!(rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "rate must be positive");
    SimConfig config;
    config.spec = ModelSpec::poisson(1);
    config.params = HawkesParams::zeros(config.spec);
    config.params.m[0] = rate;
    config.horizon = horizon;
    config.seed = seed;
    return simulate_hawkes(config);
}

Realization simulate_inhomogeneous_poisson(const HawkesParams& params, const ModelSpec& spec,
                                           const Realization& history, double horizon,
                                           std::uint64_t seed) {
    params.validate(spec);
    const int d = spec.dimension;
    Rng rng(seed);

    // Frozen-intensity state at each history event time; segments between
    // history events keep the monotone decay that justifies the bound.
    const auto& hist = history.events();
    std::vector<MarkedEvent> out;

    IntensityState state(spec, params);
    std::size_t next_hist = 0;
    double t = 0.0;
    Vec lambda(d);

    while (t < horizon) {
        const double seg_end =
            next_hist < hist.size() ? std::min(hist[next_hist].time, horizon) : horizon;
        if (!(t < seg_end)) {
            if (next_hist < hist.size() && hist[next_hist].time <= horizon) {
                state.advance(hist[next_hist].time - state.last_time());
                state.apply_event(hist[next_hist].component, hist[next_hist].mark);
                ++next_hist;
                continue;
            }
            break;
        }
        const double bound = dominating_rate(state, params, d);
        const double wait = rng.exponential(bound);
        const double candidate = t + wait;
        if (candidate >= seg_end) {
            t = seg_end;
            continue;
        }
        t = candidate;
        double total = 0.0;
        for (int i = 0; i < d; ++i) {
            const double star = state.lambda_star_at(i, t - state.last_time());
            lambda[i] = spec.linearity == Linearity::Linear ? star : std::max(star, 0.0);
            total += lambda[i];
        }
        if (rng.uniform() * bound <= total && total > 0.0) {
            const int component = draw_component(rng, lambda, total);
            out.push_back(MarkedEvent{t, component, kNoMark});
        }
    }

    // simulated points carry no marks: the frozen intensity is a
    // deterministic function of time and marks only enter through history
    std::vector<MarkedEvent> cleaned;
    cleaned.reserve(out.size());
    for (const auto& e : out) {
        if (!cleaned.empty() && !(e.time > cleaned.back().time)) continue;
        if (e.time <= 0.0 || e.time >= horizon) continue;
        cleaned.push_back(e);
    }
    return Realization(std::move(cleaned), horizon, d, false);
}

std::vector<Realization> simulate_repetitions(const SimConfig& config, std::size_t n, int jobs) {
    config.validate();
    std::vector<Realization> reps(n);
    const int j = jobs > 0 ? jobs : default_jobs();
    parallel_for_index(n, j, [&](std::size_t r) {
        SimConfig rep_config = config;
        rep_config.seed = derive_stream(config.seed, r);
        reps[r] = simulate_hawkes(rep_config);
    });
    return reps;
}

} // namespace hawkes
