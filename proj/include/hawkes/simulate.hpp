#pragma once

#include "hawkes/core.hpp"
#include "hawkes/types.hpp"

#include <cstdint>
#include <vector>

namespace hawkes {

struct SimConfig {
    ModelSpec spec;
    HawkesParams params;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t max_events = 10'000'000; // explosion guard

    void validate() const;
};

struct SimDiagnostics {
    double spectral_radius = 0.0;
    bool stationary_warning = false;
    std::uint64_t candidates = 0;
    std::uint64_t accepted = 0;
};

// Exact thinning simulation with dominating rate sum_i max(lambda*_i(t+), m_i),
// re-tightened after every candidate. Deterministic given the seed.
Realization simulate_hawkes(const SimConfig& config, SimDiagnostics* diagnostics = nullptr);

Realization simulate_poisson(double rate, double horizon, std::uint64_t seed);

// Inhomogeneous Poisson process whose intensity is the fitted Hawkes
// intensity frozen at `params` and driven by `history`'s events, treated as
// a deterministic function of time.
Realization simulate_inhomogeneous_poisson(const HawkesParams& params, const ModelSpec& spec,
                                           const Realization& history, double horizon,
                                           std::uint64_t seed);

// n independent repetitions with per-repetition streams derive_stream(seed, r).
std::vector<Realization> simulate_repetitions(const SimConfig& config, std::size_t n,
                                              int jobs = 0);

} // namespace hawkes
