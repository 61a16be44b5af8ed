#pragma once

#include <cmath>
#include <cstdint>

namespace hawkes {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream derivation contract: master seed + task index -> independent stream.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = index + 0x9e3779b97f4a7c15ULL;
    return seed ^ splitmix64(s);
}

// xoshiro256++, seeded through splitmix64. Small, fast, and reproducible
// across platforms, which is all the simulation layer needs.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in (0,1); never returns 0 so log() stays finite.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    double normal() {
        // Marsaglia polar method; one deviate per call, second one discarded
        // to keep the draw count deterministic per call site.
        while (true) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    // log-uniform on [lo, hi], lo > 0
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    Rng split(std::uint64_t index) const {
        std::uint64_t key = state_[0] ^ rotl(state_[3], 7);
        return Rng(derive_stream(key, index));
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
};

} // namespace hawkes
