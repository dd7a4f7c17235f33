#pragma once

#include <cmath>
#include <cstdint>

namespace ferryline {

/// Deterministic 64-bit generator (splitmix64). Used instead of the standard
/// <random> engines so that streams are bit-stable across platforms and
/// standard-library versions.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1], safe as a log argument.
    double uniform_open() { return 1.0 - uniform(); }

    double exponential(double mean) { return -mean * std::log(uniform_open()); }

    /// Standard normal via Box-Muller (no spare caching, one value per call).
    double normal() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double lognormal(double log_mean, double log_sigma) {
        return std::exp(log_mean + log_sigma * normal());
    }

    double pareto(double scale, double shape) {
        return scale * std::pow(uniform_open(), -1.0 / shape);
    }

  private:
    std::uint64_t state_;
};

/// Stable stream splitting: mixes a parent seed with a label so per-block
/// substreams are independent of iteration order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (label + 1)));
    return g.next();
}

}  // namespace ferryline
