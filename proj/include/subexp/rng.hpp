#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace subexp {

/// Derives a 64-bit substream key from a master seed and two stream
/// coordinates (typically policy index and replication index).
///
/// Stream-splitting rule: the master seed and both coordinates are fed
/// through a SplitMix64 chain, so substream(s, a, b) == substream(s, a', b')
/// only when (a, b) == (a', b'). Every stochastic routine in this library
/// draws from the substream assigned to its (policy, replication) pair and
/// never from a shared stream, which makes parallel runs reproducible.
std::uint64_t substream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

/// Seedable random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; all variate transforms below are
/// implemented here (not via std::*_distribution, which is not portable
/// across standard libraries). Integer and uniform draws are bit-portable;
/// transforms that go through libm (normal, pareto, exponential) can differ
/// in the last ulp between platforms but are fully deterministic on any
/// one of them.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Box-Muller (two uniforms per variate, no cache).
    double normal();

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    /// Pareto with scale 1: P(X > x) = x^-alpha for x >= 1.
    double pareto(double alpha);

    double exponential(double rate);

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Index drawn from a finite weight vector (weights need not sum to 1).
    std::size_t weighted_index(std::span<const double> weights);

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace subexp
