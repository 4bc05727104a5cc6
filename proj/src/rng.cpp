#include "subexp/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace subexp {

namespace {

// SplitMix64 step (Steele, Lea, Flood 2014). Used only for key derivation.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t substream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t state = seed;
    std::uint64_t k = splitmix64(state);
    state ^= a + 0x517cc1b727220a95ULL;
    k ^= splitmix64(state);
    state ^= b + 0x2545f4914f6cdd1dULL;
    k ^= splitmix64(state);
    return k;
}

double Rng::normal() {
    // u1 in (0, 1] so the log is finite.
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::pareto(double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("pareto: alpha must be positive");
    double u = 1.0 - uniform01();
    return std::pow(u, -1.0 / alpha);
}

double Rng::exponential(double rate) {
    if (rate <= 0.0) throw std::invalid_argument("exponential: rate must be positive");
    return -std::log(1.0 - uniform01()) / rate;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    // Rejection sampling to avoid modulo bias.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

std::size_t Rng::weighted_index(std::span<const double> weights) {
    if (weights.empty()) throw std::invalid_argument("weighted_index: empty weights");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw std::invalid_argument("weighted_index: weights must be finite and nonnegative");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("weighted_index: weights sum to zero");
    double target = uniform01() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        cum += weights[i];
        if (target < cum) return i;
    }
    return weights.size() - 1;
}

} // namespace subexp
