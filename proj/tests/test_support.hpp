#pragma once

#include <cmath>
#include <vector>

#include "subexp/function.hpp"
#include "subexp/grouped.hpp"
#include "subexp/maximal.hpp"
#include "subexp/rng.hpp"

namespace subexp::testing {

/// Random smooth Lipschitz function: a three-term mixture of sinusoids of
/// plane waves, f(x) = sum_j a_j sin(w_j <u_j, x> + b_j) with |a_j| <= 1,
/// unit direction u_j and frequency w_j in [1, max_freq]. The exact
/// Lipschitz constant sum |a_j| w_j is attached.
inline TestFunction random_lipschitz_mixture(int n, std::uint64_t seed,
                                             double max_freq = 6.0) {
    Rng rng(substream_key(seed, 0x6d6978, n));
    struct Term {
        double a, w, b;
        std::vector<double> u;
    };
    std::vector<Term> terms(3);
    double lipschitz = 0.0;
    for (auto& t : terms) {
        t.a = rng.uniform(-1.0, 1.0);
        t.w = rng.uniform(1.0, max_freq);
        t.b = rng.uniform(0.0, 6.283185307179586);
        t.u.resize(n);
        double norm = 0.0;
        for (double& c : t.u) {
            c = rng.normal();
            norm += c * c;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-12) norm = 1.0;
        for (double& c : t.u) c /= norm;
        lipschitz += std::abs(t.a) * t.w;
    }
    return TestFunction(
        "sin_mixture(" + std::to_string(seed) + ")", n,
        [terms](std::span<const double> x) {
            double s = 0.0;
            for (const auto& t : terms) {
                double dot = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) dot += t.u[i] * x[i];
                s += t.a * std::sin(t.w * dot + t.b);
            }
            return s;
        },
        lipschitz);
}

/// Sample stream laid out in triangle order: stream position p belongs to
/// group k(p); its value comes from that group's policy (groups past
/// `policies.size()` wrap around). With constant policies, group g's
/// triangle samples are exactly the policy value.
inline std::vector<double> triangle_stream(const MaximalDistribution& m,
                                           const std::vector<ValuePolicy>& policies,
                                           std::int64_t k, std::int64_t n,
                                           std::uint64_t seed) {
    std::uint64_t length = trn(n, k);
    std::vector<double> stream(length);
    // Per-group paths drawn first so each group sees its own contiguous
    // history, then scattered into triangle positions.
    std::uint64_t max_group = trn_inverse(length).second;
    for (std::uint64_t g = 1; g <= max_group; ++g) {
        const ValuePolicy& pol = policies[(g - 1) % policies.size()];
        // Longest position index i with trn(i, g) <= length.
        std::int64_t len = 0;
        while (trn(len + 1, static_cast<std::int64_t>(g)) <= length) ++len;
        if (len == 0) continue;
        PathResult path = sample_path(m, pol, static_cast<int>(len), substream_key(seed, g, 0));
        for (std::int64_t i = 1; i <= len; ++i)
            stream[trn(i, static_cast<std::int64_t>(g)) - 1] = path.values[i - 1];
    }
    return stream;
}

/// Simpson's rule on [a, b].
template <typename F>
double simpson(F&& f, double a, double b, int intervals) {
    if (intervals % 2 == 1) ++intervals;
    double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace subexp::testing
