#include "subexp/grouped.hpp"

#include <algorithm>
#include <cmath>

#include "subexp/errors.hpp"
#include "subexp/parallel.hpp"

namespace subexp {

namespace {

// i + k capped so (i+k)^2 stays well inside uint64.
constexpr std::int64_t kMaxDiagonal = 2'000'000'000;

} // namespace

std::uint64_t trn(std::int64_t i, std::int64_t k) {
    if (i < 1 || k < 1) throw InputError("trn: indices must be positive");
    if (i + k > kMaxDiagonal) throw InputError("trn: index pair too large");
    std::uint64_t s = static_cast<std::uint64_t>(i + k);
    return s * (s - 1) / 2 - static_cast<std::uint64_t>(k - 1);
}

std::pair<std::uint64_t, std::uint64_t> trn_inverse(std::uint64_t p) {
    if (p < 1) throw InputError("trn_inverse: index must be positive");
    // Smallest s with s(s-1)/2 >= p; then p lies on anti-diagonal i+k = s.
    std::uint64_t s = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(p))) / 2.0);
    while (s * (s - 1) / 2 >= p) --s;
    while (s * (s - 1) / 2 < p) ++s;
    std::uint64_t k = s * (s - 1) / 2 - p + 1;
    std::uint64_t i = s - k;
    return {i, k};
}

double group_mean(std::span<const double> samples, const TestFunction& phi,
                  std::int64_t k, std::int64_t n) {
    if (phi.arity() != 1) throw InputError("group_mean: phi must have arity 1");
    if (k < 1 || n < 1) throw InputError("group_mean: k and n must be positive");
    // trn(i,k) grows with i, so the first missing index is the first i whose
    // triangle position falls past the stream.
    for (std::int64_t i = 1; i <= n; ++i) {
        std::uint64_t pos = trn(i, k);
        if (pos > samples.size())
            throw InputError("group_mean: sample stream too short: group " + std::to_string(k) +
                             " position " + std::to_string(i) + " needs stream index " +
                             std::to_string(pos) + " but only " + std::to_string(samples.size()) +
                             " samples were given");
    }
    // Mean of the phi values; identical values short-circuit to the value
    // itself so degenerate streams stay exact.
    double sum = 0.0, first = 0.0;
    bool all_equal = true;
    double x[1];
    for (std::int64_t i = 1; i <= n; ++i) {
        x[0] = samples[trn(i, k) - 1];
        double v = phi(std::span<const double>(x, 1));
        if (i == 1) first = v;
        else if (v != first) all_equal = false;
        sum += v;
    }
    return all_equal ? first : sum / static_cast<double>(n);
}

namespace {

GroupedEstimate finish(GroupedEstimate est) {
    est.upper_envelope = *std::max_element(est.group_means.begin(), est.group_means.end());
    est.lower_envelope = *std::min_element(est.group_means.begin(), est.group_means.end());
    return est;
}

} // namespace

GroupedEstimate envelope_estimator(std::span<const double> samples, const TestFunction& phi,
                                   std::int64_t k, std::int64_t n) {
    if (k < 1 || n < 1) throw InputError("envelope_estimator: k and n must be positive");
    GroupedEstimate est;
    est.phi_label = phi.label();
    est.group_size = static_cast<std::uint64_t>(n);
    est.group_count = static_cast<std::uint64_t>(k);
    est.group_means.reserve(k);
    for (std::int64_t g = 1; g <= k; ++g) est.group_means.push_back(group_mean(samples, phi, g, n));
    return finish(std::move(est));
}

GroupedEstimate block_envelope(std::span<const double> samples, const TestFunction& phi,
                               std::int64_t n) {
    if (phi.arity() != 1) throw InputError("block_envelope: phi must have arity 1");
    if (n < 1) throw InputError("block_envelope: group size must be positive");
    if (samples.size() < static_cast<std::uint64_t>(n))
        throw InputError("block_envelope: need at least " + std::to_string(n) +
                         " samples, got " + std::to_string(samples.size()));
    std::uint64_t k = samples.size() / static_cast<std::uint64_t>(n);
    GroupedEstimate est;
    est.phi_label = phi.label();
    est.group_size = static_cast<std::uint64_t>(n);
    est.group_count = k;
    est.dropped = samples.size() - k * static_cast<std::uint64_t>(n);
    est.group_means.reserve(k);
    double x[1];
    for (std::uint64_t g = 0; g < k; ++g) {
        double sum = 0.0, first = 0.0;
        bool all_equal = true;
        for (std::int64_t i = 0; i < n; ++i) {
            x[0] = samples[g * n + i];
            double v = phi(std::span<const double>(x, 1));
            if (i == 0) first = v;
            else if (v != first) all_equal = false;
            sum += v;
        }
        est.group_means.push_back(all_equal ? first : sum / static_cast<double>(n));
    }
    return finish(std::move(est));
}

std::vector<ConvergenceEntry> asymptotic_unbiasedness_experiment(
    const ScenarioFamily& family, std::span<const Policy> policies, const TestFunction& phi,
    std::span<const std::int64_t> n_schedule, std::int64_t k, int replications,
    std::uint64_t seed, int threads) {
    if (phi.arity() != 1)
        throw InputError("asymptotic_unbiasedness_experiment: phi must have arity 1");
    if (policies.empty())
        throw InputError("asymptotic_unbiasedness_experiment: empty policy list");
    if (k < 1) throw InputError("asymptotic_unbiasedness_experiment: k must be positive");
    if (replications < 1)
        throw InputError("asymptotic_unbiasedness_experiment: replications must be >= 1");

    // Reference: the upper expectation of phi(X) over the family, attained
    // by single-draw constant policies.
    auto constants = constant_policies(family.size());
    ExpectationEstimate ref = upper_expectation_mc(
        family, constants, phi, 1, std::max(replications, kDefaultReplications),
        substream_key(seed, 0x726566, 0), threads);

    std::vector<ConvergenceEntry> rows;
    rows.reserve(n_schedule.size());
    for (std::size_t row = 0; row < n_schedule.size(); ++row) {
        std::int64_t n = n_schedule[row];
        if (n < 1) throw InputError("asymptotic_unbiasedness_experiment: group sizes must be positive");
        std::size_t np = policies.size();
        std::size_t nr = static_cast<std::size_t>(replications);
        std::vector<double> envelopes(np * nr);
        parallel_for(np * nr, threads, [&](std::size_t job) {
            std::size_t p = job / nr;
            std::size_t r = job % nr;
            Rng rng(substream_key(seed, (row << 20) ^ p, r));
            std::vector<double> stream;
            simulate_path(family, policies[p], static_cast<int>(n * k), rng, stream);
            envelopes[job] = block_envelope(stream, phi, n).upper_envelope;
        });

        ConvergenceEntry entry;
        entry.group_size = static_cast<std::uint64_t>(n);
        entry.reference = ref.value;
        bool first = true;
        for (std::size_t p = 0; p < np; ++p) {
            bool all_equal = true;
            for (std::size_t r = 1; r < nr && all_equal; ++r)
                all_equal = envelopes[p * nr + r] == envelopes[p * nr];
            double mean, se;
            if (all_equal) {
                mean = envelopes[p * nr];
                se = 0.0;
            } else {
                double sum = 0.0;
                for (std::size_t r = 0; r < nr; ++r) sum += envelopes[p * nr + r];
                mean = sum / nr;
                double ss = 0.0;
                for (std::size_t r = 0; r < nr; ++r) {
                    double d = envelopes[p * nr + r] - mean;
                    ss += d * d;
                }
                se = nr > 1 ? std::sqrt(ss / (nr - 1)) / std::sqrt(static_cast<double>(nr)) : 0.0;
            }
            if (first || mean > entry.estimate) {
                entry.estimate = mean;
                entry.std_error = se;
                first = false;
            }
        }
        entry.gap = std::abs(entry.estimate - entry.reference);
        rows.push_back(entry);
    }
    return rows;
}

} // namespace subexp
