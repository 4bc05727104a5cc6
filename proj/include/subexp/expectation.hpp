#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "subexp/function.hpp"
#include "subexp/policy.hpp"
#include "subexp/scenario.hpp"

namespace subexp {

struct ExpectationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    Policy policy_achieving = Policy::constant(0);
    std::size_t policy_index = 0;
    int replications = 0;
};

/// Monte Carlo estimate of the upper sublinear expectation of
/// f(X_1, ..., X_horizon): for each policy, the sample mean of f over
/// `replications` simulated paths; the reported value is the max over the
/// supplied policies (a lower bound on the true upper expectation, up to MC
/// error, since only the supplied policies are searched).
///
/// Path r under policy p draws from the substream keyed by (p, r); the
/// policy's own randomness and the scenario samplers share that substream.
/// Identical inputs give bit-identical estimates regardless of `threads`.
ExpectationEstimate upper_expectation_mc(const ScenarioFamily& family,
                                         std::span<const Policy> policies,
                                         const TestFunction& f, int horizon,
                                         int replications, std::uint64_t seed,
                                         int threads = 0);

/// -upper_expectation_mc(family, policies, -f, ...): the lower expectation.
ExpectationEstimate lower_expectation_mc(const ScenarioFamily& family,
                                         std::span<const Policy> policies,
                                         const TestFunction& f, int horizon,
                                         int replications, std::uint64_t seed,
                                         int threads = 0);

struct DualityReport {
    ExpectationEstimate lower;
    ExpectationEstimate upper;
    /// lower.value <= upper.value + 3 * (sum of both std errors).
    bool consistent = false;
};

DualityReport duality_check(const ScenarioFamily& family, std::span<const Policy> policies,
                            const TestFunction& f, int horizon, int replications,
                            std::uint64_t seed, int threads = 0);

/// Simulates one path of length `horizon` under a policy: at each step the
/// policy picks a scenario given the history, the scenario's sampler draws
/// the next value. Exposed for the grouped-estimation experiments.
void simulate_path(const ScenarioFamily& family, const Policy& policy, int horizon,
                   Rng& rng, std::vector<double>& out);

inline constexpr int kDefaultReplications = 10000;

} // namespace subexp
