#pragma once

#include <cstdint>
#include <vector>

#include "subexp/boxmax.hpp"
#include "subexp/function.hpp"
#include "subexp/policy.hpp"

namespace subexp {

/// The maximal distribution on the interval [mu_lower, mu_upper]: the law
/// whose distribution operator sends a test function to its maximum over
/// the interval. The two parameters are the lower and upper mean.
struct MaximalDistribution {
    double mu_lower;
    double mu_upper;

    MaximalDistribution(double lo, double hi);
    double width() const { return mu_upper - mu_lower; }
    bool degenerate() const { return mu_lower == mu_upper; }
};

/// The distribution operator: max of phi (arity 1) over [mu_lower, mu_upper].
double dist_op(const TestFunction& phi, const MaximalDistribution& m,
               const BoxMaxOptions& opts = {});

/// Parameters of f(X_1, ..., X_n) for maximal i.i.d. X_i: again a maximal
/// distribution, with upper mean the box maximum of f and lower mean the
/// box minimum.
MaximalDistribution pushforward_params(const TestFunction& f, const MaximalDistribution& m,
                                       int n, const BoxMaxOptions& opts = {});

struct PathResult {
    std::vector<double> values;
    /// How many policy outputs fell outside [mu_lower, mu_upper] and were
    /// clamped to the interval.
    int clamped = 0;
};

/// Draws a path of length n: the policy picks each value (the scenario set
/// of a maximal distribution is the point masses on its interval, so a
/// scenario choice IS a value). Outputs outside the interval are clamped
/// and counted. Deterministic given (policy, seed).
PathResult sample_path(const MaximalDistribution& m, const ValuePolicy& policy, int n,
                       std::uint64_t seed);

/// Constant value policies on a `count`-point grid of the interval,
/// the usual adversary set for envelope-recovery experiments.
std::vector<ValuePolicy> grid_sweep_policies(const MaximalDistribution& m, int count);

} // namespace subexp
