#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "subexp/boxmax.hpp"
#include "subexp/function.hpp"

namespace subexp {

/// max{X_1,...,X_n}, the largest unbiased estimator of the upper mean.
double max_estimator(std::span<const double> sample);

/// min{X_1,...,X_n}, the smallest unbiased estimator of the lower mean.
double min_estimator(std::span<const double> sample);

/// (min, max): the optimal estimate of the mean-uncertainty interval.
std::pair<double, double> estimate_interval(std::span<const double> sample);

enum class MeanTarget { upper, lower };

enum class Verdict { unbiased, biased, inconclusive_at_budget };

struct BiasWitness {
    double mu_lower;
    double mu_upper;
    double achieved;
};

struct EstimatorVerdict {
    MeanTarget target = MeanTarget::upper;
    Verdict verdict = Verdict::unbiased;
    std::optional<BiasWitness> witness;       // present iff biased
    std::vector<std::pair<double, double>> grid_tested;
    double tol = 0.0;
    bool lipschitz_declared = false;
    bool unbiased() const { return verdict == Verdict::unbiased; }
};

/// The built-in falsification grid for the "for all mu_lower <= mu_upper"
/// quantifier: all ordered pairs (including degenerate ones) from
/// {-2, -0.5, 0, 0.3, 1, 2.5}: 21 pairs spanning signs, zero and
/// degeneracy. A necessary-condition check, not a proof.
std::vector<std::pair<double, double>> default_parameter_grid();

/// Decides whether f(X_1,...,X_n) is unbiased for the chosen mean when the
/// X_i are maximal i.i.d.: on each grid pair the box maximum (resp. minimum)
/// of f over [mu_lower, mu_upper]^n must equal the upper (resp. lower)
/// mean within tol. A pair where the optimizer ran out of budget yields
/// `inconclusive_at_budget` rather than a bias verdict, unless the achieved
/// value already exceeds the target in the only direction the optimizer
/// cannot overshoot (that is conclusive bias).
EstimatorVerdict check_unbiased(const TestFunction& f, int n, MeanTarget target,
                                std::span<const std::pair<double, double>> grid,
                                double tol = 1e-6, const BoxMaxOptions& opts = {});

/// Same, on the default grid.
EstimatorVerdict check_unbiased(const TestFunction& f, int n, MeanTarget target,
                                double tol = 1e-6, const BoxMaxOptions& opts = {});

struct DominanceReport {
    /// Largest observed violation: max over points of f(x) - max_i x_i for
    /// the upper target (dually min_i x_i - f(x) for the lower target).
    double max_gap = 0.0;
    std::vector<double> witness;
    std::size_t points_tested = 0;
    double tol = 0.0;
    /// True when max_gap <= tol: f never beats the extreme estimator.
    bool dominated = true;
};

/// Pointwise dominance check: every estimator unbiased for the upper mean
/// satisfies f <= max of coordinates, so a positive gap at any tested point
/// disproves unbiasedness claims.
DominanceReport check_dominance(const TestFunction& f, int n,
                                std::span<const std::vector<double>> points,
                                MeanTarget target = MeanTarget::upper, double tol = 1e-9);

/// `count` points drawn uniformly from the box; substreamed from seed.
std::vector<std::vector<double>> uniform_box_points(const Box& box, std::size_t count,
                                                    std::uint64_t seed);

} // namespace subexp
