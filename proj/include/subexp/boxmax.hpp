#pragma once

#include <optional>
#include <vector>

#include "subexp/function.hpp"

namespace subexp {

/// The hypercube [lower, upper]^dim.
struct Box {
    double lower;
    double upper;
    int dim;

    Box(double lo, double hi, int d);
    double width() const { return upper - lower; }
    bool degenerate() const { return lower == upper; }
    bool contains(std::span<const double> x) const;
};

struct OptResult {
    double value = 0.0;
    std::vector<double> argmax;
    /// Present when the function declares a Lipschitz constant:
    /// true max <= value + certificate_gap.
    std::optional<double> certificate_gap;
    long evaluations = 0;
    /// Set when the evaluation budget ran out before refinement converged.
    /// The result is still the best point found, never a silent failure.
    bool budget_exhausted = false;
};

struct BoxMaxOptions {
    double tol = 1e-6;      // value tolerance
    long budget = 100000;   // max objective evaluations per call
    bool allow_high_dim = false;
    int refine_starts = 6;  // multistart count for local refinement
};

/// Global maximization of f over the box: coarse uniform grid scan with the
/// per-axis resolution chosen from the budget, then pattern-search
/// refinement from the best grid cells. Deterministic; argmax ties on the
/// grid resolve to the lexicographically smallest point. Boxes of dimension
/// above 10 are refused unless allow_high_dim is set.
OptResult box_maximize(const TestFunction& f, const Box& box, const BoxMaxOptions& opts = {});

/// The same maximum computed as an iterated one-dimensional problem:
/// max_{x_1} max_{x_2} ... max_{x_n} f, where every inner layer is itself a
/// maximized function of the remaining coordinates. Each layer runs a 1D
/// grid of ~budget^(1/n) points plus golden-section refinement, so the
/// total number of f evaluations grows geometrically with n (reported in
/// the result). Serves as an independent route to box_maximize.
OptResult nested_maximize(const TestFunction& f, double lower, double upper, int n,
                          const BoxMaxOptions& opts = {});

/// The exact sublinear expectation of f(X_1, ..., X_n) when the X_i are
/// i.i.d. with maximal distribution on [mu_lower, mu_upper]: the global
/// maximum of f over the box (up to optimizer tolerance).
double sublinear_eval_maximal(const TestFunction& f, double mu_lower, double mu_upper,
                              int n, const BoxMaxOptions& opts = {});

/// Same call but returning the full optimizer result.
OptResult sublinear_eval_maximal_result(const TestFunction& f, double mu_lower,
                                        double mu_upper, int n,
                                        const BoxMaxOptions& opts = {});

} // namespace subexp
