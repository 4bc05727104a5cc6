#include "subexp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subexp/errors.hpp"
#include "subexp/rng.hpp"

namespace subexp {

double max_estimator(std::span<const double> sample) {
    if (sample.empty()) throw InputError("max_estimator: empty sample");
    return *std::max_element(sample.begin(), sample.end());
}

double min_estimator(std::span<const double> sample) {
    if (sample.empty()) throw InputError("min_estimator: empty sample");
    return *std::min_element(sample.begin(), sample.end());
}

std::pair<double, double> estimate_interval(std::span<const double> sample) {
    if (sample.empty()) throw InputError("estimate_interval: empty sample");
    auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
    return {*lo, *hi};
}

std::vector<std::pair<double, double>> default_parameter_grid() {
    static const double pts[] = {-2.0, -0.5, 0.0, 0.3, 1.0, 2.5};
    std::vector<std::pair<double, double>> grid;
    for (double lo : pts)
        for (double hi : pts)
            if (lo <= hi) grid.emplace_back(lo, hi);
    return grid;
}

EstimatorVerdict check_unbiased(const TestFunction& f, int n, MeanTarget target,
                                std::span<const std::pair<double, double>> grid,
                                double tol, const BoxMaxOptions& opts) {
    if (f.arity() != n)
        throw InputError("check_unbiased: f has arity " + std::to_string(f.arity()) +
                         " but n = " + std::to_string(n));
    if (grid.empty()) throw InputError("check_unbiased: empty parameter grid");
    if (!(tol > 0.0)) throw InputError("check_unbiased: tol must be positive");

    EstimatorVerdict out;
    out.target = target;
    out.tol = tol;
    out.grid_tested.assign(grid.begin(), grid.end());
    out.lipschitz_declared = f.lipschitz().has_value();

    bool any_inconclusive = false;
    for (const auto& [mu_lo, mu_hi] : grid) {
        if (!(mu_lo <= mu_hi))
            throw InputError("check_unbiased: grid pair with mu_lower > mu_upper");
        double achieved, target_mean;
        bool exhausted;
        if (target == MeanTarget::upper) {
            OptResult r = sublinear_eval_maximal_result(f, mu_lo, mu_hi, n, opts);
            achieved = r.value;
            exhausted = r.budget_exhausted;
            target_mean = mu_hi;
        } else {
            OptResult r = sublinear_eval_maximal_result(f.negated(), mu_lo, mu_hi, n, opts);
            achieved = -r.value;
            exhausted = r.budget_exhausted;
            target_mean = mu_lo;
        }
        // The optimizer can only under-explore: the achieved box max is a
        // lower bound on the true max (and the achieved min an upper bound
        // on the true min). Overshoot past the target is therefore
        // conclusive bias even on an exhausted budget; undershoot is not.
        bool conclusive_overshoot = (target == MeanTarget::upper)
                                        ? achieved > target_mean + tol
                                        : achieved < target_mean - tol;
        if (conclusive_overshoot) {
            out.verdict = Verdict::biased;
            out.witness = BiasWitness{mu_lo, mu_hi, achieved};
            return out;
        }
        if (exhausted) {
            any_inconclusive = true;
            continue;
        }
        if (std::abs(achieved - target_mean) > tol) {
            out.verdict = Verdict::biased;
            out.witness = BiasWitness{mu_lo, mu_hi, achieved};
            return out;
        }
    }
    out.verdict = any_inconclusive ? Verdict::inconclusive_at_budget : Verdict::unbiased;
    return out;
}

EstimatorVerdict check_unbiased(const TestFunction& f, int n, MeanTarget target,
                                double tol, const BoxMaxOptions& opts) {
    auto grid = default_parameter_grid();
    return check_unbiased(f, n, target, grid, tol, opts);
}

DominanceReport check_dominance(const TestFunction& f, int n,
                                std::span<const std::vector<double>> points,
                                MeanTarget target, double tol) {
    if (f.arity() != n)
        throw InputError("check_dominance: f has arity " + std::to_string(f.arity()) +
                         " but n = " + std::to_string(n));
    DominanceReport rep;
    rep.tol = tol;
    rep.points_tested = points.size();
    rep.max_gap = -std::numeric_limits<double>::infinity();
    for (const auto& x : points) {
        if (static_cast<int>(x.size()) != n)
            throw InputError("check_dominance: point of wrong dimension");
        double extreme = (target == MeanTarget::upper) ? max_estimator(x) : min_estimator(x);
        double gap = (target == MeanTarget::upper) ? f(x) - extreme : extreme - f(x);
        if (gap > rep.max_gap) {
            rep.max_gap = gap;
            rep.witness = x;
        }
    }
    if (points.empty()) rep.max_gap = 0.0;
    rep.dominated = rep.max_gap <= tol;
    return rep;
}

std::vector<std::vector<double>> uniform_box_points(const Box& box, std::size_t count,
                                                    std::uint64_t seed) {
    std::vector<std::vector<double>> pts(count);
    Rng rng(substream_key(seed, 0x626f78, 0));
    for (auto& p : pts) {
        p.resize(box.dim);
        for (int j = 0; j < box.dim; ++j) p[j] = rng.uniform(box.lower, box.upper);
    }
    return pts;
}

} // namespace subexp
