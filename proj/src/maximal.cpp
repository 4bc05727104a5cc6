#include "subexp/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "subexp/errors.hpp"

namespace subexp {

MaximalDistribution::MaximalDistribution(double lo, double hi) : mu_lower(lo), mu_upper(hi) {
    if (!(lo <= hi)) throw InputError("MaximalDistribution: need mu_lower <= mu_upper");
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw InputError("MaximalDistribution: means must be finite");
}

double dist_op(const TestFunction& phi, const MaximalDistribution& m,
               const BoxMaxOptions& opts) {
    if (phi.arity() != 1) throw InputError("dist_op: phi must have arity 1");
    return box_maximize(phi, Box(m.mu_lower, m.mu_upper, 1), opts).value;
}

MaximalDistribution pushforward_params(const TestFunction& f, const MaximalDistribution& m,
                                       int n, const BoxMaxOptions& opts) {
    double hi = sublinear_eval_maximal(f, m.mu_lower, m.mu_upper, n, opts);
    double lo = -sublinear_eval_maximal(f.negated(), m.mu_lower, m.mu_upper, n, opts);
    // Optimizer tolerance can invert a degenerate interval by a hair.
    if (lo > hi && lo - hi <= 2 * opts.tol) lo = hi;
    return MaximalDistribution(lo, hi);
}

PathResult sample_path(const MaximalDistribution& m, const ValuePolicy& policy, int n,
                       std::uint64_t seed) {
    if (n < 1) throw InputError("sample_path: n must be >= 1");
    PathResult res;
    res.values.reserve(n);
    Rng rng(substream_key(seed, 0, 0));
    double sum = 0.0;
    for (int t = 0; t < n; ++t) {
        HistoryView view{std::span<const double>(res.values.data(), res.values.size()), sum};
        double y = policy.choose(view, rng);
        double clamped = std::clamp(y, m.mu_lower, m.mu_upper);
        if (clamped != y) ++res.clamped;
        res.values.push_back(clamped);
        sum += clamped;
    }
    return res;
}

std::vector<ValuePolicy> grid_sweep_policies(const MaximalDistribution& m, int count) {
    if (count < 1) throw InputError("grid_sweep_policies: count must be >= 1");
    std::vector<ValuePolicy> ps;
    ps.reserve(count);
    if (count == 1) {
        ps.push_back(ValuePolicy::constant(0.5 * (m.mu_lower + m.mu_upper)));
        return ps;
    }
    for (int i = 0; i < count; ++i) {
        double y = (i == count - 1)
                       ? m.mu_upper
                       : m.mu_lower + m.width() * i / (count - 1);
        ps.push_back(ValuePolicy::constant(y));
    }
    return ps;
}

} // namespace subexp
