#include "subexp/expectation.hpp"

#include <cmath>

#include "subexp/errors.hpp"
#include "subexp/parallel.hpp"

namespace subexp {

void simulate_path(const ScenarioFamily& family, const Policy& policy, int horizon,
                   Rng& rng, std::vector<double>& out) {
    out.clear();
    out.reserve(horizon);
    double sum = 0.0;
    for (int t = 0; t < horizon; ++t) {
        HistoryView view{std::span<const double>(out.data(), out.size()), sum};
        std::size_t idx = policy.choose(view, rng, family.size());
        double x = family.sample(idx, rng);
        out.push_back(x);
        sum += x;
    }
}

namespace {

struct PolicyStats {
    double mean = 0.0;
    double std_error = 0.0;
};

// Mean and standard error of one policy's replication values. When every
// replication produced the same value (degenerate settings: Dirac scenarios,
// constant f) the mean is that value and the error is exactly zero.
PolicyStats reduce(const std::vector<double>& values) {
    PolicyStats s;
    bool all_equal = true;
    for (double v : values)
        if (v != values.front()) { all_equal = false; break; }
    if (all_equal) {
        s.mean = values.front();
        s.std_error = 0.0;
        return s;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / values.size();
    double ss = 0.0;
    for (double v : values) {
        double d = v - s.mean;
        ss += d * d;
    }
    std::size_t n = values.size();
    s.std_error = n > 1 ? std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
    return s;
}

} // namespace

ExpectationEstimate upper_expectation_mc(const ScenarioFamily& family,
                                         std::span<const Policy> policies,
                                         const TestFunction& f, int horizon,
                                         int replications, std::uint64_t seed,
                                         int threads) {
    if (policies.empty()) throw InputError("upper_expectation_mc: empty policy list");
    if (horizon < 1) throw InputError("upper_expectation_mc: horizon must be >= 1");
    if (f.arity() != horizon)
        throw InputError("upper_expectation_mc: f has arity " + std::to_string(f.arity()) +
                         " but horizon = " + std::to_string(horizon));
    if (replications < 1) throw InputError("upper_expectation_mc: replications must be >= 1");

    std::size_t np = policies.size();
    std::size_t nr = static_cast<std::size_t>(replications);
    std::vector<double> values(np * nr);

    parallel_for(np * nr, threads, [&](std::size_t job) {
        std::size_t p = job / nr;
        std::size_t r = job % nr;
        Rng rng(substream_key(seed, p, r));
        std::vector<double> path;
        simulate_path(family, policies[p], horizon, rng, path);
        values[job] = f(path);
    });

    ExpectationEstimate best;
    for (std::size_t p = 0; p < np; ++p) {
        std::vector<double> slice(values.begin() + p * nr, values.begin() + (p + 1) * nr);
        PolicyStats s = reduce(slice);
        if (p == 0 || s.mean > best.value) {
            best.value = s.mean;
            best.std_error = s.std_error;
            best.policy_achieving = policies[p];
            best.policy_index = p;
        }
    }
    best.replications = replications;
    return best;
}

ExpectationEstimate lower_expectation_mc(const ScenarioFamily& family,
                                         std::span<const Policy> policies,
                                         const TestFunction& f, int horizon,
                                         int replications, std::uint64_t seed,
                                         int threads) {
    ExpectationEstimate est =
        upper_expectation_mc(family, policies, f.negated(), horizon, replications, seed, threads);
    est.value = -est.value;
    return est;
}

DualityReport duality_check(const ScenarioFamily& family, std::span<const Policy> policies,
                            const TestFunction& f, int horizon, int replications,
                            std::uint64_t seed, int threads) {
    DualityReport rep;
    rep.upper = upper_expectation_mc(family, policies, f, horizon, replications, seed, threads);
    rep.lower = lower_expectation_mc(family, policies, f, horizon, replications, seed, threads);
    double slack = 3.0 * (rep.upper.std_error + rep.lower.std_error);
    rep.consistent = rep.lower.value <= rep.upper.value + slack;
    return rep;
}

} // namespace subexp
