#include "subexp/lln.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "subexp/boxmax.hpp"
#include "subexp/errors.hpp"
#include "subexp/maximal.hpp"
#include "subexp/parallel.hpp"

namespace subexp {

namespace {

// phi applied to the running mean of the whole path.
TestFunction phi_of_mean(const TestFunction& phi, long N) {
    auto p = std::make_shared<TestFunction>(phi);
    return TestFunction(phi.label() + "(mean)", static_cast<int>(N),
                        [p](std::span<const double> x) {
                            double s = 0.0;
                            for (double v : x) s += v;
                            double m = s / x.size();
                            return (*p)(std::span<const double>(&m, 1));
                        });
}

TestFunction abs_mean_minus(double mu, long N) {
    return TestFunction("|mean-" + std::to_string(mu) + "|", static_cast<int>(N),
                        [mu](std::span<const double> x) {
                            double s = 0.0;
                            for (double v : x) s += v;
                            return std::abs(s / x.size() - mu);
                        });
}

} // namespace

LimitSet limit_set_from_family(const ScenarioFamily& family, std::span<const Policy> policies,
                               int replications, std::uint64_t seed, int threads) {
    if (family.dimension() != 1)
        throw InputError("limit_set_from_family: family must be one-dimensional");
    TestFunction id = TestFunction::identity();
    ExpectationEstimate up =
        upper_expectation_mc(family, policies, id, 1, replications, seed, threads);
    ExpectationEstimate lo =
        lower_expectation_mc(family, policies, id, 1, replications, seed, threads);
    LimitSet set;
    set.theta_upper = up.value;
    set.theta_lower = lo.value;
    set.se_upper = up.std_error;
    set.se_lower = lo.std_error;
    return set;
}

std::vector<ConvergenceRow> lln_convergence(const ScenarioFamily& family,
                                            std::span<const Policy> policies,
                                            const TestFunction& phi,
                                            std::span<const long> N_schedule,
                                            const LimitSet& limits, int replications,
                                            std::uint64_t seed, int threads) {
    if (phi.arity() != 1) throw InputError("lln_convergence: phi must have arity 1");
    double lo = std::min(limits.theta_lower, limits.theta_upper);
    double hi = std::max(limits.theta_lower, limits.theta_upper);
    double reference = dist_op(phi, MaximalDistribution(lo, hi));

    std::vector<ConvergenceRow> rows;
    rows.reserve(N_schedule.size());
    for (std::size_t r = 0; r < N_schedule.size(); ++r) {
        long N = N_schedule[r];
        if (N < 1) throw InputError("lln_convergence: sample counts must be positive");
        TestFunction f = phi_of_mean(phi, N);
        ExpectationEstimate est = upper_expectation_mc(
            family, policies, f, static_cast<int>(N), replications,
            substream_key(seed, 0x6c6c6e, r), threads);
        ConvergenceRow row;
        row.N = N;
        row.estimate = est.value;
        row.reference = reference;
        row.gap = std::abs(est.value - reference);
        row.std_error = est.std_error;
        rows.push_back(row);
    }
    return rows;
}

std::vector<ConvergenceRow> lln_convergence(const ScenarioFamily& family,
                                            std::span<const Policy> policies,
                                            const TestFunction& phi,
                                            std::span<const long> N_schedule,
                                            int replications, std::uint64_t seed,
                                            int threads) {
    // Single draws are cheap, so the internally computed limit set always
    // gets at least the stock replication count; a noisy reference would
    // contaminate every gap column.
    LimitSet limits = limit_set_from_family(family, policies,
                                            std::max(replications, kDefaultReplications),
                                            substream_key(seed, 0x6c696d, 0), threads);
    return lln_convergence(family, policies, phi, N_schedule, limits, replications, seed, threads);
}

std::vector<ConvergenceRow> strong_convergence_degenerate(
    const ScenarioFamily& family, std::span<const Policy> policies, double mu,
    std::span<const long> N_schedule, int replications, std::uint64_t seed, int threads) {
    // Cross-check the declared common mean scenario by scenario.
    int check_reps = std::max(replications, kDefaultReplications);
    for (std::size_t s = 0; s < family.size(); ++s) {
        Rng rng(substream_key(seed, 0x6d75, s));
        double sum = 0.0, sumsq = 0.0;
        for (int r = 0; r < check_reps; ++r) {
            double v = family.sample(s, rng);
            sum += v;
            sumsq += v * v;
        }
        double mean = sum / check_reps;
        double var = std::max(0.0, sumsq / check_reps - mean * mean);
        double se = std::sqrt(var / check_reps);
        if (std::abs(mean - mu) > 5.0 * se && std::abs(mean - mu) > 1e-12)
            throw InputError("strong_convergence_degenerate: scenario '" + family.label(s) +
                             "' has MC mean " + std::to_string(mean) +
                             ", inconsistent with declared mu = " + std::to_string(mu));
    }

    std::vector<ConvergenceRow> rows;
    rows.reserve(N_schedule.size());
    for (std::size_t r = 0; r < N_schedule.size(); ++r) {
        long N = N_schedule[r];
        if (N < 1) throw InputError("strong_convergence_degenerate: sample counts must be positive");
        TestFunction f = abs_mean_minus(mu, N);
        ExpectationEstimate est = upper_expectation_mc(
            family, policies, f, static_cast<int>(N), replications,
            substream_key(seed, 0x646567, r), threads);
        ConvergenceRow row;
        row.N = N;
        row.estimate = est.value;
        row.reference = 0.0;
        row.gap = est.value;
        row.std_error = est.std_error;
        rows.push_back(row);
    }
    return rows;
}

UniformIntegrabilityReport uniform_integrability_diagnostic(
    const ScenarioFamily& family, std::span<const double> lambda_schedule, int replications,
    std::uint64_t seed, int threads) {
    if (lambda_schedule.empty())
        throw InputError("uniform_integrability_diagnostic: empty lambda schedule");
    for (std::size_t i = 0; i < lambda_schedule.size(); ++i) {
        if (lambda_schedule[i] <= 0.0)
            throw InputError("uniform_integrability_diagnostic: lambdas must be positive");
        if (i > 0 && lambda_schedule[i] <= lambda_schedule[i - 1])
            throw InputError("uniform_integrability_diagnostic: lambda schedule must increase");
    }
    if (replications < 1)
        throw InputError("uniform_integrability_diagnostic: replications must be >= 1");

    UniformIntegrabilityReport rep;
    rep.rows.resize(lambda_schedule.size());
    std::size_t ns = family.size();

    std::vector<double> means(lambda_schedule.size() * ns);
    std::vector<double> ses(lambda_schedule.size() * ns);
    parallel_for(lambda_schedule.size() * ns, threads, [&](std::size_t job) {
        std::size_t li = job / ns;
        std::size_t s = job % ns;
        double lambda = lambda_schedule[li];
        Rng rng(substream_key(seed, 0x7569 ^ (li << 8), s));
        std::vector<double> vals(replications);
        for (int r = 0; r < replications; ++r) {
            double y = family.sample(s, rng);
            vals[r] = std::max(std::abs(y) - lambda, 0.0);
        }
        bool all_equal = std::all_of(vals.begin(), vals.end(),
                                     [&](double v) { return v == vals.front(); });
        double mean, se;
        if (all_equal) {
            mean = vals.front();
            se = 0.0;
        } else {
            double sum = 0.0;
            for (double v : vals) sum += v;
            mean = sum / replications;
            double ss = 0.0;
            for (double v : vals) ss += (v - mean) * (v - mean);
            se = replications > 1
                     ? std::sqrt(ss / (replications - 1)) / std::sqrt(static_cast<double>(replications))
                     : 0.0;
        }
        means[job] = mean;
        ses[job] = se;
    });

    double peak = 0.0;
    for (std::size_t li = 0; li < lambda_schedule.size(); ++li) {
        TruncatedExcessRow& row = rep.rows[li];
        row.lambda = lambda_schedule[li];
        for (std::size_t s = 0; s < ns; ++s) {
            double m = means[li * ns + s];
            if (s == 0 || m > row.value) {
                row.value = m;
                row.std_error = ses[li * ns + s];
                row.scenario = family.label(s);
            }
        }
        peak = std::max(peak, row.value);
    }
    double last = rep.rows.back().value;
    rep.vanishing = (last == 0.0) || (peak > 0.0 && last <= 0.05 * peak);
    return rep;
}

std::vector<TestFunction> convergence_test_dictionary() {
    std::vector<TestFunction> dict;
    dict.push_back(TestFunction(
        "clip(t,-3,3)", 1,
        [](std::span<const double> x) { return std::clamp(x[0], -3.0, 3.0); }, 1.0, true));
    dict.push_back(TestFunction(
        "min(t^2,9)", 1,
        [](std::span<const double> x) { return std::min(x[0] * x[0], 9.0); }, 6.0, true));
    dict.push_back(TestFunction(
        "tanh(4(t-0.5))", 1,
        [](std::span<const double> x) { return std::tanh(4.0 * (x[0] - 0.5)); }, 4.0, true));
    dict.push_back(TestFunction(
        "exp(-4(t-0.5)^2)", 1,
        [](std::span<const double> x) {
            double d = x[0] - 0.5;
            return std::exp(-4.0 * d * d);
        },
        2.0, true));
    return dict;
}

std::vector<Policy> default_lln_policies(const ScenarioFamily& family, const TestFunction& phi,
                                         long horizon, std::uint64_t seed) {
    if (phi.arity() != 1) throw InputError("default_lln_policies: phi must have arity 1");
    std::vector<Policy> ps = constant_policies(family.size());
    if (family.size() > 1) {
        std::vector<std::size_t> all(family.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        ps.push_back(Policy::cyclic(all));
    }

    // Greedy: estimate each scenario's mean once, then pick the scenario
    // whose mean, extrapolated over the remaining draws, maximizes phi of
    // the projected final mean.
    std::vector<double> scenario_means(family.size());
    for (std::size_t s = 0; s < family.size(); ++s) {
        Rng rng(substream_key(seed, 0x677265, s));
        double sum = 0.0;
        const int reps = 4000;
        for (int r = 0; r < reps; ++r) sum += family.sample(s, rng);
        scenario_means[s] = sum / reps;
    }
    auto p = std::make_shared<TestFunction>(phi);
    long N = horizon;
    auto means = std::make_shared<std::vector<double>>(std::move(scenario_means));
    ps.push_back(Policy::feedback(
        "greedy:" + phi.label(), [p, means, N](const HistoryView& h) {
            std::size_t best = 0;
            double best_val = 0.0;
            long remaining = N - static_cast<long>(h.steps());
            if (remaining < 1) remaining = 1;
            for (std::size_t s = 0; s < means->size(); ++s) {
                double projected = (h.sum + (*means)[s] * remaining) / static_cast<double>(N);
                double val = (*p)(std::span<const double>(&projected, 1));
                if (s == 0 || val > best_val) {
                    best_val = val;
                    best = s;
                }
            }
            return best;
        }));
    return ps;
}

} // namespace subexp
