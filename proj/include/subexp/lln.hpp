#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subexp/expectation.hpp"
#include "subexp/function.hpp"
#include "subexp/policy.hpp"
#include "subexp/scenario.hpp"

namespace subexp {

/// The interval the normalized sums converge to: [lower mean, upper mean]
/// of a single draw, estimated over the policy set. Carries the MC errors
/// of both endpoints.
struct LimitSet {
    double theta_lower = 0.0;
    double theta_upper = 0.0;
    double se_lower = 0.0;
    double se_upper = 0.0;
};

LimitSet limit_set_from_family(const ScenarioFamily& family, std::span<const Policy> policies,
                               int replications, std::uint64_t seed, int threads = 0);

struct ConvergenceRow {
    long N = 0;
    double estimate = 0.0;
    double reference = 0.0;
    double gap = 0.0; // |estimate - reference|
    double std_error = 0.0;
};

/// Convergence of the upper expectation of phi(S_N/N) to max of phi over
/// the limit set: one row per N in the schedule. The reference maximum is
/// computed by 1D optimization over the limit interval; phi should have
/// (at most) linear growth for the limit statement to apply.
std::vector<ConvergenceRow> lln_convergence(const ScenarioFamily& family,
                                            std::span<const Policy> policies,
                                            const TestFunction& phi,
                                            std::span<const long> N_schedule,
                                            int replications, std::uint64_t seed,
                                            int threads = 0);

/// Same, against a precomputed limit set.
std::vector<ConvergenceRow> lln_convergence(const ScenarioFamily& family,
                                            std::span<const Policy> policies,
                                            const TestFunction& phi,
                                            std::span<const long> N_schedule,
                                            const LimitSet& limits, int replications,
                                            std::uint64_t seed, int threads = 0);

/// Strong convergence in the no-mean-uncertainty case: rows of the upper
/// expectation of |S_N/N - mu|, which tends to zero when every scenario has
/// mean mu. The declared mu is cross-checked per scenario by MC (5 standard
/// errors) before the run; an inconsistent declaration is an input error.
std::vector<ConvergenceRow> strong_convergence_degenerate(
    const ScenarioFamily& family, std::span<const Policy> policies, double mu,
    std::span<const long> N_schedule, int replications, std::uint64_t seed, int threads = 0);

struct TruncatedExcessRow {
    double lambda = 0.0;
    double value = 0.0;      // max over scenarios of the MC mean of (|Y| - lambda)^+
    double std_error = 0.0;  // of the achieving scenario
    std::string scenario;    // achieving scenario label
};

struct UniformIntegrabilityReport {
    std::vector<TruncatedExcessRow> rows;
    /// Heuristic profile check: true when the excess at the last lambda is
    /// zero or negligible against the profile's peak. False flags a family
    /// whose truncated excess does not vanish (heavy tails).
    bool vanishing = false;
};

/// The uniform-integrability hypothesis of the LLN probed on a lambda
/// schedule: per lambda, the worst-scenario truncated excess.
UniformIntegrabilityReport uniform_integrability_diagnostic(
    const ScenarioFamily& family, std::span<const double> lambda_schedule, int replications,
    std::uint64_t seed, int threads = 0);

/// The stock policy set for LLN runs: one constant policy per scenario, one
/// alternating schedule, and one greedy feedback rule that picks the
/// scenario whose estimated mean maximizes phi of the projected final mean.
std::vector<Policy> default_lln_policies(const ScenarioFamily& family, const TestFunction& phi,
                                         long horizon, std::uint64_t seed);

/// Convergence in law quantifies over all bounded Lipschitz test functions;
/// the harness probes it through this finite dictionary instead: clipped
/// linear and quadratic shapes, a soft step, and a bump, all bounded with
/// declared Lipschitz constants.
std::vector<TestFunction> convergence_test_dictionary();

} // namespace subexp
