#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subexp/expectation.hpp"
#include "subexp/function.hpp"
#include "subexp/policy.hpp"
#include "subexp/scenario.hpp"

namespace subexp {

/// Triangle numbering of the infinite matrix by anti-diagonals:
/// trn(i, k) = (i+k)(i+k-1)/2 - (k-1) for within-group position i >= 1 and
/// group k >= 1. A bijection between index pairs and positive integers, so
/// the groups cut one sample stream into disjoint subsamples.
std::uint64_t trn(std::int64_t i, std::int64_t k);

/// Inverse of trn: the (position, group) pair owning stream index p >= 1.
std::pair<std::uint64_t, std::uint64_t> trn_inverse(std::uint64_t p);

/// Mean of phi over the k-th triangle group of size n:
/// (1/n) * sum_{i=1..n} phi(samples[trn(i,k)]).
double group_mean(std::span<const double> samples, const TestFunction& phi,
                  std::int64_t k, std::int64_t n);

struct GroupedEstimate {
    std::string phi_label;
    std::uint64_t group_size = 0;   // n
    std::uint64_t group_count = 0;  // k
    std::vector<double> group_means;
    double upper_envelope = 0.0;    // max of group means, estimates the upper mean of phi(X)
    double lower_envelope = 0.0;    // min of group means, the dual estimate of the lower mean
    std::uint64_t dropped = 0;      // tail samples unused by block grouping
};

/// The envelope statistic over triangle groups 1..k of size n: all k group
/// means, their max (the asymptotically largest unbiased estimator of the
/// upper mean of phi(X)) and their min (the dual for the lower mean).
GroupedEstimate envelope_estimator(std::span<const double> samples, const TestFunction& phi,
                                   std::int64_t k, std::int64_t n);

/// Practical variant: consecutive blocks of size n, k = floor(N/n) groups;
/// leftover tail samples are dropped and counted.
GroupedEstimate block_envelope(std::span<const double> samples, const TestFunction& phi,
                               std::int64_t n);

struct ConvergenceEntry {
    std::uint64_t group_size = 0; // n
    double estimate = 0.0;        // max over policies of the mean upper envelope
    double reference = 0.0;       // upper expectation of phi(X) from the family
    double gap = 0.0;             // |estimate - reference|
    double std_error = 0.0;
};

/// For each group size in the schedule, runs the block-envelope estimator on
/// streams of length n*k simulated under every policy and reports the
/// max-over-policies mean envelope against the family's upper expectation
/// of phi(X). The gap shrinking along the schedule is the asymptotic
/// unbiasedness of the envelope statistic.
std::vector<ConvergenceEntry> asymptotic_unbiasedness_experiment(
    const ScenarioFamily& family, std::span<const Policy> policies, const TestFunction& phi,
    std::span<const std::int64_t> n_schedule, std::int64_t k, int replications,
    std::uint64_t seed, int threads = 0);

} // namespace subexp
