#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "subexp/rng.hpp"

namespace subexp {

/// What a history-feedback rule gets to see: the realized sample values so
/// far and their running sum (kept by the engine so mean-based rules stay
/// O(1) per step).
struct HistoryView {
    std::span<const double> values;
    double sum = 0.0;
    std::size_t steps() const { return values.size(); }
    double mean() const { return values.empty() ? 0.0 : sum / values.size(); }
};

/// A rule mapping sample history to the next scenario choice: the
/// adversary's strategy when estimating upper expectations. Immutable;
/// choices depend only on the history and the supplied generator.
class Policy {
public:
    enum class Kind { constant, cyclic, feedback, mixture };

    static Policy constant(std::size_t scenario_index);
    static Policy cyclic(std::vector<std::size_t> schedule);
    /// Deterministic rule: history -> scenario index.
    static Policy feedback(std::string label,
                           std::function<std::size_t(const HistoryView&)> rule);
    /// Scenario drawn per step from fixed nonnegative weights.
    static Policy mixture(std::vector<double> weights);

    Kind kind() const { return kind_; }
    const std::string& describe() const { return label_; }

    /// Next scenario index; validates against the family size.
    std::size_t choose(const HistoryView& history, Rng& rng, std::size_t n_scenarios) const;

    /// True when choose() never consults history (lets the engine skip
    /// history bookkeeping on long horizons).
    bool history_free() const { return kind_ != Kind::feedback; }

private:
    Policy() = default;
    Kind kind_ = Kind::constant;
    std::string label_;
    std::size_t index_ = 0;
    std::vector<std::size_t> schedule_;
    std::function<std::size_t(const HistoryView&)> rule_;
    std::vector<double> weights_;
};

/// One constant policy per scenario, the minimal set that already attains
/// the upper expectation for single-draw statistics.
std::vector<Policy> constant_policies(std::size_t n_scenarios);

/// Sample-value policies for distributions whose scenario set is a
/// continuum of point masses: the choice is the next sample value itself.
class ValuePolicy {
public:
    enum class Kind { constant, schedule, feedback, random_grid };

    static ValuePolicy constant(double y);
    /// Values replayed cyclically.
    static ValuePolicy schedule(std::vector<double> values);
    static ValuePolicy feedback(std::string label,
                                std::function<double(const HistoryView&)> rule);
    /// Value drawn per step from a finite grid, uniformly or by weight.
    static ValuePolicy random_grid(std::vector<double> values,
                                   std::vector<double> weights = {});

    Kind kind() const { return kind_; }
    const std::string& describe() const { return label_; }
    double choose(const HistoryView& history, Rng& rng) const;
    bool history_free() const { return kind_ != Kind::feedback; }

private:
    ValuePolicy() = default;
    Kind kind_ = Kind::constant;
    std::string label_;
    double value_ = 0.0;
    std::vector<double> values_;
    std::vector<double> weights_;
    std::function<double(const HistoryView&)> rule_;
};

} // namespace subexp
