#include "subexp/policy.hpp"

#include <sstream>

#include "subexp/errors.hpp"

namespace subexp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

Policy Policy::constant(std::size_t scenario_index) {
    Policy p;
    p.kind_ = Kind::constant;
    p.index_ = scenario_index;
    p.label_ = "constant(" + std::to_string(scenario_index) + ")";
    return p;
}

Policy Policy::cyclic(std::vector<std::size_t> schedule) {
    if (schedule.empty()) throw InputError("Policy::cyclic: empty schedule");
    Policy p;
    p.kind_ = Kind::cyclic;
    p.schedule_ = std::move(schedule);
    std::string s = "cyclic(";
    for (std::size_t i = 0; i < p.schedule_.size(); ++i)
        s += (i ? "," : "") + std::to_string(p.schedule_[i]);
    p.label_ = s + ")";
    return p;
}

Policy Policy::feedback(std::string label,
                        std::function<std::size_t(const HistoryView&)> rule) {
    if (!rule) throw InputError("Policy::feedback: missing rule");
    Policy p;
    p.kind_ = Kind::feedback;
    p.rule_ = std::move(rule);
    p.label_ = "feedback(" + label + ")";
    return p;
}

Policy Policy::mixture(std::vector<double> weights) {
    if (weights.empty()) throw InputError("Policy::mixture: empty weights");
    for (double w : weights)
        if (w < 0.0) throw InputError("Policy::mixture: weights must be nonnegative");
    Policy p;
    p.kind_ = Kind::mixture;
    p.weights_ = std::move(weights);
    p.label_ = "mixture(" + std::to_string(p.weights_.size()) + ")";
    return p;
}

std::size_t Policy::choose(const HistoryView& history, Rng& rng,
                           std::size_t n_scenarios) const {
    std::size_t idx = 0;
    switch (kind_) {
        case Kind::constant: idx = index_; break;
        case Kind::cyclic: idx = schedule_[history.steps() % schedule_.size()]; break;
        case Kind::feedback: idx = rule_(history); break;
        case Kind::mixture:
            if (weights_.size() != n_scenarios)
                throw InputError("Policy::mixture: " + std::to_string(weights_.size()) +
                                 " weights for " + std::to_string(n_scenarios) + " scenarios");
            idx = rng.weighted_index(weights_);
            break;
    }
    if (idx >= n_scenarios)
        throw InputError("policy '" + label_ + "' chose scenario " + std::to_string(idx) +
                         ", but the family has " + std::to_string(n_scenarios) + " scenarios");
    return idx;
}

std::vector<Policy> constant_policies(std::size_t n_scenarios) {
    std::vector<Policy> ps;
    ps.reserve(n_scenarios);
    for (std::size_t i = 0; i < n_scenarios; ++i) ps.push_back(Policy::constant(i));
    return ps;
}

ValuePolicy ValuePolicy::constant(double y) {
    ValuePolicy p;
    p.kind_ = Kind::constant;
    p.value_ = y;
    p.label_ = "constant(" + fmt(y) + ")";
    return p;
}

ValuePolicy ValuePolicy::schedule(std::vector<double> values) {
    if (values.empty()) throw InputError("ValuePolicy::schedule: empty schedule");
    ValuePolicy p;
    p.kind_ = Kind::schedule;
    p.values_ = std::move(values);
    std::string s = "schedule(";
    for (std::size_t i = 0; i < p.values_.size(); ++i) s += (i ? "," : "") + fmt(p.values_[i]);
    p.label_ = s + ")";
    return p;
}

ValuePolicy ValuePolicy::feedback(std::string label,
                                  std::function<double(const HistoryView&)> rule) {
    if (!rule) throw InputError("ValuePolicy::feedback: missing rule");
    ValuePolicy p;
    p.kind_ = Kind::feedback;
    p.rule_ = std::move(rule);
    p.label_ = "feedback(" + label + ")";
    return p;
}

ValuePolicy ValuePolicy::random_grid(std::vector<double> values,
                                     std::vector<double> weights) {
    if (values.empty()) throw InputError("ValuePolicy::random_grid: empty grid");
    if (!weights.empty() && weights.size() != values.size())
        throw InputError("ValuePolicy::random_grid: weight count mismatch");
    ValuePolicy p;
    p.kind_ = Kind::random_grid;
    p.values_ = std::move(values);
    p.weights_ = std::move(weights);
    p.label_ = "random_grid(" + std::to_string(p.values_.size()) + ")";
    return p;
}

double ValuePolicy::choose(const HistoryView& history, Rng& rng) const {
    switch (kind_) {
        case Kind::constant: return value_;
        case Kind::schedule: return values_[history.steps() % values_.size()];
        case Kind::feedback: return rule_(history);
        case Kind::random_grid: {
            std::size_t i = weights_.empty()
                                ? static_cast<std::size_t>(rng.below(values_.size()))
                                : rng.weighted_index(weights_);
            return values_[i];
        }
    }
    return value_;
}

} // namespace subexp
