#pragma once

#include <functional>
#include <string>
#include <vector>

#include "subexp/rng.hpp"

namespace subexp {

/// One candidate probability law: a label plus a seeded sampler.
/// Samplers must be pure functions of the generator state, so identical
/// seeds give identical sample streams.
struct Scenario {
    std::string label;
    std::function<double(Rng&)> sample;
};

/// A finite, sampleable uncertainty set of probability laws. Immutable
/// after construction; the value of the sublinear upper expectation over
/// the family is the max over its members.
class ScenarioFamily {
public:
    explicit ScenarioFamily(std::vector<Scenario> scenarios);

    std::size_t size() const { return scenarios_.size(); }
    const Scenario& at(std::size_t i) const;
    const std::string& label(std::size_t i) const { return at(i).label; }
    double sample(std::size_t i, Rng& rng) const { return at(i).sample(rng); }

    /// Samplers produce scalar draws; everything downstream (limit sets,
    /// maximal distributions) assumes this.
    int dimension() const { return 1; }

private:
    std::vector<Scenario> scenarios_;
};

// Scenario factories.
Scenario dirac_scenario(double c);
Scenario bernoulli_scenario(double p);
Scenario normal_scenario(double mu, double sigma);
Scenario uniform_scenario(double a, double b);
Scenario pareto_scenario(double alpha);

/// Dirac scenarios on `count` evenly spaced points of [lo, hi] (endpoints
/// included). The discrete stand-in for the Dirac family of a maximal
/// distribution.
ScenarioFamily dirac_grid_family(double lo, double hi, int count);

/// Parses a comma-separated list of scenario constructors, e.g.
/// "bernoulli(0.3),bernoulli(0.7)" or "normal(0.5,1),normal(0.5,2)" or
/// "dirac(0),dirac(0.5),dirac(1)". Known names: dirac, bernoulli, normal,
/// uniform, pareto.
ScenarioFamily parse_family(const std::string& spec);

} // namespace subexp
