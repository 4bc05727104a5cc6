#include "subexp/scenario.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "subexp/errors.hpp"

namespace subexp {

ScenarioFamily::ScenarioFamily(std::vector<Scenario> scenarios)
    : scenarios_(std::move(scenarios)) {
    if (scenarios_.empty()) throw InputError("ScenarioFamily: at least one scenario required");
    std::set<std::string> labels;
    for (const auto& s : scenarios_) {
        if (!s.sample) throw InputError("ScenarioFamily: scenario '" + s.label + "' has no sampler");
        if (!labels.insert(s.label).second)
            throw InputError("ScenarioFamily: duplicate scenario label '" + s.label + "'");
    }
}

const Scenario& ScenarioFamily::at(std::size_t i) const {
    if (i >= scenarios_.size())
        throw InputError("ScenarioFamily: scenario index " + std::to_string(i) +
                         " out of range (size " + std::to_string(scenarios_.size()) + ")");
    return scenarios_[i];
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

Scenario dirac_scenario(double c) {
    return {"dirac(" + fmt(c) + ")", [c](Rng&) { return c; }};
}

Scenario bernoulli_scenario(double p) {
    if (p < 0.0 || p > 1.0) throw InputError("bernoulli: p must lie in [0,1]");
    return {"bernoulli(" + fmt(p) + ")", [p](Rng& rng) { return rng.bernoulli(p) ? 1.0 : 0.0; }};
}

Scenario normal_scenario(double mu, double sigma) {
    if (sigma < 0.0) throw InputError("normal: sigma must be nonnegative");
    return {"normal(" + fmt(mu) + "," + fmt(sigma) + ")",
            [mu, sigma](Rng& rng) { return rng.normal(mu, sigma); }};
}

Scenario uniform_scenario(double a, double b) {
    if (a > b) throw InputError("uniform: need a <= b");
    return {"uniform(" + fmt(a) + "," + fmt(b) + ")",
            [a, b](Rng& rng) { return rng.uniform(a, b); }};
}

Scenario pareto_scenario(double alpha) {
    if (alpha <= 0.0) throw InputError("pareto: alpha must be positive");
    return {"pareto(" + fmt(alpha) + ")", [alpha](Rng& rng) { return rng.pareto(alpha); }};
}

ScenarioFamily dirac_grid_family(double lo, double hi, int count) {
    if (count < 1) throw InputError("dirac_grid_family: count must be >= 1");
    if (lo > hi) throw InputError("dirac_grid_family: need lo <= hi");
    std::vector<Scenario> s;
    s.reserve(count);
    if (count == 1) {
        s.push_back(dirac_scenario(0.5 * (lo + hi)));
    } else {
        for (int i = 0; i < count; ++i) {
            double y = (i == count - 1) ? hi : lo + (hi - lo) * i / (count - 1);
            s.push_back(dirac_scenario(y));
        }
    }
    return ScenarioFamily(std::move(s));
}

namespace {

std::vector<double> parse_args(const std::string& inner, const std::string& name) {
    std::vector<double> args;
    std::string cur;
    std::istringstream stream(inner);
    while (std::getline(stream, cur, ',')) {
        try {
            std::size_t used = 0;
            double v = std::stod(cur, &used);
            while (used < cur.size() && std::isspace(static_cast<unsigned char>(cur[used]))) ++used;
            if (used != cur.size()) throw std::invalid_argument(cur);
            args.push_back(v);
        } catch (const std::exception&) {
            throw InputError("family spec: bad numeric argument '" + cur + "' in " + name);
        }
    }
    return args;
}

} // namespace

ScenarioFamily parse_family(const std::string& spec) {
    std::vector<Scenario> scenarios;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        while (pos < spec.size() &&
               (spec[pos] == ',' || std::isspace(static_cast<unsigned char>(spec[pos]))))
            ++pos;
        if (pos >= spec.size()) break;
        std::size_t open = spec.find('(', pos);
        if (open == std::string::npos)
            throw InputError("family spec: expected 'name(args)' at '" + spec.substr(pos) + "'");
        std::size_t close = spec.find(')', open);
        if (close == std::string::npos)
            throw InputError("family spec: missing ')' in '" + spec.substr(pos) + "'");
        std::string name = spec.substr(pos, open - pos);
        std::vector<double> args = parse_args(spec.substr(open + 1, close - open - 1), name);
        auto need = [&](std::size_t k) {
            if (args.size() != k)
                throw InputError("family spec: '" + name + "' takes " + std::to_string(k) +
                                 " argument(s), got " + std::to_string(args.size()));
        };
        if (name == "dirac") { need(1); scenarios.push_back(dirac_scenario(args[0])); }
        else if (name == "bernoulli") { need(1); scenarios.push_back(bernoulli_scenario(args[0])); }
        else if (name == "normal") { need(2); scenarios.push_back(normal_scenario(args[0], args[1])); }
        else if (name == "uniform") { need(2); scenarios.push_back(uniform_scenario(args[0], args[1])); }
        else if (name == "pareto") { need(1); scenarios.push_back(pareto_scenario(args[0])); }
        else if (name == "diracgrid") {
            need(3);
            ScenarioFamily grid = dirac_grid_family(args[0], args[1], static_cast<int>(args[2]));
            for (std::size_t i = 0; i < grid.size(); ++i) scenarios.push_back(grid.at(i));
        } else {
            throw InputError("family spec: unknown scenario type '" + name + "'");
        }
        pos = close + 1;
    }
    return ScenarioFamily(std::move(scenarios));
}

} // namespace subexp
