#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subexp/boxmax.hpp"
#include "subexp/errors.hpp"
#include "subexp/estimators.hpp"
#include "subexp/expectation.hpp"
#include "subexp/expr.hpp"
#include "subexp/grouped.hpp"
#include "subexp/lln.hpp"
#include "subexp/maximal.hpp"
#include "subexp/scenario.hpp"

namespace py = pybind11;
using namespace subexp;

namespace {

// Function arguments arrive either as a spec string or as an already
// compiled TestFunction.
TestFunction as_function(const py::object& f, int arity) {
    if (py::isinstance<py::str>(f)) return parse_function(f.cast<std::string>(), arity);
    return f.cast<TestFunction>();
}

std::vector<Policy> policies_from_spec(const ScenarioFamily& family, const std::string& spec) {
    std::vector<Policy> ps = constant_policies(family.size());
    if (spec == "constants") return ps;
    if (spec == "constants+cycle") {
        if (family.size() > 1) {
            std::vector<std::size_t> all(family.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            ps.push_back(Policy::cyclic(all));
        }
        return ps;
    }
    throw InputError("unknown policy set '" + spec + "' (constants | constants+cycle)");
}

py::dict estimate_to_dict(const ExpectationEstimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["std_error"] = e.std_error;
    d["policy"] = e.policy_achieving.describe();
    d["policy_index"] = e.policy_index;
    d["replications"] = e.replications;
    return d;
}

py::dict verdict_to_dict(const EstimatorVerdict& v) {
    py::dict d;
    switch (v.verdict) {
        case Verdict::unbiased: d["verdict"] = "unbiased"; break;
        case Verdict::biased: d["verdict"] = "biased"; break;
        case Verdict::inconclusive_at_budget: d["verdict"] = "inconclusive-at-budget"; break;
    }
    d["target"] = v.target == MeanTarget::upper ? "upper" : "lower";
    d["tol"] = v.tol;
    d["lipschitz_declared"] = v.lipschitz_declared;
    if (v.witness) {
        py::dict w;
        w["mu_lower"] = v.witness->mu_lower;
        w["mu_upper"] = v.witness->mu_upper;
        w["achieved"] = v.witness->achieved;
        d["witness"] = w;
    } else {
        d["witness"] = py::none();
    }
    d["grid"] = v.grid_tested;
    return d;
}

MeanTarget target_from(const std::string& s) {
    if (s == "upper") return MeanTarget::upper;
    if (s == "lower") return MeanTarget::lower;
    throw InputError("target must be 'upper' or 'lower'");
}

BoxMaxOptions make_opts(double tol, long budget, bool allow_high_dim) {
    BoxMaxOptions o;
    o.tol = tol;
    o.budget = budget;
    o.allow_high_dim = allow_high_dim;
    return o;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "statistical estimation under sublinear expectation (C++ core)";
    m.attr("__version__") = "0.1.0";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    py::class_<TestFunction>(m, "TestFunction")
        .def_property_readonly("arity", &TestFunction::arity)
        .def_property_readonly("label", &TestFunction::label)
        .def_property_readonly("lipschitz",
                               [](const TestFunction& f) -> py::object {
                                   if (f.lipschitz()) return py::float_(*f.lipschitz());
                                   return py::none();
                               })
        .def("__call__",
             [](const TestFunction& f, const std::vector<double>& x) { return f(x); })
        .def("__repr__", [](const TestFunction& f) {
            return "<TestFunction '" + f.label() + "' arity=" + std::to_string(f.arity()) + ">";
        });

    m.def("compile_function", &parse_function, py::arg("spec"), py::arg("arity"),
          "Compile a builtin name or arithmetic expression into a TestFunction.");

    py::class_<Box>(m, "Box")
        .def(py::init<double, double, int>(), py::arg("lower"), py::arg("upper"), py::arg("dim"))
        .def_readonly("lower", &Box::lower)
        .def_readonly("upper", &Box::upper)
        .def_readonly("dim", &Box::dim);

    py::class_<OptResult>(m, "OptResult")
        .def_readonly("value", &OptResult::value)
        .def_readonly("argmax", &OptResult::argmax)
        .def_property_readonly("certificate_gap",
                               [](const OptResult& r) -> py::object {
                                   if (r.certificate_gap) return py::float_(*r.certificate_gap);
                                   return py::none();
                               })
        .def_readonly("evaluations", &OptResult::evaluations)
        .def_readonly("budget_exhausted", &OptResult::budget_exhausted)
        .def("__repr__", [](const OptResult& r) {
            return "<OptResult value=" + std::to_string(r.value) + ">";
        });

    m.def(
        "box_maximize",
        [](const py::object& f, double lower, double upper, int dim, double tol, long budget,
           bool allow_high_dim) {
            TestFunction fn = as_function(f, dim);
            return box_maximize(fn, Box(lower, upper, dim), make_opts(tol, budget, allow_high_dim));
        },
        py::arg("f"), py::arg("lower"), py::arg("upper"), py::arg("dim"), py::arg("tol") = 1e-6,
        py::arg("budget") = 100000L, py::arg("allow_high_dim") = false);

    m.def(
        "nested_maximize",
        [](const py::object& f, double lower, double upper, int n, double tol, long budget) {
            TestFunction fn = as_function(f, n);
            return nested_maximize(fn, lower, upper, n, make_opts(tol, budget, false));
        },
        py::arg("f"), py::arg("lower"), py::arg("upper"), py::arg("n"), py::arg("tol") = 1e-6,
        py::arg("budget") = 100000L);

    m.def(
        "sublinear_eval_maximal",
        [](const py::object& f, int n, double mu_lower, double mu_upper, double tol,
           long budget) {
            TestFunction fn = as_function(f, n);
            return sublinear_eval_maximal(fn, mu_lower, mu_upper, n, make_opts(tol, budget, false));
        },
        py::arg("f"), py::arg("n"), py::arg("mu_lower"), py::arg("mu_upper"),
        py::arg("tol") = 1e-6, py::arg("budget") = 100000L);

    py::class_<MaximalDistribution>(m, "MaximalDistribution")
        .def(py::init<double, double>(), py::arg("mu_lower"), py::arg("mu_upper"))
        .def_readonly("mu_lower", &MaximalDistribution::mu_lower)
        .def_readonly("mu_upper", &MaximalDistribution::mu_upper)
        .def("__repr__", [](const MaximalDistribution& d) {
            return "M[" + std::to_string(d.mu_lower) + ", " + std::to_string(d.mu_upper) + "]";
        });

    m.def(
        "dist_op",
        [](const py::object& phi, const MaximalDistribution& M, double tol, long budget) {
            return dist_op(as_function(phi, 1), M, make_opts(tol, budget, false));
        },
        py::arg("phi"), py::arg("M"), py::arg("tol") = 1e-6, py::arg("budget") = 100000L);

    m.def(
        "pushforward_params",
        [](const py::object& f, const MaximalDistribution& M, int n, double tol, long budget) {
            return pushforward_params(as_function(f, n), M, n, make_opts(tol, budget, false));
        },
        py::arg("f"), py::arg("M"), py::arg("n"), py::arg("tol") = 1e-6,
        py::arg("budget") = 100000L);

    py::class_<ValuePolicy>(m, "ValuePolicy")
        .def_static("constant", &ValuePolicy::constant, py::arg("y"))
        .def_static("schedule", &ValuePolicy::schedule, py::arg("values"))
        .def_static("random_grid", &ValuePolicy::random_grid, py::arg("values"),
                    py::arg("weights") = std::vector<double>{})
        .def_property_readonly("label", &ValuePolicy::describe);

    m.def(
        "sample_path",
        [](const MaximalDistribution& M, const ValuePolicy& policy, int n, std::uint64_t seed) {
            PathResult r = sample_path(M, policy, n, seed);
            py::dict d;
            d["values"] = r.values;
            d["clamped"] = r.clamped;
            return d;
        },
        py::arg("M"), py::arg("policy"), py::arg("n"), py::arg("seed"));

    m.def("max_estimator",
          [](const std::vector<double>& xs) { return max_estimator(xs); }, py::arg("sample"));
    m.def("min_estimator",
          [](const std::vector<double>& xs) { return min_estimator(xs); }, py::arg("sample"));
    m.def("estimate_interval",
          [](const std::vector<double>& xs) { return estimate_interval(xs); }, py::arg("sample"));

    m.def("default_parameter_grid", &default_parameter_grid);

    m.def(
        "check_unbiased",
        [](const py::object& f, int n, const std::string& target,
           const std::optional<std::vector<std::pair<double, double>>>& grid, double tol,
           long budget) {
            TestFunction fn = as_function(f, n);
            auto g = grid ? *grid : default_parameter_grid();
            return verdict_to_dict(
                check_unbiased(fn, n, target_from(target), g, tol, make_opts(tol, budget, false)));
        },
        py::arg("f"), py::arg("n"), py::arg("target") = "upper", py::arg("grid") = py::none(),
        py::arg("tol") = 1e-6, py::arg("budget") = 100000L);

    m.def(
        "check_dominance",
        [](const py::object& f, int n, const std::vector<std::vector<double>>& points,
           const std::string& target, double tol) {
            TestFunction fn = as_function(f, n);
            DominanceReport r = check_dominance(fn, n, points, target_from(target), tol);
            py::dict d;
            d["max_gap"] = r.max_gap;
            d["witness"] = r.witness;
            d["points_tested"] = r.points_tested;
            d["dominated"] = r.dominated;
            return d;
        },
        py::arg("f"), py::arg("n"), py::arg("points"), py::arg("target") = "upper",
        py::arg("tol") = 1e-9);

    m.def("trn", &trn, py::arg("i"), py::arg("k"));
    m.def("trn_inverse", &trn_inverse, py::arg("p"));

    m.def(
        "group_mean",
        [](const std::vector<double>& samples, const py::object& phi, std::int64_t k,
           std::int64_t n) { return group_mean(samples, as_function(phi, 1), k, n); },
        py::arg("samples"), py::arg("phi"), py::arg("k"), py::arg("n"));

    py::class_<GroupedEstimate>(m, "GroupedEstimate")
        .def_readonly("phi_label", &GroupedEstimate::phi_label)
        .def_readonly("group_size", &GroupedEstimate::group_size)
        .def_readonly("group_count", &GroupedEstimate::group_count)
        .def_readonly("group_means", &GroupedEstimate::group_means)
        .def_readonly("upper_envelope", &GroupedEstimate::upper_envelope)
        .def_readonly("lower_envelope", &GroupedEstimate::lower_envelope)
        .def_readonly("dropped", &GroupedEstimate::dropped)
        .def("__repr__", [](const GroupedEstimate& e) {
            return "<GroupedEstimate upper=" + std::to_string(e.upper_envelope) +
                   " lower=" + std::to_string(e.lower_envelope) + ">";
        });

    m.def(
        "envelope_estimator",
        [](const std::vector<double>& samples, const py::object& phi, std::int64_t k,
           std::int64_t n) { return envelope_estimator(samples, as_function(phi, 1), k, n); },
        py::arg("samples"), py::arg("phi"), py::arg("k"), py::arg("n"));

    m.def(
        "block_envelope",
        [](const std::vector<double>& samples, const py::object& phi, std::int64_t n) {
            return block_envelope(samples, as_function(phi, 1), n);
        },
        py::arg("samples"), py::arg("phi"), py::arg("n"));

    m.def(
        "upper_expectation_mc",
        [](const std::string& family, const py::object& f, int horizon, int replications,
           std::uint64_t seed, const std::string& policies, int threads) {
            ScenarioFamily fam = parse_family(family);
            TestFunction fn = as_function(f, horizon);
            auto ps = policies_from_spec(fam, policies);
            ExpectationEstimate est;
            {
                py::gil_scoped_release release;
                est = upper_expectation_mc(fam, ps, fn, horizon, replications, seed, threads);
            }
            return estimate_to_dict(est);
        },
        py::arg("family"), py::arg("f"), py::arg("horizon"),
        py::arg("replications") = kDefaultReplications, py::arg("seed") = 0,
        py::arg("policies") = "constants", py::arg("threads") = 0);

    m.def(
        "lower_expectation_mc",
        [](const std::string& family, const py::object& f, int horizon, int replications,
           std::uint64_t seed, const std::string& policies, int threads) {
            ScenarioFamily fam = parse_family(family);
            TestFunction fn = as_function(f, horizon);
            auto ps = policies_from_spec(fam, policies);
            ExpectationEstimate est;
            {
                py::gil_scoped_release release;
                est = lower_expectation_mc(fam, ps, fn, horizon, replications, seed, threads);
            }
            return estimate_to_dict(est);
        },
        py::arg("family"), py::arg("f"), py::arg("horizon"),
        py::arg("replications") = kDefaultReplications, py::arg("seed") = 0,
        py::arg("policies") = "constants", py::arg("threads") = 0);

    m.def(
        "duality_check",
        [](const std::string& family, const py::object& f, int horizon, int replications,
           std::uint64_t seed, const std::string& policies, int threads) {
            ScenarioFamily fam = parse_family(family);
            TestFunction fn = as_function(f, horizon);
            auto ps = policies_from_spec(fam, policies);
            DualityReport rep;
            {
                py::gil_scoped_release release;
                rep = duality_check(fam, ps, fn, horizon, replications, seed, threads);
            }
            py::dict d;
            d["lower"] = estimate_to_dict(rep.lower);
            d["upper"] = estimate_to_dict(rep.upper);
            d["consistent"] = rep.consistent;
            return d;
        },
        py::arg("family"), py::arg("f"), py::arg("horizon"),
        py::arg("replications") = kDefaultReplications, py::arg("seed") = 0,
        py::arg("policies") = "constants", py::arg("threads") = 0);

    m.def(
        "lln_convergence",
        [](const std::string& family, const py::object& phi, const std::vector<long>& schedule,
           int replications, std::uint64_t seed, const std::string& policies, int threads) {
            ScenarioFamily fam = parse_family(family);
            TestFunction fn = as_function(phi, 1);
            auto ps = policies_from_spec(fam, policies);
            std::vector<ConvergenceRow> rows;
            {
                py::gil_scoped_release release;
                rows = lln_convergence(fam, ps, fn, schedule, replications, seed, threads);
            }
            py::list out;
            for (const auto& r : rows) {
                py::dict d;
                d["N"] = r.N;
                d["estimate"] = r.estimate;
                d["reference"] = r.reference;
                d["gap"] = r.gap;
                d["std_error"] = r.std_error;
                out.append(d);
            }
            return out;
        },
        py::arg("family"), py::arg("phi"), py::arg("N_schedule"),
        py::arg("replications") = 1000, py::arg("seed") = 0, py::arg("policies") = "constants",
        py::arg("threads") = 0);

    m.def(
        "uniform_integrability_diagnostic",
        [](const std::string& family, const std::vector<double>& lambdas, int replications,
           std::uint64_t seed, int threads) {
            ScenarioFamily fam = parse_family(family);
            UniformIntegrabilityReport rep;
            {
                py::gil_scoped_release release;
                rep = uniform_integrability_diagnostic(fam, lambdas, replications, seed, threads);
            }
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict d;
                d["lambda"] = r.lambda;
                d["value"] = r.value;
                d["std_error"] = r.std_error;
                d["scenario"] = r.scenario;
                rows.append(d);
            }
            py::dict out;
            out["rows"] = rows;
            out["vanishing"] = rep.vanishing;
            return out;
        },
        py::arg("family"), py::arg("lambda_schedule"), py::arg("replications") = 10000,
        py::arg("seed") = 0, py::arg("threads") = 0);
}
