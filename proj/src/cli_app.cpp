#include "subexp/cli_app.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "subexp/boxmax.hpp"
#include "subexp/errors.hpp"
#include "subexp/estimators.hpp"
#include "subexp/expr.hpp"
#include "subexp/grouped.hpp"
#include "subexp/io.hpp"
#include "subexp/lln.hpp"
#include "subexp/scenario.hpp"

namespace subexp::cli {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitBiased = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

struct GlobalOpts {
    std::uint64_t seed = 0;
    bool seed_given = false;
    double tol = 1e-6;
    long budget = 100000;
    int threads = 0;
    std::string out_path;
    std::string plot_path;
};

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "' (field 'config')");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("config file '" + path + "': " + e.what());
    }
}

// Flags win over config-file fields; the config wins over defaults.
template <typename T>
void merge_field(const CLI::App* cmd, const json& file, const std::string& flag,
                 const char* key, T& var) {
    if (cmd->count(flag) > 0) return;
    if (!file.contains(key)) return;
    try {
        var = file.at(key).get<T>();
    } catch (const json::exception&) {
        throw InputError(std::string("config field '") + key + "' has the wrong type");
    }
}

std::string hash_of(const json& cfg) { return hex64(fnv1a64(cfg.dump())); }

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file '" + path + "' (field 'out')");
    out << content;
}

std::string join_semicolon(std::span<const double> xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + format_double(xs[i]);
    return s;
}

json grouped_to_json(const GroupedEstimate& est) {
    return json{{"phi", est.phi_label},
                {"group_size", est.group_size},
                {"group_count", est.group_count},
                {"group_means", est.group_means},
                {"upper_envelope", est.upper_envelope},
                {"lower_envelope", est.lower_envelope},
                {"dropped", est.dropped}};
}

int cmd_eval(const GlobalOpts& g, const std::string& fspec, int n,
             const std::vector<double>& interval) {
    if (fspec.empty()) throw InputError("eval: missing function spec (field 'f')");
    if (interval.size() != 2)
        throw InputError("eval: interval needs exactly two values (field 'interval')");
    if (n < 1) throw InputError("eval: n must be >= 1 (field 'n')");
    double lo = interval[0], hi = interval[1];
    if (!(lo <= hi)) throw InputError("eval: interval must satisfy lo <= hi (field 'interval')");

    json cfg{{"command", "eval"}, {"f", fspec},   {"n", n},        {"interval", interval},
             {"tol", g.tol},      {"budget", g.budget}};

    TestFunction f = parse_function(fspec, n);
    BoxMaxOptions opts;
    opts.tol = g.tol;
    opts.budget = g.budget;
    OptResult r = sublinear_eval_maximal_result(f, lo, hi, n, opts);

    std::vector<std::string> cols{"f",     "n",          "mu_lower",        "mu_upper",
                                  "value", "argmax",     "certificate_gap", "evaluations",
                                  "budget_exhausted"};
    std::vector<std::vector<std::string>> rows{{fspec, std::to_string(n), format_double(lo),
                                                format_double(hi), format_double(r.value),
                                                join_semicolon(r.argmax),
                                                r.certificate_gap ? format_double(*r.certificate_gap) : "",
                                                std::to_string(r.evaluations),
                                                r.budget_exhausted ? "1" : "0"}};
    std::ostringstream os;
    write_csv(os, hash_of(cfg), cols, rows);
    write_output(g.out_path, os.str());
    return kExitOk;
}

int cmd_check(const GlobalOpts& g, const std::string& fspec, int n, const std::string& target,
              const std::string& grid_spec) {
    if (fspec.empty()) throw InputError("check: missing function spec (field 'f')");
    if (n < 1) throw InputError("check: n must be >= 1 (field 'n')");
    MeanTarget tgt;
    if (target == "upper") tgt = MeanTarget::upper;
    else if (target == "lower") tgt = MeanTarget::lower;
    else throw InputError("check: target must be 'upper' or 'lower' (field 'target')");

    std::vector<std::pair<double, double>> grid =
        grid_spec.empty() ? default_parameter_grid() : parse_grid_spec(grid_spec);

    json cfg{{"command", "check"}, {"f", fspec},   {"n", n},
             {"target", target},   {"tol", g.tol}, {"budget", g.budget}};
    if (!grid_spec.empty()) cfg["grid"] = grid_spec;

    TestFunction f = parse_function(fspec, n);
    BoxMaxOptions opts;
    opts.tol = g.tol;
    opts.budget = g.budget;
    EstimatorVerdict v = check_unbiased(f, n, tgt, grid, g.tol, opts);

    json out{{"command", "check"},
             {"config", cfg},
             {"config_hash", hash_of(cfg)},
             {"f", fspec},
             {"n", n},
             {"target", target},
             {"tol", v.tol},
             {"lipschitz_declared", v.lipschitz_declared},
             {"grid", v.grid_tested}};
    switch (v.verdict) {
        case Verdict::unbiased: out["verdict"] = "unbiased"; break;
        case Verdict::biased: out["verdict"] = "biased"; break;
        case Verdict::inconclusive_at_budget: out["verdict"] = "inconclusive-at-budget"; break;
    }
    if (v.witness)
        out["witness"] = json{{"mu_lower", v.witness->mu_lower},
                              {"mu_upper", v.witness->mu_upper},
                              {"achieved", v.witness->achieved}};
    else
        out["witness"] = nullptr;

    write_output(g.out_path, out.dump(2) + "\n");
    switch (v.verdict) {
        case Verdict::unbiased: return kExitOk;
        case Verdict::biased: return kExitBiased;
        default: return kExitInconclusive;
    }
}

int cmd_estimate(const GlobalOpts& g, const std::string& data_path,
                 std::vector<std::string> phis, long group_size) {
    if (data_path.empty()) throw InputError("estimate: missing data file (field 'data')");
    std::vector<double> samples = read_sample_file(data_path);
    if (samples.empty())
        throw InputError("estimate: data file '" + data_path + "' contains no samples");
    if (phis.empty()) phis.push_back("x1");
    if (group_size == 0)
        group_size = std::max<long>(1, static_cast<long>(std::floor(std::sqrt(
                                           static_cast<double>(samples.size())))));
    if (group_size < 1) throw InputError("estimate: group size must be >= 1 (field 'group_size')");

    json cfg{{"command", "estimate"},
             {"data", data_path},
             {"phi", phis},
             {"group_size", group_size}};

    auto [lo, hi] = estimate_interval(samples);
    json envelopes = json::array();
    for (const std::string& spec : phis) {
        TestFunction phi = parse_function(spec, 1);
        envelopes.push_back(grouped_to_json(block_envelope(samples, phi, group_size)));
    }
    json out{{"command", "estimate"},
             {"config", cfg},
             {"config_hash", hash_of(cfg)},
             {"count", samples.size()},
             {"interval", json::array({lo, hi})},
             {"envelopes", envelopes}};
    write_output(g.out_path, out.dump(2) + "\n");
    return kExitOk;
}

int cmd_lln(const GlobalOpts& g, const std::string& family_spec, const std::string& phi_spec,
            const std::vector<long>& schedule, int replications, const std::string& policy_spec) {
    if (family_spec.empty()) throw InputError("lln: missing family spec (field 'family')");
    if (!g.seed_given) throw InputError("lln: a seed is required for stochastic commands (field 'seed')");
    if (schedule.empty()) throw InputError("lln: empty N schedule (field 'N')");
    if (replications < 1) throw InputError("lln: replications must be >= 1 (field 'replications')");

    json cfg{{"command", "lln"},        {"family", family_spec},
             {"phi", phi_spec},         {"N", schedule},
             {"replications", replications},
             {"policies", policy_spec}, {"seed", g.seed}};

    ScenarioFamily family = parse_family(family_spec);
    TestFunction phi = parse_function(phi_spec, 1);

    long horizon = *std::max_element(schedule.begin(), schedule.end());
    std::vector<Policy> policies;
    if (policy_spec == "constants") {
        policies = constant_policies(family.size());
    } else if (policy_spec == "constants+cycle") {
        policies = constant_policies(family.size());
        if (family.size() > 1) {
            std::vector<std::size_t> all(family.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            policies.push_back(Policy::cyclic(all));
        }
    } else if (policy_spec == "constants+cycle+greedy") {
        policies = default_lln_policies(family, phi, horizon, g.seed);
    } else {
        throw InputError("lln: unknown policy set '" + policy_spec +
                         "' (field 'policies'; one of constants, constants+cycle, "
                         "constants+cycle+greedy)");
    }

    std::vector<ConvergenceRow> rows =
        lln_convergence(family, policies, phi, schedule, replications, g.seed, g.threads);

    std::vector<std::string> cols{"N", "estimate", "reference", "gap", "std_error"};
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows)
        cells.push_back({std::to_string(r.N), format_double(r.estimate),
                         format_double(r.reference), format_double(r.gap),
                         format_double(r.std_error)});
    std::ostringstream os;
    write_csv(os, hash_of(cfg), cols, cells);
    write_output(g.out_path, os.str());

    if (!g.plot_path.empty()) {
        std::vector<double> xs, ys;
        for (const auto& r : rows) {
            xs.push_back(static_cast<double>(r.N));
            ys.push_back(r.gap);
        }
        std::ostringstream svg;
        write_svg_loglog(svg, "gap vs N", xs, ys);
        std::ofstream out(g.plot_path, std::ios::binary);
        if (!out) throw InputError("cannot open plot file '" + g.plot_path + "' (field 'plot')");
        out << svg.str();
    }
    return kExitOk;
}

int cmd_envelope(const GlobalOpts& g, const std::string& data_path, const std::string& phi_spec,
                 long k, long n, const std::string& mode) {
    if (data_path.empty()) throw InputError("envelope: missing data file (field 'data')");
    if (n < 1) throw InputError("envelope: group size n must be >= 1 (field 'n')");
    if (mode != "triangle" && mode != "block")
        throw InputError("envelope: mode must be 'triangle' or 'block' (field 'mode')");
    if (mode == "triangle" && k < 1)
        throw InputError("envelope: group count k must be >= 1 in triangle mode (field 'k')");

    std::vector<double> samples = read_sample_file(data_path);
    TestFunction phi = parse_function(phi_spec, 1);

    json cfg{{"command", "envelope"}, {"data", data_path}, {"phi", phi_spec},
             {"n", n},                {"mode", mode}};
    if (mode == "triangle") cfg["k"] = k;

    GroupedEstimate est = (mode == "triangle") ? envelope_estimator(samples, phi, k, n)
                                               : block_envelope(samples, phi, n);
    json out{{"command", "envelope"},
             {"config", cfg},
             {"config_hash", hash_of(cfg)},
             {"count", samples.size()},
             {"estimate", grouped_to_json(est)}};
    write_output(g.out_path, out.dump(2) + "\n");
    return kExitOk;
}

} // namespace

std::vector<std::pair<double, double>> parse_grid_spec(const std::string& spec) {
    std::vector<std::pair<double, double>> grid;
    std::istringstream stream(spec);
    std::string token;
    while (std::getline(stream, token, ';')) {
        if (token.empty()) continue;
        auto colon = token.find(':');
        if (colon == std::string::npos)
            throw InputError("grid spec: expected 'lo:hi' in '" + token + "' (field 'grid')");
        try {
            double lo = std::stod(token.substr(0, colon));
            double hi = std::stod(token.substr(colon + 1));
            if (!(lo <= hi))
                throw InputError("grid spec: need lo <= hi in '" + token + "' (field 'grid')");
            grid.emplace_back(lo, hi);
        } catch (const InputError&) {
            throw;
        } catch (const std::exception&) {
            throw InputError("grid spec: bad number in '" + token + "' (field 'grid')");
        }
    }
    if (grid.empty()) throw InputError("grid spec: no pairs given (field 'grid')");
    return grid;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"statistical estimation under sublinear expectation"};
    app.require_subcommand(1);

    GlobalOpts g;
    std::string config_path;
    app.add_option("--seed", g.seed, "random seed (required for stochastic commands)");
    app.add_option("--tol", g.tol, "value tolerance")->capture_default_str();
    app.add_option("--budget", g.budget, "max objective evaluations per optimizer call")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "worker thread cap (0 = hardware)")
        ->capture_default_str();
    app.add_option("--config", config_path, "JSON config file; flags override its fields");
    app.add_option("--out", g.out_path, "output path (default: stdout)");
    app.add_option("--plot", g.plot_path, "SVG plot path (lln only)");

    // eval
    auto* eval = app.add_subcommand("eval", "exact sublinear expectation of f on [lo,hi]^n");
    eval->fallthrough();
    std::string ev_f;
    int ev_n = 1;
    std::vector<double> ev_interval;
    eval->add_option("--f", ev_f, "function spec (builtin or expression)");
    eval->add_option("--n", ev_n, "sample size / arity");
    eval->add_option("--interval", ev_interval, "mu_lower,mu_upper")->delimiter(',');

    // check
    auto* check = app.add_subcommand("check", "unbiasedness verdict for an estimator");
    check->fallthrough();
    std::string ck_f, ck_target = "upper", ck_grid;
    int ck_n = 1;
    check->add_option("--f", ck_f, "function spec");
    check->add_option("--n", ck_n, "sample size / arity");
    check->add_option("--target", ck_target, "upper | lower");
    check->add_option("--grid", ck_grid, "parameter pairs 'lo:hi;lo:hi;...' (default built-in)");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "interval + envelope estimates from a sample file");
    estimate->fallthrough();
    std::string es_data;
    std::vector<std::string> es_phi;
    long es_group = 0;
    estimate->add_option("--data", es_data, "sample file, one real per line");
    estimate->add_option("--phi", es_phi, "test function(s) of one variable (repeatable)");
    estimate->add_option("--group-size", es_group, "block size (default: floor(sqrt(N)))");

    // lln
    auto* lln = app.add_subcommand("lln", "law-of-large-numbers convergence table");
    lln->fallthrough();
    std::string ln_family, ln_phi = "x1", ln_policies = "constants+cycle+greedy";
    std::vector<long> ln_schedule{100, 1000, 10000};
    int ln_reps = kDefaultReplications;
    lln->add_option("--family", ln_family, "scenario family, e.g. 'bernoulli(0.3),bernoulli(0.7)'");
    lln->add_option("--phi", ln_phi, "test function of one variable");
    lln->add_option("--N", ln_schedule, "sample-count schedule")->delimiter(',');
    lln->add_option("--replications", ln_reps, "Monte Carlo replications per policy")
        ->capture_default_str();
    lln->add_option("--policies", ln_policies,
                    "constants | constants+cycle | constants+cycle+greedy")
        ->capture_default_str();

    // envelope
    auto* envelope = app.add_subcommand("envelope", "grouped envelope estimator on a sample file");
    envelope->fallthrough();
    std::string en_data, en_phi = "x1", en_mode = "triangle";
    long en_k = 0, en_n = 0;
    envelope->add_option("--data", en_data, "sample file, one real per line");
    envelope->add_option("--phi", en_phi, "test function of one variable");
    envelope->add_option("--k", en_k, "group count (triangle mode)");
    envelope->add_option("--n", en_n, "group size");
    envelope->add_option("--mode", en_mode, "triangle | block")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        json file_cfg = load_config_file(config_path);
        g.seed_given = app.count("--seed") > 0 || file_cfg.contains("seed");
        merge_field(&app, file_cfg, "--seed", "seed", g.seed);
        merge_field(&app, file_cfg, "--tol", "tol", g.tol);
        merge_field(&app, file_cfg, "--budget", "budget", g.budget);
        merge_field(&app, file_cfg, "--threads", "threads", g.threads);
        merge_field(&app, file_cfg, "--out", "out", g.out_path);
        merge_field(&app, file_cfg, "--plot", "plot", g.plot_path);

        if (eval->parsed()) {
            merge_field(eval, file_cfg, "--f", "f", ev_f);
            merge_field(eval, file_cfg, "--n", "n", ev_n);
            merge_field(eval, file_cfg, "--interval", "interval", ev_interval);
            return cmd_eval(g, ev_f, ev_n, ev_interval);
        }
        if (check->parsed()) {
            merge_field(check, file_cfg, "--f", "f", ck_f);
            merge_field(check, file_cfg, "--n", "n", ck_n);
            merge_field(check, file_cfg, "--target", "target", ck_target);
            merge_field(check, file_cfg, "--grid", "grid", ck_grid);
            return cmd_check(g, ck_f, ck_n, ck_target, ck_grid);
        }
        if (estimate->parsed()) {
            merge_field(estimate, file_cfg, "--data", "data", es_data);
            // "phi" may be a single string or an array of them.
            if (estimate->count("--phi") == 0 && file_cfg.contains("phi")) {
                if (file_cfg.at("phi").is_string())
                    es_phi = {file_cfg.at("phi").get<std::string>()};
                else
                    merge_field(estimate, file_cfg, "--phi", "phi", es_phi);
            }
            merge_field(estimate, file_cfg, "--group-size", "group_size", es_group);
            return cmd_estimate(g, es_data, es_phi, es_group);
        }
        if (lln->parsed()) {
            merge_field(lln, file_cfg, "--family", "family", ln_family);
            merge_field(lln, file_cfg, "--phi", "phi", ln_phi);
            merge_field(lln, file_cfg, "--N", "N", ln_schedule);
            merge_field(lln, file_cfg, "--replications", "replications", ln_reps);
            merge_field(lln, file_cfg, "--policies", "policies", ln_policies);
            return cmd_lln(g, ln_family, ln_phi, ln_schedule, ln_reps, ln_policies);
        }
        if (envelope->parsed()) {
            merge_field(envelope, file_cfg, "--data", "data", en_data);
            merge_field(envelope, file_cfg, "--phi", "phi", en_phi);
            merge_field(envelope, file_cfg, "--k", "k", en_k);
            merge_field(envelope, file_cfg, "--n", "n", en_n);
            merge_field(envelope, file_cfg, "--mode", "mode", en_mode);
            return cmd_envelope(g, en_data, en_phi, en_k, en_n, en_mode);
        }
        std::cerr << "subexp: no command given\n";
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "subexp: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "subexp: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace subexp::cli
