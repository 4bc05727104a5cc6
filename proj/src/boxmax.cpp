#include "subexp/boxmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subexp/errors.hpp"

namespace subexp {

Box::Box(double lo, double hi, int d) : lower(lo), upper(hi), dim(d) {
    if (!(lo <= hi)) throw InputError("Box: need lower <= upper");
    if (d < 1) throw InputError("Box: dim must be >= 1");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw InputError("Box: bounds must be finite");
}

bool Box::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim) return false;
    for (double v : x)
        if (v < lower || v > upper) return false;
    return true;
}

namespace {

constexpr int kMaxDimWithoutOverride = 10;

// Largest m with m^dim <= cap, at least 2.
int points_per_axis(long cap, int dim) {
    auto fits = [&](long m) {
        long double p = 1.0L;
        for (int i = 0; i < dim; ++i) {
            p *= static_cast<long double>(m);
            if (p > static_cast<long double>(cap)) return false;
        }
        return true;
    };
    long m = static_cast<long>(std::floor(std::pow(static_cast<double>(cap), 1.0 / dim)));
    m = std::max<long>(m, 2);
    while (fits(m + 1)) ++m;
    while (m > 2 && !fits(m)) --m;
    return static_cast<int>(m);
}

struct Tracker {
    const TestFunction& f;
    long evaluations = 0;
    long budget;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> best_x;

    Tracker(const TestFunction& fn, long b) : f(fn), budget(b) {}

    double eval(std::span<const double> x) {
        double v = f(x);
        ++evaluations;
        if (v > best) {
            best = v;
            best_x.assign(x.begin(), x.end());
        }
        return v;
    }

    bool exhausted() const { return evaluations >= budget; }
};

// Steepest-probe pattern search: probes +-h along every axis, moves to the
// best strictly improving probe, halves h when none improves.
void pattern_refine(Tracker& tr, std::vector<double> x, double v0, double h0, double hmin,
                    const Box& box, bool& ran_out) {
    double v = v0;
    double h = h0;
    std::vector<double> probe = x;
    while (h >= hmin) {
        if (tr.exhausted()) {
            ran_out = true;
            return;
        }
        double best_val = v;
        int best_axis = -1;
        double best_coord = 0.0;
        for (int j = 0; j < box.dim && !tr.exhausted(); ++j) {
            for (double s : {+1.0, -1.0}) {
                double c = std::clamp(x[j] + s * h, box.lower, box.upper);
                if (c == x[j]) continue;
                probe[j] = c;
                double val = tr.eval(probe);
                if (val > best_val) {
                    best_val = val;
                    best_axis = j;
                    best_coord = c;
                }
            }
            probe[j] = x[j];
        }
        if (best_axis >= 0) {
            x[best_axis] = best_coord;
            probe[best_axis] = best_coord;
            v = best_val;
        } else {
            h *= 0.5;
        }
    }
}

} // namespace

OptResult box_maximize(const TestFunction& f, const Box& box, const BoxMaxOptions& opts) {
    if (f.arity() != box.dim)
        throw InputError("box_maximize: f has arity " + std::to_string(f.arity()) +
                         " but box has dim " + std::to_string(box.dim));
    if (!(opts.tol > 0.0)) throw InputError("box_maximize: tol must be positive");
    if (opts.budget < 1) throw InputError("box_maximize: budget must be positive");
    if (box.dim > kMaxDimWithoutOverride && !opts.allow_high_dim)
        throw InputError("box_maximize: dim " + std::to_string(box.dim) +
                         " exceeds the guard (" + std::to_string(kMaxDimWithoutOverride) +
                         "); set allow_high_dim to override");

    OptResult out;

    if (box.degenerate()) {
        std::vector<double> x(box.dim, box.lower);
        out.value = f(x);
        out.argmax = std::move(x);
        out.evaluations = 1;
        if (f.lipschitz()) out.certificate_gap = 0.0;
        return out;
    }

    Tracker tr(f, opts.budget);

    // Grid scan. A slice of the budget is held back for refinement.
    long reserve = std::max<long>(opts.budget / 10, std::min<long>(2000, opts.budget / 2));
    int m = points_per_axis(opts.budget - reserve, box.dim);
    double spacing = box.width() / (m - 1);

    std::vector<double> axis(m);
    for (int i = 0; i < m; ++i) axis[i] = (i == m - 1) ? box.upper : box.lower + spacing * i;

    // Ranked start cells for refinement, deduplicated by grid adjacency.
    struct Cell {
        double value;
        std::vector<int> idx;
    };
    std::vector<Cell> tops;
    std::size_t want = static_cast<std::size_t>(std::max(1, opts.refine_starts));

    std::vector<int> idx(box.dim, 0);
    std::vector<double> x(box.dim, axis[0]);
    bool grid_overran = false;
    for (;;) {
        if (tr.evaluations >= opts.budget) grid_overran = true;
        double v = tr.eval(x);
        if (tops.size() < want || v > tops.back().value) {
            Cell c{v, idx};
            auto pos = std::upper_bound(tops.begin(), tops.end(), c,
                                        [](const Cell& a, const Cell& b) { return a.value > b.value; });
            tops.insert(pos, std::move(c));
            if (tops.size() > want) tops.pop_back();
        }
        // lexicographic advance
        int j = box.dim - 1;
        while (j >= 0 && idx[j] == m - 1) {
            idx[j] = 0;
            x[j] = axis[0];
            --j;
        }
        if (j < 0) break;
        ++idx[j];
        x[j] = axis[idx[j]];
    }

    // Refinement from start cells, skipping starts adjacent to one already
    // taken (they would polish the same basin).
    bool refine_ran_out = grid_overran;
    std::vector<std::vector<int>> taken;
    for (const Cell& c : tops) {
        bool adjacent = false;
        for (const auto& t : taken) {
            bool all_close = true;
            for (int j = 0; j < box.dim; ++j)
                if (std::abs(c.idx[j] - t[j]) > 1) { all_close = false; break; }
            if (all_close) { adjacent = true; break; }
        }
        if (adjacent) continue;
        taken.push_back(c.idx);
        std::vector<double> start(box.dim);
        for (int j = 0; j < box.dim; ++j) start[j] = axis[c.idx[j]];
        double hmin = std::max(box.width() * 1e-10, 1e-14);
        pattern_refine(tr, std::move(start), c.value, spacing * 0.5, hmin, box, refine_ran_out);
        if (tr.exhausted()) refine_ran_out = true;
    }

    out.value = tr.best;
    out.argmax = tr.best_x;
    out.evaluations = tr.evaluations;
    out.budget_exhausted = refine_ran_out;
    if (f.lipschitz())
        out.certificate_gap = *f.lipschitz() * spacing * std::sqrt(static_cast<double>(box.dim)) / 2.0;
    return out;
}

namespace {

// One-dimensional maximization used by every layer of the nested solver:
// m-point grid, then golden-section refinement of the brackets around the
// best two non-adjacent grid indices. All probes flow through `eval`, which
// is the next layer's solve.
template <typename F>
double solve_1d(F&& eval, double lo, double hi, int m, double xtol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double spacing = (hi - lo) / (m - 1);
    std::vector<double> vals(m);
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < m; ++i) {
        double t = (i == m - 1) ? hi : lo + spacing * i;
        vals[i] = eval(t);
        if (vals[i] > best) { best = vals[i]; best_i = i; }
    }
    int second_i = -1;
    double second = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        if (std::abs(i - best_i) <= 1) continue;
        if (vals[i] > second) { second = vals[i]; second_i = i; }
    }
    for (int start : {best_i, second_i}) {
        if (start < 0) continue;
        double a = (start == 0) ? lo : lo + spacing * (start - 1);
        double b = (start == m - 1) ? hi : lo + spacing * (start + 1);
        double x1 = b - kInvPhi * (b - a);
        double x2 = a + kInvPhi * (b - a);
        double f1 = eval(x1);
        double f2 = eval(x2);
        best = std::max({best, f1, f2});
        while (b - a > xtol) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kInvPhi * (b - a);
                f2 = eval(x2);
                best = std::max(best, f2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kInvPhi * (b - a);
                f1 = eval(x1);
                best = std::max(best, f1);
            }
        }
    }
    return best;
}

struct NestedSolver {
    Tracker tr;
    double lo, hi;
    int n;
    int m;
    double xtol;
    std::vector<double> point;

    NestedSolver(const TestFunction& f, double lo_, double hi_, int n_, int m_, double xtol_)
        : tr(f, std::numeric_limits<long>::max()), lo(lo_), hi(hi_), n(n_), m(m_), xtol(xtol_) {
        point.reserve(n);
    }

    // Maximum over coordinates depth..n-1 with point[0..depth) fixed.
    double layer_max(int depth) {
        if (depth == n) return tr.eval(point);
        point.push_back(0.0);
        double v = solve_1d(
            [&](double t) {
                point[depth] = t;
                return layer_max(depth + 1);
            },
            lo, hi, m, xtol);
        point.pop_back();
        return v;
    }
};

} // namespace

OptResult nested_maximize(const TestFunction& f, double lower, double upper, int n,
                          const BoxMaxOptions& opts) {
    if (f.arity() != n)
        throw InputError("nested_maximize: f has arity " + std::to_string(f.arity()) +
                         " but n = " + std::to_string(n));
    if (!(lower <= upper)) throw InputError("nested_maximize: need lower <= upper");
    if (!(opts.tol > 0.0)) throw InputError("nested_maximize: tol must be positive");
    if (opts.budget < 1) throw InputError("nested_maximize: budget must be positive");

    OptResult out;
    if (lower == upper) {
        std::vector<double> x(n, lower);
        out.value = f(x);
        out.argmax = std::move(x);
        out.evaluations = 1;
        if (f.lipschitz()) out.certificate_gap = 0.0;
        return out;
    }

    int m = points_per_axis(opts.budget, n);
    double width = upper - lower;
    double xtol = std::max(width * 1e-5, 1e-12);

    NestedSolver solver(f, lower, upper, n, m, xtol);
    // Every layer value is an actual f evaluation at some full point, so the
    // returned maximum coincides with the tracker's best point.
    out.value = solver.layer_max(0);
    out.argmax = solver.tr.best_x;
    out.evaluations = solver.tr.evaluations;
    if (f.lipschitz()) {
        double spacing = width / (m - 1);
        out.certificate_gap = *f.lipschitz() * spacing * n / 2.0;
    }
    return out;
}

double sublinear_eval_maximal(const TestFunction& f, double mu_lower, double mu_upper,
                              int n, const BoxMaxOptions& opts) {
    return sublinear_eval_maximal_result(f, mu_lower, mu_upper, n, opts).value;
}

OptResult sublinear_eval_maximal_result(const TestFunction& f, double mu_lower,
                                        double mu_upper, int n, const BoxMaxOptions& opts) {
    if (!(mu_lower <= mu_upper))
        throw InputError("sublinear_eval_maximal: need mu_lower <= mu_upper");
    return box_maximize(f, Box(mu_lower, mu_upper, n), opts);
}

} // namespace subexp
