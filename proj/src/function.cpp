#include "subexp/function.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "subexp/errors.hpp"

namespace subexp {

TestFunction::TestFunction(std::string label, int arity, Eval eval,
                           std::optional<double> lipschitz, bool bounded)
    : label_(std::move(label)), arity_(arity), eval_(std::move(eval)),
      lipschitz_(lipschitz), bounded_(bounded) {
    if (arity_ < 1) throw InputError("TestFunction '" + label_ + "': arity must be >= 1");
    if (!eval_) throw InputError("TestFunction '" + label_ + "': missing evaluator");
    if (lipschitz_ && (*lipschitz_ < 0.0 || !std::isfinite(*lipschitz_)))
        throw InputError("TestFunction '" + label_ + "': Lipschitz constant must be finite and nonnegative");
}

double TestFunction::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != arity_)
        throw InputError("TestFunction '" + label_ + "': expected " + std::to_string(arity_) +
                         " arguments, got " + std::to_string(x.size()));
    return eval_(x);
}

TestFunction TestFunction::negated() const {
    Eval inner = eval_;
    return TestFunction("-(" + label_ + ")", arity_,
                        [inner](std::span<const double> x) { return -inner(x); },
                        lipschitz_, bounded_);
}

TestFunction TestFunction::shifted(double c) const {
    Eval inner = eval_;
    return TestFunction("(" + label_ + ")+" + std::to_string(c), arity_,
                        [inner, c](std::span<const double> x) { return inner(x) + c; },
                        lipschitz_, bounded_);
}

TestFunction TestFunction::scaled(double s) const {
    Eval inner = eval_;
    std::optional<double> lip;
    if (lipschitz_) lip = *lipschitz_ * std::abs(s);
    return TestFunction(std::to_string(s) + "*(" + label_ + ")", arity_,
                        [inner, s](std::span<const double> x) { return s * inner(x); },
                        lip, bounded_);
}

TestFunction TestFunction::reflected() const {
    Eval inner = eval_;
    int n = arity_;
    return TestFunction("reflect(" + label_ + ")", arity_,
                        [inner, n](std::span<const double> x) {
                            std::vector<double> y(n);
                            for (int i = 0; i < n; ++i) y[i] = -x[i];
                            return inner(y);
                        },
                        lipschitz_, bounded_);
}

TestFunction TestFunction::sum(const TestFunction& f, const TestFunction& g) {
    if (f.arity() != g.arity())
        throw InputError("TestFunction::sum: arity mismatch (" + std::to_string(f.arity()) +
                         " vs " + std::to_string(g.arity()) + ")");
    Eval fe = f.eval_, ge = g.eval_;
    std::optional<double> lip;
    if (f.lipschitz_ && g.lipschitz_) lip = *f.lipschitz_ + *g.lipschitz_;
    return TestFunction("(" + f.label() + ")+(" + g.label() + ")", f.arity(),
                        [fe, ge](std::span<const double> x) { return fe(x) + ge(x); },
                        lip, f.bounded() && g.bounded());
}

TestFunction TestFunction::coordinate(int i, int n) {
    if (i < 0 || i >= n) throw InputError("coordinate: index out of range");
    return TestFunction("x" + std::to_string(i + 1), n,
                        [i](std::span<const double> x) { return x[i]; }, 1.0);
}

TestFunction TestFunction::identity() { return coordinate(0, 1); }

TestFunction TestFunction::max_of(int n) {
    return TestFunction("max", n,
                        [](std::span<const double> x) {
                            return *std::max_element(x.begin(), x.end());
                        },
                        1.0);
}

TestFunction TestFunction::min_of(int n) {
    return TestFunction("min", n,
                        [](std::span<const double> x) {
                            return *std::min_element(x.begin(), x.end());
                        },
                        1.0);
}

TestFunction TestFunction::mean_of(int n) {
    return TestFunction("mean", n,
                        [n](std::span<const double> x) {
                            double s = 0.0;
                            for (double v : x) s += v;
                            return s / n;
                        },
                        1.0 / std::sqrt(static_cast<double>(n)));
}

TestFunction TestFunction::median_of(int n) {
    // Even n: mean of the two middle order statistics.
    return TestFunction("median", n,
                        [n](std::span<const double> x) {
                            std::vector<double> v(x.begin(), x.end());
                            std::sort(v.begin(), v.end());
                            if (n % 2 == 1) return v[n / 2];
                            return 0.5 * (v[n / 2 - 1] + v[n / 2]);
                        },
                        1.0);
}

} // namespace subexp
