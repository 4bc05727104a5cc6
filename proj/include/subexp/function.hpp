#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace subexp {

/// A continuous real function of a fixed number of real arguments, the unit
/// submitted to the optimizers and estimator checks. Carries an optional
/// Lipschitz constant (enables certificates) and a boundedness flag.
class TestFunction {
public:
    using Eval = std::function<double(std::span<const double>)>;

    TestFunction(std::string label, int arity, Eval eval,
                 std::optional<double> lipschitz = std::nullopt,
                 bool bounded = false);

    double operator()(std::span<const double> x) const;

    int arity() const { return arity_; }
    const std::string& label() const { return label_; }
    std::optional<double> lipschitz() const { return lipschitz_; }
    bool bounded() const { return bounded_; }

    /// x -> -f(x). Preserves the Lipschitz constant.
    TestFunction negated() const;
    /// x -> f(x) + c.
    TestFunction shifted(double c) const;
    /// x -> s * f(x). Scales the Lipschitz constant by |s|.
    TestFunction scaled(double s) const;
    /// x -> f(-x). With negated(), gives the lower-mean dual x -> -f(-x).
    TestFunction reflected() const;

    /// f + g pointwise; arities must match.
    static TestFunction sum(const TestFunction& f, const TestFunction& g);

    // Built-in estimator suite.
    static TestFunction coordinate(int i, int n); // x -> x_i, zero-based i
    static TestFunction identity();               // arity 1
    static TestFunction max_of(int n);
    static TestFunction min_of(int n);
    static TestFunction mean_of(int n);
    static TestFunction median_of(int n);

private:
    std::string label_;
    int arity_;
    Eval eval_;
    std::optional<double> lipschitz_;
    bool bounded_;
};

} // namespace subexp
