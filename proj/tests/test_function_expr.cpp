#include "doctest.h"

#include <cmath>
#include <vector>

#include "subexp/errors.hpp"
#include "subexp/expr.hpp"
#include "subexp/function.hpp"
#include "subexp/rng.hpp"

using namespace subexp;

TEST_CASE("builtin statistics") {
    std::vector<double> x{1.0, 3.0, 2.0};
    CHECK(TestFunction::max_of(3)(x) == 3.0);
    CHECK(TestFunction::min_of(3)(x) == 1.0);
    CHECK(TestFunction::mean_of(3)(x) == doctest::Approx(2.0));
    CHECK(TestFunction::median_of(3)(x) == 2.0);

    std::vector<double> y{4.0, 1.0, 3.0, 2.0};
    CHECK(TestFunction::median_of(4)(y) == doctest::Approx(2.5));
    CHECK(TestFunction::coordinate(1, 4)(y) == 1.0);
}

TEST_CASE("arity is checked") {
    auto f = TestFunction::mean_of(3);
    std::vector<double> wrong{1.0, 2.0};
    CHECK_THROWS_AS(f(wrong), InputError);
    CHECK_THROWS_AS(TestFunction::coordinate(3, 3), InputError);
}

TEST_CASE("lipschitz constants hold on sampled pairs") {
    // Spot check |f(x) - f(y)| <= L * ||x - y|| for the builtins.
    Rng rng(99);
    const int n = 4;
    std::vector<TestFunction> fns{TestFunction::max_of(n), TestFunction::min_of(n),
                                  TestFunction::mean_of(n), TestFunction::median_of(n)};
    for (const auto& f : fns) {
        REQUIRE(f.lipschitz().has_value());
        double L = *f.lipschitz();
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<double> a(n), b(n);
            double dist2 = 0.0;
            for (int i = 0; i < n; ++i) {
                a[i] = rng.uniform(-3.0, 3.0);
                b[i] = rng.uniform(-3.0, 3.0);
                dist2 += (a[i] - b[i]) * (a[i] - b[i]);
            }
            CHECK(std::abs(f(a) - f(b)) <= L * std::sqrt(dist2) + 1e-12);
        }
    }
}

TEST_CASE("combinators") {
    auto f = TestFunction::mean_of(2);
    std::vector<double> x{1.0, 2.0};
    CHECK(f.negated()(x) == -1.5);
    CHECK(f.shifted(0.5)(x) == 2.0);
    CHECK(f.scaled(2.0)(x) == 3.0);
    CHECK(*f.scaled(-2.0).lipschitz() == doctest::Approx(2.0 / std::sqrt(2.0)));
    CHECK(f.reflected()(x) == -1.5);
    auto s = TestFunction::sum(TestFunction::max_of(2), TestFunction::min_of(2));
    CHECK(s(x) == 3.0);
    CHECK(*s.lipschitz() == doctest::Approx(2.0));
    CHECK_THROWS_AS(TestFunction::sum(TestFunction::max_of(2), TestFunction::max_of(3)),
                    InputError);
}

TEST_CASE("expression parsing") {
    std::vector<double> x{0.25, 0.5};
    CHECK(parse_function("x1-x2", 2)(x) == doctest::Approx(-0.25));
    CHECK(parse_function("2*mean", 2)(x) == doctest::Approx(0.75));
    CHECK(parse_function("mean+0.1", 2)(x) == doctest::Approx(0.475));
    CHECK(parse_function("max(x1,x2,0.4)", 2)(x) == doctest::Approx(0.5));
    CHECK(parse_function("min(x1,x2)", 2)(x) == doctest::Approx(0.25));
    CHECK(parse_function("abs(x1-1)", 2)(x) == doctest::Approx(0.75));
    CHECK(parse_function("sin(3*x1)+cos(2*x2)", 2)(x) ==
          doctest::Approx(std::sin(0.75) + std::cos(1.0)));
    CHECK(parse_function("-x1", 2)(x) == doctest::Approx(-0.25));
    CHECK(parse_function("(x1+x2)/2", 2)(x) == doctest::Approx(0.375));
    CHECK(parse_function("exp(0*x1)", 2)(x) == doctest::Approx(1.0));
    std::vector<double> one{0.0};
    CHECK(parse_function("1.5e-1", 1)(one) == doctest::Approx(0.15));
}

TEST_CASE("bare builtin names") {
    std::vector<double> x{1.0, 3.0, 2.0};
    auto f = parse_function("max", 3);
    CHECK(f(x) == 3.0);
    CHECK(f.lipschitz().has_value()); // whole-spec builtins keep their constant
    CHECK(parse_function("median", 3)(x) == 2.0);
    // Inside expressions the builtins are bare identifiers.
    CHECK(parse_function("max-min", 3)(x) == 2.0);
    // Expression-built functions carry no constant.
    CHECK_FALSE(parse_function("max-min", 3).lipschitz().has_value());
}

TEST_CASE("parse errors carry positions and name the problem") {
    CHECK_THROWS_AS(parse_function("x5", 2), ParseError);
    CHECK_THROWS_AS(parse_function("foo(x1)", 2), ParseError);
    CHECK_THROWS_AS(parse_function("x1+", 2), ParseError);
    CHECK_THROWS_AS(parse_function("(x1", 2), ParseError);
    CHECK_THROWS_AS(parse_function(")", 2), ParseError);
    CHECK_THROWS_AS(parse_function("x1 x2", 2), ParseError);
    CHECK_THROWS_AS(parse_function("", 2), ParseError);
    CHECK_THROWS_AS(parse_function("min(x1)", 2), ParseError);
    try {
        parse_function("x1+%", 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 3);
    }
}
