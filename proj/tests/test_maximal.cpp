#include "doctest.h"

#include <cmath>
#include <vector>

#include "subexp/errors.hpp"
#include "subexp/expr.hpp"
#include "subexp/maximal.hpp"

using namespace subexp;

TEST_CASE("distribution operator on the interval") {
    MaximalDistribution m(-1.0, 2.0);
    CHECK(dist_op(TestFunction::identity(), m) == doctest::Approx(2.0).epsilon(1e-9));
    // -E[-eta] = mu_lower
    CHECK(-dist_op(TestFunction::identity().negated(), m) == doctest::Approx(-1.0).epsilon(1e-9));

    MaximalDistribution unit(0.0, 1.0);
    CHECK(dist_op(parse_function("(x1-0.5)*(x1-0.5)", 1), unit) ==
          doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("degenerate interval is a point mass") {
    MaximalDistribution m(0.4, 0.4);
    CHECK(dist_op(parse_function("sin(x1)", 1), m) == std::sin(0.4));
    PathResult p = sample_path(m, ValuePolicy::schedule({0.1, 0.9}), 4, 7);
    CHECK(p.values == std::vector<double>(4, 0.4));
    CHECK(p.clamped == 4);
}

TEST_CASE("pushforward of the extreme statistics is the distribution itself") {
    MaximalDistribution m(0.3, 0.7);
    for (int n = 1; n <= 4; ++n) {
        MaximalDistribution up = pushforward_params(TestFunction::max_of(n), m, n);
        CHECK(up.mu_lower == doctest::Approx(0.3).epsilon(1e-9));
        CHECK(up.mu_upper == doctest::Approx(0.7).epsilon(1e-9));
        MaximalDistribution lo = pushforward_params(TestFunction::min_of(n), m, n);
        CHECK(lo.mu_lower == doctest::Approx(0.3).epsilon(1e-9));
        CHECK(lo.mu_upper == doctest::Approx(0.7).epsilon(1e-9));
    }
}

TEST_CASE("pushforward of differences and means") {
    MaximalDistribution unit(0.0, 1.0);
    MaximalDistribution d = pushforward_params(parse_function("x1-x2", 2), unit, 2);
    CHECK(d.mu_lower == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(d.mu_upper == doctest::Approx(1.0).epsilon(1e-9));

    MaximalDistribution m(0.3, 0.7);
    MaximalDistribution mm = pushforward_params(TestFunction::mean_of(3), m, 3);
    CHECK(mm.mu_lower == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(mm.mu_upper == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("pushforward through the identity is idempotent") {
    MaximalDistribution m(-0.2, 1.3);
    MaximalDistribution p = pushforward_params(TestFunction::identity(), m, 1);
    CHECK(p.mu_lower == doctest::Approx(m.mu_lower).epsilon(1e-9));
    CHECK(p.mu_upper == doctest::Approx(m.mu_upper).epsilon(1e-9));
}

TEST_CASE("pushforward interval is well formed and within range bounds") {
    MaximalDistribution m(0.3, 0.7);
    auto f = parse_function("sin(3*x1)+cos(2*x2)", 2);
    MaximalDistribution p = pushforward_params(f, m, 2);
    CHECK(p.mu_lower <= p.mu_upper);
    CHECK(p.mu_lower >= -2.0 - 1e-9);
    CHECK(p.mu_upper <= 2.0 + 1e-9);
}

TEST_CASE("sample paths under value policies") {
    MaximalDistribution unit(0.0, 1.0);

    PathResult c = sample_path(unit, ValuePolicy::constant(0.5), 3, 1);
    CHECK(c.values == std::vector<double>{0.5, 0.5, 0.5});
    CHECK(c.clamped == 0);

    PathResult sched = sample_path(unit, ValuePolicy::schedule({0.0, 1.0}), 4, 1);
    CHECK(sched.values == std::vector<double>{0.0, 1.0, 0.0, 1.0});

    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    PathResult a = sample_path(unit, ValuePolicy::random_grid(grid), 50, 42);
    PathResult b = sample_path(unit, ValuePolicy::random_grid(grid), 50, 42);
    CHECK(a.values == b.values); // replay under the same seed
    for (double v : a.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    PathResult other = sample_path(unit, ValuePolicy::random_grid(grid), 50, 43);
    CHECK(a.values != other.values);
}

TEST_CASE("out-of-range policy outputs are clamped and counted") {
    MaximalDistribution unit(0.0, 1.0);
    PathResult p = sample_path(unit, ValuePolicy::constant(1.5), 3, 1);
    CHECK(p.values == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(p.clamped == 3);

    auto feedback = ValuePolicy::feedback("overshoot", [](const HistoryView& h) {
        return h.steps() == 0 ? 0.5 : h.values.back() + 1.0;
    });
    PathResult q = sample_path(unit, feedback, 3, 1);
    CHECK(q.values == std::vector<double>{0.5, 1.0, 1.0});
    CHECK(q.clamped == 2);
}

TEST_CASE("grid sweep policies cover the interval") {
    MaximalDistribution m(0.3, 0.7);
    auto ps = grid_sweep_policies(m, 9);
    REQUIRE(ps.size() == 9);
    HistoryView empty{};
    Rng rng(1);
    CHECK(ps.front().choose(empty, rng) == doctest::Approx(0.3));
    CHECK(ps.back().choose(empty, rng) == doctest::Approx(0.7));
}

TEST_CASE("invalid distributions are rejected") {
    CHECK_THROWS_AS(MaximalDistribution(0.7, 0.3), InputError);
    CHECK_THROWS_AS(sample_path(MaximalDistribution(0, 1), ValuePolicy::constant(0.5), 0, 1),
                    InputError);
}
