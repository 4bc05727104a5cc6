#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "subexp/errors.hpp"
#include "subexp/expr.hpp"
#include "subexp/grouped.hpp"
#include "subexp/maximal.hpp"
#include "test_support.hpp"

using namespace subexp;
using subexp::testing::triangle_stream;

TEST_CASE("triangle numbering formula") {
    CHECK(trn(1, 1) == 1);
    CHECK(trn(1, 2) == 2);
    CHECK(trn(2, 1) == 3);
    CHECK(trn(1, 3) == 4);
    CHECK(trn(2, 2) == 5);
    CHECK(trn(3, 1) == 6);
    // Direct formula check at scattered points.
    for (std::int64_t i : {1, 2, 7, 40}) {
        for (std::int64_t k : {1, 3, 11, 52}) {
            std::uint64_t s = static_cast<std::uint64_t>(i + k);
            CHECK(trn(i, k) == s * (s - 1) / 2 - static_cast<std::uint64_t>(k - 1));
        }
    }
    CHECK_THROWS_AS(trn(0, 1), InputError);
    CHECK_THROWS_AS(trn(1, 0), InputError);
    CHECK_THROWS_AS(trn(-2, 3), InputError);
}

TEST_CASE("triangle numbering is a bijection on the 100-row triangle") {
    // {trn(i,k) : i+k <= 101} must cover 1..5050 exactly once.
    std::vector<int> hits(5051, 0);
    for (std::int64_t i = 1; i <= 100; ++i)
        for (std::int64_t k = 1; i + k <= 101; ++k) {
            std::uint64_t v = trn(i, k);
            REQUIRE(v >= 1);
            REQUIRE(v <= 5050);
            ++hits[v];
        }
    for (std::uint64_t v = 1; v <= 5050; ++v) CHECK(hits[v] == 1);
}

TEST_CASE("trn_inverse inverts trn") {
    for (std::uint64_t p = 1; p <= 5050; ++p) {
        auto [i, k] = trn_inverse(p);
        CHECK(trn(static_cast<std::int64_t>(i), static_cast<std::int64_t>(k)) == p);
    }
    CHECK_THROWS_AS(trn_inverse(0), InputError);
}

TEST_CASE("groups index disjoint samples") {
    std::set<std::uint64_t> seen;
    for (std::int64_t k = 1; k <= 30; ++k)
        for (std::int64_t i = 1; i <= 30; ++i) CHECK(seen.insert(trn(i, k)).second);
}

TEST_CASE("group means") {
    auto id = TestFunction::identity();

    std::vector<double> constant(40, 0.7);
    for (std::int64_t k = 1; k <= 3; ++k)
        for (std::int64_t n = 1; n <= 3; ++n) CHECK(group_mean(constant, id, k, n) == 0.7);

    // Positions trn(1,1) = 1 and trn(2,1) = 3 hold 10 and 30.
    std::vector<double> samples{10, 20, 30, 40, 50, 60};
    CHECK(group_mean(samples, id, 1, 2) == doctest::Approx(20.0));
    CHECK(group_mean(samples, id, 2, 2) == doctest::Approx((20.0 + 50.0) / 2));

    // Bounded phi keeps the mean inside its range.
    auto bump = parse_function("exp(-4*(x1-35)*(x1-35))", 1);
    double m = group_mean(samples, bump, 1, 2);
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);
}

TEST_CASE("short streams fail loudly, naming the missing index") {
    std::vector<double> samples(5, 1.0);
    try {
        group_mean(samples, TestFunction::identity(), 1, 3); // needs trn(3,1) = 6
        FAIL("expected InputError");
    } catch (const InputError& e) {
        std::string msg = e.what();
        CHECK(msg.find("6") != std::string::npos);
        CHECK(msg.find("5") != std::string::npos);
    }
}

TEST_CASE("envelope over crafted group means") {
    // Groups (k=3, n=2) read positions {1,3}, {2,5}, {4,8}; fill those so
    // the group means are (0.2, 0.5, 0.4).
    std::vector<double> stream(8, 0.0);
    stream[0] = 0.2;
    stream[2] = 0.2;
    stream[1] = 0.5;
    stream[4] = 0.5;
    stream[3] = 0.4;
    stream[7] = 0.4;
    GroupedEstimate est = envelope_estimator(stream, TestFunction::identity(), 3, 2);
    CHECK(est.group_means == std::vector<double>{0.2, 0.5, 0.4});
    CHECK(est.upper_envelope == 0.5);
    CHECK(est.lower_envelope == 0.2);
    CHECK(est.group_count == 3);
    CHECK(est.group_size == 2);
}

TEST_CASE("envelope ordering and constant case") {
    std::vector<double> constant(100, 0.4);
    GroupedEstimate est = envelope_estimator(constant, TestFunction::identity(), 4, 5);
    CHECK(est.upper_envelope == 0.4);
    CHECK(est.lower_envelope == 0.4);
    double mean_of_means = 0.0;
    for (double g : est.group_means) {
        mean_of_means += g;
        CHECK(est.lower_envelope <= g);
        CHECK(g <= est.upper_envelope);
    }
    mean_of_means /= est.group_means.size();
    CHECK(est.lower_envelope <= mean_of_means);
    CHECK(mean_of_means <= est.upper_envelope);
}

TEST_CASE("block envelope") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    GroupedEstimate est = block_envelope(xs, TestFunction::identity(), 2);
    CHECK(est.group_means == std::vector<double>{1.5, 3.5});
    CHECK(est.upper_envelope == 3.5);
    CHECK(est.lower_envelope == 1.5);
    CHECK(est.dropped == 1);

    std::vector<double> constant(10, 0.4);
    GroupedEstimate c = block_envelope(constant, TestFunction::identity(), 5);
    CHECK(c.upper_envelope == 0.4);
    CHECK(c.lower_envelope == 0.4);
    CHECK(c.dropped == 0);

    std::vector<double> tiny{1.0};
    CHECK_THROWS_AS(block_envelope(tiny, TestFunction::identity(), 2), InputError);
}

TEST_CASE("bounded phi bounds the envelopes") {
    std::vector<double> xs;
    for (int i = 0; i < 300; ++i) xs.push_back(i * 0.37);
    auto phi = parse_function("sin(x1)", 1);
    GroupedEstimate est = block_envelope(xs, phi, 30);
    CHECK(est.upper_envelope <= 1.0);
    CHECK(est.lower_envelope >= -1.0);
}

TEST_CASE("grid-sweep constants recover the interval through triangle groups") {
    MaximalDistribution m(0.3, 0.7);
    auto policies = grid_sweep_policies(m, 5);
    std::vector<double> stream = triangle_stream(m, policies, 5, 20, 8);
    GroupedEstimate est = envelope_estimator(stream, TestFunction::identity(), 5, 20);
    CHECK(est.upper_envelope == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(est.lower_envelope == doctest::Approx(0.3).epsilon(1e-12));
    // Group means are exactly the policy values under maximal-Dirac sampling.
    for (double g : est.group_means) {
        CHECK(g >= 0.3 - 1e-12);
        CHECK(g <= 0.7 + 1e-12);
    }
}

TEST_CASE("regime-switching stream against the binomial concentration oracle") {
    // p alternates 0.3/0.7 every n = 1000 draws; 20 blocks. Each block mean
    // concentrates at its regime's p (sd ~ 0.014), so the envelopes land
    // within 0.05 of the regime means.
    const std::int64_t n = 1000;
    const int blocks = 20;
    Rng rng(substream_key(2024, 0x726567, 0));
    std::vector<double> stream;
    stream.reserve(n * blocks);
    for (int b = 0; b < blocks; ++b) {
        double p = (b % 2 == 0) ? 0.3 : 0.7;
        for (std::int64_t i = 0; i < n; ++i) stream.push_back(rng.bernoulli(p) ? 1.0 : 0.0);
    }
    GroupedEstimate est = block_envelope(stream, TestFunction::identity(), n);
    CHECK(est.group_count == 20);
    CHECK(std::abs(est.upper_envelope - 0.7) < 0.05);
    CHECK(std::abs(est.lower_envelope - 0.3) < 0.05);
}

TEST_CASE("asymptotic unbiasedness: singleton family has zero gap") {
    ScenarioFamily fam({dirac_scenario(0.4)});
    auto policies = constant_policies(1);
    std::vector<std::int64_t> schedule{5, 20};
    auto rows = asymptotic_unbiasedness_experiment(fam, policies, TestFunction::identity(),
                                                   schedule, 4, 10, 3);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) CHECK(r.gap == 0.0);
}

TEST_CASE("asymptotic unbiasedness: dirac grid family reaches the top atom") {
    ScenarioFamily fam = dirac_grid_family(0.0, 1.0, 5);
    auto policies = constant_policies(5);
    std::vector<std::int64_t> schedule{10, 100};
    auto rows = asymptotic_unbiasedness_experiment(fam, policies, TestFunction::identity(),
                                                   schedule, 4, 5, 7);
    for (const auto& r : rows) {
        CHECK(r.reference == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.gap <= 1e-12); // constant-at-1 policy gives exact group means
    }
}

TEST_CASE("asymptotic unbiasedness against the bernoulli moment oracle") {
    // phi(y) = y^2 has upper mean 0.7 over {Bernoulli(0.3), Bernoulli(0.7)}
    // because E_p[Y^2] = p. Envelope overshoot at n = 1000 is the max of
    // k = 10 group means, each ~N(0.7, sqrt(0.21/1000)); well within 0.05.
    ScenarioFamily fam({bernoulli_scenario(0.3), bernoulli_scenario(0.7)});
    auto policies = constant_policies(2);
    auto phi = parse_function("x1*x1", 1);
    std::vector<std::int64_t> schedule{100, 1000};
    auto rows = asymptotic_unbiasedness_experiment(fam, policies, phi, schedule, 10, 20, 11);
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(rows[0].reference - 0.7) < 0.01);
    CHECK(rows[1].gap < 0.05);
    CHECK(rows[1].gap <= rows[0].gap + 0.01); // shrinking along the schedule
}
