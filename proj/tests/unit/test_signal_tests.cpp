#include "helpers.hpp"
#include "seleq/signal_test.hpp"

#include <doctest.h>

#include <cmath>

using namespace seleq;
using seleq::testing::binary_grid;
using seleq::testing::random_test;

TEST_CASE("family construction") {
    auto grid = TypeGrid::uniform(0.0, 1.0, 21);

    SUBCASE("fully garbled power test is flat") {
        const Test t = build_family_test({Family::PowerLinear, 1.0, 2.5}, grid);
        for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.pi(i) == doctest::Approx(std::pow(0.5, 2.5)));
    }
    SUBCASE("pure-noise linear mix is constant") {
        const Test t = build_family_test({Family::LinearMix, 0.0, 0.3}, grid);
        for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.pi(i) == doctest::Approx(0.3));
        CHECK(t.uninformative());
    }
    SUBCASE("identity power test") {
        const Test t = build_family_test({Family::PowerLinear, 0.0, 1.0}, grid);
        for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.pi(i) == doctest::Approx(grid->theta(i)));
    }
    SUBCASE("threshold noise support conditions") {
        CHECK_THROWS_AS(build_family_test({Family::ThresholdNoiseUniform, 0.5, 1.1}, grid),
                        std::invalid_argument); // theta_min = 0 <= d - sigma
        const Test t = build_family_test({Family::ThresholdNoiseUniform, 1.5, 1.1}, grid);
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(t.pi(i) > 0.0);
            CHECK(t.pi(i) < 1.0);
        }
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(build_family_test({Family::PowerLinear, 1.5, 1.0}, grid), std::invalid_argument);
        CHECK_THROWS_AS(build_family_test({Family::PowerLinear, 0.5, 0.0}, grid), std::invalid_argument);
        CHECK_THROWS_AS(build_family_test({Family::LinearMix, 0.5, 1.5}, grid), std::invalid_argument);
    }
}

TEST_CASE("test validation") {
    auto grid = binary_grid();
    CHECK_THROWS_AS(Test(grid, {0.8, 0.2}), std::invalid_argument); // decreasing
    CHECK_THROWS_AS(Test(grid, {0.2, 1.2}), std::invalid_argument); // out of range
    CHECK(Test(grid, {0.0, 1.0}).interior_ae());                    // endpoints may touch 0/1
    auto g3 = TypeGrid::from_table({-1.0, 0.0, 1.0}, {0.3, 0.4, 0.3});
    CHECK_FALSE(Test(g3, {0.0, 0.0, 1.0}).interior_ae());
}

TEST_CASE("signal stats frozen values") {
    const Test t(binary_grid(0.4), {0.2, 0.8});
    const SignalStats s = signal_stats(t);
    CHECK(s.pi_bar == doctest::Approx(0.44).epsilon(1e-14));
    CHECK(s.int_theta_pi == doctest::Approx(0.20).epsilon(1e-14));
    CHECK(s.int_theta_1mpi == doctest::Approx(-0.40).epsilon(1e-14));
    CHECK(*s.post_mean_h == doctest::Approx(0.20 / 0.44).epsilon(1e-12));

    const Test t5(binary_grid(0.5), {0.2, 0.8});
    const SignalStats s5 = signal_stats(t5);
    CHECK(s5.pi_bar == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s5.int_theta_pi == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("signal stats against a direct per-point oracle") {
    std::mt19937_64 rng(11);
    auto grid = TypeGrid::uniform(-1.0, 0.6, 17);
    for (int rep = 0; rep < 50; ++rep) {
        const Test t = random_test(grid, rng);
        double pi_bar = 0, itp = 0, it1p = 0;
        for (std::size_t i = 0; i < grid->size(); ++i) {
            pi_bar += grid->weight(i) * t.pi(i);
            itp += grid->weight(i) * grid->theta(i) * t.pi(i);
            it1p += grid->weight(i) * grid->theta(i) * (1.0 - t.pi(i));
        }
        const SignalStats s = signal_stats(t);
        CHECK(s.pi_bar == doctest::Approx(pi_bar).epsilon(1e-13));
        CHECK(s.int_theta_pi == doctest::Approx(itp).epsilon(1e-13));
        CHECK(s.int_theta_1mpi == doctest::Approx(it1p).epsilon(1e-13));
        // accounting identity
        CHECK(s.int_theta_pi + s.int_theta_1mpi == doctest::Approx(grid->mean()).epsilon(1e-12));
    }
}

TEST_CASE("uninformative test leaves the posterior at the prior") {
    auto grid = binary_grid(0.4);
    const Test t(grid, {0.5, 0.5});
    const SignalStats s = signal_stats(t);
    CHECK(*s.post_mean_h == doctest::Approx(grid->mean()).epsilon(1e-13));
    CHECK(*s.post_mean_l == doctest::Approx(grid->mean()).epsilon(1e-13));
    for (Signal x : {Signal::High, Signal::Low}) {
        const auto post = posterior_dist(t, x);
        for (std::size_t i = 0; i < post.size(); ++i)
            CHECK(post[i] == doctest::Approx(grid->weight(i)).epsilon(1e-13));
    }
}

TEST_CASE("posterior frozen values and normalization") {
    const Test even(binary_grid(0.5), {0.2, 0.8});
    CHECK(posterior_dist(even, Signal::High)[1] == doctest::Approx(0.8).epsilon(1e-13));

    const Test skew(binary_grid(0.4), {0.2, 0.8});
    const auto post = posterior_dist(skew, Signal::High);
    CHECK(post[1] == doctest::Approx(0.32 / 0.44).epsilon(1e-12));
    CHECK(post[0] + post[1] == doctest::Approx(1.0).epsilon(1e-13));

    // posterior mean consistency with the stats
    const SignalStats s = signal_stats(skew);
    double mean = 0.0;
    for (std::size_t i = 0; i < post.size(); ++i) mean += post[i] * skew.grid().theta(i);
    CHECK(mean == doctest::Approx(*s.post_mean_h).epsilon(1e-12));

    const Test none(binary_grid(0.4), {0.0, 0.0});
    CHECK_THROWS_AS(posterior_dist(none, Signal::High), std::domain_error);
}

TEST_CASE("minimally informative membership") {
    CHECK(is_minimally_informative(Test(binary_grid(0.4), {0.2, 0.8})));
    CHECK(is_minimally_informative(Test(binary_grid(0.4), {0.35, 0.65})));
    CHECK_FALSE(is_minimally_informative(Test(binary_grid(0.4), {0.5, 0.5})));
}

TEST_CASE("membership implies signed posterior means when the market is negative") {
    std::mt19937_64 rng(23);
    auto grid = TypeGrid::uniform(-1.0, 0.6, 13);
    REQUIRE(grid->mean() < 0.0);
    int members = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const Test t = random_test(grid, rng);
        if (!is_minimally_informative(t)) continue;
        ++members;
        const SignalStats s = signal_stats(t);
        CHECK(*s.post_mean_h >= -1e-12);
        CHECK(*s.post_mean_l <= 1e-12);
    }
    CHECK(members > 0);
}

TEST_CASE("family monotonicity holds across random parameters") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto grid = TypeGrid::uniform(0.0, 1.0, 15);
    for (int rep = 0; rep < 100; ++rep) {
        const FamilyParams power{Family::PowerLinear, unif(rng), 0.2 + 3.0 * unif(rng)};
        const FamilyParams mix{Family::LinearMix, unif(rng), unif(rng)};
        for (const auto& params : {power, mix}) {
            const Test t = build_family_test(params, grid);
            for (std::size_t i = 1; i < t.size(); ++i) CHECK(t.pi(i) >= t.pi(i - 1));
        }
    }
}
