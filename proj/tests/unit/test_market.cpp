#include "helpers.hpp"
#include "seleq/market.hpp"

#include <doctest.h>

#include <cmath>

using namespace seleq;
using seleq::testing::binary_grid;
using seleq::testing::random_spread_test;

TEST_CASE("acceptance probability") {
    const Test t(binary_grid(0.4), {0.2, 0.8});
    CHECK(acceptance_prob({t, 1.0, 1.0}, 0) == doctest::Approx(1.0));
    CHECK(acceptance_prob({t, 1.0, 0.0}, 1) == doctest::Approx(0.8));
    CHECK(acceptance_prob({t, 1.0, 0.5}, 0) == doctest::Approx(0.6)); // 0.2 + 0.5*0.8
}

TEST_CASE("candidate utility in each mode") {
    const Test t(binary_grid(0.4), {0.2, 0.8});
    const SelectionProcedure cutoff{t, 1.0, 0.0};
    CHECK(candidate_utility(cutoff, 1) == doctest::Approx(0.8));
    CHECK(candidate_utility(cutoff, 1, MarketMode::Capacity, 0.4) == doctest::Approx(0.32));

    const Test grid_pt(binary_grid(0.5, -1.0, 1.0), {0.44, 0.44});
    SelectionProcedure wage{grid_pt, 1.0, 0.0};
    wage.wage_h = 0.4545;
    CHECK(candidate_utility(wage, 0, MarketMode::Wage) == doctest::Approx(0.2).epsilon(1e-3));
    // wages are ignored outside wage mode
    CHECK(candidate_utility(wage, 0) == doctest::Approx(0.44));
}

TEST_CASE("best response split") {
    auto grid = binary_grid(0.4);
    const Test t(grid, {0.2, 0.8});

    SUBCASE("identical procedures tie everywhere") {
        const auto phi = best_response_split({t, 1.0, 0.5}, {t, 1.0, 0.5});
        for (double v : phi.phi) CHECK(v == doctest::Approx(0.5));
    }
    SUBCASE("higher low-signal acceptance attracts every type") {
        const auto phi = best_response_split({t, 1.0, 0.6}, {t, 1.0, 0.5});
        for (double v : phi.phi) CHECK(v == doctest::Approx(1.0));
    }
    SUBCASE("harder test at the same rule repels every type") {
        const Test harder(grid, {0.1, 0.7});
        const auto phi = best_response_split({harder, 1.0, 0.3}, {t, 1.0, 0.3});
        for (double v : phi.phi) CHECK(v == doctest::Approx(0.0));
    }
}

TEST_CASE("firm payoff") {
    SUBCASE("accept-all splits the positive market") {
        auto grid = binary_grid(0.6); // mean +0.2
        const Test t(grid, {0.2, 0.8});
        const SelectionProcedure all{t, 1.0, 1.0};
        const std::vector<double> half{0.5, 0.5};
        CHECK(firm_payoff(all, half) == doctest::Approx(0.1).epsilon(1e-13));
    }
    SUBCASE("no acceptance, no payoff") {
        const Test t(binary_grid(0.4), {0.2, 0.8});
        const std::vector<double> half{0.5, 0.5};
        CHECK(firm_payoff({t, 0.0, 0.0}, half) == doctest::Approx(0.0));
    }
    SUBCASE("zero-profit rule nets out to zero") {
        const Test t(binary_grid(0.4), {0.2, 0.8});
        const std::vector<double> half{0.5, 0.5};
        CHECK(firm_payoff({t, 1.0, 0.5}, half) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("wage mode nets wages from accepted values") {
        const Test t(binary_grid(0.4), {0.2, 0.8});
        SelectionProcedure proc{t, 1.0, 0.0};
        proc.wage_h = 0.20 / 0.44;
        const std::vector<double> full{1.0, 1.0};
        // int theta pi - m * pi_bar = 0.20 - (0.20/0.44)*0.44 = 0
        CHECK(firm_payoff(proc, full, MarketMode::Wage) == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("symmetric split accounting") {
    std::mt19937_64 rng(41);
    auto grid = TypeGrid::uniform(-1.0, 0.8, 13);
    for (int rep = 0; rep < 50; ++rep) {
        const Test t = random_spread_test(grid, rng);
        const SelectionProcedure proc{t, 0.9, 0.2};
        const std::vector<double> half(grid->size(), 0.5);
        const std::vector<double> full(grid->size(), 1.0);
        CHECK(2.0 * firm_payoff(proc, half) == doctest::Approx(firm_payoff(proc, full)).epsilon(1e-12));
    }
}

TEST_CASE("cutoff reduction frozen examples") {
    auto grid = binary_grid(0.5); // pi interpolates to 0.5 at zero
    const Test t(grid, {0.2, 0.8});

    SUBCASE("already cutoff is unchanged") {
        const SelectionProcedure out = to_cutoff({t, 1.0, 0.3});
        CHECK(out.alpha_h == doctest::Approx(1.0));
        CHECK(out.alpha_l == doctest::Approx(0.3));
    }
    SUBCASE("low acceptance scales alpha_h") {
        const SelectionProcedure out = to_cutoff({t, 0.5, 0.4});
        CHECK(out.alpha_h == doctest::Approx(0.9));
        CHECK(out.alpha_l == doctest::Approx(0.0));
    }
    SUBCASE("high acceptance raises alpha_l") {
        const SelectionProcedure out = to_cutoff({t, 0.9, 0.9});
        CHECK(out.alpha_h == doctest::Approx(1.0));
        CHECK(out.alpha_l == doctest::Approx(0.8));
    }
}

TEST_CASE("cutoff reduction preserves the pivot and rotates acceptance") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto grid = TypeGrid::uniform(-1.0, 0.9, 21);
    for (int rep = 0; rep < 100; ++rep) {
        const Test t = random_spread_test(grid, rng);
        const SelectionProcedure proc{t, unif(rng), unif(rng)};
        const SelectionProcedure cut = to_cutoff(proc);
        CHECK((cut.alpha_l <= 1e-12 || cut.alpha_h >= 1.0 - 1e-12)); // cutoff form

        std::vector<double> before(grid->size()), after(grid->size());
        for (std::size_t i = 0; i < grid->size(); ++i) {
            before[i] = acceptance_prob(proc, i);
            after[i] = acceptance_prob(cut, i);
        }
        CHECK(grid->interpolate_at_zero(before) ==
              doctest::Approx(grid->interpolate_at_zero(after)).epsilon(1e-12));
        for (std::size_t i = 0; i < grid->size(); ++i) {
            if (grid->theta(i) < 0.0) CHECK(after[i] <= before[i] + 1e-12);
            if (grid->theta(i) > 0.0) CHECK(after[i] >= before[i] - 1e-12);
        }
    }
}

TEST_CASE("procedure validation") {
    const Test t(binary_grid(0.4), {0.2, 0.8});
    CHECK_THROWS_AS(validate({t, 1.2, 0.0}), std::invalid_argument);
    SelectionProcedure bad{t, 1.0, 0.0};
    bad.wage_h = -0.1;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
