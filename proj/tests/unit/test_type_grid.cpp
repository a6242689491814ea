#include "helpers.hpp"
#include "seleq/type_grid.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace seleq;

TEST_CASE("binary grid mean") {
    CHECK(TypeGrid::binary(-1, 1, 0.4)->mean() == doctest::Approx(-0.2).epsilon(1e-14));
    CHECK(TypeGrid::binary(-1, 1, 0.5)->mean() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(TypeGrid::binary(-1, 1, 0.6)->mean() == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("grid invariants") {
    auto g = TypeGrid::uniform(-1.0, 0.5, 11);
    double sum = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        sum += g->weight(i);
        CHECK(g->weight(i) > 0.0);
        if (i > 0) CHECK(g->theta(i) > g->theta(i - 1));
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g->brackets_zero());

    CHECK_THROWS_AS(TypeGrid::binary(1.0, -1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(TypeGrid::binary(-1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TypeGrid::from_table({0.0, 1.0}, {0.5, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(TypeGrid::from_table({0.0, 0.0}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("interpolate at zero") {
    CHECK(TypeGrid::binary(-1, 1, 0.5)->interpolate_at_zero(std::vector<double>{0.2, 0.8}) ==
          doctest::Approx(0.5).epsilon(1e-14));
    auto g3 = TypeGrid::from_table({-1.0, 0.0, 1.0}, {0.3, 0.4, 0.3});
    CHECK(g3->interpolate_at_zero(std::vector<double>{0.2, 0.5, 0.8}) == doctest::Approx(0.5));
    auto off = TypeGrid::binary(-0.5, 1.5, 0.5);
    CHECK(off->interpolate_at_zero(std::vector<double>{0.0, 1.0}) == doctest::Approx(0.25));

    auto positive = TypeGrid::binary(0.2, 1.0, 0.3);
    CHECK_FALSE(positive->brackets_zero());
    CHECK_THROWS_AS(positive->interpolate_at_zero(std::vector<double>{0.0, 1.0}), std::domain_error);
}

TEST_CASE("mean is linear in theta scaling") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.1, 3.0);
    for (int rep = 0; rep < 20; ++rep) {
        const double c = unif(rng);
        auto g = TypeGrid::uniform(-1.0, 0.7, 31);
        std::vector<double> scaled(g->size());
        for (std::size_t i = 0; i < g->size(); ++i) scaled[i] = c * g->theta(i);
        auto gs = TypeGrid::from_table(scaled, {g->weights().begin(), g->weights().end()});
        CHECK(gs->mean() == doctest::Approx(c * g->mean()).epsilon(1e-12));
    }
}

TEST_CASE("grid refinement error falls with spacing squared") {
    // linear density 1 + 0.8*theta on [-1, 1]: exact mean is
    // int theta*f / int f = (2*0.8/3) / 2 = 0.8/3
    const auto sample = [](std::size_t n) {
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double th = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
            f[i] = 1.0 + 0.8 * th;
        }
        return TypeGrid::from_density(-1.0, 1.0, f)->mean();
    };
    const double exact = 0.8 / 3.0;
    const double err_coarse = std::abs(sample(51) - exact);
    const double err_fine = std::abs(sample(101) - exact);
    const double h_coarse = 2.0 / 50.0;
    const double h_fine = 2.0 / 100.0;
    CHECK(err_coarse <= 4.0 * h_coarse * h_coarse);
    CHECK(err_fine <= 4.0 * h_fine * h_fine);
}
