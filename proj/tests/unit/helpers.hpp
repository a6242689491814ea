#pragma once

#include "seleq/orders.hpp"
#include "seleq/signal_test.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace seleq::testing {

inline GridPtr binary_grid(double mu = 0.4, double lo = -1.0, double hi = 1.0) {
    return TypeGrid::binary(lo, hi, mu);
}

/// Random monotone test with values kept inside [eps, 1-eps].
inline Test random_test(const GridPtr& grid, std::mt19937_64& rng, double eps = 0.02) {
    std::uniform_real_distribution<double> unif(eps, 1.0 - eps);
    std::vector<double> pi(grid->size());
    for (double& v : pi) v = unif(rng);
    std::sort(pi.begin(), pi.end());
    return Test(grid, std::move(pi));
}

/// Random test with a minimum spread between the lowest and highest value.
inline Test random_spread_test(const GridPtr& grid, std::mt19937_64& rng, double min_spread = 0.1,
                               double eps = 0.02) {
    for (;;) {
        Test t = random_test(grid, rng, eps);
        if (t.pi(t.size() - 1) - t.pi(0) >= min_spread) return t;
    }
}

/// All-pairs version of the difficulty cross-product condition; the library
/// checks adjacent pairs only, this is the independent oracle.
inline bool difficulty_all_pairs(const Test& t, const Test& d, double tol = 1e-9) {
    const std::size_t n = t.size();
    for (std::size_t lo = 0; lo < n; ++lo)
        for (std::size_t hi = lo + 1; hi < n; ++hi)
            for (Signal x : {Signal::High, Signal::Low}) {
                const double lt_hi = x == Signal::High ? t.pi(hi) : 1.0 - t.pi(hi);
                const double lt_lo = x == Signal::High ? t.pi(lo) : 1.0 - t.pi(lo);
                const double ld_hi = x == Signal::High ? d.pi(hi) : 1.0 - d.pi(hi);
                const double ld_lo = x == Signal::High ? d.pi(lo) : 1.0 - d.pi(lo);
                if (lt_hi * ld_lo < ld_hi * lt_lo - tol) return false;
            }
    return true;
}

} // namespace seleq::testing
