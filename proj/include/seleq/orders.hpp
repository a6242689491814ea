#pragma once

#include "seleq/signal_test.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace seleq {

enum class Comparison { MoreThan, LessThan, Equal, Incomparable };

Comparison swapped(Comparison c);
const char* to_string(Comparison c);

inline constexpr double kOrderTol = 1e-9;

/// Lehmann accuracy order. MoreThan means t is more accurate than d: the
/// high-signal likelihood ratio of t across types is more extreme than d's,
/// and the low-signal ratio less extreme. Checked on adjacent grid pairs in
/// division-free cross-product form, which is equivalent to the all-pairs
/// condition because ratio monotonicity is transitive along the grid.
Comparison compare_accuracy(const Test& t, const Test& d, double tol = kOrderTol);

/// Difficulty order. MoreThan means t is more difficult than d: the
/// likelihood ratios of both signals are nondecreasing in the type when
/// moving from d to t. Same adjacent-pair cross-product scheme as accuracy.
Comparison compare_difficulty(const Test& t, const Test& d, double tol = kOrderTol);

/// True when t and d are strictly comparable in both accuracy and
/// difficulty at once. These are the constant-likelihood-ratio pairs; the
/// structural equilibrium arguments exclude them, so verifiers flag them.
bool comparable_in_both(const Test& t, const Test& d, double tol = kOrderTol);

/// First-order stochastic dominance of p over q on a common grid:
/// CDF_p <= CDF_q + tol pointwise.
bool fosd(std::span<const double> p, std::span<const double> q, double tol = kOrderTol);

struct FosdEquivReport {
    bool holds = true; // every supplied prior has t's posteriors dominating d's
    std::optional<std::vector<double>> witness_prior;
    std::optional<Signal> witness_signal;
};

/// Dominance half of the difficulty/FOSD equivalence: recompute both tests'
/// posteriors under each supplied prior (zero entries allowed) and check that
/// t's posterior dominates d's after both signals. Signals with zero mass in
/// both tests are vacuous and skipped. Returns the first failing prior as a
/// witness.
FosdEquivReport check_difficulty_fosd_equiv(const Test& t, const Test& d,
                                            std::span<const std::vector<double>> priors,
                                            double tol = kOrderTol);

/// Conditional CDF of the piecewise-linear continuous rewrite of a binary
/// test with high-signal probability pi, and its quantile function.
double binary_signal_cdf(double pi, double x);
double binary_signal_quantile(double pi, double q);

/// Continuous-signal accuracy oracle: evaluates
///   ( F_t(F_t^{-1}(q | theta_from) | theta_to),
///     F_d(F_d^{-1}(q | theta_from) | theta_to) )
/// for grid points theta_from < theta_to. t is more accurate than d exactly
/// when the first coordinate is <= the second for every q in [0,1] and every
/// ordered pair of types.
std::pair<double, double> lehmann_cdf_cross(const Test& t, const Test& d,
                                            double theta_from, double theta_to, double q);

/// Sweeps the oracle above over a q-grid and every ordered pair of grid
/// types; true when t is certified at least as accurate as d throughout.
bool lehmann_oracle_at_least_as_accurate(const Test& t, const Test& d, int q_points = 50,
                                         double tol = kOrderTol);

/// Prior battery for the difficulty/FOSD cross-check: mostly full-support
/// random priors, a share of sparse ones, and targeted two-point priors at
/// every adjacent pair where a cross-product condition fails (those are the
/// exact witnesses of an order violation).
std::vector<std::vector<double>> fosd_prior_battery(const Test& t, const Test& d,
                                                    std::size_t n_random, std::uint64_t seed);

} // namespace seleq
