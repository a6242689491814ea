#pragma once

#include "seleq/type_grid.hpp"

#include <optional>
#include <span>
#include <vector>

namespace seleq {

enum class Signal { High, Low };

/// Binary-signal test over a type grid: pi[i] is the probability that type
/// theta_i produces the high signal. pi must be nondecreasing in the type
/// index (monotone tests); values at interior grid points should stay inside
/// (0,1), which interior_ae() reports without rejecting the test.
class Test {
  public:
    Test(GridPtr grid, std::vector<double> pi);

    const TypeGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::size_t size() const { return pi_.size(); }
    double pi(std::size_t i) const { return pi_[i]; }
    std::span<const double> pis() const { return pi_; }

    bool same_grid(const Test& other) const;

    /// True when pi stays strictly inside (0,1) at all interior grid points.
    bool interior_ae() const;

    /// True when pi is constant (uninformative) within tol.
    bool uninformative(double tol = 1e-12) const;

  private:
    GridPtr grid_;
    std::vector<double> pi_;
};

enum class Family { PowerLinear, LinearMix, ThresholdNoiseUniform };

/// Parameters for the built-in test families.
///
///   PowerLinear          pi = (sigma/2 + (1-sigma)*x)^d, x the type rescaled
///                        to [0,1]; sigma in [0,1], d > 0. Difficulty
///                        increases in d, accuracy decreases in sigma.
///   LinearMix            pi = sigma*base + (1-sigma)*d; sigma, d in [0,1].
///                        Difficulty decreases in d, accuracy increases in
///                        sigma. The base curve defaults to the identity ramp
///                        rescaled into (0.05, 0.95).
///   ThresholdNoiseUniform  pi = Pr[theta + sigma*eps >= d], eps ~ U[0,1],
///                        requiring theta_min > d - sigma and theta_max < d.
///                        Difficulty increases in d, accuracy decreases in
///                        sigma.
struct FamilyParams {
    Family family = Family::PowerLinear;
    double sigma = 0.0;
    double d = 1.0;
    std::vector<double> linear_mix_base; // optional; per grid point when set
};

Test build_family_test(const FamilyParams& params, const GridPtr& grid);

/// Signal-level summary statistics of a test under the grid distribution.
struct SignalStats {
    double pi_bar = 0.0;          // total mass of the high signal
    double int_theta_pi = 0.0;    // sum of theta * pi * weight
    double int_theta_1mpi = 0.0;  // sum of theta * (1 - pi) * weight
    std::optional<double> post_mean_h; // E[theta | high]; empty when pi_bar = 0
    std::optional<double> post_mean_l; // E[theta | low];  empty when pi_bar = 1
};

SignalStats signal_stats(const Test& test);

/// Posterior type distribution after observing the given signal.
/// Throws when that signal has zero mass.
std::vector<double> posterior_dist(const Test& test, Signal signal);

/// Membership in the minimally informative set: the high-signal posterior
/// mean is >= 0 and the low-signal posterior mean is <= 0, expressed through
/// the two signed integrals so boundary tests classify as members.
bool is_minimally_informative(const Test& test, double tol = 1e-12);

} // namespace seleq
