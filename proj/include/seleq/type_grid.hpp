#pragma once

#include <memory>
#include <span>
#include <vector>

namespace seleq {

enum class GridKind { Grid, Binary };

/// Discretized type distribution: strictly increasing support points theta
/// with strictly positive probability weights summing to one. All integrals
/// over the type space are weighted sums on this grid.
///
/// Immutable after construction; share via shared_ptr across workers.
class TypeGrid {
  public:
    /// Two-point grid (theta_low, theta_high) with mass mu on the high point.
    static std::shared_ptr<const TypeGrid> binary(double theta_low, double theta_high, double mu);

    /// Evenly spaced grid carrying the uniform distribution on
    /// [theta_min, theta_max]. Endpoint cells get half weight so that
    /// moments of piecewise-linear densities converge at O(h^2).
    static std::shared_ptr<const TypeGrid> uniform(double theta_min, double theta_max, std::size_t n_points);

    /// Explicit weight table. Weights must be positive; they are normalized
    /// to sum to exactly one.
    static std::shared_ptr<const TypeGrid> from_table(std::vector<double> theta, std::vector<double> weight);

    /// Evenly spaced grid weighted by density values sampled at the grid
    /// points (trapezoid cells), normalized.
    static std::shared_ptr<const TypeGrid> from_density(double theta_min, double theta_max,
                                                        std::span<const double> density);

    std::size_t size() const { return theta_.size(); }
    double theta(std::size_t i) const { return theta_[i]; }
    double weight(std::size_t i) const { return weight_[i]; }
    std::span<const double> thetas() const { return theta_; }
    std::span<const double> weights() const { return weight_; }
    GridKind kind() const { return kind_; }

    /// Mass on the high point; binary grids only.
    double mu() const;

    /// E[theta] under the grid weights.
    double mean() const;

    double theta_min() const { return theta_.front(); }
    double theta_max() const { return theta_.back(); }

    bool brackets_zero() const { return theta_.front() <= 0.0 && theta_.back() >= 0.0; }

    /// Linear interpolation of per-point values at theta = 0. An exact grid
    /// hit returns that point's value. Throws if the grid does not bracket 0.
    double interpolate_at_zero(std::span<const double> values) const;

    bool same_as(const TypeGrid& other) const;

  private:
    TypeGrid(std::vector<double> theta, std::vector<double> weight, GridKind kind);

    std::vector<double> theta_;
    std::vector<double> weight_;
    GridKind kind_;
};

using GridPtr = std::shared_ptr<const TypeGrid>;

} // namespace seleq
