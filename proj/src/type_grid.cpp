#include "seleq/type_grid.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace seleq {

namespace {

void validate_support(std::span<const double> theta) {
    if (theta.size() < 2) throw std::invalid_argument("type grid needs at least two points");
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (!std::isfinite(theta[i])) throw std::invalid_argument("type grid: non-finite theta");
        if (i > 0 && theta[i] <= theta[i - 1])
            throw std::invalid_argument("type grid: theta must be strictly increasing");
    }
}

std::vector<double> normalized(std::vector<double> w) {
    double sum = 0.0;
    for (double x : w) {
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::invalid_argument("type grid: weights must be strictly positive");
        sum += x;
    }
    for (double& x : w) x /= sum;
    return w;
}

} // namespace

TypeGrid::TypeGrid(std::vector<double> theta, std::vector<double> weight, GridKind kind)
    : theta_(std::move(theta)), weight_(std::move(weight)), kind_(kind) {}

GridPtr TypeGrid::binary(double theta_low, double theta_high, double mu) {
    if (!(theta_low < theta_high)) throw std::invalid_argument("binary grid: theta_low < theta_high required");
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("binary grid: mu must lie in (0,1)");
    return GridPtr(new TypeGrid({theta_low, theta_high}, {1.0 - mu, mu}, GridKind::Binary));
}

GridPtr TypeGrid::uniform(double theta_min, double theta_max, std::size_t n_points) {
    if (n_points < 2) throw std::invalid_argument("uniform grid: need at least two points");
    if (!(theta_min < theta_max)) throw std::invalid_argument("uniform grid: theta_min < theta_max required");
    std::vector<double> theta(n_points);
    const double h = (theta_max - theta_min) / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) theta[i] = theta_min + h * static_cast<double>(i);
    theta.back() = theta_max;
    std::vector<double> w(n_points, 1.0);
    w.front() = w.back() = 0.5;
    return GridPtr(new TypeGrid(std::move(theta), normalized(std::move(w)), GridKind::Grid));
}

GridPtr TypeGrid::from_table(std::vector<double> theta, std::vector<double> weight) {
    validate_support(theta);
    if (theta.size() != weight.size()) throw std::invalid_argument("type grid: theta/weight length mismatch");
    return GridPtr(new TypeGrid(std::move(theta), normalized(std::move(weight)), GridKind::Grid));
}

GridPtr TypeGrid::from_density(double theta_min, double theta_max, std::span<const double> density) {
    if (density.size() < 2) throw std::invalid_argument("density grid: need at least two samples");
    if (!(theta_min < theta_max)) throw std::invalid_argument("density grid: theta_min < theta_max required");
    const std::size_t n = density.size();
    std::vector<double> theta(n);
    std::vector<double> w(density.begin(), density.end());
    const double h = (theta_max - theta_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) theta[i] = theta_min + h * static_cast<double>(i);
    theta.back() = theta_max;
    // trapezoid cells: endpoint samples carry half a cell
    w.front() *= 0.5;
    w.back() *= 0.5;
    return GridPtr(new TypeGrid(std::move(theta), normalized(std::move(w)), GridKind::Grid));
}

double TypeGrid::mu() const {
    if (kind_ != GridKind::Binary) throw std::logic_error("mu() is defined for binary grids only");
    return weight_[1];
}

double TypeGrid::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < theta_.size(); ++i) m += weight_[i] * theta_[i];
    return m;
}

double TypeGrid::interpolate_at_zero(std::span<const double> values) const {
    if (values.size() != theta_.size())
        throw std::invalid_argument("interpolate_at_zero: values length mismatch");
    if (!brackets_zero()) throw std::domain_error("interpolate_at_zero: grid does not bracket 0");
    // first index with theta >= 0
    std::size_t hi = 0;
    while (theta_[hi] < 0.0) ++hi;
    if (theta_[hi] == 0.0) return values[hi];
    const std::size_t lo = hi - 1;
    const double t = (0.0 - theta_[lo]) / (theta_[hi] - theta_[lo]);
    return values[lo] + t * (values[hi] - values[lo]);
}

bool TypeGrid::same_as(const TypeGrid& other) const {
    if (this == &other) return true;
    return kind_ == other.kind_ && theta_ == other.theta_ && weight_ == other.weight_;
}

} // namespace seleq
