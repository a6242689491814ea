#include "seleq/orders.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace seleq {

Comparison swapped(Comparison c) {
    switch (c) {
        case Comparison::MoreThan: return Comparison::LessThan;
        case Comparison::LessThan: return Comparison::MoreThan;
        default: return c;
    }
}

const char* to_string(Comparison c) {
    switch (c) {
        case Comparison::MoreThan: return "more_than";
        case Comparison::LessThan: return "less_than";
        case Comparison::Equal: return "equal";
        default: return "incomparable";
    }
}

namespace {

void require_same_grid(const Test& t, const Test& d) {
    if (!t.same_grid(d)) throw std::invalid_argument("order comparison: tests live on different grids");
}

// Adjacent-pair cross products for one signal. "forward" holds when
// lik_t(theta) * lik_d(theta') >= lik_d(theta) * lik_t(theta') - tol for
// every adjacent theta > theta', i.e. the ratio lik_t/lik_d is nondecreasing.
bool ratio_nondecreasing(const Test& t, const Test& d, Signal x, double tol) {
    const std::size_t n = t.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double lt_hi = x == Signal::High ? t.pi(i + 1) : 1.0 - t.pi(i + 1);
        const double lt_lo = x == Signal::High ? t.pi(i) : 1.0 - t.pi(i);
        const double ld_hi = x == Signal::High ? d.pi(i + 1) : 1.0 - d.pi(i + 1);
        const double ld_lo = x == Signal::High ? d.pi(i) : 1.0 - d.pi(i);
        if (lt_hi * ld_lo < ld_hi * lt_lo - tol) return false;
    }
    return true;
}

Comparison classify(bool more, bool less) {
    if (more && less) return Comparison::Equal;
    if (more) return Comparison::MoreThan;
    if (less) return Comparison::LessThan;
    return Comparison::Incomparable;
}

} // namespace

Comparison compare_accuracy(const Test& t, const Test& d, double tol) {
    require_same_grid(t, d);
    const bool more = ratio_nondecreasing(t, d, Signal::High, tol) &&
                      ratio_nondecreasing(d, t, Signal::Low, tol);
    const bool less = ratio_nondecreasing(d, t, Signal::High, tol) &&
                      ratio_nondecreasing(t, d, Signal::Low, tol);
    return classify(more, less);
}

Comparison compare_difficulty(const Test& t, const Test& d, double tol) {
    require_same_grid(t, d);
    const bool more = ratio_nondecreasing(t, d, Signal::High, tol) &&
                      ratio_nondecreasing(t, d, Signal::Low, tol);
    const bool less = ratio_nondecreasing(d, t, Signal::High, tol) &&
                      ratio_nondecreasing(d, t, Signal::Low, tol);
    return classify(more, less);
}

bool comparable_in_both(const Test& t, const Test& d, double tol) {
    const Comparison a = compare_accuracy(t, d, tol);
    const Comparison diff = compare_difficulty(t, d, tol);
    const auto strict = [](Comparison c) {
        return c == Comparison::MoreThan || c == Comparison::LessThan;
    };
    return strict(a) && strict(diff);
}

bool fosd(std::span<const double> p, std::span<const double> q, double tol) {
    if (p.size() != q.size()) throw std::invalid_argument("fosd: length mismatch");
    double cp = 0.0, cq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cp += p[i];
        cq += q[i];
        if (cp > cq + tol) return false;
    }
    return true;
}

namespace {

// Posterior under an arbitrary prior; empty when the signal mass is zero.
std::optional<std::vector<double>> posterior_under_prior(const Test& t, std::span<const double> prior,
                                                         Signal x) {
    double mass = 0.0;
    std::vector<double> post(prior.size());
    for (std::size_t i = 0; i < prior.size(); ++i) {
        const double lik = x == Signal::High ? t.pi(i) : 1.0 - t.pi(i);
        post[i] = prior[i] * lik;
        mass += post[i];
    }
    if (!(mass > 0.0)) return std::nullopt;
    for (double& v : post) v /= mass;
    return post;
}

} // namespace

FosdEquivReport check_difficulty_fosd_equiv(const Test& t, const Test& d,
                                            std::span<const std::vector<double>> priors, double tol) {
    require_same_grid(t, d);
    FosdEquivReport report;
    for (const auto& prior : priors) {
        if (prior.size() != t.size()) throw std::invalid_argument("fosd equiv: prior length mismatch");
        for (Signal x : {Signal::High, Signal::Low}) {
            const auto pt = posterior_under_prior(t, prior, x);
            const auto pd = posterior_under_prior(d, prior, x);
            if (!pt || !pd) continue; // zero-mass signal: vacuous
            if (!fosd(*pt, *pd, tol)) {
                report.holds = false;
                report.witness_prior = prior;
                report.witness_signal = x;
                return report;
            }
        }
    }
    return report;
}

double binary_signal_cdf(double pi, double x) {
    x = std::clamp(x, 0.0, 1.0);
    if (x < 0.5) return 2.0 * (1.0 - pi) * x;
    return 1.0 + 2.0 * pi * (x - 1.0);
}

double binary_signal_quantile(double pi, double q) {
    if (q < 0.0 || q > 1.0) throw std::domain_error("binary_signal_quantile: q outside [0,1]");
    if (q == 0.0) return 0.0;
    if (q == 1.0) return 1.0;
    if (q < 1.0 - pi) return q / (2.0 * (1.0 - pi));
    // here q >= 1 - pi and q < 1, so pi > 0
    return q / (2.0 * pi) + (2.0 * pi - 1.0) / (2.0 * pi);
}

std::pair<double, double> lehmann_cdf_cross(const Test& t, const Test& d, double theta_from,
                                            double theta_to, double q) {
    require_same_grid(t, d);
    if (q < 0.0 || q > 1.0) throw std::domain_error("lehmann_cdf_cross: q outside [0,1]");
    const auto index_of = [&](double th) {
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t.grid().theta(i) == th) return i;
        throw std::invalid_argument("lehmann_cdf_cross: theta is not a grid point");
    };
    const std::size_t from = index_of(theta_from);
    const std::size_t to = index_of(theta_to);
    const double ft = binary_signal_cdf(t.pi(to), binary_signal_quantile(t.pi(from), q));
    const double fd = binary_signal_cdf(d.pi(to), binary_signal_quantile(d.pi(from), q));
    return {ft, fd};
}

bool lehmann_oracle_at_least_as_accurate(const Test& t, const Test& d, int q_points, double tol) {
    require_same_grid(t, d);
    const std::size_t n = t.size();
    for (std::size_t from = 0; from < n; ++from) {
        for (std::size_t to = from + 1; to < n; ++to) {
            for (int k = 0; k <= q_points; ++k) {
                const double q = static_cast<double>(k) / static_cast<double>(q_points);
                const auto [ft, fd] =
                    lehmann_cdf_cross(t, d, t.grid().theta(from), t.grid().theta(to), q);
                if (ft > fd + tol) return false;
            }
        }
    }
    return true;
}

std::vector<std::vector<double>> fosd_prior_battery(const Test& t, const Test& d, std::size_t n_random,
                                                    std::uint64_t seed) {
    require_same_grid(t, d);
    const std::size_t n = t.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<std::vector<double>> priors;
    priors.reserve(n_random + 2 * n);
    const std::size_t n_sparse = n_random / 5;
    for (std::size_t s = 0; s < n_random; ++s) {
        std::vector<double> prior(n);
        double sum = 0.0;
        for (double& v : prior) {
            v = -std::log(1.0 - unif(rng)); // exponential weights, full support
            sum += v;
        }
        if (s < n_sparse && n > 2) {
            // zero out a random subset, keeping at least two support points
            std::size_t alive = n;
            for (std::size_t i = 0; i < n && alive > 2; ++i) {
                if (unif(rng) < 0.5) {
                    sum -= prior[i];
                    prior[i] = 0.0;
                    --alive;
                }
            }
        }
        for (double& v : prior) v /= sum;
        priors.push_back(std::move(prior));
    }

    // targeted two-point witnesses at adjacent cross-product violations
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (Signal x : {Signal::High, Signal::Low}) {
            const double lt_hi = x == Signal::High ? t.pi(i + 1) : 1.0 - t.pi(i + 1);
            const double lt_lo = x == Signal::High ? t.pi(i) : 1.0 - t.pi(i);
            const double ld_hi = x == Signal::High ? d.pi(i + 1) : 1.0 - d.pi(i + 1);
            const double ld_lo = x == Signal::High ? d.pi(i) : 1.0 - d.pi(i);
            if (lt_hi * ld_lo < ld_hi * lt_lo) {
                std::vector<double> prior(n, 0.0);
                prior[i] = prior[i + 1] = 0.5;
                priors.push_back(std::move(prior));
            }
        }
    }
    return priors;
}

} // namespace seleq
