#include "seleq/info_cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seleq {

namespace {

double divergence_to_prior(std::span<const double> posterior, std::span<const double> prior,
                           Divergence div) {
    double c = 0.0;
    for (std::size_t i = 0; i < posterior.size(); ++i) {
        if (div == Divergence::KLToPrior) {
            if (posterior[i] > 0.0) c += posterior[i] * std::log(posterior[i] / prior[i]);
        } else {
            const double delta = posterior[i] - prior[i];
            c += delta * delta;
        }
    }
    return std::max(c, 0.0);
}

} // namespace

double test_cost(const Test& test, const CostSpec& spec) {
    if (test.uninformative()) return 0.0;
    for (std::size_t i = 0; i < test.size(); ++i)
        if (test.pi(i) <= 0.0 || test.pi(i) >= 1.0)
            return std::numeric_limits<double>::infinity(); // informative test ruling out a type
    const SignalStats s = signal_stats(test);
    const auto prior = test.grid().weights();
    double c = 0.0;
    if (s.pi_bar > 0.0)
        c += s.pi_bar * divergence_to_prior(posterior_dist(test, Signal::High), prior, spec.divergence);
    if (s.pi_bar < 1.0)
        c += (1.0 - s.pi_bar) * divergence_to_prior(posterior_dist(test, Signal::Low), prior, spec.divergence);
    return c;
}

double mix_mu_limit(const Test& test) {
    const SignalStats s = signal_stats(test);
    if (!(s.pi_bar < 1.0)) throw std::domain_error("mix_mu_limit: degenerate test with pi_bar = 1");
    return (1.0 - test.pi(test.size() - 1)) / (1.0 - s.pi_bar);
}

Test mix_easier_test(const Test& test, double lambda, double mu_mix) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("mix_easier_test: lambda outside [0,1]");
    const SignalStats s = signal_stats(test);
    if (!(s.pi_bar > 0.0 && s.pi_bar < 1.0))
        throw std::domain_error("mix_easier_test: test must have interior signal mass");
    const double mu_max = mix_mu_limit(test);
    if (mu_mix < 0.0 || mu_mix >= mu_max)
        throw std::invalid_argument("mix_easier_test: mu_mix outside its admissible interval");
    const double denom = (1.0 - mu_mix) * (1.0 - lambda * (1.0 - s.pi_bar)) + mu_mix * s.pi_bar;
    std::vector<double> pi(test.size());
    for (std::size_t i = 0; i < test.size(); ++i)
        pi[i] = std::min(1.0, (lambda * s.pi_bar + (1.0 - lambda) * test.pi(i)) / denom);
    return Test(test.grid_ptr(), std::move(pi));
}

Test isocost_easier(const Test& test, const CostSpec& spec, double mu_mix, double cost_tol) {
    const double target = test_cost(test, spec);
    if (test.uninformative() || !(target > 0.0))
        throw std::domain_error("isocost_easier: input must be informative with positive cost");
    if (!std::isfinite(target)) throw std::domain_error("isocost_easier: input has infinite cost");
    if (!(mu_mix > 0.0)) throw std::invalid_argument("isocost_easier: mu_mix must be strictly positive");
    if (mu_mix >= mix_mu_limit(test))
        throw std::invalid_argument("isocost_easier: mu_mix outside its admissible interval");

    const auto excess = [&](double lambda) {
        return test_cost(mix_easier_test(test, lambda, mu_mix), spec) - target;
    };
    double lo = 0.0, hi = 1.0;
    const double at_lo = excess(0.0), at_hi = excess(1.0);
    if (at_lo < 0.0 || at_hi > 0.0)
        throw std::runtime_error("isocost_easier: cost is not bracketed over lambda (endpoint costs " +
                                 std::to_string(at_lo + target) + ", " + std::to_string(at_hi + target) +
                                 " vs target " + std::to_string(target) + ")");
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double e = excess(mid);
        if (std::abs(e) <= cost_tol) return mix_easier_test(test, mid, mu_mix);
        if (e > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return mix_easier_test(test, 0.5 * (lo + hi), mu_mix);
}

namespace {

// Sharpened version of a test: pull pi away from its mean so the input is a
// garbling of the output. Returns nothing when the stretch leaves [0,1].
std::optional<Test> sharpen(const Test& test, double eps) {
    const SignalStats s = signal_stats(test);
    std::vector<double> pi(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        pi[i] = test.pi(i) + eps * (test.pi(i) - s.pi_bar);
        if (pi[i] < 0.0 || pi[i] > 1.0) return std::nullopt;
    }
    return Test(test.grid_ptr(), std::move(pi));
}

} // namespace

CostEquilibriumReport verify_cost_equilibrium(const SelectionProcedure& candidate, const CostSpec& spec,
                                              const SearchParams& search) {
    validate(candidate);
    CostEquilibriumReport report;
    report.kappa = spec.kappa;
    report.cost = test_cost(candidate.test, spec);
    const SignalStats s = signal_stats(candidate.test);
    report.int_theta_pi = s.int_theta_pi;
    report.budget_binding = std::isfinite(report.cost) && std::abs(report.cost - spec.kappa) <= 1e-8;
    report.posterior_mean_zero = std::abs(s.int_theta_pi) <= 1e-9;

    const auto consider = [&](const Test& dev_test, const char* kind) {
        const double c = test_cost(dev_test, spec);
        if (!(c <= spec.kappa + 1e-8)) return;
        const CutoffScan scan = best_cutoff_deviation(candidate, dev_test, search);
        if (scan.gain > search.gain_tol &&
            (!report.deviation || scan.gain > report.deviation->gain)) {
            report.deviation = CostDeviation{scan.proc, c, scan.gain, kind};
            report.deviation_found = true;
        }
    };

    // ease-mix transforms of the candidate's own test
    if (!candidate.test.uninformative() && std::isfinite(report.cost)) {
        const double mu_max = mix_mu_limit(candidate.test);
        for (double mu_frac : {0.0, 1e-4, 1e-2, 0.25}) {
            const double mu = mu_frac * mu_max;
            if (mu >= mu_max) continue;
            for (double lambda : {0.02, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8}) {
                consider(mix_easier_test(candidate.test, lambda, mu), "ease_mix");
            }
        }
    }
    // de-garbled (sharpened) versions, feasible only when the budget is slack
    for (double eps : {1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0}) {
        const auto sharp = sharpen(candidate.test, eps);
        if (sharp) consider(*sharp, "sharpen");
    }
    return report;
}

} // namespace seleq
