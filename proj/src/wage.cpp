#include "seleq/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seleq {

namespace {

double wage_deviation_payoff(const SelectionProcedure& dev, const SelectionProcedure& candidate,
                             double tie_tol) {
    const ApplicationProfile phi =
        best_response_split(dev, candidate, MarketMode::Wage, 1.0, 1.0, tie_tol);
    return firm_payoff(dev, phi, MarketMode::Wage);
}

} // namespace

WageReport verify_wage_equilibrium(const SelectionProcedure& candidate, const TestSet& set,
                                   const SearchParams& search, int wage_steps, int wage_alpha_steps) {
    set.validate();
    validate(candidate);
    if (!set.index_of(candidate.test))
        throw std::invalid_argument("verify_wage_equilibrium: candidate test not in set");
    if (wage_steps < 2 || wage_alpha_steps < 1)
        throw std::invalid_argument("verify_wage_equilibrium: bad lattice resolution");

    WageReport report(candidate);
    report.alpha_l_zero = candidate.alpha_l <= 1e-12;

    const SignalStats stats = signal_stats(candidate.test);
    report.zero_profit_wage = stats.pi_bar > 0.0 ? stats.int_theta_pi / stats.pi_bar : 0.0;
    report.wage_matches_zero_profit = std::abs(candidate.wage_h - report.zero_profit_wage) <= 1e-9;

    report.difficulty_maximal = true;
    for (const Test& other : set.tests) {
        if (std::equal(candidate.test.pis().begin(), candidate.test.pis().end(), other.pis().begin()))
            continue;
        if (comparable_in_both(other, candidate.test)) {
            report.knife_edge_pair = true;
            continue; // constant-ratio pairs fall outside the difficulty argument
        }
        if (compare_difficulty(other, candidate.test) == Comparison::MoreThan)
            report.difficulty_maximal = false;
    }

    std::vector<double> half(candidate.test.size(), 0.5);
    report.equilibrium_payoff = firm_payoff(candidate, half, MarketMode::Wage);
    report.best_gain = 0.0;

    const TypeGrid& grid = candidate.test.grid();
    const double wage_max = std::max(grid.theta_max(), 0.0);
    const bool pivot = grid.brackets_zero();
    const double cand_pi0 = pivot ? grid.interpolate_at_zero(candidate.test.pis()) : 0.0;

    for (const Test& t : set.tests) {
        // wage points: even grid on [0, theta_max], the deviation test's own
        // zero-profit wage, and the wage matching the candidate's expected
        // transfer at the pivot type
        std::vector<double> wages;
        wages.reserve(static_cast<std::size_t>(wage_steps) + 3);
        for (int i = 0; i < wage_steps; ++i)
            wages.push_back(wage_max * static_cast<double>(i) / static_cast<double>(wage_steps - 1));
        const SignalStats ts = signal_stats(t);
        if (ts.pi_bar > 0.0 && ts.int_theta_pi > 0.0) wages.push_back(ts.int_theta_pi / ts.pi_bar);
        if (pivot) {
            const double pi0 = grid.interpolate_at_zero(t.pis());
            if (pi0 > 0.0 && candidate.wage_h > 0.0) {
                const double w = candidate.wage_h * cand_pi0 / pi0;
                if (w >= 0.0 && w <= 2.0 * wage_max) wages.push_back(w);
            }
        }
        for (int a = 0; a <= 2 * wage_alpha_steps; ++a) {
            SelectionProcedure base = cutoff_procedure(t, static_cast<double>(a) / wage_alpha_steps);
            for (double w : wages) {
                SelectionProcedure dev = base;
                dev.wage_h = w;
                dev.wage_l = 0.0;
                const double gain =
                    wage_deviation_payoff(dev, candidate, search.tie_tol) - report.equilibrium_payoff;
                if (gain > report.best_gain) {
                    report.best_gain = gain;
                    report.best_deviation = dev;
                }
            }
        }
    }

    // cross-subsidy deviation: shift pay from the low to the high signal
    // along the zero-profit direction; profitable against any candidate that
    // still rewards the low signal
    if (candidate.alpha_l > 1e-12 && candidate.wage_l > 0.0 && stats.pi_bar > 0.0 && stats.pi_bar < 1.0) {
        for (double eps : {1e-4, 1e-3, 1e-2, 0.05}) {
            const double delta = eps * candidate.alpha_h * stats.pi_bar /
                                 (candidate.alpha_l * (1.0 - stats.pi_bar));
            if (delta > candidate.wage_l) continue;
            SelectionProcedure dev = candidate;
            dev.wage_h += eps;
            dev.wage_l -= delta;
            const double gain =
                wage_deviation_payoff(dev, candidate, search.tie_tol) - report.equilibrium_payoff;
            report.cross_subsidy_gain = std::max(report.cross_subsidy_gain, gain);
            if (gain > report.best_gain) {
                report.best_gain = gain;
                report.best_deviation = dev;
            }
        }
    }

    report.deviation_found = report.best_gain > search.gain_tol;
    return report;
}

} // namespace seleq
