#include "seleq/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seleq {

void TestSet::validate() const {
    if (tests.empty()) throw std::invalid_argument("test set: empty");
    for (const Test& t : tests)
        if (!t.same_grid(tests.front())) throw std::invalid_argument("test set: grids differ");
    if (!family_coords.empty() && family_coords.size() != tests.size())
        throw std::invalid_argument("test set: family coordinate count mismatch");
}

std::optional<std::size_t> TestSet::index_of(const Test& t) const {
    for (std::size_t i = 0; i < tests.size(); ++i) {
        if (!t.same_grid(tests[i])) continue;
        if (std::equal(t.pis().begin(), t.pis().end(), tests[i].pis().begin())) return i;
    }
    return std::nullopt;
}

ZeroProfitResult zero_profit_alpha(const Test& test) {
    const SignalStats s = signal_stats(test);
    const double mean = test.grid().mean();
    ZeroProfitResult r{SelectionProcedure{test}};
    constexpr double tol = 1e-12;
    if (mean >= 0.0) {
        r.proc.alpha_h = 1.0;
        r.proc.alpha_l = 1.0;
    } else if (s.int_theta_pi > tol) {
        r.proc.alpha_h = 1.0;
        r.proc.alpha_l = s.int_theta_pi / (-s.int_theta_1mpi);
    } else if (s.int_theta_pi >= -tol) {
        r.proc.alpha_h = 1.0;
        r.proc.alpha_l = 0.0;
    } else {
        r.proc.alpha_h = 0.0;
        r.proc.alpha_l = 0.0;
        r.supportable = false;
    }
    return r;
}

namespace {

// Deviating payoff against a symmetric candidate: the deviator attracts the
// types preferring its procedure, ties split one half.
double deviation_payoff(const SelectionProcedure& dev, const SelectionProcedure& candidate,
                        double tie_tol) {
    const ApplicationProfile phi = best_response_split(dev, candidate, MarketMode::Baseline, 1.0, 1.0, tie_tol);
    return firm_payoff(dev, phi, MarketMode::Baseline);
}

} // namespace

CutoffScan best_cutoff_deviation(const SelectionProcedure& candidate, const Test& dev_test,
                                 const SearchParams& search) {
    if (search.alpha_steps < 2) throw std::invalid_argument("best_cutoff_deviation: alpha_steps must be >= 2");
    std::vector<double> half(candidate.test.size(), 0.5);
    const double eq_payoff = firm_payoff(candidate, half);

    std::vector<double> cut_params;
    cut_params.reserve(static_cast<std::size_t>(2 * search.alpha_steps) + 2);
    for (int k = 0; k <= 2 * search.alpha_steps; ++k)
        cut_params.push_back(static_cast<double>(k) / static_cast<double>(search.alpha_steps));
    if (candidate.test.grid().brackets_zero()) {
        // cutoff rule matched to the candidate's acceptance at theta = 0
        const double cand_pi0 = candidate.test.grid().interpolate_at_zero(candidate.test.pis());
        const double acc0 = candidate.alpha_h * cand_pi0 + candidate.alpha_l * (1.0 - cand_pi0);
        const double pi0 = dev_test.grid().interpolate_at_zero(dev_test.pis());
        if (acc0 <= pi0) {
            if (pi0 > 0.0) cut_params.push_back(acc0 / pi0);
        } else if (pi0 < 1.0) {
            cut_params.push_back(1.0 + (acc0 - pi0) / (1.0 - pi0));
        }
    }

    CutoffScan best(candidate);
    best.gain = -std::numeric_limits<double>::infinity();
    for (double a : cut_params) {
        const SelectionProcedure dev = cutoff_procedure(dev_test, std::clamp(a, 0.0, 2.0));
        const double gain = deviation_payoff(dev, candidate, search.tie_tol) - eq_payoff;
        if (gain > best.gain) {
            best.gain = gain;
            best.proc = dev;
        }
    }
    return best;
}

DeviationReport verify_symmetric(const SelectionProcedure& candidate, const TestSet& set,
                                 const SearchParams& search) {
    set.validate();
    validate(candidate);
    const auto cand_index = set.index_of(candidate.test);
    if (!cand_index) throw std::invalid_argument("verify_symmetric: candidate test is not in the set");

    DeviationReport report(candidate);
    report.alpha_step = 1.0 / static_cast<double>(search.alpha_steps);

    std::vector<double> half(candidate.test.size(), 0.5);
    report.equilibrium_payoff = firm_payoff(candidate, half);

    report.best_gain = 0.0; // null deviation: stay at the candidate
    report.best_deviation_test = *cand_index;

    for (std::size_t ti = 0; ti < set.tests.size(); ++ti) {
        const Test& t = set.tests[ti];
        const CutoffScan scan = best_cutoff_deviation(candidate, t, search);
        if (scan.gain > report.best_gain) {
            report.best_gain = scan.gain;
            report.best_deviation = scan.proc;
            report.best_deviation_test = ti;
        }
        if (search.full_alpha) {
            for (int ih = 0; ih <= search.alpha_steps; ++ih) {
                for (int il = 0; il <= search.alpha_steps; ++il) {
                    SelectionProcedure dev{t};
                    dev.alpha_h = static_cast<double>(ih) / search.alpha_steps;
                    dev.alpha_l = static_cast<double>(il) / search.alpha_steps;
                    const double gain =
                        deviation_payoff(dev, candidate, search.tie_tol) - report.equilibrium_payoff;
                    if (gain > report.best_gain) {
                        report.best_gain = gain;
                        report.best_deviation = dev;
                        report.best_deviation_test = ti;
                    }
                }
            }
        }
    }

    report.is_equilibrium = report.best_gain <= search.gain_tol;
    report.structural = structural_checks(candidate.test, set);
    const double expected = std::max(0.0, 0.5 * candidate.test.grid().mean());
    report.structural.zero_profit_ok = std::abs(report.equilibrium_payoff - expected) <= 1e-10;
    return report;
}

namespace {

// Binary-grid likelihood ratios: high-signal ratio in [1, inf), low-signal
// ratio in (0, 1] for monotone tests.
double ratio_high(const Test& t) {
    const double lo = t.pi(0), hi = t.pi(1);
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

double ratio_low(const Test& t) {
    const double lo = 1.0 - t.pi(0), hi = 1.0 - t.pi(1);
    if (lo <= 0.0) return hi <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return hi / lo;
}

} // namespace

CandidateResult candidate_equilibrium(const TestSet& set) {
    set.validate();
    CandidateResult result;

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < set.tests.size(); ++i)
        if (is_minimally_informative(set.tests[i])) members.push_back(i);
    if (members.empty()) return result;

    std::size_t pick = members.front();
    if (set.tests.front().grid().kind() == GridKind::Binary) {
        // smallest low-signal likelihood ratio, ties resolved by the largest
        // high-signal ratio, then lowest index
        for (std::size_t idx : members) {
            const double rl = ratio_low(set.tests[idx]);
            const double rl_best = ratio_low(set.tests[pick]);
            if (rl < rl_best - 1e-15 ||
                (rl <= rl_best + 1e-15 && ratio_high(set.tests[idx]) > ratio_high(set.tests[pick]) + 1e-15))
                pick = idx;
        }
    } else {
        // difficulty-minimal members of T_i
        std::vector<std::size_t> minimal;
        for (std::size_t idx : members) {
            bool easier_exists = false;
            for (std::size_t other : members) {
                if (other == idx) continue;
                if (compare_difficulty(set.tests[idx], set.tests[other]) == Comparison::MoreThan) {
                    easier_exists = true;
                    break;
                }
            }
            if (!easier_exists) minimal.push_back(idx);
        }
        // accuracy-maximal among the minimal ones, then lowest index
        pick = minimal.front();
        for (std::size_t idx : minimal) {
            bool dominated = false;
            for (std::size_t other : minimal) {
                if (other == idx) continue;
                if (compare_accuracy(set.tests[other], set.tests[idx]) == Comparison::MoreThan) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) {
                pick = idx;
                break;
            }
        }
    }

    result.found = true;
    result.index = pick;
    result.proc = zero_profit_alpha(set.tests[pick]).proc;
    return result;
}

StructuralFlags structural_checks(const Test& test, const TestSet& set) {
    set.validate();
    StructuralFlags flags;
    flags.in_ti = is_minimally_informative(test);
    flags.accuracy_maximal = true;
    flags.difficulty_minimal_in_ti = true;
    for (const Test& other : set.tests) {
        if (std::equal(test.pis().begin(), test.pis().end(), other.pis().begin())) continue;
        if (compare_accuracy(other, test) == Comparison::MoreThan) flags.accuracy_maximal = false;
        if (is_minimally_informative(other) &&
            compare_difficulty(test, other) == Comparison::MoreThan)
            flags.difficulty_minimal_in_ti = false;
        if (comparable_in_both(test, other)) flags.knife_edge_pair = true;
    }
    return flags;
}

} // namespace seleq
