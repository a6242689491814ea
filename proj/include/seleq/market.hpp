#pragma once

#include "seleq/signal_test.hpp"

#include <span>
#include <vector>

namespace seleq {

enum class MarketMode { Baseline, Capacity, Wage };

/// Posted selection procedure: a test plus acceptance probabilities per
/// signal, and per-signal wage offers used only in wage mode.
struct SelectionProcedure {
    Test test;
    double alpha_h = 1.0;
    double alpha_l = 0.0;
    double wage_h = 0.0;
    double wage_l = 0.0;
};

void validate(const SelectionProcedure& proc);

/// Per-type probability of applying to firm 1.
struct ApplicationProfile {
    std::vector<double> phi;
};

/// Probability that the given type is accepted: alpha_h*pi + alpha_l*(1-pi).
double acceptance_prob(const SelectionProcedure& proc, std::size_t type_index);

/// Candidate's expected payoff from applying. Baseline and capacity modes
/// value acceptance itself; wage mode values the expected transfer. ration
/// scales for capacity rationing.
double candidate_utility(const SelectionProcedure& proc, std::size_t type_index,
                         MarketMode mode = MarketMode::Baseline, double ration = 1.0);

/// Each type applies to the firm offering higher utility; exact ties split
/// one half each.
ApplicationProfile best_response_split(const SelectionProcedure& proc1, const SelectionProcedure& proc2,
                                       MarketMode mode = MarketMode::Baseline, double ration1 = 1.0,
                                       double ration2 = 1.0, double tie_tol = 1e-12);

/// Expected payoff of a firm running proc when phi_to_firm is the per-type
/// probability of applying to it. Wage mode nets the posted wage out of each
/// accepted type's value.
double firm_payoff(const SelectionProcedure& proc, std::span<const double> phi_to_firm,
                   MarketMode mode = MarketMode::Baseline);

inline double firm_payoff(const SelectionProcedure& proc, const ApplicationProfile& profile,
                          MarketMode mode = MarketMode::Baseline) {
    return firm_payoff(proc, std::span<const double>(profile.phi), mode);
}

/// Unique cutoff-form procedure (alpha_l > 0 only with alpha_h = 1, and
/// alpha_h < 1 only with alpha_l = 0) with the same acceptance probability
/// at theta = 0. Requires the grid to bracket zero. Acceptance weakly drops
/// below the pivot and weakly rises above it.
SelectionProcedure to_cutoff(const SelectionProcedure& proc);

/// Cutoff procedures parametrized by a single number in [0,2]:
/// a <= 1 gives (alpha_h, alpha_l) = (a, 0); a > 1 gives (1, a-1).
SelectionProcedure cutoff_procedure(const Test& test, double a);

} // namespace seleq
