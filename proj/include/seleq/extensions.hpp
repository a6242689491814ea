#pragma once

#include "seleq/equilibrium.hpp"

#include <optional>
#include <string>

namespace seleq {

struct CapacityConfig {
    double k = 0.0; // per-firm hiring capacity in mass units
};

/// Probability an accepted application survives the capacity constraint:
/// min{1, k / mass}; 1 when nothing is demanded.
double rationing(double mass_demanded, double k);

/// Mass of acceptances a firm would issue to the applicants in phi_to_firm.
double acceptance_mass(const SelectionProcedure& proc, std::span<const double> phi_to_firm);

struct CapacitySplit {
    ApplicationProfile profile; // per-type probability of applying to firm 1
    double p1 = 1.0;
    double p2 = 1.0;
    bool converged = true;
};

/// Candidates' application equilibrium when both firms ration at capacity k.
/// Binary grids are solved exactly by support-pattern enumeration (pure and
/// mixing patterns in a fixed order, the indifferent high type going to
/// prefer_high_tie_firm); other grids use damped fixed-point iteration on
/// the rationing pair.
CapacitySplit solve_capacity_split(const SelectionProcedure& proc1, const SelectionProcedure& proc2,
                                   const CapacityConfig& cap, int prefer_high_tie_firm = 1,
                                   double tol = 1e-10, int max_iter = 10000);

/// Exact binary-grid application equilibrium, with or without capacity.
/// Throws when no support pattern is consistent.
CapacitySplit solve_binary_application_equilibrium(const SelectionProcedure& proc1,
                                                   const SelectionProcedure& proc2,
                                                   std::optional<CapacityConfig> cap,
                                                   int prefer_high_tie_firm = 1);

struct CapacityReport {
    explicit CapacityReport(SelectionProcedure cand) : base(std::move(cand)) {}

    DeviationReport base;
    double p_equilibrium = 1.0;  // rationing probability at the symmetric split
    bool severe_capacity = false; // k below half the candidate's acceptance mass
    bool difficulty_maximal = false; // no set member strictly harder (knife-edge pairs excluded)
};

/// Symmetric-equilibrium check under capacity: deviations re-solve the
/// application equilibrium including rationing feedback.
CapacityReport verify_capacity_equilibrium(const SelectionProcedure& candidate, const TestSet& set,
                                           const CapacityConfig& cap, const SearchParams& search = {});

struct TwoTierConditions {
    bool low_type_profitable = false;     // theta_low >= 0
    bool mixing_feasible = false;         // (1-mu)*pi_sel(lo) >= mu*pi_sel(hi)
    bool selective_capacity_binds = false; // (mu*pi_sel(hi)+(1-mu)*pi_sel(lo))/2 >= k
    bool safe_capacity_binds = false;     // pi_safe(lo)/2 >= k
    bool all() const {
        return low_type_profitable && mixing_feasible && selective_capacity_binds && safe_capacity_binds;
    }
};

/// The four inequality conditions supporting a two-tier equilibrium on a
/// binary grid. Requires the selective test to have the (weakly) larger
/// high-signal likelihood ratio.
TwoTierConditions two_tier_conditions(const Test& selective, const Test& safe, const CapacityConfig& cap);

struct TwoTierProfile {
    double phi_low_to_safe = 0.0;      // probability the low type applies to the safe firm
    double indifference_residual = 0.0; // low type's cross-firm utility gap at that mix
};

/// Closed-form mixing probability of the low type in the two-tier
/// equilibrium, plus the residual of its indifference equation under
/// rationing.
TwoTierProfile two_tier_profile(const Test& selective, const CapacityConfig& cap);

struct TwoTierCertificate {
    TwoTierCertificate(SelectionProcedure sel, SelectionProcedure saf)
        : selective_proc(sel), safe_proc(saf), best_dev_selective(selective_proc), best_dev_safe(safe_proc) {}

    SelectionProcedure selective_proc;
    SelectionProcedure safe_proc;
    bool capacity_mode = false;
    bool applicable = true;         // capacity-mode conditions all hold
    bool profile_consistent = true; // proposed assignment is a candidate best response
    TwoTierConditions conditions;
    double phi_low_to_safe = 0.0;
    double payoff_selective = 0.0;
    double payoff_safe = 0.0;
    double deviation_gain_selective = 0.0;
    double deviation_gain_safe = 0.0;
    SelectionProcedure best_dev_selective;
    SelectionProcedure best_dev_safe;
    bool is_equilibrium = false; // both deviation gains within tolerance
    bool converged = true;
};

/// Two-tier verification. Without capacity the certificate is expected to
/// exhibit a profitable deviation (no two-tier equilibria exist); with
/// capacity and the four conditions satisfied, neither firm should gain from
/// any lattice deviation under re-solved continuation play.
TwoTierCertificate verify_two_tier(const SelectionProcedure& selective, const SelectionProcedure& safe,
                                   const TestSet& set, std::optional<CapacityConfig> cap,
                                   const SearchParams& search = {});

struct WageReport {
    explicit WageReport(SelectionProcedure cand) : best_deviation(std::move(cand)) {}

    bool alpha_l_zero = false;
    bool difficulty_maximal = false; // knife-edge pairs (comparable in both orders) excluded
    bool wage_matches_zero_profit = false;
    double zero_profit_wage = 0.0;
    double equilibrium_payoff = 0.0;
    bool deviation_found = false;
    double best_gain = 0.0;
    SelectionProcedure best_deviation;
    double cross_subsidy_gain = 0.0; // positive when the wage-shift deviation profits
    bool knife_edge_pair = false;
    bool all_ok() const {
        return alpha_l_zero && difficulty_maximal && wage_matches_zero_profit && !deviation_found;
    }
};

/// Wage-competition symmetric-equilibrium check: no acceptance after the low
/// signal, difficulty-maximal test, the zero-profit wage after the high
/// signal, and no profitable deviation over (test, cutoff rule, wage)
/// triples including the cross-subsidy wage shift and the harder-test wage
/// matched at the pivot type.
WageReport verify_wage_equilibrium(const SelectionProcedure& candidate, const TestSet& set,
                                   const SearchParams& search = {}, int wage_steps = 201,
                                   int wage_alpha_steps = 8);

} // namespace seleq
