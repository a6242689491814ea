#pragma once

#include "seleq/equilibrium.hpp"
#include "seleq/signal_test.hpp"

#include <optional>
#include <string>

namespace seleq {

enum class Divergence { KLToPrior, QuadraticToPrior };

/// Posterior-separable test cost: kappa is the design budget, the divergence
/// is evaluated at each signal's posterior against the market prior (zero at
/// the prior, strictly convex, continuous).
struct CostSpec {
    Divergence divergence = Divergence::KLToPrior;
    double kappa = 0.0;
};

/// Signal-probability-weighted divergence of the posteriors from the prior.
/// KLToPrior equals the mutual information between type and signal in nats.
/// An informative test hitting 0 or 1 anywhere is priced at infinity.
double test_cost(const Test& test, const CostSpec& spec);

/// Builds an easier test from the input by mixing the high-signal posterior
/// toward the prior (weight lambda) while unmixing the low-signal posterior
/// away from it (weight mu_mix):
///   pi_d = (lambda*pi_bar + (1-lambda)*pi) /
///          ((1-mu_mix)*(1-lambda*(1-pi_bar)) + mu_mix*pi_bar).
/// Valid for mu_mix in [0, (1-pi(theta_max)) / (1-pi_bar)); the output is
/// weakly easier than the input and satisfies the mixing identities
///   lambda*f + (1-lambda)*f_h  = f_h'   and   mu_mix*f + (1-mu_mix)*f_l' = f_l.
Test mix_easier_test(const Test& test, double lambda, double mu_mix);

/// Upper end of the admissible mu_mix interval for mix_easier_test.
double mix_mu_limit(const Test& test);

/// Bisection over lambda to produce a strictly easier test with the same
/// cost as the input, within cost_tol. Requires mu_mix in the open interval
/// (0, mix_mu_limit) and an informative input with finite cost.
Test isocost_easier(const Test& test, const CostSpec& spec, double mu_mix, double cost_tol = 1e-8);

struct CostDeviation {
    SelectionProcedure proc;
    double cost = 0.0;
    double gain = 0.0;
    std::string kind; // "ease_mix" or "sharpen"
};

/// Budget-constrained symmetric-equilibrium checks: (a) the budget binds,
/// (b) the high-signal posterior mean is zero, (c) no profitable deviation
/// among sampled feasible tests built from ease-mix transforms and
/// garbling / sharpening perturbations of the candidate.
struct CostEquilibriumReport {
    double cost = 0.0;
    double kappa = 0.0;
    double int_theta_pi = 0.0;
    bool budget_binding = false;
    bool posterior_mean_zero = false;
    bool deviation_found = false;
    std::optional<CostDeviation> deviation;
    bool all_ok() const { return budget_binding && posterior_mean_zero && !deviation_found; }
};

CostEquilibriumReport verify_cost_equilibrium(const SelectionProcedure& candidate, const CostSpec& spec,
                                              const SearchParams& search = {});

} // namespace seleq
