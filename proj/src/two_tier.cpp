#include "seleq/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seleq {

namespace {

void require_binary(const Test& t, const char* who) {
    if (t.grid().kind() != GridKind::Binary)
        throw std::invalid_argument(std::string(who) + ": binary type grid required");
}

double ratio_hi(const Test& t) {
    return t.pi(0) > 0.0 ? t.pi(1) / t.pi(0) : std::numeric_limits<double>::infinity();
}

} // namespace

TwoTierConditions two_tier_conditions(const Test& selective, const Test& safe, const CapacityConfig& cap) {
    require_binary(selective, "two_tier_conditions");
    if (!selective.same_grid(safe))
        throw std::invalid_argument("two_tier_conditions: tests on different grids");
    if (ratio_hi(selective) < ratio_hi(safe) - 1e-12)
        throw std::invalid_argument(
            "two_tier_conditions: selective test must have the larger high-signal likelihood ratio");

    const TypeGrid& g = selective.grid();
    const double mu = g.mu();
    const double pi_lo = selective.pi(0), pi_hi = selective.pi(1);
    TwoTierConditions c;
    c.low_type_profitable = g.theta(0) >= 0.0;
    c.mixing_feasible = (1.0 - mu) * pi_lo >= mu * pi_hi;
    c.selective_capacity_binds = 0.5 * (mu * pi_hi + (1.0 - mu) * pi_lo) >= cap.k;
    c.safe_capacity_binds = 0.5 * safe.pi(0) >= cap.k;
    return c;
}

TwoTierProfile two_tier_profile(const Test& selective, const CapacityConfig& cap) {
    require_binary(selective, "two_tier_profile");
    const TypeGrid& g = selective.grid();
    const double mu = g.mu();
    const double pi_lo = selective.pi(0), pi_hi = selective.pi(1);
    if (!((1.0 - mu) * pi_lo >= mu * pi_hi))
        throw std::domain_error("two_tier_profile: mixing probability would exceed one");
    if (!(0.5 * (mu * pi_hi + (1.0 - mu) * pi_lo) >= cap.k))
        throw std::domain_error("two_tier_profile: selective firm's capacity would not bind");

    TwoTierProfile out;
    out.phi_low_to_safe = (mu * pi_hi + (1.0 - mu) * pi_lo) / (2.0 * (1.0 - mu) * pi_lo);

    // indifference residual of the low type: the safe-firm utility
    // k / ((1-mu)*phi) against the selective-firm utility under rationing
    const double phi = out.phi_low_to_safe;
    const double u_safe = cap.k / ((1.0 - mu) * phi);
    const double mass_sel = mu * pi_hi + (1.0 - mu) * (1.0 - phi) * pi_lo;
    const double u_sel = cap.k / mass_sel * pi_lo;
    out.indifference_residual = u_sel - u_safe;
    return out;
}

namespace {

struct DeviationOutcome {
    explicit DeviationOutcome(SelectionProcedure p) : proc(std::move(p)) {}

    double gain = 0.0;
    SelectionProcedure proc;
};

// Best lattice deviation for one firm in an asymmetric pair, re-solving the
// candidates' application equilibrium for every trial procedure. The
// deviating firm is passed first to the solver; the indifferent high type
// goes to the rival (the non-deviating firm).
DeviationOutcome best_asymmetric_deviation(const SelectionProcedure& own_current,
                                           const SelectionProcedure& rival,
                                           double current_payoff, const TestSet& set,
                                           std::optional<CapacityConfig> cap,
                                           const SearchParams& search, bool* converged) {
    DeviationOutcome best(own_current);
    const auto evaluate = [&](const SelectionProcedure& dev) {
        CapacitySplit split;
        if (cap) {
            split = solve_binary_application_equilibrium(dev, rival, cap,
                                                         /*prefer_high_tie_firm=*/2);
            if (!split.converged && converged) *converged = false;
        } else {
            split.profile = best_response_split(dev, rival);
            split.p1 = split.p2 = 1.0;
        }
        const double payoff = split.p1 * firm_payoff(dev, split.profile.phi);
        const double gain = payoff - current_payoff;
        if (gain > best.gain) {
            best.gain = gain;
            best.proc = dev;
        }
    };
    for (const Test& t : set.tests) {
        for (int kstep = 0; kstep <= 2 * search.alpha_steps; ++kstep)
            evaluate(cutoff_procedure(t, static_cast<double>(kstep) / search.alpha_steps));
        if (search.full_alpha) {
            for (int ih = 0; ih <= search.alpha_steps; ++ih)
                for (int il = 0; il <= search.alpha_steps; ++il) {
                    SelectionProcedure dev{t};
                    dev.alpha_h = static_cast<double>(ih) / search.alpha_steps;
                    dev.alpha_l = static_cast<double>(il) / search.alpha_steps;
                    evaluate(dev);
                }
        }
    }
    return best;
}

} // namespace

TwoTierCertificate verify_two_tier(const SelectionProcedure& selective, const SelectionProcedure& safe,
                                   const TestSet& set, std::optional<CapacityConfig> cap,
                                   const SearchParams& search) {
    set.validate();
    validate(selective);
    validate(safe);
    require_binary(selective.test, "verify_two_tier");

    TwoTierCertificate cert(selective, safe);
    cert.capacity_mode = cap.has_value();

    std::vector<double> phi_sel(2, 0.0), phi_safe(2, 0.0);

    if (cap) {
        cert.conditions = two_tier_conditions(selective.test, safe.test, *cap);
        cert.applicable = cert.conditions.all();
        if (!cert.applicable) return cert;

        const TwoTierProfile prof = two_tier_profile(selective.test, *cap);
        cert.phi_low_to_safe = prof.phi_low_to_safe;

        // high type applies to the selective firm, low type mixes
        phi_sel = {1.0 - prof.phi_low_to_safe, 1.0};
        phi_safe = {prof.phi_low_to_safe, 0.0};
        const double p_sel = rationing(acceptance_mass(selective, phi_sel), cap->k);
        const double p_safe = rationing(acceptance_mass(safe, phi_safe), cap->k);
        cert.payoff_selective = p_sel * firm_payoff(selective, phi_sel);
        cert.payoff_safe = p_safe * firm_payoff(safe, phi_safe);
    } else {
        // proposed assignment: high to the selective firm, low to the safe
        const double u_sel_hi = candidate_utility(selective, 1);
        const double u_safe_hi = candidate_utility(safe, 1);
        const double u_sel_lo = candidate_utility(selective, 0);
        const double u_safe_lo = candidate_utility(safe, 0);
        cert.profile_consistent = u_sel_hi >= u_safe_hi - 1e-12 && u_safe_lo >= u_sel_lo - 1e-12;
        cert.phi_low_to_safe = 1.0;
        phi_sel = {0.0, 1.0};
        phi_safe = {1.0, 0.0};
        cert.payoff_selective = firm_payoff(selective, phi_sel);
        cert.payoff_safe = firm_payoff(safe, phi_safe);
    }

    const DeviationOutcome dev_sel = best_asymmetric_deviation(
        selective, safe, cert.payoff_selective, set, cap, search, &cert.converged);
    const DeviationOutcome dev_safe = best_asymmetric_deviation(
        safe, selective, cert.payoff_safe, set, cap, search, &cert.converged);

    cert.deviation_gain_selective = dev_sel.gain;
    cert.best_dev_selective = dev_sel.proc;
    cert.deviation_gain_safe = dev_safe.gain;
    cert.best_dev_safe = dev_safe.proc;
    cert.is_equilibrium =
        cert.deviation_gain_selective <= search.gain_tol && cert.deviation_gain_safe <= search.gain_tol;
    return cert;
}

} // namespace seleq
