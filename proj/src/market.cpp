#include "seleq/market.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seleq {

void validate(const SelectionProcedure& proc) {
    const auto in01 = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!in01(proc.alpha_h) || !in01(proc.alpha_l))
        throw std::invalid_argument("selection procedure: acceptance probabilities must lie in [0,1]");
    if (!(proc.wage_h >= 0.0) || !(proc.wage_l >= 0.0))
        throw std::invalid_argument("selection procedure: wages must be nonnegative");
}

double acceptance_prob(const SelectionProcedure& proc, std::size_t i) {
    const double p = proc.test.pi(i);
    return proc.alpha_h * p + proc.alpha_l * (1.0 - p);
}

double candidate_utility(const SelectionProcedure& proc, std::size_t i, MarketMode mode, double ration) {
    const double p = proc.test.pi(i);
    if (mode == MarketMode::Wage)
        return ration * (proc.alpha_h * p * proc.wage_h + proc.alpha_l * (1.0 - p) * proc.wage_l);
    return ration * acceptance_prob(proc, i);
}

ApplicationProfile best_response_split(const SelectionProcedure& proc1, const SelectionProcedure& proc2,
                                       MarketMode mode, double ration1, double ration2, double tie_tol) {
    if (!proc1.test.same_grid(proc2.test))
        throw std::invalid_argument("best_response_split: procedures on different grids");
    const std::size_t n = proc1.test.size();
    ApplicationProfile profile;
    profile.phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u1 = candidate_utility(proc1, i, mode, ration1);
        const double u2 = candidate_utility(proc2, i, mode, ration2);
        if (u1 > u2 + tie_tol)
            profile.phi[i] = 1.0;
        else if (u2 > u1 + tie_tol)
            profile.phi[i] = 0.0;
        else
            profile.phi[i] = 0.5;
    }
    return profile;
}

double firm_payoff(const SelectionProcedure& proc, std::span<const double> phi_to_firm, MarketMode mode) {
    const TypeGrid& g = proc.test.grid();
    if (phi_to_firm.size() != g.size()) throw std::invalid_argument("firm_payoff: profile length mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double p = proc.test.pi(i);
        const double th = g.theta(i);
        double per_type;
        if (mode == MarketMode::Wage)
            per_type = p * proc.alpha_h * (th - proc.wage_h) + (1.0 - p) * proc.alpha_l * (th - proc.wage_l);
        else
            per_type = th * (p * proc.alpha_h + (1.0 - p) * proc.alpha_l);
        v += phi_to_firm[i] * g.weight(i) * per_type;
    }
    return v;
}

SelectionProcedure to_cutoff(const SelectionProcedure& proc) {
    const double pi0 = proc.test.grid().interpolate_at_zero(proc.test.pis());
    const double acc0 = proc.alpha_h * pi0 + proc.alpha_l * (1.0 - pi0);
    SelectionProcedure out = proc;
    if (acc0 <= pi0) {
        out.alpha_l = 0.0;
        out.alpha_h = pi0 > 0.0 ? acc0 / pi0 : 0.0;
    } else {
        out.alpha_h = 1.0;
        out.alpha_l = (acc0 - pi0) / (1.0 - pi0); // acc0 > pi0 implies pi0 < 1
    }
    return out;
}

SelectionProcedure cutoff_procedure(const Test& test, double a) {
    if (a < 0.0 || a > 2.0) throw std::invalid_argument("cutoff_procedure: parameter outside [0,2]");
    SelectionProcedure proc{test};
    if (a <= 1.0) {
        proc.alpha_h = a;
        proc.alpha_l = 0.0;
    } else {
        proc.alpha_h = 1.0;
        proc.alpha_l = a - 1.0;
    }
    return proc;
}

} // namespace seleq
