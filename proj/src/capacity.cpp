#include "seleq/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seleq {

double rationing(double mass_demanded, double k) {
    if (mass_demanded < 0.0) throw std::invalid_argument("rationing: negative mass");
    if (mass_demanded == 0.0) return 1.0;
    return std::min(1.0, k / mass_demanded);
}

double acceptance_mass(const SelectionProcedure& proc, std::span<const double> phi_to_firm) {
    const TypeGrid& g = proc.test.grid();
    if (phi_to_firm.size() != g.size()) throw std::invalid_argument("acceptance_mass: profile length mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        m += phi_to_firm[i] * g.weight(i) * acceptance_prob(proc, i);
    return m;
}

namespace {

constexpr double kUtilityTol = 1e-9;

struct BinaryEnv {
    double w_lo, w_hi;       // type weights
    double a1_lo, a1_hi;     // firm 1 acceptance probabilities per type
    double a2_lo, a2_hi;
    double k;                // +inf when no capacity
};

struct PatternState {
    double x_hi = 1.0, x_lo = 1.0; // probability of applying to firm 1
    double p1 = 1.0, p2 = 1.0;
};

PatternState evaluate(const BinaryEnv& env, double x_hi, double x_lo) {
    PatternState st;
    st.x_hi = x_hi;
    st.x_lo = x_lo;
    const double m1 = env.w_hi * x_hi * env.a1_hi + env.w_lo * x_lo * env.a1_lo;
    const double m2 = env.w_hi * (1.0 - x_hi) * env.a2_hi + env.w_lo * (1.0 - x_lo) * env.a2_lo;
    st.p1 = rationing(m1, env.k);
    st.p2 = rationing(m2, env.k);
    return st;
}

double gap_hi(const BinaryEnv& env, const PatternState& st) {
    return st.p1 * env.a1_hi - st.p2 * env.a2_hi;
}
double gap_lo(const BinaryEnv& env, const PatternState& st) {
    return st.p1 * env.a1_lo - st.p2 * env.a2_lo;
}

// Assignment consistency: a type sent purely to one firm must weakly prefer
// it; a mixing type must be indifferent.
bool consistent(const BinaryEnv& env, const PatternState& st, int hi_firm, int lo_firm) {
    const double gh = gap_hi(env, st);
    const double gl = gap_lo(env, st);
    const auto pure_ok = [](double gap, int firm) {
        return firm == 1 ? gap >= -kUtilityTol : gap <= kUtilityTol;
    };
    const bool hi_ok = hi_firm == 0 ? std::abs(gh) <= kUtilityTol : pure_ok(gh, hi_firm);
    const bool lo_ok = lo_firm == 0 ? std::abs(gl) <= kUtilityTol : pure_ok(gl, lo_firm);
    return hi_ok && lo_ok;
}

// Bisection for a mixing type's indifference; the utility gap is
// nonincreasing in the own application probability to firm 1.
std::optional<double> solve_mix(const BinaryEnv& env, bool mix_is_high, double other_x) {
    const auto gap = [&](double x) {
        const PatternState st = mix_is_high ? evaluate(env, x, other_x) : evaluate(env, other_x, x);
        return mix_is_high ? gap_hi(env, st) : gap_lo(env, st);
    };
    double lo = 0.0, hi = 1.0;
    double glo = gap(lo), ghi = gap(hi);
    if (glo < -kUtilityTol || ghi > kUtilityTol) return std::nullopt;
    if (std::abs(glo) <= kUtilityTol) return lo;
    if (std::abs(ghi) <= kUtilityTol) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = gap(mid);
        if (std::abs(g) <= 1e-14) return mid;
        if (g > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

CapacitySplit solve_binary_application_equilibrium(const SelectionProcedure& proc1,
                                                   const SelectionProcedure& proc2,
                                                   std::optional<CapacityConfig> cap,
                                                   int prefer_high_tie_firm) {
    if (proc1.test.grid().kind() != GridKind::Binary)
        throw std::invalid_argument("binary application equilibrium: grid is not binary");
    if (!proc1.test.same_grid(proc2.test))
        throw std::invalid_argument("binary application equilibrium: grids differ");

    const TypeGrid& g = proc1.test.grid();
    BinaryEnv env;
    env.w_lo = g.weight(0);
    env.w_hi = g.weight(1);
    env.a1_lo = acceptance_prob(proc1, 0);
    env.a1_hi = acceptance_prob(proc1, 1);
    env.a2_lo = acceptance_prob(proc2, 0);
    env.a2_hi = acceptance_prob(proc2, 1);
    env.k = cap ? cap->k : std::numeric_limits<double>::infinity();

    // identical acceptance schedules: uniform tie-break
    if (std::abs(env.a1_lo - env.a2_lo) <= kUtilityTol && std::abs(env.a1_hi - env.a2_hi) <= kUtilityTol) {
        const PatternState st = evaluate(env, 0.5, 0.5);
        return CapacitySplit{ApplicationProfile{{0.5, 0.5}}, st.p1, st.p2, true};
    }

    // support patterns: high type first to the preferred firm, mixing last
    const int first = prefer_high_tie_firm == 2 ? 2 : 1;
    const int second = first == 1 ? 2 : 1;
    const int hi_order[3] = {first, second, 0};
    const int lo_order[3] = {first, second, 0};

    for (int hi_firm : hi_order) {
        for (int lo_firm : lo_order) {
            double x_hi = hi_firm == 1 ? 1.0 : 0.0;
            double x_lo = lo_firm == 1 ? 1.0 : 0.0;
            if (hi_firm == 0 && lo_firm == 0) {
                // both mixing requires equal acceptance ratios; split so the
                // rationing odds match them
                const double cross = env.a1_hi * env.a2_lo - env.a2_hi * env.a1_lo;
                if (std::abs(cross) > kUtilityTol) continue;
                if (env.a1_hi <= 0.0 || env.a2_hi <= 0.0) continue;
                const double r = env.a2_hi / env.a1_hi; // required p1/p2
                const double m1_full = env.w_hi * env.a1_hi + env.w_lo * env.a1_lo;
                const double m2_full = env.w_hi * env.a2_hi + env.w_lo * env.a2_lo;
                const double x = m2_full / (r * m1_full + m2_full);
                x_hi = x_lo = x;
            } else if (hi_firm == 0) {
                const auto x = solve_mix(env, true, x_lo);
                if (!x) continue;
                x_hi = *x;
            } else if (lo_firm == 0) {
                const auto x = solve_mix(env, false, x_hi);
                if (!x) continue;
                x_lo = *x;
            }
            const PatternState st = evaluate(env, x_hi, x_lo);
            if (consistent(env, st, hi_firm, lo_firm))
                return CapacitySplit{ApplicationProfile{{st.x_lo, st.x_hi}}, st.p1, st.p2, true};
        }
    }
    throw std::runtime_error("binary application equilibrium: no consistent support pattern");
}

CapacitySplit solve_capacity_split(const SelectionProcedure& proc1, const SelectionProcedure& proc2,
                                   const CapacityConfig& cap, int prefer_high_tie_firm, double tol,
                                   int max_iter) {
    if (proc1.test.grid().kind() == GridKind::Binary)
        return solve_binary_application_equilibrium(proc1, proc2, cap, prefer_high_tie_firm);

    const std::size_t n = proc1.test.size();
    CapacitySplit out;
    out.profile.phi.assign(n, 0.5);
    double p1 = 1.0, p2 = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        ApplicationProfile phi =
            best_response_split(proc1, proc2, MarketMode::Capacity, p1, p2);
        std::vector<double> inv(n);
        for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 - phi.phi[i];
        const double m1 = acceptance_mass(proc1, phi.phi);
        const double m2 = acceptance_mass(proc2, inv);
        const double np1 = rationing(m1, cap.k);
        const double np2 = rationing(m2, cap.k);
        const double err = std::max(std::abs(np1 - p1), std::abs(np2 - p2));
        p1 = 0.5 * (p1 + np1);
        p2 = 0.5 * (p2 + np2);
        out.profile = std::move(phi);
        if (err <= tol) {
            out.p1 = np1;
            out.p2 = np2;
            out.converged = true;
            return out;
        }
    }
    out.p1 = p1;
    out.p2 = p2;
    out.converged = false;
    return out;
}

namespace {

double rationed_payoff(const SelectionProcedure& proc, std::span<const double> phi, double p) {
    return p * firm_payoff(proc, phi, MarketMode::Capacity);
}

} // namespace

CapacityReport verify_capacity_equilibrium(const SelectionProcedure& candidate, const TestSet& set,
                                           const CapacityConfig& cap, const SearchParams& search) {
    set.validate();
    validate(candidate);
    const auto cand_index = set.index_of(candidate.test);
    if (!cand_index) throw std::invalid_argument("verify_capacity_equilibrium: candidate test not in set");
    if (!(cap.k > 0.0)) throw std::invalid_argument("verify_capacity_equilibrium: capacity must be positive");

    CapacityReport report(candidate);
    report.base.alpha_step = 1.0 / static_cast<double>(search.alpha_steps);

    // symmetric play: identical procedures split one half each
    const std::size_t n = candidate.test.size();
    std::vector<double> half(n, 0.5);
    const double sym_mass = acceptance_mass(candidate, half);
    report.p_equilibrium = rationing(sym_mass, cap.k);
    report.base.equilibrium_payoff = rationed_payoff(candidate, half, report.p_equilibrium);

    double acc_total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc_total += candidate.test.grid().weight(i) * candidate.test.pi(i);
    report.severe_capacity = cap.k < 0.5 * acc_total;

    report.difficulty_maximal = true;
    for (const Test& other : set.tests) {
        if (std::equal(candidate.test.pis().begin(), candidate.test.pis().end(), other.pis().begin()))
            continue;
        if (compare_difficulty(other, candidate.test) == Comparison::MoreThan &&
            !comparable_in_both(other, candidate.test))
            report.difficulty_maximal = false;
    }

    report.base.best_gain = 0.0;
    report.base.best_deviation_test = *cand_index;
    report.base.converged = true;

    for (std::size_t ti = 0; ti < set.tests.size(); ++ti) {
        for (int kstep = 0; kstep <= 2 * search.alpha_steps; ++kstep) {
            const double a = static_cast<double>(kstep) / static_cast<double>(search.alpha_steps);
            const SelectionProcedure dev = cutoff_procedure(set.tests[ti], a);
            const CapacitySplit split = solve_capacity_split(dev, candidate, cap, /*prefer=*/2);
            if (!split.converged) report.base.converged = false;
            const double payoff = rationed_payoff(dev, split.profile.phi, split.p1);
            const double gain = payoff - report.base.equilibrium_payoff;
            if (gain > report.base.best_gain) {
                report.base.best_gain = gain;
                report.base.best_deviation = dev;
                report.base.best_deviation_test = ti;
            }
        }
    }

    report.base.is_equilibrium = report.base.best_gain <= search.gain_tol;
    report.base.structural = structural_checks(candidate.test, set);
    return report;
}

} // namespace seleq
