#pragma once

#include "seleq/market.hpp"
#include "seleq/orders.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace seleq {

/// Finite feasible set of tests sharing one grid; family_coords carries the
/// (sigma, d) lattice coordinates when the set was generated from a family.
struct TestSet {
    std::vector<Test> tests;
    std::vector<std::pair<double, double>> family_coords;

    void validate() const;
    std::optional<std::size_t> index_of(const Test& t) const;
};

struct SearchParams {
    int alpha_steps = 101;     // cutoff lattice resolution over [0,2]
    double gain_tol = 1e-9;    // no-deviation certificate tolerance
    bool full_alpha = false;   // also scan the full (alpha_h, alpha_l) square
    int threads = 1;
    double tie_tol = 1e-12;
};

struct StructuralFlags {
    bool in_ti = false;
    bool accuracy_maximal = false;
    bool difficulty_minimal_in_ti = false;
    bool zero_profit_ok = false;
    bool knife_edge_pair = false; // candidate strictly comparable to a set member in both orders
};

struct ZeroProfitResult {
    SelectionProcedure proc;
    bool supportable = true; // false when the high signal carries negative value
};

/// Acceptance rule driving symmetric-play profit to max{0, E[theta]/2}:
/// accept everyone when E[theta] >= 0; otherwise accept after the high
/// signal and mix after the low one at the rate that exactly zeroes profit.
ZeroProfitResult zero_profit_alpha(const Test& test);

/// Certificate of a symmetric-equilibrium check: the best deviation found on
/// the declared lattice and its payoff gain. is_equilibrium is
/// resolution-relative: no deviation on the lattice gains more than
/// gain_tol.
struct DeviationReport {
    explicit DeviationReport(SelectionProcedure cand) : candidate(cand), best_deviation(candidate) {}

    SelectionProcedure candidate;
    double equilibrium_payoff = 0.0;
    SelectionProcedure best_deviation;
    std::size_t best_deviation_test = 0;
    double best_gain = 0.0;
    bool is_equilibrium = false;
    StructuralFlags structural;
    double alpha_step = 0.0; // lattice spacing actually used
    bool converged = true;   // capacity mode: continuation fixed points converged
};

/// Enumerates deviations (test, cutoff rule) against a symmetric candidate,
/// re-solving the candidates' application split for each, and reports the
/// maximal gain. The null deviation is always included, so best_gain >= 0.
/// Deviation cutoffs include the lattice over [0,2] plus, when the grid
/// brackets zero, the rule matched to the candidate's acceptance at the
/// pivot type.
DeviationReport verify_symmetric(const SelectionProcedure& candidate, const TestSet& set,
                                 const SearchParams& search = {});

struct CutoffScan {
    explicit CutoffScan(SelectionProcedure p) : proc(std::move(p)) {}

    double gain = 0.0;
    SelectionProcedure proc;
};

/// Best cutoff-rule deviation onto dev_test against a symmetric candidate.
CutoffScan best_cutoff_deviation(const SelectionProcedure& candidate, const Test& dev_test,
                                 const SearchParams& search = {});

struct CandidateResult {
    bool found = false;       // false when no test is minimally informative
    std::size_t index = 0;
    std::optional<SelectionProcedure> proc;
};

/// Constructs the equilibrium candidate: among minimally informative tests,
/// the difficulty-minimal one, ties broken by accuracy-maximality and then
/// by lowest index. Binary grids use the equivalent likelihood-ratio form:
/// smallest low-signal ratio, then largest high-signal ratio.
CandidateResult candidate_equilibrium(const TestSet& set);

StructuralFlags structural_checks(const Test& test, const TestSet& set);

} // namespace seleq
