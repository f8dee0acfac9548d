#ifndef RMATCH_ORACLE_HPP
#define RMATCH_ORACLE_HPP

#include <cstdint>

#include "rmatch/graph.hpp"
#include "rmatch/solver.hpp"

namespace rmatch {

/// Reference implementations used to cross-check the solver.  They share no
/// logic with the solver module: set algebra is done on plain 64-bit masks,
/// matchings are found by filtering raw edge subsets, components by an
/// inline scan.  Limited to graphs with at most 64 edges, which is far past
/// the sizes they are usable on anyway.

/// Unlimited-recourse value by single-edge sequential decisions:
///   V(empty) = 0
///   V(S) = max over e in S of  p_e * V(S - e)
///                            + (1-p_e) * (w_e + V(S minus e and its neighbors))
/// Memoized on the edge set, independently of the solver's tables.
double brute_force_unlimited(const FailureGraph& g, const EdgeSet& active);

/// Budgeted value by literal recursion over all matchings and all failure
/// patterns, no memoization.  `rounds` counts observations allowed beyond
/// the first.  Exponentially slow; intended for graphs of ~6 edges.
double brute_force_budgeted(const FailureGraph& g, const EdgeSet& active, int rounds);

struct SimulationResult {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t trials = 0;
};

/// Monte-Carlo estimate of the served weight achieved by the optimal policy:
/// each trial pre-samples every edge's failure once (an edge is observed at
/// most once), then repeatedly solves the residual, proposes the returned
/// matchings and applies the observed outcomes until the budget or the graph
/// runs out.  Trial t draws from the (seed, t) substream, so results do not
/// depend on execution order.
SimulationResult simulate_policy(const FailureGraph& g, RecourseBudget budget,
                                 std::uint64_t trials, std::uint64_t seed);

}  // namespace rmatch

#endif  // RMATCH_ORACLE_HPP
