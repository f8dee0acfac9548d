#ifndef RMATCH_MATCHINGS_HPP
#define RMATCH_MATCHINGS_HPP

#include <cstdint>
#include <utility>

#include "rmatch/graph.hpp"

namespace rmatch {

namespace detail {

// Branches on the lowest-index remaining edge: first the branch that adds it
// (visited as soon as it is added), then the branch that leaves it out.  The
// empty matching is never visited.  Visitor returns false to stop early.
template <typename Visitor>
bool matchings_rec(const FailureGraph& g, EdgeSet remaining, Matching& current,
                   Visitor& visit) {
    for (std::size_t e = remaining.lowest(); e != remaining.bit_count();
         e = remaining.lowest()) {
        current.edges().set(e);
        if (!visit(std::as_const(current))) return false;
        EdgeSet next = remaining;
        next.and_not(g.incident(g.edge(e).u));
        next.and_not(g.incident(g.edge(e).v));
        if (!matchings_rec(g, std::move(next), current, visit)) return false;
        current.edges().reset(e);
        remaining.reset(e);
    }
    return true;
}

}  // namespace detail

/// Streams every non-empty matching of the subgraph spanned by `active`
/// exactly once, in a fixed depth-first order.  The visitor gets a reference
/// to enumeration-internal state: copy the matching if you keep it.  Returns
/// false iff the visitor stopped the stream.
template <typename Visitor>
bool for_each_matching(const FailureGraph& g, const EdgeSet& active, Visitor&& visit) {
    Matching current(g.empty_set());
    return detail::matchings_rec(g, active, current, visit);
}

/// Number of matchings in the stream, without materializing them.
std::uint64_t count_matchings(const FailureGraph& g, const EdgeSet& active);

/// Matching maximizing the one-shot expectation sum of weight*(1-fail_prob),
/// found by enumeration; ties go to the earliest matching in stream order.
/// An empty active set yields (empty matching, 0).
std::pair<Matching, double> best_static_matching(const FailureGraph& g,
                                                 const EdgeSet& active);

}  // namespace rmatch

#endif  // RMATCH_MATCHINGS_HPP
