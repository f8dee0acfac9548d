#ifndef RMATCH_GRAPH_HPP
#define RMATCH_GRAPH_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmatch/edge_set.hpp"

namespace rmatch {

struct GraphError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SelfLoopError : GraphError {
    using GraphError::GraphError;
};
struct DuplicateEdgeError : GraphError {
    using GraphError::GraphError;
};
struct VertexRangeError : GraphError {
    using GraphError::GraphError;
};
struct ProbabilityRangeError : GraphError {
    using GraphError::GraphError;
};
struct WeightRangeError : GraphError {
    using GraphError::GraphError;
};

/// One edge as supplied to build_graph.  Weight defaults to two served
/// vertices, so expectations count matched vertices unless told otherwise.
struct EdgeSpec {
    int u = 0;
    int v = 0;
    double fail_prob = 0.0;
    double weight = 2.0;
};

/// Undirected graph with a failure probability and a served weight per edge.
///
/// Edges are stored sorted by (min(u,v), max(u,v)); the index in that order
/// is the edge's identity everywhere else in the system, and every EdgeSet
/// is a mask over those indices.  Instances are immutable once built and
/// safe to share across threads.
class FailureGraph {
public:
    struct Edge {
        int u;  // u < v after canonicalization
        int v;
        double fail_prob;
        double weight;
    };

    int vertex_count() const { return vertex_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    const Edge& edge(std::size_t i) const { return edges_[i]; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Mask of all edges incident to vertex v.
    const EdgeSet& incident(int v) const { return incident_[v]; }

    EdgeSet empty_set() const { return EdgeSet(edges_.size()); }
    EdgeSet all_edges() const { return EdgeSet::all(edges_.size()); }

    friend FailureGraph build_graph(int vertex_count, std::vector<EdgeSpec> edges);

private:
    int vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<EdgeSet> incident_;
};

/// Validates and canonicalizes a raw edge list.  Rejects self-loops,
/// duplicate unordered pairs, probabilities outside [0,1] and negative
/// weights, naming the offending edge in each case.
FailureGraph build_graph(int vertex_count, std::vector<EdgeSpec> edges);

/// A set of pairwise vertex-disjoint edges.  Wraps the member mask; validity
/// is checked where matchings enter the system, not on every access.
class Matching {
public:
    Matching() = default;
    explicit Matching(EdgeSet edges) : edges_(std::move(edges)) {}

    const EdgeSet& edges() const { return edges_; }
    EdgeSet& edges() { return edges_; }
    std::size_t size() const { return edges_.count(); }
    bool empty() const { return edges_.empty(); }

    friend bool operator==(const Matching& a, const Matching& b) {
        return a.edges_ == b.edges_;
    }

private:
    EdgeSet edges_;
};

/// Pairwise endpoint check over the member edges.
bool is_matching(const FailureGraph& g, const EdgeSet& edges);

/// Components of the subgraph spanned by `active`, as vertex lists.  Covers
/// every vertex: isolated ones appear as singletons.  Components are ordered
/// by smallest member vertex, members ascending.
std::vector<std::vector<int>> connected_components(const FailureGraph& g,
                                                   const EdgeSet& active);

/// Residual edge set after observing one failure pattern: drops failed
/// edges, succeeded edges, and every edge touching an endpoint of a
/// succeeded edge.  `succeeded` and `failed` must be disjoint subsets of
/// `active`.
EdgeSet residual_after_pattern(const FailureGraph& g, const EdgeSet& active,
                               const EdgeSet& succeeded, const EdgeSet& failed);

namespace detail {
/// residual_after_pattern without precondition checks, for solver loops.
inline EdgeSet residual_unchecked(const FailureGraph& g, const EdgeSet& active,
                                  const EdgeSet& succeeded, const EdgeSet& failed) {
    EdgeSet r = active;
    r.and_not(failed);
    r.and_not(succeeded);
    succeeded.for_each([&](std::size_t e) {
        r.and_not(g.incident(g.edge(e).u));
        r.and_not(g.incident(g.edge(e).v));
    });
    return r;
}
}  // namespace detail

}  // namespace rmatch

#endif  // RMATCH_GRAPH_HPP
