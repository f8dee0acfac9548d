#include "rmatch/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace rmatch {

namespace {

std::string edge_name(int u, int v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(%d,%d)", u, v);
    return buf;
}

}  // namespace

FailureGraph build_graph(int vertex_count, std::vector<EdgeSpec> edges) {
    if (vertex_count < 0) throw VertexRangeError("vertex_count must be nonnegative");
    for (auto& e : edges) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u == e.v)
            throw SelfLoopError("self-loop at edge " + edge_name(e.u, e.v));
        if (e.u < 0 || e.v >= vertex_count)
            throw VertexRangeError("vertex out of range at edge " + edge_name(e.u, e.v));
        if (!(e.fail_prob >= 0.0 && e.fail_prob <= 1.0))
            throw ProbabilityRangeError("failure probability outside [0,1] at edge " +
                                        edge_name(e.u, e.v));
        if (!(e.weight >= 0.0))
            throw WeightRangeError("negative weight at edge " + edge_name(e.u, e.v));
    }
    std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
            throw DuplicateEdgeError("duplicate edge " + edge_name(edges[i].u, edges[i].v));

    FailureGraph g;
    g.vertex_count_ = vertex_count;
    g.edges_.reserve(edges.size());
    for (const auto& e : edges)
        g.edges_.push_back({e.u, e.v, e.fail_prob, e.weight});
    g.incident_.assign(vertex_count, EdgeSet(g.edges_.size()));
    for (std::size_t i = 0; i < g.edges_.size(); ++i) {
        g.incident_[g.edges_[i].u].set(i);
        g.incident_[g.edges_[i].v].set(i);
    }
    return g;
}

bool is_matching(const FailureGraph& g, const EdgeSet& edges) {
    auto idx = edges.indices();
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j) {
            const auto& a = g.edge(idx[i]);
            const auto& b = g.edge(idx[j]);
            if (a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v) return false;
        }
    return true;
}

std::vector<std::vector<int>> connected_components(const FailureGraph& g,
                                                   const EdgeSet& active) {
    const int n = g.vertex_count();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    // union-find with path halving
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    active.for_each([&](std::size_t e) {
        int ru = find(g.edge(e).u);
        int rv = find(g.edge(e).v);
        if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
    });
    std::vector<std::vector<int>> by_root(n);
    for (int v = 0; v < n; ++v) by_root[find(v)].push_back(v);
    std::vector<std::vector<int>> out;
    for (int r = 0; r < n; ++r)
        if (!by_root[r].empty()) out.push_back(std::move(by_root[r]));
    return out;  // roots are component minima, so this order is by smallest vertex
}

EdgeSet residual_after_pattern(const FailureGraph& g, const EdgeSet& active,
                               const EdgeSet& succeeded, const EdgeSet& failed) {
    if (!succeeded.is_subset_of(active) || !failed.is_subset_of(active))
        throw std::invalid_argument(
            "residual_after_pattern: pattern edges must be subsets of the active set");
    if (succeeded.intersects(failed))
        throw std::invalid_argument(
            "residual_after_pattern: an edge cannot both succeed and fail");
    return detail::residual_unchecked(g, active, succeeded, failed);
}

}  // namespace rmatch
