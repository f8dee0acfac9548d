#include "rmatch/solver.hpp"

#include <algorithm>
#include <numeric>

namespace rmatch {

namespace {

// Edge masks of the connected components spanned by `set`, ordered by
// lowest member edge.
std::vector<EdgeSet> component_edge_masks(const FailureGraph& g, const EdgeSet& set) {
    std::vector<int> parent(g.vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    set.for_each([&](std::size_t e) {
        int ru = find(g.edge(e).u);
        int rv = find(g.edge(e).v);
        if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
    });
    std::vector<EdgeSet> masks;
    std::vector<int> mask_of_root(g.vertex_count(), -1);
    set.for_each([&](std::size_t e) {
        int r = find(g.edge(e).u);
        if (mask_of_root[r] < 0) {
            mask_of_root[r] = static_cast<int>(masks.size());
            masks.emplace_back(g.edge_count());
        }
        masks[mask_of_root[r]].set(e);
    });
    return masks;
}

class SolverContext {
public:
    SolverContext(const FailureGraph& g, MemoTable* memo, const SolveOptions& opts)
        : g_(g), memo_(opts.use_memo ? memo : nullptr), opts_(opts) {}

    SolveStats stats;

    // Budget normalization shared by every entry point: `rounds` of recourse
    // beyond the observation at hand, with unlimited and any excess mapped to
    // the edge count of the set being solved.
    int normalize(RecourseBudget budget, const EdgeSet& set) const {
        int cap = static_cast<int>(set.count());
        if (budget.is_unlimited()) return cap;
        return std::min(budget.rounds(), cap);
    }

    double solve_set(const EdgeSet& set, int rounds) {
        if (set.empty()) return 0.0;
        rounds = std::min<int>(rounds, static_cast<int>(set.count()));
        if (memo_) {
            if (auto v = memo_->lookup(set, rounds)) {
                ++stats.memo_hits;
                return *v;
            }
        }
        double total = 0.0;
        bool split = false;
        if (opts_.decompose_components) {
            auto masks = component_edge_masks(g_, set);
            if (masks.size() > 1) {
                split = true;
                for (const auto& mask : masks) total += solve_set(mask, rounds);
            }
        }
        if (!split) total = best_over_matchings(set, rounds).second;
        if (memo_) memo_->store(set, rounds, total);
        return total;
    }

    // Max of evaluate over the matching stream; strict comparison keeps the
    // earliest optimum.
    std::pair<Matching, double> best_over_matchings(const EdgeSet& set, int rounds) {
        Matching best_m;
        double best = -1.0;
        for_each_matching(g_, set, [&](const Matching& m) {
            double v = evaluate(m.edges().indices(), set, rounds);
            if (v > best) {
                best = v;
                best_m = m;
            }
            return true;
        });
        return {std::move(best_m), std::max(best, 0.0)};
    }

    double evaluate(const std::vector<std::size_t>& medges, const EdgeSet& residual,
                    int rounds) {
        ++stats.evaluate_calls;
        if (opts_.deadline && (stats.evaluate_calls & 0xfff) == 0 &&
            std::chrono::steady_clock::now() > *opts_.deadline)
            throw SolveDeadlineExceeded();

        const std::size_t k = medges.size();
        if (k >= 63)
            throw std::invalid_argument("evaluate: matching too large for exact evaluation");
        double z = 0.0;
        for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << k); ++pat) {
            if (opts_.deadline && (pat & 0xffff) == 0xffff &&
                std::chrono::steady_clock::now() > *opts_.deadline)
                throw SolveDeadlineExceeded();
            double q = 1.0;
            double served = 0.0;
            EdgeSet succeeded(g_.edge_count());
            EdgeSet failed(g_.edge_count());
            for (std::size_t i = 0; i < k; ++i) {
                const auto& e = g_.edge(medges[i]);
                if ((pat >> i) & 1) {
                    q *= 1.0 - e.fail_prob;
                    served += e.weight;
                    succeeded.set(medges[i]);
                } else {
                    q *= e.fail_prob;
                    failed.set(medges[i]);
                }
            }
            if (opts_.prune_zero_probability && q == 0.0) continue;
            EdgeSet rest = detail::residual_unchecked(g_, residual, succeeded, failed);
            double continuation = 0.0;
            if (rounds >= 1 && !rest.empty()) continuation = solve_set(rest, rounds - 1);
            z += q * (served + continuation);
        }
        return z;
    }

private:
    const FailureGraph& g_;
    MemoTable* memo_;
    const SolveOptions& opts_;
};

std::vector<int> all_vertices(const FailureGraph& g) {
    std::vector<int> v(g.vertex_count());
    std::iota(v.begin(), v.end(), 0);
    return v;
}

}  // namespace

SolveResult solve(const FailureGraph& g, const EdgeSet& active, RecourseBudget budget,
                  MemoTable& memo, const SolveOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    SolverContext ctx(g, &memo, opts);
    SolveResult result;
    const int rounds = ctx.normalize(budget, active);

    if (opts.decompose_components) {
        for (auto& comp : connected_components(g, active)) {
            if (comp.size() == 1) continue;
            EdgeSet mask(g.edge_count());
            for (int v : comp) mask |= g.incident(v);
            mask &= active;
            const int comp_rounds = std::min<int>(rounds, static_cast<int>(mask.count()));
            auto [m, value] = ctx.best_over_matchings(mask, comp_rounds);
            if (opts.use_memo) memo.store(mask, comp_rounds, value);
            result.value += value;
            result.components.push_back({std::move(comp), std::move(m), value});
        }
        if (opts.use_memo && !active.empty()) memo.store(active, rounds, result.value);
    } else if (!active.empty()) {
        auto [m, value] = ctx.best_over_matchings(active, rounds);
        if (opts.use_memo) memo.store(active, rounds, value);
        result.value = value;
        result.components.push_back({all_vertices(g), std::move(m), value});
    }

    result.stats = ctx.stats;
    result.stats.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

SolveResult solve(const FailureGraph& g, RecourseBudget budget, const SolveOptions& opts) {
    MemoTable memo;
    return solve(g, g.all_edges(), budget, memo, opts);
}

double evaluate_matching(const FailureGraph& g, const Matching& m, const EdgeSet& residual,
                         RecourseBudget budget, MemoTable& memo, const SolveOptions& opts) {
    if (m.empty()) throw std::invalid_argument("evaluate_matching: matching is empty");
    if (!m.edges().is_subset_of(residual))
        throw std::invalid_argument("evaluate_matching: matching not within residual set");
    if (!is_matching(g, m.edges()))
        throw std::invalid_argument("evaluate_matching: edges share an endpoint");
    SolverContext ctx(g, &memo, opts);
    return ctx.evaluate(m.edges().indices(), residual, ctx.normalize(budget, residual));
}

double value_forcing_first(const FailureGraph& g, const Matching& m, RecourseBudget budget,
                           const SolveOptions& opts) {
    MemoTable memo;
    return evaluate_matching(g, m, g.all_edges(), budget, memo, opts);
}

std::vector<FailurePattern> enumerate_patterns(const FailureGraph& g, const Matching& m) {
    std::vector<FailurePattern> out;
    for_each_failure_pattern(g, m, [&](const FailurePattern& p) { out.push_back(p); });
    return out;
}

}  // namespace rmatch
