#include "rmatch/oracle.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rmatch/rng.hpp"

namespace rmatch {

namespace {

// Plain-mask copy of the graph for the reference recursions.  Endpoints are
// remapped to compact ids (< 2*edges) so a 128-bit mask can mark them.
struct MaskGraph {
    int edge_count = 0;
    std::vector<double> fail_prob;
    std::vector<double> weight;
    std::vector<int> cu, cv;                  // compact endpoint ids
    std::vector<std::uint64_t> conflict;      // edges sharing an endpoint, incl. self

    explicit MaskGraph(const FailureGraph& g) {
        if (g.edge_count() > 64)
            throw std::invalid_argument("oracle: limited to graphs with at most 64 edges");
        edge_count = static_cast<int>(g.edge_count());
        std::unordered_map<int, int> compact;
        auto id = [&](int v) {
            auto [it, _] = compact.try_emplace(v, static_cast<int>(compact.size()));
            return it->second;
        };
        for (int e = 0; e < edge_count; ++e) {
            fail_prob.push_back(g.edge(e).fail_prob);
            weight.push_back(g.edge(e).weight);
            cu.push_back(id(g.edge(e).u));
            cv.push_back(id(g.edge(e).v));
        }
        conflict.assign(edge_count, 0);
        for (int a = 0; a < edge_count; ++a)
            for (int b = 0; b < edge_count; ++b)
                if (cu[a] == cu[b] || cu[a] == cv[b] || cv[a] == cu[b] || cv[a] == cv[b])
                    conflict[a] |= std::uint64_t{1} << b;
    }

    bool is_matching(std::uint64_t sub) const {
        unsigned __int128 seen = 0;
        for (std::uint64_t rest = sub; rest != 0; rest &= rest - 1) {
            int e = std::countr_zero(rest);
            unsigned __int128 ends = (static_cast<unsigned __int128>(1) << cu[e]) |
                                     (static_cast<unsigned __int128>(1) << cv[e]);
            if (seen & ends) return false;
            seen |= ends;
        }
        return true;
    }

    // Edge masks of connected components, by repeated edge-adjacency closure.
    std::vector<std::uint64_t> components(std::uint64_t set) const {
        std::vector<std::uint64_t> out;
        while (set != 0) {
            std::uint64_t comp = set & (~set + 1);  // lowest edge
            bool grew = true;
            while (grew) {
                grew = false;
                for (std::uint64_t rest = set & ~comp; rest != 0; rest &= rest - 1) {
                    int e = std::countr_zero(rest);
                    if (conflict[e] & comp) {
                        comp |= std::uint64_t{1} << e;
                        grew = true;
                    }
                }
            }
            out.push_back(comp);
            set &= ~comp;
        }
        return out;
    }
};

std::uint64_t to_mask(const EdgeSet& set) {
    std::uint64_t mask = 0;
    set.for_each([&](std::size_t e) { mask |= std::uint64_t{1} << e; });
    return mask;
}

double unlimited_rec(const MaskGraph& mg, std::uint64_t set,
                     std::unordered_map<std::uint64_t, double>& memo) {
    if (set == 0) return 0.0;
    if (auto it = memo.find(set); it != memo.end()) return it->second;
    double best = 0.0;
    for (std::uint64_t rest = set; rest != 0; rest &= rest - 1) {
        int e = std::countr_zero(rest);
        double on_fail = unlimited_rec(mg, set & ~(std::uint64_t{1} << e), memo);
        double on_success = mg.weight[e] + unlimited_rec(mg, set & ~mg.conflict[e], memo);
        double value = mg.fail_prob[e] * on_fail + (1.0 - mg.fail_prob[e]) * on_success;
        if (value > best) best = value;
    }
    memo.emplace(set, best);
    return best;
}

double budgeted_solve_rec(const MaskGraph& mg, std::uint64_t set, int rounds);

double budgeted_eval_rec(const MaskGraph& mg, std::uint64_t m, std::uint64_t residual,
                         int rounds) {
    std::vector<int> edges;
    for (std::uint64_t rest = m; rest != 0; rest &= rest - 1)
        edges.push_back(std::countr_zero(rest));
    double z = 0.0;
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << edges.size()); ++pat) {
        double q = 1.0;
        double served = 0.0;
        std::uint64_t rest_set = residual;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            int e = edges[i];
            if ((pat >> i) & 1) {
                q *= 1.0 - mg.fail_prob[e];
                served += mg.weight[e];
                rest_set &= ~mg.conflict[e];
            } else {
                q *= mg.fail_prob[e];
                rest_set &= ~(std::uint64_t{1} << e);
            }
        }
        double continuation = 0.0;
        if (rounds >= 1 && rest_set != 0)
            continuation = budgeted_solve_rec(mg, rest_set, rounds - 1);
        z += q * (served + continuation);
    }
    return z;
}

double budgeted_solve_rec(const MaskGraph& mg, std::uint64_t set, int rounds) {
    double total = 0.0;
    for (std::uint64_t comp : mg.components(set)) {
        double best = 0.0;
        // all non-empty matchings of the component, by subset filtering
        for (std::uint64_t sub = comp;; sub = (sub - 1) & comp) {
            if (sub != 0 && mg.is_matching(sub)) {
                double value = budgeted_eval_rec(mg, sub, comp, rounds);
                if (value > best) best = value;
            }
            if (sub == 0) break;
        }
        total += best;
    }
    return total;
}

}  // namespace

double brute_force_unlimited(const FailureGraph& g, const EdgeSet& active) {
    MaskGraph mg(g);
    std::unordered_map<std::uint64_t, double> memo;
    return unlimited_rec(mg, to_mask(active), memo);
}

double brute_force_budgeted(const FailureGraph& g, const EdgeSet& active, int rounds) {
    if (rounds < 0) throw std::invalid_argument("brute_force_budgeted: rounds must be >= 0");
    MaskGraph mg(g);
    return budgeted_solve_rec(mg, to_mask(active), rounds);
}

SimulationResult simulate_policy(const FailureGraph& g, RecourseBudget budget,
                                 std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate_policy: trials must be >= 1");

    MemoTable memo;
    // The optimal proposal for a (residual, remaining-rounds) state never
    // changes, so decisions are cached across trials.
    struct StateHash {
        std::size_t operator()(const std::pair<EdgeSet, int>& k) const {
            return k.first.hash() ^ (static_cast<std::size_t>(k.second) * 0x9e3779b97f4a7c15ULL);
        }
    };
    std::unordered_map<std::pair<EdgeSet, int>, EdgeSet, StateHash> policy;

    auto propose = [&](const EdgeSet& residual, RecourseBudget remaining) -> const EdgeSet& {
        int rounds = remaining.is_unlimited()
                         ? static_cast<int>(residual.count())
                         : std::min<int>(remaining.rounds(),
                                         static_cast<int>(residual.count()));
        auto key = std::make_pair(residual, rounds);
        auto it = policy.find(key);
        if (it == policy.end()) {
            SolveResult r = solve(g, residual, remaining, memo);
            EdgeSet proposal = g.empty_set();
            for (const auto& c : r.components) proposal |= c.first_matching.edges();
            it = policy.emplace(std::move(key), std::move(proposal)).first;
        }
        return it->second;
    };

    const std::size_t m = g.edge_count();
    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<bool> fails(m);
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::split(seed, t);
        for (std::size_t e = 0; e < m; ++e)
            fails[e] = rng.next_bernoulli(g.edge(e).fail_prob);

        double served = 0.0;
        EdgeSet residual = g.all_edges();
        RecourseBudget remaining = budget;
        while (!residual.empty()) {
            const EdgeSet& proposal = propose(residual, remaining);
            EdgeSet succeeded(m), failed(m);
            proposal.for_each([&](std::size_t e) {
                if (fails[e]) {
                    failed.set(e);
                } else {
                    succeeded.set(e);
                    served += g.edge(e).weight;
                }
            });
            residual = residual_after_pattern(g, residual, succeeded, failed);
            if (!remaining.is_unlimited()) {
                if (remaining.rounds() == 0) break;
                remaining = RecourseBudget::finite(remaining.rounds() - 1);
            }
        }
        sum += served;
        sum_sq += served * served;
    }

    SimulationResult out;
    out.trials = trials;
    out.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        double var = (sum_sq - static_cast<double>(trials) * out.mean * out.mean) /
                     static_cast<double>(trials - 1);
        out.standard_error = std::sqrt(std::max(0.0, var) / static_cast<double>(trials));
    }
    return out;
}

}  // namespace rmatch
