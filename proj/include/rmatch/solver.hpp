#ifndef RMATCH_SOLVER_HPP
#define RMATCH_SOLVER_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rmatch/graph.hpp"
#include "rmatch/matchings.hpp"

namespace rmatch {

/// Remaining number of observation rounds beyond the first one.  finite(0)
/// means a single matching is proposed and observed with no recourse
/// afterward; unlimited() repeats until the residual edge set is empty.
class RecourseBudget {
public:
    static RecourseBudget unlimited() { return RecourseBudget(std::nullopt); }
    static RecourseBudget finite(int rounds) {
        if (rounds < 0) throw std::invalid_argument("RecourseBudget: rounds must be >= 0");
        return RecourseBudget(rounds);
    }

    bool is_unlimited() const { return !rounds_.has_value(); }
    int rounds() const { return rounds_.value(); }

    friend bool operator==(const RecourseBudget& a, const RecourseBudget& b) {
        return a.rounds_ == b.rounds_;
    }

private:
    explicit RecourseBudget(std::optional<int> rounds) : rounds_(rounds) {}
    std::optional<int> rounds_;
};

/// One success/failure assignment to the edges of a proposed matching.
struct FailurePattern {
    EdgeSet succeeded;
    EdgeSet failed;
    double probability = 0.0;  // product of per-edge Bernoulli terms
};

/// Cache of residual-subproblem values keyed on (edge set, remaining
/// rounds).  Budgets are normalized before keying: an unlimited budget, or
/// any finite budget of at least the set's edge count, is stored as the edge
/// count itself, which is enough rounds to exhaust the set.  Entries are
/// immutable; storing a conflicting value for an existing key throws.
class MemoTable {
public:
    std::optional<double> lookup(const EdgeSet& set, int rounds) const {
        auto it = map_.find(Key{set, rounds});
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void store(const EdgeSet& set, int rounds, double value) {
        auto [it, inserted] = map_.try_emplace(Key{set, rounds}, value);
        if (!inserted && it->second != value)
            throw std::logic_error("MemoTable: conflicting value for existing key");
    }

    std::size_t size() const { return map_.size(); }
    void clear() { map_.clear(); }

private:
    struct Key {
        EdgeSet set;
        int rounds;
        bool operator==(const Key& o) const { return rounds == o.rounds && set == o.set; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return k.set.hash() ^ (static_cast<std::size_t>(k.rounds) * 0x9e3779b97f4a7c15ULL);
        }
    };
    std::unordered_map<Key, double, KeyHash> map_;
};

struct SolveStats {
    std::uint64_t evaluate_calls = 0;
    std::uint64_t memo_hits = 0;
    double elapsed_seconds = 0.0;
};

struct ComponentChoice {
    std::vector<int> vertices;
    Matching first_matching;
    double value = 0.0;
};

/// Optimal expectation plus one optimal first-round matching per connected
/// component (single-vertex components are skipped).
struct SolveResult {
    double value = 0.0;
    std::vector<ComponentChoice> components;
    SolveStats stats;
};

struct SolveOptions {
    bool use_memo = true;
    /// Skip failure patterns with probability exactly zero.  Off by default;
    /// never changes the computed value.
    bool prune_zero_probability = false;
    /// Solve connected components independently.  Disabling this evaluates
    /// matchings over the whole active set; values are identical.
    bool decompose_components = true;
    /// Cooperative deadline, checked every few thousand evaluations.
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SolveDeadlineExceeded : std::runtime_error {
    SolveDeadlineExceeded() : std::runtime_error("solve: deadline exceeded") {}
};

/// Maximum-expectation value of the subgraph spanned by `active` under the
/// given budget, with one optimal first matching per component.  Among
/// matchings of equal value the earliest in enumeration order is reported.
SolveResult solve(const FailureGraph& g, const EdgeSet& active, RecourseBudget budget,
                  MemoTable& memo, const SolveOptions& opts = {});

/// Convenience: solve the whole graph with a private memo table.
SolveResult solve(const FailureGraph& g, RecourseBudget budget,
                  const SolveOptions& opts = {});

/// Expectation of proposing matching `m` on residual set `residual`: sums
/// probability * (served weight + recourse value of what remains) over all
/// 2^|m| failure patterns.  `m` must be a non-empty matching within
/// `residual`.
double evaluate_matching(const FailureGraph& g, const Matching& m, const EdgeSet& residual,
                         RecourseBudget budget, MemoTable& memo,
                         const SolveOptions& opts = {});

/// evaluate_matching with the full edge set as residual and a private memo.
double value_forcing_first(const FailureGraph& g, const Matching& m, RecourseBudget budget,
                           const SolveOptions& opts = {});

namespace detail {
template <typename Visitor>
void emit_patterns(const FailureGraph& g, const std::vector<std::size_t>& edges,
                       Visitor& visit) {
    const std::size_t k = edges.size();
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << k); ++pat) {
        FailurePattern fp{g.empty_set(), g.empty_set(), 1.0};
        for (std::size_t i = 0; i < k; ++i) {
            const auto& e = g.edge(edges[i]);
            if ((pat >> i) & 1) {
                fp.probability *= 1.0 - e.fail_prob;
                fp.succeeded.set(edges[i]);
            } else {
                fp.probability *= e.fail_prob;
                fp.failed.set(edges[i]);
            }
        }
        visit(std::as_const(fp));
    }
}
}  // namespace detail

/// Streams the 2^|m| failure patterns of a non-empty matching in binary
/// counting order: bit k of the counter is the k-th member edge in canonical
/// order, bit value 1 meaning success.  Pattern 0 is all-failed.
template <typename Visitor>
void for_each_failure_pattern(const FailureGraph& g, const Matching& m, Visitor&& visit) {
    if (m.empty())
        throw std::invalid_argument("for_each_failure_pattern: matching is empty");
    auto edges = m.edges().indices();
    if (edges.size() >= 63)
        throw std::invalid_argument("for_each_failure_pattern: matching too large");
    detail::emit_patterns(g, edges, visit);
}

std::vector<FailurePattern> enumerate_patterns(const FailureGraph& g, const Matching& m);

}  // namespace rmatch

#endif  // RMATCH_SOLVER_HPP
