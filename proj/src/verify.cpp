#include "rmatch/verify.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "rmatch/matchings.hpp"
#include "rmatch/oracle.hpp"
#include "rmatch/rng.hpp"

namespace rmatch::verify {

namespace {

constexpr int kVerts = 6;
constexpr int kPairs = 15;

// Vertex pairs of K6 in canonical (min,max) order; index = edge identity.
const std::array<std::pair<int, int>, kPairs>& pair_list() {
    static const auto pairs = [] {
        std::array<std::pair<int, int>, kPairs> out{};
        int k = 0;
        for (int i = 0; i < kVerts; ++i)
            for (int j = i + 1; j < kVerts; ++j) out[k++] = {i, j};
        return out;
    }();
    return pairs;
}

// pair-index remap table for all 720 vertex permutations
const std::vector<std::array<std::uint8_t, kPairs>>& perm_tables() {
    static const auto tables = [] {
        std::array<std::array<int, kVerts>, kVerts> pair_index{};
        for (int k = 0; k < kPairs; ++k) {
            auto [i, j] = pair_list()[k];
            pair_index[i][j] = pair_index[j][i] = k;
        }
        std::vector<std::array<std::uint8_t, kPairs>> out;
        std::array<int, kVerts> perm{0, 1, 2, 3, 4, 5};
        do {
            std::array<std::uint8_t, kPairs> map{};
            for (int k = 0; k < kPairs; ++k) {
                auto [i, j] = pair_list()[k];
                map[k] = static_cast<std::uint8_t>(pair_index[perm[i]][perm[j]]);
            }
            out.push_back(map);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }();
    return tables;
}

std::uint32_t canonical_mask(std::uint32_t mask) {
    std::uint32_t best = ~std::uint32_t{0};
    for (const auto& map : perm_tables()) {
        std::uint32_t remapped = 0;
        for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1)
            remapped |= std::uint32_t{1} << map[std::countr_zero(rest)];
        best = std::min(best, remapped);
    }
    return best;
}

FailureGraph graph_from_mask(std::uint32_t mask, const std::vector<double>& probs) {
    std::vector<EdgeSpec> edges;
    int k = 0;
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
        int bit = std::countr_zero(rest);
        edges.push_back({pair_list()[bit].first, pair_list()[bit].second, probs[k++], 2.0});
    }
    return build_graph(kVerts, std::move(edges));
}

std::string describe(double expected, double got) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "expected %.17g, got %.17g", expected, got);
    return buf;
}

InstanceFile counterexample_file(const FailureGraph& g, const std::string& check) {
    InstanceFile f;
    f.payload = g;
    f.provenance = {{"source", "verify-counterexample"}, {"check", check}};
    return f;
}

struct SweepContext {
    const OracleSweepConfig& cfg;
    Report& report;

    bool check_close(const std::string& name, const FailureGraph& g, double expected,
                     double got, double tol) {
        ++report.checks[name];
        if (std::abs(expected - got) <= tol) return true;
        report.failure = CheckFailure{name, describe(expected, got), counterexample_file(g, name)};
        return false;
    }

    bool check_that(const std::string& name, const FailureGraph& g, bool ok,
                    const std::string& detail) {
        ++report.checks[name];
        if (ok) return true;
        report.failure = CheckFailure{name, detail, counterexample_file(g, name)};
        return false;
    }
};

// Every check on one probability-assigned instance; returns false on the
// first failure.
bool run_instance_checks(SweepContext& ctx, const FailureGraph& g, std::uint32_t mask,
                         std::uint64_t instance_index, SplitMix64& rng) {
    const auto& cfg = ctx.cfg;
    ++ctx.report.instances;
    const double perturb = cfg.test_value_perturbation;

    MemoTable memo;
    const EdgeSet active = g.all_edges();

    double v_unlimited =
        solve(g, active, RecourseBudget::unlimited(), memo).value + perturb;
    std::vector<double> v_budget;
    for (int n : cfg.budgets)
        v_budget.push_back(solve(g, active, RecourseBudget::finite(n), memo).value + perturb);

    // solver vs oracles
    if (!ctx.check_close("oracle-unlimited", g, brute_force_unlimited(g, active),
                         v_unlimited, cfg.tolerance))
        return false;
    for (std::size_t i = 0; i < cfg.budgets.size(); ++i) {
        if (!ctx.check_close("oracle-budgeted-" + std::to_string(cfg.budgets[i]), g,
                             brute_force_budgeted(g, active, cfg.budgets[i]), v_budget[i],
                             cfg.tolerance))
            return false;
    }

    // budget monotonicity, and unlimited == full-budget exactly
    for (std::size_t i = 1; i < v_budget.size(); ++i)
        if (!ctx.check_that("budget-monotonicity", g, v_budget[i] >= v_budget[i - 1] - 1e-12,
                            describe(v_budget[i - 1], v_budget[i])))
            return false;
    for (double v : v_budget)
        if (!ctx.check_that("budget-monotonicity", g, v_unlimited >= v - 1e-12,
                            describe(v, v_unlimited)))
            return false;
    double v_full = solve(g, active, RecourseBudget::finite(static_cast<int>(g.edge_count())),
                          memo).value + perturb;
    if (!ctx.check_that("unlimited-equals-full-budget", g, v_full == v_unlimited,
                        describe(v_unlimited, v_full)))
        return false;

    // max-weight matching is an upper bound in every realization
    {
        std::vector<EdgeSpec> relaxed;
        for (const auto& e : g.edges()) relaxed.push_back({e.u, e.v, 0.0, e.weight});
        FailureGraph sure = build_graph(g.vertex_count(), std::move(relaxed));
        double bound = best_static_matching(sure, sure.all_edges()).second;
        if (!ctx.check_that("max-weight-upper-bound", g, v_unlimited <= bound + cfg.tolerance,
                            describe(bound, v_unlimited)))
            return false;
    }

    // adding an edge never hurts
    if (g.edge_count() < kPairs) {
        std::vector<int> absent;
        for (int bit = 0; bit < kPairs; ++bit)
            if (!(mask & (std::uint32_t{1} << bit))) absent.push_back(bit);
        int bit = absent[rng.next_below(absent.size())];
        std::vector<EdgeSpec> specs;
        for (const auto& e : g.edges()) specs.push_back({e.u, e.v, e.fail_prob, e.weight});
        specs.push_back({pair_list()[bit].first, pair_list()[bit].second,
                         cfg.grid[rng.next_below(cfg.grid.size())], 2.0});
        FailureGraph bigger = build_graph(kVerts, std::move(specs));
        double v_bigger = solve(bigger, RecourseBudget::unlimited()).value + perturb;
        if (!ctx.check_that("supergraph-monotonicity", g,
                            v_bigger >= v_unlimited - cfg.tolerance,
                            describe(v_unlimited, v_bigger)))
            return false;
    }

    // component additivity: decomposition on/off agree
    {
        SolveOptions joint;
        joint.decompose_components = false;
        MemoTable fresh;
        double v_joint =
            solve(g, active, RecourseBudget::unlimited(), fresh, joint).value + perturb;
        if (!ctx.check_close("component-additivity", g, v_unlimited, v_joint, cfg.tolerance))
            return false;
    }

    // memo transparency: identical bits with the cache disabled
    {
        SolveOptions no_memo;
        no_memo.use_memo = false;
        MemoTable unused;
        for (std::size_t i = 0; i < cfg.budgets.size(); ++i) {
            double v = solve(g, active, RecourseBudget::finite(cfg.budgets[i]), unused,
                             no_memo).value + perturb;
            if (!ctx.check_that("memo-transparency", g, v == v_budget[i],
                                describe(v_budget[i], v)))
                return false;
        }
        if (cfg.memo_unlimited_stride > 0 &&
            instance_index % static_cast<std::uint64_t>(cfg.memo_unlimited_stride) == 0) {
            double v = solve(g, active, RecourseBudget::unlimited(), unused, no_memo).value +
                       perturb;
            if (!ctx.check_that("memo-transparency", g, v == v_unlimited,
                                describe(v_unlimited, v)))
                return false;
        }
    }
    return true;
}

}  // namespace

Report oracle_equivalence_sweep(const OracleSweepConfig& cfg) {
    Report report;
    SweepContext ctx{cfg, report};

    if (cfg.max_edges > kPairs)
        throw std::invalid_argument("oracle_equivalence_sweep: max_edges above 15");
    if (cfg.grid.empty()) throw std::invalid_argument("oracle_equivalence_sweep: empty grid");

    // group all labeled graphs by isomorphism class
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> classes;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << kPairs); ++mask) {
        if (std::popcount(mask) > cfg.max_edges) continue;
        classes[canonical_mask(mask)].push_back(mask);
    }
    std::vector<std::uint32_t> canon_order;
    for (const auto& [canon, members] : classes) canon_order.push_back(canon);
    std::sort(canon_order.begin(), canon_order.end());

    std::uint64_t instance_index = 0;
    for (std::uint32_t canon : canon_order) {
        const auto& members = classes[canon];
        SplitMix64 rng = SplitMix64::split(cfg.seed, canon);
        std::uint64_t assignments =
            std::max<std::uint64_t>(cfg.min_assignments_per_topology, members.size());
        for (std::uint64_t a = 0; a < assignments; ++a) {
            std::uint32_t mask = members[a % members.size()];
            std::vector<double> probs(std::popcount(mask));
            for (auto& p : probs) p = cfg.grid[rng.next_below(cfg.grid.size())];
            FailureGraph g = graph_from_mask(mask, probs);
            if (!run_instance_checks(ctx, g, mask, instance_index++, rng)) return report;
        }
    }
    report.notes.push_back(std::to_string(classes.size()) + " topologies, " +
                           std::to_string(report.instances) + " probability assignments");
    return report;
}

ClosedFormGapResult single_edge_gap_identity() {
    ClosedFormGapResult result;
    for (int i = 0; i <= 10; ++i) {
        double p = i / 10.0;
        result.grid.push_back(p);
        FailureGraph g = gen_cycle(4, p);
        Matching one(g.empty_set());
        one.edges().set(0);  // edge {0,1}
        Matching maximal(g.empty_set());
        maximal.edges().set(0);
        maximal.edges().set(3);  // edge {2,3}
        double gap = value_forcing_first(g, one, RecourseBudget::unlimited()) -
                     value_forcing_first(g, maximal, RecourseBudget::unlimited());
        double expected = 2.0 * p * (1.0 - p) * (1.0 - p) * (1.0 - p);
        result.max_abs_error = std::max(result.max_abs_error, std::abs(gap - expected));
    }
    return result;
}

Report single_edge_sufficiency_sweep(int graph_count, int max_edges, double tolerance,
                                     std::uint64_t seed) {
    Report report;
    int produced = 0;
    for (std::uint64_t attempt = 0; produced < graph_count; ++attempt) {
        SplitMix64 rng = SplitMix64::split(seed, attempt);
        int n = 4 + static_cast<int>(rng.next_below(5));  // 4..8 vertices
        double density = 0.2 + 0.6 * rng.next_double();
        FailureGraph g = gen_random(n, density, ProbSpec(0.0, 1.0), rng.next());
        if (g.edge_count() < 1 || g.edge_count() > static_cast<std::size_t>(max_edges))
            continue;
        ++produced;
        ++report.instances;

        double solved = solve(g, RecourseBudget::unlimited()).value;
        double best_single = 0.0;
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            Matching m(g.empty_set());
            m.edges().set(e);
            best_single = std::max(
                best_single, value_forcing_first(g, m, RecourseBudget::unlimited()));
        }
        ++report.checks["single-edge-sufficiency"];
        if (std::abs(best_single - solved) > tolerance) {
            report.failure = CheckFailure{"single-edge-sufficiency", describe(solved, best_single),
                                          counterexample_file(g, "single-edge-sufficiency")};
            return report;
        }
    }
    return report;
}

std::vector<MonteCarloCheck> monte_carlo_suite(std::uint64_t trials, std::uint64_t seed) {
    std::vector<MonteCarloCheck> checks;
    for (bool complete : {false, true}) {
        for (double p : {0.2, 0.5, 0.8}) {
            FailureGraph g = complete ? gen_complete(4, p) : gen_cycle(4, p);
            MonteCarloCheck check;
            check.instance = complete ? "K4" : "C4";
            check.fail_prob = p;
            check.solve_value = solve(g, RecourseBudget::unlimited()).value;
            for (int attempt = 0; attempt < 2; ++attempt) {
                SimulationResult sim =
                    simulate_policy(g, RecourseBudget::unlimited(), trials, seed + attempt);
                check.mean = sim.mean;
                check.standard_error = sim.standard_error;
                check.ok = std::abs(sim.mean - check.solve_value) <=
                           3.0 * sim.standard_error;
                check.rerun = attempt > 0;
                if (check.ok) break;
            }
            checks.push_back(check);
        }
    }
    return checks;
}

}  // namespace rmatch::verify
