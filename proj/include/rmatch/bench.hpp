#ifndef RMATCH_BENCH_HPP
#define RMATCH_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rmatch/instances.hpp"
#include "rmatch/solver.hpp"

namespace rmatch {

/// Timing harness over generated random instances: per (instance, budget)
/// it records whether the solve finished within the timeout and how long it
/// took, plus an aggregate success-count table.
struct BenchConfig {
    std::vector<int> sizes = {10, 15, 20};
    int instances_per_size = 3;
    /// Edge density handed to gen_random; negative means 2/(n-1), i.e. an
    /// expected average degree of 2.
    double density = -1.0;
    ProbSpec prob{0.0, 1.0};
    std::vector<RecourseBudget> budgets = {RecourseBudget::finite(0), RecourseBudget::finite(1),
                                           RecourseBudget::unlimited()};
    double timeout_seconds = 60.0;
    std::uint64_t seed = 1;
    /// Once an instance times out at some budget, record larger budgets as
    /// timeouts without running them (solve time grows with the budget).
    bool skip_after_timeout = true;
};

struct BenchRun {
    int size = 0;
    int instance = 0;
    int vertices = 0;  // non-isolated
    int edges = 0;
    RecourseBudget budget = RecourseBudget::finite(0);
    bool solved = false;
    bool skipped = false;  // recorded as a timeout without running
    double elapsed_seconds = 0.0;
    double value = 0.0;
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchRun> runs;

    int success_count(int size, const RecourseBudget& budget) const;
};

BenchReport run_bench(const BenchConfig& cfg);

std::string budget_label(const RecourseBudget& b);

/// `runs` rows as CSV (schema v1, leading comment line documents columns).
std::string bench_csv(const BenchReport& report);

/// Success counts laid out sizes x budgets.
std::string bench_success_table(const BenchReport& report);

}  // namespace rmatch

#endif  // RMATCH_BENCH_HPP
