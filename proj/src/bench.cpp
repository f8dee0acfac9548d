#include "rmatch/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>

#include "rmatch/rng.hpp"

namespace rmatch {

namespace {

int non_isolated_vertices(const FailureGraph& g) {
    std::set<int> touched;
    for (const auto& e : g.edges()) {
        touched.insert(e.u);
        touched.insert(e.v);
    }
    return static_cast<int>(touched.size());
}

}  // namespace

std::string budget_label(const RecourseBudget& b) {
    return b.is_unlimited() ? "inf" : std::to_string(b.rounds());
}

int BenchReport::success_count(int size, const RecourseBudget& budget) const {
    int count = 0;
    for (const auto& run : runs)
        if (run.size == size && run.budget == budget && run.solved) ++count;
    return count;
}

BenchReport run_bench(const BenchConfig& cfg) {
    if (cfg.timeout_seconds <= 0.0)
        throw std::invalid_argument("run_bench: timeout must be positive");
    BenchReport report;
    report.config = cfg;

    for (int size : cfg.sizes) {
        double density = cfg.density >= 0.0 ? cfg.density : 2.0 / std::max(1, size - 1);
        for (int i = 0; i < cfg.instances_per_size; ++i) {
            std::uint64_t instance_seed =
                SplitMix64::split(cfg.seed, (static_cast<std::uint64_t>(size) << 20) | i).next();
            FailureGraph g = gen_random(size, density, cfg.prob, instance_seed);

            bool timed_out_before = false;
            for (const auto& budget : cfg.budgets) {
                BenchRun run;
                run.size = size;
                run.instance = i;
                run.vertices = non_isolated_vertices(g);
                run.edges = static_cast<int>(g.edge_count());
                run.budget = budget;

                if (timed_out_before && cfg.skip_after_timeout) {
                    run.skipped = true;
                    report.runs.push_back(run);
                    continue;
                }

                SolveOptions opts;
                auto start = std::chrono::steady_clock::now();
                opts.deadline = start + std::chrono::duration_cast<
                                            std::chrono::steady_clock::duration>(
                                            std::chrono::duration<double>(cfg.timeout_seconds));
                MemoTable memo;
                try {
                    SolveResult result = solve(g, g.all_edges(), budget, memo, opts);
                    run.solved = true;
                    run.value = result.value;
                    run.elapsed_seconds = result.stats.elapsed_seconds;
                } catch (const SolveDeadlineExceeded&) {
                    run.solved = false;
                    run.elapsed_seconds = std::chrono::duration<double>(
                                              std::chrono::steady_clock::now() - start)
                                              .count();
                    timed_out_before = true;
                }
                report.runs.push_back(run);
            }
        }
    }
    return report;
}

std::string bench_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "# recourse-match bench csv v1\n";
    out << "size,instance,vertices,edges,budget,solved,skipped,elapsed_seconds,value\n";
    for (const auto& run : report.runs) {
        char tail[96];
        std::snprintf(tail, sizeof(tail), "%d,%d,%.6f,%.17g", run.solved ? 1 : 0,
                      run.skipped ? 1 : 0, run.elapsed_seconds, run.value);
        out << run.size << ',' << run.instance << ',' << run.vertices << ',' << run.edges
            << ',' << budget_label(run.budget) << ',' << tail << '\n';
    }
    return out.str();
}

std::string bench_success_table(const BenchReport& report) {
    std::ostringstream out;
    out << "successes out of " << report.config.instances_per_size << " per cell\n";
    out << "size";
    for (const auto& b : report.config.budgets) out << "\tN=" << budget_label(b);
    out << '\n';
    for (int size : report.config.sizes) {
        out << size;
        for (const auto& b : report.config.budgets)
            out << '\t' << report.success_count(size, b);
        out << '\n';
    }
    return out.str();
}

}  // namespace rmatch
