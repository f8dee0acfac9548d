// Command-line front end: solve instances, sweep failure probabilities,
// run timing benchmarks, generate and convert instance files, and run the
// solver-vs-oracle verification suite.
//
// Exit codes: 0 success, 1 verification failure or timeout, 2 usage or I/O
// error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rmatch/bench.hpp"
#include "rmatch/instances.hpp"
#include "rmatch/oracle.hpp"
#include "rmatch/solver.hpp"
#include "rmatch/verify.hpp"

namespace {

using nlohmann::json;
using namespace rmatch;

RecourseBudget parse_budget(const std::string& text) {
    if (text == "inf" || text == "unlimited") return RecourseBudget::unlimited();
    try {
        std::size_t used = 0;
        int n = std::stoi(text, &used);
        if (used == text.size() && n >= 0) return RecourseBudget::finite(n);
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--budget", "expected a nonnegative integer or 'inf'");
}

std::vector<RecourseBudget> parse_budget_list(const std::string& text) {
    std::vector<RecourseBudget> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_budget(item));
    if (out.empty()) throw CLI::ValidationError("--budgets", "empty list");
    return out;
}

// "lo:hi:step" or a comma-separated list, all values within [0,1]
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo, hi, step;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0 ||
            lo > hi)
            throw CLI::ValidationError("--p-grid", "expected lo:hi:step with step > 0");
        for (int i = 0;; ++i) {
            double p = lo + i * step;
            if (p > hi + 1e-12) break;
            out.push_back(std::min(p, hi));
        }
    } else {
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("--p-grid", "empty grid");
    for (double p : out)
        if (!(p >= 0.0 && p <= 1.0))
            throw CLI::ValidationError("--p-grid", "probabilities must lie in [0,1]");
    return out;
}

FoldMode parse_fold(const std::string& text) {
    if (text == "as-written") return FoldMode::AsWritten;
    if (text == "complement") return FoldMode::Complement;
    throw CLI::ValidationError("--fold", "expected 'as-written' or 'complement'");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InstanceIoError(path, 0, "cannot open file for writing");
    out << text;
}

json solve_report_json(const FailureGraph& g, const std::string& instance,
                       const RecourseBudget& budget, const SolveResult& result,
                       std::size_t memo_entries) {
    json components = json::array();
    for (const auto& c : result.components) {
        // matchings are emitted as endpoint pairs, not edge indices
        json matching = json::array();
        c.first_matching.edges().for_each([&](std::size_t e) {
            matching.push_back({g.edge(e).u, g.edge(e).v});
        });
        components.push_back({{"vertices", c.vertices},
                              {"matching", matching},
                              {"value", c.value}});
    }
    return json{{"format", "recourse-match solve report v1"},
                {"instance", instance},
                {"budget", budget_label(budget)},
                {"value", result.value},
                {"components", components},
                {"stats",
                 {{"evaluate_calls", result.stats.evaluate_calls},
                  {"memo_hits", result.stats.memo_hits},
                  {"memo_entries", memo_entries},
                  {"elapsed_seconds", result.stats.elapsed_seconds}}}};
}

struct SolveArgs {
    std::string instance;
    std::string budget = "inf";
    std::string fold = "as-written";
    std::string out;
    double timeout = 0.0;
    bool as_json = false;
    bool no_memo = false;
    bool prune_zero = false;
};

int cmd_solve(const SolveArgs& args) {
    InstanceFile file = read_instance(args.instance);
    FailureGraph g = to_failure_graph(file, parse_fold(args.fold));
    RecourseBudget budget = parse_budget(args.budget);

    SolveOptions opts;
    opts.use_memo = !args.no_memo;
    opts.prune_zero_probability = args.prune_zero;
    if (args.timeout > 0.0)
        opts.deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(args.timeout));

    MemoTable memo;
    SolveResult result;
    try {
        result = solve(g, g.all_edges(), budget, memo, opts);
    } catch (const SolveDeadlineExceeded&) {
        std::cerr << "solve: timed out after " << args.timeout << "s\n";
        return 1;
    }

    std::ostringstream out;
    if (args.as_json) {
        json report = solve_report_json(g, args.instance, budget, result, memo.size());
        out << report.dump(2) << '\n';
    } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", result.value);
        out << "value " << buf << "  (budget " << budget_label(budget) << ")\n";
        for (const auto& c : result.components) {
            out << "component {";
            for (std::size_t i = 0; i < c.vertices.size(); ++i)
                out << (i ? "," : "") << c.vertices[i];
            out << "}: matching";
            if (c.first_matching.empty()) out << " (empty)";
            c.first_matching.edges().for_each([&](std::size_t e) {
                out << ' ' << g.edge(e).u << '-' << g.edge(e).v;
            });
            std::snprintf(buf, sizeof(buf), "%.17g", c.value);
            out << "  value " << buf << '\n';
        }
        out << "evaluate calls " << result.stats.evaluate_calls << ", memo hits "
            << result.stats.memo_hits << ", memo entries " << memo.size() << ", elapsed "
            << result.stats.elapsed_seconds << "s\n";
    }
    write_text(args.out, out.str());
    return 0;
}

struct SweepArgs {
    std::string topology = "cycle";
    int n = 4;
    std::string p_grid = "0:1:0.05";
    std::string budgets = "0,inf";
    std::string out;
};

int cmd_sweep(const SweepArgs& args) {
    auto grid = parse_grid(args.p_grid);
    auto budgets = parse_budget_list(args.budgets);

    std::ostringstream csv;
    csv << "# recourse-match sweep csv v1 topology=" << args.topology << " n=" << args.n
        << '\n';
    csv << "p,budget,value\n";
    for (double p : grid) {
        FailureGraph g = args.topology == "cycle"      ? gen_cycle(args.n, p)
                         : args.topology == "complete" ? gen_complete(args.n, p)
                         : args.topology == "path"
                             ? gen_path(args.n, p)
                             : throw CLI::ValidationError(
                                   "--topology", "expected cycle, complete or path");
        for (const auto& budget : budgets) {
            double value = solve(g, budget).value;
            char line[96];
            std::snprintf(line, sizeof(line), "%.17g,%s,%.17g\n", p,
                          budget_label(budget).c_str(), value);
            csv << line;
        }
    }
    write_text(args.out, csv.str());
    return 0;
}

struct BenchArgs {
    std::string sizes = "10,15,20";
    int instances = 3;
    double density = -1.0;
    std::string budgets = "0,1,inf";
    double timeout = 60.0;
    std::uint64_t seed = 1;
    std::string out;
    bool no_skip = false;
};

int cmd_bench(const BenchArgs& args) {
    BenchConfig cfg;
    cfg.sizes.clear();
    {
        std::istringstream in(args.sizes);
        std::string item;
        while (std::getline(in, item, ',')) cfg.sizes.push_back(std::stoi(item));
        if (cfg.sizes.empty()) throw CLI::ValidationError("--sizes", "empty list");
    }
    cfg.instances_per_size = args.instances;
    cfg.density = args.density;
    cfg.budgets = parse_budget_list(args.budgets);
    cfg.timeout_seconds = args.timeout;
    cfg.seed = args.seed;
    cfg.skip_after_timeout = !args.no_skip;

    BenchReport report = run_bench(cfg);
    write_text(args.out, bench_csv(report));
    // the aggregate table goes to the terminal, never into the CSV file
    std::ostream& table_out = args.out.empty() || args.out == "-" ? std::cerr : std::cout;
    table_out << bench_success_table(report);
    return 0;
}

struct VerifyArgs {
    int max_edges = 6;
    int assignments = 200;
    std::string budgets = "0,1,2,3";
    std::string grid = "0,0.25,0.5,0.75,1";
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    int prop2_graphs = 500;
    std::string counterexample_out = "verify-counterexample.txt";
};

int cmd_verify(const VerifyArgs& args) {
    if (args.max_edges < 0 || args.max_edges > 6)
        throw CLI::ValidationError("--max-edges", "exhaustive sweep supports 0..6 edges");

    bool all_ok = true;
    auto phase = [&](int i, int total, const std::string& name) -> std::ostream& {
        return std::cout << '[' << i << '/' << total << "] " << name << ": ";
    };

    {
        auto result = verify::single_edge_gap_identity();
        bool ok = result.max_abs_error <= 1e-12;
        all_ok &= ok;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3g", result.max_abs_error);
        phase(1, 4, "closed-form single-edge gap on the four-cycle")
            << (ok ? "pass" : "FAIL") << " (max error " << buf << ")\n";
    }

    {
        verify::OracleSweepConfig cfg;
        cfg.max_edges = args.max_edges;
        cfg.min_assignments_per_topology = args.assignments;
        cfg.budgets.clear();
        for (const auto& b : parse_budget_list(args.budgets)) {
            if (b.is_unlimited())
                throw CLI::ValidationError("--budgets", "oracle sweep budgets must be finite");
            cfg.budgets.push_back(b.rounds());
        }
        cfg.grid = parse_grid(args.grid);
        cfg.tolerance = args.tolerance;
        cfg.seed = args.seed;
        auto report = verify::oracle_equivalence_sweep(cfg);
        all_ok &= report.ok();
        phase(2, 4, "solver vs oracles, every graph with <= " +
                        std::to_string(args.max_edges) + " edges on 6 vertices")
            << (report.ok() ? "pass" : "FAIL") << " (" << report.instances
            << " probability assignments)\n";
        if (!report.ok()) {
            std::cout << "    " << report.failure->check << ": " << report.failure->detail
                      << '\n';
            if (report.failure->counterexample) {
                write_instance(args.counterexample_out, *report.failure->counterexample);
                std::cout << "    counterexample written to " << args.counterexample_out
                          << '\n';
            }
        }
    }

    {
        auto report = verify::single_edge_sufficiency_sweep(args.prop2_graphs, 8,
                                                            args.tolerance, args.seed);
        all_ok &= report.ok();
        phase(3, 4, "single-edge sufficiency under unlimited recourse")
            << (report.ok() ? "pass" : "FAIL") << " (" << report.instances << " graphs)\n";
        if (!report.ok()) {
            std::cout << "    " << report.failure->detail << '\n';
            if (report.failure->counterexample) {
                write_instance(args.counterexample_out, *report.failure->counterexample);
                std::cout << "    counterexample written to " << args.counterexample_out
                          << '\n';
            }
        }
    }

    if (args.trials == 0) {
        phase(4, 4, "Monte-Carlo policy simulation") << "skipped (trials=0)\n";
    } else {
        auto checks = verify::monte_carlo_suite(args.trials, args.seed);
        bool ok = true;
        for (const auto& c : checks) ok &= c.ok;
        all_ok &= ok;
        phase(4, 4, "Monte-Carlo policy simulation") << (ok ? "pass" : "FAIL") << " ("
                                                     << checks.size() << " checks)\n";
        for (const auto& c : checks)
            if (!c.ok || c.rerun) {
                char buf[160];
                std::snprintf(buf, sizeof(buf),
                              "    %s p=%.2g: mean %.6f vs value %.6f (stderr %.6f)%s\n",
                              c.instance.c_str(), c.fail_prob, c.mean, c.solve_value,
                              c.standard_error, c.rerun ? " [rerun]" : "");
                std::cout << buf;
            }
    }

    std::cout << (all_ok ? "verify: all checks passed\n" : "verify: FAILURES detected\n");
    return all_ok ? 0 : 1;
}

struct GenArgs {
    std::string topology = "random";
    int n = 10;
    double p = 0.5;
    std::string p_range;
    double density = 0.2;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_gen(const GenArgs& args) {
    ProbSpec p(args.p);
    if (!args.p_range.empty()) {
        double lo, hi;
        if (std::sscanf(args.p_range.c_str(), "%lf,%lf", &lo, &hi) != 2)
            throw CLI::ValidationError("--p-range", "expected lo,hi");
        p = ProbSpec(lo, hi);
    }

    FailureGraph g = args.topology == "cycle"      ? gen_cycle(args.n, p, args.seed)
                     : args.topology == "path"     ? gen_path(args.n, p, args.seed)
                     : args.topology == "complete" ? gen_complete(args.n, p, args.seed)
                     : args.topology == "random"
                         ? gen_random(args.n, args.density, p, args.seed)
                         : throw CLI::ValidationError(
                               "--topology", "expected cycle, path, complete or random");

    InstanceFile file;
    file.payload = std::move(g);
    file.provenance.emplace_back("generator", args.topology);
    file.provenance.emplace_back("n", std::to_string(args.n));
    if (args.topology == "random")
        file.provenance.emplace_back("density", std::to_string(args.density));
    if (p.is_constant()) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", p.lo);
        file.provenance.emplace_back("p", buf);
    } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g", p.lo, p.hi);
        file.provenance.emplace_back("p-range", buf);
    }
    file.provenance.emplace_back("seed", std::to_string(args.seed));

    write_text(args.out, format_instance(file));
    return 0;
}

struct ConvertArgs {
    std::string instance;
    std::string fold = "as-written";
    std::string out;
};

int cmd_convert(const ConvertArgs& args) {
    InstanceFile file = read_instance(args.instance);
    if (!file.is_directed()) {
        std::cerr << "convert: " << args.instance << " is already undirected\n";
        return 2;
    }
    InstanceFile folded;
    folded.payload = fold_two_cycles(file.directed(), parse_fold(args.fold));
    folded.provenance = file.provenance;
    folded.provenance.emplace_back("folded", args.fold);
    write_text(args.out, format_instance(folded));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximum-expectation matching under repeated recourse"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "solve one instance file");
    solve_cmd->add_option("instance", solve_args.instance, "instance file")->required();
    solve_cmd->add_option("--budget", solve_args.budget, "recourse rounds, integer or 'inf'");
    solve_cmd->add_option("--fold", solve_args.fold, "folding mode for directed payloads");
    solve_cmd->add_option("--timeout", solve_args.timeout, "seconds before giving up");
    solve_cmd->add_option("--out", solve_args.out, "write the report here instead of stdout");
    solve_cmd->add_flag("--json", solve_args.as_json, "machine-readable report");
    solve_cmd->add_flag("--no-memo", solve_args.no_memo, "disable memoization");
    solve_cmd->add_flag("--prune-zero-prob", solve_args.prune_zero,
                        "skip zero-probability failure patterns");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "value vs failure probability, as CSV");
    sweep_cmd->add_option("--topology", sweep_args.topology, "cycle, complete or path");
    sweep_cmd->add_option("--n", sweep_args.n, "vertex count")->check(CLI::Range(2, 1000));
    sweep_cmd->add_option("--p-grid", sweep_args.p_grid, "lo:hi:step or comma list");
    sweep_cmd->add_option("--budgets", sweep_args.budgets, "comma list, integers or 'inf'");
    sweep_cmd->add_option("--out", sweep_args.out, "CSV output path");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "timing benchmark on random instances");
    bench_cmd->add_option("--sizes", bench_args.sizes, "comma list of vertex counts");
    bench_cmd->add_option("--instances", bench_args.instances, "instances per size")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--density", bench_args.density,
                          "edge density; negative means 2/(n-1)");
    bench_cmd->add_option("--budgets", bench_args.budgets, "comma list, integers or 'inf'");
    bench_cmd->add_option("--timeout", bench_args.timeout, "per-solve timeout, seconds")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench_args.seed, "instance generator seed");
    bench_cmd->add_option("--out", bench_args.out, "CSV output path");
    bench_cmd->add_flag("--no-skip-after-timeout", bench_args.no_skip,
                        "run larger budgets even after a timeout");

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "solver-vs-oracle verification suite");
    verify_cmd->add_option("--max-edges", verify_args.max_edges,
                           "exhaustive family bound (at most 6)");
    verify_cmd->add_option("--assignments", verify_args.assignments,
                           "probability assignments per topology");
    verify_cmd->add_option("--budgets", verify_args.budgets, "finite budgets to cross-check");
    verify_cmd->add_option("--p-grid", verify_args.grid, "probability grid");
    verify_cmd->add_option("--trials", verify_args.trials,
                           "Monte-Carlo trials per check; 0 skips the phase");
    verify_cmd->add_option("--seed", verify_args.seed, "sweep seed");
    verify_cmd->add_option("--tolerance", verify_args.tolerance, "comparison tolerance");
    verify_cmd->add_option("--prop2-graphs", verify_args.prop2_graphs,
                           "graphs for the single-edge sufficiency phase");
    verify_cmd->add_option("--counterexample-out", verify_args.counterexample_out,
                           "where to serialize a failing instance");

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "generate an instance file");
    gen_cmd->add_option("--topology", gen_args.topology, "cycle, path, complete or random");
    gen_cmd->add_option("--n", gen_args.n, "vertex count")->check(CLI::Range(2, 100000));
    gen_cmd->add_option("--p", gen_args.p, "constant failure probability");
    gen_cmd->add_option("--p-range", gen_args.p_range, "uniform range lo,hi");
    gen_cmd->add_option("--density", gen_args.density, "edge density for random graphs");
    gen_cmd->add_option("--seed", gen_args.seed, "generator seed");
    gen_cmd->add_option("--out", gen_args.out, "output path (stdout if absent)");

    ConvertArgs convert_args;
    auto* convert_cmd =
        app.add_subcommand("convert", "fold a directed instance into an undirected one");
    convert_cmd->add_option("instance", convert_args.instance, "directed instance file")
        ->required();
    convert_cmd->add_option("--fold", convert_args.fold, "as-written or complement");
    convert_cmd->add_option("--out", convert_args.out, "output path (stdout if absent)");

    try {
        app.parse(argc, argv);
        if (*solve_cmd) return cmd_solve(solve_args);
        if (*sweep_cmd) return cmd_sweep(sweep_args);
        if (*bench_cmd) return cmd_bench(bench_args);
        if (*verify_cmd) return cmd_verify(verify_args);
        if (*gen_cmd) return cmd_gen(gen_args);
        if (*convert_cmd) return cmd_convert(convert_args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const InstanceIoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const GraphError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
