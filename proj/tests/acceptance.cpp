// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails.  Tolerances are fixed here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rmatch/bench.hpp"
#include "rmatch/instances.hpp"
#include "rmatch/matchings.hpp"
#include "rmatch/oracle.hpp"
#include "rmatch/solver.hpp"
#include "rmatch/verify.hpp"

using namespace rmatch;

namespace {

int failures = 0;

struct Line {
    int id;
    std::string text;
};
std::vector<Line> lines;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    if (!pass) ++failures;
    char buf[640];
    std::snprintf(buf, sizeof(buf), "%s  %d. %s (%s) [%.1fs]", pass ? "PASS" : "FAIL", id,
                  name.c_str(), detail.c_str(), seconds);
    lines.push_back({id, buf});
    std::fprintf(stderr, "%s\n", buf);  // progress while the suite runs
    std::fflush(stderr);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

Matching matching_of(const FailureGraph& g, std::initializer_list<std::size_t> idx) {
    Matching m(g.empty_set());
    for (auto i : idx) m.edges().set(i);
    return m;
}

// ---- criterion 1: closed-form gap between the single-edge and maximal
// first proposals on the four-cycle, uniform p grid, 1e-12, under a second
void criterion_1() {
    Timer t;
    auto result = verify::single_edge_gap_identity();
    bool pass = result.max_abs_error <= 1e-12 && t.seconds() < 1.0;
    report(1, "single-edge vs maximal first proposal: gap is 2p(1-p)^3", pass,
           "max error " + fmt(result.max_abs_error), t.seconds());
}

// ---- criteria 2 and 6 share one sweep over every <=6-edge graph on six
// vertices, >=200 grid assignments per topology dealt across labeled members
void criteria_2_and_6() {
    Timer t;
    verify::OracleSweepConfig cfg;  // defaults pin the criterion parameters
    auto sweep = verify::oracle_equivalence_sweep(cfg);
    double elapsed = t.seconds();

    std::uint64_t oracle_checks = 0, invariant_checks = 0;
    for (const auto& [name, count] : sweep.checks)
        (name.rfind("oracle-", 0) == 0 ? oracle_checks : invariant_checks) += count;

    bool failed_on_oracle = !sweep.ok() && sweep.failure->check.rfind("oracle-", 0) == 0;
    std::string failure_note =
        sweep.ok() ? "" : sweep.failure->check + ": " + sweep.failure->detail;

    bool pass2 = sweep.ok() ? elapsed < 600.0 : false;
    report(2, "solver equals both oracles on the exhaustive small-graph family", pass2,
           sweep.ok() ? std::to_string(sweep.instances) + " instances, " +
                            std::to_string(oracle_checks) + " comparisons"
                      : (failed_on_oracle ? failure_note : "sweep aborted: " + failure_note),
           elapsed);

    bool pass6 = sweep.ok();
    report(6, "budget/supergraph monotonicity, upper bound, additivity, memo equality",
           pass6,
           sweep.ok() ? std::to_string(invariant_checks) + " checks, zero violations"
                      : (!failed_on_oracle ? failure_note : "sweep aborted: " + failure_note),
           elapsed);
}

// ---- criterion 3: best single-edge first proposal reaches the optimum
void criterion_3() {
    Timer t;
    auto sweep = verify::single_edge_sufficiency_sweep(500, 8, 1e-9, 20250801);
    report(3, "single edge per observation suffices under unlimited recourse", sweep.ok(),
           sweep.ok() ? std::to_string(sweep.instances) + " random graphs"
                      : sweep.failure->detail,
           t.seconds());
}

// ---- criterion 4: frozen reference values, re-derived by the independent
// oracle before asserting
void criterion_4() {
    Timer t;
    FailureGraph g = gen_cycle(4, 0.5);
    EdgeSet all = g.all_edges();
    bool pass = true;
    std::string detail;

    auto expect = [&](const std::string& what, double got, double want) {
        if (std::abs(got - want) > 1e-9) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what + ": got " + fmt(got) +
                      ", want " + fmt(want);
        }
    };

    // oracle derivations first
    double oracle_unlimited = brute_force_unlimited(g, all);
    double oracle_static = brute_force_budgeted(g, all, 0);
    // forced maximal matching, evaluated with oracle continuations only
    double oracle_forced = 0.0;
    for (int s01 : {0, 1})
        for (int s23 : {0, 1}) {
            EdgeSet succeeded = g.empty_set(), failed = g.empty_set();
            (s01 ? succeeded : failed).set(0);
            (s23 ? succeeded : failed).set(3);
            double q = (s01 ? 0.5 : 0.5) * (s23 ? 0.5 : 0.5);
            double served = 2.0 * (s01 + s23);
            EdgeSet rest = residual_after_pattern(g, all, succeeded, failed);
            oracle_forced += q * (served + (rest.empty() ? 0.0
                                                         : brute_force_unlimited(g, rest)));
        }
    expect("oracle unlimited", oracle_unlimited, 2.625);
    expect("oracle static", oracle_static, 2.0);
    expect("oracle forced maximal", oracle_forced, 2.5);

    // the solver agrees with the frozen values
    MemoTable memo;
    expect("solve unlimited", solve(g, all, RecourseBudget::unlimited(), memo).value, 2.625);
    expect("solve budget 0", solve(g, all, RecourseBudget::finite(0), memo).value, 2.0);
    expect("forced {0-1, 2-3}",
           evaluate_matching(g, matching_of(g, {0, 3}), all, RecourseBudget::unlimited(),
                             memo),
           2.5);

    report(4, "reference values on the four-cycle at p=0.5", pass,
           pass ? "2.625 / 2.0 / 2.5 confirmed by oracle and solver" : detail, t.seconds());
}

// ---- criterion 5: Monte-Carlo simulation of the optimal policy
void criterion_5() {
    Timer t;
    auto checks = verify::monte_carlo_suite(100000, 424242);
    bool pass = true;
    std::string detail;
    int reruns = 0;
    for (const auto& c : checks) {
        pass &= c.ok;
        reruns += c.rerun ? 1 : 0;
        if (!c.ok)
            detail += c.instance + " p=" + fmt(c.fail_prob) + ": mean " + fmt(c.mean) +
                      " vs " + fmt(c.solve_value) + " (se " + fmt(c.standard_error) + "); ";
    }
    if (pass)
        detail = std::to_string(checks.size()) + " checks within 3 standard errors" +
                 (reruns ? " (" + std::to_string(reruns) + " rerun)" : "");
    report(5, "simulated optimal policy matches the solved expectation", pass, detail,
           t.seconds());
}

// ---- criterion 7: probability sweep on C4 and K4
void criterion_7() {
    Timer t;
    bool pass = true;
    std::string detail;
    auto note = [&](const std::string& msg) {
        pass = false;
        if (detail.size() < 200) detail += msg + "; ";
    };

    for (int i = 0; i <= 20; ++i) {
        double p = i / 20.0;
        FailureGraph c4 = gen_cycle(4, p);
        FailureGraph k4 = gen_complete(4, p);
        MemoTable m1, m2;
        double c4_inf = solve(c4, c4.all_edges(), RecourseBudget::unlimited(), m1).value;
        double c4_0 = solve(c4, c4.all_edges(), RecourseBudget::finite(0), m1).value;
        double k4_inf = solve(k4, k4.all_edges(), RecourseBudget::unlimited(), m2).value;
        double k4_0 = solve(k4, k4.all_edges(), RecourseBudget::finite(0), m2).value;

        if (c4_inf < c4_0 - 1e-12 || k4_inf < k4_0 - 1e-12)
            note("recourse below static at p=" + fmt(p));
        if (k4_inf < c4_inf - 1e-12 || k4_0 < c4_0 - 1e-12)
            note("K4 below C4 at p=" + fmt(p));
        // no-recourse closed form under these semantics: 4(1-p)
        if (std::abs(c4_0 - 4.0 * (1.0 - p)) > 1e-12 ||
            std::abs(k4_0 - 4.0 * (1.0 - p)) > 1e-12)
            note("static value is not 4(1-p) at p=" + fmt(p));
        if (i == 0 && (c4_inf != 4.0 || k4_inf != 4.0 || c4_0 != 4.0 || k4_0 != 4.0))
            note("p=0 endpoint not exactly 4");
        if (i == 20 && (c4_inf != 0.0 || k4_inf != 0.0 || c4_0 != 0.0 || k4_0 != 0.0))
            note("p=1 endpoint not exactly 0");
    }
    report(7, "probability sweep: recourse dominates, K4 dominates C4, exact endpoints",
           pass, pass ? "21 grid points" : detail, t.seconds());
}

// ---- criterion 8: exponential growth in the edge count, and success counts
// that fall with budget and size
void criterion_8() {
    Timer t;
    bool pass = true;
    std::string detail;

    // (a) log time vs edge count over every graph on six vertices, p = 0.5
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::uint64_t points = 0;
        for (std::uint32_t mask = 1; mask < (1u << 15); ++mask) {
            std::vector<EdgeSpec> edges;
            int bit = 0;
            for (int i = 0; i < 6; ++i)
                for (int j = i + 1; j < 6; ++j, ++bit)
                    if ((mask >> bit) & 1) edges.push_back({i, j, 0.5});
            FailureGraph g = build_graph(6, std::move(edges));

            Timer solve_timer;
            MemoTable memo;
            solve(g, g.all_edges(), RecourseBudget::unlimited(), memo);
            double dt = std::max(solve_timer.seconds(), 1e-9);

            double x = static_cast<double>(g.edge_count());
            double y = std::log(dt);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++points;
        }
        double n = static_cast<double>(points);
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (!(slope > 0.0)) {
            pass = false;
            detail += "log-time slope " + fmt(slope) + " not positive; ";
        } else {
            detail += "slope " + fmt(slope) + " over " + std::to_string(points) +
                      " solves; ";
        }
    }

    // (b) benchmark success counts fall (weakly) with budget and with size
    {
        BenchConfig cfg;
        cfg.sizes = {10, 15, 20};
        cfg.instances_per_size = 3;
        // seed/density chosen so every run is far from the timeout boundary:
        // sizes 10 and 15 solve in well under a second at every budget, the
        // 24-25-edge size-20 instances are hopeless at unlimited budget
        cfg.density = 0.12;
        cfg.budgets = {RecourseBudget::finite(0), RecourseBudget::finite(1),
                       RecourseBudget::unlimited()};
        cfg.timeout_seconds = 60.0;
        cfg.seed = 3;
        BenchReport bench = run_bench(cfg);

        std::string table;
        for (int size : cfg.sizes) {
            table += std::to_string(size) + ":";
            int prev = cfg.instances_per_size + 1;
            for (const auto& b : cfg.budgets) {
                int count = bench.success_count(size, b);
                table += " " + std::to_string(count);
                if (count > prev) {
                    pass = false;
                    detail += "success count rises with budget at size " +
                              std::to_string(size) + "; ";
                }
                prev = count;
            }
            table += ";";
        }
        for (const auto& b : cfg.budgets) {
            int prev = cfg.instances_per_size + 1;
            for (int size : cfg.sizes) {
                int count = bench.success_count(size, b);
                if (count > prev) {
                    pass = false;
                    detail += "success count rises with size at budget " + budget_label(b) +
                              "; ";
                }
                prev = count;
            }
        }
        detail += "bench counts [" + table + "]";
    }

    report(8, "solve time grows exponentially with edges; success counts are monotone",
           pass, detail, t.seconds());
}

}  // namespace

int main() {
    criterion_1();
    criteria_2_and_6();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_7();
    criterion_8();

    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return a.id < b.id;
    });
    for (const auto& line : lines) std::printf("%s\n", line.text.c_str());
    if (failures)
        std::printf("%d criterion(s) FAILED\n", failures);
    else
        std::printf("all acceptance criteria passed\n");
    return failures ? 1 : 0;
}
