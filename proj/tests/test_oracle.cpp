#include "doctest.h"

#include <algorithm>
#include <random>

#include "rmatch/instances.hpp"
#include "rmatch/oracle.hpp"

using namespace rmatch;

TEST_CASE("single-edge recursion on hand-checked graphs") {
    // four-cycle at p=0.5: best play is an end... any edge; recursion gives 2.625
    FailureGraph c4 = gen_cycle(4, 0.5);
    CHECK(brute_force_unlimited(c4, c4.all_edges()) == doctest::Approx(2.625).epsilon(1e-12));

    // two-edge path at p=0.5: 0.5*(2 + 0) + 0.5*1 = 1.5
    FailureGraph p3 = gen_path(3, 0.5);
    CHECK(brute_force_unlimited(p3, p3.all_edges()) == doctest::Approx(1.5).epsilon(1e-12));

    // nothing fails: value is the weight of a maximum matching
    FailureGraph sure = gen_cycle(4, 0.0);
    CHECK(brute_force_unlimited(sure, sure.all_edges()) == doctest::Approx(4.0));
    FailureGraph k4 = gen_complete(4, 0.0);
    CHECK(brute_force_unlimited(k4, k4.all_edges()) == doctest::Approx(4.0));
}

TEST_CASE("budgeted recursion saturates at the unlimited value") {
    FailureGraph c4 = gen_cycle(4, 0.5);
    EdgeSet all = c4.all_edges();
    CHECK(brute_force_budgeted(c4, all, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(brute_force_budgeted(c4, all, 4) == doctest::Approx(2.625).epsilon(1e-12));
    CHECK(brute_force_budgeted(c4, all, 5) == doctest::Approx(2.625).epsilon(1e-12));

    FailureGraph lone = build_graph(2, {{0, 1, 0.3}});
    for (int n : {0, 1, 3})
        CHECK(brute_force_budgeted(lone, lone.all_edges(), n) ==
              doctest::Approx(1.4).epsilon(1e-12));

    CHECK_THROWS_AS(brute_force_budgeted(c4, all, -1), std::invalid_argument);
}

TEST_CASE("oracle value is invariant to edge input order") {
    std::vector<EdgeSpec> edges = {{0, 1, 0.15}, {1, 2, 0.6}, {2, 3, 0.35},
                                   {0, 3, 0.8},  {0, 2, 0.4}};
    FailureGraph in_order = build_graph(4, edges);
    double reference = brute_force_unlimited(in_order, in_order.all_edges());

    std::mt19937 shuffler(99);
    for (int round = 0; round < 6; ++round) {
        std::shuffle(edges.begin(), edges.end(), shuffler);
        FailureGraph g = build_graph(4, edges);
        CHECK(brute_force_unlimited(g, g.all_edges()) == reference);  // bit-equal
    }
}

TEST_CASE("oracles are limited to 64 edges") {
    FailureGraph big = gen_complete(13, 0.5);  // 78 edges
    CHECK(big.edge_count() > 64);
    CHECK_THROWS_AS(brute_force_unlimited(big, big.all_edges()), std::invalid_argument);
}

TEST_CASE("policy simulation at the probability boundaries") {
    FailureGraph sure = gen_cycle(4, 0.0);
    SimulationResult r0 = simulate_policy(sure, RecourseBudget::unlimited(), 200, 1);
    CHECK(r0.mean == 4.0);
    CHECK(r0.standard_error == 0.0);

    FailureGraph doomed = gen_cycle(4, 1.0);
    SimulationResult r1 = simulate_policy(doomed, RecourseBudget::unlimited(), 200, 1);
    CHECK(r1.mean == 0.0);
    CHECK(r1.standard_error == 0.0);

    CHECK_THROWS_AS(simulate_policy(sure, RecourseBudget::unlimited(), 0, 1),
                    std::invalid_argument);
}

TEST_CASE("policy simulation tracks the solved expectation") {
    FailureGraph c4 = gen_cycle(4, 0.5);
    SimulationResult sim = simulate_policy(c4, RecourseBudget::unlimited(), 20000, 7);
    CHECK(sim.standard_error > 0.0);
    CHECK(std::abs(sim.mean - 2.625) <= 3.0 * sim.standard_error);

    // deterministic given the seed, sensitive to it
    SimulationResult again = simulate_policy(c4, RecourseBudget::unlimited(), 20000, 7);
    CHECK(again.mean == sim.mean);
    SimulationResult other = simulate_policy(c4, RecourseBudget::unlimited(), 20000, 8);
    CHECK(other.mean != sim.mean);

    // a zero budget degrades the policy to the static matching value
    SimulationResult static_run = simulate_policy(c4, RecourseBudget::finite(0), 20000, 7);
    CHECK(std::abs(static_run.mean - 2.0) <= 3.0 * static_run.standard_error);
}
