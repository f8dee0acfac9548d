#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "rmatch/instances.hpp"
#include "rmatch/rng.hpp"

using namespace rmatch;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("rmatch_test_" + name);
}

DirectedInstance random_directed(std::uint64_t seed) {
    SplitMix64 rng(seed);
    int n = 3 + static_cast<int>(rng.next_below(6));
    std::vector<double> vp(n);
    for (auto& p : vp) p = rng.next_double();
    std::vector<DirectedInstance::Arc> arcs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && rng.next_bernoulli(0.4)) arcs.push_back({i, j, rng.next_double()});
    return build_directed(n, std::move(vp), std::move(arcs));
}

}  // namespace

TEST_CASE("two-cycle folding, both probability conventions") {
    DirectedInstance d = build_directed(2, {0.1, 0.2}, {{0, 1, 0.3}, {1, 0, 0.4}});

    FailureGraph as_written = fold_two_cycles(d, FoldMode::AsWritten);
    REQUIRE(as_written.edge_count() == 1);
    CHECK(as_written.edge(0).fail_prob == doctest::Approx(0.0024).epsilon(1e-14));
    CHECK(as_written.vertex_count() == 2);

    FailureGraph complement = fold_two_cycles(d, FoldMode::Complement);
    CHECK(complement.edge(0).fail_prob == doctest::Approx(0.6976).epsilon(1e-14));
}

TEST_CASE("folding drops arcs without an opposite") {
    DirectedInstance one_way = build_directed(3, {0.1, 0.1, 0.1}, {{0, 1, 0.5}});
    CHECK(fold_two_cycles(one_way, FoldMode::AsWritten).edge_count() == 0);

    // a directed 3-cycle has no 2-cycles at all
    DirectedInstance tri =
        build_directed(3, {0.1, 0.1, 0.1}, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 0, 0.5}});
    FailureGraph folded = fold_two_cycles(tri, FoldMode::AsWritten);
    CHECK(folded.edge_count() == 0);
    CHECK(folded.vertex_count() == 3);  // isolated vertices retained
}

TEST_CASE("fold bounds and 2-cycle count on random directed instances") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        DirectedInstance d = random_directed(seed);

        // independent pair scan
        std::set<std::pair<int, int>> arc_set;
        for (const auto& a : d.arcs) arc_set.insert({a.from, a.to});
        std::size_t two_cycles = 0;
        for (const auto& [i, j] : arc_set)
            if (i < j && arc_set.count({j, i})) ++two_cycles;

        for (auto mode : {FoldMode::AsWritten, FoldMode::Complement}) {
            FailureGraph g = fold_two_cycles(d, mode);
            CHECK(g.edge_count() == two_cycles);
            for (const auto& e : g.edges()) {
                double pi = d.vertex_fail_prob[e.u];
                double pj = d.vertex_fail_prob[e.v];
                double pij = 0, pji = 0;
                for (const auto& a : d.arcs) {
                    if (a.from == e.u && a.to == e.v) pij = a.fail_prob;
                    if (a.from == e.v && a.to == e.u) pji = a.fail_prob;
                }
                double lo = std::min(std::min(pi, pj), std::min(pij, pji));
                double hi = std::max(std::max(pi, pj), std::max(pij, pji));
                if (mode == FoldMode::AsWritten)
                    CHECK(e.fail_prob <= lo + 1e-15);
                else
                    CHECK(e.fail_prob >= hi - 1e-15);
            }
        }
    }
}

TEST_CASE("directed-instance validation") {
    CHECK_THROWS_AS(build_directed(2, {0.1, 0.1}, {{0, 0, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(build_directed(2, {0.1, 0.1}, {{0, 1, 0.5}, {0, 1, 0.6}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_directed(2, {0.1, 1.5}, {}), std::invalid_argument);
    CHECK_THROWS_AS(build_directed(2, {0.1}, {}), std::invalid_argument);
    CHECK_THROWS_AS(build_directed(2, {0.1, 0.1}, {{0, 2, 0.5}}), std::invalid_argument);
}

TEST_CASE("generators") {
    FailureGraph c4 = gen_cycle(4, 0.5);
    REQUIRE(c4.edge_count() == 4);
    for (const auto& e : c4.edges()) CHECK(e.fail_prob == 0.5);

    CHECK(gen_complete(4, 0.5).edge_count() == 6);
    CHECK(gen_path(5, 0.5).edge_count() == 4);
    CHECK(gen_cycle(2, 0.5).edge_count() == 1);  // degenerate cycle collapses

    // ranged probabilities are deterministic in the seed and within bounds
    FailureGraph a = gen_cycle(4, ProbSpec(0.2, 0.4), 7);
    FailureGraph b = gen_cycle(4, ProbSpec(0.2, 0.4), 7);
    for (std::size_t e = 0; e < a.edge_count(); ++e) {
        CHECK(a.edge(e).fail_prob == b.edge(e).fail_prob);
        CHECK(a.edge(e).fail_prob >= 0.2);
        CHECK(a.edge(e).fail_prob < 0.4);
    }
    CHECK_THROWS_AS(gen_cycle(4, ProbSpec(0.5, 0.2)), std::invalid_argument);
    CHECK_THROWS_AS(gen_cycle(1, 0.5), std::invalid_argument);

    CHECK(gen_random(6, 0.0, 0.5, 1).edge_count() == 0);
    CHECK(gen_random(4, 1.0, 0.5, 1).edge_count() == 6);
    CHECK(gen_random(20, 0.1, 0.5, 3).edge_count() ==
          gen_random(20, 0.1, 0.5, 3).edge_count());
    CHECK_THROWS_AS(gen_random(4, 1.5, 0.5, 1), std::invalid_argument);
}

TEST_CASE("instance files round-trip byte-identically") {
    InstanceFile file;
    file.payload = gen_random(7, 0.5, ProbSpec(0.0, 1.0), 11);
    file.provenance = {{"generator", "random"}, {"seed", "11"}};

    std::string text = format_instance(file);
    InstanceFile back = parse_instance(text);
    CHECK(format_instance(back) == text);  // write(read(f)) == f for canonical files
    REQUIRE(!back.is_directed());
    CHECK(back.provenance == file.provenance);

    const auto& g0 = file.graph();
    const auto& g1 = back.graph();
    REQUIRE(g1.edge_count() == g0.edge_count());
    for (std::size_t e = 0; e < g0.edge_count(); ++e) {
        CHECK(g1.edge(e).u == g0.edge(e).u);
        CHECK(g1.edge(e).v == g0.edge(e).v);
        CHECK(g1.edge(e).fail_prob == g0.edge(e).fail_prob);  // bit-exact
        CHECK(g1.edge(e).weight == g0.edge(e).weight);
    }

    // directed payloads too
    InstanceFile dfile;
    dfile.payload = random_directed(5);
    std::string dtext = format_instance(dfile);
    InstanceFile dback = parse_instance(dtext);
    CHECK(format_instance(dback) == dtext);
    REQUIRE(dback.is_directed());
    CHECK(dback.directed().arcs.size() == dfile.directed().arcs.size());

    // a probability with no short decimal representation survives
    InstanceFile third;
    third.payload = build_graph(2, {{0, 1, 1.0 / 3.0}});
    InstanceFile third_back = parse_instance(format_instance(third));
    CHECK(third_back.graph().edge(0).fail_prob == 1.0 / 3.0);
}

TEST_CASE("instance file I/O on disk") {
    auto path = temp_file("io.txt");
    InstanceFile file;
    file.payload = gen_cycle(4, 0.5);
    write_instance(path.string(), file);
    InstanceFile back = read_instance(path.string());
    CHECK(back.graph().edge_count() == 4);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(read_instance("/nonexistent/rmatch.txt"), InstanceIoError);
    try {
        read_instance("/nonexistent/rmatch.txt");
    } catch (const InstanceIoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/rmatch.txt") != std::string::npos);
    }
}

TEST_CASE("parse errors carry line context and distinct types") {
    // probability out of range names the line
    try {
        parse_instance("recourse-match v1 undirected\nn 3\ne 0 1 1.5\n", "bad.txt");
        FAIL("expected InstanceValueError");
    } catch (const InstanceValueError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("bad.txt:3") != std::string::npos);
        CHECK(std::string(e.what()).find("1.5") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_instance("recourse-match v2 undirected\nn 1\n"),
                    InstanceVersionError);
    CHECK_THROWS_AS(parse_instance("garbage\n"), InstanceParseError);
    CHECK_THROWS_AS(parse_instance(""), InstanceParseError);
    CHECK_THROWS_AS(parse_instance("recourse-match v1 undirected\ne 0 1 0.5\n"),
                    InstanceParseError);  // edge before n
    CHECK_THROWS_AS(parse_instance("recourse-match v1 undirected\nn 2\nz 1\n"),
                    InstanceParseError);
    CHECK_THROWS_AS(
        parse_instance("recourse-match v1 undirected\nn 2\ne 0 1 0.5\ne 1 0 0.6\n"),
        InstanceValueError);  // duplicate edge
    CHECK_THROWS_AS(parse_instance("recourse-match v1 directed\nn 2\na 0 0 0.5\n"),
                    InstanceValueError);  // self-arc
}

TEST_CASE("parser accepts comments, CRLF and an omitted weight") {
    std::string text =
        "# a comment\r\n"
        "recourse-match v1 undirected\r\n"
        "# meta origin test\r\n"
        "n 2\r\n"
        "e 0 1 0.25\r\n";
    InstanceFile file = parse_instance(text);
    CHECK(file.graph().edge(0).weight == 2.0);
    CHECK(file.graph().edge(0).fail_prob == 0.25);
    REQUIRE(file.provenance.size() == 1);
    CHECK(file.provenance[0] == std::pair<std::string, std::string>{"origin", "test"});
}

TEST_CASE("to_failure_graph folds directed payloads on request") {
    InstanceFile file;
    file.payload = build_directed(2, {0.1, 0.2}, {{0, 1, 0.3}, {1, 0, 0.4}});
    CHECK(to_failure_graph(file, FoldMode::AsWritten).edge(0).fail_prob ==
          doctest::Approx(0.0024));
    CHECK(to_failure_graph(file, FoldMode::Complement).edge(0).fail_prob ==
          doctest::Approx(0.6976));

    InstanceFile plain;
    plain.payload = gen_cycle(4, 0.5);
    CHECK(to_failure_graph(plain).edge_count() == 4);
}
