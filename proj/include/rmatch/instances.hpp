#ifndef RMATCH_INSTANCES_HPP
#define RMATCH_INSTANCES_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rmatch/graph.hpp"

namespace rmatch {

/// Directed exchange pool: per-vertex and per-arc failure probabilities.
struct DirectedInstance {
    struct Arc {
        int from = 0;
        int to = 0;
        double fail_prob = 0.0;
    };

    int vertex_count = 0;
    std::vector<double> vertex_fail_prob;  // one entry per vertex
    std::vector<Arc> arcs;
};

/// Validates the invariants (no self-arcs, one arc per ordered pair,
/// probabilities in [0,1]) and normalizes arc order.
DirectedInstance build_directed(int vertex_count, std::vector<double> vertex_fail_prob,
                                std::vector<DirectedInstance::Arc> arcs);

enum class FoldMode {
    /// Edge fails iff all four components fail: p = p_i * p_j * p_ij * p_ji.
    AsWritten,
    /// Edge fails iff any component fails: p = 1 - (1-p_i)(1-p_j)(1-p_ij)(1-p_ji).
    Complement,
};

/// Collapses every opposite arc pair into one undirected edge with a
/// combined failure probability; all other arcs are dropped and isolated
/// vertices are retained.
FailureGraph fold_two_cycles(const DirectedInstance& d, FoldMode mode);

/// Constant probability, or uniform draws from [lo, hi].
struct ProbSpec {
    double lo = 0.0;
    double hi = 0.0;

    ProbSpec(double constant) : lo(constant), hi(constant) {}  // NOLINT(implicit)
    ProbSpec(double lo_, double hi_) : lo(lo_), hi(hi_) {}
    bool is_constant() const { return lo == hi; }
};

FailureGraph gen_cycle(int n, ProbSpec p, std::uint64_t seed = 0);
FailureGraph gen_path(int n, ProbSpec p, std::uint64_t seed = 0);
FailureGraph gen_complete(int n, ProbSpec p, std::uint64_t seed = 0);

/// Erdos-Renyi style: each vertex pair becomes an edge independently with
/// probability edge_density.
FailureGraph gen_random(int n, double edge_density, ProbSpec p, std::uint64_t seed);

/// One instance file: an undirected or directed payload plus optional
/// provenance lines.  Writing and re-reading a file reproduces the payload
/// bit-exactly (probabilities travel as 17-significant-digit decimals).
struct InstanceFile {
    static constexpr const char* kVersion = "recourse-match v1";

    std::variant<FailureGraph, DirectedInstance> payload;
    std::vector<std::pair<std::string, std::string>> provenance;  // key, value

    bool is_directed() const {
        return std::holds_alternative<DirectedInstance>(payload);
    }
    const FailureGraph& graph() const { return std::get<FailureGraph>(payload); }
    const DirectedInstance& directed() const {
        return std::get<DirectedInstance>(payload);
    }
};

/// Base for everything that can go wrong while reading an instance file;
/// carries the offending location.
struct InstanceIoError : std::runtime_error {
    InstanceIoError(const std::string& path, int line, const std::string& what);
    std::string path;
    int line;  // 0 when not tied to a line
};
struct InstanceParseError : InstanceIoError {
    using InstanceIoError::InstanceIoError;
};
struct InstanceVersionError : InstanceIoError {
    using InstanceIoError::InstanceIoError;
};
struct InstanceValueError : InstanceIoError {
    using InstanceIoError::InstanceIoError;
};

InstanceFile read_instance(const std::string& path);
void write_instance(const std::string& path, const InstanceFile& file);

InstanceFile parse_instance(const std::string& text, const std::string& path = "<string>");
std::string format_instance(const InstanceFile& file);

/// The payload as a solvable graph, folding a directed payload on demand.
FailureGraph to_failure_graph(const InstanceFile& file, FoldMode mode = FoldMode::AsWritten);

}  // namespace rmatch

#endif  // RMATCH_INSTANCES_HPP
