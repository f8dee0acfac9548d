#include "rmatch/instances.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rmatch/rng.hpp"

namespace rmatch {

namespace {

std::string fmt_prob(double p) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    return buf;
}

double draw_prob(const ProbSpec& p, SplitMix64& rng) {
    if (p.is_constant()) return p.lo;
    return p.lo + rng.next_double() * (p.hi - p.lo);
}

void check_prob_spec(const ProbSpec& p) {
    if (!(p.lo >= 0.0 && p.lo <= p.hi && p.hi <= 1.0))
        throw std::invalid_argument("probability range must satisfy 0 <= lo <= hi <= 1");
}

FailureGraph from_edge_pairs(int n, const std::vector<std::pair<int, int>>& pairs,
                             const ProbSpec& p, std::uint64_t seed) {
    check_prob_spec(p);
    SplitMix64 rng = SplitMix64::split(seed, 0);
    std::vector<EdgeSpec> edges;
    edges.reserve(pairs.size());
    for (auto [u, v] : pairs) edges.push_back({u, v, draw_prob(p, rng), 2.0});
    return build_graph(n, std::move(edges));
}

}  // namespace

DirectedInstance build_directed(int vertex_count, std::vector<double> vertex_fail_prob,
                                std::vector<DirectedInstance::Arc> arcs) {
    if (vertex_count < 0) throw std::invalid_argument("vertex_count must be nonnegative");
    if (static_cast<int>(vertex_fail_prob.size()) != vertex_count)
        throw std::invalid_argument("need one vertex failure probability per vertex");
    for (double p : vertex_fail_prob)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("vertex failure probability outside [0,1]");
    for (const auto& a : arcs) {
        if (a.from == a.to) throw std::invalid_argument("self-arc not allowed");
        if (a.from < 0 || a.from >= vertex_count || a.to < 0 || a.to >= vertex_count)
            throw std::invalid_argument("arc endpoint out of range");
        if (!(a.fail_prob >= 0.0 && a.fail_prob <= 1.0))
            throw std::invalid_argument("arc failure probability outside [0,1]");
    }
    std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    for (std::size_t i = 1; i < arcs.size(); ++i)
        if (arcs[i].from == arcs[i - 1].from && arcs[i].to == arcs[i - 1].to)
            throw std::invalid_argument("duplicate arc");
    DirectedInstance d;
    d.vertex_count = vertex_count;
    d.vertex_fail_prob = std::move(vertex_fail_prob);
    d.arcs = std::move(arcs);
    return d;
}

FailureGraph fold_two_cycles(const DirectedInstance& d, FoldMode mode) {
    std::map<std::pair<int, int>, double> arc_prob;
    for (const auto& a : d.arcs) arc_prob[{a.from, a.to}] = a.fail_prob;

    std::vector<EdgeSpec> edges;
    for (const auto& [key, p_fwd] : arc_prob) {
        auto [i, j] = key;
        if (i >= j) continue;  // handle each unordered pair once
        auto rev = arc_prob.find({j, i});
        if (rev == arc_prob.end()) continue;  // not a 2-cycle
        double pi = d.vertex_fail_prob[i];
        double pj = d.vertex_fail_prob[j];
        double p = mode == FoldMode::AsWritten
                       ? pi * pj * p_fwd * rev->second
                       : 1.0 - (1.0 - pi) * (1.0 - pj) * (1.0 - p_fwd) * (1.0 - rev->second);
        edges.push_back({i, j, p, 2.0});
    }
    return build_graph(d.vertex_count, std::move(edges));
}

FailureGraph gen_cycle(int n, ProbSpec p, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_cycle: need at least 2 vertices");
    std::vector<std::pair<int, int>> pairs;
    if (n == 2) {
        pairs.push_back({0, 1});
    } else {
        for (int i = 0; i < n; ++i) pairs.push_back({i, (i + 1) % n});
    }
    return from_edge_pairs(n, pairs, p, seed);
}

FailureGraph gen_path(int n, ProbSpec p, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_path: need at least 2 vertices");
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i + 1 < n; ++i) pairs.push_back({i, i + 1});
    return from_edge_pairs(n, pairs, p, seed);
}

FailureGraph gen_complete(int n, ProbSpec p, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_complete: need at least 2 vertices");
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    return from_edge_pairs(n, pairs, p, seed);
}

FailureGraph gen_random(int n, double edge_density, ProbSpec p, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("gen_random: vertex count must be nonnegative");
    if (!(edge_density >= 0.0 && edge_density <= 1.0))
        throw std::invalid_argument("gen_random: edge_density outside [0,1]");
    check_prob_spec(p);
    SplitMix64 rng = SplitMix64::split(seed, 0);
    std::vector<EdgeSpec> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.next_bernoulli(edge_density))
                edges.push_back({i, j, draw_prob(p, rng), 2.0});
    return build_graph(n, std::move(edges));
}

InstanceIoError::InstanceIoError(const std::string& path_, int line_, const std::string& what)
    : std::runtime_error(path_ + (line_ > 0 ? ":" + std::to_string(line_) : "") + ": " + what),
      path(path_),
      line(line_) {}

namespace {

struct Parser {
    const std::string& path;
    std::istringstream in;
    int line_no = 0;

    [[noreturn]] void fail_parse(const std::string& msg) const {
        throw InstanceParseError(path, line_no, msg);
    }
    [[noreturn]] void fail_value(const std::string& msg) const {
        throw InstanceValueError(path, line_no, msg);
    }
};

double parse_prob(Parser& p, std::istringstream& fields, const std::string& what) {
    double x;
    if (!(fields >> x)) p.fail_parse("missing " + what);
    if (!(x >= 0.0 && x <= 1.0))
        p.fail_value(what + " " + fmt_prob(x) + " outside [0,1]");
    return x;
}

}  // namespace

InstanceFile parse_instance(const std::string& text, const std::string& path) {
    Parser p{path, std::istringstream(text)};
    InstanceFile file;

    std::string line;
    bool directed = false;
    bool saw_header = false;
    int n = -1;
    std::vector<EdgeSpec> edges;
    std::set<std::pair<int, int>> seen_edges;
    std::vector<double> vertex_prob;
    std::vector<bool> vertex_seen;
    std::vector<DirectedInstance::Arc> arcs;
    std::set<std::pair<int, int>> seen_arcs;

    while (std::getline(p.in, line)) {
        ++p.line_no;
        if (line.size() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        std::string tag;
        if (!(fields >> tag)) continue;  // blank line

        if (tag[0] == '#') {
            std::string maybe_meta;
            if (tag == "#" && fields >> maybe_meta && maybe_meta == "meta") {
                std::string key, value;
                if (!(fields >> key)) p.fail_parse("meta line without a key");
                std::getline(fields, value);
                value.erase(0, value.find_first_not_of(' '));
                file.provenance.emplace_back(key, value);
            }
            continue;  // ordinary comment
        }

        if (!saw_header) {
            if (tag != "recourse-match") p.fail_parse("missing 'recourse-match v1' header");
            std::string version, kind;
            if (!(fields >> version >> kind) || version != "v1")
                throw InstanceVersionError(path, p.line_no,
                                           "unsupported version '" + version + "'");
            if (kind == "directed") {
                directed = true;
            } else if (kind != "undirected") {
                p.fail_parse("payload kind must be 'directed' or 'undirected'");
            }
            saw_header = true;
            continue;
        }

        if (tag == "n") {
            if (n >= 0) p.fail_parse("duplicate vertex count line");
            if (!(fields >> n) || n < 0) p.fail_parse("invalid vertex count");
            vertex_prob.assign(n, 0.0);
            vertex_seen.assign(n, false);
            continue;
        }
        if (n < 0) p.fail_parse("'n <vertex_count>' must precede '" + tag + "' lines");

        if (tag == "e" && !directed) {
            int u, v;
            if (!(fields >> u >> v)) p.fail_parse("edge line needs two endpoints");
            if (u == v) p.fail_value("self-loop on vertex " + std::to_string(u));
            if (u < 0 || v < 0 || u >= n || v >= n)
                p.fail_value("edge endpoint out of range");
            double prob = parse_prob(p, fields, "edge failure probability");
            double w = 2.0;
            if (double w_in; fields >> w_in) {
                if (!(w_in >= 0.0)) p.fail_value("negative edge weight");
                w = w_in;
            }
            auto key = std::minmax(u, v);
            if (!seen_edges.insert({key.first, key.second}).second)
                p.fail_value("duplicate edge {" + std::to_string(u) + "," +
                             std::to_string(v) + "}");
            edges.push_back({u, v, prob, w});
        } else if (tag == "v" && directed) {
            int i;
            if (!(fields >> i)) p.fail_parse("vertex line needs an index");
            if (i < 0 || i >= n) p.fail_value("vertex index out of range");
            if (vertex_seen[i]) p.fail_value("duplicate vertex line " + std::to_string(i));
            vertex_seen[i] = true;
            vertex_prob[i] = parse_prob(p, fields, "vertex failure probability");
        } else if (tag == "a" && directed) {
            int i, j;
            if (!(fields >> i >> j)) p.fail_parse("arc line needs two endpoints");
            if (i == j) p.fail_value("self-arc on vertex " + std::to_string(i));
            if (i < 0 || j < 0 || i >= n || j >= n) p.fail_value("arc endpoint out of range");
            double prob = parse_prob(p, fields, "arc failure probability");
            if (!seen_arcs.insert({i, j}).second)
                p.fail_value("duplicate arc (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
            arcs.push_back({i, j, prob});
        } else {
            p.fail_parse("unknown line tag '" + tag + "'");
        }
    }

    if (!saw_header) throw InstanceParseError(path, 0, "empty file");
    if (n < 0) throw InstanceParseError(path, 0, "missing 'n <vertex_count>' line");

    if (directed) {
        file.payload = build_directed(n, std::move(vertex_prob), std::move(arcs));
    } else {
        file.payload = build_graph(n, std::move(edges));
    }
    return file;
}

std::string format_instance(const InstanceFile& file) {
    std::ostringstream out;
    out << InstanceFile::kVersion << ' ' << (file.is_directed() ? "directed" : "undirected")
        << '\n';
    for (const auto& [key, value] : file.provenance)
        out << "# meta " << key << ' ' << value << '\n';
    if (file.is_directed()) {
        const auto& d = file.directed();
        out << "n " << d.vertex_count << '\n';
        for (int i = 0; i < d.vertex_count; ++i)
            out << "v " << i << ' ' << fmt_prob(d.vertex_fail_prob[i]) << '\n';
        for (const auto& a : d.arcs)
            out << "a " << a.from << ' ' << a.to << ' ' << fmt_prob(a.fail_prob) << '\n';
    } else {
        const auto& g = file.graph();
        out << "n " << g.vertex_count() << '\n';
        for (const auto& e : g.edges())
            out << "e " << e.u << ' ' << e.v << ' ' << fmt_prob(e.fail_prob) << ' '
                << fmt_prob(e.weight) << '\n';
    }
    return out.str();
}

InstanceFile read_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InstanceIoError(path, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str(), path);
}

void write_instance(const std::string& path, const InstanceFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InstanceIoError(path, 0, "cannot open file for writing");
    out << format_instance(file);
    if (!out) throw InstanceIoError(path, 0, "write failed");
}

FailureGraph to_failure_graph(const InstanceFile& file, FoldMode mode) {
    if (file.is_directed()) return fold_two_cycles(file.directed(), mode);
    return file.graph();
}

}  // namespace rmatch
