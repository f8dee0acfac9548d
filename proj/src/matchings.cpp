#include "rmatch/matchings.hpp"

namespace rmatch {

std::uint64_t count_matchings(const FailureGraph& g, const EdgeSet& active) {
    std::uint64_t n = 0;
    for_each_matching(g, active, [&](const Matching&) {
        ++n;
        return true;
    });
    return n;
}

std::pair<Matching, double> best_static_matching(const FailureGraph& g,
                                                 const EdgeSet& active) {
    Matching best(g.empty_set());
    double best_value = 0.0;
    bool first = true;
    for_each_matching(g, active, [&](const Matching& m) {
        double value = 0.0;
        m.edges().for_each([&](std::size_t e) {
            value += g.edge(e).weight * (1.0 - g.edge(e).fail_prob);
        });
        if (first || value > best_value) {
            best = m;
            best_value = value;
            first = false;
        }
        return true;
    });
    return {std::move(best), best_value};
}

}  // namespace rmatch
