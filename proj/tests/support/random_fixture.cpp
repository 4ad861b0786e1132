#include "random_fixture.hpp"

#include <algorithm>
#include <random>

namespace rpkt::testing {

GeneratedFixture random_fixture(std::uint64_t seed, const RandomFixtureParams& params) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto chance = [&rng](double p) { return std::bernoulli_distribution(p)(rng); };

    GeneratedFixture out;
    const int n = uniform(2, params.max_concepts);
    for (int i = 0; i < n; ++i) out.labels.push_back("Concept " + std::to_string(i));
    out.question = "Question " + std::to_string(seed);

    FixtureAnalysis analysis;
    analysis.match = "*";
    analysis.analysis.understanding = "generated";
    const int keys = uniform(1, std::min(n, 6));
    for (int i = 0; i < keys; ++i) analysis.analysis.key_concepts.push_back(Concept::from_label(out.labels[i]));
    out.graph.analyses.push_back(std::move(analysis));

    for (int i = 0; i < n; ++i) {
        const ConceptId id = ConceptId::normalize(out.labels[i]);
        if (chance(params.fundamental_probability)) {
            out.graph.fundamentals.insert(id);
            continue;
        }
        std::vector<Prerequisite> list;
        const int branching = uniform(0, params.max_branching);
        for (int b = 0; b < branching && i + 1 < n; ++b) {
            list.push_back({out.labels[uniform(i + 1, n - 1)], ""});
        }
        if (chance(params.cycle_probability) && !list.empty()) {
            list.back() = {out.labels[uniform(0, i)], ""};
        }
        // Concepts without an entry are fundamental in open mode, so an
        // empty list is simply left out.
        if (!list.empty()) out.graph.prerequisites[id] = std::move(list);
    }
    return out;
}

}  // namespace rpkt::testing
