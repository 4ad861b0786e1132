#include "reference_trace.hpp"

#include <algorithm>
#include <cctype>

namespace rpkt::testing {

namespace {

// Generated labels are plain words and digits, so lowercasing is all the
// normalization they need.
std::string key_of(const std::string& label) {
    std::string out;
    for (char c : label) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

AnswerFn hashed_answers(std::uint64_t seed, double known_probability) {
    return [seed, known_probability](const std::string& key) {
        std::uint64_t h = seed;
        for (char c : key) h = mix(h ^ static_cast<unsigned char>(c));
        return static_cast<double>(h % 10000) / 10000.0 < known_probability;
    };
}

ReferenceTrace reference_trace(const FixtureGraph& fixture, const std::string& question, int max_depth,
                               const AnswerFn& answers) {
    std::map<std::string, std::vector<std::string>> prereqs;
    for (const auto& [id, list] : fixture.prerequisites) {
        std::vector<std::string> keys;
        for (const auto& p : list) {
            std::string k = key_of(p.label);
            if (k == id.key() || std::find(keys.begin(), keys.end(), k) != keys.end()) continue;
            keys.push_back(k);
        }
        if (keys.size() > 4) keys.resize(4);
        prereqs[id.key()] = keys;
    }
    std::set<std::string> fundamentals;
    for (const auto& f : fixture.fundamentals) fundamentals.insert(f.key());

    ReferenceTrace ref;
    const std::string root = key_of(question);
    ref.min_depth[root] = 0;

    std::vector<std::string> level{root};
    for (int depth = 0; !level.empty(); ++depth) {
        std::vector<std::string> next;
        for (const auto& c : level) {
            std::vector<std::string> children;
            if (depth == 0) {
                for (const auto& k : fixture.analyses.front().analysis.key_concepts) {
                    std::string key = key_of(k.display_label);
                    if (key != root && std::find(children.begin(), children.end(), key) == children.end()) {
                        children.push_back(key);
                    }
                }
            } else {
                if (ref.known.at(c)) continue;
                if (depth >= max_depth) continue;
                if (fundamentals.contains(c)) continue;
                auto it = prereqs.find(c);
                if (it == prereqs.end() || it->second.empty()) continue;
                ++ref.expansions;
                children = it->second;
            }
            for (const auto& child : children) {
                auto placed = ref.min_depth.find(child);
                if (placed != ref.min_depth.end() && placed->second <= depth) continue;
                ref.edges.insert({c, child});
                if (placed == ref.min_depth.end()) {
                    ref.min_depth[child] = depth + 1;
                    ref.known[child] = answers(child);
                    next.push_back(child);
                }
            }
        }
        level = std::move(next);
    }
    return ref;
}

bool respects_prerequisites(const std::vector<std::string>& sequence,
                            const std::set<std::pair<std::string, std::string>>& edges, std::string* why) {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < sequence.size(); ++i) pos.emplace(sequence[i], i);
    for (const auto& [dependent, prereq] : edges) {
        auto d = pos.find(dependent);
        auto p = pos.find(prereq);
        if (d == pos.end() || p == pos.end()) continue;
        if (p->second > d->second) {
            if (why) *why = "'" + prereq + "' comes after its dependent '" + dependent + "'";
            return false;
        }
    }
    return true;
}

}  // namespace rpkt::testing
