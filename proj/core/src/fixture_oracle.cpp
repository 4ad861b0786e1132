#include "rpkt/fixture_oracle.hpp"

#include "rpkt/error.hpp"

#include <fstream>
#include <sstream>

namespace rpkt {

using nlohmann::json;

namespace {

[[noreturn]] void bad_fixture(const std::string& why) {
    throw Error(ErrorCode::InvalidArgument, "fixture: " + why);
}

std::vector<Prerequisite> read_prereq_list(const json& list, const std::string& owner) {
    if (!list.is_array()) bad_fixture("prerequisites of '" + owner + "' must be an array");
    std::vector<Prerequisite> out;
    for (const auto& item : list) {
        if (item.is_string()) {
            out.push_back({item.get<std::string>(), {}});
        } else if (item.is_object() && item.contains("label") && item["label"].is_string()) {
            out.push_back({item["label"].get<std::string>(), item.value("rationale", std::string{})});
        } else {
            bad_fixture("bad prerequisite entry under '" + owner + "'");
        }
    }
    return out;
}

bool question_matches(const std::string& pattern, const std::string& question_key) {
    if (pattern == "*") return true;
    std::string key = normalized_key(pattern);
    return !key.empty() && question_key.find(key) != std::string::npos;
}

std::string join_labels(const std::vector<std::string>& labels) {
    std::ostringstream os;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0) os << (i + 1 == labels.size() ? (labels.size() > 2 ? ", and " : " and ") : ", ");
        os << labels[i];
    }
    return os.str();
}

}  // namespace

void FixtureGraph::validate() const {
    if (open_mode) return;
    for (const auto& [owner, list] : prerequisites) {
        for (const auto& p : list) {
            ConceptId id = ConceptId::normalize(p.label);
            if (!prerequisites.contains(id) && !fundamentals.contains(id)) {
                bad_fixture("closed fixture: '" + p.label + "' (under '" + owner.key() +
                            "') has no entry and is not fundamental");
            }
        }
    }
}

FixtureGraph FixtureGraph::from_json(const json& doc) {
    if (!doc.is_object()) bad_fixture("document must be an object");
    int version = doc.value("fixture_version", 0);
    if (version != kFixtureVersion) {
        bad_fixture("unsupported fixture_version " + std::to_string(version));
    }
    FixtureGraph g;
    try {
        g.open_mode = doc.value("open_mode", true);
        for (const auto& a : doc.value("analyses", json::array())) {
            std::vector<std::string> labels = a.at("key_concepts").get<std::vector<std::string>>();
            g.analyses.push_back({a.at("match").get<std::string>(),
                                  sanitize_analysis(a.value("understanding", std::string{}),
                                                    a.value("importance", std::string{}), labels)});
        }
        const json prereqs = doc.value("prerequisites", json::object());
        for (const auto& [label, list] : prereqs.items()) {
            g.prerequisites[ConceptId::normalize(label)] = read_prereq_list(list, label);
        }
        for (const auto& label : doc.value("fundamentals", json::array())) {
            g.fundamentals.insert(ConceptId::normalize(label.get<std::string>()));
        }
        for (const auto& e : doc.value("explanations", json::array())) {
            FixtureExplanation ex;
            ex.match = e.value("match", std::string("*"));
            for (const auto& u : e.at("unknown")) ex.unknown.insert(ConceptId::normalize(u.get<std::string>()));
            ex.text = e.at("text").get<std::string>();
            g.explanations.push_back(std::move(ex));
        }
    } catch (const json::exception& e) {
        bad_fixture(e.what());
    }
    g.validate();
    return g;
}

json FixtureGraph::to_json() const {
    json doc{{"fixture_version", kFixtureVersion}, {"open_mode", open_mode}};
    json analyses_json = json::array();
    for (const auto& a : analyses) {
        json labels = json::array();
        for (const auto& c : a.analysis.key_concepts) labels.push_back(c.display_label);
        analyses_json.push_back({{"match", a.match},
                                 {"understanding", a.analysis.understanding},
                                 {"importance", a.analysis.importance},
                                 {"key_concepts", labels}});
    }
    doc["analyses"] = analyses_json;
    json prereqs = json::object();
    for (const auto& [id, list] : prerequisites) {
        json arr = json::array();
        for (const auto& p : list) {
            if (p.rationale.empty()) {
                arr.push_back(p.label);
            } else {
                arr.push_back({{"label", p.label}, {"rationale", p.rationale}});
            }
        }
        prereqs[id.key()] = arr;
    }
    doc["prerequisites"] = prereqs;
    json fund = json::array();
    for (const auto& f : fundamentals) fund.push_back(f.key());
    doc["fundamentals"] = fund;
    json expl = json::array();
    for (const auto& e : explanations) {
        json unknown = json::array();
        for (const auto& u : e.unknown) unknown.push_back(u.key());
        expl.push_back({{"match", e.match}, {"unknown", unknown}, {"text", e.text}});
    }
    doc["explanations"] = expl;
    return doc;
}

FixtureGraph load_fixture(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read fixture " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) bad_fixture(path.string() + " is not valid JSON");
    return FixtureGraph::from_json(doc);
}

FixtureOracle::FixtureOracle(FixtureGraph graph) : graph_(std::move(graph)) { graph_.validate(); }

QuestionAnalysis FixtureOracle::analyze_question(std::string_view question, EducationLevel) {
    std::string key = normalized_key(question);
    for (const auto& a : graph_.analyses) {
        if (question_matches(a.match, key)) return a.analysis;
    }
    throw Error(ErrorCode::OracleFailure, "fixture has no analysis for '" + std::string(question) + "'");
}

ExtractionResult FixtureOracle::extract_candidates(const Concept& subject, const OracleRequestContext&) {
    if (graph_.fundamentals.contains(subject.id)) return ExtractionResult{{}, true};
    auto it = graph_.prerequisites.find(subject.id);
    if (it == graph_.prerequisites.end()) {
        if (graph_.open_mode) return ExtractionResult{{}, true};
        throw Error(ErrorCode::OracleFailure, "closed fixture has no entry for '" + subject.id.key() + "'");
    }
    return sanitize_extraction(subject.id, it->second, false);
}

std::string FixtureOracle::generate_explanation(const ExplanationRequest& request) {
    std::string key = normalized_key(request.question);
    std::set<ConceptId> unknown;
    for (const auto& item : request.unknown_ordered) unknown.insert(item.subject.id);
    for (const auto& e : graph_.explanations) {
        if (question_matches(e.match, key) && e.unknown == unknown) return e.text;
    }
    return compose_fallback_explanation(request);
}

std::string compose_fallback_explanation(const ExplanationRequest& request) {
    std::vector<std::string> known;
    for (const auto& c : request.known) known.push_back(c.display_label);

    std::ostringstream os;
    if (!known.empty()) {
        os << "Since you already understand " << join_labels(known) << ", we can build on that.\n";
    }
    if (request.unknown_ordered.empty()) {
        os << "\nYou have every prerequisite in place, so here is a direct answer to: "
           << request.question << '\n';
        return os.str();
    }
    for (std::size_t i = 0; i < request.unknown_ordered.size(); ++i) {
        os << "\nStep " << i + 1 << ": " << request.unknown_ordered[i].subject.display_label << '\n';
    }
    std::vector<std::string> unknown;
    for (const auto& item : request.unknown_ordered) unknown.push_back(item.subject.display_label);
    os << "\nPutting it together: " << join_labels(unknown) << " combine to answer \""
       << request.question << "\"\n";
    return os.str();
}

}  // namespace rpkt
