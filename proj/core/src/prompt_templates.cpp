#include "rpkt/prompts.hpp"

#include "rpkt/error.hpp"

#include <set>
#include <sstream>
#include <utility>

namespace rpkt::detail {
std::size_t prompt_table_size();
const std::pair<std::string_view, std::string_view>* prompt_table_data();
}  // namespace rpkt::detail

namespace rpkt::prompts {

std::string_view get(std::string_view name) {
    const auto* table = detail::prompt_table_data();
    for (std::size_t i = 0; i < detail::prompt_table_size(); ++i) {
        if (table[i].first == name) return table[i].second;
    }
    throw Error(ErrorCode::NotFound, "no prompt template '" + std::string(name) + "'");
}

std::vector<std::string_view> names() {
    std::vector<std::string_view> out;
    const auto* table = detail::prompt_table_data();
    for (std::size_t i = 0; i < detail::prompt_table_size(); ++i) out.push_back(table[i].first);
    return out;
}

std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values) {
    std::string out;
    std::set<std::string> used;
    std::size_t pos = 0;
    while (true) {
        std::size_t open = tmpl.find("{{", pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        std::size_t close = tmpl.find("}}", open + 2);
        if (close == std::string_view::npos) {
            throw Error(ErrorCode::InvalidArgument, "unterminated placeholder in prompt template");
        }
        out.append(tmpl.substr(pos, open - pos));
        std::string name(tmpl.substr(open + 2, close - open - 2));
        auto it = values.find(name);
        if (it == values.end()) {
            throw Error(ErrorCode::InvalidArgument, "no value for placeholder '" + name + "'");
        }
        out.append(it->second);
        used.insert(name);
        pos = close + 2;
    }
    for (const auto& [name, _] : values) {
        if (!used.contains(name)) {
            throw Error(ErrorCode::InvalidArgument, "template has no placeholder '" + name + "'");
        }
    }
    return out;
}

namespace {

std::string bullet_list(const std::vector<std::string>& items) {
    if (items.empty()) return "- (none)";
    std::ostringstream os;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) os << '\n';
        os << "- " << items[i];
    }
    return os.str();
}

}  // namespace

std::string analysis(std::string_view question, EducationLevel level) {
    return render(get(kAnalysis), {{"education_level", std::string(describe(level))},
                                   {"question", std::string(question)}});
}

std::string extraction(const Concept& subject, const OracleRequestContext& ctx) {
    std::ostringstream chain;
    for (std::size_t i = 0; i < ctx.ancestor_chain.size(); ++i) {
        if (i) chain << '\n';
        chain << i + 1 << ". " << ctx.ancestor_chain[i];
    }
    return render(get(kExtraction), {{"education_level", std::string(describe(ctx.education_level))},
                                     {"question", ctx.question},
                                     {"ancestor_chain", chain.str()},
                                     {"concept", subject.display_label}});
}

std::string explanation(const ExplanationRequest& request) {
    std::vector<std::string> known;
    for (const auto& c : request.known) known.push_back(c.display_label);

    std::map<std::string, std::string> values{
        {"education_level", std::string(describe(request.education_level))},
        {"question", request.question},
        {"known_list", bullet_list(known)}};
    if (request.unknown_ordered.empty()) return render(get(kExplanationMastered), values);

    std::ostringstream unknown;
    for (std::size_t i = 0; i < request.unknown_ordered.size(); ++i) {
        const auto& item = request.unknown_ordered[i];
        if (i) unknown << '\n';
        unknown << i + 1 << ". " << item.subject.display_label;
        if (item.status == Status::Unassessed) unknown << " (not yet assessed)";
    }
    values["unknown_list"] = unknown.str();
    return render(get(kExplanation), values);
}

std::string repair(std::string_view error) {
    return render(get(kRepair), {{"error", std::string(error)}});
}

}  // namespace rpkt::prompts
