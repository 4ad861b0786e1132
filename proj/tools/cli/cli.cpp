#include "cli/cli.hpp"

#include "rpkt/api_service.hpp"
#include "rpkt/config.hpp"
#include "rpkt/engine.hpp"
#include "rpkt/error.hpp"
#include "rpkt/graph_export.hpp"
#include "rpkt/learning_path.hpp"
#include "rpkt/log.hpp"
#include "rpkt/session_store.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace rpkt::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Io {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

struct CommonOptions {
    std::string config;
    std::string oracle;
    std::string data_dir;
};

struct AskOptions {
    std::string question;
    std::string level = "undergraduate";
    int max_depth = kDefaultMaxDepth;
    std::string script;
    std::string out_dir = "rpkt-out";
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error(ErrorCode::StorageFailure, "cannot write " + path.string());
}

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ServiceConfig resolve_config(const CommonOptions& opts) {
    ServiceConfig cfg = opts.config.empty() ? ServiceConfig{} : load_config(opts.config);
    if (!opts.oracle.empty()) apply_oracle_spec(cfg, opts.oracle);
    if (!opts.data_dir.empty()) cfg.data_dir = opts.data_dir;
    apply_environment(cfg);
    return cfg;
}

std::map<std::string, bool> load_script(const fs::path& path) {
    json doc = json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorCode::InvalidArgument, "script " + path.string() + " must be a JSON object");
    }
    std::map<std::string, bool> answers;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_boolean()) throw Error(ErrorCode::InvalidArgument, "script value for '" + key + "' is not a boolean");
        const std::string norm = normalized_key(key);
        if (norm.empty()) throw Error(ErrorCode::InvalidArgument, "script has an empty concept key");
        answers[norm] = value.get<bool>();
    }
    return answers;
}

void write_outputs(const Session& session, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::StorageFailure, "cannot create " + dir.string() + ": " + ec.message());
    const PathEntry path = build_path(session);
    const GraphDoc graph = export_graph(session);
    write_file(dir / "path.txt", render_path_text(path));
    write_file(dir / "path.json", path_to_json(path).dump(2) + "\n");
    write_file(dir / "graph.dot", render_dot(graph));
    write_file(dir / "graph.json", graph_to_json(graph).dump(2) + "\n");
    write_file(dir / "session.json", SessionStore::to_document(session).dump(2) + "\n");
}

void print_outcome(const AssessmentOutcome& outcome, const TraceTree& tree, std::ostream& out) {
    for (const auto& n : outcome.new_nodes) {
        out << "  + " << tree.concept_for(n.subject).display_label << " [L" << n.depth << "]\n";
    }
    for (const auto& n : outcome.duplicate_nodes) {
        out << "  = " << tree.concept_for(n.subject).display_label << " [L" << n.depth << "] already listed\n";
    }
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Returns false when the user quits before the session completes.
bool interactive_loop(TraceEngine& engine, Session& session, SessionStore& store, Io& io) {
    while (true) {
        const auto pending = pending_assessments(session);
        if (pending.empty()) return true;
        io.out << "\nPending concepts:\n";
        for (std::size_t i = 0; i < pending.size(); ++i) {
            io.out << "  " << (i + 1) << ". " << pending[i].subject.display_label << " [L" << pending[i].depth
                   << "]\n";
        }
        io.out << "Choose a concept (1-" << pending.size() << ", q to quit): " << std::flush;
        std::string line;
        if (!std::getline(io.in, line)) return false;
        line = trim(line);
        if (line == "q" || line == "quit") return false;
        std::size_t choice = 0;
        try {
            choice = std::stoul(line);
        } catch (const std::exception&) {
            choice = 0;
        }
        if (choice < 1 || choice > pending.size()) {
            io.out << "Not a valid choice.\n";
            continue;
        }
        const PendingItem& item = pending[choice - 1];
        std::optional<bool> known;
        while (!known) {
            io.out << "Do you know \"" << item.subject.display_label << "\"? [y/n]: " << std::flush;
            if (!std::getline(io.in, line)) return false;
            line = trim(line);
            if (line == "y" || line == "Y" || line == "yes") known = true;
            else if (line == "n" || line == "N" || line == "no") known = false;
        }
        AssessmentOutcome outcome;
        try {
            outcome = engine.submit_assessment(session, item.subject.id.key(), *known);
        } catch (const Error&) {
            store.save(session);
            throw;
        }
        store.save(session);
        print_outcome(outcome, session.tree, io.out);
    }
}

int finish(const Session& session, const fs::path& out_dir, Io& io) {
    write_outputs(session, out_dir);
    io.out << "\nLearning path:\n" << render_path_text(build_path(session));
    io.out << "Wrote path.txt, path.json, graph.dot, graph.json, session.json to " << out_dir.string() << "\n";
    return kOk;
}

int cmd_ask(const AskOptions& ask, const CommonOptions& common, Io& io) {
    const ServiceConfig cfg = resolve_config(common);
    auto level = parse_education_level(ask.level);
    if (!level) throw Error(ErrorCode::InvalidArgument, "unknown education level '" + ask.level + "'");

    std::optional<std::map<std::string, bool>> script;
    std::string script_text;
    if (!ask.script.empty()) {
        script_text = read_file(ask.script);
        script = load_script(ask.script);
    }
    auto oracle = make_oracle(cfg);

    EngineOptions engine_opts;
    if (script) {
        // Scripted runs must be reproducible byte for byte, so the id and
        // the clock derive from the inputs instead of the environment.
        std::string seed = ask.question + '\n' + std::string(to_string(*level)) + '\n' +
                           std::to_string(ask.max_depth) + '\n' + script_text + '\n';
        seed += cfg.oracle_mode == "fixture" ? read_file(cfg.fixture_path) : cfg.remote.base_url + cfg.remote.model;
        const std::string id = "s" + fnv1a_hex(seed);
        engine_opts.id_generator = [id] { return id; };
        engine_opts.clock = make_step_clock(0, 1);
    }
    TraceEngine engine(*oracle, engine_opts);
    SessionStore store(cfg.data_dir);

    Session session = engine.start_session({ask.question, *level, ask.max_depth});
    store.save(session);
    io.out << "Session " << session.session_id << ": " << session.question << "\n";
    if (!session.analysis.understanding.empty()) io.out << "Understanding: " << session.analysis.understanding << "\n";
    if (!session.analysis.importance.empty()) io.out << "Importance: " << session.analysis.importance << "\n";

    if (!script) {
        if (!interactive_loop(engine, session, store, io)) {
            io.out << "\nSession " << session.session_id << " saved; continue with: rpkt resume "
                   << session.session_id << "\n";
            return kOk;
        }
        return finish(session, ask.out_dir, io);
    }

    while (true) {
        const auto pending = pending_assessments(session);
        if (pending.empty()) break;
        const PendingItem& item = pending.front();
        const std::string key = item.subject.id.key();
        bool known = true;
        if (auto it = script->find(key); it != script->end()) {
            known = it->second;
        } else {
            log_warning("'" + key + "' is not in the script; assuming known");
        }
        io.out << (known ? "  known   " : "  unknown ") << item.subject.display_label << " [L" << item.depth
               << "]\n";
        try {
            engine.submit_assessment(session, key, known);
        } catch (const Error&) {
            store.save(session);
            throw;
        }
        store.save(session);
    }

    std::vector<std::string> unsurfaced;
    for (const auto& [key, value] : *script) {
        auto primary = session.tree.primary_of(ConceptId::from_key(key));
        if (!primary || *primary == session.tree.root().node_id) unsurfaced.push_back(key);
    }
    if (!unsurfaced.empty()) {
        io.err << "rpkt: script names concepts that never surfaced:";
        for (const auto& k : unsurfaced) io.err << " '" << k << "'";
        io.err << "\n";
        return kUnsurfacedConcept;
    }
    return finish(session, ask.out_dir, io);
}

int cmd_resume(const std::string& id, const std::string& out_dir, const CommonOptions& common, Io& io) {
    ServiceConfig cfg = resolve_config(common);
    SessionStore store(cfg.data_dir);
    Session session = store.load(id);
    if (is_complete(session)) {
        io.out << render_path_text(build_path(session));
        return kOk;
    }
    if (common.oracle.empty() && common.config.empty()) {
        throw Error(ErrorCode::InvalidArgument, "session is still open; pass --oracle or --config to continue it");
    }
    auto oracle = make_oracle(cfg);
    TraceEngine engine(*oracle);
    if (!outstanding_expansions(session).empty()) {
        engine.retry_expansions(session);
        store.save(session);
    }
    if (!interactive_loop(engine, session, store, io)) {
        io.out << "\nSession " << session.session_id << " saved.\n";
        return kOk;
    }
    return finish(session, out_dir, io);
}

int cmd_sessions(const CommonOptions& common, Io& io) {
    ServiceConfig cfg = resolve_config(common);
    SessionStore store(cfg.data_dir);
    io.out << std::left << std::setw(20) << "SESSION" << std::setw(11) << "PHASE" << "QUESTION\n";
    for (const auto& s : store.list()) {
        io.out << std::left << std::setw(20) << s.session_id << std::setw(11) << to_string(s.phase) << s.question
               << "\n";
    }
    return kOk;
}

int cmd_export(const std::string& id, const std::string& format, const CommonOptions& common, Io& io) {
    ServiceConfig cfg = resolve_config(common);
    SessionStore store(cfg.data_dir);
    const GraphDoc graph = export_graph(store.load(id));
    if (format == "dot") io.out << render_dot(graph);
    else io.out << graph_to_json(graph).dump(2) << "\n";
    return kOk;
}

int cmd_serve(const std::string& host, int port, const std::string& cors, const CommonOptions& common, Io& io) {
    ServiceConfig cfg = resolve_config(common);
    if (!host.empty()) cfg.listen_host = host;
    if (port >= 0) cfg.listen_port = port;
    if (!cors.empty()) cfg.cors_origin = cors;
    auto oracle = make_oracle(cfg);
    SessionStore store(cfg.data_dir);
    ApiService service(*oracle, store, {cfg.cors_origin, {}});
    ApiServer server(service);
    const int bound = server.bind(cfg.listen_host, cfg.listen_port);
    io.out << "rpkt listening on http://" << cfg.listen_host << ":" << bound << " (oracle: " << oracle->mode()
           << ")\n"
           << std::flush;
    server.listen();
    return kOk;
}

int exit_code_for(ErrorCode code) {
    if (is_oracle_error(code)) return kOracleFailure;
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::NotFound:
        case ErrorCode::EmptyQuestion:
        case ErrorCode::EmptyLabel:
        case ErrorCode::UnknownConcept:
            return kBadArguments;
        default:
            return kFailure;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Io io{in, out, err};
    ScopedLogSink sink([&err](LogLevel level, std::string_view message) {
        if (level == LogLevel::Warning) err << "rpkt: warning: " << message << "\n";
        else if (level == LogLevel::Error) err << "rpkt: error: " << message << "\n";
    });

    CLI::App app{"Recursive prerequisite knowledge tracing", "rpkt"};
    app.require_subcommand(1);

    CommonOptions common;
    auto add_common = [&common](CLI::App* sub, bool with_oracle) {
        sub->add_option("--config", common.config, "JSON config file");
        sub->add_option("--data-dir", common.data_dir, "Session store directory");
        if (with_oracle) sub->add_option("--oracle", common.oracle, "fixture:PATH or remote");
    };

    AskOptions ask;
    auto* ask_cmd = app.add_subcommand("ask", "Trace the prerequisites of a question");
    ask_cmd->add_option("question", ask.question, "Target question")->required();
    ask_cmd->add_option("--level", ask.level, "middle_school, high_school, undergraduate or graduate");
    ask_cmd->add_option("--max-depth", ask.max_depth, "Deepest prerequisite level to explore (1-6)");
    ask_cmd->add_option("--script", ask.script, "JSON answers file; enables scripted mode");
    ask_cmd->add_option("--out", ask.out_dir, "Directory for the output files");
    add_common(ask_cmd, true);

    std::string session_id;
    std::string resume_out = "rpkt-out";
    auto* resume_cmd = app.add_subcommand("resume", "Continue or print a stored session");
    resume_cmd->add_option("session_id", session_id)->required();
    resume_cmd->add_option("--out", resume_out, "Directory for the output files");
    add_common(resume_cmd, true);

    auto* sessions_cmd = app.add_subcommand("sessions", "List stored sessions");
    add_common(sessions_cmd, false);

    std::string format = "json";
    auto* export_cmd = app.add_subcommand("export", "Print the concept graph of a session");
    export_cmd->add_option("session_id", session_id)->required();
    export_cmd->add_option("--format", format)->check(CLI::IsMember({"dot", "json"}));
    add_common(export_cmd, false);

    std::string host;
    int port = -1;
    std::string cors;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
    serve_cmd->add_option("--host", host);
    serve_cmd->add_option("--port", port);
    serve_cmd->add_option("--cors-origin", cors);
    add_common(serve_cmd, true);

    std::vector<const char*> argv{"rpkt"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kBadArguments;
    }

    try {
        if (*ask_cmd) return cmd_ask(ask, common, io);
        if (*resume_cmd) return cmd_resume(session_id, resume_out, common, io);
        if (*sessions_cmd) return cmd_sessions(common, io);
        if (*export_cmd) return cmd_export(session_id, format, common, io);
        if (*serve_cmd) return cmd_serve(host, port, cors, common, io);
    } catch (const Error& e) {
        err << "rpkt: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "rpkt: " << e.what() << "\n";
        return kFailure;
    }
    return kBadArguments;
}

}  // namespace rpkt::cli
