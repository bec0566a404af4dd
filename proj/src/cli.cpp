#include "pathseeker/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathseeker/agent.hpp"
#include "pathseeker/chat_client.hpp"
#include "pathseeker/eval.hpp"
#include "pathseeker/graph.hpp"
#include "pathseeker/relevance.hpp"
#include "pathseeker/run_config.hpp"
#include "pathseeker/search_api.hpp"
#include "pathseeker/service.hpp"
#include "pathseeker/subgraph.hpp"

namespace pathseeker {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitModel = 3;

/// Flag combinations CLI11 cannot express (conditionally required options).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GraphArgs {
    std::string entries;
    std::string triples;
};

struct ModelArgs {
    std::string base_url;
    std::string model_name;
    std::string api_key_env = "PATHSEEKER_API_KEY";
    std::string script_path;
    std::string cache_dir;
    bool replay_only = false;
    double temperature = 0.0;
    std::int64_t seed = -1;  // negative -> unset
};

struct AgentArgs {
    std::size_t max_steps = 15;
    std::size_t default_n = 20;
    unsigned hops = 2;
    bool no_remove_seen = false;
    bool no_dfs_order = false;
    bool no_triple_to_text = false;
    bool no_local_search = false;
    bool no_final_reasoner = false;

    AgentConfig to_config(const ModelArgs& model) const {
        AgentConfig config;
        config.max_steps = max_steps;
        config.default_n = default_n;
        config.hops = hops;
        config.toggles.remove_seen = !no_remove_seen;
        config.toggles.dfs_order = !no_dfs_order;
        config.toggles.triple_to_text = !no_triple_to_text;
        config.toggles.local_search = !no_local_search;
        config.toggles.final_reasoner = !no_final_reasoner;
        config.sampling.temperature = model.temperature;
        if (model.seed >= 0) config.sampling.seed = static_cast<std::uint64_t>(model.seed);
        return config;
    }
};

void add_graph_options(CLI::App* cmd, GraphArgs& args, bool required = true) {
    auto* entries = cmd->add_option("--entries", args.entries, "entries JSONL file");
    auto* triples = cmd->add_option("--triples", args.triples, "triples JSONL file");
    if (required) {
        entries->required();
        triples->required();
    }
}

void add_model_options(CLI::App* cmd, ModelArgs& args) {
    cmd->add_option("--base-url", args.base_url, "chat-completion endpoint base URL");
    cmd->add_option("--model", args.model_name, "model name sent with each request");
    cmd->add_option("--api-key-env", args.api_key_env,
                    "environment variable holding the API key")
        ->capture_default_str();
    cmd->add_option("--script", args.script_path,
                    "JSON array of canned responses served in order instead of a live model");
    cmd->add_option("--cache", args.cache_dir, "disk cache directory for model responses");
    cmd->add_flag("--replay-only", args.replay_only,
                  "serve strictly from --cache; a cache miss is an error");
    cmd->add_option("--temperature", args.temperature, "sampling temperature")
        ->capture_default_str();
    cmd->add_option("--seed", args.seed, "sampling seed (omit for unseeded)");
}

void add_agent_options(CLI::App* cmd, AgentArgs& args) {
    cmd->add_option("--max-steps", args.max_steps, "exploration step budget")
        ->capture_default_str();
    cmd->add_option("--default-n", args.default_n, "target subgraph size per search")
        ->capture_default_str();
    cmd->add_option("--hops", args.hops, "local search radius")->capture_default_str();
    cmd->add_flag("--no-remove-seen", args.no_remove_seen, "re-emit already seen pathways");
    cmd->add_flag("--no-dfs-order", args.no_dfs_order, "skip depth-first arrangement");
    cmd->add_flag("--no-triple-to-text", args.no_triple_to_text,
                  "render bare triple indices instead of text");
    cmd->add_flag("--no-local-search", args.no_local_search, "refuse local searches");
    cmd->add_flag("--no-final-reasoner", args.no_final_reasoner,
                  "take the final answer from the last turn instead of a closing pass");
}

std::vector<std::string> load_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open script file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
        throw std::runtime_error("script file must be a JSON array of strings: " + path);
    }
    std::vector<std::string> responses;
    for (const auto& item : doc) {
        if (!item.is_string()) {
            throw std::runtime_error("script file must be a JSON array of strings: " + path);
        }
        responses.push_back(item.get<std::string>());
    }
    return responses;
}

/// Builds the configured client chain: scripted or HTTP upstream, optional
/// disk cache on top. Returns null when nothing is configured.
std::shared_ptr<ChatClient> build_client(const ModelArgs& args) {
    std::shared_ptr<ChatClient> upstream;
    if (!args.script_path.empty()) {
        upstream = std::make_shared<ScriptedClient>(load_script(args.script_path));
    } else if (!args.base_url.empty()) {
        HttpEndpoint endpoint;
        endpoint.base_url = args.base_url;
        endpoint.model = args.model_name;
        if (const char* key = std::getenv(args.api_key_env.c_str())) endpoint.api_key = key;
        upstream = std::make_shared<HttpChatClient>(endpoint);
    }
    if (!args.cache_dir.empty()) {
        return std::make_shared<CachingClient>(upstream, args.cache_dir, args.replay_only);
    }
    return upstream;
}

std::shared_ptr<ChatClient> require_client(const ModelArgs& args) {
    auto client = build_client(args);
    if (!client) {
        throw UsageError(
            "no model configured: pass --script, --base-url, or --cache with --replay-only");
    }
    return client;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        if (content.empty() || content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << content;
    if (content.empty() || content.back() != '\n') out << '\n';
}

RunConfig make_run_config(const GraphArgs& graph, const ModelArgs& model, const AgentArgs& agent,
                          const std::string& mode, int shots, std::size_t repeats,
                          std::size_t workers, const std::string& output) {
    RunConfig config;
    config.entries_path = graph.entries;
    config.triples_path = graph.triples;
    config.base_url = model.base_url;
    config.model = model.model_name;
    config.api_key_env = model.api_key_env;
    config.script_path = model.script_path;
    config.cache_dir = model.cache_dir;
    config.replay_only = model.replay_only;
    config.agent = agent.to_config(model);
    config.mode = mode;
    config.shots = shots;
    config.repeats = repeats;
    config.workers = workers;
    config.output_path = output;
    return config;
}

int run_ingest(const GraphArgs& args) {
    const PathwayGraph graph = PathwayGraph::load_files(args.entries, args.triples);
    const GraphStats stats = graph.stats();
    std::cout << "entries=" << stats.entries << " triples=" << stats.triples
              << " processes=" << stats.processes << "\n";
    return kExitOk;
}

int run_query(const GraphArgs& args, const std::string& kind, const std::string& q,
              std::int64_t n, std::int64_t anchor, unsigned hops) {
    const PathwayGraph graph = PathwayGraph::load_files(args.entries, args.triples);
    const RelevanceIndex index(graph);
    const Query query = Query::from_text(q);

    if (kind == "node" || kind == "edge" || kind == "triple") {
        const std::size_t top_k = n < 0 ? kDefaultTopK : static_cast<std::size_t>(n);
        std::vector<SearchHit> hits;
        if (kind == "node") {
            hits = search_node(graph, index, query, top_k);
        } else if (kind == "edge") {
            hits = search_edge(graph, index, query, top_k);
        } else {
            hits = search_triple(graph, index, query, top_k);
        }
        for (const SearchHit& hit : hits) std::cout << hit_line(hit) << "\n";
        std::cerr << "hits=" << hits.size() << "\n";
        return kExitOk;
    }

    const std::size_t target = n < 0 ? std::size_t{20} : static_cast<std::size_t>(n);
    SubgraphResult result;
    if (kind == "subgraph") {
        result = search_subgraph(graph, index, query, target);
    } else {  // neighbors
        if (anchor < 0) throw UsageError("--anchor is required for neighbors queries");
        if (static_cast<std::size_t>(anchor) >= graph.triple_count()) {
            std::cerr << "unknown anchor " << anchor << "\n";
            return kExitData;
        }
        result = neighbor_subgraph(graph, index, static_cast<TripleId>(anchor), query, target,
                                   hops);
    }
    for (const std::string& line : subgraph_lines(graph, index, query, result)) {
        std::cout << line << "\n";
    }
    std::cerr << "size=" << result.size() << " objective=" << format_score(result.objective)
              << "\n";
    return kExitOk;
}

int run_agent_cmd(const GraphArgs& graph_args, const ModelArgs& model_args,
                  const AgentArgs& agent_args, const std::string& question,
                  const std::string& tasks_path, const std::string& mode_name,
                  const std::string& output) {
    if (question.empty() && tasks_path.empty()) {
        throw UsageError("pass --question or --tasks");
    }
    const auto client = require_client(model_args);
    const AgentConfig config = agent_args.to_config(model_args);
    const PathwayGraph graph = PathwayGraph::load_files(graph_args.entries, graph_args.triples);
    const RelevanceIndex index(graph);

    if (!question.empty()) {
        const AnswerMode mode =
            mode_name == "open_ended" ? AnswerMode::open_ended : AnswerMode::true_false;
        Trajectory trajectory =
            run_agent(TaskInstruction::make(question, mode), graph, index, config, *client);
        trajectory.task_id = "cli";
        write_output(output, trajectory_to_json(trajectory, config));
        if (trajectory.errored) {
            std::cerr << "model error: " << trajectory.error << "\n";
            return kExitModel;
        }
        return kExitOk;
    }

    const std::vector<TaskRecord> tasks = load_tasks_file(tasks_path);
    const std::filesystem::path out_dir = output.empty() ? "agent-runs" : output;
    std::filesystem::create_directories(out_dir);
    bool any_errored = false;
    for (const TaskRecord& task : tasks) {
        Trajectory trajectory = run_agent(TaskInstruction::make(task.question, task.answer_mode),
                                          graph, index, config, *client);
        trajectory.task_id = task.id;
        const std::filesystem::path path = out_dir / (task.id + ".json");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write: " + path.string());
        out << trajectory_to_json(trajectory, config) << "\n";
        any_errored = any_errored || trajectory.errored;
        std::cout << task.id << "\t" << (trajectory.errored ? "errored" : "ok") << "\n";
    }
    return any_errored ? kExitModel : kExitOk;
}

int run_eval_cmd(const GraphArgs& graph_args, const ModelArgs& model_args,
                 const AgentArgs& agent_args, const std::string& tasks_path,
                 const std::string& mode_name, int shots, std::size_t repeats,
                 std::size_t workers, const std::string& judge_script,
                 const std::string& output, bool table) {
    EvalOptions options;
    options.mode = mode_name == "cot" ? EvalOptions::Mode::cot : EvalOptions::Mode::agent;
    options.shots = shots;
    options.workers = workers;
    options.agent = agent_args.to_config(model_args);

    std::optional<PathwayGraph> graph;
    std::optional<RelevanceIndex> index;
    if (options.mode == EvalOptions::Mode::agent) {
        if (graph_args.entries.empty() || graph_args.triples.empty()) {
            throw UsageError("agent mode needs --entries and --triples");
        }
        graph.emplace(PathwayGraph::load_files(graph_args.entries, graph_args.triples));
        index.emplace(*graph);
    }

    const auto client = require_client(model_args);
    std::shared_ptr<ChatClient> judge;
    if (!judge_script.empty()) judge = std::make_shared<ScriptedClient>(load_script(judge_script));

    const std::vector<TaskRecord> tasks = load_tasks_file(tasks_path);
    const EvalReport report =
        run_eval(tasks, graph ? &*graph : nullptr, index ? &*index : nullptr, options, *client,
                 judge.get());

    const RunConfig run_config = make_run_config(graph_args, model_args, agent_args, mode_name,
                                                 shots, repeats, workers, output);
    nlohmann::ordered_json out_json;
    out_json["run_config"] = nlohmann::ordered_json::parse(run_config_to_json(run_config));
    out_json.update(nlohmann::ordered_json::parse(report_to_json(report, options)));
    write_output(output, out_json.dump(2));
    if (table) std::cerr << report_to_table(report);

    if (report.task_count > 0 && report.errored == report.task_count) return kExitModel;
    return kExitOk;
}

int run_serve(const GraphArgs& graph_args, const ModelArgs& model_args,
              const AgentArgs& agent_args, const std::string& host, int port,
              std::size_t workers) {
    const PathwayGraph graph = PathwayGraph::load_files(graph_args.entries, graph_args.triples);
    const RelevanceIndex index(graph);
    const auto client = build_client(model_args);  // null -> /agent/run replies 503

    ServiceDeps deps;
    deps.graph = &graph;
    deps.index = &index;
    deps.model = client.get();
    deps.agent = agent_args.to_config(model_args);
    deps.agent_workers = workers;
    return serve_forever(deps, host, port) ? kExitOk : kExitData;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv) {
    CLI::App app{"pathway-graph retrieval, exploration agent, and evaluation toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI file (sections per subcommand)");

    GraphArgs graph_args;
    ModelArgs model_args;
    AgentArgs agent_args;
    std::function<int()> action;

    auto* ingest = app.add_subcommand("ingest", "validate and index a graph, print its stats");
    add_graph_options(ingest, graph_args);
    ingest->callback([&] { action = [&] { return run_ingest(graph_args); }; });

    auto* query = app.add_subcommand("query", "search a loaded graph from the command line");
    static const std::vector<std::string> kQueryKinds = {"node", "edge", "triple", "subgraph",
                                                         "neighbors"};
    std::string query_kind;
    std::string query_text;
    std::int64_t query_n = -1;
    std::int64_t query_anchor = -1;
    unsigned query_hops = 2;
    query->add_option("kind", query_kind, "node|edge|triple|subgraph|neighbors")
        ->required()
        ->check(CLI::IsMember(kQueryKinds));
    add_graph_options(query, graph_args);
    query->add_option("--q", query_text, "query text")->required();
    query->add_option("--n", query_n, "result count (10 for item searches, 20 for subgraphs)");
    query->add_option("--anchor", query_anchor, "anchor triple index for neighbors");
    query->add_option("--hops", query_hops, "neighborhood radius for neighbors")
        ->capture_default_str();
    query->callback([&] {
        action = [&] {
            return run_query(graph_args, query_kind, query_text, query_n, query_anchor,
                             query_hops);
        };
    });

    auto* agent = app.add_subcommand("agent", "run the exploration agent on one or many tasks");
    std::string agent_question;
    std::string agent_tasks;
    std::string agent_mode = "true_false";
    std::string agent_out;
    add_graph_options(agent, graph_args);
    add_model_options(agent, model_args);
    add_agent_options(agent, agent_args);
    auto* q_opt = agent->add_option("--question", agent_question, "one question to explore");
    auto* t_opt = agent->add_option("--tasks", agent_tasks, "task JSONL file");
    q_opt->excludes(t_opt);
    agent->add_option("--mode", agent_mode, "answer mode for --question")
        ->check(CLI::IsMember({"true_false", "open_ended"}))
        ->capture_default_str();
    agent->add_option("--out", agent_out,
                      "trajectory destination: file for --question, directory for --tasks");
    agent->callback([&] {
        action = [&] {
            return run_agent_cmd(graph_args, model_args, agent_args, agent_question, agent_tasks,
                                 agent_mode, agent_out);
        };
    });

    auto* eval = app.add_subcommand("eval", "score tasks with the agent or a CoT baseline");
    std::string eval_tasks;
    std::string eval_mode = "agent";
    int eval_shots = 0;
    std::size_t eval_repeats = 5;
    std::size_t eval_workers = 4;
    std::string eval_judge_script;
    std::string eval_out;
    bool eval_table = false;
    add_graph_options(eval, graph_args, /*required=*/false);
    add_model_options(eval, model_args);
    add_agent_options(eval, agent_args);
    eval->add_option("--tasks", eval_tasks, "task JSONL file")->required();
    eval->add_option("--mode", eval_mode, "agent | cot")
        ->check(CLI::IsMember({"agent", "cot"}))
        ->capture_default_str();
    eval->add_option("--shots", eval_shots, "worked examples for cot (0 or 2)")
        ->check(CLI::IsMember(std::vector<int>{0, 2}))
        ->capture_default_str();
    eval->add_option("--repeats", eval_repeats, "samples per task for stability analyses")
        ->capture_default_str();
    eval->add_option("--workers", eval_workers, "parallel tasks")->capture_default_str();
    eval->add_option("--judge-script", eval_judge_script,
                     "canned judge responses for open-ended grading");
    eval->add_option("--out", eval_out, "report file (default stdout)");
    eval->add_flag("--table", eval_table, "print the report table to stderr");
    eval->callback([&] {
        action = [&] {
            return run_eval_cmd(graph_args, model_args, agent_args, eval_tasks, eval_mode,
                                eval_shots, eval_repeats, eval_workers, eval_judge_script,
                                eval_out, eval_table);
        };
    });

    auto* serve = app.add_subcommand("serve", "expose the graph and agent over HTTP");
    std::string serve_host = "127.0.0.1";
    int serve_port = 8080;
    std::size_t serve_workers = 4;
    add_graph_options(serve, graph_args);
    add_model_options(serve, model_args);
    add_agent_options(serve, agent_args);
    serve->add_option("--host", serve_host, "bind address")->capture_default_str();
    serve->add_option("--port", serve_port, "bind port")->capture_default_str();
    serve->add_option("--agent-workers", serve_workers, "concurrent /agent/run sessions")
        ->capture_default_str();
    serve->callback([&] {
        action = [&] {
            return run_serve(graph_args, model_args, agent_args, serve_host, serve_port,
                             serve_workers);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ChatError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace pathseeker
