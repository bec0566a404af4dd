#include "pathseeker/service.hpp"

#include <condition_variable>
#include <cstdio>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "pathseeker/search_api.hpp"
#include "pathseeker/subgraph.hpp"

namespace pathseeker {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// Bounds concurrent /agent/run sessions; search routes stay unthrottled
/// since they only read the immutable graph.
class Semaphore {
public:
    explicit Semaphore(std::size_t slots) : slots_(slots) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        ready_.wait(lock, [&] { return slots_ > 0; });
        --slots_;
    }

    void release() {
        {
            std::lock_guard lock(mutex_);
            ++slots_;
        }
        ready_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable ready_;
    std::size_t slots_;
};

void send_json(httplib::Response& res, int status, const ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, ordered_json{{"error", message}});
}

/// Parses the request body as a JSON object; replies 400 and returns
/// nullopt on malformed or non-object bodies.
std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
        send_error(res, 400, "body must be a JSON object");
        return std::nullopt;
    }
    return body;
}

/// The query field accepts a plain string or an array of keyword strings.
std::optional<Query> parse_query(const json& body, httplib::Response& res) {
    const auto it = body.find("query");
    if (it == body.end()) {
        send_error(res, 400, "missing field: query");
        return std::nullopt;
    }
    if (it->is_string()) return Query::from_text(it->get<std::string>());
    if (it->is_array()) {
        std::vector<std::string> keywords;
        for (const json& item : *it) {
            if (!item.is_string()) {
                send_error(res, 400, "query array elements must be strings");
                return std::nullopt;
            }
            keywords.push_back(item.get<std::string>());
        }
        return Query::from_keywords(keywords);
    }
    send_error(res, 400, "query must be a string or an array of strings");
    return std::nullopt;
}

/// Positive integer field with a default; 400 on wrong type or zero.
std::optional<std::size_t> parse_count(const json& body, const char* field,
                                       std::size_t fallback, httplib::Response& res) {
    const auto it = body.find(field);
    if (it == body.end()) return fallback;
    if (!it->is_number_unsigned() || it->get<std::size_t>() == 0) {
        send_error(res, 400, std::string(field) + " must be a positive integer");
        return std::nullopt;
    }
    return it->get<std::size_t>();
}

ordered_json hits_to_json(const std::vector<SearchHit>& hits, const char* id_field) {
    ordered_json results = ordered_json::array();
    for (const SearchHit& hit : hits) {
        results.push_back(ordered_json{
            {id_field, hit.id}, {"score", hit.score}, {"text", hit.rendered}});
    }
    return ordered_json{{"count", hits.size()}, {"results", std::move(results)}};
}

ordered_json subgraph_to_json(const PathwayGraph& graph, const RelevanceIndex& index,
                              const Query& query, const SubgraphResult& result) {
    ordered_json out;
    out["size"] = result.size();
    out["objective"] = result.objective;
    out["no_relevant_content"] = result.no_relevant_content;
    out["triples"] = result.triples;
    out["lines"] = subgraph_lines(graph, index, query, result);
    return out;
}

ordered_json action_to_json(const Action& action) {
    ordered_json out;
    switch (action.kind) {
        case ActionKind::global_search: out["kind"] = "global_search"; break;
        case ActionKind::local_search: out["kind"] = "local_search"; break;
        case ActionKind::finish: out["kind"] = "finish"; break;
    }
    if (action.kind != ActionKind::finish) out["keywords"] = action.keywords;
    if (action.kind == ActionKind::local_search) out["line_id"] = action.line_id;
    out["raw_text"] = action.raw_text;
    return out;
}

struct ServiceState {
    ServiceDeps deps;
    Semaphore agent_slots;

    explicit ServiceState(const ServiceDeps& d)
        : deps(d), agent_slots(d.agent_workers == 0 ? 1 : d.agent_workers) {}
};

void register_search_routes(httplib::Server& server, std::shared_ptr<ServiceState> state) {
    const auto item_route = [state](const char* kind) {
        return [state, kind](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req, res);
            if (!body) return;
            const auto query = parse_query(*body, res);
            if (!query) return;
            const auto n = parse_count(*body, "n", state->deps.top_k, res);
            if (!n) return;
            const PathwayGraph& graph = *state->deps.graph;
            const RelevanceIndex& index = *state->deps.index;
            std::vector<SearchHit> hits;
            const std::string which(kind);
            if (which == "node") {
                hits = search_node(graph, index, *query, *n);
                send_json(res, 200, hits_to_json(hits, "node"));
                return;
            }
            hits = which == "edge" ? search_edge(graph, index, *query, *n)
                                   : search_triple(graph, index, *query, *n);
            send_json(res, 200, hits_to_json(hits, "triple"));
        };
    };
    server.Post("/search/node", item_route("node"));
    server.Post("/search/edge", item_route("edge"));
    server.Post("/search/triple", item_route("triple"));

    server.Post("/search/subgraph", [state](const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req, res);
        if (!body) return;
        const auto query = parse_query(*body, res);
        if (!query) return;
        const auto n = parse_count(*body, "n", state->deps.agent.default_n, res);
        if (!n) return;
        const SubgraphResult result =
            search_subgraph(*state->deps.graph, *state->deps.index, *query, *n);
        send_json(res, 200,
                  subgraph_to_json(*state->deps.graph, *state->deps.index, *query, result));
    });

    server.Post("/search/neighbors", [state](const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req, res);
        if (!body) return;
        const auto anchor_it = body->find("anchor");
        if (anchor_it == body->end() || !anchor_it->is_number_unsigned()) {
            send_error(res, 400, "anchor must be a non-negative integer");
            return;
        }
        const auto anchor = anchor_it->get<std::size_t>();
        if (anchor >= state->deps.graph->triple_count()) {
            send_error(res, 404, "unknown anchor");
            return;
        }
        const auto query = parse_query(*body, res);
        if (!query) return;
        const auto n = parse_count(*body, "n", state->deps.agent.default_n, res);
        if (!n) return;
        std::size_t hops = state->deps.agent.hops;
        if (const auto it = body->find("hops"); it != body->end()) {
            if (!it->is_number_unsigned()) {
                send_error(res, 400, "hops must be a non-negative integer");
                return;
            }
            hops = it->get<std::size_t>();
        }
        const SubgraphResult result =
            neighbor_subgraph(*state->deps.graph, *state->deps.index,
                              static_cast<TripleId>(anchor), *query, *n,
                              static_cast<unsigned>(hops));
        ordered_json out =
            subgraph_to_json(*state->deps.graph, *state->deps.index, *query, result);
        out["anchor"] = anchor;
        send_json(res, 200, out);
    });
}

void register_agent_route(httplib::Server& server, std::shared_ptr<ServiceState> state) {
    server.Post("/agent/run", [state](const httplib::Request& req, httplib::Response& res) {
        if (state->deps.model == nullptr) {
            send_error(res, 503, "model endpoint unreachable");
            return;
        }
        const auto body = parse_body(req, res);
        if (!body) return;
        const auto question_it = body->find("question");
        if (question_it == body->end() || !question_it->is_string() ||
            question_it->get<std::string>().empty()) {
            send_error(res, 400, "question must be a non-empty string");
            return;
        }
        AnswerMode mode = AnswerMode::true_false;
        if (const auto it = body->find("answer_mode"); it != body->end()) {
            if (!it->is_string() ||
                (it->get<std::string>() != "true_false" &&
                 it->get<std::string>() != "open_ended")) {
                send_error(res, 400, "answer_mode must be true_false or open_ended");
                return;
            }
            if (it->get<std::string>() == "open_ended") mode = AnswerMode::open_ended;
        }
        AgentConfig config = state->deps.agent;
        if (const auto it = body->find("max_steps"); it != body->end()) {
            if (!it->is_number_unsigned() || it->get<std::size_t>() == 0) {
                send_error(res, 400, "max_steps must be a positive integer");
                return;
            }
            config.max_steps = it->get<std::size_t>();
        }

        const TaskInstruction task =
            TaskInstruction::make(question_it->get<std::string>(), mode);
        res.set_chunked_content_provider(
            "application/x-ndjson",
            [state, task, config](std::size_t, httplib::DataSink& sink) {
                state->agent_slots.acquire();
                struct Release {
                    Semaphore& slots;
                    ~Release() { slots.release(); }
                } release{state->agent_slots};

                const auto emit = [&sink](const ordered_json& event) {
                    const std::string line = event.dump() + "\n";
                    sink.write(line.data(), line.size());
                };
                const Trajectory trajectory = run_agent(
                    task, *state->deps.graph, *state->deps.index, config, *state->deps.model,
                    [&emit](const TrajectoryStep& step, std::size_t index) {
                        emit(ordered_json{{"event", "step"},
                                          {"index", index},
                                          {"action", action_to_json(step.action)},
                                          {"observation", step.observation.text}});
                    });
                ordered_json done{{"event", "done"},
                                  {"finished", trajectory.finished},
                                  {"errored", trajectory.errored},
                                  {"steps", trajectory.step_count()},
                                  {"api_counts",
                                   {{"global", trajectory.global_calls},
                                    {"local", trajectory.local_calls}}}};
                if (trajectory.errored) done["error"] = trajectory.error;
                done["final_answer"] = trajectory.final_answer
                                           ? ordered_json(*trajectory.final_answer)
                                           : ordered_json();
                emit(done);
                sink.done();
                return true;
            });
    });
}

}  // namespace

void register_routes(httplib::Server& server, const ServiceDeps& deps) {
    auto state = std::make_shared<ServiceState>(deps);

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, ordered_json{{"status", "ok"}});
    });

    server.Get("/stats", [state](const httplib::Request&, httplib::Response& res) {
        const GraphStats stats = state->deps.graph->stats();
        send_json(res, 200,
                  ordered_json{{"entries", stats.entries},
                               {"triples", stats.triples},
                               {"processes", stats.processes}});
    });

    register_search_routes(server, state);
    register_agent_route(server, state);
}

bool serve_forever(const ServiceDeps& deps, const std::string& host, int port) {
    httplib::Server server;
    register_routes(server, deps);
    if (!server.bind_to_port(host, port)) {
        std::fprintf(stderr, "cannot bind %s:%d\n", host.c_str(), port);
        return false;
    }
    std::fprintf(stderr, "serving on http://%s:%d\n", host.c_str(), port);
    return server.listen_after_bind();
}

}  // namespace pathseeker
