#pragma once

#include <cstddef>

#include "pathseeker/agent.hpp"
#include "pathseeker/chat_client.hpp"
#include "pathseeker/graph.hpp"
#include "pathseeker/relevance.hpp"

namespace httplib {
class Server;
}

namespace pathseeker {

/// Wiring for the HTTP service. The graph and index are held immutably for
/// the server's lifetime; requests are served concurrently against them.
/// A null `model` disables /agent/run with a 503.
struct ServiceDeps {
    const PathwayGraph* graph = nullptr;
    const RelevanceIndex* index = nullptr;
    ChatClient* model = nullptr;
    AgentConfig agent;
    std::size_t top_k = 10;        // item-search default result count
    std::size_t agent_workers = 4; // concurrent /agent/run sessions
};

/// Registers every route on `server`:
///   GET  /healthz                     liveness probe
///   GET  /stats                       entry/triple/process counts
///   POST /search/node|edge|triple     {"query", "n"?} ranked hits
///   POST /search/subgraph             {"query", "n"?} connected retrieval
///   POST /search/neighbors            {"anchor", "query", "n"?, "hops"?}
///   POST /agent/run                   {"question", ...} NDJSON event stream
/// Schema violations return 400, unknown anchors 404, missing model 503.
/// All results are byte-identical to the corresponding library calls.
void register_routes(httplib::Server& server, const ServiceDeps& deps);

/// Builds a server, registers the routes, and blocks serving `host:port`.
/// Returns false when the address cannot be bound or serving fails.
bool serve_forever(const ServiceDeps& deps, const std::string& host, int port);

}  // namespace pathseeker
