#include "pathseeker/encoding.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pathseeker {

std::optional<std::size_t> SessionLedger::line_of(TripleId t) const {
    auto it = first_line_.find(t);
    if (it == first_line_.end()) return std::nullopt;
    return it->second;
}

std::optional<TripleId> SessionLedger::triple_at(std::size_t line) const {
    if (line >= by_line_.size()) return std::nullopt;
    return by_line_[line];
}

std::size_t SessionLedger::record(TripleId t, bool allow_repeat) {
    if (!allow_repeat && seen(t)) {
        throw std::logic_error("triple already has a line; run remove_seen first");
    }
    const std::size_t line = by_line_.size();
    by_line_.push_back(t);
    first_line_.emplace(t, line);  // keeps the first line on repeats
    return line;
}

std::vector<TripleId> remove_seen(const std::vector<TripleId>& current,
                                  const SessionLedger& ledger) {
    std::vector<TripleId> fresh;
    fresh.reserve(current.size());
    for (TripleId t : current) {
        if (!ledger.seen(t)) fresh.push_back(t);
    }
    return fresh;
}

namespace {

// Endpoint-sharing adjacency restricted to `triples`, as positions into the
// deduplicated input vector.
std::vector<std::vector<std::size_t>> local_adjacency(const std::vector<TripleId>& triples,
                                                      const PathwayGraph& graph) {
    std::unordered_map<std::string, std::vector<std::size_t>> by_endpoint;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const Triple& tr = graph.triple(triples[i]);
        by_endpoint[tr.head.canonical()].push_back(i);
        if (!(tr.tail == tr.head)) by_endpoint[tr.tail.canonical()].push_back(i);
    }
    std::vector<std::vector<std::size_t>> adj(triples.size());
    for (const auto& [key, members] : by_endpoint) {
        for (std::size_t a : members) {
            for (std::size_t b : members) {
                if (a != b) adj[a].push_back(b);
            }
        }
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

}  // namespace

std::vector<TripleId> dfs_order(const std::vector<TripleId>& triples, const PathwayGraph& graph,
                                const PrizeMap* prizes) {
    // Deduplicate and sort so positions coincide with ascending triple
    // indices; the arrangement is then independent of the input order.
    std::vector<TripleId> pool(triples);
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (pool.empty()) return {};

    const auto adj = local_adjacency(pool, graph);

    // Assign each position to a connected component.
    std::vector<std::size_t> component(pool.size(), SIZE_MAX);
    std::vector<std::vector<std::size_t>> members;  // per component, ascending
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (component[i] != SIZE_MAX) continue;
        const std::size_t c = members.size();
        members.emplace_back();
        std::vector<std::size_t> stack{i};
        component[i] = c;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            members[c].push_back(v);
            for (std::size_t w : adj[v]) {
                if (component[w] == SIZE_MAX) {
                    component[w] = c;
                    stack.push_back(w);
                }
            }
        }
        std::sort(members[c].begin(), members[c].end());
    }
    // Components discovered by scanning ascending positions, so they are
    // already ordered by their minimum position.

    std::vector<TripleId> out;
    out.reserve(pool.size());
    std::vector<bool> visited(pool.size(), false);
    for (const auto& comp : members) {
        std::size_t root = comp.front();
        if (prizes != nullptr) {
            auto prize_at = [&](std::size_t v) {
                const TripleId t = pool[v];
                return t < prizes->edge_prize.size() ? prizes->edge_prize[t] : 0.0;
            };
            double best = prize_at(root);
            for (std::size_t v : comp) {
                const double p = prize_at(v);
                if (p > best) {  // ties keep the earlier (lower) position
                    best = p;
                    root = v;
                }
            }
        }
        // Preorder DFS; neighbors pushed in descending order pop ascending.
        std::vector<std::size_t> stack{root};
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            if (visited[v]) continue;
            visited[v] = true;
            out.push_back(pool[v]);
            for (auto it = adj[v].rbegin(); it != adj[v].rend(); ++it) {
                if (!visited[*it]) stack.push_back(*it);
            }
        }
    }
    return out;
}

std::string triple_line(const PathwayGraph& graph, TripleId t) {
    const Triple& tr = graph.triple(t);
    std::ostringstream line;
    line << graph.entry(graph.head_node(t)).display() << " | "
         << graph.entry(graph.tail_node(t)).display() << " | " << tr.relation << " | ";
    for (std::size_t i = 0; i < tr.processes.size(); ++i) {
        if (i > 0) line << ' ';
        line << tr.processes[i];
    }
    return line.str();
}

std::string triple_to_text(const std::vector<TripleId>& ordered, const PathwayGraph& graph) {
    std::string text;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        if (i > 0) text += '\n';
        text += triple_line(graph, ordered[i]);
    }
    return text;
}

std::string triple_to_ordered_text(const std::vector<TripleId>& ordered,
                                   const PathwayGraph& graph, SessionLedger& ledger,
                                   bool allow_seen) {
    if (ordered.empty()) return kNoNewPathwaysMessage;
    std::string text;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const std::size_t line = ledger.record(ordered[i], allow_seen);
        if (i > 0) text += '\n';
        text += std::to_string(line);
        text += ") ";
        text += triple_line(graph, ordered[i]);
    }
    return text;
}

std::string ids_to_ordered_text(const std::vector<TripleId>& ordered, SessionLedger& ledger,
                                bool allow_seen) {
    if (ordered.empty()) return kNoNewPathwaysMessage;
    std::string text;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const std::size_t line = ledger.record(ordered[i], allow_seen);
        if (i > 0) text += '\n';
        text += std::to_string(line);
        text += ") triple#";
        text += std::to_string(ordered[i]);
    }
    return text;
}

}  // namespace pathseeker
