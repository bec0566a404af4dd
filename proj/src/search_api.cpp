#include "pathseeker/search_api.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace pathseeker {

namespace {

/// Keeps the `top_k` highest-scoring positive hits, ties toward the lower
/// id. Sorting the full list is fine at graph scale (tens of thousands).
std::vector<SearchHit> take_top(std::vector<SearchHit> hits, std::size_t top_k) {
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    if (hits.size() > top_k) hits.resize(top_k);
    return hits;
}

}  // namespace

std::vector<SearchHit> search_node(const PathwayGraph& graph, const RelevanceIndex& index,
                                   const Query& query, std::size_t top_k) {
    std::vector<SearchHit> hits;
    for (NodeId node = 0; node < graph.entry_count(); ++node) {
        const double score = index.score_node(node, query);
        if (score > 0.0) hits.push_back({node, score, graph.entry(node).display()});
    }
    return take_top(std::move(hits), top_k);
}

std::vector<SearchHit> search_edge(const PathwayGraph& graph, const RelevanceIndex& index,
                                   const Query& query, std::size_t top_k) {
    std::vector<SearchHit> hits;
    for (TripleId t = 0; t < graph.triple_count(); ++t) {
        const double score = index.score_triple(t, query);
        if (score > 0.0) hits.push_back({t, score, triple_line(graph, t)});
    }
    return take_top(std::move(hits), top_k);
}

std::vector<SearchHit> search_triple(const PathwayGraph& graph, const RelevanceIndex& index,
                                     const Query& query, std::size_t top_k) {
    std::vector<SearchHit> hits;
    for (TripleId t = 0; t < graph.triple_count(); ++t) {
        if (index.score_node(graph.head_node(t), query) <= 0.0 &&
            index.score_node(graph.tail_node(t), query) <= 0.0) {
            continue;
        }
        const double score = index.score_triple(t, query);
        if (score > 0.0) hits.push_back({t, score, triple_line(graph, t)});
    }
    return take_top(std::move(hits), top_k);
}

std::string format_score(double score) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", score);
    return buf;
}

std::string hit_line(const SearchHit& hit) { return format_score(hit.score) + "\t" + hit.rendered; }

std::vector<std::string> subgraph_lines(const PathwayGraph& graph, const RelevanceIndex& index,
                                        const Query& query, const SubgraphResult& result) {
    std::vector<std::string> lines;
    if (result.triples.empty()) return lines;
    const PrizeMap prizes = index.score_graph(query);
    const std::vector<TripleId> ordered = dfs_order(result.triples, graph, &prizes);
    SessionLedger ledger;
    const std::string text = triple_to_ordered_text(ordered, graph, ledger);
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

}  // namespace pathseeker
