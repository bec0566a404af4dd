#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pathseeker/encoding.hpp"
#include "pathseeker/graph.hpp"
#include "pathseeker/relevance.hpp"
#include "pathseeker/subgraph.hpp"

namespace pathseeker {

/// One ranked hit from an item-level search. `rendered` is the canonical
/// text for the hit; the CLI prints it and the HTTP service embeds it, so
/// the two surfaces stay byte-identical with the library.
struct SearchHit {
    std::size_t id = 0;  // NodeId or TripleId depending on the search
    double score = 0.0;
    std::string rendered;
};

inline constexpr std::size_t kDefaultTopK = 10;

/// Top-k entries by lexical score against their id/name/description text.
/// Zero-score entries never qualify; ties go to the lower id.
std::vector<SearchHit> search_node(const PathwayGraph& graph, const RelevanceIndex& index,
                                   const Query& query, std::size_t top_k = kDefaultTopK);

/// Top-k triples by lexical score against their relation/process/endpoint
/// text. Same ranking rules as search_node.
std::vector<SearchHit> search_edge(const PathwayGraph& graph, const RelevanceIndex& index,
                                   const Query& query, std::size_t top_k = kDefaultTopK);

/// search_edge restricted to triples whose head or tail entry itself
/// matches the query, so every hit is anchored at a named endpoint rather
/// than a relation or process mention.
std::vector<SearchHit> search_triple(const PathwayGraph& graph, const RelevanceIndex& index,
                                     const Query& query, std::size_t top_k = kDefaultTopK);

/// Fixed-width score text shared by every surface ("%.6f", trailing-zero
/// stable), so renderings never drift between the CLI and the service.
std::string format_score(double score);

/// `<score>\t<rendered>` — one hit per line.
std::string hit_line(const SearchHit& hit);

/// Canonical rendering of a retrieval result: depth-first arrangement under
/// the query's prizes, then numbered triple lines from a fresh session
/// (ids 0..size-1). Empty results render no lines.
std::vector<std::string> subgraph_lines(const PathwayGraph& graph, const RelevanceIndex& index,
                                        const Query& query, const SubgraphResult& result);

}  // namespace pathseeker
