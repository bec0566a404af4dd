#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathseeker/graph.hpp"
#include "pathseeker/relevance.hpp"

namespace pathseeker {

/// One prize-collecting instance: a node/edge universe with prizes and a
/// uniform per-edge cost. Node labels are unique and kept sorted ascending,
/// so local node order coincides with label order; every edge remembers the
/// graph triple it came from (`edge_ref`).
struct PcstInstance {
    std::vector<std::string> node_label;
    std::vector<double> node_prize;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_endpoint;
    std::vector<double> edge_prize;
    std::vector<TripleId> edge_ref;
    double edge_cost = 0.0;

    std::size_t node_count() const { return node_label.size(); }
    std::size_t edge_count() const { return edge_ref.size(); }

    /// Instance over the whole graph: one node per entry, one edge per triple.
    static PcstInstance from_graph(const PathwayGraph& graph, const PrizeMap& prizes,
                                   double edge_cost);
    /// Instance restricted to the given triples and their endpoints.
    static PcstInstance from_triples(const PathwayGraph& graph,
                                     const std::vector<TripleId>& triples, const PrizeMap& prizes,
                                     double edge_cost);
    /// Instance with synthetic labels n0, n1, ... and edge_ref 0..E-1.
    static PcstInstance synthetic(std::vector<double> node_prizes,
                                  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                                  std::vector<double> edge_prizes, double edge_cost);
};

/// A connected prize-collecting answer. `triples` holds the chosen edges as
/// edge_ref values (ascending); `node_keys` the canonical labels of every
/// chosen node (ascending). A lone node is zero triples plus a single key;
/// an empty result is both empty with objective 0.
struct SubgraphResult {
    std::vector<TripleId> triples;
    std::vector<std::string> node_keys;
    double objective = 0.0;
    double edge_cost = 0.0;  // the uniform cost this answer was solved under
    bool no_relevant_content = false;

    std::size_t size() const { return triples.size(); }
    bool empty() const { return triples.empty() && node_keys.empty(); }
};

/// Exact optimum by enumerating node subsets with the optimal edge fill-in
/// per subset. Refuses instances with more than 15 nodes. Ties break toward
/// fewer edges, then the lexicographically smaller node set.
SubgraphResult solve_pcst_exact(const PcstInstance& instance);

/// Fast approximate solver: moat-growth clustering followed by strong
/// pruning, with edge prizes folded in by subdividing each prized edge into
/// a degree-2 prize node. Same tie-break rules as the exact solver.
SubgraphResult solve_pcst(const PcstInstance& instance);

struct SearchOptions {
    std::size_t max_probes = 30;  // inner-solver invocations per search
};

/// Retrieval over the whole graph: scores prizes for the query, then tunes
/// the uniform edge cost so the optimal subgraph size lands as close to N
/// triples as probing allows. Returns the best probe, preferring exact size
/// matches, then larger subgraphs, then higher objective.
SubgraphResult search_subgraph(const PathwayGraph& graph, const RelevanceIndex& index,
                               const Query& query, std::size_t target_size,
                               const SearchOptions& options = SearchOptions());

/// Same search restricted to the multi-hop neighborhood of an anchor triple.
SubgraphResult neighbor_subgraph(const PathwayGraph& graph, const RelevanceIndex& index,
                                 TripleId anchor, const Query& query, std::size_t target_size,
                                 unsigned hops, const SearchOptions& options = SearchOptions());

/// True objective of a result against its instance:
/// sum of node and edge prizes minus |edges| * edge_cost.
double subgraph_objective(const PcstInstance& instance, const std::vector<std::uint32_t>& nodes,
                          const std::vector<std::uint32_t>& edges);

/// Whether the chosen nodes and edges form one connected piece (or are empty).
bool subgraph_connected(const PcstInstance& instance, const std::vector<std::uint32_t>& nodes,
                        const std::vector<std::uint32_t>& edges);

}  // namespace pathseeker
