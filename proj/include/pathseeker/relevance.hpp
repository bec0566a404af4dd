#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "pathseeker/graph.hpp"

namespace pathseeker {

/// Lowercased ASCII tokens split on non-alphanumeric bytes. Empty pieces are
/// dropped; duplicates are kept (term frequency matters downstream).
std::vector<std::string> tokenize(const std::string& text);

/// A search request. `raw` keeps the original keyword list joined with
/// ", " so prompts and logs can echo the query verbatim.
struct Query {
    std::string raw;
    std::vector<std::string> tokens;

    static Query from_keywords(const std::vector<std::string>& keywords);
    static Query from_text(const std::string& text);
};

/// Non-negative per-item relevance of a query against one graph. Node and
/// triple prizes are indexed by NodeId / TripleId.
struct PrizeMap {
    std::vector<double> node_prize;
    std::vector<double> edge_prize;

    bool all_zero() const;
    double total() const;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// BM25 scorer over a single corpus holding one document per entry and one
/// per triple. Entry documents combine ids, names and the description;
/// triple documents combine the relation, process descriptors and the
/// endpoint names. Build once, score many queries.
class RelevanceIndex {
public:
    using Params = Bm25Params;

    explicit RelevanceIndex(const PathwayGraph& graph, Params params = Params());

    double score_node(NodeId node, const Query& query) const;
    double score_triple(TripleId t, const Query& query) const;
    PrizeMap score_graph(const Query& query) const;

    /// BM25 score of the query against free text that is not part of the
    /// corpus. Uses corpus statistics; terms unseen in the corpus get the
    /// maximum idf.
    double score_text(const std::string& text, const Query& query) const;

    const Params& params() const { return params_; }
    std::size_t document_count() const { return docs_.size(); }

private:
    struct Doc {
        std::unordered_map<std::string, std::uint32_t> tf;
        double length = 0;
    };

    double score_doc(const Doc& doc, const Query& query) const;
    double idf(const std::string& term) const;

    Params params_;
    std::vector<Doc> docs_;  // entries first, then triples
    std::size_t node_count_ = 0;
    std::unordered_map<std::string, std::uint32_t> df_;
    double avg_doc_length_ = 0;
};

}  // namespace pathseeker
