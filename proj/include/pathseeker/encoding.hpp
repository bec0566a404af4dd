#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pathseeker/graph.hpp"
#include "pathseeker/relevance.hpp"

namespace pathseeker {

/// Observation sent when a turn's subgraph is fully deduplicated away.
inline constexpr const char* kNoNewPathwaysMessage =
    "No new pathways were found besides those previously seen.";

/// Per-session history of emitted lines. Line ids are assigned 0, 1, 2, ...
/// in emission order and never reused; `total()` is the next id to assign.
/// With deduplication on, each triple owns exactly one line.
class SessionLedger {
public:
    std::size_t total() const { return by_line_.size(); }
    bool seen(TripleId t) const { return first_line_.count(t) != 0; }

    /// First line id assigned to the triple, if any.
    std::optional<std::size_t> line_of(TripleId t) const;
    /// Triple shown on the given line id.
    std::optional<TripleId> triple_at(std::size_t line) const;
    /// Line id -> triple, in emission order.
    const std::vector<TripleId>& lines() const { return by_line_; }

    /// Appends one emitted triple, returning its new line id. Repeat
    /// emissions are only legal when deduplication is off.
    std::size_t record(TripleId t, bool allow_repeat);

private:
    std::vector<TripleId> by_line_;
    std::unordered_map<TripleId, std::size_t> first_line_;
};

/// The input triples minus everything already in the ledger, input order
/// preserved. The ledger is not touched; ids are spent at emission only.
std::vector<TripleId> remove_seen(const std::vector<TripleId>& current,
                                  const SessionLedger& ledger);

/// Depth-first arrangement over the endpoint-sharing graph of the given
/// triples. Roots: the highest-prize triple of each component when a prize
/// map is supplied (ties toward the lowest index), else the lowest index.
/// Neighbors expand in ascending index order; components are emitted by
/// ascending minimum index. Output is a permutation of the (deduplicated)
/// input.
std::vector<TripleId> dfs_order(const std::vector<TripleId>& triples, const PathwayGraph& graph,
                                const PrizeMap* prizes = nullptr);

/// One rendered triple:
/// `<head display> | <tail display> | <relation> | <processes joined by single space>`.
std::string triple_line(const PathwayGraph& graph, TripleId t);

/// All lines joined by newline, order as given. Empty input -> "".
std::string triple_to_text(const std::vector<TripleId>& ordered, const PathwayGraph& graph);

/// Numbered rendering: each line is prefixed `<id>) ` with consecutive ids
/// starting at ledger.total(), and the triples are recorded into the ledger.
/// Empty input returns the no-new-pathways sentinel and leaves the ledger
/// alone. Re-emitting a seen triple throws unless `allow_seen` (the
/// deduplication-off mode, which assigns fresh ids to repeats).
std::string triple_to_ordered_text(const std::vector<TripleId>& ordered,
                                   const PathwayGraph& graph, SessionLedger& ledger,
                                   bool allow_seen = false);

/// Bare-bones variant of the numbered rendering for the encoder-off mode:
/// same ids and ledger bookkeeping, but each line is just
/// `<id>) triple#<index>`.
std::string ids_to_ordered_text(const std::vector<TripleId>& ordered, SessionLedger& ledger,
                                bool allow_seen = false);

}  // namespace pathseeker
