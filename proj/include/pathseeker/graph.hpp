#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pathseeker {

using NodeId = std::uint32_t;
using TripleId = std::uint32_t;

/// Identity of a graph entry: a sorted, duplicate-free set of accession ids.
/// Two endpoint groups are the same entry iff their canonical forms match
/// exactly; partial id overlap does not merge them.
class EntryKey {
public:
    EntryKey() = default;
    static EntryKey from_ids(std::vector<std::string> ids);

    const std::vector<std::string>& ids() const { return ids_; }
    const std::string& canonical() const { return canonical_; }
    bool empty() const { return ids_.empty(); }

    friend bool operator==(const EntryKey& a, const EntryKey& b) {
        return a.canonical_ == b.canonical_;
    }
    friend bool operator<(const EntryKey& a, const EntryKey& b) {
        return a.canonical_ < b.canonical_;
    }

private:
    std::vector<std::string> ids_;
    std::string canonical_;  // sorted ids joined by single spaces
};

enum class EntryKind { compound, gene_group, other };

const char* to_string(EntryKind kind);
std::optional<EntryKind> entry_kind_from_string(const std::string& s);

struct Entry {
    EntryKey key;
    std::vector<std::string> display_names;
    std::string description;
    EntryKind kind = EntryKind::other;

    /// "<canonical ids>: <names joined by single spaces>"
    std::string display() const;
};

struct Triple {
    EntryKey head;
    EntryKey tail;
    std::string relation;
    std::vector<std::string> processes;  // "<process id>: <process name>"
};

struct GraphStats {
    std::size_t entries = 0;
    std::size_t triples = 0;
    std::size_t processes = 0;  // distinct process ids across all triples
};

/// Ingestion failure tagged with the 1-based line number of the offending
/// record in its source stream.
class LoadError : public std::runtime_error {
public:
    LoadError(const std::string& source, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Immutable pathway network. Entries are nodes, triples are edges; two
/// triples are adjacent iff they share an endpoint key. Safe for concurrent
/// readers once loaded.
class PathwayGraph {
public:
    static constexpr int kFormatVersion = 1;

    /// Parses two line-delimited JSON streams (entries, triples), each led by
    /// the format header record. Triple indices follow file order from 0.
    static PathwayGraph load(std::istream& entries_source, std::istream& triples_source);
    static PathwayGraph load_files(const std::string& entries_path, const std::string& triples_path);

    std::size_t entry_count() const { return entries_.size(); }
    std::size_t triple_count() const { return triples_.size(); }

    const Entry& entry(NodeId node) const { return entries_.at(node); }
    const Triple& triple(TripleId t) const { return triples_.at(t); }
    NodeId head_node(TripleId t) const { return endpoints_.at(t).first; }
    NodeId tail_node(TripleId t) const { return endpoints_.at(t).second; }

    std::optional<NodeId> find_entry(const EntryKey& key) const;

    /// Triple indices incident to a node, ascending.
    const std::vector<TripleId>& incident(NodeId node) const { return incident_.at(node); }

    /// All triples within `hops` endpoint-sharing steps of the seed, seed
    /// included. Result is sorted ascending.
    std::vector<TripleId> neighbors(TripleId seed, unsigned hops) const;

    GraphStats stats() const;

private:
    std::vector<Entry> entries_;
    std::vector<Triple> triples_;
    std::vector<std::pair<NodeId, NodeId>> endpoints_;
    std::vector<std::vector<TripleId>> incident_;
    std::unordered_map<std::string, NodeId> node_of_;
};

/// Process descriptor id: the part before the first ':' (trimmed), or the
/// whole descriptor when no colon is present.
std::string process_id(const std::string& descriptor);

}  // namespace pathseeker
