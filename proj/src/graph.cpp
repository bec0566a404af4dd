#include "pathseeker/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace pathseeker {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

json parse_record(const std::string& source, std::size_t line_no, const std::string& line) {
    try {
        return json::parse(line);
    } catch (const json::parse_error& e) {
        throw LoadError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
}

std::vector<std::string> string_array(const json& rec, const char* field, const std::string& source,
                                      std::size_t line_no, bool required) {
    if (!rec.contains(field)) {
        if (required)
            throw LoadError(source, line_no, std::string("missing field '") + field + "'");
        return {};
    }
    const json& value = rec.at(field);
    if (!value.is_array())
        throw LoadError(source, line_no, std::string("field '") + field + "' must be an array");
    std::vector<std::string> out;
    out.reserve(value.size());
    for (const json& item : value) {
        if (!item.is_string())
            throw LoadError(source, line_no, std::string("field '") + field + "' must contain strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

EntryKey key_from_record(const json& rec, const char* field, const std::string& source, std::size_t line_no) {
    auto ids = string_array(rec, field, source, line_no, true);
    if (ids.empty())
        throw LoadError(source, line_no, std::string("field '") + field + "' must be non-empty");
    for (const std::string& id : ids) {
        if (id.empty())
            throw LoadError(source, line_no, std::string("field '") + field + "' contains an empty id");
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw LoadError(source, line_no, std::string("field '") + field + "' contains duplicate ids");
    return EntryKey::from_ids(std::move(ids));
}

void check_header(const std::string& source, const std::string& line) {
    json rec = parse_record(source, 1, line);
    if (!rec.is_object() || rec.value("format", "") != "pathseeker-graph")
        throw LoadError(source, 1, "expected header record {\"format\":\"pathseeker-graph\",...}");
    if (rec.value("version", -1) != PathwayGraph::kFormatVersion)
        throw LoadError(source, 1, "unsupported format version");
}

}  // namespace

EntryKey EntryKey::from_ids(std::vector<std::string> ids) {
    if (ids.empty()) throw std::invalid_argument("EntryKey needs at least one id");
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    EntryKey key;
    key.ids_ = std::move(ids);
    key.canonical_ = join(key.ids_, " ");
    return key;
}

const char* to_string(EntryKind kind) {
    switch (kind) {
        case EntryKind::compound: return "compound";
        case EntryKind::gene_group: return "gene_group";
        case EntryKind::other: return "other";
    }
    return "other";
}

std::optional<EntryKind> entry_kind_from_string(const std::string& s) {
    if (s == "compound") return EntryKind::compound;
    if (s == "gene_group") return EntryKind::gene_group;
    if (s == "other") return EntryKind::other;
    return std::nullopt;
}

std::string Entry::display() const {
    return key.canonical() + ": " + join(display_names, " ");
}

LoadError::LoadError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + " line " + std::to_string(line) + ": " + what), line_(line) {}

PathwayGraph PathwayGraph::load(std::istream& entries_source, std::istream& triples_source) {
    PathwayGraph graph;

    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(entries_source, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!saw_header) {
            check_header("entries", line);
            saw_header = true;
            continue;
        }
        json rec = parse_record("entries", line_no, line);
        if (!rec.is_object()) throw LoadError("entries", line_no, "record must be an object");
        Entry entry;
        entry.key = key_from_record(rec, "ids", "entries", line_no);
        entry.display_names = string_array(rec, "names", "entries", line_no, true);
        if (rec.contains("description")) {
            if (!rec.at("description").is_string())
                throw LoadError("entries", line_no, "field 'description' must be a string");
            entry.description = rec.at("description").get<std::string>();
        }
        if (rec.contains("kind")) {
            if (!rec.at("kind").is_string())
                throw LoadError("entries", line_no, "field 'kind' must be a string");
            auto kind = entry_kind_from_string(rec.at("kind").get<std::string>());
            if (!kind)
                throw LoadError("entries", line_no,
                                "field 'kind' must be compound|gene_group|other");
            entry.kind = *kind;
        }
        auto [it, inserted] =
            graph.node_of_.emplace(entry.key.canonical(), static_cast<NodeId>(graph.entries_.size()));
        if (!inserted)
            throw LoadError("entries", line_no, "duplicate entry key '" + entry.key.canonical() + "'");
        graph.entries_.push_back(std::move(entry));
    }
    if (!saw_header) throw LoadError("entries", 1, "missing header record");

    graph.incident_.resize(graph.entries_.size());

    line_no = 0;
    saw_header = false;
    while (std::getline(triples_source, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!saw_header) {
            check_header("triples", line);
            saw_header = true;
            continue;
        }
        json rec = parse_record("triples", line_no, line);
        if (!rec.is_object()) throw LoadError("triples", line_no, "record must be an object");
        Triple triple;
        triple.head = key_from_record(rec, "head", "triples", line_no);
        triple.tail = key_from_record(rec, "tail", "triples", line_no);
        if (!rec.contains("relation") || !rec.at("relation").is_string())
            throw LoadError("triples", line_no, "missing string field 'relation'");
        triple.relation = rec.at("relation").get<std::string>();
        if (triple.relation.empty())
            throw LoadError("triples", line_no, "field 'relation' must be non-empty");
        triple.processes = string_array(rec, "processes", "triples", line_no, false);

        auto head_it = graph.node_of_.find(triple.head.canonical());
        if (head_it == graph.node_of_.end())
            throw LoadError("triples", line_no,
                            "dangling endpoint '" + triple.head.canonical() + "'");
        auto tail_it = graph.node_of_.find(triple.tail.canonical());
        if (tail_it == graph.node_of_.end())
            throw LoadError("triples", line_no,
                            "dangling endpoint '" + triple.tail.canonical() + "'");

        auto id = static_cast<TripleId>(graph.triples_.size());
        graph.endpoints_.emplace_back(head_it->second, tail_it->second);
        graph.incident_[head_it->second].push_back(id);
        if (tail_it->second != head_it->second) graph.incident_[tail_it->second].push_back(id);
        graph.triples_.push_back(std::move(triple));
    }
    if (!saw_header) throw LoadError("triples", 1, "missing header record");

    return graph;
}

PathwayGraph PathwayGraph::load_files(const std::string& entries_path, const std::string& triples_path) {
    std::ifstream entries(entries_path);
    if (!entries) throw std::runtime_error("cannot open " + entries_path);
    std::ifstream triples(triples_path);
    if (!triples) throw std::runtime_error("cannot open " + triples_path);
    return load(entries, triples);
}

std::optional<NodeId> PathwayGraph::find_entry(const EntryKey& key) const {
    auto it = node_of_.find(key.canonical());
    if (it == node_of_.end()) return std::nullopt;
    return it->second;
}

std::vector<TripleId> PathwayGraph::neighbors(TripleId seed, unsigned hops) const {
    if (seed >= triples_.size()) throw std::out_of_range("invalid triple index");
    if (hops < 1) throw std::invalid_argument("hops must be >= 1");

    std::vector<bool> visited(triples_.size(), false);
    visited[seed] = true;
    std::deque<std::pair<TripleId, unsigned>> frontier{{seed, 0}};
    std::vector<TripleId> out{seed};
    while (!frontier.empty()) {
        auto [t, depth] = frontier.front();
        frontier.pop_front();
        if (depth == hops) continue;
        for (NodeId node : {endpoints_[t].first, endpoints_[t].second}) {
            for (TripleId next : incident_[node]) {
                if (visited[next]) continue;
                visited[next] = true;
                out.push_back(next);
                frontier.emplace_back(next, depth + 1);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

GraphStats PathwayGraph::stats() const {
    GraphStats s;
    s.entries = entries_.size();
    s.triples = triples_.size();
    std::unordered_set<std::string> ids;
    for (const Triple& t : triples_) {
        for (const std::string& descriptor : t.processes) ids.insert(process_id(descriptor));
    }
    s.processes = ids.size();
    return s;
}

std::string process_id(const std::string& descriptor) {
    auto pos = descriptor.find(':');
    std::string id = pos == std::string::npos ? descriptor : descriptor.substr(0, pos);
    while (!id.empty() && id.back() == ' ') id.pop_back();
    std::size_t start = 0;
    while (start < id.size() && id[start] == ' ') ++start;
    return id.substr(start);
}

}  // namespace pathseeker
