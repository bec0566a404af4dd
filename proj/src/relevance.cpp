#include "pathseeker/relevance.hpp"

#include <cctype>
#include <cmath>

namespace pathseeker {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Query Query::from_keywords(const std::vector<std::string>& keywords) {
    Query q;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        if (i > 0) q.raw += ", ";
        q.raw += keywords[i];
    }
    q.tokens = tokenize(q.raw);
    return q;
}

Query Query::from_text(const std::string& text) {
    Query q;
    q.raw = text;
    q.tokens = tokenize(text);
    return q;
}

bool PrizeMap::all_zero() const {
    for (double p : node_prize)
        if (p > 0) return false;
    for (double p : edge_prize)
        if (p > 0) return false;
    return true;
}

double PrizeMap::total() const {
    double sum = 0;
    for (double p : node_prize) sum += p;
    for (double p : edge_prize) sum += p;
    return sum;
}

namespace {

void add_tokens(const std::string& text, std::unordered_map<std::string, std::uint32_t>& tf,
                double& length) {
    for (std::string& tok : tokenize(text)) {
        ++tf[std::move(tok)];
        ++length;
    }
}

}  // namespace

RelevanceIndex::RelevanceIndex(const PathwayGraph& graph, Params params)
    : params_(params), node_count_(graph.entry_count()) {
    docs_.reserve(graph.entry_count() + graph.triple_count());

    auto push_doc = [&](Doc doc) {
        for (const auto& [term, count] : doc.tf) {
            (void)count;
            ++df_[term];
        }
        avg_doc_length_ += doc.length;
        docs_.push_back(std::move(doc));
    };

    for (NodeId n = 0; n < graph.entry_count(); ++n) {
        const Entry& e = graph.entry(n);
        Doc doc;
        for (const std::string& id : e.key.ids()) add_tokens(id, doc.tf, doc.length);
        for (const std::string& name : e.display_names) add_tokens(name, doc.tf, doc.length);
        add_tokens(e.description, doc.tf, doc.length);
        push_doc(std::move(doc));
    }
    for (TripleId t = 0; t < graph.triple_count(); ++t) {
        const Triple& triple = graph.triple(t);
        Doc doc;
        add_tokens(triple.relation, doc.tf, doc.length);
        for (const std::string& p : triple.processes) add_tokens(p, doc.tf, doc.length);
        for (const std::string& name : graph.entry(graph.head_node(t)).display_names)
            add_tokens(name, doc.tf, doc.length);
        for (const std::string& name : graph.entry(graph.tail_node(t)).display_names)
            add_tokens(name, doc.tf, doc.length);
        push_doc(std::move(doc));
    }
    if (!docs_.empty()) avg_doc_length_ /= static_cast<double>(docs_.size());
}

double RelevanceIndex::idf(const std::string& term) const {
    auto it = df_.find(term);
    double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
    double n = static_cast<double>(docs_.size());
    double value = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    return value > 0 ? value : 0.0;
}

double RelevanceIndex::score_doc(const Doc& doc, const Query& query) const {
    double norm = 1.0;
    if (avg_doc_length_ > 0)
        norm = 1.0 - params_.b + params_.b * doc.length / avg_doc_length_;
    double score = 0;
    for (const std::string& term : query.tokens) {
        auto it = doc.tf.find(term);
        if (it == doc.tf.end()) continue;
        double tf = static_cast<double>(it->second);
        score += idf(term) * tf * (params_.k1 + 1.0) / (tf + params_.k1 * norm);
    }
    return score;
}

double RelevanceIndex::score_node(NodeId node, const Query& query) const {
    return score_doc(docs_.at(node), query);
}

double RelevanceIndex::score_triple(TripleId t, const Query& query) const {
    return score_doc(docs_.at(node_count_ + t), query);
}

PrizeMap RelevanceIndex::score_graph(const Query& query) const {
    PrizeMap prizes;
    prizes.node_prize.resize(node_count_);
    prizes.edge_prize.resize(docs_.size() - node_count_);
    for (std::size_t n = 0; n < prizes.node_prize.size(); ++n)
        prizes.node_prize[n] = score_doc(docs_[n], query);
    for (std::size_t t = 0; t < prizes.edge_prize.size(); ++t)
        prizes.edge_prize[t] = score_doc(docs_[node_count_ + t], query);
    return prizes;
}

double RelevanceIndex::score_text(const std::string& text, const Query& query) const {
    Doc doc;
    add_tokens(text, doc.tf, doc.length);
    return score_doc(doc, query);
}

}  // namespace pathseeker
