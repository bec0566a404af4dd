#include "pathseeker/subgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace pathseeker {

namespace {

constexpr double kObjectiveEps = 1e-9;
constexpr double kTimeEps = 1e-11;

bool objective_tied(double a, double b) {
    return std::fabs(a - b) <= kObjectiveEps * std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// Union-find with path halving.
class Dsu {
public:
    explicit Dsu(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[b] = a;
        return true;
    }
    void link_to(std::uint32_t child, std::uint32_t root) { parent_[child] = root; }

private:
    std::vector<std::uint32_t> parent_;
};

/// Instance-space candidate answer. Node/edge indices are local to the
/// instance and kept ascending.
struct Candidate {
    std::vector<std::uint32_t> nodes;
    std::vector<std::uint32_t> edges;
    double objective = 0.0;
};

/// Candidate order: higher objective, then fewer edges, then the
/// lexicographically smaller node set. Node labels are sorted within the
/// instance, so index order stands in for label order.
bool candidate_better(const Candidate& a, const Candidate& b) {
    if (!objective_tied(a.objective, b.objective)) return a.objective > b.objective;
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    return std::lexicographical_compare(a.nodes.begin(), a.nodes.end(), b.nodes.begin(),
                                        b.nodes.end());
}

SubgraphResult to_result(const PcstInstance& inst, const Candidate& c) {
    SubgraphResult r;
    r.triples.reserve(c.edges.size());
    for (std::uint32_t e : c.edges) r.triples.push_back(inst.edge_ref[e]);
    std::sort(r.triples.begin(), r.triples.end());
    r.node_keys.reserve(c.nodes.size());
    for (std::uint32_t n : c.nodes) r.node_keys.push_back(inst.node_label[n]);
    r.objective = c.objective;
    r.edge_cost = inst.edge_cost;
    return r;
}

}  // namespace

double subgraph_objective(const PcstInstance& inst, const std::vector<std::uint32_t>& nodes,
                          const std::vector<std::uint32_t>& edges) {
    double value = 0;
    for (std::uint32_t n : nodes) value += inst.node_prize.at(n);
    for (std::uint32_t e : edges) value += inst.edge_prize.at(e) - inst.edge_cost;
    return value;
}

bool subgraph_connected(const PcstInstance& inst, const std::vector<std::uint32_t>& nodes,
                        const std::vector<std::uint32_t>& edges) {
    if (nodes.empty()) return edges.empty();
    Dsu dsu(inst.node_count());
    for (std::uint32_t e : edges) {
        auto [a, b] = inst.edge_endpoint.at(e);
        dsu.unite(a, b);
    }
    std::uint32_t root = dsu.find(nodes.front());
    for (std::uint32_t n : nodes)
        if (dsu.find(n) != root) return false;
    // Every edge endpoint must belong to the node set.
    std::vector<bool> in_set(inst.node_count(), false);
    for (std::uint32_t n : nodes) in_set[n] = true;
    for (std::uint32_t e : edges) {
        auto [a, b] = inst.edge_endpoint[e];
        if (!in_set[a] || !in_set[b]) return false;
    }
    return true;
}

PcstInstance PcstInstance::from_graph(const PathwayGraph& graph, const PrizeMap& prizes,
                                      double edge_cost) {
    if (prizes.node_prize.size() != graph.entry_count() ||
        prizes.edge_prize.size() != graph.triple_count())
        throw std::invalid_argument("prize map does not match graph");

    PcstInstance inst;
    inst.edge_cost = edge_cost;

    // Local node order = label order: sort entries by canonical key.
    std::vector<NodeId> order(graph.entry_count());
    for (NodeId n = 0; n < graph.entry_count(); ++n) order[n] = n;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return graph.entry(a).key.canonical() < graph.entry(b).key.canonical();
    });
    std::vector<std::uint32_t> local_of(graph.entry_count());
    inst.node_label.reserve(order.size());
    inst.node_prize.reserve(order.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
        local_of[order[i]] = i;
        inst.node_label.push_back(graph.entry(order[i]).key.canonical());
        inst.node_prize.push_back(prizes.node_prize[order[i]]);
    }
    inst.edge_endpoint.reserve(graph.triple_count());
    inst.edge_prize.reserve(graph.triple_count());
    inst.edge_ref.reserve(graph.triple_count());
    for (TripleId t = 0; t < graph.triple_count(); ++t) {
        inst.edge_endpoint.emplace_back(local_of[graph.head_node(t)], local_of[graph.tail_node(t)]);
        inst.edge_prize.push_back(prizes.edge_prize[t]);
        inst.edge_ref.push_back(t);
    }
    return inst;
}

PcstInstance PcstInstance::from_triples(const PathwayGraph& graph,
                                        const std::vector<TripleId>& triples,
                                        const PrizeMap& prizes, double edge_cost) {
    if (prizes.node_prize.size() != graph.entry_count() ||
        prizes.edge_prize.size() != graph.triple_count())
        throw std::invalid_argument("prize map does not match graph");

    std::vector<NodeId> members;
    for (TripleId t : triples) {
        if (t >= graph.triple_count()) throw std::out_of_range("invalid triple index");
        members.push_back(graph.head_node(t));
        members.push_back(graph.tail_node(t));
    }
    std::sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
        return graph.entry(a).key.canonical() < graph.entry(b).key.canonical();
    });
    members.erase(std::unique(members.begin(), members.end()), members.end());

    PcstInstance inst;
    inst.edge_cost = edge_cost;
    std::unordered_map<NodeId, std::uint32_t> local_of;
    for (std::uint32_t i = 0; i < members.size(); ++i) {
        local_of.emplace(members[i], i);
        inst.node_label.push_back(graph.entry(members[i]).key.canonical());
        inst.node_prize.push_back(prizes.node_prize[members[i]]);
    }
    std::vector<TripleId> sorted(triples);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (TripleId t : sorted) {
        inst.edge_endpoint.emplace_back(local_of.at(graph.head_node(t)),
                                        local_of.at(graph.tail_node(t)));
        inst.edge_prize.push_back(prizes.edge_prize[t]);
        inst.edge_ref.push_back(t);
    }
    return inst;
}

PcstInstance PcstInstance::synthetic(std::vector<double> node_prizes,
                                     std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                                     std::vector<double> edge_prizes, double edge_cost) {
    if (edges.size() != edge_prizes.size())
        throw std::invalid_argument("edge prize count mismatch");
    PcstInstance inst;
    inst.edge_cost = edge_cost;
    inst.node_prize = std::move(node_prizes);
    inst.node_label.reserve(inst.node_prize.size());
    // Zero-padded labels keep label order aligned with index order.
    std::size_t width = std::to_string(inst.node_prize.size()).size();
    for (std::size_t i = 0; i < inst.node_prize.size(); ++i) {
        std::string num = std::to_string(i);
        inst.node_label.push_back("n" + std::string(width - num.size(), '0') + num);
    }
    for (auto [a, b] : edges) {
        if (a >= inst.node_prize.size() || b >= inst.node_prize.size())
            throw std::invalid_argument("edge endpoint out of range");
    }
    inst.edge_endpoint = std::move(edges);
    inst.edge_prize = std::move(edge_prizes);
    inst.edge_ref.resize(inst.edge_endpoint.size());
    for (std::uint32_t e = 0; e < inst.edge_ref.size(); ++e) inst.edge_ref[e] = e;
    return inst;
}

// ---------------------------------------------------------------------------
// Exact solver: enumerate node subsets; per subset the optimal edge choice is
// every positive-net edge plus a cheapest set of connectors (Kruskal over the
// non-positive-net edges).
// ---------------------------------------------------------------------------

SubgraphResult solve_pcst_exact(const PcstInstance& inst) {
    const std::size_t n = inst.node_count();
    if (n > 15) throw std::invalid_argument("solve_pcst_exact: more than 15 nodes");
    if (n == 0) return SubgraphResult{};

    const double C = inst.edge_cost;
    // Split edges once: positive-net edges are always taken when available;
    // the rest are connectors sorted by ascending cost.
    std::vector<std::uint32_t> positive, connectors;
    for (std::uint32_t e = 0; e < inst.edge_count(); ++e) {
        double net = inst.edge_prize[e] - C;
        if (net > 0)
            positive.push_back(e);
        else if (inst.edge_endpoint[e].first != inst.edge_endpoint[e].second)
            connectors.push_back(e);
    }
    std::sort(connectors.begin(), connectors.end(), [&](std::uint32_t a, std::uint32_t b) {
        double ca = C - inst.edge_prize[a];
        double cb = C - inst.edge_prize[b];
        if (ca != cb) return ca < cb;
        return a < b;
    });

    bool have_best = false;
    Candidate best;
    std::vector<std::uint32_t> chosen;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        chosen.clear();
        double value = 0;
        std::size_t members = 0;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (mask & (1u << v)) {
                value += inst.node_prize[v];
                ++members;
            }
        }
        Dsu dsu(n);
        std::size_t parts = members;
        for (std::uint32_t e : positive) {
            auto [a, b] = inst.edge_endpoint[e];
            if (!(mask & (1u << a)) || !(mask & (1u << b))) continue;
            value += inst.edge_prize[e] - C;
            chosen.push_back(e);
            if (dsu.unite(a, b)) --parts;
        }
        for (std::uint32_t e : connectors) {
            if (parts == 1) break;
            auto [a, b] = inst.edge_endpoint[e];
            if (!(mask & (1u << a)) || !(mask & (1u << b))) continue;
            if (!dsu.unite(a, b)) continue;
            value += inst.edge_prize[e] - C;
            chosen.push_back(e);
            --parts;
        }
        if (parts != 1) continue;  // subset cannot be connected

        Candidate cand;
        cand.objective = value;
        if (have_best) {
            // Cheap pre-filter before materializing vectors.
            if (!objective_tied(value, best.objective) && value < best.objective) continue;
        }
        for (std::uint32_t v = 0; v < n; ++v)
            if (mask & (1u << v)) cand.nodes.push_back(v);
        cand.edges = chosen;
        std::sort(cand.edges.begin(), cand.edges.end());
        if (!have_best || candidate_better(cand, best)) {
            best = std::move(cand);
            have_best = true;
        }
    }
    return to_result(inst, best);
}

// ---------------------------------------------------------------------------
// Fast solver: subdivision transform, moat growth, strong pruning.
// ---------------------------------------------------------------------------

namespace {

struct HEdge {
    std::uint32_t a, b;
    double cost;
    std::uint32_t origin;  // instance edge index
};

struct GrowthEvent {
    double time;
    int type;  // 0 = cluster deactivation, 1 = edge fires
    std::uint32_t id;
    std::uint64_t stamp;
};

struct EventLater {
    bool operator()(const GrowthEvent& x, const GrowthEvent& y) const {
        if (x.time != y.time) return x.time > y.time;
        if (x.type != y.type) return x.type > y.type;
        if (x.id != y.id) return x.id > y.id;
        return x.stamp > y.stamp;
    }
};

struct Cluster {
    double prize_sum = 0;
    double dual = 0;
    double last_update = 0;
    bool active = false;
    std::vector<std::uint32_t> edges;
};

/// Moat-growth clustering over the transformed graph. Returns the fired
/// edges, which always form a forest.
std::vector<std::uint32_t> grow_clusters(const std::vector<double>& weight,
                                         const std::vector<HEdge>& hedges) {
    const std::size_t n = weight.size();
    Dsu dsu(n);
    std::vector<Cluster> cluster(n);
    std::vector<std::uint64_t> cluster_version(n, 0);
    std::vector<double> slack(hedges.size());
    std::vector<double> last_refresh(hedges.size(), 0.0);
    std::vector<std::uint64_t> edge_gen(hedges.size(), 0);
    std::priority_queue<GrowthEvent, std::vector<GrowthEvent>, EventLater> queue;

    auto edge_rate = [&](const HEdge& e) {
        int rate = 0;
        if (cluster[dsu.find(e.a)].active) ++rate;
        std::uint32_t rb = dsu.find(e.b);
        if (rb != dsu.find(e.a) && cluster[rb].active) ++rate;
        return rate;
    };

    std::size_t active_count = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        cluster[v].prize_sum = weight[v];
        cluster[v].active = weight[v] > 0;
        if (cluster[v].active) {
            ++active_count;
            queue.push({weight[v], 0, v, 0});
        }
    }
    for (std::uint32_t e = 0; e < hedges.size(); ++e) {
        slack[e] = hedges[e].cost;
        if (hedges[e].a == hedges[e].b) continue;
        cluster[hedges[e].a].edges.push_back(e);
        cluster[hedges[e].b].edges.push_back(e);
        int rate = edge_rate(hedges[e]);
        if (rate > 0) queue.push({slack[e] / rate, 1, e, 0});
    }

    auto refresh_edges = [&](std::uint32_t root, double now) {
        // Settle accumulated shrink with pre-change rates. Rates are constant
        // since each edge's last refresh: any endpoint-cluster change
        // refreshes the edge because it sits in both endpoint lists.
        for (std::uint32_t e : cluster[root].edges) {
            if (dsu.find(hedges[e].a) == dsu.find(hedges[e].b)) continue;
            double dt = now - last_refresh[e];
            if (dt > 0) slack[e] -= edge_rate(hedges[e]) * dt;
            last_refresh[e] = now;
        }
    };
    auto repush_edges = [&](std::uint32_t root, double now) {
        auto& list = cluster[root].edges;
        std::size_t keep = 0;
        for (std::uint32_t e : list) {
            if (dsu.find(hedges[e].a) == dsu.find(hedges[e].b)) continue;  // intra-cluster
            list[keep++] = e;
            int rate = edge_rate(hedges[e]);
            ++edge_gen[e];
            if (rate > 0)
                queue.push({now + std::max(0.0, slack[e]) / rate, 1, e, edge_gen[e]});
        }
        list.resize(keep);
    };
    auto settle_dual = [&](std::uint32_t root, double now) {
        if (cluster[root].active) cluster[root].dual += now - cluster[root].last_update;
        cluster[root].last_update = now;
    };

    std::vector<std::uint32_t> fired;
    std::size_t guard = 64 * (n + hedges.size()) * (1 + static_cast<std::size_t>(std::log2(n + hedges.size() + 2))) + 256;
    while (active_count > 0 && !queue.empty()) {
        if (guard-- == 0) throw std::logic_error("moat growth failed to converge");
        GrowthEvent ev = queue.top();
        queue.pop();
        double now = ev.time;

        if (ev.type == 0) {
            std::uint32_t r = ev.id;
            if (dsu.find(r) != r || cluster_version[r] != ev.stamp || !cluster[r].active) continue;
            refresh_edges(r, now);
            settle_dual(r, now);
            cluster[r].active = false;
            ++cluster_version[r];
            --active_count;
            repush_edges(r, now);
            continue;
        }

        std::uint32_t e = ev.id;
        if (ev.stamp != edge_gen[e]) continue;
        std::uint32_t ra = dsu.find(hedges[e].a);
        std::uint32_t rb = dsu.find(hedges[e].b);
        if (ra == rb) continue;
        // Settle this edge and double-check it is really due; a stale rate
        // estimate re-queues it instead of firing early.
        double dt = now - last_refresh[e];
        if (dt > 0) slack[e] -= edge_rate(hedges[e]) * dt;
        last_refresh[e] = now;
        if (slack[e] > kTimeEps) {
            int rate = edge_rate(hedges[e]);
            ++edge_gen[e];
            if (rate > 0) queue.push({now + slack[e] / rate, 1, e, edge_gen[e]});
            continue;
        }

        // Merge the two endpoint clusters.
        refresh_edges(ra, now);
        refresh_edges(rb, now);
        settle_dual(ra, now);
        settle_dual(rb, now);
        fired.push_back(e);
        bool was_active_a = cluster[ra].active;
        bool was_active_b = cluster[rb].active;
        std::uint32_t big = cluster[ra].edges.size() >= cluster[rb].edges.size() ? ra : rb;
        std::uint32_t small = big == ra ? rb : ra;
        dsu.link_to(small, big);
        cluster[big].prize_sum += cluster[small].prize_sum;
        cluster[big].dual += cluster[small].dual;
        cluster[big].edges.insert(cluster[big].edges.end(), cluster[small].edges.begin(),
                                  cluster[small].edges.end());
        cluster[small].edges.clear();
        cluster[small].edges.shrink_to_fit();
        cluster[big].active = true;
        cluster[big].last_update = now;
        ++cluster_version[big];
        ++cluster_version[small];
        if (was_active_a && was_active_b)
            --active_count;  // two active clusters became one
        else if (!was_active_a && !was_active_b)
            ++active_count;
        double potential = std::max(0.0, cluster[big].prize_sum - cluster[big].dual);
        queue.push({now + potential, 0, big, cluster_version[big]});
        repush_edges(big, now);
    }
    return fired;
}

/// Strong pruning over one forest tree: find the connected subtree that
/// maximizes node weight minus edge cost. `adj` spans the whole transformed
/// graph but only fired edges. Returns the kept nodes (ascending) and kept
/// H-edge ids.
struct PrunedTree {
    std::vector<std::uint32_t> nodes;
    std::vector<std::uint32_t> hedge_ids;
};

PrunedTree strong_prune(const std::vector<std::uint32_t>& component,
                        const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& adj,
                        const std::vector<double>& weight, const std::vector<HEdge>& hedges) {
    if (component.size() == 1) return {{component[0]}, {}};

    // Root the tree at the smallest node; BFS pre-order gives parents first.
    std::unordered_map<std::uint32_t, std::uint32_t> local;
    local.reserve(component.size() * 2);
    for (std::uint32_t i = 0; i < component.size(); ++i) local.emplace(component[i], i);
    const std::size_t k = component.size();
    const std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

    auto bfs = [&](std::uint32_t root_local, std::vector<std::uint32_t>& order,
                   std::vector<std::uint32_t>& parent, std::vector<double>& pcost,
                   std::vector<std::uint32_t>& pedge) {
        order.clear();
        parent.assign(k, kNone);
        pcost.assign(k, 0.0);
        pedge.assign(k, kNone);
        std::vector<bool> seen(k, false);
        order.push_back(root_local);
        seen[root_local] = true;
        for (std::size_t i = 0; i < order.size(); ++i) {
            std::uint32_t v = order[i];
            for (auto [u_global, he] : adj[component[v]]) {
                std::uint32_t u = local.at(u_global);
                if (seen[u]) continue;
                seen[u] = true;
                parent[u] = v;
                pcost[u] = hedges[he].cost;
                pedge[u] = he;
                order.push_back(u);
            }
        }
    };

    std::vector<std::uint32_t> order, parent, pedge;
    std::vector<double> pcost;
    bfs(0, order, parent, pcost, pedge);

    // Downward pass: best value of the subtree rooted at v, v included.
    std::vector<double> down(k, 0.0), childsum(k, 0.0);
    for (std::size_t i = order.size(); i-- > 0;) {
        std::uint32_t v = order[i];
        down[v] = weight[component[v]] + childsum[v];
        if (parent[v] != kNone) {
            double contribution = std::max(0.0, down[v] - pcost[v]);
            childsum[parent[v]] += contribution;
        }
    }
    // Upward pass: clamped contribution of the parent side into v.
    std::vector<double> upview(k, 0.0);
    for (std::uint32_t v : order) {
        if (parent[v] == kNone) continue;
        std::uint32_t p = parent[v];
        double without_v = weight[component[p]] + upview[p] + childsum[p] -
                           std::max(0.0, down[v] - pcost[v]);
        upview[v] = std::max(0.0, without_v - pcost[v]);
    }

    std::uint32_t best_root = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::uint32_t v = 0; v < k; ++v) {
        double value = weight[component[v]] + upview[v] + childsum[v];
        if (value > best_value + kObjectiveEps ||
            (value > best_value - kObjectiveEps && component[v] < component[best_root])) {
            if (value > best_value) best_value = value;
            best_root = v;
        }
    }

    // Re-root at the winner and keep every neighbor subtree that pays for
    // its connecting edge (strictly, so ties stay small).
    bfs(best_root, order, parent, pcost, pedge);
    childsum.assign(k, 0.0);
    for (std::size_t i = order.size(); i-- > 0;) {
        std::uint32_t v = order[i];
        down[v] = weight[component[v]] + childsum[v];
        if (parent[v] != kNone)
            childsum[parent[v]] += std::max(0.0, down[v] - pcost[v]);
    }
    PrunedTree result;
    std::vector<bool> keep(k, false);
    keep[best_root] = true;
    for (std::uint32_t v : order) {
        if (v == best_root) continue;
        if (!keep[parent[v]]) continue;
        if (down[v] - pcost[v] > 0) {
            keep[v] = true;
            result.hedge_ids.push_back(pedge[v]);
        }
    }
    for (std::uint32_t v = 0; v < k; ++v)
        if (keep[v]) result.nodes.push_back(component[v]);
    std::sort(result.nodes.begin(), result.nodes.end());
    return result;
}

}  // namespace

SubgraphResult solve_pcst(const PcstInstance& inst) {
    const std::size_t n = inst.node_count();
    if (n == 0) return SubgraphResult{};
    const double C = inst.edge_cost;

    // Subdivision transform: an edge whose prize beats the cost becomes a
    // degree-2 prize node on two free links; otherwise it keeps the residual
    // cost. Self-loops without surplus prize can never help and are dropped.
    std::vector<double> weight(inst.node_prize);
    std::vector<HEdge> hedges;
    std::vector<std::uint32_t> virtual_origin;  // H-node index -> instance edge
    for (std::uint32_t e = 0; e < inst.edge_count(); ++e) {
        auto [a, b] = inst.edge_endpoint[e];
        double surplus = inst.edge_prize[e] - C;
        if (surplus > 0) {
            auto x = static_cast<std::uint32_t>(weight.size());
            weight.push_back(surplus);
            virtual_origin.push_back(e);
            hedges.push_back({a, x, 0.0, e});
            hedges.push_back({x, b, 0.0, e});
        } else if (a != b) {
            hedges.push_back({a, b, -surplus, e});
        }
    }

    std::vector<std::uint32_t> fired = grow_clusters(weight, hedges);

    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(weight.size());
    for (std::uint32_t he : fired) {
        adj[hedges[he].a].emplace_back(hedges[he].b, he);
        adj[hedges[he].b].emplace_back(hedges[he].a, he);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());

    auto map_candidate = [&](const std::vector<std::uint32_t>& hnodes,
                             const std::vector<std::uint32_t>& hedge_ids) {
        Candidate c;
        std::vector<std::uint32_t> edge_set;
        for (std::uint32_t h : hnodes) {
            if (h < n)
                c.nodes.push_back(h);
            else
                edge_set.push_back(virtual_origin[h - n]);
        }
        for (std::uint32_t he : hedge_ids) edge_set.push_back(hedges[he].origin);
        std::sort(edge_set.begin(), edge_set.end());
        edge_set.erase(std::unique(edge_set.begin(), edge_set.end()), edge_set.end());
        for (std::uint32_t e : edge_set) {
            c.nodes.push_back(inst.edge_endpoint[e].first);
            c.nodes.push_back(inst.edge_endpoint[e].second);
        }
        std::sort(c.nodes.begin(), c.nodes.end());
        c.nodes.erase(std::unique(c.nodes.begin(), c.nodes.end()), c.nodes.end());
        c.edges = std::move(edge_set);
        c.objective = subgraph_objective(inst, c.nodes, c.edges);
        return c;
    };

    bool have_best = false;
    Candidate best;
    auto offer = [&](Candidate c) {
        if (!have_best || candidate_better(c, best)) {
            best = std::move(c);
            have_best = true;
        }
    };

    // Best pruned subtree of every fired-forest tree.
    std::vector<bool> visited(weight.size(), false);
    for (std::uint32_t start = 0; start < weight.size(); ++start) {
        if (visited[start]) continue;
        std::vector<std::uint32_t> component{start};
        visited[start] = true;
        for (std::size_t i = 0; i < component.size(); ++i) {
            for (auto [u, he] : adj[component[i]]) {
                (void)he;
                if (visited[u]) continue;
                visited[u] = true;
                component.push_back(u);
            }
        }
        PrunedTree pruned = strong_prune(component, adj, weight, hedges);
        offer(map_candidate(pruned.nodes, pruned.hedge_ids));
    }
    // Every single node is also a candidate; a lone virtual node stands for
    // its instance edge plus both endpoints.
    for (std::uint32_t h = 0; h < weight.size(); ++h) offer(map_candidate({h}, {}));

    if (!subgraph_connected(inst, best.nodes, best.edges))
        throw std::logic_error("solver produced a disconnected subgraph");
    return to_result(inst, best);
}

// ---------------------------------------------------------------------------
// Outer search: tune the uniform edge cost toward the target size.
// ---------------------------------------------------------------------------

namespace {

struct Probe {
    double cost = 0;
    SubgraphResult result;
};

/// Probe order: closest to the target size, then larger, then higher
/// objective, then cheaper cost.
bool probe_better(const Probe& a, const Probe& b, std::size_t target) {
    auto diff = [target](const Probe& p) {
        std::size_t s = p.result.size();
        return s > target ? s - target : target - s;
    };
    if (diff(a) != diff(b)) return diff(a) < diff(b);
    if (a.result.size() != b.result.size()) return a.result.size() > b.result.size();
    if (!objective_tied(a.result.objective, b.result.objective))
        return a.result.objective > b.result.objective;
    return a.cost < b.cost;
}

SubgraphResult search_impl(const PathwayGraph& graph, const PrizeMap& prizes,
                           const std::vector<TripleId>* scope, std::size_t target,
                           const SearchOptions& options) {
    if (target == 0) throw std::invalid_argument("target size must be positive");

    auto make_instance = [&](double cost) {
        return scope ? PcstInstance::from_triples(graph, *scope, prizes, cost)
                     : PcstInstance::from_graph(graph, prizes, cost);
    };

    // Relevance check over the instance scope only.
    PcstInstance probe_zero = make_instance(0.0);
    double prize_mass = 0;
    for (double p : probe_zero.node_prize) prize_mass += p;
    for (double p : probe_zero.edge_prize) prize_mass += p;
    if (prize_mass <= 0) {
        SubgraphResult r;
        r.no_relevant_content = true;
        return r;
    }
    // Above this cost any edge purchase outweighs every prize combined, so
    // the optimum is a lone node and the size range is fully bracketed.
    const double upper = prize_mass + 1.0;

    std::size_t budget = std::max<std::size_t>(options.max_probes, 4);
    std::map<double, std::size_t> seen_costs;
    Probe best;
    bool have_best = false;
    bool exact_hit = false;

    auto probe = [&](double cost) {
        auto it = seen_costs.find(cost);
        if (it != seen_costs.end()) return it->second;
        PcstInstance inst = cost == 0.0 ? std::move(probe_zero) : make_instance(cost);
        if (cost == 0.0) probe_zero = PcstInstance{};  // moved out; probed first
        --budget;
        Probe p{cost, solve_pcst(inst)};
        std::size_t size = p.result.size();
        seen_costs.emplace(cost, size);
        if (!have_best || probe_better(p, best, target)) {
            best = std::move(p);
            have_best = true;
        }
        if (size == target) exact_hit = true;
        return size;
    };

    probe(0.0);
    if (!exact_hit && budget > 0) probe(upper);

    // Coarse grid, then bisect the straddling bracket with the rest of the
    // budget. Subgraph size only trends monotone in the cost, so the best
    // probe seen anywhere is what gets returned.
    const std::size_t grid_points = 8;
    for (std::size_t i = 1; i <= grid_points && !exact_hit && budget > 0; ++i)
        probe(upper * static_cast<double>(i) / static_cast<double>(grid_points + 1));

    if (!exact_hit && budget > 0) {
        double lo = 0.0, hi = upper;
        std::size_t best_gap = std::numeric_limits<std::size_t>::max();
        double prev_cost = 0.0;
        std::size_t prev_size = seen_costs.at(0.0);
        for (auto [cost, size] : seen_costs) {
            if (cost == 0.0) continue;
            if (prev_size > target && target >= size) {
                std::size_t gap = std::min(prev_size - target, target - size);
                if (gap < best_gap) {
                    best_gap = gap;
                    lo = prev_cost;
                    hi = cost;
                }
            }
            prev_cost = cost;
            prev_size = size;
        }
        while (budget > 0 && hi - lo > 1e-12 * upper && !exact_hit) {
            double mid = (lo + hi) / 2.0;
            std::size_t size = probe(mid);
            if (size > target)
                lo = mid;
            else
                hi = mid;
        }
    }
    return best.result;
}

}  // namespace

SubgraphResult search_subgraph(const PathwayGraph& graph, const RelevanceIndex& index,
                               const Query& query, std::size_t target_size,
                               const SearchOptions& options) {
    PrizeMap prizes = index.score_graph(query);
    return search_impl(graph, prizes, nullptr, target_size, options);
}

SubgraphResult neighbor_subgraph(const PathwayGraph& graph, const RelevanceIndex& index,
                                 TripleId anchor, const Query& query, std::size_t target_size,
                                 unsigned hops, const SearchOptions& options) {
    std::vector<TripleId> scope = graph.neighbors(anchor, hops);
    PrizeMap prizes = index.score_graph(query);
    return search_impl(graph, prizes, &scope, target_size, options);
}

}  // namespace pathseeker
