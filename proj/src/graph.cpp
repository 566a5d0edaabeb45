#include "instanet/graph.hpp"

#include <algorithm>
#include <cmath>

namespace instanet {

std::string_view to_string(NodeStatus s) {
    switch (s) {
        case NodeStatus::online: return "online";
        case NodeStatus::offline: return "offline";
        default: return "unknown";
    }
}

std::string_view to_string(Platform p) {
    switch (p) {
        case Platform::mastodon: return "mastodon";
        case Platform::other: return "other";
        default: return "unknown";
    }
}

NodeStatus parse_status(std::string_view s) {
    if (s == "online") return NodeStatus::online;
    if (s == "offline") return NodeStatus::offline;
    if (s == "unknown" || s.empty()) return NodeStatus::unknown;
    throw ParseError("unrecognized node status: '" + std::string(s) + "'");
}

Platform parse_platform(std::string_view s) {
    if (s == "mastodon") return Platform::mastodon;
    if (s == "other") return Platform::other;
    if (s == "unknown" || s.empty()) return Platform::unknown;
    throw ParseError("unrecognized platform: '" + std::string(s) + "'");
}

NodeId GraphBuilder::intern(std::string_view label) {
    auto it = index_.find(std::string(label));
    if (it != index_.end()) return it->second;
    const NodeId id = static_cast<NodeId>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), id);
    return id;
}

GraphBuilder& GraphBuilder::add_edge(std::string_view source, std::string_view target, double weight) {
    if (source.empty() || target.empty())
        throw ValidationError("edge with empty endpoint label");
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw ValidationError("edge weight must be a positive finite number");
    const NodeId s = intern(source);
    const NodeId t = intern(target);
    if (s == t) {
        ++self_loops_;
        return *this;
    }
    edges_.push_back({s, t, weight});
    return *this;
}

GraphBuilder& GraphBuilder::add_node(std::string_view label) {
    if (label.empty()) throw ValidationError("empty node label");
    intern(label);
    return *this;
}

GraphBuilder& GraphBuilder::set_meta(std::string_view label, NodeMeta meta) {
    meta_.emplace_back(intern(label), meta);
    return *this;
}

InstanceGraph GraphBuilder::build() {
    InstanceGraph g;
    const std::size_t n = labels_.size();
    g.labels_ = std::move(labels_);
    g.index_ = std::move(index_);
    g.meta_.assign(n, NodeMeta{});
    for (const auto& [id, m] : meta_) g.meta_[id] = m;
    g.self_loops_dropped_ = self_loops_;

    // Aggregate duplicate (src, dst) pairs by weight sum.
    std::sort(edges_.begin(), edges_.end(), [](const Triple& a, const Triple& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    std::vector<Triple> merged;
    merged.reserve(edges_.size());
    for (const Triple& e : edges_) {
        if (!merged.empty() && merged.back().src == e.src && merged.back().dst == e.dst) {
            merged.back().w += e.w;
        } else {
            merged.push_back(e);
        }
    }

    g.out_off_.assign(n + 1, 0);
    g.in_off_.assign(n + 1, 0);
    for (const Triple& e : merged) {
        ++g.out_off_[e.src + 1];
        ++g.in_off_[e.dst + 1];
    }
    for (std::size_t v = 0; v < n; ++v) {
        g.out_off_[v + 1] += g.out_off_[v];
        g.in_off_[v + 1] += g.in_off_[v];
    }
    g.out_arcs_.resize(merged.size());
    g.in_arcs_.resize(merged.size());
    g.out_strength_.assign(n, 0.0);
    g.in_strength_.assign(n, 0.0);
    {
        std::vector<std::size_t> pos(g.out_off_.begin(), g.out_off_.end() - 1);
        for (const Triple& e : merged) g.out_arcs_[pos[e.src]++] = {e.dst, e.w};
    }
    {
        std::vector<std::size_t> pos(g.in_off_.begin(), g.in_off_.end() - 1);
        for (const Triple& e : merged) g.in_arcs_[pos[e.dst]++] = {e.src, e.w};
    }
    // merged is (src, dst)-sorted, so out rows are already neighbor-sorted;
    // in rows need a per-row sort.
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(g.in_arcs_.begin() + static_cast<std::ptrdiff_t>(g.in_off_[v]),
                  g.in_arcs_.begin() + static_cast<std::ptrdiff_t>(g.in_off_[v + 1]),
                  [](const Arc& a, const Arc& b) { return a.node < b.node; });
    }
    double total = 0.0;
    for (const Triple& e : merged) {
        g.out_strength_[e.src] += e.w;
        g.in_strength_[e.dst] += e.w;
        total += e.w;
    }
    g.total_weight_ = total;
    return g;
}

std::optional<NodeId> InstanceGraph::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> InstanceGraph::edge_weight(NodeId i, NodeId j) const {
    const auto row = out_arcs(i);
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const Arc& a, NodeId v) { return a.node < v; });
    if (it == row.end() || it->node != j) return std::nullopt;
    return it->weight;
}

InstanceGraph induced_subgraph(const InstanceGraph& g, const std::vector<bool>& keep) {
    GraphBuilder b;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!keep[v]) continue;
        b.add_node(g.label(v));
        b.set_meta(g.label(v), g.meta(v));
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!keep[v]) continue;
        for (const Arc& a : g.out_arcs(v)) {
            if (keep[a.node]) b.add_edge(g.label(v), g.label(a.node), a.weight);
        }
    }
    return b.build();
}

InstanceGraph induced_subgraph(const InstanceGraph& g, const std::function<bool(NodeId)>& keep) {
    std::vector<bool> mask(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) mask[v] = keep(v);
    return induced_subgraph(g, mask);
}

InstanceGraph with_metadata(const InstanceGraph& g,
                            std::span<const std::pair<std::string, NodeMeta>> rows) {
    GraphBuilder b;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        b.add_node(g.label(v));
        b.set_meta(g.label(v), g.meta(v));
    }
    g.for_each_edge([&](NodeId s, NodeId t, double w) {
        b.add_edge(g.label(s), g.label(t), w);
    });
    for (const auto& [label, meta] : rows) b.set_meta(label, meta);
    return b.build();
}

UndirectedGraph undirected_view(const InstanceGraph& g, WeightRule rule) {
    const std::size_t n = g.node_count();
    UndirectedGraph u;
    // Collect (min, max) endpoint pairs, combine duplicates per rule.
    struct E { NodeId a, b; double w; };
    std::vector<E> es;
    es.reserve(g.edge_count());
    g.for_each_edge([&](NodeId s, NodeId t, double w) {
        es.push_back(s < t ? E{s, t, w} : E{t, s, w});
    });
    std::sort(es.begin(), es.end(), [](const E& x, const E& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    std::vector<E> merged;
    merged.reserve(es.size());
    for (const E& e : es) {
        if (!merged.empty() && merged.back().a == e.a && merged.back().b == e.b) {
            if (rule == WeightRule::sum)
                merged.back().w += e.w;
            else
                merged.back().w = std::max(merged.back().w, e.w);
        } else {
            merged.push_back(e);
        }
    }
    u.off_.assign(n + 1, 0);
    for (const E& e : merged) {
        ++u.off_[e.a + 1];
        ++u.off_[e.b + 1];
    }
    for (std::size_t v = 0; v < n; ++v) u.off_[v + 1] += u.off_[v];
    u.arcs_.resize(merged.size() * 2);
    u.strength_.assign(n, 0.0);
    {
        std::vector<std::size_t> pos(u.off_.begin(), u.off_.end() - 1);
        for (const E& e : merged) {
            u.arcs_[pos[e.a]++] = {e.b, e.w};
            u.arcs_[pos[e.b]++] = {e.a, e.w};
            u.strength_[e.a] += e.w;
            u.strength_[e.b] += e.w;
            u.total_weight_ += e.w;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(u.arcs_.begin() + static_cast<std::ptrdiff_t>(u.off_[v]),
                  u.arcs_.begin() + static_cast<std::ptrdiff_t>(u.off_[v + 1]),
                  [](const Arc& a, const Arc& b) { return a.node < b.node; });
    }
    return u;
}

bool UndirectedGraph::has_edge(NodeId i, NodeId j) const {
    const auto row = neighbors(i);
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const Arc& a, NodeId v) { return a.node < v; });
    return it != row.end() && it->node == j;
}

namespace {

// Iterative Tarjan SCC.
void tarjan_scc(const InstanceGraph& g, std::vector<std::uint32_t>& comp, std::size_t& count) {
    const std::size_t n = g.node_count();
    constexpr std::uint32_t kUnset = UINT32_MAX;
    std::vector<std::uint32_t> index(n, kUnset), lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeId> stack;
    comp.assign(n, kUnset);
    count = 0;
    std::uint32_t next_index = 0;

    struct Frame { NodeId v; std::size_t child; };
    std::vector<Frame> call;
    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != kUnset) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& [v, child] = call.back();
            if (child == 0) {
                index[v] = lowlink[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            const auto arcs = g.out_arcs(v);
            bool descended = false;
            while (child < arcs.size()) {
                const NodeId w = arcs[child].node;
                ++child;
                if (index[w] == kUnset) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
            }
            if (descended) continue;
            if (lowlink[v] == index[v]) {
                while (true) {
                    const NodeId w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = static_cast<std::uint32_t>(count);
                    if (w == v) break;
                }
                ++count;
            }
            const NodeId finished = v;
            call.pop_back();
            if (!call.empty()) {
                const NodeId parent = call.back().v;
                lowlink[parent] = std::min(lowlink[parent], lowlink[finished]);
            }
        }
    }
}

} // namespace

ComponentInfo components(const InstanceGraph& g) {
    ComponentInfo info;
    tarjan_scc(g, info.scc_id, info.scc_count);

    const std::size_t n = g.node_count();
    info.wcc_id.assign(n, UINT32_MAX);
    info.wcc_count = 0;
    std::vector<NodeId> queue;
    for (NodeId s = 0; s < n; ++s) {
        if (info.wcc_id[s] != UINT32_MAX) continue;
        const auto id = static_cast<std::uint32_t>(info.wcc_count++);
        info.wcc_id[s] = id;
        queue.assign(1, s);
        while (!queue.empty()) {
            const NodeId v = queue.back();
            queue.pop_back();
            for (const Arc& a : g.out_arcs(v)) {
                if (info.wcc_id[a.node] == UINT32_MAX) {
                    info.wcc_id[a.node] = id;
                    queue.push_back(a.node);
                }
            }
            for (const Arc& a : g.in_arcs(v)) {
                if (info.wcc_id[a.node] == UINT32_MAX) {
                    info.wcc_id[a.node] = id;
                    queue.push_back(a.node);
                }
            }
        }
    }
    return info;
}

} // namespace instanet
