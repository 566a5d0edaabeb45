#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "instanet/errors.hpp"

namespace instanet {

using NodeId = std::uint32_t;

enum class NodeStatus : std::uint8_t { online, offline, unknown };
enum class Platform : std::uint8_t { mastodon, other, unknown };

std::string_view to_string(NodeStatus s);
std::string_view to_string(Platform p);
NodeStatus parse_status(std::string_view s);
Platform parse_platform(std::string_view s);

struct NodeMeta {
    NodeStatus status = NodeStatus::unknown;
    Platform platform = Platform::unknown;
};

/// One edge as it appears in an edge-list file. Weight defaults to 1 when
/// the column is absent.
struct EdgeRecord {
    std::string source;
    std::string target;
    double weight = 1.0;
};

/// Adjacency entry: neighbor id plus edge weight.
struct Arc {
    NodeId node;
    double weight;
};

class InstanceGraph;

/// Accumulates edges and metadata, then produces an immutable graph.
/// Duplicate (source, target) records are merged by summing weights;
/// self-loops are dropped and counted. Node ids are dense, assigned in
/// first-seen order.
class GraphBuilder {
public:
    GraphBuilder& add_edge(std::string_view source, std::string_view target, double weight = 1.0);
    GraphBuilder& add_node(std::string_view label);
    GraphBuilder& set_meta(std::string_view label, NodeMeta meta);

    InstanceGraph build();

private:
    NodeId intern(std::string_view label);

    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::pair<NodeId, NodeMeta>> meta_;
    struct Triple { NodeId src, dst; double w; };
    std::vector<Triple> edges_;
    std::uint64_t self_loops_ = 0;
};

/// Directed weighted simple graph over instance nodes. Immutable after
/// construction; safe for concurrent reads. Both adjacency directions are
/// stored (CSR, neighbor-sorted rows).
class InstanceGraph {
public:
    InstanceGraph() = default;

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return out_arcs_.size(); }

    const std::string& label(NodeId v) const { return labels_[v]; }
    const NodeMeta& meta(NodeId v) const { return meta_[v]; }
    std::optional<NodeId> find(std::string_view label) const;

    std::span<const Arc> out_arcs(NodeId v) const {
        return {out_arcs_.data() + out_off_[v], out_off_[v + 1] - out_off_[v]};
    }
    std::span<const Arc> in_arcs(NodeId v) const {
        return {in_arcs_.data() + in_off_[v], in_off_[v + 1] - in_off_[v]};
    }
    std::size_t out_degree(NodeId v) const { return out_off_[v + 1] - out_off_[v]; }
    std::size_t in_degree(NodeId v) const { return in_off_[v + 1] - in_off_[v]; }
    double out_strength(NodeId v) const { return out_strength_[v]; }
    double in_strength(NodeId v) const { return in_strength_[v]; }

    /// Sum of all edge weights (the total number of unit edges when weights
    /// are multiplicities).
    double total_weight() const { return total_weight_; }

    bool has_edge(NodeId i, NodeId j) const { return edge_weight(i, j).has_value(); }
    std::optional<double> edge_weight(NodeId i, NodeId j) const;

    std::uint64_t self_loops_dropped() const { return self_loops_dropped_; }

    template <typename Fn> // Fn(NodeId src, NodeId dst, double w)
    void for_each_edge(Fn&& fn) const {
        for (NodeId v = 0; v < node_count(); ++v) {
            for (const Arc& a : out_arcs(v)) fn(v, a.node, a.weight);
        }
    }

private:
    friend class GraphBuilder;

    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<NodeMeta> meta_;
    std::vector<std::size_t> out_off_, in_off_;
    std::vector<Arc> out_arcs_, in_arcs_;
    std::vector<double> out_strength_, in_strength_;
    double total_weight_ = 0.0;
    std::uint64_t self_loops_dropped_ = 0;
};

/// Induced subgraph on the kept nodes: all edges with both endpoints kept,
/// weights preserved, ids re-densified (labels and metadata carried over).
InstanceGraph induced_subgraph(const InstanceGraph& g, const std::vector<bool>& keep);
InstanceGraph induced_subgraph(const InstanceGraph& g, const std::function<bool(NodeId)>& keep);

/// Copy of g with metadata rows applied; rows naming labels absent from g
/// declare isolated nodes.
InstanceGraph with_metadata(const InstanceGraph& g,
                            std::span<const std::pair<std::string, NodeMeta>> rows);

enum class WeightRule { sum, max };

/// Undirected companion of an InstanceGraph: (i,j) and (j,i) collapse to one
/// edge whose weight follows the chosen rule. Node ids/labels are shared
/// with the source graph.
class UndirectedGraph {
public:
    std::size_t node_count() const { return off_.empty() ? 0 : off_.size() - 1; }
    std::size_t edge_count() const { return arcs_.size() / 2; }

    std::span<const Arc> neighbors(NodeId v) const {
        return {arcs_.data() + off_[v], off_[v + 1] - off_[v]};
    }
    std::size_t degree(NodeId v) const { return off_[v + 1] - off_[v]; }
    double strength(NodeId v) const { return strength_[v]; }
    double total_weight() const { return total_weight_; }
    bool has_edge(NodeId i, NodeId j) const;

    template <typename Fn> // Fn(NodeId u, NodeId v, double w), u < v
    void for_each_edge(Fn&& fn) const {
        for (NodeId v = 0; v + 1 < off_.size(); ++v) {
            for (std::size_t k = off_[v]; k < off_[v + 1]; ++k) {
                if (arcs_[k].node > v) fn(v, arcs_[k].node, arcs_[k].weight);
            }
        }
    }

private:
    friend UndirectedGraph undirected_view(const InstanceGraph&, WeightRule);

    std::vector<std::size_t> off_;
    std::vector<Arc> arcs_; // each undirected edge stored in both rows
    std::vector<double> strength_;
    double total_weight_ = 0.0;
};

UndirectedGraph undirected_view(const InstanceGraph& g, WeightRule rule = WeightRule::sum);

struct ComponentInfo {
    std::vector<std::uint32_t> scc_id; // node -> strongly connected component
    std::vector<std::uint32_t> wcc_id; // node -> weakly connected component
    std::size_t scc_count = 0;
    std::size_t wcc_count = 0;
};

/// SCCs by directed reachability (Tarjan), WCCs on the undirected view.
ComponentInfo components(const InstanceGraph& g);

} // namespace instanet
