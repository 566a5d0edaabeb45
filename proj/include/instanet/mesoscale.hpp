#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "instanet/graph.hpp"

namespace instanet {

struct Partition {
    std::vector<std::uint32_t> community; // node -> dense community id
    std::size_t community_count = 0;
    std::string method;
    std::uint32_t significant_size = 10; // "community of at least this many nodes"

    std::vector<std::uint64_t> sizes() const;
    std::size_t significant_count() const;
    /// Renumber ids so community 0 is the largest (ties by old id).
    void relabel_by_size();
};

enum class ModularityVariant { undirected_unweighted, directed_weighted };

std::string_view to_string(ModularityVariant v);

struct ModularityScore {
    double value = 0.0;
    ModularityVariant variant = ModularityVariant::undirected_unweighted;
};

/// Newman modularity of a partition. Throws ValidationError if the partition
/// does not cover every node.
ModularityScore modularity(const InstanceGraph& g, const Partition& p, ModularityVariant variant);

struct LouvainResult {
    Partition partition;
    ModularityScore score;
    std::vector<double> pass_modularity; // one entry per aggregation pass
};

/// Two-phase Louvain: greedy local moving (visit order shuffled by seed,
/// gain ties broken toward the lowest community id) followed by aggregation,
/// until no pass improves modularity. Deterministic given the seed.
LouvainResult louvain(const InstanceGraph& g, ModularityVariant variant, std::uint64_t seed);

/// Conductance between two communities, computed on the undirected view of
/// the subgraph induced by their union: cut / min(vol_a, vol_b). Unweighted
/// mode counts every undirected edge as 1. Throws UndefinedStatError when
/// the smaller volume is zero.
double conductance(const InstanceGraph& g, const Partition& p, std::uint32_t community_a,
                   std::uint32_t community_b, bool weighted);

struct PairwiseConductance {
    double average = 0.0;
    std::uint64_t pairs = 0; // pairs entering the average (defined ones)
};

/// Mean conductance over all unordered pairs of significant communities
/// (or of all communities when significant_only is false).
PairwiseConductance average_pairwise_conductance(const InstanceGraph& g, const Partition& p,
                                                 bool weighted, bool significant_only = true);

/// Partition file: rows `label, community_id` (tab or comma). Unknown labels
/// are collected into *unknown when given; graph nodes missing from the file
/// raise a ValidationError naming them.
Partition import_partition(std::istream& in, const InstanceGraph& g,
                           const std::string& name = "<stream>",
                           std::vector<std::string>* unknown = nullptr);
Partition import_partition_file(const std::string& path, const InstanceGraph& g,
                                std::vector<std::string>* unknown = nullptr);
void export_partition(std::ostream& out, const InstanceGraph& g, const Partition& p);
void export_partition_file(const std::string& path, const InstanceGraph& g, const Partition& p);

} // namespace instanet
