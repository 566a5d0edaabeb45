#pragma once

#include <cstdint>
#include <vector>

#include "instanet/graph.hpp"

namespace instanet {

enum class DegreeVariant { total, in, out };

std::string_view to_string(DegreeVariant v);

struct CorenessMap {
    DegreeVariant variant = DegreeVariant::total;
    std::vector<std::uint32_t> coreness; // node -> core index
    std::uint32_t degeneracy = 0;        // max coreness
};

/// Bucket-based peeling, O(|E|). The total variant peels on undirected-view
/// degrees; the in (out) variant peels minimum in-degree (out-degree) nodes,
/// decrementing the in-degree of the removed node's out-neighbors (resp. the
/// out-degree of its in-neighbors).
CorenessMap core_decomposition(const InstanceGraph& g, DegreeVariant variant);

/// C_K: induced subgraph on the nodes whose coreness equals the degeneracy.
InstanceGraph innermost_core(const InstanceGraph& g, const CorenessMap& cmap);

struct CoreLinkProfile {
    struct Row {
        std::uint32_t core_index;
        std::uint64_t in_links;  // edges arriving at nodes of this coreness
        std::uint64_t out_links; // edges departing from nodes of this coreness
    };
    std::vector<Row> rows;                 // ascending core index
    double innermost_edge_fraction = 0.0;  // edges incident to the inner-most core
};

CoreLinkProfile core_link_profile(const InstanceGraph& g, const CorenessMap& cmap);

} // namespace instanet
