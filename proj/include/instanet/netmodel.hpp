#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "instanet/graph.hpp"

namespace instanet {

/// Anonymized user-level follow record: user at source_instance follows a
/// user at target_instance.
struct UserEdgeRecord {
    std::string source_user;
    std::string source_instance;
    std::string target_user;
    std::string target_instance;
};

/// User-edge file rows: `src_user_hash, src_instance, dst_user_hash, dst_instance`.
std::vector<UserEdgeRecord> read_user_edges(std::istream& in, const std::string& name = "<stream>");
std::vector<UserEdgeRecord> read_user_edges_file(const std::string& path);

struct ProjectionOptions {
    /// When set, an instance edge's weight counts distinct source users
    /// rather than distinct (source user, target user) pairs.
    bool distinct_source_users = false;
};

struct ProjectionResult {
    InstanceGraph graph;
    std::uint64_t records = 0;                // records consumed
    std::uint64_t intra_instance_records = 0; // dropped: same instance both sides
    std::uint64_t duplicate_records = 0;      // dropped: repeated user pair
};

/// Instance-level projection: edge (i, j) exists iff at least one user in i
/// follows a user in j (i != j); its weight is the number of distinct
/// cross-instance user pairs.
ProjectionResult project_to_instances(std::span<const UserEdgeRecord> records,
                                      const ProjectionOptions& opts = {});

struct OnlineOptions {
    /// Drop online nodes left without any edge in the online subnetwork.
    bool drop_isolated = true;
};

/// Induced subgraph on status == online nodes (unknown counts as offline).
/// Throws ValidationError when no node carries a known status.
InstanceGraph online_subnetwork(const InstanceGraph& g, const OnlineOptions& opts = {});

/// Union of the mastodon graph with boundary edges reaching non-mastodon
/// instances. New nodes get platform = other. A boundary edge with both
/// endpoints outside the mastodon node set is inadmissible; all offenders
/// are listed in the thrown ValidationError.
InstanceGraph expanded_network(const InstanceGraph& mastodon,
                               std::span<const EdgeRecord> boundary_edges);

} // namespace instanet
