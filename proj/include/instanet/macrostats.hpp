#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "instanet/graph.hpp"

namespace instanet {

/// Fraction of directed edges (i, j) whose reverse (j, i) also exists.
/// Throws UndefinedStatError on an empty edge set.
double reciprocity(const InstanceGraph& g);

struct DegreeSummary {
    double avg_degree = 0.0;    // undirected-view degrees (orientation discarded)
    double avg_in_degree = 0.0; // |E| / n
    double pct_sources = 0.0;   // in-degree 0
    double pct_sinks = 0.0;     // out-degree 0
    std::vector<std::uint32_t> total_degree; // distinct-neighbor degree
    std::vector<std::uint32_t> in_degree;
    std::vector<std::uint32_t> out_degree;
};

DegreeSummary degree_summary(const InstanceGraph& g);

enum class AssortVariant { directed_total, undirected };

/// Pearson correlation of endpoint total degrees over the edge list.
/// directed_total pairs (deg(src), deg(dst)) once per arc; undirected pairs
/// both orientations of every undirected edge. Returns nullopt when either
/// endpoint-degree sequence has zero variance.
std::optional<double> degree_assortativity(const InstanceGraph& g, AssortVariant variant);

enum class PathMode { undirected_lwcc, directed_reachable };

struct PathOptions {
    PathMode mode = PathMode::undirected_lwcc;
    std::size_t exact_threshold = 20000; // sample sources above this many nodes in scope
    std::size_t sample_sources = 1000;
    std::uint64_t seed = 0;
};

struct PathMetrics {
    double avg_path_length = 0.0;
    std::uint32_t diameter = 0;
    bool sampled = false;
    std::uint64_t pairs = 0; // ordered reachable pairs behind the average
};

/// Unweighted-hop distances by BFS; undirected over the largest WCC by
/// default, or over directed reachable pairs. Exact up to the threshold,
/// seeded source sampling beyond it. Throws UndefinedStatError when no pair
/// is reachable (e.g. singleton graph).
PathMetrics path_metrics(const InstanceGraph& g, const PathOptions& opts = {});

struct TriadicStats {
    double transitivity = 0.0;          // 3 * triangles / connected triples
    double clustering_restricted = 0.0; // local coefficients, degree >= 2 nodes
    double clustering_full = 0.0;       // degree < 2 nodes count as zero
};

/// Triangle statistics on the undirected view.
TriadicStats triadic_stats(const InstanceGraph& g);

/// Average nearest-neighbor degree per degree value (undirected view).
std::vector<std::pair<std::uint32_t, double>> knn_distribution(const InstanceGraph& g);

/// Flat record of every macroscopic statistic; optional fields are undefined
/// for the given graph and serialize as null.
struct StatsReport {
    std::uint64_t node_count = 0;
    std::uint64_t edge_count = 0;
    std::optional<double> reciprocity;
    std::optional<double> density;
    double avg_degree = 0.0;
    double avg_in_degree = 0.0;
    double pct_sources = 0.0;
    double pct_sinks = 0.0;
    std::optional<double> assortativity_undirected;
    std::optional<double> assortativity_directed;
    std::optional<double> avg_path_length;
    std::optional<std::uint32_t> diameter;
    bool paths_sampled = false;
    double transitivity = 0.0;
    double clustering_restricted = 0.0;
    double clustering_full = 0.0;
    std::uint64_t scc_count = 0;
    std::uint64_t wcc_count = 0;
};

struct StatsOptions {
    PathOptions paths;
};

StatsReport compute_stats_report(const InstanceGraph& g, const StatsOptions& opts = {});

} // namespace instanet
