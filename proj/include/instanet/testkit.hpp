#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "instanet/graph.hpp"
#include "instanet/netmodel.hpp"

namespace instanet::testkit {

// ---------------------------------------------------------------------------
// Seeded generators. Identical spec -> byte-identical output.
// ---------------------------------------------------------------------------

struct GnpSpec {
    std::size_t n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::uint32_t max_weight = 1; // weights uniform in [1, max_weight]
};

InstanceGraph gen_gnp_directed(const GnpSpec& spec);

struct PlantedPartitionSpec {
    std::size_t blocks = 4;
    std::size_t block_size = 25;
    double p_in = 0.3;
    double p_out = 0.01;
    std::uint64_t seed = 0;
};

struct PlantedPartitionResult {
    InstanceGraph graph;
    std::vector<std::uint32_t> block_of; // ground truth, node -> block
};

PlantedPartitionResult gen_planted_partition(const PlantedPartitionSpec& spec);

/// Synthetic federation: instances with lognormally sized user populations,
/// preference-biased cross-instance follows, online/offline statuses, and a
/// fringe of non-mastodon instances. Produces the raw inputs the pipeline
/// ingests, so projection and modeling can be exercised end to end.
struct FederatedSimSpec {
    std::size_t instances = 40;
    double user_mu = 2.5;      // lognormal parameters of users-per-instance
    double user_sigma = 0.9;
    double follows_per_user = 6.0; // Poisson mean
    std::size_t communities = 4;
    double affinity = 0.8;     // probability a follow stays in the home community
    double online_fraction = 0.6;
    std::size_t boundary_instances = 8;
    double boundary_edges_per_instance = 12.0;
    std::uint64_t seed = 0;
};

struct FederatedSim {
    std::vector<UserEdgeRecord> user_edges;
    std::vector<std::pair<std::string, NodeMeta>> meta; // mastodon instances
    std::vector<EdgeRecord> boundary_edges;             // >=1 endpoint mastodon
};

FederatedSim gen_federated_sim(const FederatedSimSpec& spec);

/// Discrete power-law sample on {xmin, xmin+1, ...} via inverse-CDF over a
/// directly summed probability table (independent of the fitting code).
std::vector<double> gen_powerlaw_sample(double alpha, std::uint64_t xmin, std::size_t n,
                                        std::uint64_t seed);
std::vector<double> gen_lognormal_sample(double mu, double sigma, std::size_t n, std::uint64_t seed);
std::vector<double> gen_exponential_sample(double rate, std::size_t n, std::uint64_t seed);
std::vector<double> gen_poisson_sample(double mean, std::size_t n, std::uint64_t seed);
std::vector<double> gen_geometric_sample(double p, std::size_t n, std::uint64_t seed);

/// Parsed form of the JSON generator spec accepted by the `gen` subcommand.
struct GeneratorSpec {
    std::string family; // gnp_directed | planted_partition | federated_sim |
                        // powerlaw_sample | lognormal_sample
    GnpSpec gnp;
    PlantedPartitionSpec planted;
    FederatedSimSpec federated;
    double alpha = 2.5;
    std::uint64_t xmin = 1;
    double mu = 0.0, sigma = 1.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

GeneratorSpec parse_generator_spec(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Brute-force oracles. Each is a naive recomputation from the defining
// formula, sharing no code with the optimized implementations it checks.
// Oracles refuse inputs beyond their documented size guard.
// ---------------------------------------------------------------------------

namespace oracle {

/// (scc_count, wcc_count) via Floyd-Warshall reachability. Guard: n <= 256.
std::pair<std::size_t, std::size_t> component_counts(const InstanceGraph& g);

/// Fraction of directed edges whose reverse exists. Guard: |E| <= 1e6.
double reciprocity(const InstanceGraph& g);

/// (transitivity, clustering_restricted, clustering_full) by O(n^3) triangle
/// enumeration on the undirected view. Guard: n <= 256.
struct Triadic { double transitivity, clustering_restricted, clustering_full; };
Triadic triadic(const InstanceGraph& g);

/// Pearson correlation of endpoint degrees straight from the definition.
/// variant: 0 = directed_total, 1 = undirected. Guard: |E| <= 1e6.
std::optional<double> assortativity(const InstanceGraph& g, int variant);

/// All-pairs hop distances by Floyd-Warshall; returns (avg, diameter) over
/// the requested mode: 0 = undirected largest WCC, 1 = directed reachable
/// pairs. Guard: n <= 256.
std::pair<double, std::uint32_t> path_metrics(const InstanceGraph& g, int mode);

/// knn(k) by direct per-node tally on the undirected view. Guard: n <= 4096.
std::vector<std::pair<std::uint32_t, double>> knn(const InstanceGraph& g);

/// Coreness by repeated-scan iterative deletion. variant: 0 total, 1 in,
/// 2 out. Guard: n <= 512.
std::vector<std::uint32_t> coreness(const InstanceGraph& g, int variant);

/// Modularity by the O(n^2) double sum. variant: 0 undirected_unweighted,
/// 1 directed_weighted. Guard: n <= 2048.
double modularity(const InstanceGraph& g, const std::vector<std::uint32_t>& community, int variant);

/// Exact binomial survival sum P[Bin(T, p) >= w]. Guard: T <= 1e6.
double binomial_survival(std::uint64_t trials, double p, std::uint64_t w);

/// Disparity p-value by adaptive-Simpson integration of the uniform null
/// density (k-1)(1-x)^(k-2) over [p, 1].
double disparity_alpha(double normalized_weight, std::uint64_t k);

/// Dense power-iteration PageRank. Guard: n <= 512.
std::vector<double> pagerank(const InstanceGraph& g, double damping, bool weighted,
                             std::uint32_t iterations);

/// Kendall tau by O(n^2) pair counting over two equal-length orderings of
/// the same item set (items identified by index). Guard: n <= 20000.
double kendall_tau(const std::vector<std::uint32_t>& order_a,
                   const std::vector<std::uint32_t>& order_b);

/// Full-scan KS distance between a sorted sample and a CDF, evaluated the
/// discrete way (at sample points, right-inclusive) or the continuous way
/// (both one-sided gaps at each order statistic).
double ks_distance(const std::vector<double>& sorted_sample,
                   const std::function<double(double)>& cdf, bool discrete);

/// Hurwitz zeta by direct Kahan summation with an Euler-Maclaurin tail
/// attached far out; used to build reference power-law CDFs.
double hurwitz_zeta(double s, double a);

} // namespace oracle

} // namespace instanet::testkit
