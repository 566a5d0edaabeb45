#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "instanet/graph.hpp"
#include "instanet/macrostats.hpp"

namespace instanet {

/// Node labels in descending score order; score ties broken by ascending
/// label so downstream rank comparisons are deterministic.
struct RankedList {
    std::vector<std::string> labels;
    std::vector<double> scores; // aligned with labels
    std::string tie_break = "ascending_label";
};

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-10; // L1 change between iterations
    std::uint32_t max_iter = 10000;
    bool weighted = true; // edge weights as transition weights
};

/// Weighted-out-edge PageRank with uniform redistribution of dangling mass.
/// Scores sum to 1. Throws ConvergenceError when max_iter is hit first.
RankedList pagerank(const InstanceGraph& g, const PageRankOptions& opts = {});

/// Kendall correlation over the shared label set of the two rankings,
/// tau = 1 - 2 * Delta / (N (N-1)) with Delta the number of unshared ordered
/// pairs. Throws UndefinedStatError with fewer than 2 shared labels.
double kendall_tau(const RankedList& a, const RankedList& b);

/// Fagin's top-k intersection: mean over depths 1..k of the normalized
/// prefix overlap. Throws ArgumentError when k exceeds either list.
double fagin_intersection(const RankedList& a, const RankedList& b, std::size_t k);

RankedList read_ranking_csv(std::istream& in, const std::string& name = "<stream>");
RankedList read_ranking_csv_file(const std::string& path);
void write_ranking_csv(std::ostream& out, const RankedList& r);
void write_ranking_csv_file(const std::string& path, const RankedList& r);

/// One row of a network-evolution diff: percentage change from b to a,
/// 100 * (a - b) / |b|; undefined entries propagate as n/a.
struct DiffRow {
    std::string key;
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> pct_change;
};

std::vector<DiffRow> compare_networks(const StatsReport& a, const StatsReport& b);

/// Extra comparison rows (community counts, degeneracy, ...) built the same
/// way from caller-provided values.
DiffRow diff_row(std::string key, std::optional<double> a, std::optional<double> b);

} // namespace instanet
