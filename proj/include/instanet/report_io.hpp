#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "instanet/distfit.hpp"
#include "instanet/macrostats.hpp"
#include "instanet/mesoscale.hpp"
#include "instanet/ranking.hpp"

namespace instanet {

inline constexpr std::string_view kToolVersion = "0.1.0";

using json = nlohmann::json;

json stats_to_json(const StatsReport& r);
StatsReport stats_from_json(const json& j);
json fit_to_json(const FitResult& f);
json diff_rows_to_json(const std::vector<DiffRow>& rows, int decimals);

/// FNV-1a hex digest of a canonical JSON dump; stamped into every report.
std::string config_hash(const json& config);

/// `meta` object every report file carries.
json report_meta(const json& config, std::uint64_t seed);

struct PipelineConfig {
    // Inputs: either user-level records to project, or a ready edge list.
    std::string user_edges_path;
    std::string edges_path;
    std::string meta_path;
    std::string boundary_path;
    bool distinct_source_users = false;

    std::string model = "instances"; // instances | online | expanded
    std::vector<double> alphas = {0.01, 0.05};
    std::uint64_t seed = 1;
    std::string out_dir = "instanet-report";
    std::size_t exact_paths_max = 20000;
    bool unweighted_pagerank = false;
    bool include_insignificant_communities = false;
    std::uint32_t bootstrap = 1000;
    int threads = 0;

    bool run_fits = true;
    bool run_communities = true;
    bool run_cores = true;
    bool run_backbone = true;
    bool run_rank = true;
};

json config_to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const json& j);

/// Runs ingest -> model -> analyze -> prune -> rank -> compare and writes the
/// report bundle into cfg.out_dir. A manifest marks each stage; on failure
/// the manifest and partial outputs are retained and the error rethrown.
void run_pipeline(const PipelineConfig& cfg);

} // namespace instanet
