#include "instanet/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "instanet/backbone.hpp"
#include "instanet/coredecomp.hpp"
#include "instanet/edgelist_io.hpp"
#include "instanet/netmodel.hpp"

namespace instanet {

namespace fs = std::filesystem;

namespace {

json opt_to_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::optional<double> opt_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

} // namespace

json stats_to_json(const StatsReport& r) {
    json j;
    j["node_count"] = r.node_count;
    j["edge_count"] = r.edge_count;
    j["reciprocity"] = opt_to_json(r.reciprocity);
    j["density"] = opt_to_json(r.density);
    j["avg_degree"] = r.avg_degree;
    j["avg_in_degree"] = r.avg_in_degree;
    j["pct_sources"] = r.pct_sources;
    j["pct_sinks"] = r.pct_sinks;
    j["assortativity_undirected"] = opt_to_json(r.assortativity_undirected);
    j["assortativity_directed"] = opt_to_json(r.assortativity_directed);
    j["avg_path_length"] = opt_to_json(r.avg_path_length);
    j["diameter"] = r.diameter ? json(*r.diameter) : json(nullptr);
    j["paths_sampled"] = r.paths_sampled;
    j["transitivity"] = r.transitivity;
    j["clustering_restricted"] = r.clustering_restricted;
    j["clustering_full"] = r.clustering_full;
    j["scc_count"] = r.scc_count;
    j["wcc_count"] = r.wcc_count;
    return j;
}

StatsReport stats_from_json(const json& j) {
    StatsReport r;
    r.node_count = j.at("node_count").get<std::uint64_t>();
    r.edge_count = j.at("edge_count").get<std::uint64_t>();
    r.reciprocity = opt_from_json(j, "reciprocity");
    r.density = opt_from_json(j, "density");
    r.avg_degree = j.at("avg_degree").get<double>();
    r.avg_in_degree = j.at("avg_in_degree").get<double>();
    r.pct_sources = j.at("pct_sources").get<double>();
    r.pct_sinks = j.at("pct_sinks").get<double>();
    r.assortativity_undirected = opt_from_json(j, "assortativity_undirected");
    r.assortativity_directed = opt_from_json(j, "assortativity_directed");
    r.avg_path_length = opt_from_json(j, "avg_path_length");
    if (const auto d = opt_from_json(j, "diameter"))
        r.diameter = static_cast<std::uint32_t>(*d);
    r.paths_sampled = j.value("paths_sampled", false);
    r.transitivity = j.at("transitivity").get<double>();
    r.clustering_restricted = j.at("clustering_restricted").get<double>();
    r.clustering_full = j.at("clustering_full").get<double>();
    r.scc_count = j.at("scc_count").get<std::uint64_t>();
    r.wcc_count = j.at("wcc_count").get<std::uint64_t>();
    return r;
}

json fit_to_json(const FitResult& f) {
    json j;
    j["family"] = std::string(to_string(f.family));
    switch (f.family) {
        case FitFamily::powerlaw:
            j["alpha"] = f.alpha;
            j["xmin"] = f.xmin;
            break;
        case FitFamily::lognormal:
            j["mu"] = f.mu;
            j["sigma"] = f.sigma;
            break;
        case FitFamily::exponential:
            j["rate"] = f.rate;
            break;
        case FitFamily::poisson:
            j["mean"] = f.mean;
            break;
    }
    j["interval"] = {f.interval_lo, f.interval_hi};
    j["ks_statistic"] = f.ks_statistic;
    j["p_value"] = f.p_value;
    j["sample_size"] = f.sample_size;
    j["bootstrap_replicates"] = f.bootstrap_replicates;
    j["seed"] = f.seed;
    return j;
}

json diff_rows_to_json(const std::vector<DiffRow>& rows, int decimals) {
    json j = json::object();
    const double scale = std::pow(10.0, decimals);
    for (const DiffRow& row : rows) {
        json entry;
        entry["a"] = opt_to_json(row.a);
        entry["b"] = opt_to_json(row.b);
        if (row.pct_change) {
            entry["pct_change"] = *row.pct_change;
            entry["pct_change_rounded"] = std::round(*row.pct_change * scale) / scale;
        } else {
            entry["pct_change"] = nullptr;
            entry["pct_change_rounded"] = nullptr;
        }
        j[row.key] = entry;
    }
    return j;
}

std::string config_hash(const json& config) {
    const std::string dump = config.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json report_meta(const json& config, std::uint64_t seed) {
    json meta;
    meta["tool"] = "instanet";
    meta["version"] = std::string(kToolVersion);
    meta["config_hash"] = config_hash(config);
    meta["seed"] = seed;
    meta["config"] = config;
    return meta;
}

json config_to_json(const PipelineConfig& cfg) {
    json j;
    j["user_edges"] = cfg.user_edges_path;
    j["edges"] = cfg.edges_path;
    j["meta"] = cfg.meta_path;
    j["boundary"] = cfg.boundary_path;
    j["distinct_source_users"] = cfg.distinct_source_users;
    j["model"] = cfg.model;
    j["alphas"] = cfg.alphas;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out_dir;
    j["exact_paths_max"] = cfg.exact_paths_max;
    j["unweighted_pagerank"] = cfg.unweighted_pagerank;
    j["include_insignificant_communities"] = cfg.include_insignificant_communities;
    j["bootstrap"] = cfg.bootstrap;
    j["run_fits"] = cfg.run_fits;
    j["run_communities"] = cfg.run_communities;
    j["run_cores"] = cfg.run_cores;
    j["run_backbone"] = cfg.run_backbone;
    j["run_rank"] = cfg.run_rank;
    return j;
}

// Analysis parameters only: file locations and the output directory are
// environment, not configuration, and must not leak into report bytes.
// Fixed analysis rules that downstream readers need are spelled out too.
static json analysis_config_json(const PipelineConfig& cfg) {
    json j = config_to_json(cfg);
    for (const char* key : {"user_edges", "edges", "meta", "boundary", "out"}) j.erase(key);
    j["path_metric_mode"] = "undirected_largest_wcc";
    j["undirected_weight_rule"] = "sum";
    j["core_profile_attribution"] = "incoming->target_coreness,outgoing->source_coreness";
    return j;
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig cfg;
    cfg.user_edges_path = j.value("user_edges", "");
    cfg.edges_path = j.value("edges", "");
    cfg.meta_path = j.value("meta", "");
    cfg.boundary_path = j.value("boundary", "");
    cfg.distinct_source_users = j.value("distinct_source_users", false);
    cfg.model = j.value("model", "instances");
    if (j.contains("alphas")) cfg.alphas = j.at("alphas").get<std::vector<double>>();
    cfg.seed = j.value("seed", 1ULL);
    cfg.out_dir = j.value("out", "instanet-report");
    cfg.exact_paths_max = j.value("exact_paths_max", std::size_t{20000});
    cfg.unweighted_pagerank = j.value("unweighted_pagerank", false);
    cfg.include_insignificant_communities = j.value("include_insignificant_communities", false);
    cfg.bootstrap = j.value("bootstrap", 1000U);
    cfg.run_fits = j.value("run_fits", true);
    cfg.run_communities = j.value("run_communities", true);
    cfg.run_cores = j.value("run_cores", true);
    cfg.run_backbone = j.value("run_backbone", true);
    cfg.run_rank = j.value("run_rank", true);
    return cfg;
}

namespace {

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_csv_header(std::ofstream& out, const json& meta) {
    out << "# instanet v" << kToolVersion << " config=" << meta.at("config_hash").get<std::string>()
        << " seed=" << meta.at("seed").get<std::uint64_t>() << '\n';
}

// Type-7 (linear interpolation) quantile of a sorted vector.
double quantile7(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(sorted.size() - 1, lo + 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

json fit_or_error(const std::function<FitResult()>& f) {
    try {
        return fit_to_json(f());
    } catch (const Error& e) {
        json j;
        j["error"] = e.what();
        return j;
    }
}

struct StageTracker {
    fs::path manifest_path;
    json manifest;

    StageTracker(const fs::path& dir, const json& meta) : manifest_path(dir / "manifest.json") {
        manifest["meta"] = meta;
        manifest["stages"] = json::object();
        flush();
    }
    void mark(const std::string& stage, const std::string& status) {
        manifest["stages"][stage] = status;
        flush();
    }
    void flush() const { write_json_file(manifest_path, manifest); }
};

json community_summary(const InstanceGraph& g, const LouvainResult& lr, bool weighted_conductance,
                       bool include_insignificant) {
    json j;
    j["method"] = lr.partition.method;
    j["modularity"] = lr.score.value;
    j["variant"] = std::string(to_string(lr.score.variant));
    j["communities_total"] = lr.partition.community_count;
    j["communities_significant"] = lr.partition.significant_count();
    j["significant_size"] = lr.partition.significant_size;
    j["pass_modularity"] = lr.pass_modularity;
    auto sizes = lr.partition.sizes();
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    if (sizes.size() > 10) sizes.resize(10);
    j["top_sizes"] = sizes;

    json cond;
    const auto avg = average_pairwise_conductance(g, lr.partition, weighted_conductance,
                                                  !include_insignificant);
    cond["average"] = avg.average;
    cond["pairs"] = avg.pairs;
    json pairwise = json::object();
    const std::size_t top = std::min<std::size_t>(3, lr.partition.community_count);
    for (std::uint32_t a = 0; a < top; ++a) {
        for (std::uint32_t b = a + 1; b < top; ++b) {
            const std::string key = "top" + std::to_string(a + 1) + "_vs_top" + std::to_string(b + 1);
            try {
                pairwise[key] = conductance(g, lr.partition, a, b, weighted_conductance);
            } catch (const Error&) {
                pairwise[key] = nullptr;
            }
        }
    }
    cond["pairwise"] = pairwise;
    j["conductance"] = cond;
    return j;
}

} // namespace

void run_pipeline(const PipelineConfig& cfg) {
    const json config_json = analysis_config_json(cfg);
    const json meta = report_meta(config_json, cfg.seed);
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    StageTracker tracker(dir, meta);

    StatsOptions stats_opts;
    stats_opts.paths.exact_threshold = cfg.exact_paths_max;
    stats_opts.paths.seed = cfg.seed;

    // --- ingest + model ------------------------------------------------
    tracker.mark("ingest", "running");
    InstanceGraph instances;
    json ingest_info;
    try {
        if (!cfg.user_edges_path.empty()) {
            const auto records = read_user_edges_file(cfg.user_edges_path);
            ProjectionOptions popts;
            popts.distinct_source_users = cfg.distinct_source_users;
            auto projection = project_to_instances(records, popts);
            instances = std::move(projection.graph);
            ingest_info["user_records"] = projection.records;
            ingest_info["intra_instance_records"] = projection.intra_instance_records;
            ingest_info["duplicate_records"] = projection.duplicate_records;
        } else if (!cfg.edges_path.empty()) {
            instances = build_graph(read_edge_list_file(cfg.edges_path));
        } else {
            throw ValidationError("pipeline needs --input or --user-edges");
        }
        if (instances.edge_count() == 0)
            throw ValidationError("pipeline input produced an empty graph");
        if (!cfg.meta_path.empty())
            instances = with_metadata(instances, read_node_meta_file(cfg.meta_path));
        ingest_info["self_loops_dropped"] = instances.self_loops_dropped();
        ingest_info["nodes"] = instances.node_count();
        ingest_info["edges"] = instances.edge_count();
        tracker.manifest["ingest"] = ingest_info;
        tracker.mark("ingest", "done");
    } catch (...) {
        tracker.mark("ingest", "failed");
        throw;
    }

    // Build every model the inputs allow.
    std::vector<std::pair<std::string, const InstanceGraph*>> models;
    InstanceGraph online, expanded;
    tracker.mark("model", "running");
    try {
        models.emplace_back("instances", &instances);
        if (!cfg.meta_path.empty()) {
            online = online_subnetwork(instances);
            models.emplace_back("online", &online);
        }
        if (!cfg.boundary_path.empty()) {
            expanded = expanded_network(instances, read_edge_list_file(cfg.boundary_path));
            models.emplace_back("expanded", &expanded);
        }
        tracker.mark("model", "done");
    } catch (...) {
        tracker.mark("model", "failed");
        throw;
    }

    const InstanceGraph* selected = nullptr;
    for (const auto& [name, g] : models)
        if (name == cfg.model) selected = g;
    if (selected == nullptr)
        throw ValidationError("model '" + cfg.model + "' not available with the given inputs");
    const InstanceGraph& g = *selected;

    // --- stats ----------------------------------------------------------
    tracker.mark("stats", "running");
    StatsReport selected_stats;
    std::vector<std::pair<std::string, StatsReport>> model_stats;
    try {
        for (const auto& [name, graph] : models) {
            StatsReport r = compute_stats_report(*graph, stats_opts);
            if (name == cfg.model) selected_stats = r;
            model_stats.emplace_back(name, std::move(r));
        }
        for (const auto& [name, r] : model_stats) {
            json j;
            j["meta"] = meta;
            j["model"] = name;
            j["stats"] = stats_to_json(r);
            write_json_file(dir / (name == cfg.model ? "stats.json" : "stats_" + name + ".json"), j);
        }
        tracker.mark("stats", "done");
    } catch (...) {
        tracker.mark("stats", "failed");
        throw;
    }

    const DegreeSummary degrees = degree_summary(g);

    // --- plot data: knn -----------------------------------------------------
    auto write_knn = [&](const fs::path& path, const InstanceGraph& graph) {
        std::ofstream out(path);
        write_csv_header(out, meta);
        out << "k,knn\n";
        char buf[40];
        for (const auto& [k, v] : knn_distribution(graph)) {
            std::snprintf(buf, sizeof(buf), "%.12g", v);
            out << k << ',' << buf << '\n';
        }
    };
    tracker.mark("plots", "running");
    try {
        write_knn(dir / "knn.csv", g);
        tracker.mark("plots", "done");
    } catch (...) {
        tracker.mark("plots", "failed");
        throw;
    }

    // --- fits + ccdf plot data ---------------------------------------------
    // The CCDF files pair the empirical points with fitted-curve samples for
    // every family whose fit succeeded.
    auto write_ccdf = [&](const std::string& kind, const std::vector<double>& values,
                          const std::vector<std::pair<std::string, FitResult>>& curve_fits) {
        std::ofstream out(dir / ("ccdf_" + kind + ".csv"));
        write_csv_header(out, meta);
        out << "x,ccdf";
        for (const auto& [name, fit] : curve_fits) out << ',' << name;
        out << '\n';
        char buf[40];
        for (const CcdfPoint& p : ccdf(values)) {
            std::snprintf(buf, sizeof(buf), "%.12g", p.p);
            out << format_weight(p.x) << ',' << buf;
            for (const auto& [name, fit] : curve_fits) {
                std::snprintf(buf, sizeof(buf), "%.12g", fitted_ccdf(fit, p.x));
                out << ',' << buf;
            }
            out << '\n';
        }
    };
    const std::pair<const char*, const std::vector<std::uint32_t>*> degree_kinds[] = {
        {"degree", &degrees.total_degree},
        {"in_degree", &degrees.in_degree},
        {"out_degree", &degrees.out_degree},
    };
    if (cfg.run_fits) {
        tracker.mark("fits", "running");
        try {
            BootstrapOptions bopts;
            bopts.replicates = cfg.bootstrap;
            bopts.seed = cfg.seed;
            bopts.threads = cfg.threads;
            json fits;
            fits["meta"] = meta;
            for (const auto& [kind, vec] : degree_kinds) {
                std::vector<double> values;
                for (const auto d : *vec)
                    if (d >= 1) values.push_back(static_cast<double>(d));
                std::sort(values.begin(), values.end());
                json row;
                if (values.empty()) {
                    row["error"] = "no nodes with degree >= 1";
                    fits[kind] = row;
                    continue;
                }
                const double maxv = values.back();
                // Boxplot whisker: largest observation within 1.5 IQR of Q3.
                const double q1 = quantile7(values, 0.25), q3 = quantile7(values, 0.75);
                const double fence = q3 + 1.5 * (q3 - q1);
                double whisker = values.front();
                for (double v : values)
                    if (v <= fence) whisker = v;

                std::vector<std::pair<std::string, FitResult>> curve_fits;
                auto keep_curve = [&](const char* name, const json& j) {
                    if (!j.contains("error")) {
                        FitResult f;
                        f.family = j.at("family") == "powerlaw"      ? FitFamily::powerlaw
                                   : j.at("family") == "lognormal"   ? FitFamily::lognormal
                                   : j.at("family") == "exponential" ? FitFamily::exponential
                                                                     : FitFamily::poisson;
                        f.alpha = j.value("alpha", 0.0);
                        f.xmin = j.value("xmin", 0.0);
                        f.mu = j.value("mu", 0.0);
                        f.sigma = j.value("sigma", 0.0);
                        f.rate = j.value("rate", 0.0);
                        f.mean = j.value("mean", 0.0);
                        f.interval_lo = j.at("interval")[0].get<double>();
                        f.interval_hi = j.at("interval")[1].get<double>();
                        curve_fits.emplace_back(name, f);
                    }
                };
                row["powerlaw"] = fit_or_error([&] { return fit_powerlaw(values, bopts); });
                keep_curve("powerlaw", row["powerlaw"]);
                row["lognormal_full"] =
                    fit_or_error([&] { return fit_lognormal(values, 1.0, maxv, bopts); });
                keep_curve("lognormal", row["lognormal_full"]);
                row["lognormal_no_outliers"] =
                    fit_or_error([&] { return fit_lognormal(values, 1.0, whisker, bopts); });
                if (maxv >= 51.0) {
                    row["lognormal_tail"] =
                        fit_or_error([&] { return fit_lognormal(values, 51.0, maxv, bopts); });
                } else {
                    row["lognormal_tail"] = {{"error", "interval excludes all data: no degrees >= 51"}};
                }
                if (whisker >= 51.0) {
                    row["lognormal_tail_no_outliers"] =
                        fit_or_error([&] { return fit_lognormal(values, 51.0, whisker, bopts); });
                } else {
                    row["lognormal_tail_no_outliers"] = {
                        {"error", "interval excludes all data: no non-outlier degrees >= 51"}};
                }
                row["exponential"] =
                    fit_or_error([&] { return fit_reference(values, FitFamily::exponential, bopts); });
                keep_curve("exponential", row["exponential"]);
                row["poisson"] =
                    fit_or_error([&] { return fit_reference(values, FitFamily::poisson, bopts); });
                keep_curve("poisson", row["poisson"]);
                fits[kind] = row;
                write_ccdf(kind, values, curve_fits);
            }
            write_json_file(dir / "fits.json", fits);
            tracker.mark("fits", "done");
        } catch (...) {
            tracker.mark("fits", "failed");
            throw;
        }
    } else {
        // Empirical CCDFs are still plot data worth having without fits.
        for (const auto& [kind, vec] : degree_kinds) {
            std::vector<double> values;
            for (const auto d : *vec)
                if (d >= 1) values.push_back(static_cast<double>(d));
            if (!values.empty()) write_ccdf(kind, values, {});
        }
        tracker.mark("fits", "skipped");
    }

    // --- communities --------------------------------------------------------
    LouvainResult louvain_directed;
    bool have_louvain = false;
    if (cfg.run_communities) {
        tracker.mark("communities", "running");
        try {
            json communities;
            communities["meta"] = meta;
            json conductance_report;
            conductance_report["meta"] = meta;
            const LouvainResult undirected =
                louvain(g, ModularityVariant::undirected_unweighted, cfg.seed);
            louvain_directed = louvain(g, ModularityVariant::directed_weighted, cfg.seed);
            have_louvain = true;
            communities["louvain_undirected"] = community_summary(
                g, undirected, false, cfg.include_insignificant_communities);
            communities["louvain_directed_weighted"] = community_summary(
                g, louvain_directed, true, cfg.include_insignificant_communities);
            conductance_report["louvain_undirected_unweighted"] =
                communities["louvain_undirected"]["conductance"];
            conductance_report["louvain_directed_weighted"] =
                communities["louvain_directed_weighted"]["conductance"];
            write_json_file(dir / "communities.json", communities);
            write_json_file(dir / "conductance.json", conductance_report);
            export_partition_file((dir / "partition_directed.tsv").string(), g,
                                  louvain_directed.partition);
            // knn(k) inside the three largest communities of the weighted
            // directed partition, alongside the whole-network curve.
            const std::size_t top =
                std::min<std::size_t>(3, louvain_directed.partition.community_count);
            for (std::uint32_t c = 0; c < top; ++c) {
                std::vector<bool> keep(g.node_count());
                for (NodeId v = 0; v < g.node_count(); ++v)
                    keep[v] = louvain_directed.partition.community[v] == c;
                const InstanceGraph sub = induced_subgraph(g, keep);
                write_knn(dir / ("knn_community_top" + std::to_string(c + 1) + ".csv"), sub);
            }
            tracker.mark("communities", "done");
        } catch (...) {
            tracker.mark("communities", "failed");
            throw;
        }
    } else {
        tracker.mark("communities", "skipped");
    }

    // --- cores ---------------------------------------------------------------
    if (cfg.run_cores) {
        tracker.mark("cores", "running");
        try {
            json cores;
            cores["meta"] = meta;
            for (const DegreeVariant variant :
                 {DegreeVariant::total, DegreeVariant::in, DegreeVariant::out}) {
                const std::string name(to_string(variant));
                const CorenessMap cmap = core_decomposition(g, variant);
                const InstanceGraph inner = innermost_core(g, cmap);
                const CoreLinkProfile profile = core_link_profile(g, cmap);
                json entry;
                entry["degeneracy"] = cmap.degeneracy;
                entry["innermost_nodes"] = inner.node_count();
                entry["innermost_edges"] = inner.edge_count();
                entry["innermost_edge_fraction"] = profile.innermost_edge_fraction;
                entry["innermost_stats"] = stats_to_json(compute_stats_report(inner, stats_opts));
                cores[name] = entry;

                {
                    std::ofstream out(dir / ("core_profile_" + name + ".csv"));
                    write_csv_header(out, meta);
                    out << "# edge attribution: incoming -> target coreness, outgoing -> source coreness\n";
                    out << "core_index,in_links,out_links\n";
                    for (const auto& row : profile.rows)
                        out << row.core_index << ',' << row.in_links << ',' << row.out_links << '\n';
                }
                {
                    std::ofstream out(dir / ("coreness_" + name + ".tsv"));
                    for (NodeId v = 0; v < g.node_count(); ++v)
                        out << g.label(v) << '\t' << cmap.coreness[v] << '\n';
                }
            }
            write_json_file(dir / "cores.json", cores);
            tracker.mark("cores", "done");
        } catch (...) {
            tracker.mark("cores", "failed");
            throw;
        }
    } else {
        tracker.mark("cores", "skipped");
    }

    // --- backbone ---------------------------------------------------------
    if (cfg.run_backbone) {
        tracker.mark("backbone", "running");
        try {
            for (const BackboneModel model : {BackboneModel::mlf, BackboneModel::disparity}) {
                const std::string mname(to_string(model));
                {
                    const auto rows = edge_significance(g, model, cfg.threads);
                    std::ofstream out(dir / ("significance_" + mname + ".csv"));
                    write_csv_header(out, meta);
                    export_significance_csv(out, g, rows);
                }
                for (const double alpha : cfg.alphas) {
                    const InstanceGraph pruned = prune(g, model, alpha, cfg.threads);
                    char aname[32];
                    std::snprintf(aname, sizeof(aname), "%g", alpha);
                    json j;
                    j["meta"] = meta;
                    j["model"] = mname;
                    j["alpha"] = alpha;
                    j["nodes"] = pruned.node_count();
                    j["edges"] = pruned.edge_count();
                    j["stats"] = stats_to_json(compute_stats_report(pruned, stats_opts));
                    if (pruned.edge_count() > 0) {
                        const auto lu =
                            louvain(pruned, ModularityVariant::undirected_unweighted, cfg.seed);
                        const auto ld = louvain(pruned, ModularityVariant::directed_weighted, cfg.seed);
                        j["louvain_undirected"] = {
                            {"modularity", lu.score.value},
                            {"communities_total", lu.partition.community_count},
                            {"communities_significant", lu.partition.significant_count()}};
                        j["louvain_directed_weighted"] = {
                            {"modularity", ld.score.value},
                            {"communities_total", ld.partition.community_count},
                            {"communities_significant", ld.partition.significant_count()}};
                    }
                    const std::string stem = "backbone_" + mname + "_" + aname;
                    write_json_file(dir / (stem + ".json"), j);
                    write_edge_list_file((dir / (stem + ".edges")).string(), pruned);
                }
            }
            tracker.mark("backbone", "done");
        } catch (...) {
            tracker.mark("backbone", "failed");
            throw;
        }
    } else {
        tracker.mark("backbone", "skipped");
    }

    // --- rankings + comparisons -------------------------------------------
    if (cfg.run_rank) {
        tracker.mark("rank", "running");
        try {
            PageRankOptions propts;
            propts.weighted = !cfg.unweighted_pagerank;
            std::vector<std::pair<std::string, RankedList>> rankings;
            for (const auto& [name, graph] : models) {
                rankings.emplace_back(name, pagerank(*graph, propts));
                write_ranking_csv_file((dir / ("ranking_" + name + ".csv")).string(),
                                       rankings.back().second);
            }
            json cmp;
            cmp["meta"] = meta;
            cmp["weighted_pagerank"] = propts.weighted;
            cmp["damping"] = propts.damping;
            json pairs = json::object();
            for (std::size_t i = 0; i < rankings.size(); ++i) {
                for (std::size_t k = i + 1; k < rankings.size(); ++k) {
                    const auto& [na, ra] = rankings[i];
                    const auto& [nb, rb] = rankings[k];
                    json entry;
                    try {
                        entry["kendall_tau"] = kendall_tau(ra, rb);
                    } catch (const Error&) {
                        entry["kendall_tau"] = nullptr;
                    }
                    json fagin = json::object();
                    for (const std::size_t depth : {10UL, 50UL, 100UL, 500UL, 1000UL}) {
                        const std::size_t cap = std::min(ra.labels.size(), rb.labels.size());
                        if (depth > cap) continue;
                        fagin["f" + std::to_string(depth)] = fagin_intersection(ra, rb, depth);
                    }
                    entry["fagin"] = fagin;
                    pairs[na + "_vs_" + nb] = entry;
                }
            }
            cmp["pairs"] = pairs;
            write_json_file(dir / "ranking_comparison.json", cmp);
            tracker.mark("rank", "done");
        } catch (...) {
            tracker.mark("rank", "failed");
            throw;
        }
    } else {
        tracker.mark("rank", "skipped");
    }

    tracker.mark("compare", "running");
    try {
        json cmp;
        cmp["meta"] = meta;
        json entries = json::object();
        for (const auto& [name, r] : model_stats) {
            if (name == cfg.model) continue;
            auto rows = compare_networks(selected_stats, r);
            if (have_louvain) {
                // Significant community count carried as an extra row when
                // both sides were analyzed (only the selected model is).
                rows.push_back(diff_row("communities_significant",
                                        static_cast<double>(
                                            louvain_directed.partition.significant_count()),
                                        std::nullopt));
            }
            entries[cfg.model + "_vs_" + name] = diff_rows_to_json(rows, 0);
        }
        cmp["comparisons"] = entries;
        write_json_file(dir / "comparison.json", cmp);
        tracker.mark("compare", "done");
    } catch (...) {
        tracker.mark("compare", "failed");
        throw;
    }
}

} // namespace instanet
