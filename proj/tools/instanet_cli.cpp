// instanet: structural analysis of federated-instance networks.
//
// Subcommands mirror the pipeline stages: ingest -> project -> stats -> fit
// -> communities -> cores -> backbone -> rank -> compare, plus `gen` for
// synthetic data and `report` to run everything into a bundle.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "instanet/backbone.hpp"
#include "instanet/coredecomp.hpp"
#include "instanet/distfit.hpp"
#include "instanet/edgelist_io.hpp"
#include "instanet/macrostats.hpp"
#include "instanet/mesoscale.hpp"
#include "instanet/netmodel.hpp"
#include "instanet/ranking.hpp"
#include "instanet/report_io.hpp"
#include "instanet/testkit.hpp"

namespace fs = std::filesystem;
using instanet::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitConvergence = 3;

std::string default_out_dir() {
    if (const char* env = std::getenv("INSTANET_OUT")) return env;
    return "instanet-report";
}

instanet::InstanceGraph load_graph(const std::string& edges, const std::string& meta) {
    auto g = instanet::build_graph(instanet::read_edge_list_file(edges));
    if (!meta.empty()) g = instanet::with_metadata(g, instanet::read_node_meta_file(meta));
    return g;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out) throw instanet::ValidationError("cannot write " + out_path);
        out << j.dump(2) << '\n';
    }
}

int dispatch(CLI::App& app, int argc, char** argv) {
    CLI11_PARSE(app, argc, argv);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"instanet: directed weighted analysis of federated instance networks"};
    app.require_subcommand(1);

    // ---- ingest --------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "validate an edge list and write it canonically");
    std::string in_edges, in_meta, out_edges, out_meta;
    ingest->add_option("--input", in_edges, "edge list (source, target[, weight])")->required();
    ingest->add_option("--meta", in_meta, "node metadata (label, status, platform)");
    ingest->add_option("--out", out_edges, "canonical edge list destination");
    ingest->add_option("--out-meta", out_meta, "canonical metadata destination");
    ingest->callback([&] {
        const auto g = load_graph(in_edges, in_meta);
        if (!out_edges.empty()) instanet::write_edge_list_file(out_edges, g);
        if (!out_meta.empty()) instanet::write_node_meta_file(out_meta, g);
        json j;
        j["nodes"] = g.node_count();
        j["edges"] = g.edge_count();
        j["self_loops_dropped"] = g.self_loops_dropped();
        std::cout << j.dump(2) << '\n';
    });

    // ---- project ---------------------------------------------------------
    auto* project = app.add_subcommand("project", "project user-level follows to instance edges");
    std::string proj_in, proj_out, proj_meta;
    bool distinct_sources = false;
    project->add_option("--input", proj_in, "user edge file")->required();
    project->add_option("--out", proj_out, "instance edge list destination")->required();
    project->add_option("--meta", proj_meta, "node metadata to attach");
    project->add_flag("--distinct-source-users", distinct_sources,
                      "weight counts distinct source users instead of user pairs");
    project->callback([&] {
        const auto records = instanet::read_user_edges_file(proj_in);
        instanet::ProjectionOptions opts;
        opts.distinct_source_users = distinct_sources;
        auto res = instanet::project_to_instances(records, opts);
        auto g = std::move(res.graph);
        if (!proj_meta.empty())
            g = instanet::with_metadata(g, instanet::read_node_meta_file(proj_meta));
        instanet::write_edge_list_file(proj_out, g);
        json j;
        j["records"] = res.records;
        j["intra_instance_records"] = res.intra_instance_records;
        j["duplicate_records"] = res.duplicate_records;
        j["nodes"] = g.node_count();
        j["edges"] = g.edge_count();
        std::cout << j.dump(2) << '\n';
    });

    // ---- stats ------------------------------------------------------------
    auto* stats = app.add_subcommand("stats", "macroscopic statistics of a network");
    std::string st_edges, st_meta, st_out, st_model = "instances";
    std::size_t st_exact = 20000;
    std::uint64_t st_seed = 1;
    stats->add_option("--input", st_edges, "edge list")->required();
    stats->add_option("--meta", st_meta, "node metadata");
    stats->add_option("--model", st_model, "instances|online (online needs --meta)");
    stats->add_option("--exact-paths-max", st_exact, "exact path metrics up to this many nodes");
    stats->add_option("--seed", st_seed, "seed for path sampling");
    stats->add_option("--out", st_out, "write JSON here instead of stdout");
    stats->callback([&] {
        auto g = load_graph(st_edges, st_meta);
        if (st_model == "online") g = instanet::online_subnetwork(g);
        else if (st_model != "instances")
            throw instanet::ValidationError("unknown model: " + st_model);
        instanet::StatsOptions opts;
        opts.paths.exact_threshold = st_exact;
        opts.paths.seed = st_seed;
        json j;
        j["model"] = st_model;
        j["stats"] = instanet::stats_to_json(instanet::compute_stats_report(g, opts));
        emit(j, st_out);
    });

    // ---- fit ---------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "degree distribution fits with KS significance");
    std::string fit_edges, fit_out, fit_kind = "in_degree";
    std::uint32_t fit_boot = 1000;
    std::uint64_t fit_seed = 1;
    double fit_lo = 0, fit_hi = 0;
    fit->add_option("--input", fit_edges, "edge list")->required();
    fit->add_option("--which", fit_kind, "degree|in_degree|out_degree");
    fit->add_option("--bootstrap", fit_boot, "bootstrap replicates (default 1000)");
    fit->add_option("--seed", fit_seed, "bootstrap seed");
    fit->add_option("--lognormal-lo", fit_lo, "extra lognormal interval low edge");
    fit->add_option("--lognormal-hi", fit_hi, "extra lognormal interval high edge");
    fit->add_option("--out", fit_out, "write JSON here instead of stdout");
    fit->callback([&] {
        const auto g = load_graph(fit_edges, "");
        const auto deg = instanet::degree_summary(g);
        const std::vector<std::uint32_t>* vec = &deg.in_degree;
        if (fit_kind == "degree") vec = &deg.total_degree;
        else if (fit_kind == "out_degree") vec = &deg.out_degree;
        else if (fit_kind != "in_degree")
            throw instanet::ValidationError("unknown degree kind: " + fit_kind);
        std::vector<double> values;
        for (auto d : *vec)
            if (d >= 1) values.push_back(d);
        instanet::BootstrapOptions opts;
        opts.replicates = fit_boot;
        opts.seed = fit_seed;
        json j;
        j["which"] = fit_kind;
        j["powerlaw"] = instanet::fit_to_json(instanet::fit_powerlaw(values, opts));
        const double hi = fit_hi > 0 ? fit_hi : *std::max_element(values.begin(), values.end());
        const double lo = fit_lo > 0 ? fit_lo : 1.0;
        j["lognormal"] = instanet::fit_to_json(instanet::fit_lognormal(values, lo, hi, opts));
        j["exponential"] = instanet::fit_to_json(
            instanet::fit_reference(values, instanet::FitFamily::exponential, opts));
        j["poisson"] = instanet::fit_to_json(
            instanet::fit_reference(values, instanet::FitFamily::poisson, opts));
        emit(j, fit_out);
    });

    // ---- communities ---------------------------------------------------------
    auto* comm = app.add_subcommand("communities", "louvain communities / score a partition");
    std::string cm_edges, cm_out, cm_partition_out, cm_import, cm_variant = "directed_weighted";
    std::uint64_t cm_seed = 1;
    bool cm_include_insig = false;
    comm->add_option("--input", cm_edges, "edge list")->required();
    comm->add_option("--variant", cm_variant, "undirected_unweighted|directed_weighted");
    comm->add_option("--seed", cm_seed, "louvain seed");
    comm->add_option("--import", cm_import, "score an external partition file instead");
    comm->add_option("--partition-out", cm_partition_out, "write the partition here");
    comm->add_flag("--include-insignificant-communities", cm_include_insig,
                   "average conductance over all community pairs");
    comm->add_option("--out", cm_out, "write JSON here instead of stdout");
    comm->callback([&] {
        const auto g = load_graph(cm_edges, "");
        const auto variant = cm_variant == "undirected_unweighted"
                                 ? instanet::ModularityVariant::undirected_unweighted
                                 : instanet::ModularityVariant::directed_weighted;
        if (cm_variant != "undirected_unweighted" && cm_variant != "directed_weighted")
            throw instanet::ValidationError("unknown variant: " + cm_variant);
        json j;
        if (!cm_import.empty()) {
            std::vector<std::string> unknown;
            const auto p = instanet::import_partition_file(cm_import, g, &unknown);
            if (!unknown.empty()) {
                std::cerr << "warning: " << unknown.size()
                          << " partition label(s) not in the graph\n";
                j["unknown_labels"] = unknown.size();
            }
            j["method"] = p.method;
            j["communities_total"] = p.community_count;
            j["communities_significant"] = p.significant_count();
            j["modularity"] = instanet::modularity(g, p, variant).value;
            const auto avg = instanet::average_pairwise_conductance(
                g, p, variant == instanet::ModularityVariant::directed_weighted,
                !cm_include_insig);
            j["conductance_average"] = avg.average;
            if (!cm_partition_out.empty()) instanet::export_partition_file(cm_partition_out, g, p);
        } else {
            const auto lr = instanet::louvain(g, variant, cm_seed);
            j["method"] = lr.partition.method;
            j["communities_total"] = lr.partition.community_count;
            j["communities_significant"] = lr.partition.significant_count();
            j["modularity"] = lr.score.value;
            j["pass_modularity"] = lr.pass_modularity;
            const auto avg = instanet::average_pairwise_conductance(
                g, lr.partition, variant == instanet::ModularityVariant::directed_weighted,
                !cm_include_insig);
            j["conductance_average"] = avg.average;
            if (!cm_partition_out.empty())
                instanet::export_partition_file(cm_partition_out, g, lr.partition);
        }
        emit(j, cm_out);
    });

    // ---- cores -----------------------------------------------------------------
    auto* cores = app.add_subcommand("cores", "k-core decomposition");
    std::string co_edges, co_out_dir, co_variant = "all";
    cores->add_option("--input", co_edges, "edge list")->required();
    cores->add_option("--variant", co_variant, "total|in|out|all");
    cores->add_option("--out", co_out_dir, "directory for coreness/profile files")->required();
    cores->callback([&] {
        const auto g = load_graph(co_edges, "");
        fs::create_directories(co_out_dir);
        json j;
        for (const auto variant : {instanet::DegreeVariant::total, instanet::DegreeVariant::in,
                                   instanet::DegreeVariant::out}) {
            const std::string name(instanet::to_string(variant));
            if (co_variant != "all" && co_variant != name) continue;
            const auto cmap = instanet::core_decomposition(g, variant);
            const auto inner = instanet::innermost_core(g, cmap);
            const auto profile = instanet::core_link_profile(g, cmap);
            {
                std::ofstream out(fs::path(co_out_dir) / ("coreness_" + name + ".tsv"));
                for (instanet::NodeId v = 0; v < g.node_count(); ++v)
                    out << g.label(v) << '\t' << cmap.coreness[v] << '\n';
            }
            {
                std::ofstream out(fs::path(co_out_dir) / ("core_profile_" + name + ".csv"));
                out << "core_index,in_links,out_links\n";
                for (const auto& row : profile.rows)
                    out << row.core_index << ',' << row.in_links << ',' << row.out_links << '\n';
            }
            j[name] = {{"degeneracy", cmap.degeneracy},
                       {"innermost_nodes", inner.node_count()},
                       {"innermost_edges", inner.edge_count()},
                       {"innermost_edge_fraction", profile.innermost_edge_fraction}};
        }
        std::cout << j.dump(2) << '\n';
    });

    // ---- backbone -----------------------------------------------------------
    auto* backbone = app.add_subcommand("backbone", "statistical backbone extraction");
    std::string bb_edges, bb_out_dir, bb_model = "mlf";
    std::vector<double> bb_alphas;
    backbone->add_option("--input", bb_edges, "edge list")->required();
    backbone->add_option("--model", bb_model, "mlf|disparity");
    backbone->add_option("--alpha", bb_alphas, "significance level (repeatable)");
    backbone->add_option("--out", bb_out_dir, "directory for pruned networks")->required();
    backbone->callback([&] {
        const auto g = load_graph(bb_edges, "");
        if (bb_model != "mlf" && bb_model != "disparity")
            throw instanet::ValidationError("unknown backbone model: " + bb_model);
        const auto model = bb_model == "mlf" ? instanet::BackboneModel::mlf
                                             : instanet::BackboneModel::disparity;
        if (bb_alphas.empty()) bb_alphas = {0.01, 0.05};
        fs::create_directories(bb_out_dir);
        {
            std::ofstream out(fs::path(bb_out_dir) / ("significance_" + bb_model + ".csv"));
            instanet::export_significance_csv(out, g, instanet::edge_significance(g, model));
        }
        json j;
        for (const double alpha : bb_alphas) {
            const auto pruned = instanet::prune(g, model, alpha);
            char aname[32];
            std::snprintf(aname, sizeof(aname), "%g", alpha);
            instanet::write_edge_list_file(
                (fs::path(bb_out_dir) / ("backbone_" + bb_model + "_" + aname + ".edges")).string(),
                pruned);
            j[aname] = {{"nodes", pruned.node_count()}, {"edges", pruned.edge_count()}};
        }
        std::cout << j.dump(2) << '\n';
    });

    // ---- rank -------------------------------------------------------------------
    auto* rank = app.add_subcommand("rank", "pagerank prestige scores");
    std::string rk_edges, rk_out;
    double rk_damping = 0.85, rk_tol = 1e-10;
    std::uint32_t rk_max_iter = 10000;
    bool rk_unweighted = false;
    rank->add_option("--input", rk_edges, "edge list")->required();
    rank->add_option("--damping", rk_damping, "damping factor (default 0.85)");
    rank->add_option("--tol", rk_tol, "L1 convergence tolerance");
    rank->add_option("--max-iter", rk_max_iter, "iteration cap");
    rank->add_flag("--unweighted-pagerank", rk_unweighted, "ignore edge weights");
    rank->add_option("--out", rk_out, "ranking CSV destination")->required();
    rank->callback([&] {
        const auto g = load_graph(rk_edges, "");
        instanet::PageRankOptions opts;
        opts.damping = rk_damping;
        opts.tol = rk_tol;
        opts.max_iter = rk_max_iter;
        opts.weighted = !rk_unweighted;
        instanet::write_ranking_csv_file(rk_out, instanet::pagerank(g, opts));
        std::cout << "{\"written\": \"" << rk_out << "\"}\n";
    });

    // ---- compare -------------------------------------------------------------
    auto* compare = app.add_subcommand("compare", "diff two stats reports or two rankings");
    std::string cp_a, cp_b, cp_rank_a, cp_rank_b, cp_out;
    int cp_decimals = 0;
    std::vector<std::size_t> cp_depths;
    compare->add_option("--a", cp_a, "stats JSON (current network)");
    compare->add_option("--b", cp_b, "stats JSON (reference network)");
    compare->add_option("--rank-a", cp_rank_a, "ranking CSV");
    compare->add_option("--rank-b", cp_rank_b, "ranking CSV");
    compare->add_option("--decimals", cp_decimals, "rounding for percentage changes");
    compare->add_option("--fagin-depth", cp_depths, "top-k depths (repeatable)");
    compare->add_option("--out", cp_out, "write JSON here instead of stdout");
    compare->callback([&] {
        json j;
        if (!cp_a.empty() || !cp_b.empty()) {
            if (cp_a.empty() || cp_b.empty())
                throw instanet::ValidationError("compare needs both --a and --b");
            std::ifstream fa(cp_a), fb(cp_b);
            if (!fa) throw instanet::ValidationError("cannot open " + cp_a);
            if (!fb) throw instanet::ValidationError("cannot open " + cp_b);
            json ja = json::parse(fa), jb = json::parse(fb);
            const auto a = instanet::stats_from_json(ja.contains("stats") ? ja["stats"] : ja);
            const auto b = instanet::stats_from_json(jb.contains("stats") ? jb["stats"] : jb);
            j["stats_diff"] = instanet::diff_rows_to_json(instanet::compare_networks(a, b),
                                                          cp_decimals);
        }
        if (!cp_rank_a.empty() || !cp_rank_b.empty()) {
            if (cp_rank_a.empty() || cp_rank_b.empty())
                throw instanet::ValidationError("compare needs both --rank-a and --rank-b");
            const auto ra = instanet::read_ranking_csv_file(cp_rank_a);
            const auto rb = instanet::read_ranking_csv_file(cp_rank_b);
            j["kendall_tau"] = instanet::kendall_tau(ra, rb);
            if (cp_depths.empty()) cp_depths = {10, 50, 100, 500, 1000};
            json fagin = json::object();
            for (const std::size_t k : cp_depths) {
                if (k > std::min(ra.labels.size(), rb.labels.size())) continue;
                fagin["f" + std::to_string(k)] = instanet::fagin_intersection(ra, rb, k);
            }
            j["fagin"] = fagin;
        }
        if (j.empty())
            throw instanet::ValidationError("compare needs --a/--b or --rank-a/--rank-b");
        emit(j, cp_out);
    });

    // ---- gen -------------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate synthetic data from a JSON spec");
    std::string gen_spec_path, gen_out_dir;
    gen->add_option("--spec", gen_spec_path, "generator spec JSON")->required();
    gen->add_option("--out", gen_out_dir, "output directory")->required();
    gen->callback([&] {
        std::ifstream in(gen_spec_path);
        if (!in) throw instanet::ValidationError("cannot open spec: " + gen_spec_path);
        const json spec_json = json::parse(in);
        const auto spec = instanet::testkit::parse_generator_spec(spec_json);
        fs::create_directories(gen_out_dir);
        const fs::path dir(gen_out_dir);
        json j;
        j["family"] = spec.family;
        if (spec.family == "gnp_directed") {
            const auto g = instanet::testkit::gen_gnp_directed(spec.gnp);
            instanet::write_edge_list_file((dir / "edges.tsv").string(), g);
            j["nodes"] = g.node_count();
            j["edges"] = g.edge_count();
        } else if (spec.family == "planted_partition") {
            const auto r = instanet::testkit::gen_planted_partition(spec.planted);
            instanet::write_edge_list_file((dir / "edges.tsv").string(), r.graph);
            std::ofstream truth(dir / "blocks.tsv");
            for (instanet::NodeId v = 0; v < r.graph.node_count(); ++v)
                truth << r.graph.label(v) << '\t' << r.block_of[v] << '\n';
            j["nodes"] = r.graph.node_count();
            j["edges"] = r.graph.edge_count();
        } else if (spec.family == "federated_sim") {
            const auto sim = instanet::testkit::gen_federated_sim(spec.federated);
            {
                std::ofstream out(dir / "user_edges.tsv");
                for (const auto& r : sim.user_edges)
                    out << r.source_user << '\t' << r.source_instance << '\t' << r.target_user
                        << '\t' << r.target_instance << '\n';
            }
            {
                std::ofstream out(dir / "meta.tsv");
                for (const auto& [label, m] : sim.meta)
                    out << label << '\t' << instanet::to_string(m.status) << '\t'
                        << instanet::to_string(m.platform) << '\n';
            }
            {
                std::ofstream out(dir / "boundary.tsv");
                for (const auto& e : sim.boundary_edges)
                    out << e.source << '\t' << e.target << '\t'
                        << instanet::format_weight(e.weight) << '\n';
            }
            j["user_edges"] = sim.user_edges.size();
            j["instances"] = sim.meta.size();
            j["boundary_edges"] = sim.boundary_edges.size();
        } else {
            std::vector<double> sample;
            if (spec.family == "powerlaw_sample")
                sample = instanet::testkit::gen_powerlaw_sample(spec.alpha, spec.xmin, spec.n,
                                                                spec.seed);
            else
                sample = instanet::testkit::gen_lognormal_sample(spec.mu, spec.sigma, spec.n,
                                                                 spec.seed);
            std::ofstream out(dir / "sample.csv");
            out << "value\n";
            for (const double v : sample) out << instanet::format_weight(v) << '\n';
            j["n"] = sample.size();
        }
        std::cout << j.dump(2) << '\n';
    });

    // ---- report ---------------------------------------------------------------
    auto* report = app.add_subcommand("report", "run the full pipeline into a report bundle");
    std::string rp_config, rp_user_edges, rp_edges, rp_meta, rp_boundary, rp_model = "instances";
    std::string rp_out = default_out_dir();
    std::vector<double> rp_alphas;
    std::uint64_t rp_seed = 1;
    std::size_t rp_exact = 20000;
    std::uint32_t rp_bootstrap = 1000;
    bool rp_unweighted = false, rp_include_insig = false, rp_distinct_sources = false;
    report->add_option("--config", rp_config, "pipeline config JSON (flags override)");
    report->add_option("--user-edges", rp_user_edges, "user-level follow records");
    report->add_option("--input", rp_edges, "instance edge list");
    report->add_option("--meta", rp_meta, "node metadata");
    report->add_option("--boundary", rp_boundary, "boundary edge list");
    report->add_option("--model", rp_model, "instances|online|expanded");
    report->add_option("--alpha", rp_alphas, "backbone significance level (repeatable)");
    report->add_option("--seed", rp_seed, "master seed");
    report->add_option("--out", rp_out, "output directory (env INSTANET_OUT)");
    report->add_option("--exact-paths-max", rp_exact, "exact path metrics threshold");
    report->add_option("--bootstrap", rp_bootstrap, "fit bootstrap replicates");
    report->add_flag("--unweighted-pagerank", rp_unweighted, "ignore weights in pagerank");
    report->add_flag("--include-insignificant-communities", rp_include_insig,
                     "conductance averages over all community pairs");
    report->add_flag("--distinct-source-users", rp_distinct_sources,
                     "projection counts distinct source users");
    report->callback([&] {
        instanet::PipelineConfig cfg;
        if (!rp_config.empty()) {
            std::ifstream in(rp_config);
            if (!in) throw instanet::ValidationError("cannot open config: " + rp_config);
            cfg = instanet::config_from_json(json::parse(in));
        }
        if (!rp_user_edges.empty()) cfg.user_edges_path = rp_user_edges;
        if (!rp_edges.empty()) cfg.edges_path = rp_edges;
        if (!rp_meta.empty()) cfg.meta_path = rp_meta;
        if (!rp_boundary.empty()) cfg.boundary_path = rp_boundary;
        if (report->count("--model")) cfg.model = rp_model;
        if (!rp_alphas.empty()) cfg.alphas = rp_alphas;
        if (report->count("--seed")) cfg.seed = rp_seed;
        if (report->count("--out") || std::getenv("INSTANET_OUT")) cfg.out_dir = rp_out;
        if (report->count("--exact-paths-max")) cfg.exact_paths_max = rp_exact;
        if (report->count("--bootstrap")) cfg.bootstrap = rp_bootstrap;
        if (rp_unweighted) cfg.unweighted_pagerank = true;
        if (rp_include_insig) cfg.include_insignificant_communities = true;
        if (rp_distinct_sources) cfg.distinct_source_users = true;
        instanet::run_pipeline(cfg);
        std::cout << "{\"report\": \"" << cfg.out_dir << "\"}\n";
    });

    try {
        return dispatch(app, argc, argv);
    } catch (const instanet::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const instanet::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const instanet::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const instanet::ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
