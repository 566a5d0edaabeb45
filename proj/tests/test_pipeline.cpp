#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* env = std::getenv("INSTANET_CLI");
    REQUIRE_MESSAGE(env != nullptr, "INSTANET_CLI must point at the binary");
    return env;
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: " << p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

const std::string kSimSpec = R"({
  "family": "federated_sim",
  "instances": 60,
  "communities": 4,
  "affinity": 0.8,
  "user_mu": 2.3,
  "user_sigma": 0.8,
  "follows_per_user": 6,
  "online_fraction": 0.6,
  "boundary_instances": 10,
  "boundary_edges_per_instance": 14,
  "seed": 20260501
})";

void generate_sim(const fs::path& dir) {
    const fs::path spec = dir / "spec.json";
    std::ofstream(spec) << kSimSpec;
    REQUIRE(run_cli("gen --spec " + spec.string() + " --out " + (dir / "data").string()) == 0);
}

std::string report_args(const fs::path& data, const fs::path& out) {
    return "report --user-edges " + (data / "user_edges.tsv").string() + " --meta " +
           (data / "meta.tsv").string() + " --boundary " + (data / "boundary.tsv").string() +
           " --model instances --seed 11 --bootstrap 200 --out " + out.string();
}

std::vector<std::string> bundle_files(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) names.push_back(entry.path().filename());
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace

TEST_CASE("full pipeline is byte-identical across runs and against the golden bundle") {
    TempDir tmp("instanet_pipeline_test");
    generate_sim(tmp.path);

    const fs::path out1 = tmp.path / "run1";
    const fs::path out2 = tmp.path / "run2";
    REQUIRE(run_cli(report_args(tmp.path / "data", out1)) == 0);
    REQUIRE(run_cli(report_args(tmp.path / "data", out2)) == 0);

    const auto files1 = bundle_files(out1);
    const auto files2 = bundle_files(out2);
    REQUIRE(files1 == files2);
    REQUIRE(files1.size() > 10);
    for (const auto& name : files1) {
        CHECK_MESSAGE(slurp(out1 / name) == slurp(out2 / name), "differs across runs: " << name);
    }

    const char* golden_env = std::getenv("INSTANET_GOLDEN_DIR");
    REQUIRE(golden_env != nullptr);
    const fs::path golden = fs::path(golden_env) / "report";
    if (!fs::exists(golden)) {
        MESSAGE("golden bundle not present; skipping golden diff");
        return;
    }
    const auto golden_files = bundle_files(golden);
    CHECK(golden_files == files1);
    for (const auto& name : golden_files) {
        CHECK_MESSAGE(slurp(out1 / name) == slurp(golden / name), "differs from golden: " << name);
    }
}

TEST_CASE("manifest reports completed stages and metadata") {
    TempDir tmp("instanet_manifest_test");
    generate_sim(tmp.path);
    const fs::path out = tmp.path / "run";
    REQUIRE(run_cli(report_args(tmp.path / "data", out)) == 0);

    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    for (const char* stage : {"ingest", "model", "stats", "plots", "fits", "communities", "cores",
                              "backbone", "rank", "compare"}) {
        REQUIRE(manifest.at("stages").contains(stage));
        CHECK(manifest.at("stages").at(stage).get<std::string>() == "done");
    }
    CHECK(manifest.at("meta").at("tool") == "instanet");
    CHECK(manifest.at("meta").contains("config_hash"));
    CHECK(manifest.at("meta").contains("seed"));

    const auto stats = nlohmann::json::parse(slurp(out / "stats.json"));
    CHECK(stats.contains("meta"));
    CHECK(stats.at("meta").at("version") == "0.1.0");
}

TEST_CASE("empty edge file fails validation with exit code 1") {
    TempDir tmp("instanet_empty_test");
    const fs::path empty = tmp.path / "empty.tsv";
    std::ofstream(empty) << "# nothing here\n";
    CHECK(run_cli("report --input " + empty.string() + " --out " + (tmp.path / "o").string()) == 1);
    CHECK(run_cli("stats --input " + (tmp.path / "missing.tsv").string()) == 1);
}

TEST_CASE("compare of a stats report against itself is all-zero") {
    TempDir tmp("instanet_compare_test");
    generate_sim(tmp.path);
    const fs::path edges = tmp.path / "edges.tsv";
    REQUIRE(run_cli("project --input " + (tmp.path / "data" / "user_edges.tsv").string() +
                    " --out " + edges.string()) == 0);
    const fs::path stats = tmp.path / "stats.json";
    REQUIRE(run_cli("stats --input " + edges.string() + " --out " + stats.string()) == 0);
    const fs::path diff = tmp.path / "diff.json";
    REQUIRE(run_cli("compare --a " + stats.string() + " --b " + stats.string() + " --out " +
                    diff.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(diff));
    for (const auto& [key, row] : j.at("stats_diff").items()) {
        if (!row.at("pct_change").is_null()) CHECK(row.at("pct_change").get<double>() == 0.0);
    }
}

TEST_CASE("non-convergent pagerank exits with code 3") {
    TempDir tmp("instanet_convergence_test");
    generate_sim(tmp.path);
    const fs::path edges = tmp.path / "edges.tsv";
    REQUIRE(run_cli("project --input " + (tmp.path / "data" / "user_edges.tsv").string() +
                    " --out " + edges.string()) == 0);
    CHECK(run_cli("rank --input " + edges.string() + " --max-iter 1 --tol 1e-15 --out " +
                  (tmp.path / "r.csv").string()) == 3);
}

TEST_CASE("report accepts a plain edge list as input") {
    TempDir tmp("instanet_edgelist_report_test");
    generate_sim(tmp.path);
    const fs::path edges = tmp.path / "edges.tsv";
    REQUIRE(run_cli("project --input " + (tmp.path / "data" / "user_edges.tsv").string() +
                    " --out " + edges.string()) == 0);
    const fs::path out = tmp.path / "run";
    REQUIRE(run_cli("report --input " + edges.string() +
                    " --seed 7 --bootstrap 100 --out " + out.string()) == 0);
    CHECK(fs::exists(out / "stats.json"));
    CHECK(fs::exists(out / "fits.json"));
    CHECK_FALSE(fs::exists(out / "stats_online.json")); // no metadata given
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest.at("stages").at("rank") == "done");
}

TEST_CASE("cores and backbone subcommands produce their artifacts") {
    TempDir tmp("instanet_subcommand_test");
    generate_sim(tmp.path);
    const fs::path edges = tmp.path / "edges.tsv";
    REQUIRE(run_cli("project --input " + (tmp.path / "data" / "user_edges.tsv").string() +
                    " --out " + edges.string()) == 0);
    REQUIRE(run_cli("cores --input " + edges.string() + " --out " + (tmp.path / "cores").string()) ==
            0);
    CHECK(fs::exists(tmp.path / "cores" / "coreness_total.tsv"));
    CHECK(fs::exists(tmp.path / "cores" / "core_profile_in.csv"));
    REQUIRE(run_cli("backbone --input " + edges.string() + " --model disparity --alpha 0.05 " +
                    "--out " + (tmp.path / "bb").string()) == 0);
    CHECK(fs::exists(tmp.path / "bb" / "significance_disparity.csv"));
    CHECK(fs::exists(tmp.path / "bb" / "backbone_disparity_0.05.edges"));
}
