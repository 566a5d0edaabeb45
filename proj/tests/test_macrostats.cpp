#include <doctest.h>

#include <cmath>

#include "instanet/macrostats.hpp"
#include "instanet/testkit.hpp"

using namespace instanet;

namespace {

InstanceGraph from_edges(std::initializer_list<EdgeRecord> edges) {
    GraphBuilder b;
    for (const auto& e : edges) b.add_edge(e.source, e.target, e.weight);
    return b.build();
}

} // namespace

TEST_CASE("reciprocity of hand graphs") {
    CHECK(reciprocity(from_edges({{"a", "b", 1}, {"b", "a", 1}})) == 1.0);
    CHECK(reciprocity(from_edges({{"a", "b", 1}})) == 0.0);
    CHECK(reciprocity(from_edges({{"a", "b", 1}, {"b", "a", 1}, {"b", "c", 1}})) ==
          doctest::Approx(2.0 / 3.0));
    GraphBuilder empty;
    empty.add_node("a");
    CHECK_THROWS_AS(static_cast<void>(reciprocity(empty.build())), UndefinedStatError);
}

TEST_CASE("degree summary on a path and a 2-cycle") {
    const auto path = from_edges({{"a", "b", 1}, {"b", "c", 1}});
    const auto s = degree_summary(path);
    CHECK(s.pct_sources == doctest::Approx(1.0 / 3.0));
    CHECK(s.pct_sinks == doctest::Approx(1.0 / 3.0));

    const auto cyc = from_edges({{"a", "b", 1}, {"b", "a", 1}});
    const auto c = degree_summary(cyc);
    CHECK(c.pct_sources == 0.0);
    CHECK(c.pct_sinks == 0.0);
    CHECK(c.avg_in_degree == doctest::Approx(1.0));
    CHECK(c.avg_degree == doctest::Approx(1.0)); // one undirected edge over two nodes
}

TEST_CASE("assortativity of the undirected 3-path is -1") {
    const auto p3 = from_edges({{"a", "b", 1}, {"b", "c", 1}});
    const auto r = degree_assortativity(p3, AssortVariant::undirected);
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("directed star has undefined assortativity (zero variance per side)") {
    GraphBuilder b;
    for (int i = 0; i < 5; ++i) b.add_edge("leaf" + std::to_string(i), "hub", 1);
    CHECK_FALSE(degree_assortativity(b.build(), AssortVariant::directed_total).has_value());
}

TEST_CASE("assortativity matches the direct pearson oracle on random graphs") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto g = testkit::gen_gnp_directed({100, 0.04, seed, 3});
        for (const auto variant : {AssortVariant::directed_total, AssortVariant::undirected}) {
            const auto mine = degree_assortativity(g, variant);
            const auto ref =
                testkit::oracle::assortativity(g, variant == AssortVariant::directed_total ? 0 : 1);
            REQUIRE(mine.has_value() == ref.has_value());
            if (mine) CHECK(*mine == doctest::Approx(*ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("path metrics on hand graphs") {
    const auto p3 = from_edges({{"a", "b", 1}, {"b", "c", 1}});
    const auto undirected = path_metrics(p3, {});
    CHECK(undirected.avg_path_length == doctest::Approx(4.0 / 3.0));
    CHECK(undirected.diameter == 2);
    CHECK_FALSE(undirected.sampled);

    const auto c4 = from_edges({{"a", "b", 1}, {"b", "c", 1}, {"c", "d", 1}, {"d", "a", 1}});
    PathOptions directed;
    directed.mode = PathMode::directed_reachable;
    const auto dm = path_metrics(c4, directed);
    CHECK(dm.avg_path_length == doctest::Approx(2.0));
    CHECK(dm.diameter == 3);

    GraphBuilder complete;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) complete.add_edge("n" + std::to_string(i), "n" + std::to_string(j), 1);
    const auto km = path_metrics(complete.build(), {});
    CHECK(km.avg_path_length == doctest::Approx(1.0));
    CHECK(km.diameter == 1);

    GraphBuilder singleton;
    singleton.add_node("a");
    CHECK_THROWS_AS(static_cast<void>(path_metrics(singleton.build(), {})), UndefinedStatError);
}

TEST_CASE("path metrics match the floyd-warshall oracle on random graphs") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto g = testkit::gen_gnp_directed({40, 0.08, seed, 1});
        for (const int mode : {0, 1}) {
            PathOptions opts;
            opts.mode = mode == 0 ? PathMode::undirected_lwcc : PathMode::directed_reachable;
            PathMetrics mine;
            std::pair<double, std::uint32_t> ref;
            bool mine_defined = true, ref_defined = true;
            try {
                mine = path_metrics(g, opts);
            } catch (const UndefinedStatError&) {
                mine_defined = false;
            }
            try {
                ref = testkit::oracle::path_metrics(g, mode);
            } catch (const UndefinedStatError&) {
                ref_defined = false;
            }
            REQUIRE(mine_defined == ref_defined);
            if (mine_defined) {
                CHECK(mine.avg_path_length == doctest::Approx(ref.first).epsilon(1e-12));
                CHECK(mine.diameter == ref.second);
            }
        }
    }
}

TEST_CASE("sampled path metrics are flagged") {
    const auto g = testkit::gen_gnp_directed({300, 0.02, 4, 1});
    PathOptions opts;
    opts.exact_threshold = 100;
    opts.sample_sources = 50;
    opts.seed = 9;
    const auto pm = path_metrics(g, opts);
    CHECK(pm.sampled);
    const auto exact = path_metrics(g, {});
    CHECK(pm.avg_path_length == doctest::Approx(exact.avg_path_length).epsilon(0.15));
    CHECK(pm.diameter <= exact.diameter);
}

TEST_CASE("triadic statistics on hand graphs") {
    const auto triangle = from_edges({{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}});
    const auto t = triadic_stats(triangle);
    CHECK(t.transitivity == doctest::Approx(1.0));
    CHECK(t.clustering_restricted == doctest::Approx(1.0));
    CHECK(t.clustering_full == doctest::Approx(1.0));

    GraphBuilder star;
    for (int i = 0; i < 3; ++i) star.add_edge("hub", "leaf" + std::to_string(i), 1);
    const auto s = triadic_stats(star.build());
    CHECK(s.transitivity == 0.0);
    CHECK(s.clustering_restricted == 0.0);
    CHECK(s.clustering_full == 0.0);
}

TEST_CASE("triadic statistics match the brute-force oracle exactly") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto g = testkit::gen_gnp_directed({50, 0.06, seed, 1});
        const auto mine = triadic_stats(g);
        const auto ref = testkit::oracle::triadic(g);
        CHECK(mine.transitivity == doctest::Approx(ref.transitivity).epsilon(1e-12));
        CHECK(mine.clustering_restricted ==
              doctest::Approx(ref.clustering_restricted).epsilon(1e-12));
        CHECK(mine.clustering_full == doctest::Approx(ref.clustering_full).epsilon(1e-12));
        CHECK(mine.clustering_full <= mine.clustering_restricted + 1e-15);
    }
}

TEST_CASE("knn on stars and rings") {
    GraphBuilder star;
    for (int i = 0; i < 4; ++i) star.add_edge("hub", "leaf" + std::to_string(i), 1);
    const auto knn = knn_distribution(star.build());
    REQUIRE(knn.size() == 2);
    CHECK(knn[0].first == 1);
    CHECK(knn[0].second == doctest::Approx(4.0));
    CHECK(knn[1].first == 4);
    CHECK(knn[1].second == doctest::Approx(1.0));

    GraphBuilder ring;
    for (int i = 0; i < 6; ++i)
        ring.add_edge("n" + std::to_string(i), "n" + std::to_string((i + 1) % 6), 1);
    const auto rk = knn_distribution(ring.build());
    REQUIRE(rk.size() == 1);
    CHECK(rk[0].first == 2);
    CHECK(rk[0].second == doctest::Approx(2.0));
}

TEST_CASE("knn matches the per-node tally oracle") {
    const auto g = testkit::gen_gnp_directed({60, 0.05, 11, 1});
    const auto mine = knn_distribution(g);
    const auto ref = testkit::oracle::knn(g);
    REQUIRE(mine.size() == ref.size());
    for (std::size_t i = 0; i < mine.size(); ++i) {
        CHECK(mine[i].first == ref[i].first);
        CHECK(mine[i].second == doctest::Approx(ref[i].second).epsilon(1e-12));
    }
}

TEST_CASE("knn trend sign agrees with assortativity on a disassortative graph") {
    // Star-of-stars: hubs attach to leaves only, a strongly disassortative shape.
    GraphBuilder b;
    for (int h = 0; h < 4; ++h)
        for (int l = 0; l < 8; ++l)
            b.add_edge("hub" + std::to_string(h), "h" + std::to_string(h) + "leaf" + std::to_string(l), 1);
    for (int h = 0; h < 3; ++h)
        b.add_edge("h" + std::to_string(h) + "leaf0", "hub" + std::to_string(h + 1), 1);
    const auto g = b.build();
    const auto r = degree_assortativity(g, AssortVariant::undirected);
    REQUIRE(r.has_value());
    CHECK(*r < 0.0);
    const auto knn = knn_distribution(g);
    CHECK(knn.front().second > knn.back().second); // decreasing knn(k)
}

TEST_CASE("reciprocity == 1 iff edge set symmetric (random graphs)") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = testkit::gen_gnp_directed({30, 0.1, seed, 1});
        const double r = reciprocity(g);
        bool symmetric = true;
        g.for_each_edge([&](NodeId s, NodeId t, double) {
            if (!g.has_edge(t, s)) symmetric = false;
        });
        CHECK((r == 1.0) == symmetric);
    }
}

TEST_CASE("stats report assembles consistent fields") {
    const auto g = testkit::gen_gnp_directed({50, 0.08, 3, 2});
    const auto r = compute_stats_report(g, {});
    CHECK(r.node_count == 50);
    CHECK(r.edge_count == g.edge_count());
    REQUIRE(r.density.has_value());
    CHECK(*r.density ==
          doctest::Approx(static_cast<double>(g.edge_count()) / (50.0 * 49.0)));
    CHECK(r.avg_in_degree == doctest::Approx(static_cast<double>(g.edge_count()) / 50.0));
    REQUIRE(r.avg_path_length.has_value());
    REQUIRE(r.diameter.has_value());
    CHECK(static_cast<double>(*r.diameter) >= *r.avg_path_length);
    CHECK(*r.diameter >= static_cast<std::uint32_t>(std::ceil(*r.avg_path_length)));
}
