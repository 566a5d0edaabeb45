#include <doctest.h>

#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "instanet/netmodel.hpp"
#include "instanet/rng.hpp"
#include "instanet/testkit.hpp"

using namespace instanet;

TEST_CASE("projection counts distinct user pairs as weight") {
    const std::vector<UserEdgeRecord> records{
        {"u1", "A", "v", "B"},
        {"u2", "A", "v", "B"},
    };
    const auto res = project_to_instances(records);
    CHECK(res.graph.edge_count() == 1);
    CHECK(*res.graph.edge_weight(*res.graph.find("A"), *res.graph.find("B")) == 2.0);
}

TEST_CASE("intra-instance records dropped and counted") {
    const std::vector<UserEdgeRecord> records{{"u", "A", "v", "A"}};
    const auto res = project_to_instances(records);
    CHECK(res.graph.edge_count() == 0);
    CHECK(res.intra_instance_records == 1);
}

TEST_CASE("duplicate user pairs count once") {
    const std::vector<UserEdgeRecord> records{
        {"u", "A", "v", "B"},
        {"u", "A", "v", "B"},
    };
    const auto res = project_to_instances(records);
    CHECK(res.duplicate_records == 1);
    CHECK(*res.graph.edge_weight(*res.graph.find("A"), *res.graph.find("B")) == 1.0);
}

TEST_CASE("distinct-source-users mode collapses a user's fan-out per target instance") {
    const std::vector<UserEdgeRecord> records{
        {"u", "A", "v1", "B"},
        {"u", "A", "v2", "B"},
        {"w", "A", "v1", "B"},
    };
    const auto pairs = project_to_instances(records);
    CHECK(*pairs.graph.edge_weight(0, 1) == 3.0);
    ProjectionOptions opts;
    opts.distinct_source_users = true;
    const auto sources = project_to_instances(records, opts);
    CHECK(*sources.graph.edge_weight(0, 1) == 2.0);
}

TEST_CASE("projection weights match a set-based oracle on random records") {
    // 10^4 random records over a small instance universe, heavy duplication.
    Rng rng(2024);
    std::vector<UserEdgeRecord> records;
    records.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
        const auto si = rng.below(12), ti = rng.below(12);
        records.push_back({"u" + std::to_string(rng.below(40)), "i" + std::to_string(si),
                           "u" + std::to_string(rng.below(40)), "i" + std::to_string(ti)});
    }
    const auto res = project_to_instances(records);

    std::set<std::tuple<std::string, std::string, std::string, std::string>> unique_pairs;
    std::map<std::pair<std::string, std::string>, double> expected;
    std::uint64_t intra = 0;
    for (const auto& r : records) {
        if (r.source_instance == r.target_instance) {
            ++intra;
            continue;
        }
        if (unique_pairs.insert({r.source_user, r.source_instance, r.target_user, r.target_instance})
                .second)
            expected[{r.source_instance, r.target_instance}] += 1.0;
    }
    CHECK(res.intra_instance_records == intra);
    std::size_t checked = 0;
    res.graph.for_each_edge([&](NodeId s, NodeId t, double w) {
        CHECK(expected.at({res.graph.label(s), res.graph.label(t)}) == w);
        ++checked;
    });
    CHECK(checked == expected.size());
}

TEST_CASE("online subnetwork keeps online-online edges only") {
    GraphBuilder b;
    b.add_edge("A", "B", 1).add_edge("B", "C", 1);
    b.set_meta("A", {NodeStatus::online, Platform::mastodon});
    b.set_meta("B", {NodeStatus::online, Platform::mastodon});
    b.set_meta("C", {NodeStatus::offline, Platform::mastodon});
    const auto g = b.build();
    const auto online = online_subnetwork(g);
    CHECK(online.node_count() == 2);
    CHECK(online.edge_count() == 1);
    CHECK(online.has_edge(*online.find("A"), *online.find("B")));
}

TEST_CASE("online subnetwork: all offline yields an empty graph") {
    GraphBuilder b;
    b.add_edge("A", "B", 1);
    b.set_meta("A", {NodeStatus::offline, Platform::mastodon});
    b.set_meta("B", {NodeStatus::offline, Platform::mastodon});
    const auto online = online_subnetwork(b.build());
    CHECK(online.node_count() == 0);
}

TEST_CASE("online subnetwork requires status metadata") {
    GraphBuilder b;
    b.add_edge("A", "B", 1);
    CHECK_THROWS_AS(static_cast<void>(online_subnetwork(b.build())), ValidationError);
}

TEST_CASE("unknown status treated as offline") {
    GraphBuilder b;
    b.add_edge("A", "B", 1);
    b.set_meta("A", {NodeStatus::online, Platform::mastodon});
    // B left unknown
    const auto online = online_subnetwork(b.build(), {false});
    CHECK(online.node_count() == 1);
    CHECK(online.edge_count() == 0);
}

TEST_CASE("drop_isolated mirrors the disconnected-online-instance rule") {
    GraphBuilder b;
    b.add_edge("A", "B", 1);
    b.set_meta("A", {NodeStatus::online, Platform::mastodon});
    b.set_meta("B", {NodeStatus::online, Platform::mastodon});
    b.add_node("lonely");
    b.set_meta("lonely", {NodeStatus::online, Platform::mastodon});
    const auto g = b.build();
    CHECK(online_subnetwork(g, {false}).node_count() == 3);
    CHECK(online_subnetwork(g, {true}).node_count() == 2);
}

TEST_CASE("expanded network adds boundary nodes with platform=other") {
    GraphBuilder b;
    b.add_edge("A", "B", 1);
    b.set_meta("A", {NodeStatus::online, Platform::mastodon});
    b.set_meta("B", {NodeStatus::offline, Platform::mastodon});
    const auto g = b.build();
    const std::vector<EdgeRecord> boundary{{"A", "X", 2}};
    const auto expanded = expanded_network(g, boundary);
    CHECK(expanded.node_count() == 3);
    CHECK(expanded.edge_count() == 2);
    CHECK(expanded.meta(*expanded.find("X")).platform == Platform::other);
    CHECK(expanded.meta(*expanded.find("A")).platform == Platform::mastodon);
}

TEST_CASE("boundary edges between two non-mastodon nodes are rejected with offenders") {
    GraphBuilder b;
    b.add_edge("A", "B", 1);
    const auto g = b.build();
    const std::vector<EdgeRecord> boundary{{"X", "Y", 1}};
    CHECK_THROWS_WITH_AS(static_cast<void>(expanded_network(g, boundary)),
                         doctest::Contains("X->Y"), ValidationError);
}

TEST_CASE("expanded network preserves surviving weights and node set") {
    const auto sim = testkit::gen_federated_sim({.instances = 12,
                                                 .communities = 3,
                                                 .boundary_instances = 4,
                                                 .seed = 5});
    auto res = project_to_instances(sim.user_edges);
    const auto g = with_metadata(res.graph, sim.meta);
    const auto expanded = expanded_network(g, sim.boundary_edges);
    CHECK(expanded.node_count() >= g.node_count());
    g.for_each_edge([&](NodeId s, NodeId t, double w) {
        const auto es = expanded.find(g.label(s)), et = expanded.find(g.label(t));
        REQUIRE(es);
        REQUIRE(et);
        CHECK(*expanded.edge_weight(*es, *et) >= w); // boundary may add to the pair
    });
}

TEST_CASE("user edge file parsing") {
    std::istringstream in("h1\tA\th2\tB\n# c\nh3\tC\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(read_user_edges(in, "u")), doctest::Contains("u:3"),
                         ParseError);
    std::istringstream ok("h1,A,h2,B\nh3,C,h4,D\n");
    const auto records = read_user_edges(ok);
    REQUIRE(records.size() == 2);
    CHECK(records[1].target_instance == "D");
}
