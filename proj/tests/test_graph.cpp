#include <doctest.h>

#include <sstream>

#include "instanet/edgelist_io.hpp"
#include "instanet/graph.hpp"
#include "instanet/testkit.hpp"

using namespace instanet;

namespace {

InstanceGraph from_edges(std::initializer_list<EdgeRecord> edges) {
    GraphBuilder b;
    for (const auto& e : edges) b.add_edge(e.source, e.target, e.weight);
    return b.build();
}

} // namespace

TEST_CASE("duplicate edge records aggregate by weight sum") {
    const auto g = from_edges({{"a", "b", 1}, {"a", "b", 2}});
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(*g.edge_weight(*g.find("a"), *g.find("b")) == 3.0);
}

TEST_CASE("self-loops dropped and counted") {
    GraphBuilder b;
    b.add_edge("a", "a", 5);
    const auto g = b.build();
    CHECK(g.node_count() == 1);
    CHECK(g.edge_count() == 0);
    CHECK(g.self_loops_dropped() == 1);
}

TEST_CASE("dense ids assigned in first-seen order, deterministically") {
    const auto g = from_edges({{"x", "y", 1}, {"z", "x", 1}});
    CHECK(g.label(0) == "x");
    CHECK(g.label(1) == "y");
    CHECK(g.label(2) == "z");
    const auto h = from_edges({{"x", "y", 1}, {"z", "x", 1}});
    for (NodeId v = 0; v < g.node_count(); ++v) CHECK(g.label(v) == h.label(v));
}

TEST_CASE("builder rejects bad weights and empty labels") {
    GraphBuilder b;
    CHECK_THROWS_AS(b.add_edge("a", "b", 0.0), ValidationError);
    CHECK_THROWS_AS(b.add_edge("a", "b", -1.0), ValidationError);
    CHECK_THROWS_AS(b.add_edge("", "b", 1.0), ValidationError);
}

TEST_CASE("out/in strength and degree sums are consistent") {
    const auto g = from_edges({{"a", "b", 2}, {"b", "a", 3}, {"b", "c", 1}});
    std::size_t out_sum = 0, in_sum = 0;
    double sout = 0, sin = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out_sum += g.out_degree(v);
        in_sum += g.in_degree(v);
        sout += g.out_strength(v);
        sin += g.in_strength(v);
    }
    CHECK(out_sum == g.edge_count());
    CHECK(in_sum == g.edge_count());
    CHECK(sout == doctest::Approx(g.total_weight()));
    CHECK(sin == doctest::Approx(g.total_weight()));
}

TEST_CASE("induced subgraph keeps exactly the surviving edges") {
    const auto g = from_edges({{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}});
    const auto sub = induced_subgraph(g, [&](NodeId v) {
        return g.label(v) == "a" || g.label(v) == "b";
    });
    CHECK(sub.node_count() == 2);
    CHECK(sub.edge_count() == 1);
    CHECK(sub.has_edge(*sub.find("a"), *sub.find("b")));
}

TEST_CASE("induced subgraph with keep-all is edge- and weight-identical") {
    const auto g = from_edges({{"a", "b", 2}, {"b", "c", 5}, {"c", "a", 1}, {"a", "c", 7}});
    const auto sub = induced_subgraph(g, [](NodeId) { return true; });
    REQUIRE(sub.edge_count() == g.edge_count());
    g.for_each_edge([&](NodeId s, NodeId t, double w) {
        const auto ss = sub.find(g.label(s)), tt = sub.find(g.label(t));
        REQUIRE(ss);
        REQUIRE(tt);
        CHECK(*sub.edge_weight(*ss, *tt) == w);
    });
}

TEST_CASE("undirected view combines reciprocal edges per rule") {
    const auto g = from_edges({{"a", "b", 2}, {"b", "a", 3}});
    const auto sum = undirected_view(g, WeightRule::sum);
    CHECK(sum.edge_count() == 1);
    CHECK(sum.neighbors(0)[0].weight == 5.0);
    const auto mx = undirected_view(g, WeightRule::max);
    CHECK(mx.neighbors(0)[0].weight == 3.0);

    const auto one = from_edges({{"a", "b", 2}});
    const auto mx1 = undirected_view(one, WeightRule::max);
    CHECK(mx1.edge_count() == 1);
    CHECK(mx1.neighbors(0)[0].weight == 2.0);
}

TEST_CASE("undirected edge count drops exactly by the number of mutual pairs") {
    const auto g = testkit::gen_gnp_directed({40, 0.12, 99, 1});
    std::size_t mutual = 0;
    g.for_each_edge([&](NodeId s, NodeId t, double) {
        if (g.has_edge(t, s)) ++mutual;
    });
    const auto u = undirected_view(g);
    CHECK(u.edge_count() == g.edge_count() - mutual / 2);
    CHECK(u.edge_count() <= g.edge_count());
}

TEST_CASE("components on tiny digraphs") {
    const auto two_cycle = from_edges({{"a", "b", 1}, {"b", "a", 1}});
    auto info = components(two_cycle);
    CHECK(info.scc_count == 1);
    CHECK(info.wcc_count == 1);

    const auto path = from_edges({{"a", "b", 1}, {"b", "c", 1}});
    info = components(path);
    CHECK(info.scc_count == 3);
    CHECK(info.wcc_count == 1);
}

TEST_CASE("component counts match the reachability oracle on random digraphs") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto g = testkit::gen_gnp_directed({50, 0.03 + 0.001 * static_cast<double>(seed), seed, 1});
        const auto info = components(g);
        const auto [scc, wcc] = testkit::oracle::component_counts(g);
        CHECK(info.scc_count == scc);
        CHECK(info.wcc_count == wcc);
        CHECK(info.scc_count >= info.wcc_count);
    }
}

TEST_CASE("scc partition refines wcc partition") {
    const auto g = testkit::gen_gnp_directed({60, 0.04, 7, 1});
    const auto info = components(g);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
            if (info.scc_id[u] == info.scc_id[v]) CHECK(info.wcc_id[u] == info.wcc_id[v]);
        }
    }
}

TEST_CASE("edge list parsing: comments, delimiters, defaults") {
    std::istringstream in("# comment\na,b\nb,c,4\n\n");
    const auto records = read_edge_list(in);
    REQUIRE(records.size() == 2);
    CHECK(records[0].weight == 1.0);
    CHECK(records[1].weight == 4.0);

    std::istringstream tabs("a\tb\t2\nb\tc\n");
    const auto trecords = read_edge_list(tabs);
    REQUIRE(trecords.size() == 2);
    CHECK(trecords[0].weight == 2.0);
}

TEST_CASE("edge list parse errors carry line numbers") {
    std::istringstream bad_arity("a,b\nc\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(read_edge_list(bad_arity, "f")),
                         doctest::Contains("f:2"), ParseError);
    std::istringstream bad_weight("a,b,xyz\n");
    CHECK_THROWS_AS(static_cast<void>(read_edge_list(bad_weight)), ParseError);
    std::istringstream zero_weight("a,b,0\n");
    CHECK_THROWS_AS(static_cast<void>(read_edge_list(zero_weight)), ValidationError);
}

TEST_CASE("metadata parsing validates arity and enums") {
    std::istringstream ok("a\tonline\tmastodon\nb\toffline\tother\nc\tunknown\tunknown\n");
    const auto rows = read_node_meta(ok);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].second.status == NodeStatus::online);
    CHECK(rows[1].second.platform == Platform::other);

    std::istringstream bad_arity("a\tonline\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(read_node_meta(bad_arity, "m")),
                         doctest::Contains("m:1"), ParseError);
    std::istringstream bad_enum("a\twobbly\tmastodon\n");
    CHECK_THROWS_AS(static_cast<void>(read_node_meta(bad_enum)), ParseError);
}

TEST_CASE("metadata table declares isolated nodes") {
    const std::vector<EdgeRecord> edges{{"a", "b", 1}};
    const std::vector<std::pair<std::string, NodeMeta>> meta{
        {"a", {NodeStatus::online, Platform::mastodon}},
        {"lonely", {NodeStatus::online, Platform::mastodon}},
    };
    const auto g = build_graph(edges, meta);
    CHECK(g.node_count() == 3);
    CHECK(g.meta(*g.find("lonely")).status == NodeStatus::online);
    CHECK(g.meta(*g.find("b")).status == NodeStatus::unknown);
}

TEST_CASE("edge list round-trips through the canonical writer") {
    const auto g = from_edges({{"a", "b", 2}, {"b", "c", 1.5}, {"c", "a", 10}});
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream in(out.str());
    const auto h = build_graph(read_edge_list(in));
    REQUIRE(h.edge_count() == g.edge_count());
    g.for_each_edge([&](NodeId s, NodeId t, double w) {
        CHECK(*h.edge_weight(*h.find(g.label(s)), *h.find(g.label(t))) == w);
    });
}
