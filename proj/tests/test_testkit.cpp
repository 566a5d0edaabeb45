#include <doctest.h>

#include <cmath>
#include <numeric>

#include "instanet/testkit.hpp"

using namespace instanet;
using namespace instanet::testkit;

TEST_CASE("gnp edge-count extremes") {
    CHECK(gen_gnp_directed({10, 0.0, 1, 1}).edge_count() == 0);
    CHECK(gen_gnp_directed({10, 0.0, 1, 1}).node_count() == 10);
    CHECK(gen_gnp_directed({5, 1.0, 1, 1}).edge_count() == 20);
}

TEST_CASE("identical specs give identical graphs") {
    const auto a = gen_gnp_directed({60, 0.07, 42, 5});
    const auto b = gen_gnp_directed({60, 0.07, 42, 5});
    REQUIRE(a.edge_count() == b.edge_count());
    bool same = true;
    a.for_each_edge([&](NodeId s, NodeId t, double w) {
        if (!b.edge_weight(s, t) || *b.edge_weight(s, t) != w) same = false;
    });
    CHECK(same);
}

TEST_CASE("generator parameter validation") {
    CHECK_THROWS_AS(static_cast<void>(gen_gnp_directed({10, 1.5, 1, 1})), ArgumentError);
    CHECK_THROWS_AS(static_cast<void>(gen_gnp_directed({0, 0.5, 1, 1})), ArgumentError);
    CHECK_THROWS_AS(static_cast<void>(gen_planted_partition({4, 25, -0.1, 0.01, 1})),
                    ArgumentError);
    CHECK_THROWS_AS(static_cast<void>(gen_powerlaw_sample(0.9, 1, 100, 1)), ArgumentError);
    CHECK_THROWS_AS(static_cast<void>(gen_lognormal_sample(0, -1, 100, 1)), ArgumentError);
}

TEST_CASE("planted partition carries its ground truth") {
    const auto r = gen_planted_partition({3, 10, 0.5, 0.01, 7});
    CHECK(r.graph.node_count() == 30);
    REQUIRE(r.block_of.size() == 30);
    CHECK(r.block_of[0] == 0);
    CHECK(r.block_of[29] == 2);
    // internal density should dominate external
    std::size_t internal = 0, external = 0;
    r.graph.for_each_edge([&](NodeId s, NodeId t, double) {
        (r.block_of[s] == r.block_of[t] ? internal : external) += 1;
    });
    CHECK(internal > external);
}

TEST_CASE("federated sim output is deterministic and projectable") {
    const FederatedSimSpec spec{.instances = 15, .communities = 3, .seed = 9};
    const auto a = gen_federated_sim(spec);
    const auto b = gen_federated_sim(spec);
    REQUIRE(a.user_edges.size() == b.user_edges.size());
    CHECK(a.user_edges.back().source_user == b.user_edges.back().source_user);
    CHECK(a.meta.size() == 15);
    CHECK(!a.boundary_edges.empty());

    const auto res = project_to_instances(a.user_edges);
    CHECK(res.graph.node_count() <= 15);
    CHECK(res.graph.edge_count() > 0);
    // boundary edges always touch a mastodon instance
    for (const auto& e : a.boundary_edges) {
        const bool src_m = e.source[0] == 'm';
        const bool dst_m = e.target[0] == 'm';
        CHECK((src_m || dst_m));
        CHECK(!(src_m && dst_m));
    }
}

TEST_CASE("powerlaw sample stays above xmin and reproduces") {
    const auto s = gen_powerlaw_sample(2.5, 10, 2000, 3);
    CHECK(s.size() == 2000);
    for (const double v : s) {
        CHECK(v >= 10.0);
        CHECK(v == std::floor(v));
    }
    const auto t = gen_powerlaw_sample(2.5, 10, 2000, 3);
    CHECK(s == t);
    // crude tail check: CCDF at 2*xmin should be near 2^-(alpha-1)
    const double frac =
        static_cast<double>(std::count_if(s.begin(), s.end(), [](double v) { return v >= 20.0; })) /
        static_cast<double>(s.size());
    CHECK(frac == doctest::Approx(std::pow(2.0, -1.5)).epsilon(0.15));
}

TEST_CASE("oracle zeta agrees with a plain partial sum on easy cases") {
    // zeta(2, 1) = pi^2/6
    CHECK(oracle::hurwitz_zeta(2.0, 1.0) ==
          doctest::Approx(1.6449340668482264).epsilon(1e-12));
    // shifting: zeta(s, a) - zeta(s, a+1) = a^-s
    const double s = 2.5, a = 7.0;
    CHECK(oracle::hurwitz_zeta(s, a) - oracle::hurwitz_zeta(s, a + 1) ==
          doctest::Approx(std::pow(a, -s)).epsilon(1e-12));
}

TEST_CASE("oracles enforce their size guards") {
    const auto big = gen_gnp_directed({300, 0.01, 1, 1});
    CHECK_THROWS_AS(static_cast<void>(oracle::component_counts(big)), ArgumentError);
    CHECK_THROWS_AS(static_cast<void>(oracle::triadic(big)), ArgumentError);
    CHECK_THROWS_AS(static_cast<void>(oracle::path_metrics(big, 0)), ArgumentError);
}

TEST_CASE("oracle kendall tau on tiny cases") {
    CHECK(oracle::kendall_tau({0, 1, 2}, {0, 1, 2}) == doctest::Approx(1.0));
    CHECK(oracle::kendall_tau({0, 1, 2}, {2, 1, 0}) == doctest::Approx(-1.0));
    CHECK(oracle::kendall_tau({0, 1, 2}, {1, 0, 2}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("oracle mlf survival reproduces the hand-computed case") {
    CHECK(oracle::binomial_survival(4, 0.25, 2) == doctest::Approx(0.26171875).epsilon(1e-14));
    CHECK(oracle::binomial_survival(4, 0.25, 0) == 1.0);
    CHECK(oracle::binomial_survival(4, 0.25, 5) == 0.0);
}

TEST_CASE("oracle cores on K4") {
    GraphBuilder b;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) b.add_edge("n" + std::to_string(i), "n" + std::to_string(j), 1);
    const auto core = oracle::coreness(b.build(), 0);
    for (const auto c : core) CHECK(c == 3);
}

TEST_CASE("generator spec json parsing") {
    const auto gnp = parse_generator_spec(
        nlohmann::json{{"family", "gnp_directed"}, {"n", 10}, {"p", 0.5}, {"seed", 3}});
    CHECK(gnp.gnp.n == 10);
    CHECK(gnp.gnp.seed == 3);
    const auto fed = parse_generator_spec(
        nlohmann::json{{"family", "federated_sim"}, {"instances", 20}, {"seed", 4}});
    CHECK(fed.federated.instances == 20);
    CHECK_THROWS_AS(static_cast<void>(parse_generator_spec(nlohmann::json{{"family", "nope"}})),
                    ArgumentError);
    CHECK_THROWS_AS(static_cast<void>(parse_generator_spec(nlohmann::json::object())),
                    ArgumentError);
}
