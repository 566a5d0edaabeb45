#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "instanet/backbone.hpp"
#include "instanet/testkit.hpp"

using namespace instanet;

TEST_CASE("disparity closed form on hand cases") {
    // Source with two equal-weight out-edges: p = 0.5 -> alpha_out = 0.5.
    GraphBuilder b;
    b.add_edge("s", "a", 1).add_edge("s", "b", 1);
    b.add_edge("x", "a", 1); // give "a" in-degree 2 so alpha_in is defined
    const auto g = b.build();
    const auto [aout, ain] = disparity_pvalue(g, *g.find("s"), *g.find("a"));
    CHECK(aout == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ain == doctest::Approx(0.5).epsilon(1e-12)); // a has k_in=2, equal weights
}

TEST_CASE("degree-1 side is never significant") {
    GraphBuilder b;
    b.add_edge("s", "t", 7);
    const auto g = b.build();
    const auto [aout, ain] = disparity_pvalue(g, 0, 1);
    CHECK(aout == 1.0);
    CHECK(ain == 1.0);
}

TEST_CASE("disparity with weights {8,1,1}") {
    GraphBuilder b;
    b.add_edge("s", "a", 8).add_edge("s", "b", 1).add_edge("s", "c", 1);
    const auto g = b.build();
    const auto heavy = disparity_pvalue(g, *g.find("s"), *g.find("a"));
    CHECK(heavy.alpha_out == doctest::Approx(0.04).epsilon(1e-12));
    const auto light = disparity_pvalue(g, *g.find("s"), *g.find("b"));
    CHECK(light.alpha_out == doctest::Approx(0.81).epsilon(1e-12));
}

TEST_CASE("disparity matches numeric integration of the uniform null") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = testkit::gen_gnp_directed({25, 0.15, seed, 9});
        g.for_each_edge([&](NodeId s, NodeId t, double w) {
            const auto [aout, ain] = disparity_pvalue(g, s, t);
            const double ref_out =
                testkit::oracle::disparity_alpha(w / g.out_strength(s), g.out_degree(s));
            const double ref_in =
                testkit::oracle::disparity_alpha(w / g.in_strength(t), g.in_degree(t));
            CHECK(aout == doctest::Approx(ref_out).epsilon(1e-8));
            CHECK(ain == doctest::Approx(ref_in).epsilon(1e-8));
        });
    }
}

TEST_CASE("disparity alpha strictly decreasing in the normalized weight for fixed k") {
    // direct closed-form sweep, k = 5
    double prev = 1.1;
    for (double p = 0.05; p < 1.0; p += 0.05) {
        const double a = std::exp(4.0 * std::log1p(-p));
        CHECK(a < prev);
        prev = a;
    }
}

TEST_CASE("mlf survival on the T=4 hand case") {
    CHECK(mlf_survival(2, 2, 2, 4) == doctest::Approx(0.26171875).epsilon(1e-12));
    CHECK(mlf_survival(0, 2, 2, 4) == 1.0);
}

TEST_CASE("mlf matches the exact binomial-sum oracle on random graphs") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto g = testkit::gen_gnp_directed({15, 0.2, seed, 6});
        if (g.total_weight() > 500) continue; // oracle regime per contract
        const auto strengths = strength_table(g);
        g.for_each_edge([&](NodeId s, NodeId t, double w) {
            const double mine = mlf_pvalue(g, s, t, strengths);
            const double p = strengths.s_out[s] * strengths.s_in[t] /
                             (strengths.total * strengths.total);
            const double ref = testkit::oracle::binomial_survival(
                static_cast<std::uint64_t>(strengths.total), p, static_cast<std::uint64_t>(w));
            CHECK(mine == doctest::Approx(ref).epsilon(1e-10));
        });
    }
}

TEST_CASE("mlf gamma is non-increasing in the weight for fixed strengths") {
    double prev = 1.1;
    for (double w = 1; w <= 20; ++w) {
        const double g = mlf_survival(w, 40, 40, 200);
        CHECK(g <= prev);
        prev = g;
    }
}

TEST_CASE("mlf rejects fractional weights") {
    GraphBuilder b;
    b.add_edge("a", "b", 1.5).add_edge("b", "a", 2);
    const auto g = b.build();
    const auto strengths = strength_table(g);
    CHECK_THROWS_AS(static_cast<void>(mlf_pvalue(g, 0, 1, strengths)), ValidationError);
    CHECK_THROWS_AS(static_cast<void>(edge_significance(g, BackboneModel::mlf)), ValidationError);
    // disparity accepts the same graph
    CHECK_NOTHROW(static_cast<void>(edge_significance(g, BackboneModel::disparity)));
}

TEST_CASE("uniform strength spreading is never significant under disparity") {
    // Every node spreads its strength uniformly: ring of hubs, each with 4
    // equal-weight out-edges and 4 equal-weight in-edges.
    GraphBuilder b;
    const int n = 8;
    for (int i = 0; i < n; ++i)
        for (int d = 1; d <= 4; ++d)
            b.add_edge("n" + std::to_string(i), "n" + std::to_string((i + d) % n), 3);
    const auto g = b.build();
    const auto pruned = prune(g, BackboneModel::disparity, 0.05);
    CHECK(pruned.edge_count() == 0);
    CHECK(pruned.node_count() == 0);
}

TEST_CASE("a dominant edge at a hub survives disparity at alpha 0.01") {
    GraphBuilder b;
    b.add_edge("hub", "big", 100);
    for (int i = 0; i < 9; ++i) b.add_edge("hub", "small" + std::to_string(i), 1);
    for (int i = 0; i < 3; ++i) b.add_edge("x" + std::to_string(i), "big", 1);
    const auto g = b.build();
    // alpha_out = (1 - 100/109)^9 ~ 4.6e-10
    const auto pruned = prune(g, BackboneModel::disparity, 0.01);
    REQUIRE(pruned.node_count() >= 2);
    const auto hub = pruned.find("hub");
    const auto big = pruned.find("big");
    REQUIRE(hub);
    REQUIRE(big);
    CHECK(pruned.has_edge(*hub, *big));
}

TEST_CASE("backbones are monotone in the significance level") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto g = testkit::gen_gnp_directed({40, 0.12, seed, 9});
        for (const auto model : {BackboneModel::disparity, BackboneModel::mlf}) {
            const auto strict = prune(g, model, 0.01);
            const auto loose = prune(g, model, 0.05);
            CHECK(strict.edge_count() <= loose.edge_count());
            strict.for_each_edge([&](NodeId s, NodeId t, double w) {
                const auto ls = loose.find(strict.label(s));
                const auto lt = loose.find(strict.label(t));
                REQUIRE(ls);
                REQUIRE(lt);
                CHECK(*loose.edge_weight(*ls, *lt) == w);
            });
        }
    }
}

TEST_CASE("pruning drops isolated nodes and keeps metadata") {
    GraphBuilder b;
    b.add_edge("hub", "big", 50);
    for (int i = 0; i < 6; ++i) b.add_edge("hub", "s" + std::to_string(i), 1);
    b.set_meta("big", {NodeStatus::online, Platform::mastodon});
    const auto g = b.build();
    const auto pruned = prune(g, BackboneModel::disparity, 0.05);
    for (NodeId v = 0; v < pruned.node_count(); ++v)
        CHECK(pruned.out_degree(v) + pruned.in_degree(v) > 0);
    const auto big = pruned.find("big");
    REQUIRE(big);
    CHECK(pruned.meta(*big).status == NodeStatus::online);
}

TEST_CASE("scaling weights by an integer constant leaves disparity alphas unchanged") {
    const auto g = testkit::gen_gnp_directed({20, 0.2, 3, 5});
    GraphBuilder scaled_builder;
    g.for_each_edge([&](NodeId s, NodeId t, double w) {
        scaled_builder.add_edge(g.label(s), g.label(t), w * 7.0);
    });
    const auto scaled = scaled_builder.build();
    g.for_each_edge([&](NodeId s, NodeId t, double) {
        const auto a = disparity_pvalue(g, s, t);
        const auto b = disparity_pvalue(scaled, *scaled.find(g.label(s)), *scaled.find(g.label(t)));
        CHECK(a.alpha_out == doctest::Approx(b.alpha_out).epsilon(1e-13));
        CHECK(a.alpha_in == doctest::Approx(b.alpha_in).epsilon(1e-13));
    });
}

TEST_CASE("significance csv has the documented shape") {
    GraphBuilder b;
    b.add_edge("a", "b", 2).add_edge("b", "a", 1);
    const auto g = b.build();
    std::ostringstream out;
    export_significance_csv(out, g, edge_significance(g, BackboneModel::mlf));
    const std::string s = out.str();
    CHECK(s.rfind("source,target,weight,model,p_value\n", 0) == 0);
    CHECK(s.find("a,b,2,mlf,") != std::string::npos);
}

TEST_CASE("prune validates the significance level") {
    const auto g = testkit::gen_gnp_directed({10, 0.3, 1, 1});
    CHECK_THROWS_AS(static_cast<void>(prune(g, BackboneModel::mlf, 0.0)), ArgumentError);
    CHECK_THROWS_AS(static_cast<void>(prune(g, BackboneModel::mlf, 1.0)), ArgumentError);
}
