#include "instanet/backbone.hpp"

#include <cmath>
#include <ostream>

#include <boost/math/special_functions/beta.hpp>

#include "instanet/edgelist_io.hpp"
#include "instanet/parallel.hpp"

namespace instanet {

std::string_view to_string(BackboneModel m) {
    return m == BackboneModel::disparity ? "disparity" : "mlf";
}

StrengthTable strength_table(const InstanceGraph& g) {
    StrengthTable t;
    t.s_in.resize(g.node_count());
    t.s_out.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        t.s_in[v] = g.in_strength(v);
        t.s_out[v] = g.out_strength(v);
    }
    t.total = g.total_weight();
    return t;
}

namespace {

double disparity_side(double w, double strength, std::size_t k) {
    if (k <= 1) return 1.0;
    const double p = w / strength;
    if (p >= 1.0) return 0.0;
    // (1-p)^(k-1) in log space for accuracy at small p, large k
    return std::exp(static_cast<double>(k - 1) * std::log1p(-p));
}

} // namespace

DisparityAlpha disparity_pvalue(const InstanceGraph& g, NodeId i, NodeId j) {
    const auto w = g.edge_weight(i, j);
    if (!w) throw ArgumentError("disparity_pvalue: edge does not exist");
    return {disparity_side(*w, g.out_strength(i), g.out_degree(i)),
            disparity_side(*w, g.in_strength(j), g.in_degree(j))};
}

namespace {

double check_integer_weight(double w) {
    if (w != std::floor(w) || w < 1.0)
        throw ValidationError("mlf requires positive integer weights (multiplicities), got " +
                              std::to_string(w));
    return w;
}

} // namespace

double mlf_survival(double weight, double s_out, double s_in, double total) {
    if (weight != std::floor(weight) || weight < 0.0)
        throw ValidationError("mlf requires non-negative integer weights, got " +
                              std::to_string(weight));
    if (weight == 0.0) return 1.0;
    if (total < weight) throw ArgumentError("mlf: total unit edges smaller than edge weight");
    const double p = s_out * s_in / (total * total);
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    // P[Bin(T, p) >= w] = I_p(w, T - w + 1)
    return boost::math::ibeta(weight, total - weight + 1.0, p);
}

double mlf_pvalue(const InstanceGraph& g, NodeId i, NodeId j, const StrengthTable& strengths) {
    const auto w = g.edge_weight(i, j);
    if (!w) throw ArgumentError("mlf_pvalue: edge does not exist");
    check_integer_weight(*w);
    check_integer_weight(strengths.total); // integer weights make T integral
    return mlf_survival(*w, strengths.s_out[i], strengths.s_in[j], strengths.total);
}

std::vector<EdgeSignificance> edge_significance(const InstanceGraph& g, BackboneModel model,
                                                int threads) {
    std::vector<EdgeSignificance> rows;
    rows.reserve(g.edge_count());
    g.for_each_edge([&](NodeId s, NodeId t, double w) {
        rows.push_back({s, t, w, model, 1.0, 1.0, 1.0});
    });
    if (model == BackboneModel::mlf) {
        const StrengthTable strengths = strength_table(g);
        for (const auto& r : rows) check_integer_weight(r.weight);
        check_integer_weight(strengths.total);
        parallel_for(
            rows.size(),
            [&](std::size_t i) {
                auto& r = rows[i];
                r.p_value = mlf_survival(r.weight, strengths.s_out[r.source],
                                         strengths.s_in[r.target], strengths.total);
            },
            threads);
    } else {
        parallel_for(
            rows.size(),
            [&](std::size_t i) {
                auto& r = rows[i];
                r.alpha_out = disparity_side(r.weight, g.out_strength(r.source),
                                             g.out_degree(r.source));
                r.alpha_in = disparity_side(r.weight, g.in_strength(r.target),
                                            g.in_degree(r.target));
                r.p_value = std::min(r.alpha_out, r.alpha_in);
            },
            threads);
    }
    return rows;
}

InstanceGraph prune(const InstanceGraph& g, BackboneModel model, double alpha, int threads) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ArgumentError("prune: significance level must be in (0, 1)");
    const auto rows = edge_significance(g, model, threads);
    GraphBuilder b;
    std::vector<char> touched(g.node_count(), 0);
    for (const auto& r : rows) {
        if (r.p_value < alpha) {
            touched[r.source] = 1;
            touched[r.target] = 1;
        }
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (touched[v]) {
            b.add_node(g.label(v));
            b.set_meta(g.label(v), g.meta(v));
        }
    }
    for (const auto& r : rows) {
        if (r.p_value < alpha) b.add_edge(g.label(r.source), g.label(r.target), r.weight);
    }
    return b.build();
}

void export_significance_csv(std::ostream& out, const InstanceGraph& g,
                             const std::vector<EdgeSignificance>& rows) {
    out << "source,target,weight,model,p_value\n";
    char buf[40];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.12g", r.p_value);
        out << g.label(r.source) << ',' << g.label(r.target) << ',' << format_weight(r.weight)
            << ',' << to_string(r.model) << ',' << buf << '\n';
    }
}

} // namespace instanet
