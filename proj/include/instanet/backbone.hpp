#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "instanet/graph.hpp"

namespace instanet {

enum class BackboneModel { disparity, mlf };

std::string_view to_string(BackboneModel m);

/// Per-node strength sums; total is the number of unit edges T.
struct StrengthTable {
    std::vector<double> s_in;
    std::vector<double> s_out;
    double total = 0.0;
};

StrengthTable strength_table(const InstanceGraph& g);

/// Disparity-filter p-values of edge (i, j): the probability, under uniform
/// random splitting of a node's strength over its incident edges, of a
/// normalized weight at least as large as the observed one. Closed form
/// (1 - w/s)^(k-1); a side with k = 1 is never significant (alpha = 1).
struct DisparityAlpha {
    double alpha_out; // from the source's outgoing perspective
    double alpha_in;  // from the target's incoming perspective
};

DisparityAlpha disparity_pvalue(const InstanceGraph& g, NodeId i, NodeId j);

/// MLF p-value: survival probability P[Bin(T, p_ij) >= w_ij] with
/// p_ij = s_i_out * s_j_in / T^2, evaluated through the regularized
/// incomplete beta function. Weights must be positive integers.
double mlf_pvalue(const InstanceGraph& g, NodeId i, NodeId j, const StrengthTable& strengths);

/// Raw MLF survival: P[Bin(total, s_out*s_in/total^2) >= weight] for a
/// non-negative integer weight (weight 0 gives 1).
double mlf_survival(double weight, double s_out, double s_in, double total);

struct EdgeSignificance {
    NodeId source;
    NodeId target;
    double weight;
    BackboneModel model;
    double p_value;            // disparity: min(alpha_out, alpha_in)
    double alpha_out, alpha_in; // disparity detail (1.0 placeholders for mlf)
};

/// Scores every edge under the chosen null model.
std::vector<EdgeSignificance> edge_significance(const InstanceGraph& g, BackboneModel model,
                                                int threads = 0);

/// Backbone at significance level alpha: keeps edges with p-value < alpha
/// (disparity: significant from either endpoint's side), then drops nodes
/// left isolated.
InstanceGraph prune(const InstanceGraph& g, BackboneModel model, double alpha, int threads = 0);

/// CSV rows `source, target, weight, model, p_value`.
void export_significance_csv(std::ostream& out, const InstanceGraph& g,
                             const std::vector<EdgeSignificance>& rows);

} // namespace instanet
