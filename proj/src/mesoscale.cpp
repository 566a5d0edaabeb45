#include "instanet/mesoscale.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include "instanet/rng.hpp"

namespace instanet {

std::string_view to_string(ModularityVariant v) {
    return v == ModularityVariant::undirected_unweighted ? "undirected_unweighted"
                                                         : "directed_weighted";
}

std::vector<std::uint64_t> Partition::sizes() const {
    std::vector<std::uint64_t> s(community_count, 0);
    for (std::uint32_t c : community) ++s[c];
    return s;
}

std::size_t Partition::significant_count() const {
    std::size_t k = 0;
    for (std::uint64_t s : sizes())
        if (s >= significant_size) ++k;
    return k;
}

void Partition::relabel_by_size() {
    const auto s = sizes();
    std::vector<std::uint32_t> order(community_count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return s[a] != s[b] ? s[a] > s[b] : a < b;
    });
    std::vector<std::uint32_t> relabel(community_count);
    for (std::uint32_t rank = 0; rank < order.size(); ++rank) relabel[order[rank]] = rank;
    for (auto& c : community) c = relabel[c];
}

namespace {

void check_cover(const InstanceGraph& g, const Partition& p) {
    if (p.community.size() != g.node_count())
        throw ValidationError("partition does not cover all nodes: " +
                              std::to_string(p.community.size()) + " assignments for " +
                              std::to_string(g.node_count()) + " nodes");
}

} // namespace

ModularityScore modularity(const InstanceGraph& g, const Partition& p, ModularityVariant variant) {
    check_cover(g, p);
    const std::size_t nc =
        p.community.empty() ? 0 : *std::max_element(p.community.begin(), p.community.end()) + 1;
    ModularityScore score;
    score.variant = variant;
    if (variant == ModularityVariant::undirected_unweighted) {
        const UndirectedGraph u = undirected_view(g);
        const double m = static_cast<double>(u.edge_count());
        if (m == 0) return score;
        std::vector<double> internal(nc, 0.0), degree(nc, 0.0);
        u.for_each_edge([&](NodeId a, NodeId b, double) {
            if (p.community[a] == p.community[b]) internal[p.community[a]] += 1.0;
        });
        for (NodeId v = 0; v < g.node_count(); ++v)
            degree[p.community[v]] += static_cast<double>(u.degree(v));
        double q = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
            const double frac = degree[c] / (2.0 * m);
            q += internal[c] / m - frac * frac;
        }
        score.value = q;
    } else {
        const double w_total = g.total_weight();
        if (w_total == 0) return score;
        std::vector<double> internal(nc, 0.0), sout(nc, 0.0), sin(nc, 0.0);
        g.for_each_edge([&](NodeId s, NodeId t, double w) {
            if (p.community[s] == p.community[t]) internal[p.community[s]] += w;
        });
        for (NodeId v = 0; v < g.node_count(); ++v) {
            sout[p.community[v]] += g.out_strength(v);
            sin[p.community[v]] += g.in_strength(v);
        }
        double q = 0.0;
        for (std::size_t c = 0; c < nc; ++c)
            q += internal[c] / w_total - sout[c] * sin[c] / (w_total * w_total);
        score.value = q;
    }
    return score;
}

namespace {

// Aggregatable weighted graph for the Louvain passes. Undirected mode keeps
// deg = weighted degree (self-loops twice); directed mode keeps both strength
// sides. Adjacency excludes self-loops, which live in `self_w`.
struct LevelGraph {
    bool directed = false;
    std::vector<std::vector<Arc>> out; // undirected mode: all neighbors
    std::vector<std::vector<Arc>> in;  // directed mode only
    std::vector<double> self_w;
    std::vector<double> deg_out; // undirected mode: full degree
    std::vector<double> deg_in;  // directed mode only
    double total = 0.0;          // m (undirected) or W (directed)

    std::size_t size() const { return out.size(); }
};

LevelGraph initial_level(const InstanceGraph& g, ModularityVariant variant) {
    LevelGraph lg;
    const std::size_t n = g.node_count();
    lg.out.resize(n);
    lg.self_w.assign(n, 0.0);
    lg.deg_out.assign(n, 0.0);
    if (variant == ModularityVariant::undirected_unweighted) {
        const UndirectedGraph u = undirected_view(g);
        for (NodeId v = 0; v < n; ++v) {
            for (const Arc& a : u.neighbors(v)) lg.out[v].push_back({a.node, 1.0});
            lg.deg_out[v] = static_cast<double>(u.degree(v));
        }
        lg.total = static_cast<double>(u.edge_count());
    } else {
        lg.directed = true;
        lg.in.resize(n);
        lg.deg_in.assign(n, 0.0);
        for (NodeId v = 0; v < n; ++v) {
            for (const Arc& a : g.out_arcs(v)) lg.out[v].push_back(a);
            for (const Arc& a : g.in_arcs(v)) lg.in[v].push_back(a);
            lg.deg_out[v] = g.out_strength(v);
            lg.deg_in[v] = g.in_strength(v);
        }
        lg.total = g.total_weight();
    }
    return lg;
}

double level_modularity(const LevelGraph& lg, const std::vector<std::uint32_t>& comm) {
    const std::size_t nc = comm.empty() ? 0 : *std::max_element(comm.begin(), comm.end()) + 1;
    std::vector<double> internal(nc, 0.0);
    if (!lg.directed) {
        std::vector<double> degree(nc, 0.0);
        for (std::size_t v = 0; v < lg.size(); ++v) {
            internal[comm[v]] += lg.self_w[v];
            degree[comm[v]] += lg.deg_out[v];
            for (const Arc& a : lg.out[v])
                if (a.node > v && comm[a.node] == comm[v]) internal[comm[v]] += a.weight;
        }
        double q = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
            const double frac = degree[c] / (2.0 * lg.total);
            q += internal[c] / lg.total - frac * frac;
        }
        return q;
    }
    std::vector<double> sout(nc, 0.0), sin(nc, 0.0);
    for (std::size_t v = 0; v < lg.size(); ++v) {
        internal[comm[v]] += lg.self_w[v];
        sout[comm[v]] += lg.deg_out[v];
        sin[comm[v]] += lg.deg_in[v];
        for (const Arc& a : lg.out[v])
            if (comm[a.node] == comm[v]) internal[comm[v]] += a.weight;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < nc; ++c)
        q += internal[c] / lg.total - sout[c] * sin[c] / (lg.total * lg.total);
    return q;
}

// One local-moving phase; returns true if any node changed community.
bool local_move(const LevelGraph& lg, std::vector<std::uint32_t>& comm, Rng& rng) {
    const std::size_t n = lg.size();
    std::vector<double> comm_out(n, 0.0), comm_in(n, 0.0); // degree sums per community
    for (std::size_t v = 0; v < n; ++v) {
        comm_out[comm[v]] += lg.deg_out[v];
        if (lg.directed) comm_in[comm[v]] += lg.deg_in[v];
    }
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    // Scratch for weights from/to the candidate communities of one node.
    std::vector<double> w_to(n, 0.0), w_from(n, 0.0);
    std::vector<std::uint32_t> touched;
    bool any_move = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (const NodeId v : order) {
            const std::uint32_t old_c = comm[v];
            touched.clear();
            auto touch = [&](std::uint32_t c) {
                if (w_to[c] == 0.0 && w_from[c] == 0.0) touched.push_back(c);
            };
            for (const Arc& a : lg.out[v]) {
                if (a.node == v) continue;
                touch(comm[a.node]);
                w_to[comm[a.node]] += a.weight;
            }
            if (lg.directed) {
                for (const Arc& a : lg.in[v]) {
                    if (a.node == v) continue;
                    touch(comm[a.node]);
                    w_from[comm[a.node]] += a.weight;
                }
            }
            touch(old_c);

            // Remove v, then score candidates with v excluded.
            comm_out[old_c] -= lg.deg_out[v];
            if (lg.directed) comm_in[old_c] -= lg.deg_in[v];

            std::uint32_t best_c = old_c;
            double best_gain = 0.0;
            bool have_best = false;
            for (const std::uint32_t c : touched) {
                double gain;
                if (!lg.directed) {
                    gain = w_to[c] / lg.total -
                           lg.deg_out[v] * comm_out[c] / (2.0 * lg.total * lg.total);
                } else {
                    gain = (w_to[c] + w_from[c]) / lg.total -
                           (lg.deg_out[v] * comm_in[c] + lg.deg_in[v] * comm_out[c]) /
                               (lg.total * lg.total);
                }
                if (!have_best || gain > best_gain || (gain == best_gain && c < best_c)) {
                    best_gain = gain;
                    best_c = c;
                    have_best = true;
                }
            }
            comm[v] = best_c;
            comm_out[best_c] += lg.deg_out[v];
            if (lg.directed) comm_in[best_c] += lg.deg_in[v];
            if (best_c != old_c) {
                moved = true;
                any_move = true;
            }
            for (const std::uint32_t c : touched) {
                w_to[c] = 0.0;
                w_from[c] = 0.0;
            }
        }
    }
    return any_move;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                     std::size_t community_count) {
    LevelGraph next;
    next.directed = lg.directed;
    next.out.resize(community_count);
    next.self_w.assign(community_count, 0.0);
    next.deg_out.assign(community_count, 0.0);
    if (lg.directed) {
        next.in.resize(community_count);
        next.deg_in.assign(community_count, 0.0);
    }
    next.total = lg.total;

    std::map<std::pair<std::uint32_t, std::uint32_t>, double> acc;
    for (std::size_t v = 0; v < lg.size(); ++v) {
        const std::uint32_t cv = comm[v];
        next.self_w[cv] += lg.self_w[v];
        next.deg_out[cv] += lg.deg_out[v];
        if (lg.directed) next.deg_in[cv] += lg.deg_in[v];
        for (const Arc& a : lg.out[v]) {
            const std::uint32_t cu = comm[a.node];
            if (cu == cv) {
                // Undirected rows list each internal edge twice.
                next.self_w[cv] += lg.directed ? a.weight : a.weight / 2.0;
            } else {
                acc[{cv, cu}] += a.weight;
            }
        }
    }
    for (const auto& [key, w] : acc) {
        next.out[key.first].push_back({key.second, w});
        if (lg.directed)
            next.in[key.second].push_back({key.first, w});
    }
    return next;
}

std::size_t compact_labels(std::vector<std::uint32_t>& comm) {
    std::vector<std::uint32_t> relabel(comm.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& c : comm) {
        if (relabel[c] == UINT32_MAX) relabel[c] = next++;
        c = relabel[c];
    }
    return next;
}

} // namespace

LouvainResult louvain(const InstanceGraph& g, ModularityVariant variant, std::uint64_t seed) {
    if (g.edge_count() == 0)
        throw ArgumentError("louvain requires a non-empty edge set");
    Rng rng(seed);
    LevelGraph level = initial_level(g, variant);

    const std::size_t n = g.node_count();
    std::vector<std::uint32_t> node_comm(n); // original node -> current level community
    std::iota(node_comm.begin(), node_comm.end(), 0);

    LouvainResult result;
    double prev_q = -1.0;
    while (true) {
        std::vector<std::uint32_t> comm(level.size());
        std::iota(comm.begin(), comm.end(), 0);
        const bool moved = local_move(level, comm, rng);
        const std::size_t nc = compact_labels(comm);
        for (auto& c : node_comm) c = comm[c];
        const double q = level_modularity(level, comm);
        result.pass_modularity.push_back(q);
        if (!moved || q <= prev_q + 1e-12) break;
        prev_q = q;
        if (nc == level.size()) break;
        level = aggregate(level, comm, nc);
    }

    result.partition.community = std::move(node_comm);
    result.partition.community_count = compact_labels(result.partition.community);
    result.partition.method = variant == ModularityVariant::undirected_unweighted
                                  ? "louvain_undirected"
                                  : "louvain_directed_weighted";
    result.partition.relabel_by_size();
    result.score = modularity(g, result.partition, variant);
    return result;
}

double conductance(const InstanceGraph& g, const Partition& p, std::uint32_t community_a,
                   std::uint32_t community_b, bool weighted) {
    check_cover(g, p);
    if (community_a == community_b)
        throw ArgumentError("conductance requires two distinct communities");
    const auto sizes = p.sizes();
    if (community_a >= p.community_count || community_b >= p.community_count ||
        sizes[community_a] == 0 || sizes[community_b] == 0)
        throw ArgumentError("conductance: empty or unknown community");

    const UndirectedGraph u = undirected_view(g);
    double cut = 0.0, vol_a = 0.0, vol_b = 0.0;
    u.for_each_edge([&](NodeId x, NodeId y, double w) {
        const std::uint32_t cx = p.community[x], cy = p.community[y];
        const bool xa = cx == community_a, xb = cx == community_b;
        const bool ya = cy == community_a, yb = cy == community_b;
        if (!(xa || xb) || !(ya || yb)) return; // outside the union subgraph
        const double wv = weighted ? w : 1.0;
        if (xa != ya) cut += wv;
        vol_a += (xa ? wv : 0.0) + (ya ? wv : 0.0);
        vol_b += (xb ? wv : 0.0) + (yb ? wv : 0.0);
    });
    const double vol_min = std::min(vol_a, vol_b);
    if (vol_min == 0.0)
        throw UndefinedStatError("conductance undefined: a community has zero volume in the union");
    return cut / vol_min;
}

PairwiseConductance average_pairwise_conductance(const InstanceGraph& g, const Partition& p,
                                                 bool weighted, bool significant_only) {
    check_cover(g, p);
    const auto sizes = p.sizes();
    std::vector<std::uint32_t> ids;
    for (std::uint32_t c = 0; c < p.community_count; ++c) {
        if (sizes[c] == 0) continue;
        if (!significant_only || sizes[c] >= p.significant_size) ids.push_back(c);
    }
    PairwiseConductance out;
    double sum = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            try {
                sum += conductance(g, p, ids[i], ids[j], weighted);
                ++out.pairs;
            } catch (const UndefinedStatError&) {
                // zero-volume pair: skipped
            }
        }
    }
    out.average = out.pairs == 0 ? 0.0 : sum / static_cast<double>(out.pairs);
    return out;
}

Partition import_partition(std::istream& in, const InstanceGraph& g, const std::string& name,
                           std::vector<std::string>* unknown) {
    Partition p;
    p.community.assign(g.node_count(), UINT32_MAX);
    std::string line;
    std::size_t lineno = 0;
    char delim = 0;
    std::map<std::string, std::uint32_t> label_map; // file community labels -> dense ids
    while (std::getline(in, line)) {
        ++lineno;
        bool skip = true;
        for (char c : line) {
            if (c == '#') break;
            if (c != ' ' && c != '\t' && c != '\r') { skip = false; break; }
        }
        if (skip) continue;
        if (delim == 0) delim = line.find('\t') != std::string::npos ? '\t' : ',';
        const std::size_t pos = line.find(delim);
        if (pos == std::string::npos)
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected 2 columns");
        auto trim = [](std::string s) {
            while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.pop_back();
            std::size_t b = 0;
            while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
            return s.substr(b);
        };
        const std::string label = trim(line.substr(0, pos));
        const std::string comm = trim(line.substr(pos + 1));
        if (label.empty() || comm.empty())
            throw ParseError(name + ":" + std::to_string(lineno) + ": empty field");
        const auto node = g.find(label);
        if (!node) {
            if (unknown) unknown->push_back(label);
            continue;
        }
        auto [it, fresh] = label_map.emplace(comm, static_cast<std::uint32_t>(label_map.size()));
        p.community[*node] = it->second;
    }
    std::string missing;
    std::size_t missing_count = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (p.community[v] == UINT32_MAX) {
            ++missing_count;
            if (missing_count <= 20) {
                if (!missing.empty()) missing += ", ";
                missing += g.label(v);
            }
        }
    }
    if (missing_count > 0)
        throw ValidationError("partition is missing " + std::to_string(missing_count) +
                              " node(s): " + missing + (missing_count > 20 ? ", ..." : ""));
    p.community_count = label_map.size();
    p.method = "imported";
    p.relabel_by_size();
    return p;
}

Partition import_partition_file(const std::string& path, const InstanceGraph& g,
                                std::vector<std::string>* unknown) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open partition file: " + path);
    return import_partition(in, g, path, unknown);
}

void export_partition(std::ostream& out, const InstanceGraph& g, const Partition& p) {
    check_cover(g, p);
    for (NodeId v = 0; v < g.node_count(); ++v)
        out << g.label(v) << '\t' << p.community[v] << '\n';
}

void export_partition_file(const std::string& path, const InstanceGraph& g, const Partition& p) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write partition file: " + path);
    export_partition(out, g, p);
}

} // namespace instanet
