#include "instanet/macrostats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "instanet/rng.hpp"

namespace instanet {

double reciprocity(const InstanceGraph& g) {
    if (g.edge_count() == 0)
        throw UndefinedStatError("reciprocity undefined: empty edge set");
    std::uint64_t mutual = 0;
    g.for_each_edge([&](NodeId s, NodeId t, double) {
        if (g.has_edge(t, s)) ++mutual;
    });
    return static_cast<double>(mutual) / static_cast<double>(g.edge_count());
}

DegreeSummary degree_summary(const InstanceGraph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) throw UndefinedStatError("degree summary undefined: empty graph");
    DegreeSummary s;
    s.in_degree.resize(n);
    s.out_degree.resize(n);
    s.total_degree.resize(n);
    const UndirectedGraph u = undirected_view(g);
    std::size_t sources = 0, sinks = 0;
    for (NodeId v = 0; v < n; ++v) {
        s.in_degree[v] = static_cast<std::uint32_t>(g.in_degree(v));
        s.out_degree[v] = static_cast<std::uint32_t>(g.out_degree(v));
        s.total_degree[v] = static_cast<std::uint32_t>(u.degree(v));
        if (s.in_degree[v] == 0) ++sources;
        if (s.out_degree[v] == 0) ++sinks;
    }
    s.avg_degree = 2.0 * static_cast<double>(u.edge_count()) / static_cast<double>(n);
    s.avg_in_degree = static_cast<double>(g.edge_count()) / static_cast<double>(n);
    s.pct_sources = static_cast<double>(sources) / static_cast<double>(n);
    s.pct_sinks = static_cast<double>(sinks) / static_cast<double>(n);
    return s;
}

namespace {

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < 2) return std::nullopt;
    const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
    const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
    if (*xmin == *xmax || *ymin == *ymax) return std::nullopt;
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

std::optional<double> degree_assortativity(const InstanceGraph& g, AssortVariant variant) {
    if (g.edge_count() < 2) return std::nullopt;
    const UndirectedGraph u = undirected_view(g);
    std::vector<double> xs, ys;
    if (variant == AssortVariant::directed_total) {
        xs.reserve(g.edge_count());
        ys.reserve(g.edge_count());
        g.for_each_edge([&](NodeId s, NodeId t, double) {
            xs.push_back(static_cast<double>(u.degree(s)));
            ys.push_back(static_cast<double>(u.degree(t)));
        });
    } else {
        xs.reserve(2 * u.edge_count());
        ys.reserve(2 * u.edge_count());
        u.for_each_edge([&](NodeId a, NodeId b, double) {
            const double da = static_cast<double>(u.degree(a));
            const double db = static_cast<double>(u.degree(b));
            xs.push_back(da);
            ys.push_back(db);
            xs.push_back(db);
            ys.push_back(da);
        });
    }
    return pearson(xs, ys);
}

namespace {

struct BfsScratch {
    std::vector<std::uint32_t> dist;
    std::vector<NodeId> queue;
};

// Returns (sum of finite distances, count, eccentricity) from source.
template <typename NeighborFn>
std::tuple<double, std::uint64_t, std::uint32_t> bfs_from(NodeId source, std::size_t n,
                                                          NeighborFn&& nbrs, BfsScratch& scratch) {
    constexpr std::uint32_t unseen = UINT32_MAX;
    scratch.dist.assign(n, unseen);
    scratch.queue.clear();
    scratch.dist[source] = 0;
    scratch.queue.push_back(source);
    std::size_t head = 0;
    double sum = 0;
    std::uint64_t count = 0;
    std::uint32_t ecc = 0;
    while (head < scratch.queue.size()) {
        const NodeId v = scratch.queue[head++];
        const std::uint32_t d = scratch.dist[v];
        if (d > 0) {
            sum += d;
            ++count;
            ecc = std::max(ecc, d);
        }
        nbrs(v, [&](NodeId w) {
            if (scratch.dist[w] == unseen) {
                scratch.dist[w] = d + 1;
                scratch.queue.push_back(w);
            }
        });
    }
    return {sum, count, ecc};
}

} // namespace

PathMetrics path_metrics(const InstanceGraph& g, const PathOptions& opts) {
    const std::size_t n = g.node_count();
    if (n == 0) throw UndefinedStatError("path metrics undefined: empty graph");

    std::vector<NodeId> sources;
    UndirectedGraph und;
    const bool undirected = opts.mode == PathMode::undirected_lwcc;
    if (undirected) {
        und = undirected_view(g);
        const ComponentInfo comp = components(g);
        std::vector<std::uint64_t> size(comp.wcc_count, 0);
        for (NodeId v = 0; v < n; ++v) ++size[comp.wcc_id[v]];
        const std::uint32_t largest = static_cast<std::uint32_t>(
            std::max_element(size.begin(), size.end()) - size.begin());
        for (NodeId v = 0; v < n; ++v)
            if (comp.wcc_id[v] == largest) sources.push_back(v);
        if (sources.size() < 2)
            throw UndefinedStatError("path metrics undefined: largest component is a single node");
    } else {
        sources.resize(n);
        std::iota(sources.begin(), sources.end(), 0);
    }

    PathMetrics pm;
    const std::size_t scope = sources.size();
    if (scope > opts.exact_threshold && opts.sample_sources < scope) {
        Rng rng(opts.seed);
        rng.shuffle(sources);
        sources.resize(opts.sample_sources);
        std::sort(sources.begin(), sources.end());
        pm.sampled = true;
    }

    auto und_nbrs = [&](NodeId v, auto&& visit) {
        for (const Arc& a : und.neighbors(v)) visit(a.node);
    };
    auto dir_nbrs = [&](NodeId v, auto&& visit) {
        for (const Arc& a : g.out_arcs(v)) visit(a.node);
    };

    double total = 0;
    std::uint64_t pairs = 0;
    std::uint32_t diameter = 0;
    BfsScratch scratch;
    for (const NodeId s : sources) {
        const auto [sum, count, ecc] =
            undirected ? bfs_from(s, n, und_nbrs, scratch) : bfs_from(s, n, dir_nbrs, scratch);
        total += sum;
        pairs += count;
        diameter = std::max(diameter, ecc);
    }
    if (pairs == 0)
        throw UndefinedStatError("path metrics undefined: no reachable pair");
    pm.avg_path_length = total / static_cast<double>(pairs);
    pm.diameter = diameter;
    pm.pairs = pairs;
    return pm;
}

TriadicStats triadic_stats(const InstanceGraph& g) {
    const UndirectedGraph u = undirected_view(g);
    const std::size_t n = u.node_count();
    TriadicStats out;
    if (n == 0) return out;

    // Degree-ordered orientation; each triangle found once, credited to all
    // three corners.
    std::vector<std::uint32_t> rank(n);
    {
        std::vector<NodeId> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
            return u.degree(a) != u.degree(b) ? u.degree(a) < u.degree(b) : a < b;
        });
        for (std::size_t i = 0; i < n; ++i) rank[order[i]] = static_cast<std::uint32_t>(i);
    }
    std::vector<std::vector<NodeId>> fwd(n);
    for (NodeId v = 0; v < n; ++v) {
        for (const Arc& a : u.neighbors(v))
            if (rank[a.node] > rank[v]) fwd[v].push_back(a.node);
    }
    std::vector<std::uint64_t> tri(n, 0);
    std::vector<char> mark(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId w : fwd[v]) mark[w] = 1;
        for (NodeId w : fwd[v]) {
            for (NodeId x : fwd[w]) {
                if (mark[x]) {
                    ++tri[v];
                    ++tri[w];
                    ++tri[x];
                }
            }
        }
        for (NodeId w : fwd[v]) mark[w] = 0;
    }

    double triangles3 = 0, wedges = 0, sum_restricted = 0;
    std::size_t restricted = 0;
    for (NodeId v = 0; v < n; ++v) {
        const double d = static_cast<double>(u.degree(v));
        const double w = d * (d - 1.0) / 2.0;
        triangles3 += static_cast<double>(tri[v]);
        wedges += w;
        if (d >= 2.0) {
            sum_restricted += static_cast<double>(tri[v]) / w;
            ++restricted;
        }
    }
    out.transitivity = wedges > 0 ? triangles3 / wedges : 0.0;
    out.clustering_restricted =
        restricted > 0 ? sum_restricted / static_cast<double>(restricted) : 0.0;
    out.clustering_full = sum_restricted / static_cast<double>(n);
    return out;
}

std::vector<std::pair<std::uint32_t, double>> knn_distribution(const InstanceGraph& g) {
    const UndirectedGraph u = undirected_view(g);
    const std::size_t n = u.node_count();
    std::map<std::uint32_t, std::pair<double, std::uint64_t>> buckets;
    for (NodeId v = 0; v < n; ++v) {
        const std::size_t d = u.degree(v);
        if (d == 0) continue;
        double mean_nb = 0;
        for (const Arc& a : u.neighbors(v)) mean_nb += static_cast<double>(u.degree(a.node));
        mean_nb /= static_cast<double>(d);
        auto& [acc, cnt] = buckets[static_cast<std::uint32_t>(d)];
        acc += mean_nb;
        ++cnt;
    }
    std::vector<std::pair<std::uint32_t, double>> out;
    out.reserve(buckets.size());
    for (const auto& [k, v] : buckets)
        out.emplace_back(k, v.first / static_cast<double>(v.second));
    return out;
}

StatsReport compute_stats_report(const InstanceGraph& g, const StatsOptions& opts) {
    StatsReport r;
    r.node_count = g.node_count();
    r.edge_count = g.edge_count();
    if (g.node_count() == 0) return r;

    if (g.edge_count() > 0) r.reciprocity = reciprocity(g);
    if (g.node_count() > 1)
        r.density = static_cast<double>(g.edge_count()) /
                    (static_cast<double>(g.node_count()) * static_cast<double>(g.node_count() - 1));

    const DegreeSummary deg = degree_summary(g);
    r.avg_degree = deg.avg_degree;
    r.avg_in_degree = deg.avg_in_degree;
    r.pct_sources = deg.pct_sources;
    r.pct_sinks = deg.pct_sinks;

    r.assortativity_undirected = degree_assortativity(g, AssortVariant::undirected);
    r.assortativity_directed = degree_assortativity(g, AssortVariant::directed_total);

    try {
        const PathMetrics pm = path_metrics(g, opts.paths);
        r.avg_path_length = pm.avg_path_length;
        r.diameter = pm.diameter;
        r.paths_sampled = pm.sampled;
    } catch (const UndefinedStatError&) {
        // left null
    }

    const TriadicStats tri = triadic_stats(g);
    r.transitivity = tri.transitivity;
    r.clustering_restricted = tri.clustering_restricted;
    r.clustering_full = tri.clustering_full;

    const ComponentInfo comp = components(g);
    r.scc_count = comp.scc_count;
    r.wcc_count = comp.wcc_count;
    return r;
}

} // namespace instanet
