#include "instanet/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace instanet {

RankedList pagerank(const InstanceGraph& g, const PageRankOptions& opts) {
    const std::size_t n = g.node_count();
    if (n == 0) throw ArgumentError("pagerank: empty graph");
    if (!(opts.damping > 0.0 && opts.damping < 1.0))
        throw ArgumentError("pagerank: damping must be in (0, 1)");

    std::vector<double> out_total(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        out_total[v] = opts.weighted ? g.out_strength(v) : static_cast<double>(g.out_degree(v));
    }
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), next(n);
    const double teleport = (1.0 - opts.damping) / static_cast<double>(n);
    double delta = 0.0;
    bool converged = false;
    for (std::uint32_t it = 0; it < opts.max_iter; ++it) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v)
            if (out_total[v] == 0.0) dangling += x[v];
        const double base = teleport + opts.damping * dangling / static_cast<double>(n);
        for (NodeId j = 0; j < n; ++j) {
            double in = 0.0;
            for (const Arc& a : g.in_arcs(j)) {
                const double w = opts.weighted ? a.weight : 1.0;
                in += x[a.node] * (w / out_total[a.node]);
            }
            next[j] = base + opts.damping * in;
        }
        delta = 0.0;
        for (NodeId j = 0; j < n; ++j) delta += std::abs(next[j] - x[j]);
        x.swap(next);
        if (delta < opts.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("pagerank did not converge within " + std::to_string(opts.max_iter) +
                                   " iterations (residual " + std::to_string(delta) + ")",
                               delta);

    // Exact normalization guards the sum-to-one contract against drift.
    const double sum = std::accumulate(x.begin(), x.end(), 0.0);
    for (double& s : x) s /= sum;

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (x[a] != x[b]) return x[a] > x[b];
        return g.label(a) < g.label(b);
    });
    RankedList r;
    r.labels.reserve(n);
    r.scores.reserve(n);
    for (NodeId v : order) {
        r.labels.push_back(g.label(v));
        r.scores.push_back(x[v]);
    }
    return r;
}

namespace {

std::uint64_t count_inversions(std::vector<std::uint32_t>& a) {
    // Merge sort inversion count.
    std::vector<std::uint32_t> buf(a.size());
    std::uint64_t inversions = 0;
    for (std::size_t width = 1; width < a.size(); width *= 2) {
        for (std::size_t lo = 0; lo + width < a.size(); lo += 2 * width) {
            const std::size_t mid = lo + width;
            const std::size_t hi = std::min(a.size(), lo + 2 * width);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (a[i] <= a[j]) {
                    buf[k++] = a[i++];
                } else {
                    inversions += mid - i;
                    buf[k++] = a[j++];
                }
            }
            while (i < mid) buf[k++] = a[i++];
            while (j < hi) buf[k++] = a[j++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                      buf.begin() + static_cast<std::ptrdiff_t>(hi),
                      a.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return inversions;
}

} // namespace

double kendall_tau(const RankedList& a, const RankedList& b) {
    std::unordered_map<std::string, std::uint32_t> rank_in_a;
    rank_in_a.reserve(a.labels.size());
    for (std::uint32_t i = 0; i < a.labels.size(); ++i) rank_in_a.emplace(a.labels[i], i);

    // Shared labels in b's order, each encoded by its a-rank; then renumber
    // a-ranks densely so inversions count exactly the discordant pairs.
    std::vector<std::uint32_t> seq;
    seq.reserve(std::min(a.labels.size(), b.labels.size()));
    for (const std::string& label : b.labels) {
        const auto it = rank_in_a.find(label);
        if (it != rank_in_a.end()) seq.push_back(it->second);
    }
    const std::size_t n = seq.size();
    if (n < 2)
        throw UndefinedStatError("kendall tau undefined: fewer than 2 shared labels");
    {
        std::vector<std::uint32_t> sorted(seq);
        std::sort(sorted.begin(), sorted.end());
        for (auto& v : seq)
            v = static_cast<std::uint32_t>(
                std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    }
    const std::uint64_t discordant = count_inversions(seq);
    const double nn = static_cast<double>(n);
    // Delta counts unshared ordered pairs: both orientations of each
    // discordant pair.
    return 1.0 - 2.0 * (2.0 * static_cast<double>(discordant)) / (nn * (nn - 1.0));
}

double fagin_intersection(const RankedList& a, const RankedList& b, std::size_t k) {
    if (k < 1) throw ArgumentError("fagin: k must be >= 1");
    if (k > a.labels.size() || k > b.labels.size())
        throw ArgumentError("fagin: k exceeds a ranking length (" + std::to_string(k) + " > " +
                            std::to_string(std::min(a.labels.size(), b.labels.size())) + ")");
    std::unordered_set<std::string> seen_a, seen_b;
    seen_a.reserve(2 * k);
    seen_b.reserve(2 * k);
    std::size_t common = 0;
    double sum = 0.0;
    for (std::size_t q = 1; q <= k; ++q) {
        const std::string& la = a.labels[q - 1];
        const std::string& lb = b.labels[q - 1];
        if (la == lb) {
            ++common;
        } else {
            if (seen_b.count(la)) ++common;
            if (seen_a.count(lb)) ++common;
        }
        seen_a.insert(la);
        seen_b.insert(lb);
        sum += static_cast<double>(common) / static_cast<double>(q);
    }
    return sum / static_cast<double>(k);
}

RankedList read_ranking_csv(std::istream& in, const std::string& name) {
    RankedList r;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t pos = line.find(',');
        if (pos == std::string::npos)
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected `label,score`");
        const std::string label = line.substr(0, pos);
        if (label == "label") continue; // header
        double score = 0.0;
        const char* first = line.data() + pos + 1;
        const char* last = line.data() + line.size();
        while (last > first && (last[-1] == '\r' || last[-1] == ' ')) --last;
        auto [p, ec] = std::from_chars(first, last, score);
        if (ec != std::errc() || p != last)
            throw ParseError(name + ":" + std::to_string(lineno) + ": bad score");
        r.labels.push_back(label);
        r.scores.push_back(score);
    }
    return r;
}

RankedList read_ranking_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open ranking file: " + path);
    return read_ranking_csv(in, path);
}

void write_ranking_csv(std::ostream& out, const RankedList& r) {
    out << "label,score\n";
    char buf[40];
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.scores[i]);
        out << r.labels[i] << ',' << buf << '\n';
    }
}

void write_ranking_csv_file(const std::string& path, const RankedList& r) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write ranking file: " + path);
    write_ranking_csv(out, r);
}

DiffRow diff_row(std::string key, std::optional<double> a, std::optional<double> b) {
    DiffRow row{std::move(key), a, b, std::nullopt};
    if (a && b && *b != 0.0) row.pct_change = 100.0 * (*a - *b) / std::abs(*b);
    return row;
}

std::vector<DiffRow> compare_networks(const StatsReport& a, const StatsReport& b) {
    std::vector<DiffRow> rows;
    auto num = [](auto v) { return std::optional<double>(static_cast<double>(v)); };
    auto opt = [](const auto& v) -> std::optional<double> {
        if (v) return static_cast<double>(*v);
        return std::nullopt;
    };
    rows.push_back(diff_row("node_count", num(a.node_count), num(b.node_count)));
    rows.push_back(diff_row("edge_count", num(a.edge_count), num(b.edge_count)));
    rows.push_back(diff_row("reciprocity", opt(a.reciprocity), opt(b.reciprocity)));
    rows.push_back(diff_row("density", opt(a.density), opt(b.density)));
    rows.push_back(diff_row("avg_degree", num(a.avg_degree), num(b.avg_degree)));
    rows.push_back(diff_row("avg_in_degree", num(a.avg_in_degree), num(b.avg_in_degree)));
    rows.push_back(diff_row("pct_sources", num(a.pct_sources), num(b.pct_sources)));
    rows.push_back(diff_row("pct_sinks", num(a.pct_sinks), num(b.pct_sinks)));
    rows.push_back(diff_row("assortativity_undirected", opt(a.assortativity_undirected),
                            opt(b.assortativity_undirected)));
    rows.push_back(diff_row("assortativity_directed", opt(a.assortativity_directed),
                            opt(b.assortativity_directed)));
    rows.push_back(diff_row("avg_path_length", opt(a.avg_path_length), opt(b.avg_path_length)));
    rows.push_back(diff_row("diameter", opt(a.diameter), opt(b.diameter)));
    rows.push_back(diff_row("transitivity", num(a.transitivity), num(b.transitivity)));
    rows.push_back(diff_row("clustering_restricted", num(a.clustering_restricted),
                            num(b.clustering_restricted)));
    rows.push_back(diff_row("clustering_full", num(a.clustering_full), num(b.clustering_full)));
    rows.push_back(diff_row("scc_count", num(a.scc_count), num(b.scc_count)));
    rows.push_back(diff_row("wcc_count", num(a.wcc_count), num(b.wcc_count)));
    return rows;
}

} // namespace instanet
