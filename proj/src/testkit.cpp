#include "instanet/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include <json.hpp>

#include "instanet/rng.hpp"

namespace instanet::testkit {

namespace {

std::string node_label(std::size_t i) { return "n" + std::to_string(i); }

} // namespace

InstanceGraph gen_gnp_directed(const GnpSpec& spec) {
    if (spec.p < 0.0 || spec.p > 1.0) throw ArgumentError("gnp: p must be in [0, 1]");
    if (spec.n < 1) throw ArgumentError("gnp: n must be >= 1");
    if (spec.max_weight < 1) throw ArgumentError("gnp: max_weight must be >= 1");
    Rng rng(spec.seed);
    GraphBuilder b;
    for (std::size_t i = 0; i < spec.n; ++i) b.add_node(node_label(i));

    const std::uint64_t pairs = static_cast<std::uint64_t>(spec.n) * (spec.n - 1);
    auto emit = [&](std::uint64_t k) {
        const std::uint64_t i = k / (spec.n - 1);
        const std::uint64_t r = k % (spec.n - 1);
        const std::uint64_t j = r < i ? r : r + 1;
        const double w = spec.max_weight == 1 ? 1.0 : 1.0 + static_cast<double>(rng.below(spec.max_weight));
        b.add_edge(node_label(i), node_label(j), w);
    };
    if (spec.p >= 1.0) {
        for (std::uint64_t k = 0; k < pairs; ++k) emit(k);
    } else if (spec.p > 0.0) {
        // Geometric skipping over the ordered-pair index space.
        const double log1mp = std::log1p(-spec.p);
        double cursor = -1.0;
        while (true) {
            double u = rng.uniform();
            while (u <= 0.0) u = rng.uniform();
            cursor += 1.0 + std::floor(std::log(u) / log1mp);
            if (cursor >= static_cast<double>(pairs)) break;
            emit(static_cast<std::uint64_t>(cursor));
        }
    }
    return b.build();
}

PlantedPartitionResult gen_planted_partition(const PlantedPartitionSpec& spec) {
    if (spec.p_in < 0 || spec.p_in > 1 || spec.p_out < 0 || spec.p_out > 1)
        throw ArgumentError("planted_partition: probabilities must be in [0, 1]");
    if (spec.blocks < 1 || spec.block_size < 1)
        throw ArgumentError("planted_partition: blocks and block_size must be >= 1");
    Rng rng(spec.seed);
    const std::size_t n = spec.blocks * spec.block_size;
    PlantedPartitionResult result;
    result.block_of.resize(n);
    GraphBuilder b;
    for (std::size_t i = 0; i < n; ++i) {
        result.block_of[i] = static_cast<std::uint32_t>(i / spec.block_size);
        b.add_node(node_label(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double p = result.block_of[i] == result.block_of[j] ? spec.p_in : spec.p_out;
            if (rng.uniform() < p) b.add_edge(node_label(i), node_label(j), 1.0);
        }
    }
    result.graph = b.build();
    return result;
}

FederatedSim gen_federated_sim(const FederatedSimSpec& spec) {
    if (spec.instances < 2) throw ArgumentError("federated_sim: need at least 2 instances");
    if (spec.affinity < 0 || spec.affinity > 1 || spec.online_fraction < 0 || spec.online_fraction > 1)
        throw ArgumentError("federated_sim: probabilities must be in [0, 1]");
    if (spec.communities < 1) throw ArgumentError("federated_sim: communities must be >= 1");
    Rng rng(spec.seed);
    FederatedSim sim;

    const std::size_t m = spec.instances;
    std::vector<std::string> inst(m);
    std::vector<std::size_t> users(m);
    std::vector<std::size_t> comm(m);
    std::vector<std::vector<std::size_t>> by_comm(spec.communities);
    for (std::size_t i = 0; i < m; ++i) {
        inst[i] = "m" + std::to_string(i);
        const double u = std::exp(spec.user_mu + spec.user_sigma * rng.normal());
        users[i] = std::min<std::size_t>(5000, std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(u))));
        comm[i] = i % spec.communities;
        by_comm[comm[i]].push_back(i);
        const bool online = rng.uniform() < spec.online_fraction;
        sim.meta.emplace_back(inst[i], NodeMeta{online ? NodeStatus::online : NodeStatus::offline,
                                                Platform::mastodon});
    }

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t u = 0; u < users[i]; ++u) {
            const std::string source_user = "u" + std::to_string(i) + "_" + std::to_string(u);
            const std::uint32_t follows = rng.poisson(spec.follows_per_user);
            for (std::uint32_t f = 0; f < follows; ++f) {
                std::size_t j;
                if (rng.uniform() < spec.affinity) {
                    const auto& pool = by_comm[comm[i]];
                    j = pool[rng.below(pool.size())];
                } else {
                    j = rng.below(m);
                }
                const std::size_t v = rng.below(users[j]);
                // Intra-instance follows are produced on purpose; the
                // projection is expected to drop and count them.
                sim.user_edges.push_back({source_user, inst[i],
                                          "u" + std::to_string(j) + "_" + std::to_string(v), inst[j]});
            }
        }
    }

    for (std::size_t x = 0; x < spec.boundary_instances; ++x) {
        const std::string xlabel = "x" + std::to_string(x);
        const std::uint32_t deg = std::max<std::uint32_t>(1, rng.poisson(spec.boundary_edges_per_instance));
        for (std::uint32_t e = 0; e < deg; ++e) {
            const std::string& partner = inst[rng.below(m)];
            const double w = 1.0 + static_cast<double>(rng.below(4));
            if (rng.uniform() < 0.5)
                sim.boundary_edges.push_back({xlabel, partner, w});
            else
                sim.boundary_edges.push_back({partner, xlabel, w});
        }
    }
    return sim;
}

std::vector<double> gen_powerlaw_sample(double alpha, std::uint64_t xmin, std::size_t n,
                                        std::uint64_t seed) {
    if (alpha <= 1.0) throw ArgumentError("powerlaw_sample: alpha must be > 1");
    if (xmin < 1) throw ArgumentError("powerlaw_sample: xmin must be >= 1");
    Rng rng(seed);
    const double xmin_d = static_cast<double>(xmin);
    const double z = oracle::hurwitz_zeta(alpha, xmin_d);

    // Bounded cumulative table over {xmin, xmin+1, ...}; the rare draw past
    // its coverage falls back to an integer search on the zeta survival.
    std::vector<double> cum;
    cum.reserve(1 << 16);
    double acc = 0.0;
    while (cum.size() < (std::size_t{1} << 20) && acc < 1.0 - 1e-12) {
        const double k = xmin_d + static_cast<double>(cum.size());
        acc += std::pow(k, -alpha) / z;
        cum.push_back(acc);
    }

    auto deep_tail = [&](double u) {
        // Smallest v with P(X <= v) >= u, i.e. zeta(alpha, v+1)/z <= 1-u.
        // lo stays insufficient, hi sufficient.
        const double target = std::max(1.0 - u, 1e-300);
        std::uint64_t lo = xmin + cum.size() - 1;
        std::uint64_t hi = 2 * lo;
        while (oracle::hurwitz_zeta(alpha, static_cast<double>(hi + 1)) / z > target &&
               hi < (std::uint64_t{1} << 50)) {
            lo = hi;
            hi *= 2;
        }
        while (hi - lo > 1) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            if (oracle::hurwitz_zeta(alpha, static_cast<double>(mid + 1)) / z > target)
                lo = mid;
            else
                hi = mid;
        }
        return static_cast<double>(hi);
    };

    std::vector<double> sample(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        if (u > cum.back()) {
            sample[i] = deep_tail(u);
            continue;
        }
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        sample[i] = xmin_d + static_cast<double>(it - cum.begin());
    }
    return sample;
}

std::vector<double> gen_lognormal_sample(double mu, double sigma, std::size_t n, std::uint64_t seed) {
    if (sigma <= 0) throw ArgumentError("lognormal_sample: sigma must be > 0");
    Rng rng(seed);
    std::vector<double> sample(n);
    for (auto& x : sample) x = std::exp(mu + sigma * rng.normal());
    return sample;
}

std::vector<double> gen_exponential_sample(double rate, std::size_t n, std::uint64_t seed) {
    if (rate <= 0) throw ArgumentError("exponential_sample: rate must be > 0");
    Rng rng(seed);
    std::vector<double> sample(n);
    for (auto& x : sample) x = rng.exponential(rate);
    return sample;
}

std::vector<double> gen_poisson_sample(double mean, std::size_t n, std::uint64_t seed) {
    if (mean <= 0) throw ArgumentError("poisson_sample: mean must be > 0");
    Rng rng(seed);
    std::vector<double> sample(n);
    for (auto& x : sample) x = static_cast<double>(rng.poisson(mean));
    return sample;
}

std::vector<double> gen_geometric_sample(double p, std::size_t n, std::uint64_t seed) {
    if (p <= 0 || p >= 1) throw ArgumentError("geometric_sample: p must be in (0, 1)");
    Rng rng(seed);
    std::vector<double> sample(n);
    for (auto& x : sample) x = static_cast<double>(rng.geometric(p));
    return sample;
}

GeneratorSpec parse_generator_spec(const nlohmann::json& j) {
    GeneratorSpec spec;
    if (!j.contains("family")) throw ArgumentError("generator spec: missing 'family'");
    spec.family = j.at("family").get<std::string>();
    spec.seed = j.value("seed", 0ULL);
    if (spec.family == "gnp_directed") {
        spec.gnp.n = j.at("n").get<std::size_t>();
        spec.gnp.p = j.at("p").get<double>();
        spec.gnp.max_weight = j.value("max_weight", 1U);
        spec.gnp.seed = spec.seed;
    } else if (spec.family == "planted_partition") {
        spec.planted.blocks = j.at("blocks").get<std::size_t>();
        spec.planted.block_size = j.at("block_size").get<std::size_t>();
        spec.planted.p_in = j.at("p_in").get<double>();
        spec.planted.p_out = j.at("p_out").get<double>();
        spec.planted.seed = spec.seed;
    } else if (spec.family == "federated_sim") {
        FederatedSimSpec f;
        f.instances = j.value("instances", f.instances);
        f.user_mu = j.value("user_mu", f.user_mu);
        f.user_sigma = j.value("user_sigma", f.user_sigma);
        f.follows_per_user = j.value("follows_per_user", f.follows_per_user);
        f.communities = j.value("communities", f.communities);
        f.affinity = j.value("affinity", f.affinity);
        f.online_fraction = j.value("online_fraction", f.online_fraction);
        f.boundary_instances = j.value("boundary_instances", f.boundary_instances);
        f.boundary_edges_per_instance = j.value("boundary_edges_per_instance", f.boundary_edges_per_instance);
        f.seed = spec.seed;
        spec.federated = f;
    } else if (spec.family == "powerlaw_sample") {
        spec.alpha = j.at("alpha").get<double>();
        spec.xmin = j.at("xmin").get<std::uint64_t>();
        spec.n = j.at("n").get<std::size_t>();
    } else if (spec.family == "lognormal_sample") {
        spec.mu = j.at("mu").get<double>();
        spec.sigma = j.at("sigma").get<double>();
        spec.n = j.at("n").get<std::size_t>();
    } else {
        throw ArgumentError("generator spec: unknown family '" + spec.family + "'");
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

namespace oracle {

namespace {

void guard(bool ok, const char* what) {
    if (!ok) throw ArgumentError(std::string("oracle size guard exceeded: ") + what);
}

// Dense symmetric 0/1 adjacency of the undirected view.
std::vector<std::vector<char>> undirected_matrix(const InstanceGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
    g.for_each_edge([&](NodeId s, NodeId t, double) {
        a[s][t] = 1;
        a[t][s] = 1;
    });
    return a;
}

} // namespace

std::pair<std::size_t, std::size_t> component_counts(const InstanceGraph& g) {
    const std::size_t n = g.node_count();
    guard(n <= 256, "component_counts n <= 256");
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = 1;
    g.for_each_edge([&](NodeId s, NodeId t, double) { reach[s][t] = 1; });
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (reach[k][j]) reach[i][j] = 1;
        }

    std::vector<int> scc(n, -1);
    std::size_t scc_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (scc[i] >= 0) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (reach[i][j] && reach[j][i]) scc[j] = static_cast<int>(scc_count);
        ++scc_count;
    }

    // Weak reachability: symmetric closure.
    std::vector<std::vector<char>> sym(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) sym[i][i] = 1;
    g.for_each_edge([&](NodeId s, NodeId t, double) {
        sym[s][t] = 1;
        sym[t][s] = 1;
    });
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!sym[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (sym[k][j]) sym[i][j] = 1;
        }
    std::vector<int> wcc(n, -1);
    std::size_t wcc_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (wcc[i] >= 0) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (sym[i][j]) wcc[j] = static_cast<int>(wcc_count);
        ++wcc_count;
    }
    return {scc_count, wcc_count};
}

double reciprocity(const InstanceGraph& g) {
    guard(g.edge_count() <= 1000000, "reciprocity |E| <= 1e6");
    std::set<std::pair<NodeId, NodeId>> edges;
    g.for_each_edge([&](NodeId s, NodeId t, double) { edges.emplace(s, t); });
    std::size_t mutual = 0;
    for (const auto& [s, t] : edges)
        if (edges.count({t, s})) ++mutual;
    return static_cast<double>(mutual) / static_cast<double>(edges.size());
}

Triadic triadic(const InstanceGraph& g) {
    const std::size_t n = g.node_count();
    guard(n <= 256, "triadic n <= 256");
    const auto a = undirected_matrix(g);
    std::vector<std::size_t> deg(n, 0), tri(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) deg[i] += a[i][j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (i != j && j != k && i != k && a[i][j] && a[j][k] && a[i][k]) ++tri[i];
    // tri[i] counted each unordered neighbor pair twice
    double triangle_paths = 0.0, wedges = 0.0;
    double sum_restricted = 0.0, sum_full = 0.0;
    std::size_t restricted = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(tri[i]) / 2.0;
        const double w = static_cast<double>(deg[i]) * (static_cast<double>(deg[i]) - 1.0) / 2.0;
        triangle_paths += t;
        wedges += w;
        if (deg[i] >= 2) {
            sum_restricted += t / w;
            sum_full += t / w;
            ++restricted;
        }
    }
    Triadic out{};
    out.transitivity = wedges > 0 ? triangle_paths / wedges : 0.0;
    out.clustering_restricted = restricted > 0 ? sum_restricted / static_cast<double>(restricted) : 0.0;
    out.clustering_full = n > 0 ? sum_full / static_cast<double>(n) : 0.0;
    return out;
}

std::optional<double> assortativity(const InstanceGraph& g, int variant) {
    guard(g.edge_count() <= 1000000, "assortativity |E| <= 1e6");
    const std::size_t n = g.node_count();
    std::vector<double> total(n, 0.0);
    const auto a = [&] {
        std::vector<std::set<NodeId>> adj(n);
        g.for_each_edge([&](NodeId s, NodeId t, double) {
            adj[s].insert(t);
            adj[t].insert(s);
        });
        return adj;
    }();
    for (std::size_t i = 0; i < n; ++i) total[i] = static_cast<double>(a[i].size());

    std::vector<double> xs, ys;
    if (variant == 0) {
        g.for_each_edge([&](NodeId s, NodeId t, double) {
            xs.push_back(total[s]);
            ys.push_back(total[t]);
        });
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (NodeId j : a[i])
                if (j > i) {
                    xs.push_back(total[i]);
                    ys.push_back(total[j]);
                    xs.push_back(total[j]);
                    ys.push_back(total[i]);
                }
    }
    if (xs.size() < 2) return std::nullopt;
    const double n_pairs = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n_pairs;
    my /= n_pairs;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

std::pair<double, std::uint32_t> path_metrics(const InstanceGraph& g, int mode) {
    const std::size_t n = g.node_count();
    guard(n <= 256, "path_metrics n <= 256");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    g.for_each_edge([&](NodeId s, NodeId t, double) {
        d[s][t] = 1;
        if (mode == 0) d[t][s] = 1;
    });
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);

    std::vector<char> in_scope(n, 1);
    if (mode == 0) {
        // Largest weakly connected component.
        std::vector<int> comp(n, -1);
        int nc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (comp[i] >= 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][j] < inf) comp[j] = nc;
            ++nc;
        }
        std::vector<std::size_t> size(nc, 0);
        for (std::size_t i = 0; i < n; ++i) ++size[comp[i]];
        const int best = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
        for (std::size_t i = 0; i < n; ++i) in_scope[i] = comp[i] == best;
    }
    double sum = 0;
    std::uint64_t pairs = 0;
    double diam = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_scope[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !in_scope[j] || d[i][j] >= inf) continue;
            sum += d[i][j];
            ++pairs;
            diam = std::max(diam, d[i][j]);
        }
    }
    if (pairs == 0) throw UndefinedStatError("path metrics undefined: no reachable pair");
    return {sum / static_cast<double>(pairs), static_cast<std::uint32_t>(diam)};
}

std::vector<std::pair<std::uint32_t, double>> knn(const InstanceGraph& g) {
    const std::size_t n = g.node_count();
    guard(n <= 4096, "knn n <= 4096");
    std::vector<std::set<NodeId>> adj(n);
    g.for_each_edge([&](NodeId s, NodeId t, double) {
        adj[s].insert(t);
        adj[t].insert(s);
    });
    std::map<std::uint32_t, std::pair<double, std::size_t>> buckets;
    for (std::size_t i = 0; i < n; ++i) {
        if (adj[i].empty()) continue;
        double mean_nb = 0;
        for (NodeId j : adj[i]) mean_nb += static_cast<double>(adj[j].size());
        mean_nb /= static_cast<double>(adj[i].size());
        auto& [acc, cnt] = buckets[static_cast<std::uint32_t>(adj[i].size())];
        acc += mean_nb;
        ++cnt;
    }
    std::vector<std::pair<std::uint32_t, double>> out;
    for (const auto& [k, v] : buckets) out.emplace_back(k, v.first / static_cast<double>(v.second));
    return out;
}

std::vector<std::uint32_t> coreness(const InstanceGraph& g, int variant) {
    const std::size_t n = g.node_count();
    guard(n <= 512, "coreness n <= 512");
    std::vector<std::set<NodeId>> out_adj(n), in_adj(n), und_adj(n);
    g.for_each_edge([&](NodeId s, NodeId t, double) {
        out_adj[s].insert(t);
        in_adj[t].insert(s);
        und_adj[s].insert(t);
        und_adj[t].insert(s);
    });
    auto deg_in_set = [&](NodeId v, const std::vector<char>& alive) {
        const auto& nbrs = variant == 0 ? und_adj[v] : (variant == 1 ? in_adj[v] : out_adj[v]);
        std::size_t d = 0;
        for (NodeId u : nbrs)
            if (alive[u]) ++d;
        return d;
    };

    std::vector<std::uint32_t> core(n, 0);
    std::vector<char> alive(n, 1);
    for (std::uint32_t k = 0;; ++k) {
        // Peel everything of degree < k; survivors form C_k.
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (alive[v] && deg_in_set(static_cast<NodeId>(v), alive) < k) {
                    alive[v] = 0;
                    changed = true;
                }
            }
        }
        bool any = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (alive[v]) {
                core[v] = k;
                any = true;
            }
        }
        if (!any) break;
    }
    return core;
}

double modularity(const InstanceGraph& g, const std::vector<std::uint32_t>& community, int variant) {
    const std::size_t n = g.node_count();
    guard(n <= 2048, "modularity n <= 2048");
    if (community.size() != n) throw ArgumentError("modularity oracle: partition size mismatch");
    if (variant == 0) {
        const auto a = undirected_matrix(g);
        std::vector<double> deg(n, 0);
        double two_m = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                deg[i] += a[i][j];
                two_m += a[i][j];
            }
        if (two_m == 0) return 0.0;
        double q = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (community[i] == community[j]) q += a[i][j] - deg[i] * deg[j] / two_m;
        return q / two_m;
    }
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    std::vector<double> sout(n, 0), sin(n, 0);
    double total = 0;
    g.for_each_edge([&](NodeId s, NodeId t, double wt) {
        w[s][t] += wt;
        sout[s] += wt;
        sin[t] += wt;
        total += wt;
    });
    if (total == 0) return 0.0;
    double q = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (community[i] == community[j]) q += w[i][j] - sout[i] * sin[j] / total;
    return q / total;
}

double binomial_survival(std::uint64_t trials, double p, std::uint64_t w) {
    guard(trials <= 1000000, "binomial_survival T <= 1e6");
    if (w == 0) return 1.0;
    if (w > trials) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    const double t = static_cast<double>(trials);
    double sum = 0.0, c = 0.0; // Kahan
    for (std::uint64_t x = w; x <= trials; ++x) {
        const double xd = static_cast<double>(x);
        const double lg = std::lgamma(t + 1) - std::lgamma(xd + 1) - std::lgamma(t - xd + 1) +
                          xd * std::log(p) + (t - xd) * std::log1p(-p);
        const double term = std::exp(lg);
        const double y = term - c;
        const double s = sum + y;
        c = (s - sum) - y;
        sum = s;
        if (term < 1e-20 * sum && x > w + 10) break;
    }
    return std::min(1.0, sum);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

} // namespace

double disparity_alpha(double normalized_weight, std::uint64_t k) {
    if (k <= 1) return 1.0;
    const double p = std::min(1.0, std::max(0.0, normalized_weight));
    const double kd = static_cast<double>(k);
    auto density = [kd](double x) { return (kd - 1.0) * std::pow(1.0 - x, kd - 2.0); };
    if (p >= 1.0) return 0.0;
    return integrate(density, p, 1.0, 1e-12);
}

std::vector<double> pagerank(const InstanceGraph& g, double damping, bool weighted,
                             std::uint32_t iterations) {
    const std::size_t n = g.node_count();
    guard(n <= 512, "pagerank n <= 512");
    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
    for (NodeId v = 0; v < n; ++v) {
        double total = 0;
        for (const Arc& a : g.out_arcs(v)) total += weighted ? a.weight : 1.0;
        if (total > 0) {
            for (const Arc& a : g.out_arcs(v)) p[v][a.node] = (weighted ? a.weight : 1.0) / total;
        }
    }
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), next(n);
    for (std::uint32_t it = 0; it < iterations; ++it) {
        double dangling = 0;
        for (NodeId v = 0; v < n; ++v)
            if (g.out_degree(v) == 0) dangling += x[v];
        for (std::size_t j = 0; j < n; ++j) {
            double in = 0;
            for (std::size_t i = 0; i < n; ++i) in += x[i] * p[i][j];
            next[j] = (1.0 - damping) / static_cast<double>(n) +
                      damping * (in + dangling / static_cast<double>(n));
        }
        double delta = 0;
        for (std::size_t j = 0; j < n; ++j) delta += std::abs(next[j] - x[j]);
        x.swap(next);
        if (delta < 1e-14) break;
    }
    return x;
}

double kendall_tau(const std::vector<std::uint32_t>& order_a,
                   const std::vector<std::uint32_t>& order_b) {
    guard(order_a.size() <= 20000, "kendall_tau n <= 20000");
    if (order_a.size() != order_b.size() || order_a.size() < 2)
        throw ArgumentError("kendall oracle: need two equal-size orderings, n >= 2");
    const std::size_t n = order_a.size();
    std::map<std::uint32_t, std::size_t> pos_a, pos_b;
    for (std::size_t i = 0; i < n; ++i) {
        pos_a[order_a[i]] = i;
        pos_b[order_b[i]] = i;
    }
    // Count ordered pairs present in exactly one ranking's precedence set.
    std::uint64_t unshared = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const std::uint32_t x = order_a[i], y = order_a[j];
            const bool in_a = pos_a[x] < pos_a[y];
            const bool in_b = pos_b.at(x) < pos_b.at(y);
            if (in_a != in_b) ++unshared;
        }
    const double nn = static_cast<double>(n);
    return 1.0 - 2.0 * static_cast<double>(unshared) / (nn * (nn - 1.0));
}

double ks_distance(const std::vector<double>& sorted_sample,
                   const std::function<double(double)>& cdf, bool discrete) {
    const std::size_t n = sorted_sample.size();
    if (n == 0) throw ArgumentError("ks oracle: empty sample");
    const double nd = static_cast<double>(n);
    double d = 0.0;
    if (discrete) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i + 1 < n && sorted_sample[i + 1] == sorted_sample[i]) continue;
            const double femp = static_cast<double>(i + 1) / nd;
            d = std::max(d, std::abs(femp - cdf(sorted_sample[i])));
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double f = cdf(sorted_sample[i]);
            d = std::max(d, std::max(f - static_cast<double>(i) / nd,
                                     static_cast<double>(i + 1) / nd - f));
        }
    }
    return d;
}

double hurwitz_zeta(double s, double a) {
    if (s <= 1.0) throw ArgumentError("hurwitz_zeta oracle: s must be > 1");
    if (a <= 0.0) throw ArgumentError("hurwitz_zeta oracle: a must be > 0");
    // Kahan-summed direct series out to b, then a short Euler-Maclaurin tail.
    const double b = std::max(a, 1.0e6);
    double sum = 0.0, c = 0.0;
    for (double k = a; k < b; k += 1.0) {
        const double term = std::pow(k, -s);
        const double y = term - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    const double tail = std::pow(b, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(b, -s) +
                        s * std::pow(b, -s - 1.0) / 12.0 -
                        s * (s + 1.0) * (s + 2.0) * std::pow(b, -s - 3.0) / 720.0;
    return sum + tail;
}

} // namespace oracle

} // namespace instanet::testkit
