#include "instanet/coredecomp.hpp"

#include <algorithm>

namespace instanet {

std::string_view to_string(DegreeVariant v) {
    switch (v) {
        case DegreeVariant::total: return "total";
        case DegreeVariant::in: return "in";
        default: return "out";
    }
}

CorenessMap core_decomposition(const InstanceGraph& g, DegreeVariant variant) {
    const std::size_t n = g.node_count();
    CorenessMap map;
    map.variant = variant;
    map.coreness.assign(n, 0);
    if (n == 0) return map;

    UndirectedGraph und;
    if (variant == DegreeVariant::total) und = undirected_view(g);

    std::vector<std::uint32_t> deg(n);
    for (NodeId v = 0; v < n; ++v) {
        switch (variant) {
            case DegreeVariant::total: deg[v] = static_cast<std::uint32_t>(und.degree(v)); break;
            case DegreeVariant::in: deg[v] = static_cast<std::uint32_t>(g.in_degree(v)); break;
            case DegreeVariant::out: deg[v] = static_cast<std::uint32_t>(g.out_degree(v)); break;
        }
    }
    const std::uint32_t max_deg = *std::max_element(deg.begin(), deg.end());

    // Batagelj-Zaversnik bucket layout: vert sorted by degree, pos = index of
    // each node in vert, bin = start offset of each degree class.
    std::vector<std::size_t> bin(max_deg + 2, 0);
    for (NodeId v = 0; v < n; ++v) ++bin[deg[v] + 1];
    for (std::size_t d = 1; d < bin.size(); ++d) bin[d] += bin[d - 1];
    std::vector<NodeId> vert(n);
    std::vector<std::size_t> pos(n);
    {
        std::vector<std::size_t> cursor(bin.begin(), bin.end() - 1);
        for (NodeId v = 0; v < n; ++v) {
            pos[v] = cursor[deg[v]]++;
            vert[pos[v]] = v;
        }
    }

    auto decrease = [&](NodeId u) {
        // Move u one bucket down (swap with the first member of its class).
        const std::uint32_t du = deg[u];
        const std::size_t pu = pos[u];
        const std::size_t pw = bin[du];
        const NodeId w = vert[pw];
        if (u != w) {
            std::swap(vert[pu], vert[pw]);
            pos[u] = pw;
            pos[w] = pu;
        }
        ++bin[du];
        --deg[u];
    };

    std::vector<char> removed(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const NodeId v = vert[i];
        map.coreness[v] = deg[v];
        removed[v] = 1;
        auto touch = [&](NodeId u) {
            if (!removed[u] && deg[u] > deg[v]) decrease(u);
        };
        switch (variant) {
            case DegreeVariant::total:
                for (const Arc& a : und.neighbors(v)) touch(a.node);
                break;
            case DegreeVariant::in:
                for (const Arc& a : g.out_arcs(v)) touch(a.node);
                break;
            case DegreeVariant::out:
                for (const Arc& a : g.in_arcs(v)) touch(a.node);
                break;
        }
    }
    map.degeneracy = *std::max_element(map.coreness.begin(), map.coreness.end());
    return map;
}

InstanceGraph innermost_core(const InstanceGraph& g, const CorenessMap& cmap) {
    if (cmap.coreness.size() != g.node_count())
        throw ArgumentError("innermost_core: coreness map does not match graph");
    std::vector<bool> keep(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        keep[v] = cmap.coreness[v] >= cmap.degeneracy;
    return induced_subgraph(g, keep);
}

CoreLinkProfile core_link_profile(const InstanceGraph& g, const CorenessMap& cmap) {
    if (cmap.coreness.size() != g.node_count())
        throw ArgumentError("core_link_profile: coreness map does not match graph");
    CoreLinkProfile profile;
    std::vector<std::uint64_t> in_links(cmap.degeneracy + 1, 0), out_links(cmap.degeneracy + 1, 0);
    std::vector<char> present(cmap.degeneracy + 1, 0);
    for (NodeId v = 0; v < g.node_count(); ++v) present[cmap.coreness[v]] = 1;
    std::uint64_t innermost_incident = 0;
    g.for_each_edge([&](NodeId s, NodeId t, double) {
        ++out_links[cmap.coreness[s]];
        ++in_links[cmap.coreness[t]];
        if (cmap.coreness[s] == cmap.degeneracy || cmap.coreness[t] == cmap.degeneracy)
            ++innermost_incident;
    });
    for (std::uint32_t c = 0; c <= cmap.degeneracy; ++c) {
        if (present[c]) profile.rows.push_back({c, in_links[c], out_links[c]});
    }
    profile.innermost_edge_fraction =
        g.edge_count() == 0 ? 0.0
                            : static_cast<double>(innermost_incident) /
                                  static_cast<double>(g.edge_count());
    return profile;
}

} // namespace instanet
