#include "instanet/netmodel.hpp"

#include <fstream>
#include <istream>
#include <unordered_set>

namespace instanet {

namespace {

std::string strip(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\r' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\r' || s[e - 1] == '\t')) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace

std::vector<UserEdgeRecord> read_user_edges(std::istream& in, const std::string& name) {
    std::vector<UserEdgeRecord> records;
    std::string line;
    std::size_t lineno = 0;
    char delim = 0;
    while (std::getline(in, line)) {
        ++lineno;
        bool blank = true;
        for (char c : line) {
            if (c == '#') { blank = true; break; }
            if (c != ' ' && c != '\t' && c != '\r') { blank = false; break; }
        }
        if (blank) continue;
        if (delim == 0) delim = line.find('\t') != std::string::npos ? '\t' : ',';
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(delim, start);
            if (pos == std::string::npos) {
                fields.push_back(strip(std::string_view(line).substr(start)));
                break;
            }
            fields.push_back(strip(std::string_view(line).substr(start, pos - start)));
            start = pos + 1;
        }
        if (fields.size() != 4)
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected 4 columns, got " +
                             std::to_string(fields.size()));
        for (const auto& f : fields) {
            if (f.empty())
                throw ParseError(name + ":" + std::to_string(lineno) + ": empty field");
        }
        records.push_back({fields[0], fields[1], fields[2], fields[3]});
    }
    return records;
}

std::vector<UserEdgeRecord> read_user_edges_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open user edge file: " + path);
    return read_user_edges(in, path);
}

ProjectionResult project_to_instances(std::span<const UserEdgeRecord> records,
                                      const ProjectionOptions& opts) {
    ProjectionResult result;
    // Dedup over unique user pairs; '\x1f' cannot occur in the fields.
    std::unordered_set<std::string> seen;
    seen.reserve(records.size() * 2);
    GraphBuilder b;
    std::string key;
    for (const UserEdgeRecord& r : records) {
        ++result.records;
        if (r.source_user.empty() || r.source_instance.empty() || r.target_user.empty() ||
            r.target_instance.empty())
            throw ParseError("user edge record " + std::to_string(result.records) +
                             ": empty field");
        if (r.source_instance == r.target_instance) {
            ++result.intra_instance_records;
            continue;
        }
        key.clear();
        key += r.source_user;
        key += '\x1f';
        key += r.source_instance;
        key += '\x1f';
        if (!opts.distinct_source_users) {
            key += r.target_user;
            key += '\x1f';
        }
        key += r.target_instance;
        if (!seen.insert(key).second) {
            ++result.duplicate_records;
            continue;
        }
        b.add_edge(r.source_instance, r.target_instance, 1.0);
    }
    result.graph = b.build();
    return result;
}

InstanceGraph online_subnetwork(const InstanceGraph& g, const OnlineOptions& opts) {
    bool any_status = false;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.meta(v).status != NodeStatus::unknown) {
            any_status = true;
            break;
        }
    }
    if (!any_status)
        throw ValidationError("online_subnetwork: no node carries status metadata");

    std::vector<bool> keep(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        keep[v] = g.meta(v).status == NodeStatus::online;
    InstanceGraph sub = induced_subgraph(g, keep);
    if (!opts.drop_isolated) return sub;

    std::vector<bool> connected(sub.node_count());
    bool all_connected = true;
    for (NodeId v = 0; v < sub.node_count(); ++v) {
        connected[v] = sub.out_degree(v) + sub.in_degree(v) > 0;
        all_connected = all_connected && connected[v];
    }
    if (all_connected) return sub;
    return induced_subgraph(sub, connected);
}

InstanceGraph expanded_network(const InstanceGraph& mastodon,
                               std::span<const EdgeRecord> boundary_edges) {
    std::string offenders;
    std::size_t offender_count = 0;
    for (const EdgeRecord& e : boundary_edges) {
        if (!mastodon.find(e.source) && !mastodon.find(e.target)) {
            ++offender_count;
            if (offender_count <= 20) {
                if (!offenders.empty()) offenders += ", ";
                offenders += e.source + "->" + e.target;
            }
        }
    }
    if (offender_count > 0)
        throw ValidationError("expanded_network: " + std::to_string(offender_count) +
                              " boundary edge(s) with both endpoints outside the mastodon set: " +
                              offenders + (offender_count > 20 ? ", ..." : ""));

    GraphBuilder b;
    for (NodeId v = 0; v < mastodon.node_count(); ++v) {
        b.add_node(mastodon.label(v));
        b.set_meta(mastodon.label(v), mastodon.meta(v));
    }
    mastodon.for_each_edge([&](NodeId s, NodeId t, double w) {
        b.add_edge(mastodon.label(s), mastodon.label(t), w);
    });
    for (const EdgeRecord& e : boundary_edges) {
        for (const std::string& label : {e.source, e.target}) {
            if (!mastodon.find(label)) {
                b.add_node(label);
                b.set_meta(label, NodeMeta{NodeStatus::unknown, Platform::other});
            }
        }
        b.add_edge(e.source, e.target, e.weight);
    }
    return b.build();
}

} // namespace instanet
