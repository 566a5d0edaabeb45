#include "instanet/edgelist_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace instanet {

namespace {

std::string strip(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\r' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\r' || s[e - 1] == '\t')) --e;
    return std::string(s.substr(b, e - b));
}

// Splits on the detected delimiter; fields are whitespace-trimmed.
std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            out.push_back(strip(std::string_view(line).substr(start)));
            break;
        }
        out.push_back(strip(std::string_view(line).substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

char detect_delimiter(const std::string& line) {
    if (line.find('\t') != std::string::npos) return '\t';
    return ',';
}

double parse_weight(const std::string& field, const std::string& name, std::size_t lineno) {
    double w = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, w);
    if (ec != std::errc() || ptr != last)
        throw ParseError(name + ":" + std::to_string(lineno) + ": non-numeric weight '" + field + "'");
    if (!(w > 0.0) || !std::isfinite(w))
        throw ValidationError(name + ":" + std::to_string(lineno) + ": weight must be positive, got '" + field + "'");
    return w;
}

bool skippable(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true; // blank
}

} // namespace

std::vector<EdgeRecord> read_edge_list(std::istream& in, const std::string& name) {
    std::vector<EdgeRecord> records;
    std::string line;
    std::size_t lineno = 0;
    char delim = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        if (delim == 0) delim = detect_delimiter(line);
        auto fields = split_fields(line, delim);
        if (fields.size() < 2 || fields.size() > 3)
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected 2 or 3 columns, got " +
                             std::to_string(fields.size()));
        if (fields[0].empty() || fields[1].empty())
            throw ParseError(name + ":" + std::to_string(lineno) + ": empty endpoint label");
        EdgeRecord r{fields[0], fields[1], 1.0};
        if (fields.size() == 3) r.weight = parse_weight(fields[2], name, lineno);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<EdgeRecord> read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open edge list: " + path);
    return read_edge_list(in, path);
}

std::vector<std::pair<std::string, NodeMeta>> read_node_meta(std::istream& in, const std::string& name) {
    std::vector<std::pair<std::string, NodeMeta>> rows;
    std::string line;
    std::size_t lineno = 0;
    char delim = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        if (delim == 0) delim = detect_delimiter(line);
        auto fields = split_fields(line, delim);
        if (fields.size() != 3)
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected 3 columns, got " +
                             std::to_string(fields.size()));
        if (fields[0].empty())
            throw ParseError(name + ":" + std::to_string(lineno) + ": empty node label");
        NodeMeta m;
        try {
            m.status = parse_status(fields[1]);
            m.platform = parse_platform(fields[2]);
        } catch (const ParseError& e) {
            throw ParseError(name + ":" + std::to_string(lineno) + ": " + e.what());
        }
        rows.emplace_back(fields[0], m);
    }
    return rows;
}

std::vector<std::pair<std::string, NodeMeta>> read_node_meta_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open metadata file: " + path);
    return read_node_meta(in, path);
}

std::string format_weight(double w) {
    if (w == std::floor(w) && std::abs(w) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", w);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    return buf;
}

void write_edge_list(std::ostream& out, const InstanceGraph& g) {
    g.for_each_edge([&](NodeId s, NodeId t, double w) {
        out << g.label(s) << '\t' << g.label(t) << '\t' << format_weight(w) << '\n';
    });
}

void write_edge_list_file(const std::string& path, const InstanceGraph& g) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write edge list: " + path);
    write_edge_list(out, g);
}

void write_node_meta(std::ostream& out, const InstanceGraph& g) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const NodeMeta& m = g.meta(v);
        out << g.label(v) << '\t' << to_string(m.status) << '\t' << to_string(m.platform) << '\n';
    }
}

void write_node_meta_file(const std::string& path, const InstanceGraph& g) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write metadata file: " + path);
    write_node_meta(out, g);
}

InstanceGraph build_graph(const std::vector<EdgeRecord>& edges,
                          const std::vector<std::pair<std::string, NodeMeta>>& meta) {
    GraphBuilder b;
    for (const EdgeRecord& e : edges) b.add_edge(e.source, e.target, e.weight);
    for (const auto& [label, m] : meta) b.set_meta(label, m);
    return b.build();
}

} // namespace instanet
