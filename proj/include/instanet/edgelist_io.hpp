#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "instanet/graph.hpp"

namespace instanet {

/// Reads a delimited edge list: columns `source, target[, weight]`, tab or
/// comma auto-detected, `#`-prefixed comment lines and blank lines ignored.
/// Throws ParseError (with line number) on malformed records and
/// ValidationError on non-positive weights.
std::vector<EdgeRecord> read_edge_list(std::istream& in, const std::string& name = "<stream>");
std::vector<EdgeRecord> read_edge_list_file(const std::string& path);

/// Node metadata rows: `label, status, platform`.
std::vector<std::pair<std::string, NodeMeta>> read_node_meta(std::istream& in,
                                                             const std::string& name = "<stream>");
std::vector<std::pair<std::string, NodeMeta>> read_node_meta_file(const std::string& path);

/// Canonical tab-separated edge list (weights printed as integers when they
/// are integral). Deterministic byte output for a given graph.
void write_edge_list(std::ostream& out, const InstanceGraph& g);
void write_edge_list_file(const std::string& path, const InstanceGraph& g);

void write_node_meta(std::ostream& out, const InstanceGraph& g);
void write_node_meta_file(const std::string& path, const InstanceGraph& g);

/// Build a graph straight from records + optional metadata table. Metadata
/// labels absent from the edge records declare isolated nodes.
InstanceGraph build_graph(const std::vector<EdgeRecord>& edges,
                          const std::vector<std::pair<std::string, NodeMeta>>& meta = {});

/// Formats a weight the way write_edge_list does ("3" not "3.000000").
std::string format_weight(double w);

} // namespace instanet
