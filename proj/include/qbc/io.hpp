#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qbc/bigraph.hpp"

namespace qbc {

// One `u <sep> v` pair per line; `#` starts a comment line. The separator is
// detected once per file: tab if any line has one, else comma, else runs of
// spaces. Ids are 0-based integers when every token is an integer, otherwise
// arbitrary strings indexed per side in first-appearance order.
BipartiteGraph load_edge_list(std::istream& in);

// Pajek two-mode network: `*Vertices N M`, vertices 1..M are the first mode
// (U) and M+1..N the second (V). `*Edges`, `*Arcs` and their `list` variants
// are accepted; `%` lines are comments.
BipartiteGraph load_pajek_two_mode(std::istream& in);

enum class GraphFormat { Auto, EdgeList, Pajek };

GraphFormat parse_graph_format(const std::string& name);

// Auto picks Pajek for `.net`/`.paj` files, edge list otherwise.
BipartiteGraph load_graph(const std::filesystem::path& path, GraphFormat format = GraphFormat::Auto);

}  // namespace qbc
