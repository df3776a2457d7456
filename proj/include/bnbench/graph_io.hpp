#ifndef BNBENCH_GRAPH_IO_HPP
#define BNBENCH_GRAPH_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bnbench/graph.hpp"

namespace bnbench {

// Line-oriented text format:
//
//   Graph Nodes:
//   A;B;C
//   Graph Edges:
//   1. A --> B
//   2. B o-o C
//
// Edge tokens are three characters: left mark in {<, o, -}, '-', right mark
// in {>, o, -}.

void write_graph(std::ostream& out, const MixedGraph& g);
std::string graph_to_string(const MixedGraph& g);
void save_graph(const std::filesystem::path& path, const MixedGraph& g);

/// Reads a graph section; stops at EOF or at the first line that is neither
/// blank nor a numbered edge once edges have started. Throws GraphError.
MixedGraph read_graph(std::istream& in);
MixedGraph graph_from_string(const std::string& text);
MixedGraph load_graph(const std::filesystem::path& path);

std::string edge_token(Mark at_left, Mark at_right);

}  // namespace bnbench

#endif  // BNBENCH_GRAPH_IO_HPP
