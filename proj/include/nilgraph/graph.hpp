#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nilgraph {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Directed edge between 0-based vertex indices. The edge label is its position
/// in the edge list (label k+1 for position k).
struct Edge {
  int source = 0;
  int target = 0;
  bool operator==(const Edge&) const = default;
};

/// Simple directed graph with at least one edge. Immutable after construction.
class DirectedGraph {
 public:
  DirectedGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Index of the edge joining a and b in either direction.
  std::optional<int> edge_between(int a, int b) const;

  /// Same graph with every edge reversed (labels kept).
  DirectedGraph reversed() const;
  /// Vertex i becomes perm[i]; edge order is kept.
  DirectedGraph relabeled(const std::vector<int>& perm) const;

  /// Text in the graph file format; parse_graph(serialize()) reproduces the graph.
  std::string serialize() const;

  bool operator==(const DirectedGraph&) const = default;

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
};

/// Parses `vertices <n>` followed by `edge <i> <j>` lines (1-based, `#` comments).
DirectedGraph parse_graph(std::string_view text);

/// Named families: K (complete), S (star S_k on k+1 vertices), P (path), C (cycle),
/// G1 and G2 (the two proper subgraphs of K4 from erasing one or two edges).
DirectedGraph generate_named(std::string_view name, int n);

/// Accepts "K3", "S4", "P4", "C4", "G1", "G2".
DirectedGraph generate_named(std::string_view spec);

/// Structural lookup among named graphs with at most 8 vertices.
std::optional<std::string> recognize_named(const DirectedGraph& g);

std::vector<std::vector<int>> connected_components(const DirectedGraph& g);

/// Isomorphism of the underlying undirected graphs, brute force over vertex
/// permutations. Both graphs must have at most 8 vertices.
bool isomorphic(const DirectedGraph& a, const DirectedGraph& b);

DirectedGraph disjoint_union(const DirectedGraph& a, const DirectedGraph& b);

}  // namespace nilgraph
