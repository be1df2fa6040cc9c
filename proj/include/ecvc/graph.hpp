#pragma once

#include <iosfwd>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ecvc/error.hpp"

namespace ecvc {

/// Finite multigraph with loops and parallel edges. Vertices and edges carry
/// stable string labels and dense integer indices. Isolated vertices are
/// rejected at construction. Immutable once built.
struct Multigraph {
  std::vector<std::string> vertex_labels;
  std::vector<std::string> edge_labels;
  std::vector<std::pair<int, int>> ends;   // endpoints per edge, as given
  std::vector<std::vector<int>> inc;       // per vertex: incident edge ids, insertion order; a loop appears once
  std::unordered_map<std::string, int> vertex_index;
  std::unordered_map<std::string, int> edge_index;

  int n_vertices() const { return static_cast<int>(vertex_labels.size()); }
  int n_edges() const { return static_cast<int>(edge_labels.size()); }
  bool is_loop(int e) const { return ends[e].first == ends[e].second; }
  int other_end(int e, int v) const {
    return ends[e].first == v ? ends[e].second : ends[e].first;
  }
  // loops count twice
  int degree(int v) const;

  int vertex(const std::string& label) const;
  int edge(const std::string& label) const;

  using EdgeSpec = std::tuple<std::string, std::string, std::string>; // label, v, w
  static Multigraph build(const std::vector<std::string>& vertices,
                          const std::vector<EdgeSpec>& edges);
};

/// Simple path inside a spanning tree: vertices.size() == edges.size() + 1.
struct PathSeq {
  std::vector<int> edges;
  std::vector<int> vertices;
  int length() const { return static_cast<int>(edges.size()); }
};

struct ComponentPlan {
  std::vector<int> vertices;        // ascending vertex ids
  std::vector<int> edges;           // ascending edge ids
  int root = -1;                    // smallest vertex id in the component
  std::vector<int> tree_edges;      // DFS discovery order
  std::vector<int> non_tree_edges;  // loops, parallel surplus, cycle-closing edges
  std::vector<PathSeq> paths;       // root-to-leaf paths, leaf discovery order
  bool loop_free = true;
  bool two_colorable = true;        // proper 2-coloring exists, loops ignored
};

/// Spanning forest of a multigraph plus everything a batch solve reuses
/// across constraint lists: component membership, parent links, root-to-leaf
/// paths and the non-tree edge lists. Owns a copy of the graph.
struct ForestPlan {
  Multigraph graph;
  std::vector<ComponentPlan> comps;
  std::vector<int> comp_of_vertex;
  std::vector<int> comp_of_edge;
  std::vector<int> parent_vertex;   // -1 at component roots
  std::vector<int> parent_edge;
  std::vector<int> depth;

  static ForestPlan build(Multigraph g);
};

inline int first_betti(const ComponentPlan& c) {
  return static_cast<int>(c.edges.size()) - static_cast<int>(c.vertices.size()) + 1;
}

inline bool is_bipartite_loop_free(const ComponentPlan& c) {
  return c.loop_free && c.two_colorable;
}

/// Tree path between two vertices of the same component (via their lowest
/// common ancestor). v == w yields a zero-edge path.
PathSeq path_between(const ForestPlan& plan, int v, int w);

/// Line-oriented text format: `V <label>` and `E <label> <v> <w>` records,
/// `#` comments.
Multigraph read_graph_text(std::istream& in);
void write_graph_text(std::ostream& out, const Multigraph& g);

} // namespace ecvc
