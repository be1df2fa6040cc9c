#include "ecvc/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace ecvc {

int Multigraph::degree(int v) const {
  int d = 0;
  for (int e : inc[v]) d += is_loop(e) ? 2 : 1;
  return d;
}

int Multigraph::vertex(const std::string& label) const {
  auto it = vertex_index.find(label);
  if (it == vertex_index.end()) fail(Errc::UnknownVertexLabel, "unknown vertex label: " + label);
  return it->second;
}

int Multigraph::edge(const std::string& label) const {
  auto it = edge_index.find(label);
  if (it == edge_index.end()) fail(Errc::InvalidArgument, "unknown edge label: " + label);
  return it->second;
}

Multigraph Multigraph::build(const std::vector<std::string>& vertices,
                             const std::vector<EdgeSpec>& edges) {
  Multigraph g;
  g.vertex_labels.reserve(vertices.size());
  for (const auto& label : vertices) {
    if (!g.vertex_index.emplace(label, g.n_vertices()).second)
      fail(Errc::DuplicateVertexLabel, "duplicate vertex label: " + label);
    g.vertex_labels.push_back(label);
  }
  g.inc.resize(g.n_vertices());
  for (const auto& [label, va, vb] : edges) {
    if (!g.edge_index.emplace(label, g.n_edges()).second)
      fail(Errc::DuplicateEdgeLabel, "duplicate edge label: " + label);
    int a = g.vertex(va);
    int b = g.vertex(vb);
    int e = g.n_edges();
    g.edge_labels.push_back(label);
    g.ends.emplace_back(a, b);
    g.inc[a].push_back(e);
    if (b != a) g.inc[b].push_back(e);
  }
  for (int v = 0; v < g.n_vertices(); ++v)
    if (g.inc[v].empty())
      fail(Errc::IsolatedVertex, "isolated vertex: " + g.vertex_labels[v]);
  return g;
}

ForestPlan ForestPlan::build(Multigraph g) {
  ForestPlan plan;
  plan.graph = std::move(g);
  const Multigraph& gr = plan.graph;
  const int nv = gr.n_vertices();
  const int ne = gr.n_edges();

  plan.comp_of_vertex.assign(nv, -1);
  plan.comp_of_edge.assign(ne, -1);
  plan.parent_vertex.assign(nv, -1);
  plan.parent_edge.assign(nv, -1);
  plan.depth.assign(nv, 0);

  std::vector<char> edge_seen(ne, 0);
  std::vector<char> has_tree_child(nv, 0);
  std::vector<int> order; // DFS discovery order within the component
  std::vector<std::pair<int, size_t>> stack;

  for (int start = 0; start < nv; ++start) {
    if (plan.comp_of_vertex[start] != -1) continue;
    const int ci = static_cast<int>(plan.comps.size());
    ComponentPlan comp;
    comp.root = start;
    plan.comp_of_vertex[start] = ci;

    // Iterative DFS; incidence lists are explored in insertion order.
    order.clear();
    order.push_back(start);
    stack.assign(1, {start, 0});
    while (!stack.empty()) {
      int v = stack.back().first;
      if (stack.back().second >= gr.inc[v].size()) {
        stack.pop_back();
        continue;
      }
      int e = gr.inc[v][stack.back().second++];
      if (edge_seen[e]) continue;
      edge_seen[e] = 1;
      plan.comp_of_edge[e] = ci;
      int w = gr.other_end(e, v);
      if (plan.comp_of_vertex[w] == -1) {
        plan.comp_of_vertex[w] = ci;
        plan.parent_vertex[w] = v;
        plan.parent_edge[w] = e;
        plan.depth[w] = plan.depth[v] + 1;
        comp.tree_edges.push_back(e);
        order.push_back(w);
        stack.emplace_back(w, 0);
      } else {
        comp.non_tree_edges.push_back(e);
        if (gr.is_loop(e)) {
          comp.loop_free = false;
        } else if ((plan.depth[v] & 1) == (plan.depth[w] & 1)) {
          comp.two_colorable = false; // closes an odd cycle
        }
      }
    }

    comp.vertices = order;
    std::sort(comp.vertices.begin(), comp.vertices.end());
    comp.edges.clear();
    for (int e : comp.tree_edges) comp.edges.push_back(e);
    for (int e : comp.non_tree_edges) comp.edges.push_back(e);
    std::sort(comp.edges.begin(), comp.edges.end());

    // Root-to-leaf paths, leaves in discovery order.
    if (comp.vertices.size() > 1) {
      for (int v : order) has_tree_child[v] = 0;
      for (int v : order)
        if (plan.parent_vertex[v] != -1) has_tree_child[plan.parent_vertex[v]] = 1;
      for (int v : order) {
        if (v == comp.root || has_tree_child[v]) continue;
        PathSeq p;
        int cur = v;
        while (cur != comp.root) {
          p.edges.push_back(plan.parent_edge[cur]);
          p.vertices.push_back(cur);
          cur = plan.parent_vertex[cur];
        }
        p.vertices.push_back(comp.root);
        std::reverse(p.edges.begin(), p.edges.end());
        std::reverse(p.vertices.begin(), p.vertices.end());
        comp.paths.push_back(std::move(p));
      }
    }
    plan.comps.push_back(std::move(comp));
  }

  // Components discovered by ascending start vertex, so they are already
  // ordered by smallest vertex id.
  return plan;
}

PathSeq path_between(const ForestPlan& plan, int v, int w) {
  if (plan.comp_of_vertex.at(v) != plan.comp_of_vertex.at(w))
    fail(Errc::DifferentComponents,
         "no tree path between " + plan.graph.vertex_labels[v] + " and " +
             plan.graph.vertex_labels[w]);
  PathSeq up, down;
  int a = v, b = w;
  while (plan.depth[a] > plan.depth[b]) {
    up.edges.push_back(plan.parent_edge[a]);
    up.vertices.push_back(a);
    a = plan.parent_vertex[a];
  }
  while (plan.depth[b] > plan.depth[a]) {
    down.edges.push_back(plan.parent_edge[b]);
    down.vertices.push_back(b);
    b = plan.parent_vertex[b];
  }
  while (a != b) {
    up.edges.push_back(plan.parent_edge[a]);
    up.vertices.push_back(a);
    a = plan.parent_vertex[a];
    down.edges.push_back(plan.parent_edge[b]);
    down.vertices.push_back(b);
    b = plan.parent_vertex[b];
  }
  PathSeq p = std::move(up);
  p.vertices.push_back(a);
  for (size_t i = down.edges.size(); i-- > 0;) {
    p.edges.push_back(down.edges[i]);
    p.vertices.push_back(down.vertices[i]);
  }
  return p;
}

Multigraph read_graph_text(std::istream& in) {
  std::vector<std::string> vertices;
  std::vector<Multigraph::EdgeSpec> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "V") {
      std::string label;
      if (!(ls >> label))
        fail(Errc::ParseError, "graph line " + std::to_string(lineno) + ": expected `V <label>`");
      vertices.push_back(label);
    } else if (tag == "E") {
      std::string label, a, b;
      if (!(ls >> label >> a >> b))
        fail(Errc::ParseError,
             "graph line " + std::to_string(lineno) + ": expected `E <label> <v> <w>`");
      edges.emplace_back(label, a, b);
    } else {
      fail(Errc::ParseError,
           "graph line " + std::to_string(lineno) + ": unknown record `" + tag + "`");
    }
  }
  try {
    return Multigraph::build(vertices, edges);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("graph file: ") + e.what());
  }
}

void write_graph_text(std::ostream& out, const Multigraph& g) {
  for (const auto& v : g.vertex_labels) out << "V " << v << "\n";
  for (int e = 0; e < g.n_edges(); ++e)
    out << "E " << g.edge_labels[e] << " " << g.vertex_labels[g.ends[e].first] << " "
        << g.vertex_labels[g.ends[e].second] << "\n";
}

} // namespace ecvc
