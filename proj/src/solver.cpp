#include "ecvc/solver.hpp"

#include <algorithm>
#include <cassert>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ecvc {

void ColorSet::intersect(ColorPair p) {
  Color pa = p.lo, pb = p.hi;
  if (n < 0) {
    a = pa;
    b = p.hom() ? kNoColor : pb;
    n = p.hom() ? 1 : 2;
    return;
  }
  if (n == 2) {
    bool keep_a = p.contains(a), keep_b = p.contains(b);
    if (keep_a && keep_b) return;
    if (keep_a) { n = 1; b = kNoColor; return; }
    if (keep_b) { n = 1; a = b; b = kNoColor; return; }
    n = 0; a = b = kNoColor;
    return;
  }
  if (n == 1 && !p.contains(a)) { n = 0; a = kNoColor; }
}

void validate_total(const Multigraph& g, const ConstraintList& l) {
  if (static_cast<int>(l.size()) != g.n_edges())
    fail(Errc::MissingConstraint, "constraint list covers " + std::to_string(l.size()) +
                                      " of " + std::to_string(g.n_edges()) + " edges");
  for (int e = 0; e < g.n_edges(); ++e)
    if (!l[e].valid())
      fail(Errc::MissingConstraint, "no constraint for edge " + g.edge_labels[e]);
}

std::vector<ColorSet> intersections(const Multigraph& g, const ConstraintList& l) {
  validate_total(g, l);
  std::vector<ColorSet> isect(g.n_vertices());
  for (int e = 0; e < g.n_edges(); ++e) {
    auto [u, w] = g.ends[e];
    isect[u].intersect(l[e]);
    if (w != u) isect[w].intersect(l[e]);
  }
  return isect;
}

PathColoring extend_along_path(const PathSeq& path, const ConstraintList& l, Color seed) {
  PathColoring out;
  out.colors.assign(path.vertices.size(), kNoColor);
  if (!path.edges.empty() && !l[path.edges[0]].contains(seed))
    fail(Errc::ColorNotInIntersection, "seed color not in the first edge's support");
  out.colors[0] = seed;
  const int len = path.length();
  for (int i = 0; i < len; ++i) {
    Color next = l[path.edges[i]].other(out.colors[i]);
    if (next == kNoColor) {
      out.fail_index = i;
      return out;
    }
    out.colors[i + 1] = next;
    if (i < len - 1 && !l[path.edges[i + 1]].contains(next)) {
      out.fail_index = i;
      return out;
    }
  }
  out.ok = true;
  return out;
}

namespace {

struct Scratch {
  std::vector<ColorSet> isect;
  std::vector<Color> phi1;
  std::vector<Color> phi2;

  void ensure(int nv) {
    if (static_cast<int>(phi1.size()) < nv) {
      isect.resize(nv);
      phi1.resize(nv);
      phi2.resize(nv);
    }
  }
};

ComponentOutcome none_outcome(NoneReason reason, int vertex, int edge) {
  ComponentOutcome out;
  out.kind = OutcomeKind::None;
  out.reason = reason;
  out.reason_vertex = vertex;
  out.reason_edge = edge;
  return out;
}

// First violated non-tree edge for a candidate coloring, or -1.
int check_non_tree(const ForestPlan& plan, const ComponentPlan& c, const ConstraintList& l,
                   const std::vector<Color>& phi) {
  for (int e : c.non_tree_edges) {
    auto [u, w] = plan.graph.ends[e];
    if (u == w) {
      if (!(l[e].hom() && l[e].lo == phi[u])) return e;
    } else if (ColorPair::of(phi[u], phi[w]) != l[e]) {
      return e;
    }
  }
  return -1;
}

ComponentOutcome pack(const ComponentPlan& c, OutcomeKind kind, const std::vector<Color>& phi1,
                      const std::vector<Color>& phi2) {
  ComponentOutcome out;
  out.kind = kind;
  out.a.reserve(c.vertices.size());
  for (int v : c.vertices) out.a.push_back(phi1[v]);
  if (kind == OutcomeKind::Two) {
    out.b.reserve(c.vertices.size());
    for (int v : c.vertices) out.b.push_back(phi2[v]);
  }
  return out;
}

ComponentOutcome solve_single_vertex(const ComponentPlan& c, const ConstraintList& l) {
  // Every edge is a loop; solvable iff all constraints are the same
  // single repeated color.
  int v = c.vertices[0];
  Color color = kNoColor;
  for (int e : c.edges) {
    if (!l[e].hom()) return none_outcome(NoneReason::LoopHeterozygous, v, e);
    if (color == kNoColor) color = l[e].lo;
    else if (color != l[e].lo) return none_outcome(NoneReason::EmptyIntersection, v, e);
  }
  ComponentOutcome out;
  out.kind = OutcomeKind::Unique;
  out.a.push_back(color);
  return out;
}

// Tree-only solve of a |V'| > 1 component; candidate colorings are written
// into scratch (phi1, and phi2 for the Two case) indexed by global vertex id.
ComponentOutcome solve_tree_impl(const ForestPlan& plan, const ComponentPlan& c,
                                 const ConstraintList& l, Scratch& ws) {
  const Multigraph& g = plan.graph;
  ws.ensure(g.n_vertices());

  for (int v : c.vertices) ws.isect[v] = ColorSet{};
  for (int e : c.tree_edges) {
    auto [u, w] = g.ends[e];
    ws.isect[u].intersect(l[e]);
    ws.isect[w].intersect(l[e]);
  }

  int seed_vertex = -1;
  for (int v : c.vertices) { // ascending, so ties break to the smallest id
    int sz = ws.isect[v].size();
    if (sz == 0) return none_outcome(NoneReason::EmptyIntersection, v, -1);
    if (sz == 1 && seed_vertex == -1) seed_vertex = v;
  }

  if (seed_vertex >= 0) {
    for (int v : c.vertices) ws.phi1[v] = kNoColor;
    ws.phi1[seed_vertex] = ws.isect[seed_vertex].a;
    // Climb to the root first.
    for (int cur = seed_vertex; cur != c.root;) {
      int e = plan.parent_edge[cur];
      Color next = l[e].other(ws.phi1[cur]);
      if (next == kNoColor) return none_outcome(NoneReason::PathContradiction, cur, e);
      cur = plan.parent_vertex[cur];
      ws.phi1[cur] = next;
    }
    if (!ws.isect[c.root].contains(ws.phi1[c.root]))
      return none_outcome(NoneReason::RootNotInIntersection, c.root, -1);
    // Then extend along every root-to-leaf path, skipping colored prefixes.
    for (const PathSeq& p : c.paths) {
      for (int i = 0; i < p.length(); ++i) {
        int vn = p.vertices[i + 1];
        if (ws.phi1[vn] != kNoColor) continue;
        Color next = l[p.edges[i]].other(ws.phi1[p.vertices[i]]);
        if (next == kNoColor)
          return none_outcome(NoneReason::PathContradiction, p.vertices[i], p.edges[i]);
        ws.phi1[vn] = next;
      }
    }
    // Cheap final pass: every tree edge must be satisfied outright.
    for (int e : c.tree_edges) {
      auto [u, w] = g.ends[e];
      if (ColorPair::of(ws.phi1[u], ws.phi1[w]) != l[e])
        return none_outcome(NoneReason::PathContradiction, u, e);
    }
    return pack(c, OutcomeKind::Unique, ws.phi1, ws.phi1);
  }

  // All intersections have two colors: the constraints are one constant
  // heterozygous pair and the solutions are the two proper 2-colorings.
  Color c1 = ws.isect[c.root].a, c2 = ws.isect[c.root].b;
  if (c1 > c2) std::swap(c1, c2);
  for (int v : c.vertices) ws.phi1[v] = kNoColor;
  ws.phi1[c.root] = c1;
  ws.phi2[c.root] = c2;
  for (const PathSeq& p : c.paths) {
    for (int i = 0; i < p.length(); ++i) {
      int vn = p.vertices[i + 1];
      if (ws.phi1[vn] != kNoColor) continue;
      Color n1 = l[p.edges[i]].other(ws.phi1[p.vertices[i]]);
      Color n2 = l[p.edges[i]].other(ws.phi2[p.vertices[i]]);
      if (n1 == kNoColor || n2 == kNoColor)
        throw std::logic_error("two-colorable tree extension failed"); // unreachable
      ws.phi1[vn] = n1;
      ws.phi2[vn] = n2;
    }
  }
  return pack(c, OutcomeKind::Two, ws.phi1, ws.phi2);
}

ComponentOutcome solve_component_impl(const ForestPlan& plan, int ci, const ConstraintList& l,
                                      Scratch& ws) {
  const ComponentPlan& c = plan.comps[ci];
  if (c.vertices.size() == 1) return solve_single_vertex(c, l);

  ComponentOutcome tree = solve_tree_impl(plan, c, l, ws);
  if (tree.kind == OutcomeKind::None) return tree;

  auto reject_reason = [&](int e) {
    bool het_loop = plan.graph.is_loop(e) && !l[e].hom();
    return none_outcome(het_loop ? NoneReason::LoopHeterozygous : NoneReason::NonTreeEdgeViolation,
                        -1, e);
  };

  if (tree.kind == OutcomeKind::Unique) {
    int e = check_non_tree(plan, c, l, ws.phi1);
    if (e >= 0) return reject_reason(e);
    return tree;
  }

  // Two tree candidates; non-tree edges may reject one or both.
  int e1 = check_non_tree(plan, c, l, ws.phi1);
  int e2 = check_non_tree(plan, c, l, ws.phi2);
  if (e1 < 0 && e2 < 0) return tree;
  if (e1 >= 0 && e2 >= 0) return reject_reason(e1);
  ComponentOutcome out;
  out.kind = OutcomeKind::Unique;
  out.a = e1 < 0 ? std::move(tree.a) : std::move(tree.b);
  return out;
}

SolutionSet solve_one_impl(const ForestPlan& plan, const ConstraintList& l, Scratch& ws,
                           bool existence_only) {
  SolutionSet s;
  s.comps.reserve(plan.comps.size());
  for (int ci = 0; ci < static_cast<int>(plan.comps.size()); ++ci) {
    s.comps.push_back(solve_component_impl(plan, ci, l, ws));
    if (existence_only && s.comps.back().kind == OutcomeKind::None) break;
  }
  return s;
}

} // namespace

ComponentOutcome solve_tree(const ForestPlan& plan, int comp, const ConstraintList& l) {
  const ComponentPlan& c = plan.comps.at(comp);
  if (c.vertices.size() == 1)
    fail(Errc::InvalidArgument, "solve_tree requires a component with more than one vertex");
  Scratch ws;
  return solve_tree_impl(plan, c, l, ws);
}

ComponentOutcome solve_component(const ForestPlan& plan, int comp, const ConstraintList& l) {
  Scratch ws;
  return solve_component_impl(plan, comp, l, ws);
}

SolutionSet solve_one(const ForestPlan& plan, const ConstraintList& l) {
  validate_total(plan.graph, l);
  Scratch ws;
  return solve_one_impl(plan, l, ws, false);
}

std::vector<SolutionSet> solve_many(const ForestPlan& plan,
                                    const std::vector<ConstraintList>& lists, SolveOptions opts) {
  for (const auto& l : lists) validate_total(plan.graph, l);
  std::vector<SolutionSet> out(lists.size());
  const int n = static_cast<int>(lists.size());
  int threads = std::max(1, opts.threads);
  threads = std::min(threads, n > 0 ? n : 1);

  if (threads == 1) {
    Scratch ws;
    for (int k = 0; k < n; ++k) out[k] = solve_one_impl(plan, lists[k], ws, opts.existence_only);
    return out;
  }

  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    int lo = static_cast<int>(static_cast<int64_t>(n) * t / threads);
    int hi = static_cast<int>(static_cast<int64_t>(n) * (t + 1) / threads);
    pool.emplace_back([&, lo, hi] {
      try {
        Scratch ws;
        for (int k = lo; k < hi; ++k)
          out[k] = solve_one_impl(plan, lists[k], ws, opts.existence_only);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

std::vector<Color> enumerate_solution(const ForestPlan& plan, const SolutionSet& s,
                                      uint64_t index) {
  if (!s.has_solution() || s.comps.size() != plan.comps.size())
    fail(Errc::NoGlobalSolution, "no global solution to enumerate");
  int d = s.d();
  if (d < 64 && index >= (uint64_t{1} << d))
    fail(Errc::IndexOutOfRange, "solution index " + std::to_string(index) + " out of range");
  std::vector<Color> phi(plan.graph.n_vertices(), kNoColor);
  int bit = 0;
  for (size_t ci = 0; ci < s.comps.size(); ++ci) {
    const ComponentOutcome& o = s.comps[ci];
    const std::vector<Color>* pick = &o.a;
    if (o.kind == OutcomeKind::Two) {
      if ((index >> bit) & 1) pick = &o.b;
      ++bit;
    }
    const auto& verts = plan.comps[ci].vertices;
    for (size_t i = 0; i < verts.size(); ++i) phi[verts[i]] = (*pick)[i];
  }
  return phi;
}

int count_d(const ForestPlan& plan, const ConstraintList& l) {
  int d = 0;
  for (const ComponentPlan& c : plan.comps) {
    if (!is_bipartite_loop_free(c)) continue;
    ColorPair first = l[c.edges[0]];
    if (first.hom()) continue;
    bool constant = true;
    for (int e : c.edges)
      if (l[e] != first) { constant = false; break; }
    d += constant;
  }
  return d;
}

std::string solution_count_decimal(const SolutionSet& s) {
  if (!s.has_solution()) return "0";
  std::string digits = "1"; // little-endian decimal
  for (int i = 0; i < s.d(); ++i) {
    int carry = 0;
    for (char& ch : digits) {
      int v = (ch - '0') * 2 + carry;
      ch = static_cast<char>('0' + v % 10);
      carry = v / 10;
    }
    if (carry) digits.push_back(static_cast<char>('0' + carry));
  }
  return {digits.rbegin(), digits.rend()};
}

std::vector<DiagnosticTag> diagnose(const ForestPlan& plan, const ConstraintList& l,
                                    const SolutionSet& s) {
  std::vector<DiagnosticTag> tags;
  for (size_t ci = 0; ci < s.comps.size(); ++ci) {
    const ComponentOutcome& o = s.comps[ci];
    if (o.kind != OutcomeKind::None) continue;
    DiagnosticTag t;
    t.component = static_cast<int>(ci);
    t.vertex = o.reason_vertex;
    t.edge = o.reason_edge;
    switch (o.reason) {
      case NoneReason::EmptyIntersection: t.kind = TagKind::EmptyIntersection; break;
      case NoneReason::PathContradiction: t.kind = TagKind::PathContradiction; break;
      case NoneReason::RootNotInIntersection: t.kind = TagKind::RootNotInIntersection; break;
      case NoneReason::NonTreeEdgeViolation: t.kind = TagKind::NonTreeEdgeViolation; break;
      case NoneReason::LoopHeterozygous: t.kind = TagKind::LoopHeterozygous; break;
      case NoneReason::NotNone: continue;
    }
    tags.push_back(t);

    // A rejected non-tree edge that closes an odd cycle under one constant
    // two-color constraint is the classic unsolvable pattern; tag it too.
    if (t.kind == TagKind::NonTreeEdgeViolation && t.edge >= 0) {
      const ComponentPlan& c = plan.comps[ci];
      auto [u, w] = plan.graph.ends[t.edge];
      bool odd = u != w && (plan.depth[u] & 1) == (plan.depth[w] & 1);
      if (odd && !l[t.edge].hom()) {
        bool constant = true;
        for (int e : c.edges)
          if (l[e] != l[t.edge]) { constant = false; break; }
        if (constant)
          tags.push_back({TagKind::OddCycleTwoColor, static_cast<int>(ci), -1, t.edge});
      }
    }

    // A heterozygous loop can never be satisfied; name every one in the
    // component, whichever check tripped first.
    for (int e : plan.comps[ci].edges)
      if (plan.graph.is_loop(e) && !l[e].hom() && e != t.edge)
        tags.push_back({TagKind::LoopHeterozygous, static_cast<int>(ci), -1, e});
  }
  return tags;
}

std::string tag_to_string(const Multigraph& g, const DiagnosticTag& t) {
  auto vertex = [&](int v) { return v >= 0 ? g.vertex_labels[v] : std::string("?"); };
  auto edge = [&](int e) { return e >= 0 ? g.edge_labels[e] : std::string("?"); };
  switch (t.kind) {
    case TagKind::EmptyIntersection: return "EmptyIntersection(" + vertex(t.vertex) + ")";
    case TagKind::PathContradiction: return "PathContradiction(" + edge(t.edge) + ")";
    case TagKind::RootNotInIntersection: return "RootNotInIntersection(" + vertex(t.vertex) + ")";
    case TagKind::NonTreeEdgeViolation: return "NonTreeEdgeViolation(" + edge(t.edge) + ")";
    case TagKind::OddCycleTwoColor: return "OddCycleTwoColor(" + edge(t.edge) + ")";
    case TagKind::LoopHeterozygous: return "LoopHeterozygous(" + edge(t.edge) + ")";
  }
  return "?";
}

} // namespace ecvc
