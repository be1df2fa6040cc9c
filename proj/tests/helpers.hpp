#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "ecvc/graph.hpp"
#include "ecvc/solve_io.hpp"
#include "ecvc/solver.hpp"

namespace ecvc::test {

struct Problem {
  Multigraph g;
  ForestPlan plan;
  ConstraintList l;
  ColorInterner colors;

  Color c(const std::string& name) { return colors.intern(name); }
  int v(const std::string& label) const { return plan.graph.vertex(label); }
  int e(const std::string& label) const { return plan.graph.edge(label); }
};

struct EdgeDef {
  std::string label, a, b, c1, c2;
};

inline Problem make_problem(const std::vector<std::string>& vertices,
                            const std::vector<EdgeDef>& edges) {
  Problem p;
  std::vector<Multigraph::EdgeSpec> specs;
  for (const auto& e : edges) specs.emplace_back(e.label, e.a, e.b);
  p.g = Multigraph::build(vertices, specs);
  for (const auto& e : edges)
    p.l.push_back(ColorPair::of(p.colors.intern(e.c1), p.colors.intern(e.c2)));
  p.plan = ForestPlan::build(p.g);
  return p;
}

// The running examples: simple paths with three edges.
inline Problem fig_path(const std::string& c01a, const std::string& c01b, const std::string& c12a,
                        const std::string& c12b, const std::string& c23a,
                        const std::string& c23b) {
  return make_problem({"v0", "v1", "v2", "v3"}, {{"e0", "v0", "v1", c01a, c01b},
                                                 {"e1", "v1", "v2", c12a, c12b},
                                                 {"e2", "v2", "v3", c23a, c23b}});
}

inline std::vector<Color> coloring_of(Problem& p, const std::vector<std::string>& names) {
  std::vector<Color> out;
  for (const auto& n : names) out.push_back(p.c(n));
  return out;
}

} // namespace ecvc::test
