#include "ecvc/solve_io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace ecvc {

SolveBatch read_constraints_text(std::istream& in, const Multigraph& g) {
  SolveBatch batch;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag != "C")
      fail(Errc::ParseError,
           "constraints line " + std::to_string(lineno) + ": unknown record `" + tag + "`");
    long k;
    std::string edge, c1, c2;
    if (!(ls >> k >> edge >> c1 >> c2) || k < 1)
      fail(Errc::ParseError, "constraints line " + std::to_string(lineno) +
                                 ": expected `C <k> <edge> <color> <color>`");
    auto it = g.edge_index.find(edge);
    if (it == g.edge_index.end())
      fail(Errc::ParseError, "constraints line " + std::to_string(lineno) +
                                 ": unknown edge label `" + edge + "`");
    if (static_cast<size_t>(k) > batch.lists.size())
      batch.lists.resize(k, ConstraintList(g.n_edges()));
    ColorPair& slot = batch.lists[k - 1][it->second];
    if (slot.valid())
      fail(Errc::ParseError, "constraints line " + std::to_string(lineno) +
                                 ": duplicate constraint for edge `" + edge + "`");
    slot = ColorPair::of(batch.colors.intern(c1), batch.colors.intern(c2));
  }
  if (batch.lists.empty()) fail(Errc::ParseError, "constraints file holds no `C` records");
  for (size_t k = 0; k < batch.lists.size(); ++k)
    for (int e = 0; e < g.n_edges(); ++e)
      if (!batch.lists[k][e].valid())
        fail(Errc::MissingConstraint, "problem " + std::to_string(k + 1) +
                                          ": no constraint for edge " + g.edge_labels[e]);
  return batch;
}

void write_solutions_text(std::ostream& out, const ForestPlan& plan,
                          const std::vector<ConstraintList>& lists,
                          const std::vector<SolutionSet>& sets,
                          const std::vector<std::string>& color_names, uint64_t max_print) {
  const Multigraph& g = plan.graph;
  for (size_t k = 0; k < sets.size(); ++k) {
    const SolutionSet& s = sets[k];
    if (!s.has_solution()) {
      out << "S " << k + 1 << " 0";
      for (const DiagnosticTag& t : diagnose(plan, lists[k], s))
        out << " " << tag_to_string(g, t);
      out << "\n";
      continue;
    }
    out << "S " << k + 1 << " " << solution_count_decimal(s) << "\n";
    int d = s.d();
    uint64_t to_print = d >= 64 ? max_print : std::min(uint64_t{1} << d, max_print);
    for (uint64_t idx = 0; idx < to_print; ++idx) {
      std::vector<Color> phi = enumerate_solution(plan, s, idx);
      for (int v = 0; v < g.n_vertices(); ++v)
        out << "V " << k + 1 << " " << idx << " " << g.vertex_labels[v] << " "
            << color_names[phi[v]] << "\n";
    }
  }
}

} // namespace ecvc
