#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "ecvc/solver.hpp"

namespace ecvc {

struct ColorInterner {
  std::vector<std::string> names;
  std::unordered_map<std::string, Color> index;

  Color intern(const std::string& name) {
    auto [it, fresh] = index.emplace(name, static_cast<Color>(names.size()));
    if (fresh) names.push_back(name);
    return it->second;
  }
};

/// A batch of constraint lists parsed from `C <k> <edge> <c1> <c2>` records,
/// k = 1..n contiguous.
struct SolveBatch {
  std::vector<ConstraintList> lists;
  ColorInterner colors;
};

SolveBatch read_constraints_text(std::istream& in, const Multigraph& g);

/// `S <k> <count>` per problem, followed by `V <k> <index> <vertex> <color>`
/// rows for each enumerated solution (up to max_print solutions per problem),
/// or diagnostic tags appended to the S record when there is none.
void write_solutions_text(std::ostream& out, const ForestPlan& plan,
                          const std::vector<ConstraintList>& lists,
                          const std::vector<SolutionSet>& sets,
                          const std::vector<std::string>& color_names,
                          uint64_t max_print = 64);

} // namespace ecvc
