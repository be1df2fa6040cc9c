#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "ecvc/solver.hpp"

namespace ecvc {
namespace oracle {

/// All solutions by exhaustive enumeration of colors^V. Deliberately shares
/// no solving logic with the batch solver; keep it simple enough to be
/// obviously correct.
std::set<std::vector<Color>> brute_force(const Multigraph& g, const ConstraintList& l,
                                         const std::vector<Color>& colors,
                                         uint64_t max_assignments = 10'000'000);

struct InstanceBounds {
  int max_vertices = 6;
  int max_edges = 8;
  int max_colors = 3;
  double loop_prob = 0.15;
  double parallel_prob = 0.25;
};

struct RandomInstance {
  Multigraph graph;
  ConstraintList constraints;
  std::vector<Color> colors;
};

/// Reproducible random multigraph (no isolated vertices; loops and parallel
/// edges included) with a random constraint list.
RandomInstance random_instance(uint64_t seed, const InstanceBounds& bounds = {});

} // namespace oracle
} // namespace ecvc
