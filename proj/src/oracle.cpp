#include "ecvc/oracle.hpp"

#include <cmath>
#include <random>
#include <string>

namespace ecvc {
namespace oracle {

std::set<std::vector<Color>> brute_force(const Multigraph& g, const ConstraintList& l,
                                         const std::vector<Color>& colors,
                                         uint64_t max_assignments) {
  validate_total(g, l);
  const int nv = g.n_vertices();
  const uint64_t nc = colors.size();
  double total = std::pow(static_cast<double>(nc), nv);
  if (total > static_cast<double>(max_assignments))
    fail(Errc::InstanceTooLarge, "brute force would enumerate " + std::to_string(total) +
                                     " assignments (cap " + std::to_string(max_assignments) + ")");

  std::set<std::vector<Color>> solutions;
  if (nc == 0) return solutions;
  std::vector<int> digit(nv, 0);
  std::vector<Color> phi(nv);
  while (true) {
    for (int v = 0; v < nv; ++v) phi[v] = colors[digit[v]];
    bool good = true;
    for (int e = 0; e < g.n_edges() && good; ++e) {
      auto [u, w] = g.ends[e];
      Color x = phi[u], y = phi[w];
      if (x > y) std::swap(x, y);
      good = x == l[e].lo && y == l[e].hi;
    }
    if (good) solutions.insert(phi);
    int pos = 0;
    while (pos < nv && ++digit[pos] == static_cast<int>(nc)) digit[pos++] = 0;
    if (pos == nv) break;
  }
  return solutions;
}

RandomInstance random_instance(uint64_t seed, const InstanceBounds& bounds) {
  std::mt19937_64 rng(seed);
  auto rand_int = [&](int lo, int hi) { // inclusive
    return static_cast<int>(std::uniform_int_distribution<int>(lo, hi)(rng));
  };
  auto rand_real = [&] { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); };

  const int nv = rand_int(1, bounds.max_vertices);
  const int blocks = nv >= 2 ? rand_int(1, 2) : 1;
  const int nc = rand_int(1, bounds.max_colors);

  // Block boundaries: each block is built connected, so no vertex is isolated.
  int split = blocks == 2 ? rand_int(1, nv - 1) : nv;
  std::vector<std::string> vertices;
  for (int v = 0; v < nv; ++v) vertices.push_back("v" + std::to_string(v));

  std::vector<Multigraph::EdgeSpec> edges;
  auto add_edge = [&](int a, int b) {
    edges.emplace_back("e" + std::to_string(edges.size()), vertices[a], vertices[b]);
  };
  auto block_lo = [&](int v) { return v < split ? 0 : split; };
  auto block_hi = [&](int v) { return v < split ? split - 1 : nv - 1; };

  // Spanning skeleton per block; single-vertex blocks get a loop.
  for (int v = 0; v < nv; ++v) {
    if (v == 0 || v == split) {
      if (block_hi(v) == v) add_edge(v, v);
      continue;
    }
    add_edge(v, rand_int(block_lo(v), v - 1));
  }
  int extra = rand_int(0, std::max(0, bounds.max_edges - static_cast<int>(edges.size())));
  for (int i = 0; i < extra; ++i) {
    int a = rand_int(0, nv - 1);
    double roll = rand_real();
    if (roll < bounds.loop_prob) {
      add_edge(a, a);
    } else if (roll < bounds.loop_prob + bounds.parallel_prob && !edges.empty()) {
      // duplicate an existing edge's endpoints
      const auto& [label, va, vb] = edges[rand_int(0, static_cast<int>(edges.size()) - 1)];
      edges.emplace_back("e" + std::to_string(edges.size()), va, vb);
    } else {
      int b = rand_int(block_lo(a), block_hi(a));
      add_edge(a, b);
    }
  }

  RandomInstance inst{Multigraph::build(vertices, edges), {}, {}};
  for (Color c = 0; c < nc; ++c) inst.colors.push_back(c);
  inst.constraints.reserve(edges.size());
  for (size_t e = 0; e < edges.size(); ++e)
    inst.constraints.push_back(
        ColorPair::of(rand_int(0, nc - 1), rand_int(0, nc - 1)));
  return inst;
}

} // namespace oracle
} // namespace ecvc
