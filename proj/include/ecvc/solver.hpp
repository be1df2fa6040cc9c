#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecvc/graph.hpp"

namespace ecvc {

/// Colors are interned to dense integers per batch; equality is all the
/// solver needs.
using Color = int32_t;
inline constexpr Color kNoColor = -1;

/// Unordered multiset of exactly two colors, stored as (lo, hi).
struct ColorPair {
  Color lo = kNoColor;
  Color hi = kNoColor;

  static ColorPair of(Color a, Color b) { return a <= b ? ColorPair{a, b} : ColorPair{b, a}; }
  bool valid() const { return lo != kNoColor; }
  bool hom() const { return lo == hi; }
  bool contains(Color c) const { return c == lo || c == hi; }
  /// The element left after removing one instance of c; kNoColor when c is absent.
  Color other(Color c) const {
    if (c == lo) return hi;
    if (c == hi) return lo;
    return kNoColor;
  }
  bool operator==(const ColorPair&) const = default;
};

/// One ColorPair per edge id of the target (sub)graph.
using ConstraintList = std::vector<ColorPair>;

/// Intersection of the constraint supports over a vertex's incident edges:
/// empty, one or two colors.
struct ColorSet {
  int n = -1; // -1 = universe (not yet intersected)
  Color a = kNoColor;
  Color b = kNoColor;

  int size() const { return n < 0 ? 2 : n; }
  bool contains(Color c) const { return n < 0 || (n > 0 && c == a) || (n > 1 && c == b); }
  void intersect(ColorPair p);
};

/// Eq-style per-vertex intersections over all incident edges; a loop
/// contributes its support once.
std::vector<ColorSet> intersections(const Multigraph& g, const ConstraintList& l);

struct PathColoring {
  bool ok = false;
  int fail_index = -1;                // edge step at which extension failed
  std::vector<Color> colors;          // aligned with path.vertices when ok
};

/// Unique extension of a seed color along a simple path; fails with the
/// offending step index when no solution with that seed exists.
PathColoring extend_along_path(const PathSeq& path, const ConstraintList& l, Color seed);

enum class OutcomeKind : uint8_t { None, Unique, Two };

enum class NoneReason : uint8_t {
  NotNone,
  EmptyIntersection,
  PathContradiction,
  RootNotInIntersection,
  NonTreeEdgeViolation,
  LoopHeterozygous,
};

/// Per-component result: no solution, exactly one, or the proper 2-coloring
/// pair. Colorings are aligned with ComponentPlan::vertices.
struct ComponentOutcome {
  OutcomeKind kind = OutcomeKind::None;
  std::vector<Color> a;
  std::vector<Color> b; // used iff kind == Two
  NoneReason reason = NoneReason::NotNone;
  int reason_vertex = -1;
  int reason_edge = -1;
};

struct SolutionSet {
  std::vector<ComponentOutcome> comps;

  bool has_solution() const {
    for (const auto& c : comps)
      if (c.kind == OutcomeKind::None) return false;
    return true;
  }
  /// Number of Two components; the global solution count is 2^d.
  int d() const {
    int n = 0;
    for (const auto& c : comps) n += c.kind == OutcomeKind::Two;
    return n;
  }
};

struct SolveOptions {
  int threads = 1;
  bool existence_only = false; // stop a marker at its first None component
};

/// Tree-restricted solve of one component (|V'| > 1): only the spanning tree
/// edges of the component are consulted.
ComponentOutcome solve_tree(const ForestPlan& plan, int comp, const ConstraintList& l);

/// Full solve of one component: tree candidates filtered by every non-tree
/// edge, loops included; single-vertex components handled directly.
ComponentOutcome solve_component(const ForestPlan& plan, int comp, const ConstraintList& l);

SolutionSet solve_one(const ForestPlan& plan, const ConstraintList& l);

/// Batch solve of n constraint lists over one precomputed plan. O(n|E|)
/// total; lists may be evaluated concurrently.
std::vector<SolutionSet> solve_many(const ForestPlan& plan,
                                    const std::vector<ConstraintList>& lists,
                                    SolveOptions opts = {});

/// Global coloring selected by a d-digit binary index: bit j picks the
/// second coloring of the j-th Two component (component order).
std::vector<Color> enumerate_solution(const ForestPlan& plan, const SolutionSet& s,
                                      uint64_t index);

/// Independent count of Two components straight from the characterization:
/// loop-free, bipartite, and constraints constant with two distinct colors.
int count_d(const ForestPlan& plan, const ConstraintList& l);

/// Exact decimal solution count (0 or 2^d), safe for any d.
std::string solution_count_decimal(const SolutionSet& s);

enum class TagKind : uint8_t {
  EmptyIntersection,
  PathContradiction,
  RootNotInIntersection,
  NonTreeEdgeViolation,
  OddCycleTwoColor,
  LoopHeterozygous,
};

struct DiagnosticTag {
  TagKind kind;
  int component = -1;
  int vertex = -1;
  int edge = -1;
};

/// Best-effort failure reasons for every None component of a solved set.
std::vector<DiagnosticTag> diagnose(const ForestPlan& plan, const ConstraintList& l,
                                    const SolutionSet& s);
std::string tag_to_string(const Multigraph& g, const DiagnosticTag& t);

void validate_total(const Multigraph& g, const ConstraintList& l);

} // namespace ecvc
