#include "ecvc/localize.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace ecvc {

namespace {

bool same_restricted(const PhasedInterval& left, const PhasedInterval& right,
                     const std::vector<std::pair<int, int>>& shared, int row) {
  const MarkerResult& rl = left.results[row - left.lo];
  const MarkerResult& rr = right.results[row - right.lo];
  if (rl.status != rr.status) return false;
  for (auto [vl, vr] : shared)
    if (rl.assignment[vl] != rr.assignment[vr]) return false;
  return true;
}

std::vector<std::pair<int, int>> shared_vertex_pairs(const PhasedInterval& left,
                                                     const PhasedInterval& right) {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < left.graph.n_vertices(); ++v) {
    auto it = right.graph.vertex_index.find(left.graph.vertex_labels[v]);
    if (it != right.graph.vertex_index.end()) out.emplace_back(v, it->second);
  }
  return out;
}

} // namespace

std::vector<int> ambiguity_set(const PhasedInterval& left, const PhasedInterval& right,
                               const std::vector<std::string>& shared_labels, int a, int b) {
  std::vector<std::pair<int, int>> shared;
  for (const std::string& label : shared_labels)
    shared.emplace_back(left.graph.vertex(label), right.graph.vertex(label));
  std::vector<int> out;
  for (int k = a + 1; k <= b - 1; ++k)
    if (!same_restricted(left, right, shared, k)) out.push_back(k);
  return out;
}

LocalizationResult localize_single(const Pedigree& ped, const IBDStructure& ibd_left,
                                   const IBDStructure& ibd_right, const GenotypeMatrix& gm,
                                   int lo, int hi, ChromKind kind, const LocalizeOptions& opts) {
  if (ibd_left == ibd_right)
    fail(Errc::IdenticalIbd, "flanking IBD structures are identical; nothing to localize");

  PhaseOptions popts = opts.phase;
  popts.impute = false;

  LocalizationResult res;
  res.lo = lo;
  res.hi = hi;
  res.left = phase_interval(ped, ibd_left, gm, lo, hi, kind, popts);
  res.right = phase_interval(ped, ibd_right, gm, lo, hi, kind, popts);

  const int n = hi - lo + 1;
  res.traces.resize(n);
  for (int i = 0; i < n; ++i) {
    MarkerTrace& t = res.traces[i];
    t.status_left = res.left.results[i].status;
    t.status_right = res.right.results[i].status;
    t.fail_left = t.status_left == MarkerStatus::Error;
    t.fail_right = t.status_right == MarkerStatus::Error;
  }

  // b: first row where the left graph stops fitting; a: last row where the
  // right graph does not fit yet.
  int a = -1, b = -1;
  if (opts.policy == LocalizePolicy::Strict) {
    for (int i = 0; i < n; ++i)
      if (res.traces[i].fail_left) { b = lo + i; break; }
    for (int i = n; i-- > 0;)
      if (res.traces[i].fail_right) { a = lo + i; break; }
  } else {
    const int w = std::max(1, opts.window);
    auto freq_forward = [&](int i) {
      int cnt = 0, len = 0;
      for (int j = i; j < std::min(n, i + w); ++j, ++len) cnt += res.traces[j].fail_left;
      return len ? static_cast<double>(cnt) / len : 0.0;
    };
    auto freq_backward = [&](int i) {
      int cnt = 0, len = 0;
      for (int j = i; j > std::max(-1, i - w); --j, ++len) cnt += res.traces[j].fail_right;
      return len ? static_cast<double>(cnt) / len : 0.0;
    };
    for (int i = 0; i < n; ++i)
      if (res.traces[i].fail_left && freq_forward(i) >= opts.tau) { b = lo + i; break; }
    for (int i = n; i-- > 0;)
      if (res.traces[i].fail_right && freq_backward(i) >= opts.tau) { a = lo + i; break; }
  }

  std::vector<std::pair<int, int>> shared = shared_vertex_pairs(res.left, res.right);
  for (auto [vl, vr] : shared) res.shared_labels.push_back(res.left.graph.vertex_labels[vl]);

  res.side.assign(n, AssignSide::Undetermined);
  if (a >= 0 && b >= 0 && a < b) {
    res.localizable = true;
    res.a = a;
    res.b = b;
    for (int k = a + 1; k <= b - 1; ++k) {
      bool same = same_restricted(res.left, res.right, shared, k);
      if (!same) {
        res.ambiguity.push_back(k);
        res.traces[k - lo].in_ambiguity = true;
      }
    }
    for (int i = 0; i < n; ++i) {
      int k = lo + i;
      if (k <= a) res.side[i] = AssignSide::Left;
      else if (k >= b) res.side[i] = AssignSide::Right;
      else if (!res.traces[i].in_ambiguity && res.traces[i].status_left != MarkerStatus::Error)
        res.side[i] = AssignSide::Common;
    }
  }
  return res;
}

namespace {

LocalizeOptions with_drops(const LocalizeOptions& opts, const std::vector<std::string>& drops) {
  LocalizeOptions out = opts;
  out.phase.drop_individuals.insert(out.phase.drop_individuals.end(), drops.begin(), drops.end());
  return out;
}

std::vector<std::pair<int, int>> cells_around(const std::vector<int>& centers, int lo, int hi) {
  // centers ascending; cell i = (mid(i-1), mid(i)]-style inclusive ranges
  std::vector<std::pair<int, int>> cells(centers.size());
  for (size_t i = 0; i < centers.size(); ++i) {
    int cell_lo = i == 0 ? lo : (centers[i - 1] + centers[i]) / 2 + 1;
    int cell_hi = i + 1 == centers.size() ? hi : (centers[i] + centers[i + 1]) / 2;
    cells[i] = {cell_lo, cell_hi};
  }
  return cells;
}

} // namespace

std::vector<LocalizationResult> orchestrate_multi(const Pedigree& ped,
                                                  const std::vector<SuspectedEvent>& events,
                                                  const GenotypeMatrix& gm, int lo, int hi,
                                                  ChromKind kind, MultiStrategy strategy,
                                                  const LocalizeOptions& opts) {
  std::vector<LocalizationResult> out;
  if (events.empty()) return out;

  const bool needs_hints = strategy != MultiStrategy::EdgeRemoval;
  std::vector<int> order(events.size());
  std::iota(order.begin(), order.end(), 0);
  if (needs_hints) {
    for (const SuspectedEvent& ev : events)
      if (ev.hint < lo || ev.hint > hi)
        fail(Errc::InvalidArgument, "event " + ev.id + " needs a hint row inside the range");
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return events[x].hint < events[y].hint; });
    if (strategy == MultiStrategy::Partition)
      for (size_t i = 1; i < order.size(); ++i)
        if (events[order[i]].hint == events[order[i - 1]].hint)
          fail(Errc::OverlappingEventsUnresolvable,
               "events " + events[order[i - 1]].id + " and " + events[order[i]].id +
                   " share a hint; partitioning cannot separate them");
  }

  auto others_affected = [&](size_t self) {
    std::vector<std::string> drops;
    for (size_t j = 0; j < events.size(); ++j) {
      if (j == self) continue;
      drops.insert(drops.end(), events[j].affected.begin(), events[j].affected.end());
    }
    std::sort(drops.begin(), drops.end());
    drops.erase(std::unique(drops.begin(), drops.end()), drops.end());
    return drops;
  };

  auto run_event = [&](size_t i, int cell_lo, int cell_hi, const LocalizeOptions& o,
                       const char* strat) {
    const SuspectedEvent& ev = events[i];
    try {
      LocalizationResult r =
          localize_single(ped, ev.ibd_left, ev.ibd_right, gm, cell_lo, cell_hi, kind, o);
      r.event_id = ev.id;
      r.strategy = strat;
      return r;
    } catch (const Error& e) {
      if (e.code() == Errc::EmptyGraph)
        fail(Errc::OverlappingEventsUnresolvable,
             "event " + ev.id + ": removing other events' carriers empties the graph");
      throw;
    }
  };

  out.resize(events.size());

  // First pass.
  std::vector<std::pair<int, int>> first_cells(events.size(), {lo, hi});
  if (strategy == MultiStrategy::Partition || strategy == MultiStrategy::Hybrid) {
    std::vector<int> centers;
    for (int i : order) centers.push_back(events[i].hint);
    auto cells = cells_around(centers, lo, hi);
    for (size_t pos = 0; pos < order.size(); ++pos) first_cells[order[pos]] = cells[pos];
  }
  for (size_t pos = 0; pos < events.size(); ++pos) {
    size_t i = needs_hints ? static_cast<size_t>(order[pos]) : pos;
    auto [clo, chi] = first_cells[i];
    if (clo > chi)
      fail(Errc::OverlappingEventsUnresolvable,
           "event " + events[i].id + " has an empty partition cell");
    LocalizeOptions o = strategy == MultiStrategy::Partition
                            ? opts
                            : with_drops(opts, others_affected(i));
    const char* strat = strategy == MultiStrategy::Partition     ? "partition"
                        : strategy == MultiStrategy::EdgeRemoval ? "edge_removal"
                                                                 : "hybrid";
    out[i] = run_event(i, clo, chi, o, strat);
  }

  if (strategy == MultiStrategy::Partition) return out; // already all-subject runs

  // Final pass: all subjects restored, each event on its own subinterval
  // around the first-pass bracket.
  std::vector<int> centers(events.size());
  for (size_t i = 0; i < events.size(); ++i) {
    if (out[i].localizable) centers[i] = (out[i].a + out[i].b) / 2;
    else if (events[i].hint >= lo && events[i].hint <= hi) centers[i] = events[i].hint;
    else centers[i] = (lo + hi) / 2;
  }
  std::vector<int> final_order(events.size());
  std::iota(final_order.begin(), final_order.end(), 0);
  std::stable_sort(final_order.begin(), final_order.end(),
                   [&](int x, int y) { return centers[x] < centers[y]; });
  std::vector<int> sorted_centers;
  for (int i : final_order) sorted_centers.push_back(centers[i]);
  auto cells = cells_around(sorted_centers, lo, hi);
  for (size_t pos = 0; pos < final_order.size(); ++pos) {
    size_t i = final_order[pos];
    auto [clo, chi] = cells[pos];
    if (clo > chi) continue; // keep the first-pass result
    LocalizationResult r = run_event(i, clo, chi, opts, out[i].strategy.c_str());
    if (r.localizable || !out[i].localizable) out[i] = std::move(r);
  }
  return out;
}

void write_localization_tsv(std::ostream& out, const std::vector<LocalizationResult>& results,
                            const GenotypeMatrix& gm) {
  out << "event_id\ta_marker\tb_marker\tstatus\tE_size\tstrategy\n";
  for (const LocalizationResult& r : results) {
    out << r.event_id << "\t";
    if (r.localizable)
      out << gm.markers[r.a].id << "\t" << gm.markers[r.b].id << "\tlocalized\t"
          << r.ambiguity.size();
    else
      out << "-\t-\tnot_localizable\t0";
    out << "\t" << r.strategy << "\n";
  }
}

void write_trace_tsv(std::ostream& out, const LocalizationResult& r, const GenotypeMatrix& gm) {
  out << "marker_id\tstatus_left\tstatus_right\tin_E\tside\n";
  for (size_t i = 0; i < r.traces.size(); ++i) {
    const MarkerTrace& t = r.traces[i];
    const char* side = "undetermined";
    switch (r.side[i]) {
      case AssignSide::Left: side = "left"; break;
      case AssignSide::Right: side = "right"; break;
      case AssignSide::Common: side = "common"; break;
      case AssignSide::Undetermined: break;
    }
    out << gm.markers[r.lo + static_cast<int>(i)].id << "\t" << to_string(t.status_left) << "\t"
        << to_string(t.status_right) << "\t" << (t.in_ambiguity ? 1 : 0) << "\t" << side << "\n";
  }
}

} // namespace ecvc
