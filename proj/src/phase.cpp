#include "ecvc/phase.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace ecvc {

const char* to_string(MarkerStatus s) {
  switch (s) {
    case MarkerStatus::Solved: return "SOLVED";
    case MarkerStatus::Ambiguous: return "AMBIGUOUS";
    case MarkerStatus::Error: return "ERROR";
    case MarkerStatus::AllMissing: return "ALL_MISSING";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Consistent: return "Consistent";
    case Verdict::Suspect: return "Suspect";
    case Verdict::Inconsistent: return "Inconsistent";
  }
  return "?";
}

MarkerStatus classify_status(const SolutionSet& s, const std::vector<int>& comp_edge_counts,
                             int h_min, bool* excess_het, std::vector<int>* ambiguous_comps) {
  bool any_none = false, any_two = false;
  if (excess_het) *excess_het = false;
  for (size_t ci = 0; ci < s.comps.size(); ++ci) {
    switch (s.comps[ci].kind) {
      case OutcomeKind::None: any_none = true; break;
      case OutcomeKind::Two:
        any_two = true;
        if (ambiguous_comps) ambiguous_comps->push_back(static_cast<int>(ci));
        if (excess_het && comp_edge_counts[ci] >= h_min) *excess_het = true;
        break;
      case OutcomeKind::Unique: break;
    }
  }
  if (any_none) return MarkerStatus::Error;
  return any_two ? MarkerStatus::Ambiguous : MarkerStatus::Solved;
}

namespace {

Pedigree apply_drops(const Pedigree& ped, const std::vector<std::string>& drops) {
  if (drops.empty()) return ped;
  Pedigree out = ped;
  for (const std::string& id : drops) {
    int i = out.find(id);
    if (i < 0) fail(Errc::InvalidArgument, "cannot drop unknown individual " + id);
    out.members[i].sequenced = false;
  }
  return out;
}

} // namespace

Imputation impute_marker(const MarkerResult& r, const Multigraph& full_graph,
                         const Pedigree& ped, const IBDStructure& ibd, ChromKind kind,
                         const std::vector<std::string>& missing_individuals) {
  Imputation out;
  if (r.status != MarkerStatus::Solved && r.status != MarkerStatus::Ambiguous) return out;

  std::unordered_set<std::string> missing(missing_individuals.begin(),
                                          missing_individuals.end());
  auto color_of = [&](const std::string& label) -> Color {
    auto it = full_graph.vertex_index.find(label);
    if (it == full_graph.vertex_index.end()) return kNoColor;
    return r.assignment[it->second];
  };

  for (const Individual& m : ped.members) {
    bool target = (!m.sequenced || missing.count(m.id)) && ibd.find(m.id) != nullptr;
    if (!target) continue;
    const HapPair& hp = *ibd.find(m.id);
    if (kind == ChromKind::X && m.sex == Sex::XY) {
      Color c = color_of(hp.mat);
      if (c != kNoColor) {
        out.genotypes.push_back({m.id, c, c});
        out.haplotypes.push_back({m.id, 'm', c});
      }
      continue;
    }
    if (hp.pat.empty()) continue;
    Color cp = color_of(hp.pat);
    Color cm = color_of(hp.mat);
    if (cp != kNoColor && cm != kNoColor)
      out.genotypes.push_back({m.id, std::min(cp, cm), std::max(cp, cm)});
    if (cp != kNoColor) out.haplotypes.push_back({m.id, 'p', cp});
    if (cm != kNoColor) out.haplotypes.push_back({m.id, 'm', cm});
  }
  return out;
}

PhasedInterval phase_interval(const Pedigree& ped_in, const IBDStructure& ibd,
                              const GenotypeMatrix& gm, int lo, int hi, ChromKind kind,
                              const PhaseOptions& opts) {
  if (lo < 0 || hi >= gm.n_markers() || lo > hi) fail(Errc::InvalidArgument, "empty marker range");
  if (ibd.start_idx > lo + 1 || ibd.end_idx < hi + 1)
    fail(Errc::InvalidArgument, "IBD structure does not cover the marker range");
  for (int k = lo; k <= hi; ++k)
    if (gm.markers[k].chrom != ibd.chrom)
      fail(Errc::InvalidArgument, "marker " + gm.markers[k].id + " is on chromosome " +
                                      gm.markers[k].chrom + ", IBD is for " + ibd.chrom);

  Pedigree ped = apply_drops(ped_in, opts.drop_individuals);

  PhasedInterval ph;
  ph.lo = lo;
  ph.hi = hi;
  ph.graph = build_marker_graph(ibd, ped, kind);
  ph.allele_names = gm.alleles.names;
  const Multigraph& graph = ph.graph;
  const int n_range = hi - lo + 1;

  std::vector<int> edge_col(graph.n_edges());
  for (int e = 0; e < graph.n_edges(); ++e) {
    edge_col[e] = gm.column(graph.edge_labels[e]);
    if (edge_col[e] < 0)
      fail(Errc::InvalidArgument, "individual " + graph.edge_labels[e] + " not in genotype file");
  }

  // Group range markers by which edges are missing.
  std::unordered_map<std::string, int> pattern_of;
  std::vector<std::vector<int>> pattern_edges;  // missing edge ids
  std::vector<std::vector<int>> pattern_markers;
  {
    std::string key;
    std::vector<int> cur;
    for (int k = lo; k <= hi; ++k) {
      cur.clear();
      key.clear();
      for (int e = 0; e < graph.n_edges(); ++e)
        if (gm.at(k, edge_col[e]).missing()) {
          cur.push_back(e);
          key += std::to_string(e);
          key += ',';
        }
      auto [it, fresh] = pattern_of.emplace(key, static_cast<int>(pattern_edges.size()));
      if (fresh) {
        pattern_edges.push_back(cur);
        pattern_markers.emplace_back();
      }
      pattern_markers[it->second].push_back(k);
    }
  }

  ph.results.resize(n_range);
  ph.hap_seq.assign(graph.n_vertices(), std::vector<int32_t>(n_range, -1));

  for (size_t pi = 0; pi < pattern_edges.size(); ++pi) {
    PatternInfo info;
    for (int e : pattern_edges[pi]) info.missing_individuals.push_back(graph.edge_labels[e]);

    if (pattern_edges[pi].size() == static_cast<size_t>(graph.n_edges())) {
      for (int k : pattern_markers[pi]) {
        MarkerResult& r = ph.results[k - lo];
        r.k = k;
        r.status = MarkerStatus::AllMissing;
        r.assignment.assign(graph.n_vertices(), kNoColor);
        r.pattern = static_cast<int>(pi);
        ++ph.n_all_missing;
      }
      ph.patterns.push_back(std::move(info));
      continue;
    }

    info.sub = std::make_shared<SubgraphPlan>(
        subgraph_for_pattern(graph, info.missing_individuals));
    const SubgraphPlan& sub = *info.sub;
    const Multigraph& sg = sub.plan.graph;

    std::vector<int> comp_edge_counts;
    comp_edge_counts.reserve(sub.plan.comps.size());
    for (const ComponentPlan& c : sub.plan.comps)
      comp_edge_counts.push_back(static_cast<int>(c.edges.size()));

    const std::vector<int>& ks = pattern_markers[pi];
    // Chunked batches keep the transient constraint storage cache-sized while
    // the plan is still built once per pattern.
    const size_t chunk = std::max<size_t>(1024, 256 * std::max(1, opts.threads));
    std::vector<ConstraintList> lists;
    std::vector<SolutionSet> sets;
    for (size_t base = 0; base < ks.size(); base += chunk) {
      size_t count = std::min(chunk, ks.size() - base);
      lists.assign(count, ConstraintList(sg.n_edges()));
      for (size_t i = 0; i < count; ++i) {
        ConstraintList& l = lists[i];
        for (int e = 0; e < sg.n_edges(); ++e) {
          Genotype gt = gm.at(ks[base + i], edge_col[sub.edge_to_parent[e]]);
          l[e] = ColorPair::of(gt.a1, gt.a2);
        }
      }

      SolveOptions sopts;
      sopts.threads = opts.threads;
      sets = solve_many(sub.plan, lists, sopts);

      for (size_t i = 0; i < count; ++i) {
        int k = ks[base + i];
        MarkerResult& r = ph.results[k - lo];
        r.k = k;
        r.pattern = static_cast<int>(pi);
        r.assignment.assign(graph.n_vertices(), kNoColor);
        r.status = classify_status(sets[i], comp_edge_counts, opts.h_min, &r.excess_het,
                                   &r.ambiguous_components);
        for (size_t ci = 0; ci < sets[i].comps.size(); ++ci) {
          const ComponentOutcome& o = sets[i].comps[ci];
          switch (o.kind) {
            case OutcomeKind::Unique: ++r.n_unique; break;
            case OutcomeKind::Two: ++r.n_two; break;
            case OutcomeKind::None: ++r.n_none; break;
          }
          if (o.kind != OutcomeKind::Unique) continue;
          const auto& verts = sub.plan.comps[ci].vertices;
          for (size_t j = 0; j < verts.size(); ++j)
            r.assignment[sub.vertex_to_parent[verts[j]]] = o.a[j];
        }
        switch (r.status) {
          case MarkerStatus::Solved:
            ++ph.n_solved;
            for (int v = 0; v < graph.n_vertices(); ++v) ph.hap_seq[v][k - lo] = r.assignment[v];
            break;
          case MarkerStatus::Ambiguous: ++ph.n_ambiguous; break;
          case MarkerStatus::Error: {
            ++ph.n_error;
            for (const DiagnosticTag& t : diagnose(sub.plan, lists[i], sets[i]))
              r.tags.push_back(tag_to_string(sg, t));
            break;
          }
          case MarkerStatus::AllMissing: break;
        }
        if (opts.impute &&
            (r.status == MarkerStatus::Solved || r.status == MarkerStatus::Ambiguous)) {
          Imputation imp = impute_marker(r, graph, ped, ibd, kind, info.missing_individuals);
          if (!imp.genotypes.empty() || !imp.haplotypes.empty())
            ph.imputations.emplace_back(k, std::move(imp));
        }
      }
    }
    ph.patterns.push_back(std::move(info));
  }

  std::sort(ph.imputations.begin(), ph.imputations.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return ph;
}

IbdConsistencyReport check_ibd(const Pedigree& ped, const IBDStructure& ibd,
                               const GenotypeMatrix& gm, int lo, int hi, ChromKind kind,
                               const CheckIbdOptions& opts) {
  PhaseOptions popts = opts.phase;
  popts.impute = false;
  PhasedInterval ph = phase_interval(ped, ibd, gm, lo, hi, kind, popts);

  IbdConsistencyReport rep;
  rep.markers = hi - lo + 1;

  std::vector<int> edge_col;
  for (int e = 0; e < ph.graph.n_edges(); ++e)
    edge_col.push_back(gm.column(ph.graph.edge_labels[e]));

  for (int k = lo; k <= hi; ++k) {
    const MarkerResult& r = ph.results[k - lo];
    bool failed = r.status == MarkerStatus::Error;
    rep.failed += failed;
    bool het = false;
    for (int col : edge_col) {
      Genotype g = gm.at(k, col);
      if (g.het()) { het = true; break; }
    }
    if (het) {
      ++rep.het_markers;
      rep.het_failed += failed;
    }
  }
  rep.rate_all = rep.markers ? static_cast<double>(rep.failed) / rep.markers : 0.0;
  rep.rate_het = rep.het_markers ? static_cast<double>(rep.het_failed) / rep.het_markers : 0.0;

  ForestPlan full = ForestPlan::build(ph.graph);
  for (const ComponentPlan& c : full.comps) rep.component_betti.push_back(first_betti(c));

  if (rep.rate_het >= opts.inconsistent_cutoff) rep.verdict = Verdict::Inconsistent;
  else if (rep.rate_het >= opts.suspect_cutoff) rep.verdict = Verdict::Suspect;
  else rep.verdict = Verdict::Consistent;
  return rep;
}

void write_haplotypes_tsv(std::ostream& out, const PhasedInterval& ph, const GenotypeMatrix& gm) {
  out << "haplotype";
  for (int k = ph.lo; k <= ph.hi; ++k) out << "\t" << gm.markers[k].id;
  out << "\n";
  for (int v = 0; v < ph.graph.n_vertices(); ++v) {
    out << ph.graph.vertex_labels[v];
    for (int32_t a : ph.hap_seq[v]) out << "\t" << (a < 0 ? "." : ph.allele_names[a]);
    out << "\n";
  }
}

void write_marker_report_tsv(std::ostream& out, const PhasedInterval& ph,
                             const GenotypeMatrix& gm) {
  out << "marker_id\tstatus\tflags\tcomponent_detail\n";
  for (const MarkerResult& r : ph.results) {
    out << gm.markers[r.k].id << "\t" << to_string(r.status) << "\t"
        << (r.excess_het ? "excess_het" : "-") << "\t";
    if (r.status == MarkerStatus::AllMissing) {
      out << "-\n";
      continue;
    }
    out << "unique=" << r.n_unique << ",two=" << r.n_two << ",none=" << r.n_none;
    if (!r.tags.empty()) {
      out << "|";
      for (size_t i = 0; i < r.tags.size(); ++i) out << (i ? "," : "") << r.tags[i];
    }
    out << "\n";
  }
}

void write_imputations_tsv(std::ostream& out, const PhasedInterval& ph,
                           const GenotypeMatrix& gm) {
  out << "marker_id\tindividual\tkind\tvalue\n";
  for (const auto& [k, imp] : ph.imputations) {
    for (const ImputedGenotype& g : imp.genotypes)
      out << gm.markers[k].id << "\t" << g.individual << "\tgenotype\t"
          << ph.allele_names[g.a1] << "/" << ph.allele_names[g.a2] << "\n";
    for (const ImputedHaplotype& h : imp.haplotypes)
      out << gm.markers[k].id << "\t" << h.individual << "\thap_" << h.side << "\t"
          << ph.allele_names[h.allele] << "\n";
  }
}

void write_ibd_report_tsv(std::ostream& out, const IbdConsistencyReport& rep) {
  out << "markers\t" << rep.markers << "\n";
  out << "failed\t" << rep.failed << "\n";
  out << "rate_all\t" << rep.rate_all << "\n";
  out << "het_markers\t" << rep.het_markers << "\n";
  out << "het_failed\t" << rep.het_failed << "\n";
  out << "rate_het\t" << rep.rate_het << "\n";
  out << "component_betti\t";
  for (size_t i = 0; i < rep.component_betti.size(); ++i)
    out << (i ? "," : "") << rep.component_betti[i];
  out << "\n";
  out << "verdict\t" << to_string(rep.verdict) << "\n";
}

} // namespace ecvc
