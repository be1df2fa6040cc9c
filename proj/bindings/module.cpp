#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ecvc/localize.hpp"
#include "ecvc/oracle.hpp"
#include "ecvc/phase.hpp"
#include "ecvc/sim.hpp"
#include "ecvc/solve_io.hpp"

namespace py = pybind11;
using namespace ecvc;

namespace {

struct PyGraph {
  ForestPlan plan;

  PyGraph(const std::vector<std::string>& vertices,
          const std::vector<std::tuple<std::string, std::string, std::string>>& edges) {
    plan = ForestPlan::build(Multigraph::build(vertices, edges));
  }
  int n_vertices() const { return plan.graph.n_vertices(); }
  int n_edges() const { return plan.graph.n_edges(); }
  int component_count() const { return static_cast<int>(plan.comps.size()); }
  std::vector<int> betti() const {
    std::vector<int> out;
    for (const auto& c : plan.comps) out.push_back(first_betti(c));
    return out;
  }
  std::vector<bool> bipartite_loop_free() const {
    std::vector<bool> out;
    for (const auto& c : plan.comps) out.push_back(is_bipartite_loop_free(c));
    return out;
  }
};

using PyProblem = std::map<std::string, std::pair<std::string, std::string>>;

ConstraintList to_constraints(const PyGraph& g, const PyProblem& problem, ColorInterner& colors) {
  ConstraintList l(g.plan.graph.n_edges());
  for (const auto& [edge, pair] : problem) {
    int e = g.plan.graph.edge(edge);
    l[e] = ColorPair::of(colors.intern(pair.first), colors.intern(pair.second));
  }
  validate_total(g.plan.graph, l);
  return l;
}

py::list solve_py(const PyGraph& g, const std::vector<PyProblem>& problems, int threads,
                  uint64_t max_enumerate) {
  ColorInterner colors;
  std::vector<ConstraintList> lists;
  lists.reserve(problems.size());
  for (const auto& p : problems) lists.push_back(to_constraints(g, p, colors));
  SolveOptions opts;
  opts.threads = threads;
  std::vector<SolutionSet> sets = solve_many(g.plan, lists, opts);

  py::list results;
  for (size_t k = 0; k < sets.size(); ++k) {
    const SolutionSet& s = sets[k];
    py::dict r;
    r["solvable"] = s.has_solution();
    r["count"] = solution_count_decimal(s);
    r["d"] = s.d();
    py::list solutions;
    if (s.has_solution()) {
      uint64_t n = s.d() >= 64 ? max_enumerate : std::min(uint64_t{1} << s.d(), max_enumerate);
      for (uint64_t idx = 0; idx < n; ++idx) {
        std::vector<Color> phi = enumerate_solution(g.plan, s, idx);
        py::dict m;
        for (int v = 0; v < g.plan.graph.n_vertices(); ++v)
          m[py::str(g.plan.graph.vertex_labels[v])] = colors.names[phi[v]];
        solutions.append(m);
      }
    }
    r["solutions"] = solutions;
    py::list diags;
    if (!s.has_solution())
      for (const DiagnosticTag& t : diagnose(g.plan, lists[k], s))
        diags.append(tag_to_string(g.plan.graph, t));
    r["diagnostics"] = diags;
    results.append(r);
  }
  return results;
}

int count_d_py(const PyGraph& g, const PyProblem& problem) {
  ColorInterner colors;
  return count_d(g.plan, to_constraints(g, problem, colors));
}

std::vector<std::map<std::string, std::string>> brute_force_py(
    const PyGraph& g, const PyProblem& problem, const std::vector<std::string>& colors) {
  ColorInterner interner;
  ConstraintList l = to_constraints(g, problem, interner);
  std::vector<Color> pool;
  for (const auto& c : colors) pool.push_back(interner.intern(c));
  auto sols = oracle::brute_force(g.plan.graph, l, pool);
  std::vector<std::map<std::string, std::string>> out;
  for (const auto& phi : sols) {
    std::map<std::string, std::string> m;
    for (int v = 0; v < g.plan.graph.n_vertices(); ++v)
      m[g.plan.graph.vertex_labels[v]] = interner.names[phi[v]];
    out.push_back(std::move(m));
  }
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot read " + path);
  return in;
}

struct LoadedInputs {
  Pedigree ped;
  GenotypeMatrix gm;
  int lo, hi;
  ChromKind kind;
};

LoadedInputs load_inputs(const std::string& ped_path, const std::string& geno_path, int lo1,
                         int hi1, bool x_chromosome) {
  LoadedInputs in;
  {
    auto f = open_input(ped_path);
    in.ped = read_pedigree_tsv(f);
  }
  {
    auto f = open_input(geno_path);
    in.gm = read_genotypes_tsv(f);
  }
  if (in.gm.n_markers() == 0) fail(Errc::InvalidArgument, "genotype file holds no markers");
  in.lo = lo1 > 0 ? lo1 - 1 : 0;
  in.hi = hi1 > 0 ? hi1 - 1 : in.gm.n_markers() - 1;
  if (in.lo < 0 || in.hi >= in.gm.n_markers() || in.lo > in.hi)
    fail(Errc::InvalidArgument, "empty marker range");
  in.kind = x_chromosome ? ChromKind::X : ChromKind::Autosome;
  return in;
}

py::dict phase_py(const std::string& ped_path, const std::string& ibd_path,
                  const std::string& geno_path, const std::string& out_dir, int lo1, int hi1,
                  bool x_chromosome, int threads, int h_min,
                  const std::vector<std::string>& drop_individuals) {
  LoadedInputs in = load_inputs(ped_path, geno_path, lo1, hi1, x_chromosome);
  IbdTable table;
  {
    auto f = open_input(ibd_path);
    table = read_ibd_tsv(f);
  }
  IBDStructure ibd = ibd_for_range(table, in.gm.markers[in.lo].chrom, in.lo + 1, in.hi + 1);
  PhaseOptions opts;
  opts.threads = threads;
  opts.h_min = h_min;
  opts.drop_individuals = drop_individuals;
  PhasedInterval ph = phase_interval(in.ped, ibd, in.gm, in.lo, in.hi, in.kind, opts);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream hap(std::filesystem::path(out_dir) / "haplotypes.tsv");
    write_haplotypes_tsv(hap, ph, in.gm);
    std::ofstream rep(std::filesystem::path(out_dir) / "marker_report.tsv");
    write_marker_report_tsv(rep, ph, in.gm);
    std::ofstream imp(std::filesystem::path(out_dir) / "imputed.tsv");
    write_imputations_tsv(imp, ph, in.gm);
  }
  py::dict out;
  out["markers"] = in.hi - in.lo + 1;
  out["solved"] = ph.n_solved;
  out["ambiguous"] = ph.n_ambiguous;
  out["error"] = ph.n_error;
  out["all_missing"] = ph.n_all_missing;
  py::dict haps;
  for (int v = 0; v < ph.graph.n_vertices(); ++v) {
    py::list seq;
    for (int32_t a : ph.hap_seq[v]) seq.append(a < 0 ? std::string(".") : ph.allele_names[a]);
    haps[py::str(ph.graph.vertex_labels[v])] = seq;
  }
  out["haplotypes"] = haps;
  return out;
}

py::dict check_ibd_py(const std::string& ped_path, const std::string& ibd_path,
                      const std::string& geno_path, int lo1, int hi1, bool x_chromosome,
                      int threads, double suspect_cutoff, double inconsistent_cutoff) {
  LoadedInputs in = load_inputs(ped_path, geno_path, lo1, hi1, x_chromosome);
  IbdTable table;
  {
    auto f = open_input(ibd_path);
    table = read_ibd_tsv(f);
  }
  IBDStructure ibd = ibd_for_range(table, in.gm.markers[in.lo].chrom, in.lo + 1, in.hi + 1);
  CheckIbdOptions opts;
  opts.phase.threads = threads;
  opts.suspect_cutoff = suspect_cutoff;
  opts.inconsistent_cutoff = inconsistent_cutoff;
  IbdConsistencyReport rep = check_ibd(in.ped, ibd, in.gm, in.lo, in.hi, in.kind, opts);
  py::dict out;
  out["verdict"] = to_string(rep.verdict);
  out["rate_het"] = rep.rate_het;
  out["rate_all"] = rep.rate_all;
  out["het_markers"] = rep.het_markers;
  out["component_betti"] = rep.component_betti;
  return out;
}

py::dict localize_py(const std::string& ped_path, const std::string& ibd_left_path,
                     const std::string& ibd_right_path, const std::string& geno_path, int lo1,
                     int hi1, bool x_chromosome, const std::string& policy, int window,
                     double tau, int threads) {
  LoadedInputs in = load_inputs(ped_path, geno_path, lo1, hi1, x_chromosome);
  auto load_flank = [&](const std::string& path, int at) {
    auto f = open_input(path);
    IbdTable table = read_ibd_tsv(f);
    IBDStructure s = ibd_for_range(table, in.gm.markers[at].chrom, at + 1, at + 1);
    s.start_idx = in.lo + 1;
    s.end_idx = in.hi + 1;
    return s;
  };
  IBDStructure left = load_flank(ibd_left_path, in.lo);
  IBDStructure right = load_flank(ibd_right_path, in.hi);
  LocalizeOptions opts;
  opts.phase.threads = threads;
  opts.window = window;
  opts.tau = tau;
  if (policy == "strict") opts.policy = LocalizePolicy::Strict;
  else if (policy == "windowed") opts.policy = LocalizePolicy::Windowed;
  else fail(Errc::InvalidArgument, "policy must be strict or windowed");

  LocalizationResult res = localize_single(in.ped, left, right, in.gm, in.lo, in.hi, in.kind,
                                           opts);
  py::dict out;
  out["localizable"] = res.localizable;
  if (res.localizable) {
    out["a_marker"] = in.gm.markers[res.a].id;
    out["b_marker"] = in.gm.markers[res.b].id;
    out["a_index"] = res.a + 1;
    out["b_index"] = res.b + 1;
    py::list amb;
    for (int k : res.ambiguity) amb.append(in.gm.markers[k].id);
    out["ambiguity"] = amb;
  }
  return out;
}

py::dict simulate_py(const std::string& config_text, const std::string& out_dir) {
  std::istringstream in(config_text);
  SimConfig cfg = parse_sim_config(in);
  TruthSet ts = simulate(cfg);
  if (!out_dir.empty()) export_truth(ts, out_dir);
  py::dict out;
  out["individuals"] = ts.ped.members.size();
  out["markers"] = cfg.n_markers;
  out["errors"] = ts.errors.size();
  out["missing"] = ts.missing_log.size();
  out["haplotypes"] = ts.hap_labels;
  return out;
}

} // namespace

PYBIND11_MODULE(_ecvc, m) {
  m.doc() = "Batch edge-constrained vertex coloring and pedigree haplotype phasing";

  py::register_exception<Error>(m, "EcvcError");

  py::class_<PyGraph>(m, "Graph")
      .def(py::init<const std::vector<std::string>&,
                    const std::vector<std::tuple<std::string, std::string, std::string>>&>(),
           py::arg("vertices"), py::arg("edges"),
           "Multigraph from vertex labels and (edge_label, v, w) triples")
      .def_property_readonly("n_vertices", &PyGraph::n_vertices)
      .def_property_readonly("n_edges", &PyGraph::n_edges)
      .def_property_readonly("component_count", &PyGraph::component_count)
      .def("first_betti", &PyGraph::betti, "first Betti number per component")
      .def("bipartite_loop_free", &PyGraph::bipartite_loop_free);

  m.def("solve", &solve_py, py::arg("graph"), py::arg("problems"), py::arg("threads") = 1,
        py::arg("max_enumerate") = 64,
        "Solve constraint lists (dicts edge -> (color, color)) over one graph");
  m.def("count_d", &count_d_py, py::arg("graph"), py::arg("problem"),
        "Number of two-solution components by the structural characterization");
  m.def("brute_force", &brute_force_py, py::arg("graph"), py::arg("problem"), py::arg("colors"),
        "Exhaustive reference solver for small instances");

  m.def("simulate", &simulate_py, py::arg("config"), py::arg("out_dir") = "",
        "Generate a family truth set from key=value config text");
  m.def("phase", &phase_py, py::arg("ped"), py::arg("ibd"), py::arg("geno"),
        py::arg("out_dir") = "", py::arg("lo") = 0, py::arg("hi") = 0,
        py::arg("x_chromosome") = false, py::arg("threads") = 1, py::arg("h_min") = 4,
        py::arg("drop_individuals") = std::vector<std::string>{},
        "Phase a recombination-free marker range from pipeline files");
  m.def("check_ibd", &check_ibd_py, py::arg("ped"), py::arg("ibd"), py::arg("geno"),
        py::arg("lo") = 0, py::arg("hi") = 0, py::arg("x_chromosome") = false,
        py::arg("threads") = 1, py::arg("suspect_cutoff") = 0.10,
        py::arg("inconsistent_cutoff") = 0.25, "Score IBD consistency against genotypes");
  m.def("localize", &localize_py, py::arg("ped"), py::arg("ibd_left"), py::arg("ibd_right"),
        py::arg("geno"), py::arg("lo") = 0, py::arg("hi") = 0, py::arg("x_chromosome") = false,
        py::arg("policy") = "strict", py::arg("window") = 20, py::arg("tau") = 0.3,
        py::arg("threads") = 1, "Bracket one recombination event between two flanking IBDs");
}
