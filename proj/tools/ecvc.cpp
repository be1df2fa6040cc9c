#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "ecvc/localize.hpp"
#include "ecvc/phase.hpp"
#include "ecvc/sim.hpp"
#include "ecvc/solve_io.hpp"

namespace fs = std::filesystem;
using namespace ecvc;

namespace {

int default_threads() {
  if (const char* env = std::getenv("ECVC_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot read " + path);
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  return out;
}

struct RangeOpt {
  std::string text;

  // 1-based inclusive A:B -> 0-based rows
  std::pair<int, int> resolve(int n_markers) const {
    if (text.empty()) return {0, n_markers - 1};
    size_t colon = text.find(':');
    int a = 0, b = 0;
    try {
      a = std::stoi(text.substr(0, colon));
      b = colon == std::string::npos ? a : std::stoi(text.substr(colon + 1));
    } catch (...) {
      fail(Errc::InvalidArgument, "bad --range, expected A:B");
    }
    if (a < 1 || b < a || b > n_markers)
      fail(Errc::InvalidArgument, "empty or out-of-bounds marker range " + text);
    return {a - 1, b - 1};
  }
};

GenotypeMatrix load_genotypes(const std::string& geno, const std::string& vcf) {
  if (geno.empty() == vcf.empty())
    fail(Errc::InvalidArgument, "give exactly one of --geno or --vcf");
  if (!geno.empty()) {
    auto in = open_input(geno);
    return read_genotypes_tsv(in);
  }
  auto in = open_input(vcf);
  return read_vcf(in);
}

ChromKind chrom_kind_for(const GenotypeMatrix& gm, int lo, int hi, const std::string& forced) {
  if (forced == "autosome") return ChromKind::Autosome;
  if (forced == "x") return ChromKind::X;
  for (int k = lo; k < hi; ++k)
    if (gm.markers[k].chrom != gm.markers[hi].chrom)
      fail(Errc::InvalidArgument, "marker range spans more than one chromosome");
  const std::string& c = gm.markers[lo].chrom;
  return (c == "X" || c == "x" || c == "chrX") ? ChromKind::X : ChromKind::Autosome;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch edge-constrained coloring solver and pedigree haplotype toolkit"};
  app.require_subcommand(1);

  int threads = default_threads();
  std::string out_dir = ".";
  RangeOpt range;
  app.add_option("--threads", threads, "concurrent marker batches")->capture_default_str();
  app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  app.add_option("--range", range.text, "1-based inclusive marker range A:B");

  // solve
  auto* cmd_solve = app.add_subcommand("solve", "solve constraint lists over a graph file");
  std::string graph_path, constraints_path;
  cmd_solve->add_option("graph", graph_path, "graph file")->required();
  cmd_solve->add_option("constraints", constraints_path, "constraint list file")->required();
  bool solve_to_file = false;
  cmd_solve->add_flag("--to-file", solve_to_file, "write <out-dir>/solutions.txt instead of stdout");

  // shared pipeline inputs
  std::string ped_path, ibd_path, geno_path, vcf_path, chrom_kind_flag = "auto";
  auto add_pipeline_inputs = [&](CLI::App* cmd, bool with_ibd = true) {
    cmd->add_option("--ped", ped_path, "pedigree file")->required();
    if (with_ibd) cmd->add_option("--ibd", ibd_path, "IBD segment file")->required();
    cmd->add_option("--geno", geno_path, "genotype matrix file");
    cmd->add_option("--vcf", vcf_path, "VCF file (GT field)");
    cmd->add_option("--chrom-kind", chrom_kind_flag, "autosome|x|auto")->capture_default_str();
  };

  // phase
  auto* cmd_phase = app.add_subcommand("phase", "reconstruct haplotypes on a recombination-free range");
  add_pipeline_inputs(cmd_phase);
  int h_min = 4;
  bool no_impute = false;
  std::vector<std::string> drops;
  cmd_phase->add_option("--h-min", h_min, "excess-heterozygosity component size")->capture_default_str();
  cmd_phase->add_option("--drop-individual", drops, "treat an individual as unsequenced");
  cmd_phase->add_flag("--no-impute", no_impute, "skip imputation output");

  // check-ibd
  auto* cmd_check = app.add_subcommand("check-ibd", "score IBD consistency against genotypes");
  add_pipeline_inputs(cmd_check);
  double suspect_cutoff = 0.10, inconsistent_cutoff = 0.25;
  cmd_check->add_option("--suspect-cutoff", suspect_cutoff)->capture_default_str();
  cmd_check->add_option("--inconsistent-cutoff", inconsistent_cutoff)->capture_default_str();

  // localize
  auto* cmd_localize = app.add_subcommand("localize", "bracket one recombination event");
  std::string ibd_left_path, ibd_right_path, policy = "strict";
  int window = 20;
  double tau = 0.3;
  bool trace = false;
  add_pipeline_inputs(cmd_localize, false);
  cmd_localize->add_option("--ibd-left", ibd_left_path, "IBD at the left end")->required();
  cmd_localize->add_option("--ibd-right", ibd_right_path, "IBD at the right end")->required();
  cmd_localize->add_option("--policy", policy, "strict|windowed")->capture_default_str();
  cmd_localize->add_option("--window", window)->capture_default_str();
  cmd_localize->add_option("--tau", tau)->capture_default_str();
  cmd_localize->add_flag("--trace", trace, "also write a per-marker trace file");

  // simulate
  auto* cmd_sim = app.add_subcommand("simulate", "generate a family truth set");
  std::string config_path;
  cmd_sim->add_option("--config", config_path, "simulation config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    fs::path out(out_dir);

    if (*cmd_solve) {
      auto gin = open_input(graph_path);
      Multigraph g = read_graph_text(gin);
      auto cin_ = open_input(constraints_path);
      SolveBatch batch = read_constraints_text(cin_, g);
      ForestPlan plan = ForestPlan::build(std::move(g));
      SolveOptions sopts;
      sopts.threads = threads;
      std::vector<SolutionSet> sets = solve_many(plan, batch.lists, sopts);
      if (solve_to_file) {
        fs::create_directories(out);
        auto f = open_output(out / "solutions.txt");
        write_solutions_text(f, plan, batch.lists, sets, batch.colors.names);
      } else {
        write_solutions_text(std::cout, plan, batch.lists, sets, batch.colors.names);
      }
      return 0;
    }

    if (*cmd_phase || *cmd_check) {
      auto pin = open_input(ped_path);
      Pedigree ped = read_pedigree_tsv(pin);
      auto iin = open_input(ibd_path);
      IbdTable ibd_table = read_ibd_tsv(iin);
      GenotypeMatrix gm = load_genotypes(geno_path, vcf_path);
      auto [lo, hi] = range.resolve(gm.n_markers());
      ChromKind kind = chrom_kind_for(gm, lo, hi, chrom_kind_flag);
      IBDStructure ibd = ibd_for_range(ibd_table, gm.markers[lo].chrom, lo + 1, hi + 1);

      if (*cmd_check) {
        CheckIbdOptions copts;
        copts.phase.threads = threads;
        copts.suspect_cutoff = suspect_cutoff;
        copts.inconsistent_cutoff = inconsistent_cutoff;
        IbdConsistencyReport rep = check_ibd(ped, ibd, gm, lo, hi, kind, copts);
        fs::create_directories(out);
        auto f = open_output(out / "ibd_report.tsv");
        write_ibd_report_tsv(f, rep);
        std::cout << "verdict=" << to_string(rep.verdict) << " rate_het=" << rep.rate_het
                  << " rate_all=" << rep.rate_all << " het_markers=" << rep.het_markers << "\n";
        switch (rep.verdict) {
          case Verdict::Consistent: return 0;
          case Verdict::Suspect: return 3;
          case Verdict::Inconsistent: return 4;
        }
      }

      PhaseOptions popts;
      popts.threads = threads;
      popts.h_min = h_min;
      popts.drop_individuals = drops;
      popts.impute = !no_impute;
      PhasedInterval ph = phase_interval(ped, ibd, gm, lo, hi, kind, popts);
      fs::create_directories(out);
      {
        auto f = open_output(out / "haplotypes.tsv");
        write_haplotypes_tsv(f, ph, gm);
      }
      {
        auto f = open_output(out / "marker_report.tsv");
        write_marker_report_tsv(f, ph, gm);
      }
      if (popts.impute) {
        auto f = open_output(out / "imputed.tsv");
        write_imputations_tsv(f, ph, gm);
      }
      std::cout << "markers=" << (hi - lo + 1) << " solved=" << ph.n_solved
                << " ambiguous=" << ph.n_ambiguous << " error=" << ph.n_error
                << " all_missing=" << ph.n_all_missing << "\n";
      return 0;
    }

    if (*cmd_localize) {
      auto pin = open_input(ped_path);
      Pedigree ped = read_pedigree_tsv(pin);
      auto lin = open_input(ibd_left_path);
      IbdTable left_table = read_ibd_tsv(lin);
      auto rin = open_input(ibd_right_path);
      IbdTable right_table = read_ibd_tsv(rin);
      GenotypeMatrix gm = load_genotypes(geno_path, vcf_path);
      auto [lo, hi] = range.resolve(gm.n_markers());
      ChromKind kind = chrom_kind_for(gm, lo, hi, chrom_kind_flag);
      IBDStructure ibd_left = ibd_for_range(left_table, gm.markers[lo].chrom, lo + 1, lo + 1);
      IBDStructure ibd_right = ibd_for_range(right_table, gm.markers[hi].chrom, hi + 1, hi + 1);
      // The flanking structures must hold across the whole scanned range.
      ibd_left.start_idx = ibd_right.start_idx = lo + 1;
      ibd_left.end_idx = ibd_right.end_idx = hi + 1;

      LocalizeOptions lopts;
      lopts.phase.threads = threads;
      lopts.window = window;
      lopts.tau = tau;
      if (policy == "strict") lopts.policy = LocalizePolicy::Strict;
      else if (policy == "windowed") lopts.policy = LocalizePolicy::Windowed;
      else fail(Errc::InvalidArgument, "policy must be strict or windowed");

      LocalizationResult res = localize_single(ped, ibd_left, ibd_right, gm, lo, hi, kind, lopts);
      fs::create_directories(out);
      {
        auto f = open_output(out / "localization.tsv");
        write_localization_tsv(f, {res}, gm);
      }
      if (trace) {
        auto f = open_output(out / "localize_trace.tsv");
        write_trace_tsv(f, res, gm);
      }
      if (res.localizable)
        std::cout << "status=localized a=" << gm.markers[res.a].id << " b=" << gm.markers[res.b].id
                  << " E=" << res.ambiguity.size() << "\n";
      else
        std::cout << "status=not_localizable\n";
      return 0;
    }

    if (*cmd_sim) {
      auto cin_ = open_input(config_path);
      SimConfig cfg = parse_sim_config(cin_);
      TruthSet ts = simulate(cfg);
      export_truth(ts, out);
      std::cout << "individuals=" << ts.ped.members.size() << " markers=" << cfg.n_markers
                << " errors=" << ts.errors.size() << " missing=" << ts.missing_log.size() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
