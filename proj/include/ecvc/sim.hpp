#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ecvc/pedigree.hpp"

namespace ecvc {

struct CrossoverSpec {
  std::string child;
  char side = 'p';  // p = gamete from the father, m = from the mother
  int after = 0;    // 1-based: crossover between markers after and after+1
};

struct SimConfig {
  std::string pedigree_kind = "trio"; // trio | nuclear | threegen
  int children = 1;                   // nuclear sibship size
  int g2_children = 2;                // threegen: second-generation sibship
  int g3_children = 2;                // threegen: children per gen-2 couple
  std::vector<std::string> unsequenced;

  int n_markers = 100;
  std::string chrom = "1";
  ChromKind chrom_kind = ChromKind::Autosome;
  long long pos_start = 1000;
  long long pos_step = 1000;

  std::vector<std::string> allele_symbols = {"A", "G"};
  std::vector<double> allele_freqs; // optional; default maf / uniform
  double maf = 0.5;

  std::vector<CrossoverSpec> crossovers;
  double crossover_rate = 0.0; // expected crossovers per meiosis

  double error_rate = 0.0;
  double missing_rate = 0.0;
  uint64_t seed = 1;
  bool emit_truth = false;
};

/// `key = value` text, `#` comments; `crossover` and `unsequenced` repeatable.
SimConfig parse_sim_config(std::istream& in);

/// Piecewise-constant founder-haplotype composition of one inherited
/// chromosome copy: (start row, founder haplotype id) segments.
struct HapMosaic {
  std::vector<std::pair<int, int>> segs;
  bool absent() const { return segs.empty(); }
  int label_at(int k) const;
};

struct TruthSet {
  SimConfig cfg;
  Pedigree ped;
  AlleleTable alleles;
  std::vector<std::string> hap_labels;            // founder haplotypes
  std::vector<std::vector<int32_t>> hap_alleles;  // haplotype x marker
  std::vector<std::array<HapMosaic, 2>> inherit;  // per individual: [pat, mat]
  GenotypeMatrix clean;    // every individual, no noise
  GenotypeMatrix observed; // sequenced individuals, errors and missingness applied
  std::vector<IbdSegment> ibd_rows; // one row per individual per recombination-free segment
  std::vector<CrossoverSpec> realized; // explicit plus rate-drawn crossovers

  struct ErrorLogEntry {
    int k;
    std::string individual;
    int32_t from, to;
  };
  std::vector<ErrorLogEntry> errors;
  std::vector<std::pair<int, std::string>> missing_log;

  /// Founder haplotype id carried by individual `ind` on `side` at row k,
  /// or -1 when that side is absent.
  int hap_label_at(int ind, int side, int k) const;
  IbdTable ibd_table() const { return IbdTable{ibd_rows}; }
};

/// Gene dropping under the config: founder haplotypes drawn from the allele
/// model, gametes as parental mosaics switching at the crossover points,
/// then observation noise. Deterministic under the seed.
TruthSet simulate(const SimConfig& cfg);

/// Writes pedigree.tsv, ibd.tsv and genotypes.tsv (plus truth_* files when
/// cfg.emit_truth) into dir; outputs round-trip through the parsers.
void export_truth(const TruthSet& ts, const std::filesystem::path& dir);

} // namespace ecvc
