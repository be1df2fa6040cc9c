#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ecvc/pedigree.hpp"
#include "ecvc/solver.hpp"

namespace ecvc {

enum class MarkerStatus : uint8_t { Solved, Ambiguous, Error, AllMissing };

const char* to_string(MarkerStatus s);

/// Per-marker phasing verdict. `assignment` is aligned with the full marker
/// graph's vertices and only carries colors from Unique components; Ambiguous
/// and None components never contribute a guess.
struct MarkerResult {
  int k = -1; // 0-based row in the genotype matrix
  MarkerStatus status = MarkerStatus::AllMissing;
  std::vector<Color> assignment;        // full-graph vertex -> allele id or kNoColor
  std::vector<int> ambiguous_components; // component ids within the pattern subgraph
  std::vector<std::string> tags;        // diagnostics when status == Error
  bool excess_het = false;
  int pattern = -1;                     // index into PhasedInterval::patterns
  int n_unique = 0, n_two = 0, n_none = 0;
};

struct ImputedGenotype {
  std::string individual;
  int32_t a1, a2;
};
struct ImputedHaplotype {
  std::string individual;
  char side; // 'p' or 'm'
  int32_t allele;
};
struct Imputation {
  std::vector<ImputedGenotype> genotypes;
  std::vector<ImputedHaplotype> haplotypes;
};

struct PatternInfo {
  std::vector<std::string> missing_individuals; // edges absent at these markers
  std::shared_ptr<SubgraphPlan> sub;            // null when every edge is missing
};

struct PhasedInterval {
  int lo = 0, hi = 0; // 0-based marker rows, inclusive
  Multigraph graph;   // full marker graph
  std::vector<MarkerResult> results;
  std::vector<PatternInfo> patterns;
  std::vector<std::vector<int32_t>> hap_seq; // vertex x marker, allele id or -1 (Solved markers only)
  std::vector<std::pair<int, Imputation>> imputations; // (marker row, imputed values)
  std::vector<std::string> allele_names;
  int n_solved = 0, n_ambiguous = 0, n_error = 0, n_all_missing = 0;
};

struct PhaseOptions {
  int threads = 1;
  int h_min = 4; // Two-component edge count that flags excess heterozygosity
  std::vector<std::string> drop_individuals;
  bool impute = true;
};

/// Classification shared by phasing and reporting: Solved iff every component
/// is Unique, Error iff any is None, Ambiguous otherwise; the excess-het flag
/// fires when a Two component spans >= h_min edges.
MarkerStatus classify_status(const SolutionSet& s, const std::vector<int>& comp_edge_counts,
                             int h_min, bool* excess_het, std::vector<int>* ambiguous_comps);

/// Batch phasing of one recombination-free interval: builds the marker graph,
/// partitions markers by missingness, solves each pattern group on its shared
/// plan and classifies every marker. [lo, hi] are 0-based rows of gm.
PhasedInterval phase_interval(const Pedigree& ped, const IBDStructure& ibd,
                              const GenotypeMatrix& gm, int lo, int hi, ChromKind kind,
                              const PhaseOptions& opts = {});

/// Read-off imputation at one Solved/Ambiguous marker for individuals with
/// known IBD labels but no genotype: both labels colored -> genotype, one
/// label colored -> that haplotype allele.
Imputation impute_marker(const MarkerResult& r, const Multigraph& full_graph,
                         const Pedigree& ped, const IBDStructure& ibd, ChromKind kind,
                         const std::vector<std::string>& missing_individuals);

enum class Verdict : uint8_t { Consistent, Suspect, Inconsistent };
const char* to_string(Verdict v);

struct IbdConsistencyReport {
  int markers = 0;
  int failed = 0;
  int het_markers = 0;
  int het_failed = 0;
  double rate_all = 0.0;
  double rate_het = 0.0;
  std::vector<int> component_betti; // full marker graph
  Verdict verdict = Verdict::Consistent;
};

struct CheckIbdOptions {
  PhaseOptions phase;
  double suspect_cutoff = 0.10;
  double inconsistent_cutoff = 0.25;
};

/// Phases the range and scores the no-solution rate over markers with at
/// least one heterozygous genotype; a misspecified IBD edge pushes that rate
/// far above sequencing error levels.
IbdConsistencyReport check_ibd(const Pedigree& ped, const IBDStructure& ibd,
                               const GenotypeMatrix& gm, int lo, int hi, ChromKind kind,
                               const CheckIbdOptions& opts = {});

void write_haplotypes_tsv(std::ostream& out, const PhasedInterval& ph, const GenotypeMatrix& gm);
void write_marker_report_tsv(std::ostream& out, const PhasedInterval& ph, const GenotypeMatrix& gm);
void write_imputations_tsv(std::ostream& out, const PhasedInterval& ph, const GenotypeMatrix& gm);
void write_ibd_report_tsv(std::ostream& out, const IbdConsistencyReport& rep);

} // namespace ecvc
