#pragma once

#include <string>
#include <vector>

#include "ecvc/phase.hpp"

namespace ecvc {

enum class LocalizePolicy : uint8_t { Strict, Windowed };

struct LocalizeOptions {
  LocalizePolicy policy = LocalizePolicy::Strict;
  int window = 20;   // windowed policy: failure-frequency window
  double tau = 0.3;  // windowed policy: frequency threshold
  PhaseOptions phase;
};

/// Per-marker view of the dual solve; sides are the graphs built from the
/// flanking IBD structures.
struct MarkerTrace {
  MarkerStatus status_left, status_right;
  bool fail_left = false, fail_right = false;
  bool in_ambiguity = false;
};

enum class AssignSide : uint8_t { Left, Right, Common, Undetermined };

struct LocalizationResult {
  bool localizable = false;
  int a = -1; // 0-based marker rows; crossover lies strictly between a and b
  int b = -1;
  int lo = 0, hi = 0;
  std::vector<int> ambiguity;    // marker rows within (a, b)
  std::vector<MarkerTrace> traces;
  std::vector<AssignSide> side;  // haplotype read-off choice per marker
  PhasedInterval left, right;
  std::vector<std::string> shared_labels;
  std::string event_id = "single";
  std::string strategy = "single";
};

/// Dual-graph scan: solve every marker on the left-flank and right-flank
/// graphs; the left graph starts failing after the crossover and the right
/// graph stops failing before it, bracketing the event between rows a and b.
LocalizationResult localize_single(const Pedigree& ped, const IBDStructure& ibd_left,
                                   const IBDStructure& ibd_right, const GenotypeMatrix& gm,
                                   int lo, int hi, ChromKind kind,
                                   const LocalizeOptions& opts = {});

/// Rows in (a, b) where solution status or the coloring restricted to the
/// shared vertices differs between the two graphs.
std::vector<int> ambiguity_set(const PhasedInterval& left, const PhasedInterval& right,
                               const std::vector<std::string>& shared_labels, int a, int b);

struct SuspectedEvent {
  std::string id;
  IBDStructure ibd_left, ibd_right;
  int hint = -1;                      // approximate marker row of the crossover
  std::vector<std::string> affected;  // recombinant plus descendants carrying it
};

enum class MultiStrategy : uint8_t { Partition, EdgeRemoval, Hybrid };

/// Multi-event orchestration: partition the range around the hints
/// (Partition), temporarily unsequence other events' carriers (EdgeRemoval),
/// or both (Hybrid); every event is then re-localized on its own subinterval
/// with all subjects restored.
std::vector<LocalizationResult> orchestrate_multi(const Pedigree& ped,
                                                  const std::vector<SuspectedEvent>& events,
                                                  const GenotypeMatrix& gm, int lo, int hi,
                                                  ChromKind kind, MultiStrategy strategy,
                                                  const LocalizeOptions& opts = {});

void write_localization_tsv(std::ostream& out, const std::vector<LocalizationResult>& results,
                            const GenotypeMatrix& gm);
void write_trace_tsv(std::ostream& out, const LocalizationResult& r, const GenotypeMatrix& gm);

} // namespace ecvc
