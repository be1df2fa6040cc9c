#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "ecvc/graph.hpp"
#include "ecvc/solver.hpp"

namespace ecvc {

enum class Sex : uint8_t { Unknown = 0, XY = 1, XX = 2 };
enum class ChromKind : uint8_t { Autosome, X };

struct Individual {
  std::string id;
  Sex sex = Sex::Unknown;
  std::string father; // empty = none
  std::string mother;
  bool sequenced = false;
};

struct Pedigree {
  std::string family_id;
  std::vector<Individual> members;
  std::unordered_map<std::string, int> index;

  int find(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? -1 : it->second;
  }
  bool is_founder(int i) const { return members[i].father.empty(); }
  void validate() const; // parents present, both-or-neither, acyclic
};

/// Tab-separated: family_id individual_id father_id mother_id sex sequenced
/// with `0` for a missing parent, sex 1=XY 2=XX 0=unknown.
Pedigree read_pedigree_tsv(std::istream& in);
void write_pedigree_tsv(std::ostream& out, const Pedigree& p);

/// One haplotype-label pair; pat is empty for XY individuals on the X.
struct HapPair {
  std::string pat;
  std::string mat;
};

struct IbdSegment {
  std::string individual;
  std::string chrom;
  int start_idx = 0; // 1-based marker indices, inclusive
  int end_idx = 0;
  std::string pat; // "-" in files maps to empty
  std::string mat;
};

struct IbdTable {
  std::vector<IbdSegment> rows;
};

IbdTable read_ibd_tsv(std::istream& in);
void write_ibd_tsv(std::ostream& out, const IbdTable& t);

/// The constant IBD over one recombination-free marker interval.
struct IBDStructure {
  std::string chrom;
  int start_idx = 0;
  int end_idx = 0;
  std::vector<std::string> individuals; // table order
  std::vector<HapPair> haps;
  std::unordered_map<std::string, int> index;

  const HapPair* find(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? nullptr : &haps[it->second];
  }
  bool operator==(const IBDStructure& o) const {
    return individuals == o.individuals &&
           [&] {
             for (size_t i = 0; i < haps.size(); ++i)
               if (haps[i].pat != o.haps[i].pat || haps[i].mat != o.haps[i].mat) return false;
             return true;
           }();
  }
};

/// Extracts the IBD covering [lo, hi] (1-based, inclusive); every individual
/// in the table must carry one covering segment for the whole range.
IBDStructure ibd_for_range(const IbdTable& t, const std::string& chrom, int lo, int hi);

struct AlleleTable {
  std::vector<std::string> names;
  std::unordered_map<std::string, int32_t> index;

  int32_t intern(const std::string& name) {
    auto [it, fresh] = index.emplace(name, static_cast<int32_t>(names.size()));
    if (fresh) names.push_back(name);
    return it->second;
  }
};

struct Genotype {
  int32_t a1 = -1;
  int32_t a2 = -1;
  bool missing() const { return a1 < 0; }
  bool het() const { return !missing() && a1 != a2; }
};

struct MarkerInfo {
  std::string id;
  std::string chrom;
  long long pos = 0;
};

/// Genotypes for a set of sequenced individuals; alleles interned so colors
/// are matrix-wide dense ids.
struct GenotypeMatrix {
  std::vector<MarkerInfo> markers;
  std::vector<std::string> individuals;
  std::unordered_map<std::string, int> ind_index;
  AlleleTable alleles;
  std::vector<Genotype> cells; // row-major, markers x individuals

  int n_markers() const { return static_cast<int>(markers.size()); }
  int n_individuals() const { return static_cast<int>(individuals.size()); }
  Genotype at(int k, int ind) const { return cells[static_cast<size_t>(k) * individuals.size() + ind]; }
  Genotype& at(int k, int ind) { return cells[static_cast<size_t>(k) * individuals.size() + ind]; }
  int column(const std::string& id) const {
    auto it = ind_index.find(id);
    return it == ind_index.end() ? -1 : it->second;
  }
  void validate() const; // positions strictly increasing per chromosome
};

/// Tab-separated with a header row: marker_id chrom position <ind>...; cells
/// are `a1/a2` or `./.` (a half-missing `a/.` is treated as missing).
GenotypeMatrix read_genotypes_tsv(std::istream& in);
void write_genotypes_tsv(std::ostream& out, const GenotypeMatrix& gm);

/// Minimal VCF ingestion: CHROM/POS/ID/REF/ALT plus the GT field per sample.
GenotypeMatrix read_vcf(std::istream& in);

/// One vertex per haplotype label among sequenced individuals, one edge per
/// sequenced individual; XY individuals become self-loops on the X.
Multigraph build_marker_graph(const IBDStructure& ibd, const Pedigree& ped, ChromKind kind);

struct MarkerConstraints {
  ConstraintList by_edge;        // invalid pair where missing
  std::vector<int> missing_edges;
};

/// Edge constraints for marker k (0-based row of gm): each non-missing
/// individual's genotype; colors are gm allele ids.
MarkerConstraints constraints_at_marker(const Multigraph& g, const GenotypeMatrix& gm, int k);

struct MissingnessGroup {
  std::vector<int> missing_columns; // sorted gm column indices
  std::vector<int> marker_indices;  // 0-based rows sharing the pattern
};

/// Markers of [lo, hi] (0-based, inclusive) grouped by identical
/// missing-individual sets; single pass.
std::vector<MissingnessGroup> missingness_partition(const GenotypeMatrix& gm, int lo, int hi);

struct SubgraphPlan {
  ForestPlan plan;
  std::vector<int> edge_to_parent;   // subgraph edge -> parent edge id
  std::vector<int> vertex_to_parent; // subgraph vertex -> parent vertex id
};

/// Deletes the named individuals' edges and any vertex left isolated, then
/// plans the remainder once for all markers sharing the pattern.
SubgraphPlan subgraph_for_pattern(const Multigraph& g,
                                  const std::vector<std::string>& missing_individuals);

} // namespace ecvc
