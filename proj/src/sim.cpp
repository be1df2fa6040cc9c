#include "ecvc/sim.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>

namespace ecvc {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

} // namespace

SimConfig parse_sim_config(std::istream& in) {
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail(Errc::ParseError, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    try {
      if (key == "pedigree") cfg.pedigree_kind = val;
      else if (key == "children") cfg.children = std::stoi(val);
      else if (key == "g2_children") cfg.g2_children = std::stoi(val);
      else if (key == "g3_children") cfg.g3_children = std::stoi(val);
      else if (key == "unsequenced")
        for (auto& id : split_list(val)) cfg.unsequenced.push_back(id);
      else if (key == "markers") cfg.n_markers = std::stoi(val);
      else if (key == "chrom") cfg.chrom = val;
      else if (key == "chrom_kind") {
        if (val == "autosome") cfg.chrom_kind = ChromKind::Autosome;
        else if (val == "x" || val == "X") cfg.chrom_kind = ChromKind::X;
        else fail(Errc::ParseError, "chrom_kind must be autosome or x");
      } else if (key == "pos_start") cfg.pos_start = std::stoll(val);
      else if (key == "pos_step") cfg.pos_step = std::stoll(val);
      else if (key == "alleles") cfg.allele_symbols = split_list(val);
      else if (key == "allele_freqs") {
        cfg.allele_freqs.clear();
        for (auto& f : split_list(val)) cfg.allele_freqs.push_back(std::stod(f));
      } else if (key == "maf") cfg.maf = std::stod(val);
      else if (key == "crossover") {
        auto parts = split_list(val);
        std::string spec = parts.size() == 1 ? parts[0] : val;
        size_t c1 = spec.find(':'), c2 = spec.rfind(':');
        if (c1 == std::string::npos || c2 == c1)
          fail(Errc::ParseError, "crossover must be child:side:after");
        CrossoverSpec xo;
        xo.child = spec.substr(0, c1);
        std::string side = spec.substr(c1 + 1, c2 - c1 - 1);
        if (side != "p" && side != "m") fail(Errc::ParseError, "crossover side must be p or m");
        xo.side = side[0];
        xo.after = std::stoi(spec.substr(c2 + 1));
        cfg.crossovers.push_back(xo);
      } else if (key == "crossover_rate") cfg.crossover_rate = std::stod(val);
      else if (key == "error_rate") cfg.error_rate = std::stod(val);
      else if (key == "missing_rate") cfg.missing_rate = std::stod(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "truth") cfg.emit_truth = val == "1" || val == "true";
      else fail(Errc::ParseError, "unknown config key `" + key + "`");
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail(Errc::ParseError, "config line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  return cfg;
}

int HapMosaic::label_at(int k) const {
  if (segs.empty()) return -1;
  auto it = std::upper_bound(segs.begin(), segs.end(), std::make_pair(k, INT32_MAX));
  return std::prev(it)->second;
}

int TruthSet::hap_label_at(int ind, int side, int k) const {
  return inherit[ind][side].label_at(k);
}

namespace {

Pedigree make_pedigree(const SimConfig& cfg) {
  Pedigree ped;
  ped.family_id = "FAM1";
  auto add = [&](const std::string& id, Sex sex, const std::string& fa, const std::string& mo) {
    Individual m;
    m.id = id;
    m.sex = sex;
    m.father = fa;
    m.mother = mo;
    m.sequenced = true;
    ped.index.emplace(id, static_cast<int>(ped.members.size()));
    ped.members.push_back(std::move(m));
  };
  auto child_sex = [](int i) { return i % 2 == 1 ? Sex::XY : Sex::XX; }; // 1-based, sons first

  if (cfg.pedigree_kind == "trio" || cfg.pedigree_kind == "nuclear") {
    int s = cfg.pedigree_kind == "trio" ? 1 : cfg.children;
    if (s < 1) fail(Errc::InvalidArgument, "children must be at least 1");
    add("F1", Sex::XY, "", "");
    add("M1", Sex::XX, "", "");
    for (int i = 1; i <= s; ++i) add("C" + std::to_string(i), child_sex(i), "F1", "M1");
  } else if (cfg.pedigree_kind == "threegen") {
    if (cfg.g2_children < 1 || cfg.g3_children < 0)
      fail(Errc::InvalidArgument, "bad threegen sibship sizes");
    add("F1", Sex::XY, "", "");
    add("M1", Sex::XX, "", "");
    for (int i = 1; i <= cfg.g2_children; ++i) {
      std::string p = "P" + std::to_string(i);
      std::string s = "S" + std::to_string(i);
      Sex psex = child_sex(i);
      add(p, psex, "F1", "M1");
      add(s, psex == Sex::XY ? Sex::XX : Sex::XY, "", "");
      for (int j = 1; j <= cfg.g3_children; ++j) {
        std::string c = "C" + std::to_string(i) + "_" + std::to_string(j);
        bool p_is_father = psex == Sex::XY;
        add(c, child_sex(j), p_is_father ? p : s, p_is_father ? s : p);
      }
    }
  } else {
    fail(Errc::InvalidArgument, "unknown pedigree kind `" + cfg.pedigree_kind + "`");
  }
  for (const std::string& id : cfg.unsequenced) {
    int i = ped.find(id);
    if (i < 0) fail(Errc::InvalidArgument, "unsequenced lists unknown individual " + id);
    ped.members[i].sequenced = false;
  }
  return ped;
}

// Copy the parent's mosaics chunk-by-chunk, alternating sides at each
// crossover boundary (0-based rows).
HapMosaic make_gamete(const std::array<HapMosaic, 2>& parent, std::vector<int> boundaries,
                      int start_side, int n) {
  HapMosaic out;
  boundaries.push_back(n);
  int side = start_side, lo = 0;
  for (int b : boundaries) {
    const auto& segs = parent[side].segs;
    auto it = std::upper_bound(segs.begin(), segs.end(), std::make_pair(lo, INT32_MAX));
    for (size_t i = static_cast<size_t>(it - segs.begin()) - 1; i < segs.size(); ++i) {
      if (segs[i].first >= b) break;
      int s = std::max(lo, segs[i].first);
      if (out.segs.empty() || out.segs.back().second != segs[i].second)
        out.segs.emplace_back(s, segs[i].second);
    }
    lo = b;
    side ^= 1;
    if (lo >= n) break;
  }
  return out;
}

} // namespace

TruthSet simulate(const SimConfig& cfg) {
  for (double rate : {cfg.error_rate, cfg.missing_rate, cfg.maf})
    if (rate < 0.0 || rate > 1.0) fail(Errc::InvalidArgument, "rates must lie in [0, 1]");
  if (cfg.crossover_rate < 0.0) fail(Errc::InvalidArgument, "crossover_rate must be >= 0");
  if (cfg.n_markers < 1) fail(Errc::InvalidArgument, "markers must be >= 1");
  if (cfg.allele_symbols.empty()) fail(Errc::InvalidArgument, "allele list is empty");
  if (!cfg.allele_freqs.empty() && cfg.allele_freqs.size() != cfg.allele_symbols.size())
    fail(Errc::InvalidArgument, "allele_freqs length must match alleles");

  TruthSet ts;
  ts.cfg = cfg;
  ts.ped = make_pedigree(cfg);
  const Pedigree& ped = ts.ped;
  const int n = cfg.n_markers;
  const int ni = static_cast<int>(ped.members.size());
  const bool x_mode = cfg.chrom_kind == ChromKind::X;

  std::mt19937_64 rng(cfg.seed);

  // Allele model.
  std::vector<double> freqs = cfg.allele_freqs;
  if (freqs.empty()) {
    if (cfg.allele_symbols.size() == 2) freqs = {cfg.maf, 1.0 - cfg.maf};
    else freqs.assign(cfg.allele_symbols.size(), 1.0 / cfg.allele_symbols.size());
  }
  for (const std::string& s : cfg.allele_symbols) ts.alleles.intern(s);
  std::discrete_distribution<int> allele_dist(freqs.begin(), freqs.end());

  // Founder haplotypes.
  std::vector<std::array<int, 2>> hap_of(ni, {-1, -1}); // founder hap ids per side
  auto new_hap = [&](const std::string& label) {
    ts.hap_labels.push_back(label);
    ts.hap_alleles.emplace_back(n);
    auto& seq = ts.hap_alleles.back();
    for (int k = 0; k < n; ++k) seq[k] = allele_dist(rng);
    return static_cast<int>(ts.hap_labels.size()) - 1;
  };
  ts.inherit.resize(ni);
  for (int i = 0; i < ni; ++i) {
    if (!ped.is_founder(i)) continue;
    const Individual& m = ped.members[i];
    if (x_mode && m.sex == Sex::XY) {
      hap_of[i][1] = new_hap(m.id + ".m");
      ts.inherit[i][1].segs = {{0, hap_of[i][1]}};
      continue;
    }
    hap_of[i][0] = new_hap(m.id + ".p");
    hap_of[i][1] = new_hap(m.id + ".m");
    ts.inherit[i][0].segs = {{0, hap_of[i][0]}};
    ts.inherit[i][1].segs = {{0, hap_of[i][1]}};
  }

  // Explicit crossover validation and lookup by (child, side).
  for (const CrossoverSpec& xo : cfg.crossovers) {
    int c = ped.find(xo.child);
    if (c < 0 || ped.is_founder(c))
      fail(Errc::InvalidCrossoverSpec, "crossover child " + xo.child + " is not a non-founder");
    if (xo.after < 1 || xo.after > n - 1)
      fail(Errc::InvalidCrossoverSpec, "crossover interval " + std::to_string(xo.after) +
                                           " outside 1.." + std::to_string(n - 1));
    if (x_mode && xo.side == 'p')
      fail(Errc::InvalidCrossoverSpec,
           "no paternal-meiosis crossover on the X for child " + xo.child);
    if (x_mode && xo.side == 'm' && ped.members[c].sex == Sex::Unknown)
      fail(Errc::SexMissingOnX, "child " + xo.child + " needs a sex for X simulation");
  }

  // Gene dropping in pedigree order (parents precede children by construction).
  std::poisson_distribution<int> n_xo(cfg.crossover_rate);
  for (int i = 0; i < ni; ++i) {
    if (ped.is_founder(i)) continue;
    const Individual& m = ped.members[i];
    int fa = ped.find(m.father), mo = ped.find(m.mother);
    for (int side = 0; side < 2; ++side) { // 0 = gamete from father, 1 = from mother
      int parent = side == 0 ? fa : mo;
      if (x_mode && side == 0) {
        if (m.sex == Sex::XY) continue;           // son: Y from the father, no X
        ts.inherit[i][0] = ts.inherit[parent][1]; // daughter: the father's X, whole
        continue;
      }
      std::vector<int> boundaries;
      for (const CrossoverSpec& xo : cfg.crossovers)
        if (xo.child == m.id && xo.side == (side == 0 ? 'p' : 'm'))
          boundaries.push_back(xo.after); // row index of the first marker after the event
      if (cfg.crossover_rate > 0.0 && n > 1) {
        int extra = n_xo(rng);
        for (int t = 0; t < extra; ++t)
          boundaries.push_back(
              static_cast<int>(std::uniform_int_distribution<int>(1, n - 1)(rng)));
      }
      std::sort(boundaries.begin(), boundaries.end());
      boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());
      for (int b : boundaries)
        ts.realized.push_back({m.id, side == 0 ? 'p' : 'm', b});
      int start = static_cast<int>(rng() & 1);
      ts.inherit[i][side] = make_gamete(ts.inherit[parent], boundaries, start, n);
    }
  }

  // Markers and the clean genotype matrix over every individual.
  auto init_matrix = [&](GenotypeMatrix& gm, bool sequenced_only) {
    for (int k = 0; k < n; ++k)
      gm.markers.push_back(
          {"M" + std::to_string(k + 1), cfg.chrom, cfg.pos_start + k * cfg.pos_step});
    for (const Individual& m : ped.members) {
      if (sequenced_only && !m.sequenced) continue;
      gm.ind_index.emplace(m.id, static_cast<int>(gm.individuals.size()));
      gm.individuals.push_back(m.id);
    }
    gm.alleles = ts.alleles;
    gm.cells.assign(static_cast<size_t>(n) * gm.individuals.size(), Genotype{});
  };
  init_matrix(ts.clean, false);
  init_matrix(ts.observed, true);

  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < ni; ++i) {
      int hp = ts.hap_label_at(i, 0, k);
      int hm = ts.hap_label_at(i, 1, k);
      Genotype g;
      if (hp < 0 && hm < 0) continue;
      int32_t ap = hp >= 0 ? ts.hap_alleles[hp][k] : ts.hap_alleles[hm][k];
      int32_t am = hm >= 0 ? ts.hap_alleles[hm][k] : ap;
      g.a1 = std::min(ap, am);
      g.a2 = std::max(ap, am);
      ts.clean.at(k, ts.clean.column(ped.members[i].id)) = g;
    }
  }

  // Observation: missingness first, then allele errors on observed cells.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n_alleles = static_cast<int>(cfg.allele_symbols.size());
  for (int k = 0; k < n; ++k) {
    for (int c = 0; c < ts.observed.n_individuals(); ++c) {
      const std::string& id = ts.observed.individuals[c];
      Genotype g = ts.clean.at(k, ts.clean.column(id));
      if (g.missing()) continue; // no X copy to observe is left unset
      if (cfg.missing_rate > 0.0 && unit(rng) < cfg.missing_rate) {
        ts.missing_log.emplace_back(k, id);
        continue;
      }
      if (cfg.error_rate > 0.0 && n_alleles > 1 && unit(rng) < cfg.error_rate) {
        int slot = static_cast<int>(rng() & 1);
        int32_t old_allele = slot == 0 ? g.a1 : g.a2;
        int32_t repl = static_cast<int32_t>(
            std::uniform_int_distribution<int>(0, n_alleles - 2)(rng));
        if (repl >= old_allele) ++repl;
        if (slot == 0) g.a1 = repl;
        else g.a2 = repl;
        if (g.a1 > g.a2) std::swap(g.a1, g.a2);
        ts.errors.push_back({k, id, old_allele, repl});
      }
      ts.observed.at(k, c) = g;
    }
  }

  // True IBD rows per recombination-free segment.
  std::vector<int> cuts{0};
  for (int i = 0; i < ni; ++i)
    for (int side = 0; side < 2; ++side)
      for (const auto& [start, lab] : ts.inherit[i][side].segs)
        if (start > 0) cuts.push_back(start);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(n);
  for (size_t s = 0; s + 1 < cuts.size(); ++s) {
    int row = cuts[s];
    for (int i = 0; i < ni; ++i) {
      int hp = ts.hap_label_at(i, 0, row);
      int hm = ts.hap_label_at(i, 1, row);
      if (hp < 0 && hm < 0) continue;
      IbdSegment seg;
      seg.individual = ped.members[i].id;
      seg.chrom = cfg.chrom;
      seg.start_idx = cuts[s] + 1;
      seg.end_idx = cuts[s + 1];
      seg.pat = hp >= 0 ? ts.hap_labels[hp] : "";
      seg.mat = ts.hap_labels[hm >= 0 ? hm : hp];
      ts.ibd_rows.push_back(std::move(seg));
    }
  }
  return ts;
}

void export_truth(const TruthSet& ts, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) fail(Errc::IoError, std::string("cannot write ") + name);
    return out;
  };
  {
    auto out = open("pedigree.tsv");
    write_pedigree_tsv(out, ts.ped);
  }
  {
    auto out = open("ibd.tsv");
    write_ibd_tsv(out, ts.ibd_table());
  }
  {
    auto out = open("genotypes.tsv");
    write_genotypes_tsv(out, ts.observed);
  }
  if (!ts.cfg.emit_truth) return;
  {
    auto out = open("truth_haplotypes.tsv");
    out << "haplotype";
    for (const auto& m : ts.clean.markers) out << "\t" << m.id;
    out << "\n";
    for (size_t h = 0; h < ts.hap_labels.size(); ++h) {
      out << ts.hap_labels[h];
      for (int32_t a : ts.hap_alleles[h]) out << "\t" << ts.alleles.names[a];
      out << "\n";
    }
  }
  {
    auto out = open("truth_genotypes.tsv");
    write_genotypes_tsv(out, ts.clean);
  }
  {
    auto out = open("truth_breakpoints.tsv");
    out << "child\tside\tafter_marker\n";
    for (const CrossoverSpec& xo : ts.realized)
      out << xo.child << "\t" << xo.side << "\t" << xo.after << "\n";
  }
  {
    auto out = open("truth_errors.tsv");
    out << "marker_id\tindividual\tfrom\tto\n";
    for (const auto& e : ts.errors)
      out << ts.observed.markers[e.k].id << "\t" << e.individual << "\t"
          << ts.alleles.names[e.from] << "\t" << ts.alleles.names[e.to] << "\n";
  }
  {
    auto out = open("truth_missing.tsv");
    out << "marker_id\tindividual\n";
    for (const auto& [k, id] : ts.missing_log)
      out << ts.observed.markers[k].id << "\t" << id << "\n";
  }
}

} // namespace ecvc
