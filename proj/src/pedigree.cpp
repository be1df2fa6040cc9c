#include "ecvc/pedigree.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace ecvc {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

[[noreturn]] void parse_fail(const std::string& what, int lineno, const std::string& msg) {
  fail(Errc::ParseError, what + " line " + std::to_string(lineno) + ": " + msg);
}

} // namespace

void Pedigree::validate() const {
  for (const Individual& m : members) {
    bool has_f = !m.father.empty(), has_m = !m.mother.empty();
    if (has_f != has_m)
      fail(Errc::ParseError, "individual " + m.id + " has exactly one parent listed");
    if (has_f && find(m.father) < 0)
      fail(Errc::ParseError, "individual " + m.id + " has unknown father " + m.father);
    if (has_m && find(m.mother) < 0)
      fail(Errc::ParseError, "individual " + m.id + " has unknown mother " + m.mother);
  }
  // Acyclicity via iterative depth computation.
  std::vector<int> state(members.size(), 0); // 0 new, 1 active, 2 done
  for (size_t start = 0; start < members.size(); ++start) {
    if (state[start]) continue;
    std::vector<int> stack{static_cast<int>(start)};
    while (!stack.empty()) {
      int i = stack.back();
      if (state[i] == 0) {
        state[i] = 1;
        for (const std::string& pid : {members[i].father, members[i].mother}) {
          if (pid.empty()) continue;
          int p = find(pid);
          if (state[p] == 1)
            fail(Errc::ParseError, "pedigree contains a cycle through " + members[p].id);
          if (state[p] == 0) stack.push_back(p);
        }
      } else {
        state[i] = 2;
        stack.pop_back();
      }
    }
  }
}

Pedigree read_pedigree_tsv(std::istream& in) {
  Pedigree ped;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto f = split_tabs(line);
    if (f.size() != 6) parse_fail("pedigree", lineno, "expected 6 tab-separated fields");
    Individual m;
    m.id = f[1];
    if (f[2] != "0") m.father = f[2];
    if (f[3] != "0") m.mother = f[3];
    if (f[4] == "1") m.sex = Sex::XY;
    else if (f[4] == "2") m.sex = Sex::XX;
    else if (f[4] == "0") m.sex = Sex::Unknown;
    else parse_fail("pedigree", lineno, "sex must be 0, 1 or 2");
    if (f[5] == "1") m.sequenced = true;
    else if (f[5] == "0") m.sequenced = false;
    else parse_fail("pedigree", lineno, "sequenced must be 0 or 1");
    if (ped.members.empty()) ped.family_id = f[0];
    if (!ped.index.emplace(m.id, static_cast<int>(ped.members.size())).second)
      parse_fail("pedigree", lineno, "duplicate individual id " + m.id);
    ped.members.push_back(std::move(m));
  }
  if (ped.members.empty()) fail(Errc::ParseError, "pedigree file holds no rows");
  ped.validate();
  return ped;
}

void write_pedigree_tsv(std::ostream& out, const Pedigree& p) {
  for (const Individual& m : p.members)
    out << p.family_id << "\t" << m.id << "\t" << (m.father.empty() ? "0" : m.father) << "\t"
        << (m.mother.empty() ? "0" : m.mother) << "\t" << static_cast<int>(m.sex) << "\t"
        << (m.sequenced ? 1 : 0) << "\n";
}

IbdTable read_ibd_tsv(std::istream& in) {
  IbdTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto f = split_tabs(line);
    if (f.size() != 6) parse_fail("ibd", lineno, "expected 6 tab-separated fields");
    IbdSegment seg;
    seg.individual = f[0];
    seg.chrom = f[1];
    try {
      seg.start_idx = std::stoi(f[2]);
      seg.end_idx = std::stoi(f[3]);
    } catch (...) {
      parse_fail("ibd", lineno, "start/end must be integer marker indices");
    }
    if (seg.start_idx < 1 || seg.end_idx < seg.start_idx)
      parse_fail("ibd", lineno, "bad marker interval");
    seg.pat = f[4] == "-" ? "" : f[4];
    seg.mat = f[5];
    if (seg.mat.empty() || seg.mat == "-") parse_fail("ibd", lineno, "maternal label required");
    t.rows.push_back(std::move(seg));
  }
  if (t.rows.empty()) fail(Errc::ParseError, "ibd file holds no rows");
  return t;
}

void write_ibd_tsv(std::ostream& out, const IbdTable& t) {
  for (const IbdSegment& s : t.rows)
    out << s.individual << "\t" << s.chrom << "\t" << s.start_idx << "\t" << s.end_idx << "\t"
        << (s.pat.empty() ? "-" : s.pat) << "\t" << s.mat << "\n";
}

IBDStructure ibd_for_range(const IbdTable& t, const std::string& chrom, int lo, int hi) {
  if (lo < 1 || hi < lo) fail(Errc::InvalidArgument, "empty marker range");
  IBDStructure s;
  s.chrom = chrom;
  s.start_idx = lo;
  s.end_idx = hi;
  for (const IbdSegment& seg : t.rows) {
    if (seg.chrom != chrom) continue;
    if (seg.end_idx < lo || seg.start_idx > hi) continue;
    if (seg.start_idx > lo || seg.end_idx < hi)
      fail(Errc::InvalidArgument, "IBD for " + seg.individual + " changes inside markers " +
                                      std::to_string(lo) + ":" + std::to_string(hi) +
                                      "; pick a recombination-free range");
    if (s.index.count(seg.individual))
      fail(Errc::InvalidArgument, "multiple IBD segments cover " + seg.individual +
                                      " on the requested range");
    s.index.emplace(seg.individual, static_cast<int>(s.individuals.size()));
    s.individuals.push_back(seg.individual);
    s.haps.push_back({seg.pat, seg.mat});
  }
  if (s.individuals.empty())
    fail(Errc::InvalidArgument, "no IBD segments cover chrom " + chrom + " markers " +
                                    std::to_string(lo) + ":" + std::to_string(hi));
  return s;
}

void GenotypeMatrix::validate() const {
  for (size_t k = 1; k < markers.size(); ++k)
    if (markers[k].chrom == markers[k - 1].chrom && markers[k].pos <= markers[k - 1].pos)
      fail(Errc::ParseError, "marker " + markers[k].id + " out of position order");
}

namespace {

Genotype parse_genotype_cell(const std::string& cell, AlleleTable& alleles, int lineno) {
  size_t slash = cell.find('/');
  if (slash == std::string::npos)
    parse_fail("genotypes", lineno, "cell `" + cell + "` is not a1/a2");
  std::string a1 = cell.substr(0, slash), a2 = cell.substr(slash + 1);
  if (a1.empty() || a2.empty()) parse_fail("genotypes", lineno, "empty allele in `" + cell + "`");
  // TODO: keep the known allele of half-missing calls once the solver takes
  // partial edge constraints; for now a/. degrades to fully missing.
  if (a1 == "." || a2 == ".") return {};
  Genotype g;
  g.a1 = alleles.intern(a1);
  g.a2 = alleles.intern(a2);
  if (g.a1 > g.a2) std::swap(g.a1, g.a2);
  return g;
}

} // namespace

GenotypeMatrix read_genotypes_tsv(std::istream& in) {
  GenotypeMatrix gm;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto f = split_tabs(line);
    if (!have_header) {
      if (f.size() < 4 || f[0] != "marker_id")
        parse_fail("genotypes", lineno, "expected header `marker_id chrom position <ind>...`");
      for (size_t i = 3; i < f.size(); ++i) {
        if (!gm.ind_index.emplace(f[i], static_cast<int>(gm.individuals.size())).second)
          parse_fail("genotypes", lineno, "duplicate individual column " + f[i]);
        gm.individuals.push_back(f[i]);
      }
      have_header = true;
      continue;
    }
    if (f.size() != gm.individuals.size() + 3)
      parse_fail("genotypes", lineno, "row width does not match header");
    MarkerInfo m;
    m.id = f[0];
    m.chrom = f[1];
    try {
      m.pos = std::stoll(f[2]);
    } catch (...) {
      parse_fail("genotypes", lineno, "position must be an integer");
    }
    gm.markers.push_back(std::move(m));
    for (size_t i = 3; i < f.size(); ++i)
      gm.cells.push_back(parse_genotype_cell(f[i], gm.alleles, lineno));
  }
  if (!have_header) fail(Errc::ParseError, "genotype file holds no header");
  gm.validate();
  return gm;
}

void write_genotypes_tsv(std::ostream& out, const GenotypeMatrix& gm) {
  out << "marker_id\tchrom\tposition";
  for (const auto& id : gm.individuals) out << "\t" << id;
  out << "\n";
  for (int k = 0; k < gm.n_markers(); ++k) {
    out << gm.markers[k].id << "\t" << gm.markers[k].chrom << "\t" << gm.markers[k].pos;
    for (int i = 0; i < gm.n_individuals(); ++i) {
      Genotype g = gm.at(k, i);
      if (g.missing()) out << "\t./.";
      else out << "\t" << gm.alleles.names[g.a1] << "/" << gm.alleles.names[g.a2];
    }
    out << "\n";
  }
}

GenotypeMatrix read_vcf(std::istream& in) {
  GenotypeMatrix gm;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("##", 0) == 0 || line.empty()) continue;
    auto f = split_tabs(line);
    if (line[0] == '#') {
      if (f.size() < 10) parse_fail("vcf", lineno, "no sample columns in #CHROM header");
      for (size_t i = 9; i < f.size(); ++i) {
        if (!gm.ind_index.emplace(f[i], static_cast<int>(gm.individuals.size())).second)
          parse_fail("vcf", lineno, "duplicate sample " + f[i]);
        gm.individuals.push_back(f[i]);
      }
      have_header = true;
      continue;
    }
    if (!have_header) parse_fail("vcf", lineno, "data row before #CHROM header");
    if (f.size() != gm.individuals.size() + 9)
      parse_fail("vcf", lineno, "row width does not match #CHROM header");
    MarkerInfo m;
    m.chrom = f[0];
    try {
      m.pos = std::stoll(f[1]);
    } catch (...) {
      parse_fail("vcf", lineno, "POS must be an integer");
    }
    m.id = (f[2] == "." || f[2].empty()) ? f[0] + ":" + f[1] : f[2];

    std::vector<std::string> site_alleles{f[3]};
    {
      std::istringstream alts(f[4]);
      std::string a;
      while (std::getline(alts, a, ','))
        if (!a.empty() && a != ".") site_alleles.push_back(a);
    }

    // GT position within FORMAT.
    int gt_at = -1;
    {
      std::istringstream fmt(f[8]);
      std::string key;
      for (int i = 0; std::getline(fmt, key, ':'); ++i)
        if (key == "GT") { gt_at = i; break; }
    }
    if (gt_at < 0) parse_fail("vcf", lineno, "FORMAT has no GT field");

    gm.markers.push_back(std::move(m));
    for (size_t i = 9; i < f.size(); ++i) {
      std::string gt;
      {
        std::istringstream sample(f[i]);
        for (int j = 0; j <= gt_at; ++j)
          if (!std::getline(sample, gt, ':')) parse_fail("vcf", lineno, "sample missing GT");
      }
      for (char& ch : gt)
        if (ch == '|') ch = '/';
      std::vector<std::string> calls;
      {
        std::istringstream gts(gt);
        std::string c;
        while (std::getline(gts, c, '/')) calls.push_back(c);
      }
      if (calls.size() == 1) calls.push_back(calls[0]); // haploid GT doubled
      Genotype g;
      if (calls.size() == 2 && calls[0] != "." && calls[1] != ".") {
        int ai[2];
        try {
          ai[0] = std::stoi(calls[0]);
          ai[1] = std::stoi(calls[1]);
        } catch (...) {
          parse_fail("vcf", lineno, "bad GT `" + gt + "`");
        }
        for (int x : ai)
          if (x < 0 || x >= static_cast<int>(site_alleles.size()))
            parse_fail("vcf", lineno, "GT allele index out of range");
        g.a1 = gm.alleles.intern(site_alleles[ai[0]]);
        g.a2 = gm.alleles.intern(site_alleles[ai[1]]);
        if (g.a1 > g.a2) std::swap(g.a1, g.a2);
      }
      gm.cells.push_back(g);
    }
  }
  if (!have_header) fail(Errc::ParseError, "vcf holds no #CHROM header");
  gm.validate();
  return gm;
}

Multigraph build_marker_graph(const IBDStructure& ibd, const Pedigree& ped, ChromKind kind) {
  std::vector<std::string> vertices;
  std::unordered_map<std::string, int> seen;
  std::vector<Multigraph::EdgeSpec> edges;

  for (const auto& [id, slot] : ibd.index)
    if (ped.find(id) < 0)
      fail(Errc::UnreferencedLabel, "IBD references unknown individual " + id);

  auto add_vertex = [&](const std::string& label) {
    if (seen.emplace(label, 1).second) vertices.push_back(label);
  };

  for (const Individual& m : ped.members) {
    if (!m.sequenced) continue;
    const HapPair* hp = ibd.find(m.id);
    if (!hp) fail(Errc::MissingIbd, "sequenced individual " + m.id + " has no IBD entry");
    if (kind == ChromKind::X) {
      if (m.sex == Sex::Unknown)
        fail(Errc::SexMissingOnX, "individual " + m.id + " needs a sex for X-chromosome runs");
      if (m.sex == Sex::XY) {
        if (!hp->pat.empty())
          fail(Errc::InvalidArgument, "XY individual " + m.id + " carries a paternal X label");
        add_vertex(hp->mat);
        edges.emplace_back(m.id, hp->mat, hp->mat); // self-loop on the maternal X
        continue;
      }
    }
    if (hp->pat.empty())
      fail(Errc::InvalidArgument, "individual " + m.id + " has no paternal label");
    add_vertex(hp->pat);
    add_vertex(hp->mat);
    edges.emplace_back(m.id, hp->pat, hp->mat);
  }
  if (edges.empty()) fail(Errc::EmptyGraph, "no sequenced individuals with IBD entries");
  return Multigraph::build(vertices, edges);
}

MarkerConstraints constraints_at_marker(const Multigraph& g, const GenotypeMatrix& gm, int k) {
  MarkerConstraints mc;
  mc.by_edge.assign(g.n_edges(), ColorPair{});
  for (int e = 0; e < g.n_edges(); ++e) {
    int col = gm.column(g.edge_labels[e]);
    if (col < 0)
      fail(Errc::InvalidArgument, "individual " + g.edge_labels[e] + " not in genotype file");
    Genotype gt = gm.at(k, col);
    if (gt.missing()) mc.missing_edges.push_back(e);
    else mc.by_edge[e] = ColorPair::of(gt.a1, gt.a2);
  }
  return mc;
}

std::vector<MissingnessGroup> missingness_partition(const GenotypeMatrix& gm, int lo, int hi) {
  if (lo < 0 || hi >= gm.n_markers() || lo > hi)
    fail(Errc::InvalidArgument, "empty marker range");
  std::vector<MissingnessGroup> groups;
  std::unordered_map<std::string, int> by_key;
  std::string key;
  for (int k = lo; k <= hi; ++k) {
    MissingnessGroup cur;
    for (int i = 0; i < gm.n_individuals(); ++i)
      if (gm.at(k, i).missing()) cur.missing_columns.push_back(i);
    key.clear();
    for (int c : cur.missing_columns) {
      key += std::to_string(c);
      key += ',';
    }
    auto [it, fresh] = by_key.emplace(key, static_cast<int>(groups.size()));
    if (fresh) groups.push_back(std::move(cur));
    groups[it->second].marker_indices.push_back(k);
  }
  return groups;
}

SubgraphPlan subgraph_for_pattern(const Multigraph& g,
                                  const std::vector<std::string>& missing_individuals) {
  std::vector<char> drop_edge(g.n_edges(), 0);
  for (const std::string& id : missing_individuals) {
    auto it = g.edge_index.find(id);
    if (it == g.edge_index.end())
      fail(Errc::InvalidArgument, "individual " + id + " has no edge in the marker graph");
    drop_edge[it->second] = 1;
  }

  std::vector<char> keep_vertex(g.n_vertices(), 0);
  std::vector<Multigraph::EdgeSpec> edges;
  edges.reserve(g.n_edges());
  SubgraphPlan out;
  for (int e = 0; e < g.n_edges(); ++e) {
    if (drop_edge[e]) continue;
    keep_vertex[g.ends[e].first] = 1;
    keep_vertex[g.ends[e].second] = 1;
  }

  std::vector<std::string> vertices;
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (!keep_vertex[v]) continue;
    vertices.push_back(g.vertex_labels[v]);
    out.vertex_to_parent.push_back(v);
  }
  for (int e = 0; e < g.n_edges(); ++e) {
    if (drop_edge[e]) continue;
    edges.emplace_back(g.edge_labels[e], g.vertex_labels[g.ends[e].first],
                       g.vertex_labels[g.ends[e].second]);
    out.edge_to_parent.push_back(e);
  }
  if (edges.empty()) fail(Errc::EmptyGraph, "every edge deleted by the missingness pattern");
  out.plan = ForestPlan::build(Multigraph::build(vertices, edges));
  return out;
}

} // namespace ecvc
