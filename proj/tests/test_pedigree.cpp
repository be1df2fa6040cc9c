#include <doctest.h>

#include <set>
#include <sstream>

#include "ecvc/pedigree.hpp"

using namespace ecvc;

namespace {

Pedigree ped_from(const std::string& text) {
  std::istringstream in(text);
  return read_pedigree_tsv(in);
}
IbdTable ibd_from(const std::string& text) {
  std::istringstream in(text);
  return read_ibd_tsv(in);
}
GenotypeMatrix gm_from(const std::string& text) {
  std::istringstream in(text);
  return read_genotypes_tsv(in);
}

const char* kTrioPed =
    "FAM1\tF1\t0\t0\t1\t1\n"
    "FAM1\tM1\t0\t0\t2\t1\n"
    "FAM1\tC1\tF1\tM1\t2\t1\n";

const char* kTrioIbd =
    "F1\t1\t1\t100\tF1.p\tF1.m\n"
    "M1\t1\t1\t100\tM1.p\tM1.m\n"
    "C1\t1\t1\t100\tF1.p\tM1.p\n";

} // namespace

TEST_CASE("pedigree parse and validation") {
  Pedigree ped = ped_from(kTrioPed);
  CHECK(ped.members.size() == 3);
  CHECK(ped.is_founder(0));
  CHECK_FALSE(ped.is_founder(2));
  CHECK(ped.members[2].sex == Sex::XX);

  std::ostringstream os;
  write_pedigree_tsv(os, ped);
  CHECK(os.str() == kTrioPed);

  SUBCASE("one-parent rows are rejected") {
    CHECK_THROWS_AS(ped_from("FAM1\tF1\t0\t0\t1\t1\nFAM1\tC1\tF1\t0\t2\t1\n"), Error);
  }
  SUBCASE("unknown parent is rejected") {
    CHECK_THROWS_AS(ped_from("FAM1\tC1\tF9\tM9\t2\t1\n"), Error);
  }
  SUBCASE("parent cycles are rejected") {
    CHECK_THROWS_AS(ped_from("FAM1\tA\tB\tB\t1\t1\nFAM1\tB\tA\tA\t2\t1\n"), Error);
  }
}

TEST_CASE("ibd parse and range extraction") {
  IbdTable t = ibd_from(kTrioIbd);
  CHECK(t.rows.size() == 3);

  IBDStructure s = ibd_for_range(t, "1", 1, 100);
  CHECK(s.individuals.size() == 3);
  CHECK(s.find("C1")->pat == "F1.p");

  SUBCASE("range spanning a breakpoint is rejected") {
    IbdTable split = ibd_from(
        "F1\t1\t1\t100\tF1.p\tF1.m\n"
        "C1\t1\t1\t50\tF1.p\tM1.p\n"
        "C1\t1\t51\t100\tF1.m\tM1.p\n");
    CHECK_NOTHROW(ibd_for_range(split, "1", 1, 50));
    CHECK_NOTHROW(ibd_for_range(split, "1", 60, 100));
    CHECK_THROWS_AS(ibd_for_range(split, "1", 40, 60), Error);
  }
  SUBCASE("round trip") {
    std::ostringstream os;
    write_ibd_tsv(os, t);
    CHECK(os.str() == kTrioIbd);
  }
}

TEST_CASE("genotype matrix parsing") {
  GenotypeMatrix gm = gm_from(
      "marker_id\tchrom\tposition\tF1\tM1\tC1\n"
      "M1\t1\t1000\tA/G\tA/A\tA/G\n"
      "M2\t1\t2000\t./.\tC/G\tC/.\n");
  CHECK(gm.n_markers() == 2);
  CHECK(gm.n_individuals() == 3);
  CHECK(gm.at(0, 0).het());
  CHECK(gm.at(1, 0).missing());
  CHECK(gm.at(1, 2).missing()); // half-missing treated as missing
  CHECK_FALSE(gm.at(1, 1).missing());

  SUBCASE("positions must increase") {
    CHECK_THROWS_AS(gm_from("marker_id\tchrom\tposition\tF1\n"
                            "M1\t1\t2000\tA/A\n"
                            "M2\t1\t1000\tA/A\n"),
                    Error);
  }
  SUBCASE("round trip") {
    std::ostringstream os;
    write_genotypes_tsv(os, gm);
    GenotypeMatrix back = gm_from(os.str());
    CHECK(back.cells.size() == gm.cells.size());
    for (size_t i = 0; i < gm.cells.size(); ++i) {
      CHECK(back.cells[i].missing() == gm.cells[i].missing());
      if (!gm.cells[i].missing()) {
        CHECK(back.alleles.names[back.cells[i].a1] == gm.alleles.names[gm.cells[i].a1]);
        CHECK(back.alleles.names[back.cells[i].a2] == gm.alleles.names[gm.cells[i].a2]);
      }
    }
  }
}

TEST_CASE("vcf ingestion maps GT fields") {
  std::istringstream in(
      "##fileformat=VCFv4.2\n"
      "#CHROM\tPOS\tID\tREF\tALT\tQUAL\tFILTER\tINFO\tFORMAT\tF1\tM1\tC1\n"
      "1\t1000\trs1\tA\tG\t.\tPASS\t.\tGT:DP\t0/1:30\t0|0:28\t1/1:31\n"
      "1\t2000\t.\tC\tG,T\t.\tPASS\t.\tGT\t0/1\t1/2\t./.\n"
      "X\t3000\trsX\tT\tC\t.\tPASS\t.\tGT\t1\t0/0\t0\n");
  GenotypeMatrix gm = read_vcf(in);
  REQUIRE(gm.n_markers() == 3);
  CHECK(gm.markers[1].id == "1:2000");
  CHECK(gm.alleles.names[gm.at(0, 0).a1] == "A");
  CHECK(gm.alleles.names[gm.at(0, 0).a2] == "G");
  CHECK_FALSE(gm.at(0, 1).het());
  // multi-allelic
  CHECK(gm.alleles.names[gm.at(1, 1).a1] == "G");
  CHECK(gm.alleles.names[gm.at(1, 1).a2] == "T");
  CHECK(gm.at(1, 2).missing());
  // haploid GT doubled
  CHECK(gm.alleles.names[gm.at(2, 0).a1] == "C");
  CHECK(gm.alleles.names[gm.at(2, 0).a2] == "C");
}

TEST_CASE("build_marker_graph shapes") {
  SUBCASE("full siblings sharing both haplotypes give parallel edges") {
    Pedigree ped = ped_from(
        "FAM1\tF1\t0\t0\t1\t0\n"
        "FAM1\tM1\t0\t0\t2\t0\n"
        "FAM1\tC1\tF1\tM1\t1\t1\n"
        "FAM1\tC2\tF1\tM1\t2\t1\n");
    IBDStructure ibd = ibd_for_range(ibd_from("C1\t1\t1\t10\tF1.p\tM1.p\n"
                                              "C2\t1\t1\t10\tF1.p\tM1.p\n"),
                                     "1", 1, 10);
    Multigraph g = build_marker_graph(ibd, ped, ChromKind::Autosome);
    CHECK(g.n_vertices() == 2);
    CHECK(g.n_edges() == 2);
    CHECK(g.ends[0] == g.ends[1]);
  }
  SUBCASE("parent and child sharing one haplotype form a path") {
    Pedigree ped = ped_from(
        "FAM1\tF1\t0\t0\t1\t1\n"
        "FAM1\tM1\t0\t0\t2\t0\n"
        "FAM1\tC1\tF1\tM1\t2\t1\n");
    IBDStructure ibd = ibd_for_range(ibd_from("F1\t1\t1\t10\tF1.p\tF1.m\n"
                                              "C1\t1\t1\t10\tF1.p\tM1.p\n"),
                                     "1", 1, 10);
    Multigraph g = build_marker_graph(ibd, ped, ChromKind::Autosome);
    CHECK(g.n_vertices() == 3);
    CHECK(g.n_edges() == 2);
    ForestPlan plan = ForestPlan::build(g);
    CHECK(plan.comps.size() == 1);
    CHECK(plan.comps[0].non_tree_edges.empty());
  }
  SUBCASE("XY individual becomes a self-loop on the X") {
    Pedigree ped = ped_from(
        "FAM1\tM1\t0\t0\t2\t1\n"
        "FAM1\tF0\t0\t0\t1\t0\n"
        "FAM1\tC1\tF0\tM1\t1\t1\n");
    IBDStructure ibd = ibd_for_range(ibd_from("M1\tX\t1\t10\tM1.p\tM1.m\n"
                                              "C1\tX\t1\t10\t-\tM1.m\n"),
                                     "X", 1, 10);
    Multigraph g = build_marker_graph(ibd, ped, ChromKind::X);
    REQUIRE(g.n_edges() == 2);
    int loop = g.edge("C1");
    CHECK(g.is_loop(loop));
    CHECK(g.vertex_labels[g.ends[loop].first] == "M1.m");
  }
  SUBCASE("unknown sex on the X is an error") {
    Pedigree ped = ped_from("FAM1\tA\t0\t0\t0\t1\n");
    IBDStructure ibd = ibd_for_range(ibd_from("A\tX\t1\t10\tA.p\tA.m\n"), "X", 1, 10);
    try {
      build_marker_graph(ibd, ped, ChromKind::X);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SexMissingOnX);
    }
  }
  SUBCASE("IBD naming an unknown individual is an error") {
    Pedigree ped = ped_from(kTrioPed);
    IBDStructure ibd = ibd_for_range(ibd_from("GHOST\t1\t1\t10\tX.p\tX.m\n"), "1", 1, 10);
    try {
      build_marker_graph(ibd, ped, ChromKind::Autosome);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::UnreferencedLabel);
    }
  }
  SUBCASE("sequenced individual without IBD is an error") {
    Pedigree ped = ped_from(kTrioPed);
    IBDStructure ibd = ibd_for_range(ibd_from("F1\t1\t1\t10\tF1.p\tF1.m\n"), "1", 1, 10);
    try {
      build_marker_graph(ibd, ped, ChromKind::Autosome);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::MissingIbd);
    }
  }
}

TEST_CASE("constraints_at_marker") {
  Pedigree ped = ped_from(kTrioPed);
  IBDStructure ibd = ibd_for_range(ibd_from(kTrioIbd), "1", 1, 100);
  Multigraph g = build_marker_graph(ibd, ped, ChromKind::Autosome);
  GenotypeMatrix gm = gm_from(
      "marker_id\tchrom\tposition\tF1\tM1\tC1\n"
      "M1\t1\t1000\tA/G\tT/T\t./.\n"
      "M2\t1\t2000\tA/C\tC/G\tA/A\n");

  MarkerConstraints mc = constraints_at_marker(g, gm, 0);
  CHECK(mc.missing_edges == std::vector<int>{g.edge("C1")});
  Genotype f1 = gm.at(0, gm.column("F1"));
  CHECK(mc.by_edge[g.edge("F1")] == ColorPair::of(f1.a1, f1.a2));
  CHECK(gm.alleles.names[f1.a1] == "A");
  CHECK(mc.by_edge[g.edge("M1")].hom());

  // a triallelic site carries three colors
  MarkerConstraints tri = constraints_at_marker(g, gm, 1);
  std::set<int32_t> support;
  for (int e = 0; e < g.n_edges(); ++e) {
    support.insert(tri.by_edge[e].lo);
    support.insert(tri.by_edge[e].hi);
  }
  CHECK(support.size() == 3);
}

TEST_CASE("missingness partition") {
  SUBCASE("no missingness is one pattern") {
    GenotypeMatrix gm = gm_from(
        "marker_id\tchrom\tposition\tA\tB\n"
        "M1\t1\t1\tA/A\tA/A\n"
        "M2\t1\t2\tA/G\tG/G\n");
    auto groups = missingness_partition(gm, 0, 1);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].missing_columns.empty());
    CHECK(groups[0].marker_indices == std::vector<int>{0, 1});
  }
  SUBCASE("per-individual missingness splits groups") {
    GenotypeMatrix gm = gm_from(
        "marker_id\tchrom\tposition\tA\tB\n"
        "M1\t1\t1\tA/A\tA/A\n"
        "M2\t1\t2\t./.\tG/G\n"
        "M3\t1\t3\tA/A\tA/G\n"
        "M4\t1\t4\t./.\tG/G\n");
    auto groups = missingness_partition(gm, 0, 3);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].marker_indices == std::vector<int>{0, 2});
    CHECK(groups[1].marker_indices == std::vector<int>{1, 3});
    CHECK(groups[1].missing_columns == std::vector<int>{0});
    // partition property: every marker lands in exactly one group
    std::set<int> seen;
    for (const auto& gr : groups)
      for (int k : gr.marker_indices) CHECK(seen.insert(k).second);
    CHECK(seen.size() == 4);
  }
  SUBCASE("a fully missing marker forms its own pattern") {
    GenotypeMatrix gm = gm_from(
        "marker_id\tchrom\tposition\tA\tB\n"
        "M1\t1\t1\tA/A\tA/A\n"
        "M2\t1\t2\t./.\t./.\n");
    auto groups = missingness_partition(gm, 0, 1);
    REQUIRE(groups.size() == 2);
    CHECK(groups[1].missing_columns.size() == 2);
  }
}

TEST_CASE("subgraph_for_pattern") {
  Pedigree ped = ped_from(kTrioPed);
  IBDStructure ibd = ibd_for_range(ibd_from(kTrioIbd), "1", 1, 100);
  Multigraph g = build_marker_graph(ibd, ped, ChromKind::Autosome);
  // F1: (F1.p, F1.m), M1: (M1.p, M1.m), C1: (F1.p, M1.p) -- a path

  SUBCASE("deleting a pendant edge drops the pendant vertex") {
    SubgraphPlan sub = subgraph_for_pattern(g, {"F1"});
    CHECK(sub.plan.graph.n_edges() == 2);
    CHECK(sub.plan.graph.n_vertices() == 3); // F1.m dropped
    CHECK(sub.plan.graph.vertex_index.count("F1.m") == 0);
  }
  SUBCASE("deleting a bridge splits the component") {
    SubgraphPlan sub = subgraph_for_pattern(g, {"C1"});
    CHECK(sub.plan.comps.size() == 2);
  }
  SUBCASE("deleting nothing reproduces the full plan") {
    SubgraphPlan sub = subgraph_for_pattern(g, {});
    ForestPlan full = ForestPlan::build(g);
    CHECK(sub.plan.graph.ends == full.graph.ends);
    REQUIRE(sub.plan.comps.size() == full.comps.size());
    for (size_t i = 0; i < full.comps.size(); ++i) {
      CHECK(sub.plan.comps[i].tree_edges == full.comps[i].tree_edges);
      CHECK(sub.plan.comps[i].root == full.comps[i].root);
    }
    for (int v = 0; v < g.n_vertices(); ++v) CHECK(sub.vertex_to_parent[v] == v);
  }
  SUBCASE("deleting every edge is an error") {
    try {
      subgraph_for_pattern(g, {"F1", "M1", "C1"});
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::EmptyGraph);
    }
  }
}
