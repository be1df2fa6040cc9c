import pytest

import ecvc


def path_graph():
    return ecvc.Graph(
        ["v0", "v1", "v2", "v3"],
        [("e0", "v0", "v1"), ("e1", "v1", "v2"), ("e2", "v2", "v3")],
    )


def test_solve_unique_path():
    g = path_graph()
    out = ecvc.solve(g, [{"e0": ("Y", "R"), "e1": ("R", "B"), "e2": ("B", "Y")}])
    assert len(out) == 1
    r = out[0]
    assert r["solvable"]
    assert r["count"] == "1"
    assert r["solutions"] == [{"v0": "Y", "v1": "R", "v2": "B", "v3": "Y"}]


def test_solve_two_solution_star():
    g = ecvc.Graph(
        ["v0", "v1", "v2", "v3"],
        [("e0", "v0", "v1"), ("e1", "v1", "v2"), ("e2", "v1", "v3")],
    )
    problem = {"e0": ("B", "R"), "e1": ("B", "R"), "e2": ("B", "R")}
    out = ecvc.solve(g, [problem])[0]
    assert out["count"] == "2"
    assert out["d"] == 1
    assert ecvc.count_d(g, problem) == 1
    # the brute-force reference agrees
    ref = ecvc.brute_force(g, problem, ["B", "R"])
    assert len(ref) == 2
    assert sorted(map(str, out["solutions"])) == sorted(map(str, ref))


def test_unsolvable_has_diagnostics():
    g = ecvc.Graph(["a", "b", "c"], [("e0", "a", "b"), ("e1", "b", "c"), ("e2", "a", "c")])
    out = ecvc.solve(g, [{"e0": ("B", "R"), "e1": ("B", "R"), "e2": ("B", "R")}])[0]
    assert not out["solvable"]
    assert out["count"] == "0"
    assert any("OddCycleTwoColor" in d for d in out["diagnostics"])


def test_graph_shape_queries():
    g = ecvc.Graph(["a", "b"], [("e0", "a", "b"), ("e1", "a", "b"), ("e2", "a", "a")])
    assert g.n_vertices == 2
    assert g.n_edges == 3
    assert g.component_count == 1
    assert g.first_betti() == [2]
    assert g.bipartite_loop_free() == [False]


def test_isolated_vertex_raises():
    with pytest.raises(ecvc.EcvcError):
        ecvc.Graph(["a", "b"], [("e0", "a", "a")])


def test_pipeline_round_trip(tmp_path):
    fam = tmp_path / "fam"
    summary = ecvc.simulate(
        "pedigree = nuclear\nchildren = 3\nmarkers = 120\nseed = 5\n",
        str(fam),
    )
    assert summary["individuals"] == 5
    assert (fam / "pedigree.tsv").exists()

    ph = ecvc.phase(
        ped=str(fam / "pedigree.tsv"),
        ibd=str(fam / "ibd.tsv"),
        geno=str(fam / "genotypes.tsv"),
        out_dir=str(tmp_path / "out"),
    )
    assert ph["markers"] == 120
    assert ph["error"] == 0
    assert ph["solved"] + ph["ambiguous"] == 120
    haps = ph["haplotypes"]
    assert len(haps) == 4
    assert all(len(seq) == 120 for seq in haps.values())
    assert (tmp_path / "out" / "haplotypes.tsv").exists()

    rep = ecvc.check_ibd(
        ped=str(fam / "pedigree.tsv"),
        ibd=str(fam / "ibd.tsv"),
        geno=str(fam / "genotypes.tsv"),
    )
    assert rep["verdict"] == "Consistent"
    assert rep["rate_het"] == 0.0


def test_localize_brackets_crossover(tmp_path):
    fam = tmp_path / "fam"
    ecvc.simulate(
        "pedigree = nuclear\nchildren = 4\nmarkers = 200\nseed = 17\ncrossover = C1:p:100\n",
        str(fam),
    )
    # flanking structures: stretch the first/last true segments over the range
    left, right = [], []
    for line in (fam / "ibd.tsv").read_text().splitlines():
        ind, chrom, s, e, pat, mat = line.split("\t")
        if s == "1":
            left.append(f"{ind}\t{chrom}\t1\t200\t{pat}\t{mat}")
        if e == "200":
            right.append(f"{ind}\t{chrom}\t1\t200\t{pat}\t{mat}")
    (fam / "left.tsv").write_text("\n".join(left) + "\n")
    (fam / "right.tsv").write_text("\n".join(right) + "\n")

    res = ecvc.localize(
        ped=str(fam / "pedigree.tsv"),
        ibd_left=str(fam / "left.tsv"),
        ibd_right=str(fam / "right.tsv"),
        geno=str(fam / "genotypes.tsv"),
    )
    if res["localizable"]:
        assert res["a_index"] <= 100
        assert res["b_index"] >= 101
