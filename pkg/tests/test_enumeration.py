import json
from itertools import product

import pytest

from dehnfill import constraints as C
from dehnfill.enumeration import (CatalogError, SearchBudgetExceeded, canonical_quintuple, correspondence_from_names,
                                  derive_partners, enumerate_quintuples, filled_homology, filled_presentation,
                                  load_catalog, pair_violations, paper_form, quintuple_orbit, quintuple_passes,
                                  run_case, search_pairs, validate_correspondence)
from dehnfill.graph import build_quintuple_graph, isomorphic, load_graph
from dehnfill.homology import group_of

QUOTED_T2 = {(4, 4, 2, 0), (4, 4, 1, 1), (4, 1, 4, 1), (4, 2, 2, 2), (3, 3, 3, 1), (3, 3, 2, 2), (3, 2, 3, 2)}


def load_pair(data_dir, tag):
    meta = json.loads((data_dir / "pairs" / f"{tag}.json").read_text())
    base = data_dir / "pairs"
    gs, gt = load_graph(base / meta["gs"]), load_graph(base / meta["gt"])
    return meta, correspondence_from_names(gs, gt, meta["d"])


# -- quintuples


def test_canonical_examples():
    assert canonical_quintuple((0, 2, 3, 4, 1)) == (0, 1, 2, 3, 4)
    assert canonical_quintuple((1, 4, 2, 3, 1)) == canonical_quintuple((1, 2, 4, 1, 3))
    assert paper_form((0, 1, 3, 3, 3)) == (0, 3, 3, 3, 1)


def test_canonical_is_idempotent_and_constant_on_orbits():
    for q in product(range(9), repeat=5):
        c = canonical_quintuple(q)
        assert canonical_quintuple(c) == c
        assert c == min(quintuple_orbit(q))


def test_orbit_group_sizes():
    # the four listed symmetries, plus rotations when a0 = 0
    assert len(quintuple_orbit((1, 1, 2, 3, 4))) == 4
    assert len(quintuple_orbit((0, 1, 2, 3, 5))) == 8


def test_orbit_count_matches_burnside_for_generic_a0():
    # with a0 > 0 the group is the Klein four-group acting on the body
    perms = [(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]
    for total in range(0, 9):
        bodies = [b for b in product(range(total + 1), repeat=4) if sum(b) == total]
        fixed = sum(1 for p in perms for b in bodies if tuple(b[i] for i in p) == b)
        burnside = fixed // len(perms)
        reps = {canonical_quintuple((1,) + b) for b in bodies}
        assert len(reps) == burnside


def test_t2_epsilon_list_is_the_known_seven():
    got = enumerate_quintuples(2, ["epsilon"])
    assert got == sorted(got)
    assert {paper_form(q)[1:] for q in got} == QUOTED_T2
    assert enumerate_quintuples(2, ["epsilon"], alpha0=0) == got


def test_rules_shrink_the_list():
    for t in (1, 2, 3):
        none = set(enumerate_quintuples(t))
        eps = set(enumerate_quintuples(t, ["epsilon"]))
        both = set(enumerate_quintuples(t, ["epsilon", "caps"]))
        assert both <= eps <= none
    assert len(enumerate_quintuples(2)) > 7


def test_t1_brute_force():
    brute = {canonical_quintuple(q) for q in product(range(6), repeat=5) if 2 * q[0] + sum(q[1:]) == 5}
    assert set(enumerate_quintuples(1)) == brute


def test_unknown_rule():
    with pytest.raises(ValueError):
        quintuple_passes((0, 4, 4, 2, 0), 2, ["nope"])
    with pytest.raises(ValueError):
        enumerate_quintuples(0)


# -- search


def test_4420_is_eliminated():
    gs = build_quintuple_graph((0, 4, 4, 2, 0), 2, signs=(1, -1))
    for beta in ((0, 3, 3, 2, 2), (0, 3, 2, 3, 2)):
        gt = build_quintuple_graph(beta, 2, signs=(1, 1))
        res = search_pairs(gs, gt, (1, 2))
        assert len(res) == 0 and res.nodes > 0


def test_same_sign_everywhere_has_no_pairing():
    gs = build_quintuple_graph((0, 3, 3, 3, 1), 2, signs=(1, 1))
    gt = build_quintuple_graph((0, 3, 3, 3, 1), 2, signs=(1, 1))
    assert len(search_pairs(gs, gt, (1, 2))) == 0


def test_3331_needs_jumping_number_two():
    gs = build_quintuple_graph((0, 3, 3, 3, 1), 2, signs=(1, -1))
    gt = build_quintuple_graph((0, 3, 3, 3, 1), 2, signs=(1, 1))
    assert len(search_pairs(gs, gt, 1)) == 0
    res = search_pairs(gs, gt, 2)
    assert len(res) == 160
    for c in res.correspondences:
        assert validate_correspondence(c) == []
        assert pair_violations(c, "gt", {"gt": "GT_allSameSign"}) == []


def test_search_is_symmetric_in_the_two_graphs(data_dir):
    gs = load_graph(data_dir / "graphs" / "fig05_gs.json")
    gt = load_graph(data_dir / "graphs" / "fig05_gt.json")
    assert len(search_pairs(gs, gt, 2)) == len(search_pairs(gt, gs, 2)) > 0


def test_search_budget():
    gs = build_quintuple_graph((0, 4, 4, 2, 0), 2, signs=(1, -1))
    gt = build_quintuple_graph((0, 3, 3, 2, 2), 2, signs=(1, 1))
    with pytest.raises(SearchBudgetExceeded):
        search_pairs(gs, gt, 1, node_cap=50)


def test_search_budget_from_environment(monkeypatch):
    monkeypatch.setenv("DGK_NODE_CAP", "5")
    gs = build_quintuple_graph((0, 4, 4, 2, 0), 2, signs=(1, -1))
    gt = build_quintuple_graph((0, 3, 3, 2, 2), 2, signs=(1, 1))
    with pytest.raises(SearchBudgetExceeded):
        search_pairs(gs, gt, 1)


def test_color_filter_keeps_figure_pairs(data_dir):
    gs = load_graph(data_dir / "graphs" / "fig05_gs.json")
    gt = load_graph(data_dir / "graphs" / "fig05_gt.json")
    assert len(search_pairs(gs, gt, 2, colors=True)) == len(search_pairs(gs, gt, 2))


# -- partners


def test_derive_reproduces_t1_partners(data_dir):
    for tag, d in (("fig04", 1), ("fig05", 2)):
        gs = load_graph(data_dir / "graphs" / f"{tag}_gs.json")
        gt = load_graph(data_dir / "graphs" / f"{tag}_gt.json")
        found = derive_partners(gt, 2, d, "torus")
        assert len(found) == 1
        assert isomorphic(found[0].partner, gs)


def test_derive_h311_partner(data_dir):
    gt = load_graph(data_dir / "graphs" / "fig14_gt.json")
    gp = load_graph(data_dir / "graphs" / "fig14_gp.json")
    found = derive_partners(gt, 1, 1, "klein")
    assert any(isomorphic(p.partner, gp) for p in found)
    assert derive_partners(gt, 1, 2, "klein") == []


# -- figure pairs and filled homology


@pytest.mark.parametrize("tag", ["fig04", "fig05", "fig08", "fig12", "fig14", "fig16", "fig28"])
def test_figure_pairs_reload_and_give_their_group(data_dir, tag):
    meta, c = load_pair(data_dir, tag)
    assert validate_correspondence(c) == []
    faces = []
    for names in meta["homology_faces"]:
        ids = {c.gt.edge_index(n) for n in names}
        faces.append(next(i for i, f in enumerate(c.gt.faces) if set(f.edge_ids) == ids))
    assert str(filled_homology(c, faces)) == meta["group"]
    assert str(group_of(filled_presentation(c, faces))) == meta["group"]


def test_partner_faces_alone_leave_free_homology(data_dir):
    _, c = load_pair(data_dir, "fig05")
    assert filled_homology(c, []).free_rank > 0


def test_correspondence_from_names_rejects_mismatch(data_dir):
    gs = load_graph(data_dir / "graphs" / "fig05_gs.json")
    gt = load_graph(data_dir / "graphs" / "fig05_gt.json")
    with pytest.raises(ValueError):
        correspondence_from_names(gs, gt, 1)


# -- catalog


def test_catalog_loads_and_has_unique_ids(data_dir):
    cases = load_catalog(data_dir / "cases")
    assert len({c["id"] for c in cases}) == len(cases) >= 20


def test_catalog_errors(tmp_path):
    (tmp_path / "bad.json").write_text("[{\"id\": 1}]")
    with pytest.raises(CatalogError):
        load_catalog(tmp_path)
    with pytest.raises(CatalogError):
        load_catalog(tmp_path / "missing")
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(CatalogError):
        load_catalog(tmp_path / "bad.json")
    (tmp_path / "bad.json").write_text('[{"id": "x", "kind": "weird"}]')
    with pytest.raises(CatalogError):
        run_case(load_catalog(tmp_path)[0])


@pytest.mark.parametrize("case_id", ["t1.jump1", "t1.jump2", "t2.(4,4,1,1)", "klein.p1.H'(3,4,3)",
                                     "klein.p1.t1", "t2.opposite_signs", "klein.p1.H'(2,4,4)"])
def test_catalog_cases_match_expectations(data_dir, case_id):
    case = next(c for c in load_catalog(data_dir / "cases") if c["id"] == case_id)
    report = run_case(case)
    assert report.matches, report
    from dehnfill.cli import _slug
    golden = json.loads((data_dir / "expected" / (_slug(case_id) + ".json")).read_text())
    assert golden["verdict"] == report.verdict
