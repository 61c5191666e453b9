"""Acceptance criteria, one pass/fail line each.

Run under pytest (lines go to the terminal report) or directly:
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from dehnfill import constraints as C  # noqa: E402
from dehnfill.constraints import FaceCensus, FaceInfo  # noqa: E402
from dehnfill.enumeration import enumerate_quintuples, paper_form, search_pairs  # noqa: E402
from dehnfill.graph import Color, build_klein_graph, build_quintuple_graph, load_graph  # noqa: E402
from dehnfill.homology import (Presentation, determinant, diagonal, group_of, matmul,  # noqa: E402
                               parametric_group, parametric_presentation, smith_normal_form)
from randgraphs import random_graph  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "data"


def c1_homology_golden():
    expected = {"prop41.txt": "Z/35", "case3331.txt": "Z/2 + Z/30", "prop71.txt": "Z/20",
                "fig14_cells.txt": "Z/4", "lemma_22121.txt": "Z/16", "fig28_cells.txt": "Z/4 + Z/4"}
    start = time.perf_counter()
    got = {name: str(group_of(Presentation.load(DATA / "presentations" / name))) for name in expected}
    elapsed = time.perf_counter() - start
    bad = {k: v for k, v in got.items() if v != expected[k]}
    return not bad and elapsed < 1.0, f"6 groups exact, {elapsed:.3f}s (limit 1s)" + (f", mismatches {bad}" if bad else "")


def c2_parametric():
    start = time.perf_counter()
    for family in ("11p-2q", "11r+2s"):
        for a in range(-20, 21):
            for b in range(-20, 21):
                if (a, b) == (0, 0):
                    continue
                parametric_group(family, (a, b))  # raises on disagreement
    degenerate = [group_of(parametric_presentation("11p-2q", p)) for p in ((2, 11), (-2, -11))]
    elapsed = time.perf_counter() - start
    ok = all(not g.is_finite for g in degenerate) and elapsed < 5.0
    return ok, f"{2 * 41 * 41 - 2} parameter pairs agree, (±2,±11) infinite, {elapsed:.2f}s (limit 5s)"


def c3_enumeration():
    got = enumerate_quintuples(2, ["epsilon"])
    quoted = {(4, 4, 2, 0), (4, 4, 1, 1), (4, 1, 4, 1), (4, 2, 2, 2), (3, 3, 3, 1), (3, 3, 2, 2), (3, 2, 3, 2)}
    ok = got == sorted(got) and len(got) == 7 and {paper_form(q)[1:] for q in got} == quoted
    return ok, f"{len(got)} canonical tuples: " + " ".join("".join(map(str, q)) for q in got)


def c4_elimination():
    gs = build_quintuple_graph((0, 4, 4, 2, 0), 2, signs=(1, -1))
    parts, ok = [], True
    for beta in ((0, 3, 3, 2, 2), (0, 3, 2, 3, 2)):
        gt = build_quintuple_graph(beta, 2, signs=(1, 1))
        start = time.perf_counter()
        res = search_pairs(gs, gt, (1, 2))  # raises if the budget runs out
        elapsed = time.perf_counter() - start
        ok = ok and len(res) == 0 and elapsed < 60
        parts.append(f"G{beta}: {len(res)} found, {res.nodes} nodes, {elapsed:.1f}s")
    return ok, "; ".join(parts) + " (limit 60s each)"


def _random_unimodular(rng, n):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            u[0] = [-x for x in u[0]]
            continue
        c = rng.randint(-3, 3)
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
    return u


def c5_snf_properties():
    rng = random.Random(20240605)
    start = time.perf_counter()
    failures = 0
    for _ in range(10_000):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        a = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(m)]
        d, u, v = smith_normal_form(a)
        diag = diagonal(d)
        nonzero = [x for x in diag if x]
        good = (matmul(matmul(u, a), v) == d
                and abs(determinant(u)) == 1 and abs(determinant(v)) == 1
                and all(nonzero[i + 1] % nonzero[i] == 0 for i in range(len(nonzero) - 1))
                and diag[:len(nonzero)] == nonzero)
        p, q = _random_unimodular(rng, m), _random_unimodular(rng, n)
        good = good and diagonal(smith_normal_form(matmul(matmul(p, a), q))[0]) == diag
        failures += not good
    elapsed = time.perf_counter() - start
    return failures == 0 and elapsed < 30, f"10000 matrices, {failures} failures, {elapsed:.1f}s (limit 30s)"


def _surface_ok(g) -> bool:
    if g.num_vertices - g.num_edges + len(g.faces) != 0:
        return False
    if sum(f.degree for f in g.faces) != 2 * g.num_edges:
        return False
    t = g.partner_count
    for v in range(g.num_vertices):
        labels = [g.label(v, s) for s in range(g.degree)]
        step = 1 if g.signs[v] == 1 else -1
        if any((labels[(s + 1) % g.degree] - labels[s] - step) % t for s in range(g.degree)):
            return False
        if sorted(labels) != sorted(list(range(1, t + 1)) * g.delta):
            return False
    return True


def c6_surface_invariants():
    files = sorted((DATA / "graphs").glob("*.json"))
    bad = [f.name for f in files if not _surface_ok(load_graph(f))]
    rng = random.Random(7)
    random_bad = sum(not _surface_ok(random_graph(rng)) for _ in range(1000))
    ok = not bad and random_bad == 0 and files
    return ok, f"{len(files)} checked-in graphs, 1000 random graphs, {len(bad) + random_bad} failures"


def _checker_cases():
    """(clause, accepting violations, violating violations, tag expected in the latter)."""
    B, W = Color.BLACK, Color.WHITE
    L, M, N, P = "lambda", "mu", "nu", "pi"

    def census(*faces):
        return FaceCensus.from_faces(2, [FaceInfo(len(x), c, tuple(x)) for c, x in faces])

    g3331 = build_quintuple_graph((0, 3, 3, 3, 1), 2, signs=(1, -1))
    ident = {e: e for e in range(g3331.num_edges)}
    swap_signs = build_quintuple_graph((0, 3, 3, 3, 1), 2, signs=(1, 1))
    bigons = C.bigon_color_constraints
    return [
        ("parity", C.check_parity_rule(g3331, swap_signs, ident), C.check_parity_rule(g3331, g3331, ident), "parity"),
        ("cap GS", C.check_parallelism_bounds(build_quintuple_graph((0, 5, 5, 5, 5), 4, signs=(1, -1))
                                              .with_labels([0, 1]), "GS", True),
         C.check_parallelism_bounds(build_quintuple_graph((0, 4, 4, 4, 3), 3, signs=(1, 1)), "GS"),
         "cap.positive.gs"),
        ("cap GT", C.check_parallelism_bounds(swap_signs, "GT_allSameSign"),
         C.check_parallelism_bounds(build_quintuple_graph((0, 4, 4, 2, 0), 2, signs=(1, 1)), "GT_allSameSign"),
         "cap.gt_same_sign"),
        ("cap GP", C.check_parallelism_bounds(build_klein_graph("H", 2, 4, 4, 4), "GP"),
         C.check_parallelism_bounds(build_klein_graph("H", 5, 3, 2, 4), "GP"), "cap.positive.gp"),
        ("epsilon", [] if C.epsilon_feasible((3, 3, 3, 1), (1, 1, 1, 1)) else ["x"],
         [] if C.epsilon_feasible((5, 3, 1, 1), (1, 1, 1, 1)) else ["epsilon"], "epsilon"),
        ("census D=4t", C.face_census_feasible(FaceCensus(2, 8, 4, 4)),
         C.face_census_feasible(FaceCensus(2, 7, 4, 3)), "census.D"),
        ("census D2>=2t", C.face_census_feasible(FaceCensus(2, 8, 5, 2)),
         C.face_census_feasible(FaceCensus(2, 8, 3, 5)), "census.D2"),
        ("census 2D2+D3>=6t", C.face_census_feasible(FaceCensus(3, 12, 7, 4)),
         C.face_census_feasible(FaceCensus(3, 12, 6, 5)), "census.2D2+D3"),
        ("bigon (1)", bigons(census((B, (L, N)), (B, (L, N)))),
         bigons(census((B, (L, N)), (B, (M, P)))), "bigon.same_color_pair"),
        ("bigon (3)", bigons(census((B, (L, N)), (W, (M, P)))),
         bigons(census((B, (L, N)), (W, (L, N)))), "bigon.black_white_same_pair"),
        ("bigon (4)", bigons(census((B, (L, M)), (B, (N, P, P)))),
         bigons(census((B, (L, M)), (B, (L, N, P)))), "trigon.adjacent_bigon_labels"),
        ("bigon (5)", bigons(census((B, (L, N)), (W, (M, P)))),
         bigons(census((B, (L, N)), (W, (M, P)), (W, (L, L, M)))), "trigon.disjoint_bigons"),
        ("bigon (6)", bigons(census((B, (L, L, M)), (B, (L, M, M)))),
         bigons(census((B, (L, L, M)), (W, (L, M, M)))), "good_face.both_colors"),
        ("jumping d=1", [] if C.jumping_order(1) == ["a1", "a2", "a3", "a4", "a5"] else ["x"],
         [] if C.jumping_order(1) == C.jumping_order(2) else ["jump"], "jump"),
        ("jumping d=2", [] if C.jumping_order(2) == ["a1", "a3", "a5", "a2", "a4"] else ["x"],
         [] if C.jumping_order(2) == ["a1", "a2", "a3", "a4", "a5"] else ["jump"], "jump"),
    ]


def _tags(items):
    return {x if isinstance(x, str) else x.lemma_tag for x in items
            if isinstance(x, str) or x.kind == "violation"}


def c7_checker_suite():
    cases = _checker_cases()
    failed = [clause for clause, accept, violate, tag in cases if _tags(accept) or tag not in _tags(violate)]
    return not failed, f"{len(cases)} clauses with an accepting and a violating case" + (
        f", failed: {failed}" if failed else "")


CRITERIA = [
    ("1 homology golden suite", c1_homology_golden),
    ("2 parametric families", c2_parametric),
    ("3 quintuple enumeration", c3_enumeration),
    ("4 elimination replay", c4_elimination),
    ("5 SNF property suite", c5_snf_properties),
    ("6 surface invariants", c6_surface_invariants),
    ("7 lemma-checker suite", c7_checker_suite),
]


def _line(name, ok, detail):
    return f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})"


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, fn, request):
    ok, detail = fn()
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.write_line("")
        reporter.write_line(_line(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(name, *fn()) for name, fn in CRITERIA]
    for name, ok, detail in results:
        print(_line(name, ok, detail))
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
