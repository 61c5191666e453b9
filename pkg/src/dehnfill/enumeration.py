"""Quintuple canonical forms, quintuple enumeration, and graph pair search.

Pair search model
-----------------
Vertex u_i of the first graph (s vertices, degree 5t) and vertex v_j of the
second (t vertices, degree 5s) meet in five boundary points p = (i, j, n),
n = 0..4.  Along the boundary of u_i, read in the direction of increasing
labels, the points sit at positions ``((d*n) % 5) * t + j``; along v_j they
sit at ``n * s + i``.  A configuration places each graph vertex at a vertex
position, picks a global orientation for each graph, and rotates each vertex
onto its boundary.  Every point then carries one edge end from each graph,
and the configuration is consistent when the two ends of every edge of the
second graph land on the two points of one edge of the first.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations, product
from pathlib import Path
from typing import Iterable, Sequence

from . import constraints as C
from .graph import (ColorError, EdgeSign, GraphError, RotationGraph, build_klein_graph, build_quintuple_graph,
                    load_graph)
from .homology import Presentation, group_of, is_qhs_torus, parametric_group

DEFAULT_NODE_CAP = 10 ** 7


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"search stopped after {nodes} nodes without finishing")
        self.nodes = nodes


class CatalogError(ValueError):
    """Missing or malformed case catalog entry."""


# -- quintuples ------------------------------------------------------------------


def quintuple_orbit(q: Sequence[int]) -> set[tuple[int, ...]]:
    """Images of q under the layout symmetries.

    Four elements in general, dihedral on a1..a4 when a0 = 0.  With a0 = 0
    and exactly one empty class the other three classes are pairwise
    adjacent and every arrangement gives the same torus graph.
    """
    a0, a1, a2, a3, a4 = q
    out = {(a0, a1, a2, a3, a4), (a0, a2, a1, a4, a3), (a0, a3, a4, a1, a2), (a0, a4, a3, a2, a1)}
    if a0 == 0:
        for r in list(out):
            body = r[1:]
            for k in range(4):
                out.add((0,) + body[k:] + body[:k])
        if q[1:].count(0) == 1:
            out.update((0,) + body for body in permutations(q[1:]))
    return out


def canonical_quintuple(q: Sequence[int]) -> tuple[int, ...]:
    if len(q) != 5:
        raise ValueError("a quintuple has five entries")
    return min(quintuple_orbit(tuple(q)))


def paper_form(q: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically greatest orbit member, the way the tuples are usually written."""
    return max(quintuple_orbit(tuple(q)))


RULES = ("epsilon", "caps")


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def quintuple_passes(q: Sequence[int], t: int, rules: Iterable[str]) -> bool:
    rules = set(rules)
    unknown = rules - set(RULES)
    if unknown:
        raise ValueError(f"unknown rules {sorted(unknown)}")
    # epsilon only constrains an all-negative G_S (same-sign G_T), which has no loops
    if "epsilon" in rules and (q[0] or not C.feasible_epsilons(q, t)):
        return False
    if "caps" in rules:
        if t >= 3 and 2 * q[0] > t + 2:
            return False
        if t >= 4 and max(q) > 2 * t:
            return False
    return True


def enumerate_quintuples(t: int, rules: Iterable[str] = (), alpha0: int | None = None) -> list[tuple[int, ...]]:
    """Canonical quintuples with 2*a0 + a1 + ... + a4 = 5t passing every rule, sorted."""
    if t < 1:
        raise ValueError("t must be positive")
    rules = tuple(rules)
    total = 5 * t
    a0_range = range(total // 2 + 1) if alpha0 is None else [alpha0]
    out = set()
    for a0 in a0_range:
        rest = total - 2 * a0
        if rest < 0:
            continue
        for body in _compositions(rest, 4):
            q = (a0,) + body
            if canonical_quintuple(q) == q and quintuple_passes(q, t, rules):
                out.add(q)
    return sorted(out)


# -- correspondences -----------------------------------------------------------------

Point = tuple[int, int, int]


@dataclass(frozen=True)
class EdgeCorrespondence:
    """Consistent placement of a graph pair on the boundary torus.

    ``gs`` and ``gt`` are the input graphs with vertices renumbered by
    position, orientation fixed and labels set, so that labels in one graph
    are vertex numbers of the other.  ``edge_map[e]`` is the gt edge sharing
    its two boundary points with gs edge e, and ``points[e]`` lists them
    (in gs end order).
    """

    d: int
    gs: RotationGraph
    gt: RotationGraph
    edge_map: tuple[int, ...]
    points: tuple[tuple[Point, Point], ...]

    def endpoint_data(self) -> list[dict]:
        out = []
        for e, f in enumerate(self.edge_map):
            out.append({"gs_edge": self.gs.edges[e].name or e, "gt_edge": self.gt.edges[f].name or f,
                        "gs_labels": list(self.gs.edge_labels(e)),
                        "gt_labels": sorted(self.gt.edge_labels(f)),
                        "points": [list(p) for p in self.points[e]]})
        return out

    def inverse(self) -> dict[int, int]:
        return {f: e for e, f in enumerate(self.edge_map)}

    def to_dict(self) -> dict:
        return {"d": self.d, "edges": self.endpoint_data(),
                "gs_vertices": [{"sign": s, "label_offset": o} for s, o in zip(self.gs.signs, self.gs.label_offsets)],
                "gt_vertices": [{"sign": s, "label_offset": o} for s, o in zip(self.gt.signs, self.gt.label_offsets)]}


@dataclass
class SearchResult:
    correspondences: list[EdgeCorrespondence]
    nodes: int
    d_values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.correspondences)


def _check_pair(gs: RotationGraph, gt: RotationGraph) -> None:
    if gs.partner_count != gt.num_vertices or gt.partner_count != gs.num_vertices:
        raise GraphError("vertex counts do not match the partner counts")
    if gs.delta != gt.delta:
        raise GraphError("the two graphs disagree on the intersection number")
    if gs.num_edges != gt.num_edges:
        raise GraphError("the two graphs have different edge counts")


def _vertex_darts(g: RotationGraph, vertex: int, sign: int, shift: int) -> list[int]:
    """Dart at each boundary position of ``vertex`` placed with ``shift``."""
    deg = g.degree
    rot = g.rotation[vertex]
    return [rot[(sign * (pos - shift)) % deg] for pos in range(deg)]


def search_pairs(gs: RotationGraph, gt: RotationGraph, d: int | Sequence[int] = (1, 2), *,
                 node_cap: int | None = None, colors: bool = False,
                 rules: Iterable[str] = ("parity", "double_parallel")) -> SearchResult:
    """All consistent correspondences passing the parity and double-parallel rules.

    ``rules`` selects which of the two rules filter the output; an empty
    tuple returns every consistent placement.
    ``colors`` additionally requires every face of ``gt`` to have corners
    on one side (meaningful when gs has two vertices on a separating
    surface).  Raises :class:`SearchBudgetExceeded` past ``node_cap`` nodes,
    so an empty result is always the outcome of a finished search.
    """
    _check_pair(gs, gt)
    rules = frozenset(rules)
    if rules - {"parity", "double_parallel"}:
        raise ValueError(f"unknown search rules {sorted(rules)}")
    d_values = (d,) if isinstance(d, int) else tuple(d)
    if any(x not in (1, 2) for x in d_values):
        raise ValueError("jumping number must be 1 or 2")
    cap = node_cap if node_cap is not None else int(os.environ.get("DGK_NODE_CAP", DEFAULT_NODE_CAP))
    if cap < 1:
        raise ValueError("node cap must be positive")
    s, t, delta = gs.num_vertices, gt.num_vertices, gs.delta
    deg_s, deg_t = gs.degree, gt.degree
    fam_s, fam_t = C.family_index(gs), C.family_index(gt)
    nodes = 0
    found: dict[tuple, EdgeCorrespondence] = {}

    for dj in d_values:
        inv_d = pow(dj, -1, delta)
        # point at boundary position P of u_i: j = P % t, n = (P // t) * d^-1
        pos_s = [((P // t) * inv_d % delta, P % t) for P in range(deg_s)]
        for perm_s in permutations(range(s)):
            for flip_s in (1, -1):
                signs_s = [flip_s * gs.signs[v] for v in perm_s]
                for shifts_s in product(range(deg_s), repeat=s):
                    nodes += s
                    if nodes > cap:
                        raise SearchBudgetExceeded(nodes)
                    dart_at: dict[Point, int] = {}
                    for i, v in enumerate(perm_s):
                        for P, dart in enumerate(_vertex_darts(gs, v, signs_s[i], shifts_s[i])):
                            n, j = pos_s[P]
                            dart_at[(i, j, n)] = dart
                    point_of = {dart: p for p, dart in dart_at.items()}
                    mate = {p: point_of[dart ^ 1] for p, dart in dart_at.items()}
                    for perm_t in permutations(range(t)):
                        for flip_t in (1, -1):
                            signs_t = [flip_t * gt.signs[w] for w in perm_t]
                            nodes = _search_gt(gt, perm_t, signs_t, s, t, deg_t, mate, cap, nodes,
                                               lambda shifts_t: _record(
                                                   found, gs, gt, dj, perm_s, signs_s, shifts_s, perm_t,
                                                   signs_t, shifts_t, dart_at, fam_s, fam_t, colors, rules))
    result = sorted(found.values(), key=lambda c: (c.d, c.edge_map, c.points))
    return SearchResult(result, nodes, d_values)


def _search_gt(gt, perm_t, signs_t, s, t, deg_t, mate, cap, nodes, emit):
    point_of: dict[int, Point] = {}
    shifts = [0] * t

    def place(j):
        nonlocal nodes
        if j == t:
            emit(tuple(shifts))
            return
        w = perm_t[j]
        for c in range(deg_t):
            nodes += 1
            if nodes > cap:
                raise SearchBudgetExceeded(nodes)
            darts = _vertex_darts(gt, w, signs_t[j], c)
            placed = []
            ok = True
            for Q, dart in enumerate(darts):
                p = (Q % s, j, Q // s)
                point_of[dart] = p
                placed.append(dart)
                other = point_of.get(dart ^ 1)
                if other is not None and mate[p] != other:
                    ok = False
                    break
            if ok:
                shifts[j] = c
                place(j + 1)
            for dart in placed:
                del point_of[dart]

    place(0)
    return nodes


def _record(found, gs, gt, d, perm_s, signs_s, shifts_s, perm_t, signs_t, shifts_t, dart_at, fam_s, fam_t,
            colors, rules):
    t_of_point = {}
    for j, w in enumerate(perm_t):
        for Q, dart in enumerate(_vertex_darts(gt, w, signs_t[j], shifts_t[j])):
            t_of_point[(Q % gs.num_vertices, j, Q // gs.num_vertices)] = dart
    edge_map = [0] * gs.num_edges
    points = [None] * gs.num_edges
    ends = {}
    for p, dart in dart_at.items():
        ends[dart] = p
        edge_map[dart >> 1] = t_of_point[p] >> 1
    for e in range(gs.num_edges):
        points[e] = (ends[2 * e], ends[2 * e + 1])
    # relabel: vertex at position i keeps its graph index in the stored graphs' order
    pos_s = [0] * len(perm_s)
    for i, v in enumerate(perm_s):
        pos_s[v] = i
    pos_t = [0] * len(perm_t)
    for j, w in enumerate(perm_t):
        pos_t[w] = j
    gs2 = gs.with_signs([signs_s[pos_s[v]] for v in range(gs.num_vertices)]) \
        .with_labels([shifts_s[pos_s[v]] for v in range(gs.num_vertices)]).permute_vertices(pos_s)
    gt2 = gt.with_signs([signs_t[pos_t[w]] for w in range(gt.num_vertices)]) \
        .with_labels([shifts_t[pos_t[w]] for w in range(gt.num_vertices)]).permute_vertices(pos_t)
    if "parity" in rules:
        for e in range(gs.num_edges):
            if gs2.edge_sign(e) == gt2.edge_sign(edge_map[e]):
                return
    if "double_parallel" in rules:
        seen = set()
        for e in range(gs.num_edges):
            key = (fam_s[e], fam_t[edge_map[e]])
            if key in seen:
                return
            seen.add(key)
    if colors:
        try:
            for f in gt2.faces:
                gt2.face_color(f)
        except ColorError:
            return
    corr = EdgeCorrespondence(d, gs2, gt2, tuple(edge_map), tuple(points))
    key = (d, corr.edge_map, corr.points, gs2.signs, gt2.signs)
    found.setdefault(key, corr)


@dataclass(frozen=True)
class DerivedPartner:
    """A partner graph forced by one placement of a known graph.

    ``partner`` edge e shares its boundary points with ``placed`` edge e.
    """

    d: int
    partner: RotationGraph
    placed: RotationGraph
    placements: int = 1


def derive_partners(gt: RotationGraph, s: int, d: int | Sequence[int] = (1, 2), surface=None,
                    distinct: bool = True, allow_monogons: bool = False) -> list[DerivedPartner]:
    """Every s-vertex partner graph consistent with some placement of ``gt``.

    Placing gt on the boundary fixes the partner's rotation system (the
    points around each u_i are in a known order), and the parity rule fixes
    each partner edge's sign, hence its twist.  Partners that are not
    cellular on ``surface``, that break the double-parallel rule, or that
    have a trivial loop (a face of degree one) are dropped.  With
    ``distinct`` only one partner per isomorphism class is kept, counting
    how many placements produced it.
    """
    from .graph import Edge, Surface, isomorphic

    surface = Surface(surface) if surface is not None else gt.surface
    if gt.partner_count != s:
        raise GraphError("gt's partner count must equal s")
    t, delta = gt.num_vertices, gt.delta
    deg_s, deg_t = delta * t, gt.degree
    d_values = (d,) if isinstance(d, int) else tuple(d)
    fam_t = C.family_index(gt)
    out: list[DerivedPartner] = []
    for dj in d_values:
        for perm_t in permutations(range(t)):
            for flip_t in (1, -1):
                signs_t = [flip_t * gt.signs[w] for w in perm_t]
                for shifts_t in product(range(deg_t), repeat=t):
                    point_of = {}
                    for j, w in enumerate(perm_t):
                        for Q, dart in enumerate(_vertex_darts(gt, w, signs_t[j], shifts_t[j])):
                            point_of[dart] = (Q % s, j, Q // s)
                    pos_t = [0] * t
                    for j, w in enumerate(perm_t):
                        pos_t[w] = j
                    placed = gt.with_signs([signs_t[pos_t[w]] for w in range(t)]) \
                        .with_labels([shifts_t[pos_t[w]] for w in range(t)]).permute_vertices(pos_t)
                    for tail in product((1, -1), repeat=s - 1):
                        signs_s = (1,) + tail
                        edges = []
                        for e in range(gt.num_edges):
                            ends = []
                            for dart in (2 * e, 2 * e + 1):
                                i, j, n = point_of[dart]
                                pos = ((dj * n) % delta) * t + j
                                ends.append((i, pos if signs_s[i] == 1 else (-pos) % deg_s))
                            want_positive = placed.edge_sign(e) is EdgeSign.NEGATIVE
                            same = signs_s[ends[0][0]] == signs_s[ends[1][0]]
                            edges.append(Edge(tuple(ends), int(same != want_positive), gt.edges[e].name))
                        if surface.orientable and any(e.twist for e in edges):
                            continue
                        try:
                            gs = RotationGraph(surface, signs_s, tuple(edges), t, delta)
                        except GraphError:
                            continue
                        if not allow_monogons and any(f.degree == 1 for f in gs.faces):
                            continue
                        fam_s = C.family_index(gs)
                        if len({(fam_s[e], fam_t[e]) for e in range(gs.num_edges)}) < gs.num_edges:
                            continue
                        for k, prev in enumerate(out):
                            if distinct and prev.d == dj and isomorphic(prev.partner, gs):
                                out[k] = DerivedPartner(dj, prev.partner, prev.placed, prev.placements + 1)
                                break
                        else:
                            out.append(DerivedPartner(dj, gs, placed))
    return out


def _filled_complex(c: EdgeCorrespondence, faces: Iterable[int]):
    gs, gt = c.gs, c.gt
    s, m = gs.num_vertices, gs.num_edges
    edges = [(e.ends[0][0], e.ends[1][0]) for e in gs.edges] + [(i, (i + 1) % s) for i in range(s)]
    names = [e.name or f"e{k}" for k, e in enumerate(gs.edges)] + [f"s{i}" for i in range(s)]
    cells = []
    for f in gs.faces:
        row = [0] * (m + s)
        for e, direction in f.edges:
            row[e] += direction
        cells.append(row)
    inv = c.inverse()
    for idx in faces:
        f = gt.faces[idx]
        row = [0] * (m + s)
        for fe, direction in f.edges:
            e = inv[fe]
            start = _gt_point(c, fe, 0 if direction == 1 else 1)
            row[e] += 1 if c.points[e][0] == start else -1
        for v, slot_in, slot_out in f.corners:
            q_in = _gt_position(gt, v, slot_in)
            i = q_in % s
            if (_gt_position(gt, v, slot_out) - q_in) % gt.degree == 1:
                row[m + i] += 1
            else:
                row[m + (i - 1) % s] -= 1
        cells.append(row)
    return s, edges, names, cells


def filled_homology(c: EdgeCorrespondence, faces: Iterable[int]):
    """H_1 of (gs surface) + (filling solid torus) + the chosen gt faces.

    The solid torus contributes one core segment between consecutive gs
    vertices.  A gt face boundary runs along gs edges (through the
    correspondence) and, at each corner, across the segment between the
    two gs vertices whose points the corner joins.
    """
    from .homology import cellular_h1

    s, edges, _, cells = _filled_complex(c, faces)
    return cellular_h1(s, edges, cells)


def filled_presentation(c: EdgeCorrespondence, faces: Iterable[int]) -> Presentation:
    """The same complex as an abelian presentation: spanning tree edges set to zero.

    Generators are the gs edge names outside a spanning tree plus the core
    segments ``s0, s1, ...``; relators are the gs and chosen gt faces.
    """
    s, edges, names, cells = _filled_complex(c, faces)
    parent = list(range(s))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    keep = []
    for k, (a, b) in enumerate(edges):
        ra, rb = root(a), root(b)
        if ra != rb:
            parent[ra] = rb
        else:
            keep.append(k)
    return Presentation(tuple(names[k] for k in keep), tuple(tuple(row[k] for k in keep) for row in cells))


def _gt_position(g: RotationGraph, vertex: int, slot: int) -> int:
    """Boundary position of a slot, in the direction of increasing labels."""
    off = g.label_offsets[vertex]
    return (off + slot) % g.degree if g.signs[vertex] == 1 else (off - slot) % g.degree


def _gt_point(c: EdgeCorrespondence, fe: int, end: int) -> Point:
    return _gt_point_raw(c.gt, c.gs.num_vertices, *c.gt.edges[fe].ends[end])


def correspondence_from_names(gs: RotationGraph, gt: RotationGraph, d: int) -> EdgeCorrespondence:
    """Rebuild a correspondence from two labeled graphs whose edges share names.

    Vertex numbers must be positions and labels must be set, as in the
    graph files written for a pair.  Raises ``ValueError`` when some named
    edge does not occupy the same two boundary points in both graphs.
    """
    _check_pair(gs, gt)
    if d not in (1, 2):
        raise ValueError("jumping number must be 1 or 2")
    s, t, delta = gs.num_vertices, gt.num_vertices, gs.delta
    inv_d = pow(d, -1, delta)
    index_t = {e.name: k for k, e in enumerate(gt.edges)}
    if None in index_t or len(index_t) != gt.num_edges:
        raise ValueError("gt edges need distinct names")
    edge_map, points = [], []
    for k, e in enumerate(gs.edges):
        if e.name not in index_t:
            raise ValueError(f"gs edge {e.name!r} has no gt partner")
        ends = []
        for v, slot in e.ends:
            pos = _gt_position(gs, v, slot)
            ends.append((v, pos % t, (pos // t) * inv_d % delta))
        f = index_t[e.name]
        gt_points = {_gt_point_raw(gt, s, *end) for end in gt.edges[f].ends}
        if set(ends) != gt_points:
            raise ValueError(f"edge {e.name!r} sits on different boundary points in the two graphs")
        edge_map.append(f)
        points.append(tuple(ends))
    if sorted(edge_map) != list(range(gt.num_edges)):
        raise ValueError("edge names do not give a bijection")
    return EdgeCorrespondence(d, gs, gt, tuple(edge_map), tuple(points))


def _gt_point_raw(gt: RotationGraph, s: int, v: int, slot: int) -> Point:
    q = _gt_position(gt, v, slot)
    return (q % s, v, q // s)


def validate_correspondence(c: EdgeCorrespondence) -> list[C.Violation]:
    """Independent re-check of a search result."""
    mapping = dict(enumerate(c.edge_map))
    out = C.check_parity_rule(c.gs, c.gt, mapping) + C.check_double_parallel(c.gs, c.gt, mapping)
    for e, f in mapping.items():
        for end, (i, j, _) in enumerate(c.points[e]):
            v, _slot = c.gs.edges[e].ends[end]
            if v != i or c.gs.dart_label(2 * e + end) != j + 1:
                out.append(C.Violation("correspondence", "labels.endpoint", f"gs edge {e}", "label mismatch"))
        gt_labels = sorted(c.gt.edge_labels(f))
        if gt_labels != sorted(p[0] + 1 for p in c.points[e]):
            out.append(C.Violation("correspondence", "labels.endpoint", f"gt edge {f}", "label mismatch"))
    return out


# -- case catalog ------------------------------------------------------------------------

VERDICTS = ("eliminated", "survives")


@dataclass
class CaseReport:
    case_id: str
    verdict: str
    lemma_tag: str | None
    correspondences_found: int | None = None
    nodes_explored: int | None = None
    group: str | None = None
    expected_verdict: str | None = None
    expected_tag: str | None = None
    detail: str = ""

    @property
    def matches(self) -> bool:
        if self.expected_verdict is None:
            return True
        return self.verdict == self.expected_verdict and (
            self.expected_tag is None or self.lemma_tag == self.expected_tag)

    def to_dict(self) -> dict:
        return {"case_id": self.case_id, "verdict": self.verdict, "lemma_tag": self.lemma_tag,
                "correspondences_found": self.correspondences_found,
                "nodes_explored": self.nodes_explored, "group": self.group, "detail": self.detail}


def load_catalog(path: str | Path) -> list[dict]:
    """Cases from a JSON file or from every ``*.json`` file of a directory, in name order."""
    path = Path(path)
    files = sorted(path.glob("*.json")) if path.is_dir() else [path]
    if not files:
        raise CatalogError(f"no catalog files under {path}")
    cases = []
    for f in files:
        try:
            data = json.loads(f.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CatalogError(f"{f}: {exc}") from exc
        items = data["cases"] if isinstance(data, dict) and "cases" in data else data
        if not isinstance(items, list):
            raise CatalogError(f"{f}: expected a list of cases")
        for item in items:
            if not isinstance(item, dict) or "id" not in item or "kind" not in item:
                raise CatalogError(f"{f}: case without id/kind: {item!r}")
            item = dict(item)
            item["_base"] = str(f.parent)
            cases.append(item)
    ids = [c["id"] for c in cases]
    if len(set(ids)) != len(ids):
        raise CatalogError("duplicate case ids")
    return cases


def _graph(case: dict, key: str) -> RotationGraph:
    spec = case[key]
    if isinstance(spec, str):
        return load_graph(Path(case["_base"]) / spec)
    if isinstance(spec, dict) and "quintuple" in spec:
        signs = tuple(spec.get("signs", (1, -1)))
        return build_quintuple_graph(tuple(spec["quintuple"]), int(spec["t"]), signs=signs)
    if isinstance(spec, dict) and "klein" in spec:
        p0, p1, p2 = spec["p"]
        return build_klein_graph(spec["klein"], p0, p1, p2, int(spec["t"]))
    raise CatalogError(f"case {case['id']}: cannot build {key}")


def _first(violations: list[C.Violation]) -> C.Violation | None:
    real = C.only_violations(violations)
    return real[0] if real else None


def _with_classes(g: RotationGraph) -> RotationGraph:
    """``g`` with parallel-family names filled in where edges carry no class."""
    if all(e.cls for e in g.edges):
        return g
    from dataclasses import replace
    fam = C.family_index(g)
    return replace(g, edges=tuple(e if e.cls else replace(e, cls=f"F{fam[k]}") for k, e in enumerate(g.edges)))


def _classes_from(c: EdgeCorrespondence, on: str):
    """The graph named by ``on``, its edges' partner classes, and the partner's class adjacency."""
    if on == "gt":
        other = _with_classes(c.gs)
        return c.gt, {f: other.edges[e].cls for f, e in c.inverse().items()}, other
    if on == "gs":
        other = _with_classes(c.gt)
        return c.gs, {e: other.edges[f].cls for e, f in enumerate(c.edge_map)}, other
    raise CatalogError(f"census_on must be gs or gt, not {on!r}")


def pair_violations(c: EdgeCorrespondence, census_on: str | None = None,
                    caps: dict[str, str] | None = None) -> list[C.Violation]:
    """Checker verdicts for one placed pair.

    ``census_on`` picks the all-same-sign graph whose faces get the face
    census and bigon color rules, with edge classes read off the other
    graph.  ``caps`` maps "gs"/"gt" to a parallelism context.
    """
    out = validate_correspondence(c)
    if census_on:
        g, classes, other = _classes_from(c, census_on)
        census = C.face_census(g, classes)
        out += C.face_census_feasible(census)
        names = sorted({e.cls for e in other.edges if not e.is_loop})
        adjacency = set()
        for v in range(other.num_vertices):
            adjacency |= C.class_adjacency(other, v)
        out += C.bigon_color_constraints(census, adjacency, names)
    for side, ctx in sorted((caps or {}).items()):
        g, other = (c.gs, c.gt) if side == "gs" else (c.gt, c.gs)
        same = len(set(other.signs)) == 1
        out += C.check_parallelism_bounds(g, ctx, partner_same_sign=same)
    return C.only_violations(out)


def _run_pair(case: dict, rep: "CaseReport", node_cap: int | None) -> None:
    if case["kind"] == "derive":
        known = _graph(case, "graph")
        found = derive_partners(known, int(case["s"]), tuple(case.get("d", (1, 2))), case.get("surface"))
        if not found:
            rep.verdict, rep.lemma_tag = "eliminated", "search.no_partner"
            rep.correspondences_found = 0
            return
        pairs = [(p.partner, known) for p in found]
    else:
        gs = _graph(case, "gs")
        targets = case["gt"] if isinstance(case["gt"], list) else [case["gt"]]
        pairs = [(gs, _graph({**case, "gt": spec}, "gt")) for spec in targets]
    total = nodes = 0
    tags: dict[str, int] = {}
    survivors = 0
    for gs, gt in pairs:
        res = search_pairs(gs, gt, tuple(case.get("d", (1, 2))), node_cap=node_cap,
                           colors=bool(case.get("colors", False)))
        total += len(res)
        nodes += res.nodes
        for c in res.correspondences:
            if case["kind"] == "search":
                survivors += 1
                continue
            v = pair_violations(c, case.get("census_on"), case.get("caps"))
            if v:
                tags[v[0].lemma_tag] = tags.get(v[0].lemma_tag, 0) + 1
            else:
                survivors += 1
    rep.correspondences_found, rep.nodes_explored = total, nodes
    if total == 0:
        rep.verdict, rep.lemma_tag = "eliminated", "search.no_correspondence"
        return
    if tags:
        rep.detail = ", ".join(f"{k}: {n}" for k, n in sorted(tags.items()))
    if survivors == 0:
        rep.verdict = "eliminated"
        rep.lemma_tag = min(tags, key=lambda k: (-tags[k], k))
        return
    rep.detail = (rep.detail + "; " if rep.detail else "") + f"{survivors} surviving correspondences"
    if "presentation" in case:
        grp = group_of(Presentation.load(Path(case["_base"]) / case["presentation"]))
        rep.group = str(grp)
        rep.lemma_tag = "homology.finite" if is_qhs_torus(grp) else "homology.infinite"


def _run_parametric(case: dict, rep: "CaseReport") -> None:
    family = case["family"]
    bound = int(case.get("bound", 20))
    infinite = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            if (a, b) != (0, 0) and not is_qhs_torus(parametric_group(family, (a, b))):
                infinite.append((a, b))
    excluded = {tuple(x) for x in case.get("excluded", ())}
    stray = [x for x in infinite if x not in excluded]
    rep.group = f"Z/|{family}|"
    rep.lemma_tag = "homology.infinite" if stray else "homology.finite"
    rep.detail = f"infinite at {infinite} over |a|,|b| <= {bound}"


def run_case(case: dict, node_cap: int | None = None) -> CaseReport:
    """Evaluate one catalog case.

    Kinds: ``pair`` (search a gs graph against one or more gt graphs, then
    run the case's checkers on every correspondence; ``search`` is the same
    without checkers; ``derive`` builds the partners forced by a known
    graph and treats each as a pair), ``parametric`` (a one-parameter-pair
    family of presentations swept over a box), ``census`` (face census and bigon color rules for a
    quintuple gt), ``labels`` (label/sign checks over every labeling of a
    one-vertex graph), ``homology`` (a presentation file, survives with its
    group) and ``external`` (eliminated by a cited result, recorded as such).
    """
    kind = case["kind"]
    cid = case["id"]
    rep = CaseReport(cid, "survives", None, expected_verdict=case.get("expect", {}).get("verdict"),
                     expected_tag=case.get("expect", {}).get("lemma_tag"))
    try:
        if kind in ("pair", "search", "derive"):
            _run_pair(case, rep, node_cap)
        elif kind == "census":
            reasons = []
            for spec in case["gt"]:
                g = _graph({**case, "gt": spec}, "gt")
                census = C.face_census(g)
                v = _first(C.bigon_color_constraints(census))
                reasons.append((spec["quintuple"], v))
            dead = [v for _, v in reasons if v is not None]
            if len(dead) == len(reasons):
                rep.verdict, rep.lemma_tag = "eliminated", dead[0].lemma_tag
                rep.detail = "; ".join(f"{q}: {v.lemma_tag}" for q, v in reasons)
        elif kind == "labels":
            g = _graph(case, "graph")
            tags = set()
            alive = 0
            for off in range(g.partner_count):
                v = _first(C.check_label_signs(g.with_labels([off] * g.num_vertices)))
                if v is None:
                    alive += 1
                else:
                    tags.add(v.lemma_tag)
            if alive == 0:
                rep.verdict, rep.lemma_tag = "eliminated", sorted(tags)[0]
                rep.detail = "every labeling: " + ",".join(sorted(tags))
        elif kind == "homology":
            pres = Presentation.load(Path(case["_base"]) / case["presentation"])
            grp = group_of(pres)
            rep.group = str(grp)
            rep.lemma_tag = "homology.finite" if is_qhs_torus(grp) else "homology.infinite"
        elif kind == "parametric":
            _run_parametric(case, rep)
        elif kind == "external":
            rep.verdict, rep.lemma_tag = "eliminated", "external." + case["citation"]
        else:
            raise CatalogError(f"case {cid}: unknown kind {kind!r}")
    except KeyError as exc:
        raise CatalogError(f"case {cid}: missing field {exc}") from exc
    return rep


def replay_eliminations(catalog: str | Path | list[dict], node_cap: int | None = None,
                        workers: int = 1) -> list[CaseReport]:
    """Run every catalog case; reports come back in catalog order."""
    cases = load_catalog(catalog) if not isinstance(catalog, list) else catalog
    if workers <= 1:
        return [run_case(c, node_cap) for c in cases]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: run_case(c, node_cap), cases))
