"""Combinatorial lemma checkers over labeled graphs, face censuses and quintuples.

Checkers never raise on a failed lemma: they return lists of
:class:`Violation` values, so a caller can report every reason a
configuration dies.  An empty list from every checker is what
"admissible" means elsewhere in the package.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import combinations, product
from math import gcd
from typing import Iterable, Mapping, Sequence

from .graph import (CLASS_NAMES, LOOP, Color, ColorError, EdgeSign, FaceWalk,
                    RotationGraph, Surface, subgraph_is_essential)


@dataclass(frozen=True)
class Violation:
    checker: str
    lemma_tag: str
    subject: str
    detail: str
    kind: str = "violation"  # or "flag": a permitted but consequential branch

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def only_violations(items: Iterable[Violation]) -> list[Violation]:
    return [v for v in items if v.kind == "violation"]


# -- jumping number ------------------------------------------------------------


def jumping_permutation(d: int) -> tuple[int, ...]:
    """Position k on the second curve holds point index ``k*d mod 5`` (0-based)."""
    if d % 5 == 0:
        raise ValueError("jumping number must be prime to 5")
    return tuple((k * d) % 5 for k in range(5))


def jumping_order(d: int, interleaved: bool = False) -> list[str]:
    """Cyclic order of intersection points on a boundary of the second graph.

    ``a1..a5`` are numbered along the first curve.  With ``interleaved`` a
    second vertex contributes ``b1..b5`` right after the matching ``a``.
    """
    if d not in (1, 2):
        raise ValueError("jumping number is normalized to 1 or 2")
    order = [f"a{i + 1}" for i in jumping_permutation(d)]
    if not interleaved:
        return order
    return [tag for a in order for tag in (a, "b" + a[1:])]


# -- parity rule ---------------------------------------------------------------


def _check_bijection(edge_map: Mapping[int, int], n1: int, n2: int) -> None:
    if n1 != n2 or sorted(edge_map) != list(range(n1)) or sorted(edge_map.values()) != list(range(n2)):
        raise ValueError("edge correspondence is not a bijection")


def check_parity_rule(g1: RotationGraph, g2: RotationGraph, edge_map: Mapping[int, int]) -> list[Violation]:
    """Every edge must be positive in exactly one of the two graphs."""
    _check_bijection(edge_map, g1.num_edges, g2.num_edges)
    out = []
    for e1 in sorted(edge_map):
        e2 = edge_map[e1]
        s1, s2 = g1.edge_sign(e1), g2.edge_sign(e2)
        if s1 == s2:
            out.append(Violation("parity", "parity", f"edge {_edge_name(g1, e1)}~{_edge_name(g2, e2)}",
                                 f"{s1.value} in both graphs"))
    return out


def _edge_name(g: RotationGraph, e: int) -> str:
    return g.edges[e].name or str(e)


# -- parallel families -----------------------------------------------------------


@dataclass(frozen=True)
class ParallelFamily:
    edges: tuple[int, ...]
    endpoints: tuple[int, int]
    sign: EdgeSign
    cls: str | None

    def __len__(self) -> int:
        return len(self.edges)


def parallel_families(g: RotationGraph) -> list[ParallelFamily]:
    """Maximal chains of edges joined by bigon faces, in successive order."""
    links: dict[int, set[int]] = {e: set() for e in range(g.num_edges)}
    for f in g.faces:
        if f.degree == 2:
            a, b = f.edge_ids
            if a != b:
                links[a].add(b)
                links[b].add(a)
    seen: set[int] = set()
    out = []
    for e in range(g.num_edges):
        if e in seen:
            continue
        comp, stack = [], [e]
        seen.add(e)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in links[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        ends = sorted(x for x in comp if len(links[x]) <= 1)
        start = ends[0] if ends else min(comp)
        chain, prev = [start], None
        while len(chain) < len(comp):
            nxt = min(y for y in links[chain[-1]] if y != prev and y not in chain)
            prev = chain[-1]
            chain.append(nxt)
        first = g.edges[chain[0]]
        u, v = sorted((first.ends[0][0], first.ends[1][0]))
        out.append(ParallelFamily(tuple(chain), (u, v), g.edge_sign(chain[0]), first.cls))
    return out


def family_index(g: RotationGraph) -> list[int]:
    """``index[e]`` is the position of edge e's family in :func:`parallel_families`."""
    idx = [0] * g.num_edges
    for i, fam in enumerate(parallel_families(g)):
        for e in fam.edges:
            idx[e] = i
    return idx


def nonparallel_count(g: RotationGraph, u: int, v: int) -> int:
    """Number of mutually non-parallel edges joining u and v (families between them)."""
    key = tuple(sorted((u, v)))
    return sum(1 for fam in parallel_families(g) if fam.endpoints == key)


def check_double_parallel(g1: RotationGraph, g2: RotationGraph, edge_map: Mapping[int, int]) -> list[Violation]:
    """No two edges may be parallel in both graphs."""
    idx2 = family_index(g2)
    out = []
    for fam in parallel_families(g1):
        images: dict[int, int] = {}
        for e in fam.edges:
            f2 = idx2[edge_map[e]]
            if f2 in images:
                out.append(Violation("double_parallel", "double_parallel",
                                     f"edges {_edge_name(g1, images[f2])},{_edge_name(g1, e)}",
                                     "parallel in both graphs"))
            else:
                images[f2] = e
    return out


# -- caps on parallel families -----------------------------------------------------

CONTEXTS = ("GS", "GT_allSameSign", "GP")


def check_parallelism_bounds(g: RotationGraph, ctx: str,
                             partner_same_sign: bool | None = None) -> list[Violation]:
    """Size caps on families of mutually parallel edges.

    ``GS``: positive families hold at most t/2+1 edges (t >= 3), every family
    at most 2t (t >= 4), and a negative family longer than t needs a
    same-sign partner and a single-orbit associated permutation.
    ``GT_allSameSign``: at most three mutually parallel edges.
    ``GP``: positive families at most t/2+2 (t >= 3, with t/2+2 flagged),
    negative at most t when a positive edge exists (t >= 2), all at most 2t.
    """
    if ctx not in CONTEXTS:
        raise ValueError(f"unknown context {ctx!r}")
    t = g.partner_count
    fams = parallel_families(g)
    out = []

    def hit(tag, fam, detail, kind="violation"):
        out.append(Violation("parallelism", tag, f"family {_family_name(g, fam)}", detail, kind))

    if ctx == "GT_allSameSign":
        for fam in fams:
            if len(fam) > 3:
                hit("cap.gt_same_sign", fam, f"{len(fam)} > 3 mutually parallel edges")
        return out
    if ctx == "GS":
        for fam in fams:
            n = len(fam)
            if t >= 3 and fam.sign is EdgeSign.POSITIVE and 2 * n > t + 2:
                hit("cap.positive.gs", fam, f"{n} > t/2+1 = {t / 2 + 1:g}")
            if t >= 4 and n > 2 * t:
                hit("cap.total.gs", fam, f"{n} > 2t = {2 * t}")
            if t >= 3 and fam.sign is EdgeSign.NEGATIVE and n > t:
                if partner_same_sign is False:
                    hit("cap.negative.gs", fam, f"{n} > t = {t} but partner vertices differ in sign")
                try:
                    h, single = associated_permutation(g, fam)
                except ValueError as exc:
                    hit("cap.negative.gs.orbit", fam, str(exc))
                else:
                    if not single:
                        hit("cap.negative.gs.orbit", fam, f"shift {h} mod {t} has several orbits")
        return out
    has_positive = any(g.edge_sign(e) is EdgeSign.POSITIVE for e in range(g.num_edges))
    for fam in fams:
        n = len(fam)
        if t >= 4 and n > 2 * t:
            hit("cap.total.gp", fam, f"{n} > 2t = {2 * t}")
        if t >= 3 and fam.sign is EdgeSign.POSITIVE:
            if 2 * n > t + 4:
                hit("cap.positive.gp", fam, f"{n} > t/2+2 = {t / 2 + 2:g}")
            elif 2 * n == t + 4:
                if t % 4:
                    hit("cap.positive.gp.mod4", fam, f"{n} = t/2+2 needs t = 0 mod 4")
                else:
                    hit("branch.klein_beta", fam, f"{n} = t/2+2: the other filling holds a Klein bottle",
                        "flag")
        if t >= 2 and has_positive and fam.sign is EdgeSign.NEGATIVE and n > t:
            hit("cap.negative.gp", fam, f"{n} > t = {t} with a positive edge present")
    return out


def _family_name(g: RotationGraph, fam: ParallelFamily) -> str:
    names = [_edge_name(g, e) for e in fam.edges]
    return names[0] if len(names) == 1 else f"{names[0]}..{names[-1]}"


# -- associated permutation --------------------------------------------------------


def shift_orbits(h: int, t: int) -> int:
    """Number of orbits of k -> k+h on Z/t."""
    return gcd(h % t, t)


def associated_permutation(g: RotationGraph, family: ParallelFamily) -> tuple[int, bool]:
    """Shift h (mod t, up to h -> -h) with sigma(k) = k + h, and whether it is one orbit.

    Edges of the family are oriented so that their first ends are adjacent
    slots; labels at the first ends then step by one, and the labels at the
    second ends must differ from them by a constant.
    """
    t = g.partner_count
    edges = family.edges
    first = [g.edges[edges[0]].ends]
    for e in edges[1:]:
        (pv, ps), _ = first[-1]
        a, b = g.edges[e].ends
        if a[0] == pv and (a[1] - ps) % g.degree in (1, g.degree - 1):
            first.append((a, b))
        elif b[0] == pv and (b[1] - ps) % g.degree in (1, g.degree - 1):
            first.append((b, a))
        else:
            raise ValueError("family edges are not successive")
    xs = [g.label(*a) for a, _ in first]
    ys = [g.label(*b) for _, b in first]
    h = (ys[0] - xs[0]) % t
    if any((y - x) % t != h for x, y in zip(xs, ys)):
        raise ValueError("labels are not related by a shift")
    return h, shift_orbits(h, t) == 1


# -- epsilon constraints -------------------------------------------------------------


def epsilon_feasible(q: Sequence[int], eps: Sequence[int], t: int = 2) -> bool:
    """Class-size caps (2 for loop-type classes, 4 otherwise) and the parity congruence.

    ``q`` is (a1..a4) or a full quintuple (a0..a4); ``t`` is accepted for the
    record, the caps being those of the t=2 setting.
    """
    alpha = tuple(q[-4:])
    eps = tuple(eps)
    if len(eps) != 4 or any(e not in (0, 1) for e in eps):
        raise ValueError("epsilon vector needs four entries in {0, 1}")
    for a, e in zip(alpha, eps):
        if a > (4 if e else 2):
            return False
    return len({(a + e) % 2 for a, e in zip(alpha, eps)}) == 1


def feasible_epsilons(q: Sequence[int], t: int = 2) -> list[tuple[int, ...]]:
    return [eps for eps in product((0, 1), repeat=4) if epsilon_feasible(q, eps, t)]


# -- face census ----------------------------------------------------------------------


@dataclass(frozen=True)
class FaceInfo:
    degree: int
    color: Color | None = None
    labels: tuple[str, ...] = ()  # edge class labels around the face, cyclic

    @property
    def label_set(self) -> frozenset[str]:
        return frozenset(self.labels)


@dataclass(frozen=True)
class FaceCensus:
    t: int
    D: int
    D2: int
    D3: int
    faces: tuple[FaceInfo, ...] = ()

    def __post_init__(self):
        if min(self.t, self.D, self.D2, self.D3) < 0:
            raise ValueError("census counts must be nonnegative")
        if self.D2 + self.D3 > self.D:
            raise ValueError("D2 + D3 exceeds D")

    @classmethod
    def from_faces(cls, t: int, faces: Sequence[FaceInfo]) -> FaceCensus:
        degs = Counter(f.degree for f in faces)
        return cls(t, len(faces), degs[2], degs[3], tuple(faces))

    @property
    def only_bigons_and_trigons(self) -> bool:
        return self.D == self.D2 + self.D3


def face_census(g: RotationGraph, classes: Mapping[int, str] | None = None,
                colored: bool = True) -> FaceCensus:
    """Census of ``g``'s faces (all faces are disks for a valid graph).

    ``classes`` gives each edge its edge class label (defaults to the
    graph's own ``cls`` annotation); colors need ``partner_count == 2``.
    """
    infos = []
    for f in g.faces:
        color = g.face_color(f) if colored and g.partner_count == 2 else None
        labels = tuple((classes[e] if classes is not None else g.edges[e].cls) or "?"
                       for e in f.edge_ids)
        infos.append(FaceInfo(f.degree, color, labels))
    return FaceCensus.from_faces(g.num_vertices, infos)


def face_census_feasible(c: FaceCensus) -> list[Violation]:
    """Counting bounds for an all-same-sign graph with only disk faces: D=4t,
    D2>=2t, 2*D2+D3>=6t, and D2=2t forces D3=2t with nothing larger."""
    t = c.t
    out = []

    def hit(tag, detail):
        out.append(Violation("face_census", tag, f"t={t}", detail))

    if c.D != 4 * t:
        hit("census.D", f"D = {c.D} != 4t = {4 * t}")
    if c.D2 < 2 * t:
        hit("census.D2", f"D2 = {c.D2} < 2t = {2 * t}")
    if 2 * c.D2 + c.D3 < 6 * t:
        hit("census.2D2+D3", f"2*{c.D2}+{c.D3} = {2 * c.D2 + c.D3} < 6t = {6 * t}")
    if c.D2 == 2 * t and (c.D3 != 2 * t or not c.only_bigons_and_trigons):
        hit("census.D2_equality", f"D2 = 2t but D3 = {c.D3}, D = {c.D}")
    return out


# -- bigon/trigon color constraints ------------------------------------------------------


def class_adjacency(gs: RotationGraph, vertex: int = 0) -> frozenset[frozenset[str]]:
    """Pairs of edge classes whose ends are successive at ``vertex``."""
    rot = gs.rotation[vertex]
    out = set()
    for k in range(len(rot)):
        a = gs.edges[rot[k] >> 1]
        b = gs.edges[rot[(k + 1) % len(rot)] >> 1]
        if a.cls and b.cls and a.cls != b.cls and LOOP not in (a.cls, b.cls) and not (a.is_loop or b.is_loop):
            out.add(frozenset((a.cls, b.cls)))
    return frozenset(out)


STANDARD_ADJACENCY = frozenset(frozenset(p) for p in
                               (("lambda", "mu"), ("mu", "nu"), ("nu", "pi"), ("pi", "lambda")))


def _is_good(face: FaceInfo) -> bool:
    labs = face.labels
    n = len(labs)
    consecutive = {labs[i] for i in range(n) if labs[i] == labs[(i + 1) % n]} if n > 1 else set()
    return any(x not in consecutive for x in face.label_set)


def bigon_color_constraints(c: FaceCensus,
                            class_adjacency: Iterable[Iterable[str]] = STANDARD_ADJACENCY,
                            classes: Sequence[str] = CLASS_NAMES) -> list[Violation]:
    """Color rules for bigons, trigons and good faces of an all-same-sign graph."""
    adjacency = {frozenset(p) for p in class_adjacency}
    allc = frozenset(classes)
    bigons = [f for f in c.faces if f.degree == 2]
    trigons = [f for f in c.faces if f.degree == 3]
    out = []

    def hit(tag, subject, detail):
        out.append(Violation("bigon_color", tag, subject, detail))

    def show(pair):
        return "{" + ",".join(sorted(pair)) + "}"

    by_color: dict[Color, set[frozenset[str]]] = {}
    for b in bigons:
        by_color.setdefault(b.color, set()).add(b.label_set)
    for color, pairs in sorted(by_color.items(), key=lambda kv: str(kv[0])):
        if len(pairs) > 1:
            hit("bigon.same_color_pair", f"{_cname(color)} bigons",
                "pairs " + " ".join(show(p) for p in sorted(pairs, key=sorted)))
    black = by_color.get(Color.BLACK, set())
    white = by_color.get(Color.WHITE, set())
    for pb in sorted(black, key=sorted):
        for pw in sorted(white, key=sorted):
            if pb == pw:
                hit("bigon.black_white_same_pair", f"pair {show(pb)}", "black and white bigons share it")
            elif not (pb & pw):
                if pb in adjacency or pw in adjacency:
                    hit("bigon.disjoint_adjacent", f"pairs {show(pb)} {show(pw)}",
                        "disjoint pairs must both be non-adjacent")
                if trigons:
                    hit("trigon.disjoint_bigons", f"pairs {show(pb)} {show(pw)}",
                        f"{len(trigons)} trigon(s) present")
    for color, pairs in sorted(by_color.items(), key=lambda kv: str(kv[0])):
        same = [f for f in trigons if f.color == color]
        for pair in sorted(pairs, key=sorted):
            if len(pair) != 2:
                continue
            if pair not in adjacency:
                if same:
                    hit("trigon.nonadjacent_bigon", f"{_cname(color)} bigon {show(pair)}",
                        f"{len(same)} {_cname(color)} trigon(s)")
            else:
                other = allc - pair
                bad = [f for f in same if f.label_set != other]
                if bad:
                    hit("trigon.adjacent_bigon_labels", f"{_cname(color)} bigon {show(pair)}",
                        "trigon labels " + " ".join(show(f.label_set) for f in bad))
    good: dict[frozenset[str], set[Color]] = {}
    for f in c.faces:
        if len(f.label_set) == 2 and _is_good(f):
            good.setdefault(f.label_set, set()).add(f.color)
    for pair, colors in sorted(good.items(), key=lambda kv: sorted(kv[0])):
        if Color.BLACK in colors and Color.WHITE in colors:
            hit("good_face.both_colors", f"pair {show(pair)}", "good faces of both colors")
    return out


def _cname(color: Color | None) -> str:
    return color.value if color is not None else "uncolored"


# -- Scharlemann cycles ------------------------------------------------------------------


@dataclass(frozen=True)
class ScharlemannCycle:
    face: int
    edges: tuple[int, ...]
    label_pair: tuple[int, int]
    length: int
    essential: bool | None


def scharlemann_cycles(g: RotationGraph, partner: RotationGraph | None = None,
                       edge_map: Mapping[int, int] | None = None) -> list[ScharlemannCycle]:
    """Faces bounded by positive edges that all carry one label pair {i, i+1}.

    With a torus ``partner`` and ``edge_map``, ``essential`` records whether
    the image edges carry a homologically nontrivial cycle on the partner
    surface (they cannot lie in a disk there).
    """
    t = g.partner_count
    out = []
    if t < 2:
        return out
    for idx, f in enumerate(g.faces):
        pairs = set()
        ok = True
        for e in f.edge_ids:
            if g.edge_sign(e) is not EdgeSign.POSITIVE:
                ok = False
                break
            a, b = g.edge_labels(e)
            if (b - a) % t == 1:
                pairs.add((a, b))
            elif (a - b) % t == 1:
                pairs.add((b, a))
            else:
                ok = False
                break
        if not ok or len(pairs) != 1:
            continue
        pair = pairs.pop()
        essential = None
        if partner is not None and edge_map is not None and partner.surface is Surface.TORUS:
            essential = subgraph_is_essential(partner, (edge_map[e] for e in f.edge_ids))
        out.append(ScharlemannCycle(idx, f.edge_ids, pair, f.degree, essential))
    return out


def check_scharlemann_essential(g: RotationGraph, partner: RotationGraph,
                                edge_map: Mapping[int, int]) -> list[Violation]:
    out = []
    for sc in scharlemann_cycles(g, partner, edge_map):
        if sc.essential is False:
            out.append(Violation("scharlemann", "scharlemann.inessential", f"face {sc.face}",
                                 f"label pair {sc.label_pair} edges lie in a disk of the partner"))
    return out


# -- label/sign consistency ----------------------------------------------------------------


def check_label_signs(g: RotationGraph, partner_signs: Sequence[int] | None = None) -> list[Violation]:
    """Sign constraints forced by the parity rule against an orientable partner.

    An edge with equal end labels is a loop in the partner, hence positive
    there, hence negative here.  Two edges with the same label pair join the
    same two partner vertices, so they share a sign.  With ``partner_signs``
    the sign of every non-loop partner edge is known outright.
    """
    out = []
    by_pair: dict[tuple[int, int], set[EdgeSign]] = {}
    for e in range(g.num_edges):
        a, b = sorted(g.edge_labels(e))
        sign = g.edge_sign(e)
        if a == b:
            if sign is EdgeSign.POSITIVE:
                out.append(Violation("labels", "labels.positive_equal_ends", f"edge {_edge_name(g, e)}",
                                     f"positive ({a},{b})-edge"))
            continue
        by_pair.setdefault((a, b), set()).add(sign)
        if partner_signs is not None:
            partner_positive = partner_signs[a - 1] == partner_signs[b - 1]
            if partner_positive == (sign is EdgeSign.POSITIVE):
                out.append(Violation("labels", "labels.partner_parity", f"edge {_edge_name(g, e)}",
                                     f"({a},{b})-edge has the partner's sign"))
    for (a, b), signs in sorted(by_pair.items()):
        if len(signs) > 1:
            out.append(Violation("labels", "labels.mixed_sign_pair", f"pair ({a},{b})",
                                 "positive and negative edges share a label pair"))
    return out
