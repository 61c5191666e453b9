"""Labeled fat graphs on the torus and the Klein bottle.

A graph is stored as a rotation system: every edge has two ends, each end
sits in a numbered slot of a vertex, and slots are read counterclockwise in
the vertex's local frame.  Edges carry a twist flag (always 0 on the torus).
Edge-end labels are not stored; they follow from the vertex sign and a
per-vertex label offset, so that around every vertex the labels
``1..partner_count`` repeat ``delta`` times.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .homology import smith_normal_form

PLUS, MINUS = 1, -1


class GraphError(ValueError):
    """Invalid graph data (bad rotation, wrong degree, wrong surface)."""


class ColorError(ValueError):
    """A face whose corners do not all lie on the same side."""


class Surface(str, enum.Enum):
    TORUS = "torus"
    KLEIN = "klein"

    @property
    def orientable(self) -> bool:
        return self is Surface.TORUS

    @property
    def euler_characteristic(self) -> int:
        return 0


class EdgeSign(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class Color(str, enum.Enum):
    BLACK = "black"
    WHITE = "white"


CLASS_NAMES = ("lambda", "mu", "nu", "pi")
LOOP = "loop"


@dataclass(frozen=True)
class Edge:
    ends: tuple[tuple[int, int], tuple[int, int]]  # (vertex, slot) pairs
    twist: int = 0
    name: str | None = None
    cls: str | None = None

    @property
    def is_loop(self) -> bool:
        return self.ends[0][0] == self.ends[1][0]


@dataclass(frozen=True)
class FaceWalk:
    """Boundary walk of one face.

    ``states`` are (dart, orientation) pairs, a dart being ``2*edge + end``;
    ``edges`` lists (edge, direction) with direction +1 for end 0 -> end 1;
    ``corners`` lists (vertex, slot_in, slot_out).
    """

    states: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...]
    corners: tuple[tuple[int, int, int], ...]

    @property
    def degree(self) -> int:
        return len(self.edges)

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.edges)


@dataclass(frozen=True)
class RotationGraph:
    surface: Surface
    signs: tuple[int, ...]
    edges: tuple[Edge, ...]
    partner_count: int
    delta: int = 5
    label_offsets: tuple[int, ...] = ()
    figure_ref: str | None = None

    def __post_init__(self):
        if not isinstance(self.surface, Surface):
            object.__setattr__(self, "surface", Surface(self.surface))
        object.__setattr__(self, "signs", tuple(self.signs))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.label_offsets:
            object.__setattr__(self, "label_offsets", (0,) * len(self.signs))
        object.__setattr__(self, "label_offsets", tuple(self.label_offsets))
        self._validate()

    # -- structure ---------------------------------------------------------

    def _validate(self) -> None:
        n = len(self.signs)
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        if self.partner_count < 1 or self.delta < 1:
            raise GraphError("partner_count and delta must be positive")
        if any(s not in (PLUS, MINUS) for s in self.signs):
            raise GraphError("vertex signs must be +1 or -1")
        if len(self.label_offsets) != n:
            raise GraphError("one label offset per vertex")
        deg = self.degree
        seen = [[False] * deg for _ in range(n)]
        for i, e in enumerate(self.edges):
            if len(e.ends) != 2:
                raise GraphError(f"edge {i} must have two ends")
            if e.twist not in (0, 1):
                raise GraphError(f"edge {i} twist must be 0 or 1")
            if e.twist and self.surface is Surface.TORUS:
                raise GraphError(f"edge {i} is twisted on the torus")
            for v, s in e.ends:
                if not (0 <= v < n and 0 <= s < deg):
                    raise GraphError(f"edge {i} end ({v}, {s}) out of range")
                if seen[v][s]:
                    raise GraphError(f"slot ({v}, {s}) used twice")
                seen[v][s] = True
        if not all(all(row) for row in seen):
            raise GraphError(f"every vertex needs exactly {deg} edge ends")
        if self.is_orientable != self.surface.orientable:
            raise GraphError(f"ribbon structure is not a {self.surface.value} embedding")
        chi = n - len(self.edges) + len(self.faces)
        if chi != self.surface.euler_characteristic:
            raise GraphError(f"V - E + F = {chi}: not a cellular {self.surface.value} embedding")

    @property
    def num_vertices(self) -> int:
        return len(self.signs)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def degree(self) -> int:
        return self.delta * self.partner_count

    @cached_property
    def rotation(self) -> tuple[tuple[int, ...], ...]:
        """``rotation[v][slot]`` is the dart in that slot."""
        rot = [[-1] * self.degree for _ in self.signs]
        for i, e in enumerate(self.edges):
            for k, (v, s) in enumerate(e.ends):
                rot[v][s] = 2 * i + k
        return tuple(tuple(r) for r in rot)

    def dart_end(self, dart: int) -> tuple[int, int]:
        return self.edges[dart >> 1].ends[dart & 1]

    def label(self, vertex: int, slot: int) -> int:
        """Label (1-based) of the edge end in ``slot`` of ``vertex``."""
        off = self.label_offsets[vertex]
        if self.signs[vertex] == PLUS:
            return (slot + off) % self.partner_count + 1
        return (off - slot) % self.partner_count + 1

    def dart_label(self, dart: int) -> int:
        return self.label(*self.dart_end(dart))

    def edge_labels(self, e: int) -> tuple[int, int]:
        return self.dart_label(2 * e), self.dart_label(2 * e + 1)

    def labels(self) -> list[list[int]]:
        return [[self.label(v, s) for s in range(self.degree)] for v in range(self.num_vertices)]

    @cached_property
    def is_orientable(self) -> bool:
        return self._frame_flips() is not None

    def _frame_flips(self) -> list[int] | None:
        """Vertex frame flips making every twist vanish, or None."""
        n = self.num_vertices
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for e in self.edges:
            (u, _), (v, _) = e.ends
            if u == v:
                if e.twist:
                    return None
                continue
            adj[u].append((v, e.twist))
            adj[v].append((u, e.twist))
        flip = [-1] * n
        for root in range(n):
            if flip[root] >= 0:
                continue
            flip[root] = 0
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for v, tw in adj[u]:
                    want = flip[u] ^ tw
                    if flip[v] < 0:
                        flip[v] = want
                        queue.append(v)
                    elif flip[v] != want:
                        return None
        return flip

    # -- faces -------------------------------------------------------------

    def _step(self, dart: int, o: int) -> tuple[int, int, int, int]:
        """Traverse ``dart``'s edge; return (next dart, orientation, vertex, slot)."""
        e = self.edges[dart >> 1]
        other = dart ^ 1
        o2 = -o if e.twist else o
        v, s = e.ends[other & 1]
        s2 = (s + o2) % self.degree
        return self.rotation[v][s2], o2, v, s

    def _mirror(self, dart: int, o: int) -> tuple[int, int]:
        return dart ^ 1, (o if self.edges[dart >> 1].twist else -o)

    @cached_property
    def faces(self) -> tuple[FaceWalk, ...]:
        """All faces, each traced once, in a deterministic order."""
        # priority: orientation +1 first, then dart number
        states = sorted(((d, o) for o in (1, -1) for d in range(2 * self.num_edges)),
                        key=lambda st: (st[1] != 1, st[0]))
        done: set[tuple[int, int]] = set()
        out = []
        for start in states:
            if start in done:
                continue
            walk_states, edges, corners = [], [], []
            cur = start
            while True:
                walk_states.append(cur)
                d, o = cur
                nxt_dart, o2, v, s = self._step(d, o)
                edges.append((d >> 1, 1 if (d & 1) == 0 else -1))
                corners.append((v, s, self.dart_end(nxt_dart)[1]))
                cur = (nxt_dart, o2)
                if cur == start:
                    break
            done.update(walk_states)
            done.update(self._mirror(*st) for st in walk_states)
            out.append(FaceWalk(tuple(walk_states), tuple(edges), tuple(corners)))
        return tuple(out)

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + len(self.faces)

    # -- signs, colors -----------------------------------------------------

    def edge_sign(self, e: int) -> EdgeSign:
        edge = self.edges[e]
        (u, _), (v, _) = edge.ends
        same = self.signs[u] == self.signs[v]
        return EdgeSign.POSITIVE if same != bool(edge.twist) else EdgeSign.NEGATIVE

    def corner_interval(self, vertex: int, slot_a: int, slot_b: int) -> tuple[int, int]:
        """Labels at the two ends of a corner, read along the vertex boundary orientation.

        ``slot_a`` and ``slot_b`` must be adjacent in the rotation.
        """
        deg = self.degree
        if (slot_b - slot_a) % deg == 1:
            lo, hi = slot_a, slot_b
        elif (slot_a - slot_b) % deg == 1:
            lo, hi = slot_b, slot_a
        else:
            raise GraphError("corner slots are not adjacent")
        a, b = self.label(vertex, lo), self.label(vertex, hi)
        return (a, b) if self.signs[vertex] == PLUS else (b, a)

    def face_color(self, face: FaceWalk) -> Color:
        """Side of a separating two-vertex partner surface containing ``face``.

        A corner spanning labels 1 -> 2 is black, 2 -> 1 white.
        """
        if self.partner_count != 2:
            raise ColorError("face colors need a partner graph with exactly two vertices")
        colors = set()
        for v, a, b in face.corners:
            interval = self.corner_interval(v, a, b)
            colors.add(Color.BLACK if interval == (1, 2) else Color.WHITE)
        if len(colors) != 1:
            raise ColorError("face corners lie on both sides")
        return colors.pop()

    # -- edge classes ------------------------------------------------------

    def edge_class(self, e: int) -> str | None:
        return self.edges[e].cls

    # -- transformations ---------------------------------------------------

    def with_labels(self, offsets: Sequence[int]) -> RotationGraph:
        return replace(self, label_offsets=tuple(offsets))

    def with_signs(self, signs: Sequence[int]) -> RotationGraph:
        return replace(self, signs=tuple(signs))

    def rotated(self, vertex: int, shift: int) -> RotationGraph:
        """Renumber the slots of ``vertex`` by ``slot -> slot + shift``; labels follow."""
        deg = self.degree
        edges = tuple(replace(e, ends=tuple((v, (s + shift) % deg) if v == vertex else (v, s)
                                            for v, s in e.ends)) for e in self.edges)
        offs = list(self.label_offsets)
        offs[vertex] = offs[vertex] - shift if self.signs[vertex] == PLUS else offs[vertex] + shift
        return replace(self, edges=edges, label_offsets=tuple(o % self.partner_count for o in offs))

    def reframed(self, vertex: int) -> RotationGraph:
        """Reverse the local frame of ``vertex``: rotation reversed, incident twists and sign flipped.

        Labels, edge signs and faces are unchanged.  Torus graphs only allow
        this when every vertex is reframed (a mirror image), so it is meant
        for Klein bottle graphs.
        """
        deg = self.degree
        edges = []
        for e in self.edges:
            ends = tuple((v, (-s) % deg) if v == vertex else (v, s) for v, s in e.ends)
            hits = sum(v == vertex for v, _ in e.ends)
            edges.append(replace(e, ends=ends, twist=e.twist ^ (hits % 2)))
        signs = list(self.signs)
        signs[vertex] = -signs[vertex]
        return replace(self, edges=tuple(edges), signs=tuple(signs))

    def normalize_frames(self) -> RotationGraph:
        """Reframe vertices so that edges of a BFS spanning forest are untwisted."""
        g = self
        n = g.num_vertices
        seen = [False] * n
        for root in range(n):
            if seen[root]:
                continue
            seen[root] = True
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for e in g.edges:
                    (a, _), (b, _) = e.ends
                    if a == b or u not in (a, b):
                        continue
                    v = b if a == u else a
                    if not seen[v]:
                        seen[v] = True
                        if e.twist:
                            g = g.reframed(v)
                        queue.append(v)
        return g

    def permute_edges(self, order: Sequence[int]) -> RotationGraph:
        """New graph whose edge ``i`` is old edge ``order[i]``."""
        return replace(self, edges=tuple(self.edges[i] for i in order))

    def permute_vertices(self, perm: Sequence[int]) -> RotationGraph:
        """Old vertex ``v`` becomes vertex ``perm[v]``."""
        inv = [0] * len(perm)
        for old, new in enumerate(perm):
            inv[new] = old
        edges = tuple(replace(e, ends=tuple((perm[v], s) for v, s in e.ends)) for e in self.edges)
        return replace(self, edges=edges,
                       signs=tuple(self.signs[inv[i]] for i in range(len(perm))),
                       label_offsets=tuple(self.label_offsets[inv[i]] for i in range(len(perm))))

    def edge_index(self, name: str) -> int:
        for i, e in enumerate(self.edges):
            if e.name == name:
                return i
        raise KeyError(name)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        data = {
            "surface": self.surface.value,
            "vertices": [{"sign": "+" if s == PLUS else "-", "label_offset": o}
                         for s, o in zip(self.signs, self.label_offsets)],
            "edges": [],
            "t": self.partner_count,
            "delta": self.delta,
        }
        for e in self.edges:
            item = {"ends": [{"vertex": v, "slot": s} for v, s in e.ends], "twist": e.twist}
            if e.name is not None:
                item["name"] = e.name
            if e.cls is not None:
                item["class"] = e.cls
            data["edges"].append(item)
        if self.figure_ref is not None:
            data["figure_ref"] = self.figure_ref
        return data

    @classmethod
    def from_dict(cls, data: dict) -> RotationGraph:
        try:
            signs = []
            for v in data["vertices"]:
                sign = v["sign"]
                if sign in ("+", 1, "plus"):
                    signs.append(PLUS)
                elif sign in ("-", -1, "minus"):
                    signs.append(MINUS)
                else:
                    raise GraphError(f"bad vertex sign {sign!r}")
            offsets = [int(v.get("label_offset", 0)) for v in data["vertices"]]
            edges = []
            for item in data["edges"]:
                ends = tuple((int(x["vertex"]), int(x["slot"])) for x in item["ends"])
                if len(ends) != 2:
                    raise GraphError("an edge needs exactly two ends")
                edges.append(Edge(ends, int(item.get("twist", 0)), item.get("name"), item.get("class")))
            return cls(Surface(data["surface"]), tuple(signs), tuple(edges), int(data["t"]),
                       int(data.get("delta", 5)), tuple(offsets), data.get("figure_ref"))
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph data: {exc!r}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def load_graph(path: str | Path) -> RotationGraph:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path}: {exc}") from exc
    return RotationGraph.from_dict(data)


def dump_graph(g: RotationGraph, path: str | Path) -> None:
    Path(path).write_text(g.to_json() + "\n", encoding="utf-8")


def isomorphic(g: RotationGraph, h: RotationGraph) -> bool:
    """Whether two connected ribbon graphs differ by a surface homeomorphism.

    Vertex signs and labels are ignored; mirror images count as equal.
    Local orientations are tracked through twisted edges, so this works on
    the Klein bottle as well as the torus.
    """
    if g.surface is not h.surface:
        return False
    if (g.num_vertices, g.num_edges, g.degree) != (h.num_vertices, h.num_edges, h.degree):
        return False
    deg = g.degree
    for v2, s2, direction in ((v, s, o) for v in range(h.num_vertices) for s in range(deg) for o in (1, -1)):
        image = {(0, 0): (v2, s2, direction)}
        queue = [(0, 0)]
        ok = True
        while queue and ok:
            v, s = queue.pop()
            w, r, o = image[(v, s)]
            dart, dart2 = g.rotation[v][s], h.rotation[w][r]
            flip = -1 if g.edges[dart >> 1].twist != h.edges[dart2 >> 1].twist else 1
            moves = [((v, (s + 1) % deg), (w, (r + o) % deg, o)),
                     (g.dart_end(dart ^ 1), h.dart_end(dart2 ^ 1) + (o * flip,))]
            for src, dst in moves:
                have = image.get(src)
                if have is None:
                    image[src] = dst
                    queue.append(src)
                elif have != dst:
                    ok = False
                    break
        targets = {(w, r) for w, r, _ in image.values()}
        if ok and len(image) == g.num_vertices * deg and len(targets) == len(image):
            return True
    return False


# -- builders ----------------------------------------------------------------


def _assemble(blocks: dict[int, list[tuple[str, int, int]]], specs: list[tuple[str, str, int]],
              n: int, deg: int) -> list[Edge]:
    """Turn per-vertex block layouts into edges.

    ``blocks[v]`` lists (family, end, position) triples in rotation order;
    ``specs`` gives (family, class, twist).  The k-th edge of a family joins
    its k-th end-0 occurrence with its k-th end-1 occurrence.
    """
    slots: dict[tuple[str, int], dict[int, tuple[int, int]]] = {}
    for v in range(n):
        for s, (fam, end, k) in enumerate(blocks[v]):
            slots.setdefault((fam, end), {})[k] = (v, s)
        if len(blocks[v]) != deg:
            raise GraphError(f"vertex {v} has {len(blocks[v])} ends, expected {deg}")
    edges = []
    for fam, cls, twist in specs:
        a, b = slots.get((fam, 0), {}), slots.get((fam, 1), {})
        for k in sorted(a):
            edges.append(Edge((a[k], b[k]), twist, f"{fam}{k + 1}", cls))
    return edges


def build_quintuple_graph(alpha: Sequence[int], t: int, signs: Sequence[int] = (PLUS, MINUS),
                          label_offsets: Sequence[int] = (0, 0), figure_ref: str | None = None
                          ) -> RotationGraph:
    """Two-vertex torus graph G(a0, a1, a2, a3, a4).

    Picture the torus as the unit square with u1 at the corner and u2 at the
    center.  Class lambda runs from u1 to the northeast, mu northwest, nu
    southwest, pi southeast; the a0 loops at each vertex run east-west.
    Counterclockwise at u1 this gives: loops, lambda, mu, loops, nu, pi.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != 5:
        raise GraphError("a quintuple has five entries")
    if any(a < 0 for a in alpha):
        raise GraphError(f"negative class size in {alpha}")
    if t < 1:
        raise GraphError("t must be positive")
    a0, a1, a2, a3, a4 = alpha
    if 2 * a0 + a1 + a2 + a3 + a4 != 5 * t:
        raise GraphError(f"degree budget: 2*{a0}+{a1 + a2 + a3 + a4} != 5*{t}")

    def block(fam, end, size, reverse=False):
        ks = range(size - 1, -1, -1) if reverse else range(size)
        return [(fam, end, k) for k in ks]

    # u1 and u2 both list: east loop ends, two classes, west loop ends, two classes
    u1 = (block("loopA", 0, a0) + block("lambda", 0, a1) + block("mu", 0, a2)
          + block("loopA", 1, a0, True) + block("nu", 0, a3) + block("pi", 0, a4))
    u2 = (block("loopB", 0, a0) + block("nu", 1, a3, True) + block("pi", 1, a4, True)
          + block("loopB", 1, a0, True) + block("lambda", 1, a1, True) + block("mu", 1, a2, True))
    specs = [("loopA", LOOP, 0), ("loopB", LOOP, 0), ("lambda", "lambda", 0),
             ("mu", "mu", 0), ("nu", "nu", 0), ("pi", "pi", 0)]
    edges = _assemble({0: u1, 1: u2}, specs, 2, 5 * t)
    return RotationGraph(Surface.TORUS, tuple(signs), tuple(edges), t, 5,
                         tuple(label_offsets), figure_ref)


def build_klein_graph(form: str, p0: int, p1: int, p2: int, t: int, sign: int = PLUS,
                      label_offset: int = 0, figure_ref: str | None = None) -> RotationGraph:
    """One-vertex Klein bottle graph H(p0, p1, p2) or H'(p0, p1, p2).

    p0 untwisted (positive) loops and two families U, V of twisted (negative)
    loops.  In H the positive ends separate the two ends of U and of V:
    rotation U, A, U, V, A, V.  In H' they do not: A, U, U, A, V, V.
    Twisted parallel loops keep their order at the two ends; untwisted ones
    nest.  With an empty U or V family H' has a Mobius band face, which a
    cellular ribbon graph cannot carry, so construction fails there.
    """
    if form not in ("H", "HPrime", "H'"):
        raise GraphError(f"unknown Klein form {form!r}")
    if min(p0, p1, p2) < 0:
        raise GraphError("negative family size")
    if t < 1:
        raise GraphError("t must be positive")
    if (5 * t) % 2:
        raise GraphError(f"5t/2 is not an integer for t={t}")
    if 2 * (p0 + p1 + p2) != 5 * t:
        raise GraphError(f"budget: {p0}+{p1}+{p2} != 5*{t}/2")

    def fwd(fam, end, size):
        return [(fam, end, k) for k in range(size)]

    a_out = fwd("A", 0, p0)
    a_back = [("A", 1, k) for k in range(p0 - 1, -1, -1)]
    if form == "H":
        rot = fwd("U", 0, p1) + a_out + fwd("U", 1, p1) + fwd("V", 0, p2) + a_back + fwd("V", 1, p2)
    else:
        rot = a_out + fwd("U", 0, p1) + fwd("U", 1, p1) + a_back + fwd("V", 0, p2) + fwd("V", 1, p2)
    specs = [("A", "positive", 0), ("U", "U", 1), ("V", "V", 1)]
    edges = _assemble({0: rot}, specs, 1, 5 * t)
    return RotationGraph(Surface.KLEIN, (sign,), tuple(edges), t, 5, (label_offset,), figure_ref)


def standard_torus_graph() -> RotationGraph:
    """One vertex, two loops, rotation a, b, a^-1, b^-1 (delta=4, partner 1)."""
    edges = (Edge(((0, 0), (0, 2)), 0, "a"), Edge(((0, 1), (0, 3)), 0, "b"))
    return RotationGraph(Surface.TORUS, (PLUS,), edges, 1, 4)


# -- homology on the torus ---------------------------------------------------


def _walk_chain(g: RotationGraph, walk: Sequence[tuple[int, int]]) -> list[int]:
    if not walk:
        return [0] * g.num_edges
    chain = [0] * g.num_edges
    ends = []
    for e, direction in walk:
        if direction not in (1, -1):
            raise GraphError("walk direction must be +1 or -1")
        (u, _), (v, _) = g.edges[e].ends
        start, stop = (u, v) if direction == 1 else (v, u)
        ends.append((start, stop))
        chain[e] += direction
    for (_, stop), (start, _) in zip(ends, ends[1:] + ends[:1]):
        if stop != start:
            raise GraphError("walk is not closed")
    return chain


@dataclass
class _TorusBasis:
    non_tree: list[int]
    proj: list[list[int]]  # rows of U that read off the free part


_BASIS_CACHE: dict[int, tuple[RotationGraph, _TorusBasis]] = {}


def _torus_basis(g: RotationGraph) -> _TorusBasis:
    hit = _BASIS_CACHE.get(id(g))
    if hit is not None and hit[0] is g:
        return hit[1]
    n = g.num_vertices
    in_tree = [False] * g.num_edges
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for i, e in enumerate(g.edges):
            (a, _), (b, _) = e.ends
            if u in (a, b) and a != b:
                v = b if a == u else a
                if not seen[v]:
                    seen[v] = True
                    in_tree[i] = True
                    queue.append(v)
    non_tree = [i for i in range(g.num_edges) if not in_tree[i]]
    # face boundaries as columns over the non-tree edges
    cols = []
    for f in g.faces:
        chain = [0] * g.num_edges
        for e, d in f.edges:
            chain[e] += d
        cols.append([chain[i] for i in non_tree])
    k = len(non_tree)
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(k)]
    d, u, _ = smith_normal_form(mat)
    r = sum(1 for i in range(min(k, len(cols))) if d[i][i])
    if any(d[i][i] != 1 for i in range(r)):
        raise GraphError("surface homology has torsion; not a torus")
    basis = _TorusBasis(non_tree, [u[i] for i in range(r, k)])
    _BASIS_CACHE[id(g)] = (g, basis)
    return basis


def cycle_homology_class(g: RotationGraph, walk: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    """Class in H1(torus) = Z^2 of a closed walk given as (edge, direction) steps."""
    if g.surface is not Surface.TORUS:
        raise GraphError("cycle classes are computed on the torus only")
    chain = _walk_chain(g, walk)
    return chain_homology_class(g, chain)


def chain_homology_class(g: RotationGraph, chain: Sequence[int]) -> tuple[int, ...]:
    basis = _torus_basis(g)
    w = [chain[i] for i in basis.non_tree]
    return tuple(sum(a * b for a, b in zip(row, w)) for row in basis.proj)


def subgraph_is_essential(g: RotationGraph, edge_ids: Iterable[int]) -> bool:
    """True if some cycle made of the given edges is homologically nontrivial."""
    ids = sorted(set(edge_ids))
    # cycle space of the subgraph: fundamental cycles of a spanning forest
    parent: dict[int, tuple[int, int] | None] = {}
    adj: dict[int, list[tuple[int, int, int]]] = {}
    for i in ids:
        (a, _), (b, _) = g.edges[i].ends
        adj.setdefault(a, []).append((i, b, 1))
        adj.setdefault(b, []).append((i, a, -1))
    used = set()
    depth: dict[int, int] = {}
    for root in adj:
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for i, v, d in adj[u]:
                if i in used:
                    continue
                if v not in parent:
                    used.add(i)
                    parent[v] = (i, d)
                    depth[v] = depth[u] + 1
                    queue.append(v)

    def path_to_root(v):
        chain = [0] * g.num_edges
        while parent[v] is not None:
            i, d = parent[v]
            chain[i] += d
            (a, _), (b, _) = g.edges[i].ends
            v = a if d == 1 else b
        return chain

    for i in ids:
        if i in used:
            continue
        (a, _), (b, _) = g.edges[i].ends
        chain = [x - y for x, y in zip(path_to_root(a), path_to_root(b))]
        chain[i] += 1
        if any(chain_homology_class(g, chain)):
            return True
    return False
