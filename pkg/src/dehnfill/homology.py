"""Exact integer linear algebra for first homology computations.

Everything here works on plain Python ``int`` (arbitrary precision), so no
overflow handling is needed and no floating point is ever involved.

>>> group_of(Presentation.parse("l,m,x,y", ["2x+m", "3x+3l+m", "2y-2m-l", "3y-2l"]))
AbelianGroup(free_rank=0, torsion=(35,))
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

Matrix = list[list[int]]


class PresentationError(ValueError):
    """Raised for malformed presentations (bad syntax, unknown generator)."""


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U @ A @ V == D``.

    ``D`` is diagonal with nonnegative entries and ``d1 | d2 | ...``; ``U`` and
    ``V`` are unimodular.  Pivots are chosen as the entry of smallest nonzero
    absolute value in the remaining block.
    """
    d = [list(map(int, row)) for row in a]
    m = len(d)
    n = len(d[0]) if m else 0
    if any(len(row) != n for row in d):
        raise ValueError("ragged matrix")
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row dst += c * row src
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    for k in range(min(m, n)):
        while True:
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return d, u, v
            _, i, j = best
            if i != k:
                swap_rows(i, k)
            if j != k:
                swap_cols(j, k)
            p = d[k][k]
            clean = True
            for i in range(k + 1, m):
                if d[i][k]:
                    add_row(k, i, -(d[i][k] // p))
                    clean = clean and d[i][k] == 0
            for j in range(k + 1, n):
                if d[k][j]:
                    add_col(k, j, -(d[k][j] // p))
                    clean = clean and d[k][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(k + 1, m)
                        for j in range(k + 1, n) if d[i][j] % p), None)
            if bad is None:
                break
            add_row(bad, k, 1)
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
    return d, u, v


def diagonal(d: Sequence[Sequence[int]]) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def invariant_factors(a: Sequence[Sequence[int]]) -> list[int]:
    if not a or not a[0]:
        return []
    return diagonal(smith_normal_form(a)[0])


def rank(a: Sequence[Sequence[int]]) -> int:
    return sum(1 for x in invariant_factors(a) if x)


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ...`` and every ``di >= 2``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = self.torsion
        if any(x < 2 for x in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisibility chain of entries >= 2")

    @classmethod
    def from_diagonal(cls, entries: Iterable[int], generators: int) -> AbelianGroup:
        """Build the cokernel of a diagonal relator matrix on ``generators`` generators."""
        entries = [abs(x) for x in entries]
        nonzero = [x for x in entries if x]
        torsion = tuple(sorted(x for x in nonzero if x != 1))
        # a non-chain list (e.g. from a hand-built diagonal) is re-normalized
        if any(torsion[i + 1] % torsion[i] for i in range(len(torsion) - 1)):
            torsion = tuple(x for x in invariant_factors(
                [[x if i == j else 0 for j in range(len(torsion))]
                 for i, x in enumerate(torsion)]) if x != 1)
        return cls(generators - len(nonzero), torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        out = 1
        for x in self.torsion:
            out *= x
        return out

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{x}" for x in self.torsion)
        return " + ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> AbelianGroup:
        """Inverse of ``str``: ``"Z^2 + Z/4"``, ``"Z/2 + Z/30"``, ``"0"``."""
        text = text.strip()
        if text == "0":
            return cls(0)
        rank_, torsion = 0, []
        for part in text.split("+"):
            part = part.strip()
            if part == "Z":
                rank_ += 1
            elif part.startswith("Z^"):
                rank_ += int(part[2:])
            elif part.startswith("Z/"):
                torsion.append(int(part[2:]))
            else:
                raise ValueError(f"cannot parse group component {part!r}")
        return cls.from_diagonal([0] * rank_ + torsion, rank_ + len(torsion))


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")
_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*([A-Za-z_][A-Za-z_0-9]*|\d+)\s*")


def _parse_side(text: str, index: dict[str, int], out: list[int], scale: int) -> None:
    text = text.strip()
    if text in ("", "0"):
        return
    pos = 0
    first = True
    while pos < len(text):
        match = _TERM.match(text, pos)
        if not match or match.end() == pos:
            raise PresentationError(f"cannot parse relator near {text[pos:]!r}")
        sign, coef, name = match.groups()
        if not sign and not first:
            raise PresentationError(f"missing operator before {name!r} in {text!r}")
        first = False
        if name.isdigit():
            if coef or int(name) != 0:
                raise PresentationError(f"constant term {name!r} in relator {text!r}")
        else:
            if name not in index:
                raise PresentationError(f"undeclared generator {name!r}")
            c = int(coef) if coef else 1
            out[index[name]] += scale * (-c if sign == "-" else c)
        pos = match.end()


@dataclass(frozen=True)
class Presentation:
    """Abelian presentation: generators and integer relator rows."""

    generators: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator")
        for g in self.generators:
            if not _IDENT.match(g):
                raise PresentationError(f"bad generator name {g!r}")
        for r in self.relators:
            if len(r) != len(self.generators):
                raise PresentationError("relator length does not match generator count")

    @classmethod
    def parse(cls, generators: str | Sequence[str], relators: Iterable[str]) -> Presentation:
        """Parse relators such as ``"2x+m"``, ``"-y+3m"`` or ``"x+2y=2l+m"``."""
        if isinstance(generators, str):
            generators = [g.strip() for g in generators.split(",") if g.strip()]
        gens = tuple(generators)
        index = {g: i for i, g in enumerate(gens)}
        rows = []
        for text in relators:
            row = [0] * len(gens)
            lhs, eq, rhs = text.partition("=")
            _parse_side(lhs, index, row, 1)
            if eq:
                _parse_side(rhs, index, row, -1)
            rows.append(tuple(row))
        return cls(gens, tuple(rows))

    @classmethod
    def from_text(cls, text: str) -> Presentation:
        """Parse the file format: ``gens: l,m,x,y`` then one relator per line."""
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("gens:"):
            raise PresentationError("first line must be 'gens: ...'")
        return cls.parse(lines[0][len("gens:"):], lines[1:])

    @classmethod
    def load(cls, path: str | Path) -> Presentation:
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    def matrix(self) -> Matrix:
        return [list(r) for r in self.relators]

    def relator_text(self, row: Sequence[int]) -> str:
        out = ""
        for c, g in zip(row, self.generators):
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            out += f"{sign}{mag}{g}"
        if not out:
            return "0"
        return out[1:] if out[0] == "+" else out

    def to_text(self) -> str:
        lines = ["gens: " + ",".join(self.generators)]
        lines += [self.relator_text(r) for r in self.relators]
        return "\n".join(lines) + "\n"


def group_of(p: Presentation) -> AbelianGroup:
    """The abelian group presented by ``p``."""
    n = len(p.generators)
    if not p.relators:
        return AbelianGroup(n)
    return AbelianGroup.from_diagonal(invariant_factors(p.matrix()), n)


# Full four-generator presentations whose meridian relator carries the free
# parameters; both collapse to one generator x with a single relator.
PARAMETRIC_FAMILIES = {
    "11p-2q": (("2x+m", "2y-m-l", "2m+y"), lambda a, b: ((a, b, a, 0), 11 * a - 2 * b)),
    "11r+2s": (("2x+m", "2y-l", "-y+3m"), lambda a, b: ((a, b, a, 0), 11 * a + 2 * b)),
}


def parametric_presentation(family: str, params: tuple[int, int]) -> Presentation:
    """Four-generator presentation over ``l,m,x,y`` with relator ``a(l+x)+bm``."""
    try:
        fixed, build = PARAMETRIC_FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown parametric family {family!r}") from None
    base = Presentation.parse("l,m,x,y", fixed)
    row, _ = build(*params)
    return Presentation(base.generators, base.relators[:1] + (row,) + base.relators[1:])


def parametric_group(family: str, params: tuple[int, int]) -> AbelianGroup:
    """Evaluate the reduced relator ``(11p-2q)x`` or ``(11r+2s)x``.

    The answer is cross-checked against the Smith form of the full
    four-generator presentation; a disagreement raises ``ArithmeticError``.
    """
    if family not in PARAMETRIC_FAMILIES:
        raise ValueError(f"unknown parametric family {family!r}")
    _, coefficient = PARAMETRIC_FAMILIES[family][1](*params)
    reduced = AbelianGroup.from_diagonal([coefficient], 1)
    full = group_of(parametric_presentation(family, params))
    if full != reduced:
        raise ArithmeticError(f"{family} at {params}: reduced {reduced} but full {full}")
    return reduced


def cellular_h1(num_vertices: int, edges: Sequence[tuple[int, int]],
                cells: Sequence[Sequence[int]]) -> AbelianGroup:
    """First homology of a 2-complex.

    ``edges[k]`` is (tail, head); ``cells`` are boundary 1-chains as
    integer coefficient vectors over the edges.
    """
    n = len(edges)
    d1 = [[0] * n for _ in range(num_vertices)]
    for k, (a, b) in enumerate(edges):
        d1[a][k] -= 1
        d1[b][k] += 1
    nullity = n - rank(d1) if num_vertices else n
    factors = [abs(x) for x in invariant_factors([list(c) for c in cells])] if cells else []
    r2 = sum(1 for x in factors if x)
    return AbelianGroup(nullity - r2, tuple(x for x in factors if x > 1))


def is_qhs_torus(g: AbelianGroup) -> bool:
    """Finite H1 of a filling forces the exterior to be a Q-homology solid torus."""
    return g.is_finite

