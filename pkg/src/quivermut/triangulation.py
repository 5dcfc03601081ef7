"""
Polygon triangulations as a model for cluster-tilted quivers of type A.

Polygon vertices are ``0..ngon-1`` in clockwise order. Each diagonal becomes
a quiver vertex named ``"i-j"`` (``i < j``); inside each triangle with
vertices ``i < j < k`` arrows run ``{i,j} -> {j,k} -> {k,i} -> {i,j}``
between the sides that are diagonals. Flips correspond to FZ mutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .quiver import Arrow, Potential, Quiver, QuiverWithPotential, canonical_form, minimal_cycles


class TriangulationError(ValueError):
    pass


def _edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def _crosses(d: tuple[int, int], e: tuple[int, int]) -> bool:
    a, b = d
    c, x = e
    if len({a, b, c, x}) < 4:
        return False
    return (a < c < b) != (a < x < b)


@dataclass(frozen=True)
class Triangulation:
    ngon: int
    diagonals: frozenset

    def __post_init__(self):
        n = self.ngon
        if n < 3:
            raise TriangulationError("a polygon needs at least 3 vertices")
        diags = frozenset(_edge(*map(int, d)) for d in self.diagonals)
        object.__setattr__(self, "diagonals", diags)
        for a, b in diags:
            if not (0 <= a < n and 0 <= b < n) or (b - a) % n in (0, 1, n - 1):
                raise TriangulationError(f"{a}-{b} is not a diagonal of the {n}-gon")
        if len(diags) != n - 3:
            raise TriangulationError(f"a triangulation of the {n}-gon has {n - 3} diagonals, got {len(diags)}")
        for d, e in combinations(diags, 2):
            if _crosses(d, e):
                raise TriangulationError(f"diagonals {d} and {e} cross")

    @classmethod
    def parse(cls, ngon: int, text: str) -> "Triangulation":
        """Read ``"0-2,2-4"`` style diagonal lists."""
        diags = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            a, b = part.split("-")
            diags.append((int(a), int(b)))
        return cls(ngon, frozenset(diags))

    def sides(self) -> set[tuple[int, int]]:
        n = self.ngon
        return set(self.diagonals) | {_edge(i, (i + 1) % n) for i in range(n)}

    def triangles(self) -> list[tuple[int, int, int]]:
        s = self.sides()
        return [t for t in combinations(range(self.ngon), 3)
                if _edge(t[0], t[1]) in s and _edge(t[1], t[2]) in s and _edge(t[0], t[2]) in s]

    def rotate(self, k: int) -> "Triangulation":
        n = self.ngon
        return Triangulation(n, frozenset(_edge((a + k) % n, (b + k) % n) for a, b in self.diagonals))


def diagonal_name(d: tuple[int, int]) -> str:
    return f"{d[0]}-{d[1]}"


def all_triangulations(ngon: int) -> list[Triangulation]:
    """Every triangulation of the ``ngon``-gon, by splitting on the triangle over side ``0 - (ngon-1)``."""

    @lru_cache(maxsize=None)
    def sub(lo: int, hi: int) -> tuple[frozenset, ...]:
        # triangulations of the polygon lo, lo+1, ..., hi
        if hi - lo < 2:
            return (frozenset(),)
        out = []
        for m in range(lo + 1, hi):
            extra = set()
            if m - lo > 1:
                extra.add((lo, m))
            if hi - m > 1:
                extra.add((m, hi))
            for left in sub(lo, m):
                for right in sub(m, hi):
                    out.append(left | right | extra)
        return tuple(out)

    return [Triangulation(ngon, d) for d in sub(0, ngon - 1)]


def triangulation_to_quiver(t: Triangulation) -> Quiver:
    verts = sorted(t.diagonals)
    arrows = []
    for i, j, k in t.triangles():
        sides = [_edge(i, j), _edge(j, k), _edge(i, k)]
        for a, b in zip(sides, sides[1:] + sides[:1]):
            if a in t.diagonals and b in t.diagonals:
                arrows.append(Arrow(f"{diagonal_name(a)}>{diagonal_name(b)}", diagonal_name(a), diagonal_name(b)))
    return Quiver(tuple(diagonal_name(d) for d in verts), tuple(arrows))


def flip(t: Triangulation, d) -> Triangulation:
    """Replace ``d`` by the other diagonal of the quadrilateral formed by its two triangles."""
    if isinstance(d, str):
        d = tuple(int(x) for x in d.split("-"))
    d = _edge(*d)
    if d not in t.diagonals:
        raise TriangulationError(f"{diagonal_name(d)} is not a diagonal of the triangulation")
    apexes = [x for tri in t.triangles() if d[0] in tri and d[1] in tri for x in tri if x not in d]
    new = _edge(*apexes)
    return Triangulation(t.ngon, (t.diagonals - {d}) | {new})


# -- g-invariant triangulations ---------------------------------------------


def g_invariant_triangulations(n: int) -> list[Triangulation]:
    """Triangulations of the ``(3n+3)``-gon fixed by the rotation ``k -> k + n + 1``."""
    if n < 1:
        raise TriangulationError("n must be at least 1")
    N = 3 * n + 3
    return [t for t in all_triangulations(N) if t.rotate(n + 1) == t]


def _orbits(t: Triangulation, step: int) -> list[tuple[tuple[int, int], ...]]:
    seen, out = set(), []
    for d in sorted(t.diagonals):
        if d in seen:
            continue
        orbit = []
        e = d
        while e not in orbit:
            orbit.append(e)
            e = _edge((e[0] + step) % t.ngon, (e[1] + step) % t.ngon)
        seen.update(orbit)
        out.append(tuple(orbit))
    return out


def central_triangle(t: Triangulation, n: int) -> tuple[tuple[int, int], ...]:
    """The orbit of diagonals forming the rotation-invariant central triangle."""
    for orbit in _orbits(t, n + 1):
        pts = {x for d in orbit for x in d}
        if len(orbit) == 3 and len(pts) == 3:
            return orbit
    raise TriangulationError("no central triangle: the triangulation is not invariant")


def quotient_quiver(t: Triangulation) -> QuiverWithPotential:
    """Quiver with potential of the orbit category of a rotation-invariant triangulation.

    One vertex per orbit of diagonals (named by its smallest diagonal). The
    central orbit carries a loop ``alpha``; the other orbits keep the arrows of
    one fundamental domain. The potential is ``alpha^3`` plus the minimal
    cycles of the loop-free part.
    """
    if (t.ngon - 3) % 3 or t.ngon < 6:
        raise TriangulationError("quotients are defined for (3n+3)-gons with n >= 1")
    n = (t.ngon - 3) // 3
    if t.rotate(n + 1) != t:
        raise TriangulationError("triangulation is not invariant under the order-3 rotation")
    orbits = _orbits(t, n + 1)
    rep = {d: diagonal_name(min(o)) for o in orbits for d in o}
    centre = rep[central_triangle(t, n)[0]]
    cover = triangulation_to_quiver(t)
    arrows, taken = [], set()
    for a in cover.arrows:
        s = tuple(int(x) for x in a.source.split("-"))
        if diagonal_name(s) != rep[s]:  # keep arrows leaving the orbit representative
            continue
        src = rep[s]
        tgt = rep[tuple(int(x) for x in a.target.split("-"))]
        if src == centre and tgt == centre:
            continue
        name = f"{src}>{tgt}"
        while name in taken:
            name += "'"
        taken.add(name)
        arrows.append(Arrow(name, src, tgt))
    verts = tuple(sorted({rep[d] for d in t.diagonals}, key=lambda v: tuple(map(int, v.split("-")))))
    rest = Quiver(verts, tuple(arrows))
    q = Quiver(verts, tuple(arrows) + (Arrow("alpha", centre, centre),))
    pot = Potential(((1, ("alpha",) * 3),)) + Potential.from_cycles(minimal_cycles(rest))
    return QuiverWithPotential(q, pot)


# -- type A recognition -----------------------------------------------------


@lru_cache(maxsize=None)
def _type_a_forms(nverts: int) -> frozenset:
    return frozenset(canonical_form(triangulation_to_quiver(t)) for t in all_triangulations(nverts + 3))


def is_type_a(q: Quiver, max_vertices: int = 9) -> bool:
    """Whether ``q`` is the quiver of a triangulation (cluster-tilted of type A).

    Loop-free connected quivers up to ``max_vertices`` vertices are compared
    against every triangulation quiver of the same size.
    """
    n = len(q.vertices)
    if n == 0 or n > max_vertices or q.loops():
        return False
    if not _connected(q):
        return False
    return canonical_form(q) in _type_a_forms(n)


def _connected(q: Quiver) -> bool:
    if not q.vertices:
        return True
    seen = {q.vertices[0]}
    stack = [q.vertices[0]]
    while stack:
        for w in q.neighbours(stack.pop()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(q.vertices)


def triangulation_quivers(ngon: int) -> Iterable[tuple[Triangulation, Quiver]]:
    for t in all_triangulations(ngon):
        yield t, triangulation_to_quiver(t)


__all__ = [
    "Triangulation", "TriangulationError", "all_triangulations", "central_triangle", "flip",
    "g_invariant_triangulations", "is_type_a", "quotient_quiver", "triangulation_to_quiver",
]
