"""
Quivers, potentials and Fomin-Zelevinsky mutation.

A quiver is a finite directed multigraph whose arrows carry stable ids.
Loops and 2-cycles are representable; they are only removed when a
skew-symmetric matrix is extracted.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np


class QuiverError(ValueError):
    """Raised for malformed quivers, potentials and vertex orders."""


class MutationError(ValueError):
    """Raised when plain FZ mutation is not defined at a vertex."""


class Arrow(NamedTuple):
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    """Finite quiver with ordered vertices and uniquely named arrows."""

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(Arrow(*map(str, a)) for a in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex ids")
        vs = set(self.vertices)
        seen = set()
        for a in self.arrows:
            if a.id in seen:
                raise QuiverError(f"duplicate arrow id {a.id!r}")
            seen.add(a.id)
            if a.source not in vs or a.target not in vs:
                raise QuiverError(f"arrow {a.id!r} has an endpoint outside the vertex set")

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple]) -> "Quiver":
        """Build a quiver from ``(source, target)`` pairs or ``(id, source, target)`` triples.

        Pairs get ids ``a0, a1, ...`` in input order.
        """
        arrows = []
        for k, e in enumerate(edges):
            if len(e) == 2:
                arrows.append(Arrow(f"a{k}", str(e[0]), str(e[1])))
            else:
                arrows.append(Arrow(*map(str, e)))
        return cls(tuple(str(v) for v in vertices), tuple(arrows))

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise KeyError(arrow_id)

    @property
    def arrow_ids(self) -> set[str]:
        return {a.id for a in self.arrows}

    def multiplicity(self) -> Counter:
        """Counter of ``(source, target)`` -> number of arrows."""
        return Counter((a.source, a.target) for a in self.arrows)

    def loops(self) -> list[Arrow]:
        return [a for a in self.arrows if a.source == a.target]

    def has_loop_at(self, v: str) -> bool:
        return any(a.source == v and a.target == v for a in self.arrows)

    def has_two_cycle_at(self, v: str) -> bool:
        m = self.multiplicity()
        return any(m[(v, w)] and m[(w, v)] for w in self.vertices if w != v)

    def neighbours(self, v: str) -> set[str]:
        out = set()
        for a in self.arrows:
            if a.source == v:
                out.add(a.target)
            if a.target == v:
                out.add(a.source)
        out.discard(v)
        return out

    def induced(self, vertices: Iterable[str]) -> "Quiver":
        keep = set(vertices)
        return Quiver(
            tuple(v for v in self.vertices if v in keep),
            tuple(a for a in self.arrows if a.source in keep and a.target in keep),
        )

    def relabel(self, mapping: Mapping[str, str]) -> "Quiver":
        """Rename vertices; unmapped vertices keep their ids."""
        f = lambda v: mapping.get(v, v)
        return Quiver(
            tuple(f(v) for v in self.vertices),
            tuple(Arrow(a.id, f(a.source), f(a.target)) for a in self.arrows),
        )

    def with_arrows(self, arrows: Iterable[Arrow]) -> "Quiver":
        return Quiver(self.vertices, tuple(arrows))

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [
                {"id": a.id, "source": a.source, "target": a.target}
                for a in sorted(self.arrows, key=lambda a: a.id)
            ],
        }

    def __repr__(self):
        body = ", ".join(f"{a.id}:{a.source}->{a.target}" for a in self.arrows)
        return f"Quiver({list(self.vertices)}, [{body}])"


def fresh_id(base: str, taken: set[str]) -> str:
    """Return ``base`` or ``base'``, ``base''``... whichever is not in ``taken``."""
    out = base
    while out in taken:
        out += "'"
    return out


# ---------------------------------------------------------------------------
# potentials


def normalize_cycle(cycle: Sequence[str]) -> tuple[str, ...]:
    """Rotate a cyclic word to its lexicographically minimal rotation."""
    cycle = tuple(cycle)
    if not cycle:
        raise QuiverError("empty cycle")
    return min(cycle[k:] + cycle[:k] for k in range(len(cycle)))


@dataclass(frozen=True)
class Potential:
    """Integer combination of cycles, stored up to cyclic equivalence.

    Terms are ``(coefficient, cycle)`` with cycles given as arrow-id words in
    traversal order. Equivalent cycles are merged and zero terms dropped.
    """

    terms: tuple[tuple[int, tuple[str, ...]], ...] = ()

    def __post_init__(self):
        acc: dict[tuple[str, ...], int] = {}
        for coeff, cyc in self.terms:
            key = normalize_cycle(cyc)
            acc[key] = acc.get(key, 0) + int(coeff)
        terms = tuple((c, k) for k, c in sorted(acc.items()) if c != 0)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[str]], coeff: int = 1) -> "Potential":
        return cls(tuple((coeff, tuple(c)) for c in cycles))

    def __add__(self, other: "Potential") -> "Potential":
        return Potential(self.terms + other.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def arrow_ids(self) -> set[str]:
        return {a for _, cyc in self.terms for a in cyc}

    def renamed(self, mapping: Mapping[str, str]) -> "Potential":
        return Potential(tuple((c, tuple(mapping.get(a, a) for a in cyc)) for c, cyc in self.terms))

    def to_list(self) -> list[dict]:
        return [{"coeff": c, "cycle": list(cyc)} for c, cyc in self.terms]


@dataclass(frozen=True)
class QuiverWithPotential:
    quiver: Quiver
    potential: Potential = field(default_factory=Potential)

    def __post_init__(self):
        arrows = {a.id: a for a in self.quiver.arrows}
        for _, cyc in self.potential.terms:
            for x in cyc:
                if x not in arrows:
                    raise QuiverError(f"potential uses unknown arrow {x!r}")
            for x, y in zip(cyc, cyc[1:] + cyc[:1]):
                if arrows[x].target != arrows[y].source:
                    raise QuiverError(f"potential term {' '.join(cyc)} is not a cycle")

    def to_dict(self) -> dict:
        d = self.quiver.to_dict()
        d["potential"] = self.potential.to_list()
        return d


def cyclic_derivative(p: Potential, arrow_id: str) -> dict[tuple[str, ...], int]:
    """Cyclic derivative of ``p`` with respect to an arrow.

    Every occurrence of ``arrow_id`` in a term ``x·a·y`` contributes the path
    ``y·x`` (the rest of the cycle read from the target of the arrow).
    The result is a formal sum ``{path: coefficient}``.
    """
    out: Counter = Counter()
    for coeff, cyc in p.terms:
        for k, x in enumerate(cyc):
            if x == arrow_id:
                out[cyc[k + 1:] + cyc[:k]] += coeff
    return {path: c for path, c in out.items() if c != 0}


# ---------------------------------------------------------------------------
# matrices and FZ mutation


def skew_matrix(q: Quiver, vertex_order: Sequence[str] | None = None) -> np.ndarray:
    """Skew-symmetric matrix of ``q`` after deleting loops and 2-cycles.

    Entry ``(i, j)`` is the number of arrows ``i -> j`` minus the number of
    arrows ``j -> i`` with vertices taken in ``vertex_order``.
    """
    order = list(q.vertices if vertex_order is None else vertex_order)
    if sorted(order) != sorted(q.vertices) or len(set(order)) != len(order):
        raise QuiverError("vertex_order is not a permutation of the vertex set")
    pos = {v: i for i, v in enumerate(order)}
    m = np.zeros((len(order), len(order)), dtype=int)
    for a in q.arrows:
        if a.source == a.target:
            continue
        m[pos[a.source], pos[a.target]] += 1
        m[pos[a.target], pos[a.source]] -= 1
    return m


def fz_mutate_matrix(m: np.ndarray, ell: int) -> np.ndarray:
    """FZ mutation of a skew-symmetric integer matrix at index ``ell``."""
    m = np.asarray(m, dtype=int)
    n = m.shape[0]
    if not 0 <= ell < n:
        raise IndexError(f"mutation index {ell} out of range for size {n}")
    col = m[:, ell]
    row = m[ell, :]
    out = m + (np.outer(np.abs(col), row) + np.outer(col, np.abs(row))) // 2
    out[ell, :] = -m[ell, :]
    out[:, ell] = -m[:, ell]
    return out


def cancel_two_cycles(
    arrows: Iterable[Arrow], pairs: Iterable[frozenset] | None = None, drop_loops: bool = True
) -> list[Arrow]:
    """Drop loops and cancel opposite arrows until no 2-cycle remains.

    Arrows are cancelled in lexicographic id order. If ``pairs`` is given only
    those unordered vertex pairs are touched. Loops go unless ``drop_loops``
    is false.
    """
    arrows = [a for a in arrows if a.source != a.target or not drop_loops]
    by_pair: dict[frozenset, list[Arrow]] = {}
    for a in arrows:
        by_pair.setdefault(frozenset((a.source, a.target)), []).append(a)
    pairs = set(by_pair) if pairs is None else set(pairs)
    drop = set()
    for key in pairs:
        group = by_pair.get(key, [])
        if len(key) != 2 or not group:
            continue
        u, v = sorted(key)
        fwd = sorted((a for a in group if a.source == u), key=lambda a: a.id)
        bwd = sorted((a for a in group if a.source == v), key=lambda a: a.id)
        k = min(len(fwd), len(bwd))
        drop.update(a.id for a in fwd[:k])
        drop.update(a.id for a in bwd[:k])
    return [a for a in arrows if a.id not in drop]


def fz_mutate_quiver(q: Quiver, v: str) -> Quiver:
    """FZ mutation of a quiver at ``v``.

    Composite arrows ``[a.b]`` are added for every path ``i -a-> v -b-> j``,
    arrows at ``v`` are reversed (keeping their ids), and opposite arrows
    between the affected pairs are cancelled.
    """
    if v not in q.vertices:
        raise QuiverError(f"unknown vertex {v!r}")
    if q.has_loop_at(v) or q.has_two_cycle_at(v):
        raise MutationError(
            f"vertex {v!r} lies on a loop or 2-cycle; FZ mutation is undefined there, "
            "use the covering construction (mutate_at_vertex_via_cover)"
        )
    incoming = [a for a in q.arrows if a.target == v]
    outgoing = [a for a in q.arrows if a.source == v]
    taken = set(q.arrow_ids)
    new: list[Arrow] = []
    for a in q.arrows:
        if a.target == v or a.source == v:
            new.append(Arrow(a.id, a.target, a.source))
        else:
            new.append(a)
    touched = set()
    for a, b in product(incoming, outgoing):
        aid = fresh_id(f"[{a.id}.{b.id}]", taken)
        taken.add(aid)
        new.append(Arrow(aid, a.source, b.target))
        touched.add(frozenset((a.source, b.target)))
    # loops elsewhere are untouched: no composite through v closes up at one vertex
    return q.with_arrows(cancel_two_cycles(new, touched, drop_loops=False))


# ---------------------------------------------------------------------------
# cycles


def simple_cycles(q: Quiver) -> list[tuple[str, ...]]:
    """All vertex-simple oriented cycles as arrow-id words, up to rotation."""
    out_arrows: dict[str, list[Arrow]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        out_arrows[a.source].append(a)
    rank = {v: i for i, v in enumerate(q.vertices)}
    found = []

    def walk(start, here, path, visited):
        for a in out_arrows[here]:
            if a.target == start:
                found.append(tuple(path + [a.id]))
            elif a.target not in visited and rank[a.target] > rank[start]:
                visited.add(a.target)
                walk(start, a.target, path + [a.id], visited)
                visited.discard(a.target)

    for s in q.vertices:
        walk(s, s, [], {s})
    return found


def minimal_cycles(q: Quiver) -> list[tuple[str, ...]]:
    """Cycles whose induced subquiver contains only the cycle's own arrows.

    Loops are minimal cycles of length one. For longer cycles loops at the
    cycle's vertices are ignored when checking the induced subquiver, so a
    looped vertex can still sit on a minimal triangle. Results are rotated to
    normal form and sorted by (length, word).
    """
    arrows = {a.id: a for a in q.arrows}
    out = []
    for cyc in simple_cycles(q):
        verts = {arrows[x].source for x in cyc}
        inside = [
            a.id for a in q.arrows
            if a.source in verts and a.target in verts and (a.source != a.target or len(cyc) == 1)
        ]
        if len(inside) == len(cyc):
            out.append(normalize_cycle(cyc))
    return sorted(set(out), key=lambda c: (len(c), c))


def sum_of_minimal_cycles_potential(q: Quiver) -> Potential:
    """Potential with coefficient one on every minimal cycle.

    Meaningful for loop-free, 2-cycle-free quivers; on other input the output
    is only advisory.
    """
    return Potential.from_cycles(minimal_cycles(q))


# ---------------------------------------------------------------------------
# isomorphism and canonical forms


def _adjacency(q: Quiver) -> tuple[list[str], list[list[int]]]:
    verts = list(q.vertices)
    pos = {v: i for i, v in enumerate(verts)}
    m = [[0] * len(verts) for _ in verts]
    for a in q.arrows:
        m[pos[a.source]][pos[a.target]] += 1
    return verts, m


def _refine(colors: list, m: list[list[int]]) -> list[int]:
    n = len(m)
    cur = _rank(colors)
    while True:
        sigs = []
        for i in range(n):
            nb = sorted(
                (cur[j], m[i][j], m[j][i]) for j in range(n) if j != i and (m[i][j] or m[j][i])
            )
            sigs.append((cur[i], m[i][i], tuple(nb)))
        new = _rank(sigs)
        if len(set(new)) == len(set(cur)):
            return new
        cur = new


def _twins(m: list[list[int]], i: int, j: int) -> bool:
    # swapping i and j is an automorphism, so branching on both is redundant
    if m[i][i] != m[j][j] or m[i][j] != m[j][i]:
        return False
    return all(
        m[i][k] == m[j][k] and m[k][i] == m[k][j] for k in range(len(m)) if k != i and k != j
    )


def _rank(keys: list) -> list[int]:
    table = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


def canonical_labeling(q: Quiver, colors: Mapping[str, object] | None = None) -> tuple[bytes, list[str]]:
    """Canonical form of ``q`` together with the vertex order realizing it.

    Individualization-refinement search: vertex colours are refined by
    neighbourhood signatures, ties are broken by branching on every vertex of
    the first non-singleton cell, and the lexicographically smallest adjacency
    word over all leaves wins. ``colors`` optionally pre-colours vertices
    (values must be mutually comparable).
    """
    verts, m = _adjacency(q)
    n = len(verts)
    init = [(0 if colors is None else colors[v],) for v in verts]
    best: list = [None, None]

    def leaf_word(order):
        return tuple(m[i][j] for i in order for j in order)

    def search(col):
        col = _refine(col, m)
        if len(set(col)) == n:
            order = sorted(range(n), key=lambda i: col[i])
            word = leaf_word(order)
            if best[0] is None or word < best[0]:
                best[0], best[1] = word, order
            return
        sizes = Counter(col)
        target = min(c for c, s in sizes.items() if s > 1)
        reps: list[int] = []
        for i in range(n):
            if col[i] != target or any(_twins(m, i, r) for r in reps):
                continue
            reps.append(i)
            search([(c, 0 if k == i else 1) if c == target else (c, 1) for k, c in enumerate(col)])

    if n:
        search(init)
        word, order = best
    else:
        word, order = (), []
    colour_word = [init[i][0] for i in order]
    payload = {"n": n, "colors": [repr(c) for c in colour_word] if colors else None, "adj": list(word)}
    return json.dumps(payload, separators=(",", ":")).encode(), [verts[i] for i in order]


def canonical_form(q: Quiver, colors: Mapping[str, object] | None = None) -> bytes:
    """Byte string equal for two quivers iff they are isomorphic."""
    return canonical_labeling(q, colors)[0]


def is_isomorphic(q1: Quiver, q2: Quiver) -> dict[str, str] | None:
    """Vertex bijection ``q1 -> q2`` preserving arrow multiplicities, or None."""
    if len(q1.vertices) != len(q2.vertices) or len(q1.arrows) != len(q2.arrows):
        return None
    f1, o1 = canonical_labeling(q1)
    f2, o2 = canonical_labeling(q2)
    if f1 != f2:
        return None
    return dict(zip(o1, o2))


# ---------------------------------------------------------------------------
# serialization


def qp_to_json(q: Quiver | QuiverWithPotential) -> str:
    """Byte-stable JSON document for a quiver (with optional potential)."""
    if isinstance(q, QuiverWithPotential):
        d = q.to_dict()
    else:
        d = q.to_dict()
        d["potential"] = []
    return json.dumps(d, indent=2, ensure_ascii=False) + "\n"


def qp_from_dict(d: Mapping) -> QuiverWithPotential:
    q = Quiver(
        tuple(d["vertices"]),
        tuple(Arrow(a["id"], a["source"], a["target"]) for a in d.get("arrows", [])),
    )
    pot = Potential(tuple((t["coeff"], tuple(t["cycle"])) for t in d.get("potential", [])))
    return QuiverWithPotential(q, pot)


def qp_from_json(text: str) -> QuiverWithPotential:
    return qp_from_dict(json.loads(text))
