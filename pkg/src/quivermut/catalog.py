"""
Finite-type 2-Calabi-Yau tilted algebras that are not cluster-tilted.

Three families:

* ``A3n3``: a loop ``alpha`` glued to a type-A cluster-tilted quiver at a
  connecting vertex, potential ``alpha^3`` plus the attachment's potential;
* ``Dnll``: a central oriented ``q``-cycle with optional star triangles,
  potential ``(alpha_1 ... alpha_q)^ell`` plus the star triangles plus the
  attachments' potentials;
* ``E82a`` ... ``E82g``: seven four-vertex quivers with potential.

Each family ships a cyclic cover (voltage assignment) so that every vertex can
be mutated through :func:`quivermut.covering.mutate_at_vertex_via_cover`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .covering import mutate_at_vertex_via_cover
from .quiver import (
    Arrow,
    Potential,
    Quiver,
    QuiverError,
    QuiverWithPotential,
    canonical_form,
    minimal_cycles,
    normalize_cycle,
)
from .triangulation import is_type_a


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class TypeAAttachment:
    """A cluster-tilted quiver of type A with a designated connecting vertex."""

    quiver: Quiver
    vertex: str

    def __post_init__(self):
        q, v = self.quiver, self.vertex
        if v not in q.vertices:
            raise CatalogError(f"connecting vertex {v!r} is not a vertex of the attachment")
        if not is_type_a(q):
            raise CatalogError("attachment is not a cluster-tilted quiver of type A")
        if not is_connecting_vertex(q, v):
            raise CatalogError(f"{v!r} is not a connecting vertex")

    @classmethod
    def point(cls, name: str = "*") -> "TypeAAttachment":
        return cls(Quiver((name,)), name)

    @property
    def potential(self) -> Potential:
        return Potential.from_cycles(minimal_cycles(self.quiver))


def is_connecting_vertex(q: Quiver, v: str) -> bool:
    """At most two adjacent arrows, and a vertex with two lies on a 3-cycle."""
    adjacent = [a for a in q.arrows if v in (a.source, a.target)]
    if len(adjacent) > 2:
        return False
    if len(adjacent) == 2:
        arrows = {a.id: a for a in q.arrows}
        return any(len(c) == 3 and any(arrows[x].source == v for x in c) for c in minimal_cycles(q))
    return True


@dataclass(frozen=True)
class CatalogEntry:
    family: str
    params: Mapping
    qp: QuiverWithPotential
    cover_ell: int = 0
    cover_shifts: Mapping[str, int] = field(default_factory=dict)

    @property
    def quiver(self) -> Quiver:
        return self.qp.quiver

    def mutate(self, v: str) -> Quiver:
        """Mutate at ``v`` through this entry's cyclic cover."""
        return mutate_at_vertex_via_cover(
            self.qp, v, self.cover_ell, self.cover_shifts, delegate_plain=False
        )


def _glue(att: TypeAAttachment, star: str, prefix: str) -> tuple[list[str], list[Arrow], Potential]:
    """Rename an attachment so its connecting vertex becomes ``star``."""
    ren = {v: (star if v == att.vertex else f"{prefix}{v}") for v in att.quiver.vertices}
    arrows = [Arrow(f"{prefix}{a.id}", ren[a.source], ren[a.target]) for a in att.quiver.arrows]
    pot = att.potential.renamed({a.id: f"{prefix}{a.id}" for a in att.quiver.arrows})
    return [ren[v] for v in att.quiver.vertices if v != att.vertex], arrows, pot


def gen_a3n3(attachment: TypeAAttachment) -> CatalogEntry:
    """Loop ``alpha`` at the connecting vertex of a type-A attachment.

    ``n`` is the number of vertices, so the loop alone is ``A_{3,3}``.
    """
    q = attachment.quiver
    if "alpha" in q.arrow_ids:
        raise CatalogError("attachment already uses the arrow id 'alpha'")
    quiver = Quiver(q.vertices, q.arrows + (Arrow("alpha", attachment.vertex, attachment.vertex),))
    pot = Potential(((1, ("alpha",) * 3),)) + attachment.potential
    n = len(q.vertices)
    return CatalogEntry("A3n3", {"n": n}, QuiverWithPotential(quiver, pot), 3, {"alpha": 1})


def gen_dnll(
    q: int,
    ell: int,
    stars: Iterable[int] = (),
    attachments: Mapping[int, TypeAAttachment] | None = None,
) -> CatalogEntry:
    """Central ``q``-cycle ``alpha_i: v{i} -> v{i+1}`` with star triangles.

    Star ``i`` adds ``beta_i: v{i+1} -> s{i}`` and ``gamma_i: s{i} -> v{i}``.
    Attachments (keyed by star index) are glued at ``s{i}`` with vertex and
    arrow ids prefixed ``s{i}.``. ``n`` is the number of vertices and
    ``n * ell >= 4`` is required.
    """
    stars = sorted(set(stars))
    attachments = dict(attachments or {})
    if q < 1:
        raise CatalogError("q must be at least 1")
    if ell < 2:
        raise CatalogError("ell must be at least 2 (ell = 1 is a cluster category)")
    if any(not 1 <= i <= q for i in stars):
        raise CatalogError(f"stars must be indices in 1..{q}")
    if q == 1 and not stars:
        raise CatalogError("q = 1 requires a star")
    if set(attachments) - set(stars):
        raise CatalogError("attachments are only allowed at present stars")
    if q == 1 and ell == 2:
        return _dnll_reduced_q1(attachments.get(1))
    centre = [f"v{i}" for i in range(1, q + 1)]
    verts = list(centre)
    arrows = [Arrow(f"alpha_{i}", centre[i - 1], centre[i % q]) for i in range(1, q + 1)]
    cyc = tuple(f"alpha_{i}" for i in range(1, q + 1)) * ell
    pot = Potential(((1, cyc),))
    for i in stars:
        s = f"s{i}"
        verts.append(s)
        arrows += [Arrow(f"beta_{i}", centre[i % q], s), Arrow(f"gamma_{i}", s, centre[i - 1])]
        pot = pot + Potential(((1, (f"alpha_{i}", f"beta_{i}", f"gamma_{i}")),))
        if i in attachments:
            extra_v, extra_a, extra_p = _glue(attachments[i], s, f"{s}.")
            verts += extra_v
            arrows += extra_a
            pot = pot + extra_p
    n = len(verts)
    if n * ell < 4:
        raise CatalogError(f"n * ell = {n * ell} < 4")
    shifts = {f"alpha_{q}": 1}
    if q in stars:
        shifts[f"beta_{q}"] = ell - 1
    params = {"q": q, "ell": ell, "stars": tuple(i in stars for i in range(1, q + 1)), "n": n}
    return CatalogEntry("Dnll", params, QuiverWithPotential(Quiver(tuple(verts), tuple(arrows)), pot), ell, shifts)


def _dnll_reduced_q1(att: TypeAAttachment | None) -> CatalogEntry:
    """``q = 1``, ``ell = 2`` after reduction.

    ``alpha^2 + alpha beta gamma`` has a quadratic term: ``alpha = -beta gamma / 2``
    in the Jacobian algebra, so the loop is not an arrow of its quiver. What is
    left is the 2-cycle ``beta_1: v1 -> s1``, ``gamma_1: s1 -> v1`` with
    ``(beta gamma)^2`` (up to rescaling) and the attachment at ``s1``. Upstairs
    the 2-cycle opens into an oriented 4-cycle.
    """
    verts = ["v1", "s1"]
    arrows = [Arrow("beta_1", "v1", "s1"), Arrow("gamma_1", "s1", "v1")]
    pot = Potential(((1, ("beta_1", "gamma_1") * 2),))
    if att is not None:
        extra_v, extra_a, extra_p = _glue(att, "s1", "s1.")
        verts += extra_v
        arrows += extra_a
        pot = pot + extra_p
    params = {"q": 1, "ell": 2, "stars": (True,), "n": len(verts)}
    qp = QuiverWithPotential(Quiver(tuple(verts), tuple(arrows)), pot)
    return CatalogEntry("Dnll", params, qp, 2, {"beta_1": 1})


# -- E_{8,2} ----------------------------------------------------------------

_E82 = {
    "a": ([("eta", "1", "2"), ("alpha", "2", "3"), ("beta", "3", "2"), ("theta", "4", "3")],
          [("alpha", "beta", "alpha", "beta")]),
    "b": ([("eta", "1", "2"), ("alpha", "2", "3"), ("beta", "3", "2"), ("gamma", "3", "4"), ("delta", "4", "2")],
          [("alpha", "beta", "alpha", "beta"), ("alpha", "gamma", "delta")]),
    "c": ([("eta", "1", "2"), ("alpha", "2", "3"), ("gamma", "3", "4"), ("delta", "4", "2")],
          [("alpha", "gamma", "delta") * 2]),
    "d": ([("eta", "1", "3"), ("alpha", "2", "3"), ("beta", "3", "2"), ("gamma", "3", "4"), ("delta", "4", "2")],
          [("alpha", "beta", "alpha", "beta"), ("alpha", "gamma", "delta")]),
    "e": ([("alpha", "1", "2"), ("beta", "2", "1"), ("gamma", "3", "2"), ("delta", "3", "4"),
           ("rho", "1", "3"), ("epsilon", "4", "1")],
          [("alpha", "beta", "alpha", "beta"), ("rho", "gamma", "beta"), ("rho", "delta", "epsilon")]),
    "f": ([("alpha", "1", "2"), ("beta", "2", "1"), ("gamma", "2", "3"), ("delta", "4", "3"),
           ("rho", "3", "1"), ("epsilon", "1", "4")],
          [("alpha", "beta", "alpha", "beta"), ("rho", "alpha", "gamma"), ("rho", "epsilon", "delta")]),
    "g": ([("alpha", "1", "2"), ("beta", "2", "1"), ("gamma", "2", "3"), ("delta", "3", "4"), ("epsilon", "4", "1")],
          [("alpha", "beta", "alpha", "beta"), ("alpha", "gamma", "delta", "epsilon")]),
}

# order-2 voltages; every potential term closes up and every 2-cycle opens into a 4-cycle
_E82_SHIFTS = {
    "a": {"alpha": 1},
    "b": {"alpha": 1, "gamma": 1},
    "c": {"alpha": 1},
    "d": {"alpha": 1, "gamma": 1},
    "e": {"alpha": 1},
    "f": {"alpha": 1, "gamma": 1},
    "g": {"alpha": 1, "gamma": 1},
}

E82_LETTERS = tuple("abcdefg")

# the undirected edges of the drawn mutation graph
E82_EDGES = frozenset(
    frozenset(e) for e in ("ab", "ad", "bc", "cd", "fg", "ge", "bf", "de", "fc", "ce", "bd")
)


def gen_e82(letter: str) -> CatalogEntry:
    if letter not in _E82:
        raise CatalogError(f"unknown E82 letter {letter!r}; expected one of a..g")
    arrows, terms = _E82[letter]
    q = Quiver.from_edges(["1", "2", "3", "4"], arrows)
    qp = QuiverWithPotential(q, Potential.from_cycles(terms))
    return CatalogEntry(f"E82{letter}", {"letter": letter}, qp, 2, dict(_E82_SHIFTS[letter]))


def pendant_arrows(q: Quiver) -> list[Arrow]:
    """Arrows with exactly one endpoint of degree one (undirected leaves)."""
    deg = {v: 0 for v in q.vertices}
    for a in q.arrows:
        deg[a.source] += 1
        deg[a.target] += 1
    return [a for a in q.arrows if a.source != a.target and (deg[a.source] == 1) != (deg[a.target] == 1)]


def leaf_normalized(q: Quiver) -> Quiver:
    """Orient every pendant arrow towards its leaf."""
    deg = {v: 0 for v in q.vertices}
    for a in q.arrows:
        deg[a.source] += 1
        deg[a.target] += 1
    pend = {a.id for a in pendant_arrows(q)}
    return q.with_arrows(
        Arrow(a.id, a.target, a.source) if a.id in pend and deg[a.source] == 1 else a for a in q.arrows
    )


def pendant_variants(q: Quiver) -> list[Quiver]:
    """All reorientations of the pendant arrows."""
    pend = [a.id for a in pendant_arrows(q)]
    out = []
    for flips in product((False, True), repeat=len(pend)):
        flip = {x for x, f in zip(pend, flips) if f}
        out.append(q.with_arrows(Arrow(a.id, a.target, a.source) if a.id in flip else a for a in q.arrows))
    return out


def _e82_forms() -> dict[bytes, str]:
    return {canonical_form(leaf_normalized(gen_e82(x).quiver)): x for x in E82_LETTERS}


def e82_letter_of(q: Quiver) -> str | None:
    if len(q.vertices) != 4:
        return None
    return _e82_forms().get(canonical_form(leaf_normalized(q)))


def e82_mutation_graph() -> nx.Graph:
    """The drawn mutation graph on the letters a..g."""
    g = nx.Graph()
    g.add_nodes_from(E82_LETTERS)
    g.add_edges_from(tuple(e) for e in E82_EDGES)
    return g


@dataclass(frozen=True)
class E82Closure:
    graph: nx.Graph
    outcomes: tuple  # (letter, vertex, variant index, resulting letter or None)

    @property
    def closed(self) -> bool:
        return all(r is not None for *_, r in self.outcomes)


def e82_closure() -> E82Closure:
    """Mutate every letter (every pendant orientation) at every vertex via the order-2 cover.

    An edge joins two distinct letters when some mutation turns one into the
    other. Pendant edges are drawn without orientation, so both orientations
    are explored.
    """
    g = nx.Graph()
    g.add_nodes_from(E82_LETTERS)
    outcomes = []
    for x in E82_LETTERS:
        entry = gen_e82(x)
        for k, qv in enumerate(pendant_variants(entry.quiver)):
            for v in qv.vertices:
                r = mutate_at_vertex_via_cover(qv, v, 2, entry.cover_shifts, delegate_plain=False)
                y = e82_letter_of(r)
                outcomes.append((x, v, k, y))
                if y is not None and y != x:
                    g.add_edge(x, y)
    return E82Closure(g, tuple(outcomes))


# -- classification ---------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    family: str
    params: Mapping

    def to_dict(self) -> dict:
        return {"family": self.family, "params": {k: (list(v) if isinstance(v, tuple) else v)
                                                  for k, v in self.params.items()}}


def _min_rotation(flags: Sequence[bool]) -> tuple[bool, ...]:
    flags = tuple(flags)
    if not flags:
        return flags
    return min(flags[k:] + flags[:k] for k in range(len(flags)))


def normalized_stars(flags: Sequence[bool]) -> tuple[bool, ...]:
    return _min_rotation(flags)


def _components(q: Quiver, drop: set[str]) -> list[set[str]]:
    g = nx.Graph()
    g.add_nodes_from(v for v in q.vertices if v not in drop)
    g.add_edges_from((a.source, a.target) for a in q.arrows if a.source not in drop and a.target not in drop)
    return [set(c) for c in nx.connected_components(g)]


def _attachment_ok(q: Quiver, comp: set[str], star: str) -> bool:
    sub = q.induced(comp)
    return is_type_a(sub) and is_connecting_vertex(sub, star)


def _classify_a3n3(q: Quiver) -> Classification | None:
    loops = q.loops()
    if len(loops) != 1 or any(q.has_two_cycle_at(v) for v in q.vertices):
        return None
    v = loops[0].source
    rest = q.with_arrows(a for a in q.arrows if a.id != loops[0].id)
    if not _attachment_ok(rest, set(rest.vertices), v):
        return None
    return Classification("A3n3", {"n": len(q.vertices), "connecting_vertex": v})


def _match_dnll(q: Quiver, cycle: Sequence[Arrow]) -> Classification | None:
    central = [a.source for a in cycle]
    qn = len(central)
    cset = set(central)
    cycle_ids = {a.id for a in cycle}
    inner = [a for a in q.arrows if a.source in cset and a.target in cset]
    if {a.id for a in inner} != cycle_ids:
        return None
    touching = [a for a in q.arrows if (a.source in cset) != (a.target in cset)]
    by_outer: dict[str, list[Arrow]] = {}
    for a in touching:
        by_outer.setdefault(a.target if a.source in cset else a.source, []).append(a)
    flags = [False] * qn
    star_of = {}
    for s, arrs in by_outer.items():
        if len(arrs) != 2:
            return None
        beta = [a for a in arrs if a.target == s]
        gamma = [a for a in arrs if a.source == s]
        if len(beta) != 1 or len(gamma) != 1:
            return None
        i = central.index(gamma[0].target)
        if beta[0].source != central[(i + 1) % qn] or flags[i]:
            return None
        flags[i] = True
        star_of[s] = i
    comps = _components(q, cset)
    for comp in comps:
        stars_here = [s for s in star_of if s in comp]
        if len(stars_here) != 1 or not _attachment_ok(q, comp, stars_here[0]):
            return None
    if qn == 1 and not any(flags):
        return None
    return Classification("Dnll", {"q": qn, "ell": None, "stars": normalized_stars(flags), "n": len(q.vertices)})


def _match_dnll_reduced_q1(q: Quiver, cycle: Sequence[Arrow]) -> Classification | None:
    """A 2-cycle whose other vertices all hang off one of its ends as a type-A attachment."""
    if len(cycle) != 2:
        return None
    cset = {a.source for a in cycle}
    inner = [a for a in q.arrows if a.source in cset and a.target in cset]
    if {a.id for a in inner} != {a.id for a in cycle} or len(cset) != 2:
        return None
    ends = {a.source if a.source in cset else a.target
            for a in q.arrows if (a.source in cset) != (a.target in cset)}
    if len(ends) != 1:
        return None
    s = ends.pop()
    rest = set(q.vertices) - cset
    if not _attachment_ok(q, rest | {s}, s):
        return None
    return Classification("Dnll", {"q": 1, "ell": None, "stars": (True,), "n": len(q.vertices)})


def _central_power(qp: QuiverWithPotential) -> tuple[tuple[str, ...], int] | None:
    """The term of the potential that is a proper power of a simple cycle, if unique."""
    arrows = {a.id: a for a in qp.quiver.arrows}
    found = []
    for _, cyc in qp.potential.terms:
        for k in range(1, len(cyc)):
            if len(cyc) % k or len(cyc) // k < 2:
                continue
            base = cyc[:k]
            if base * (len(cyc) // k) == cyc and len({arrows[x].source for x in base}) == k:
                found.append((base, len(cyc) // k))
                break
    return found[0] if len(found) == 1 else None


def classify(q: Quiver | QuiverWithPotential) -> Classification | None:
    """Identify the catalog family of a quiver (optionally with its potential).

    E82 letters are matched up to pendant orientation. ``A3n3`` needs exactly
    one loop and a type-A remainder. ``Dnll`` needs a central cycle with star
    triangles and type-A attachments at the stars, or the reduced ``q = 1``,
    ``ell = 2`` shape (a 2-cycle with an attachment at one end); ``ell`` is
    read from the potential when one is given. Quivers without loops and 2-cycles are only
    matched against the E82 letters unless a potential exhibits the central
    power, since the quiver alone does not separate them from cluster-tilted
    quivers.
    """
    qp = q if isinstance(q, QuiverWithPotential) else None
    quiver = qp.quiver if qp else q
    letter = e82_letter_of(quiver)
    if letter is not None:
        return Classification(f"E82{letter}", {"letter": letter})
    power = _central_power(qp) if qp is not None and len(qp.potential) else None
    if power is None or (len(power[0]) == 1 and power[1] == 3):
        hit = _classify_a3n3(quiver)
        if hit is not None:
            return hit
    arrows = {a.id: a for a in quiver.arrows}
    candidates: list[tuple[Arrow, ...]] = []
    if power is not None:
        candidates.append(tuple(arrows[x] for x in power[0]))
    else:
        has_special = quiver.loops() or any(quiver.has_two_cycle_at(v) for v in quiver.vertices)
        if not has_special:
            return None
        for cyc in sorted(minimal_cycles(quiver), key=lambda c: -len(c)):
            candidates.append(tuple(arrows[x] for x in cyc))
        # a 2-cycle may carry star triangles, which makes it non-minimal
        for a in quiver.arrows:
            for b in quiver.arrows:
                if a.id < b.id and a.source == b.target and a.target == b.source and a.source != a.target:
                    candidates.append((a, b))
    for cyc in candidates:
        hit = _match_dnll(quiver, cyc) or _match_dnll_reduced_q1(quiver, cyc)
        if hit is not None:
            params = dict(hit.params)
            if power is not None:
                params["ell"] = power[1]
                if params["n"] * power[1] < 4:
                    continue
                if params["q"] == 1 and len(cyc) == 2 and power[1] != 2:
                    continue
            return Classification("Dnll", params)
    return None


__all__ = [
    "CatalogEntry", "CatalogError", "Classification", "E82Closure", "E82_EDGES", "E82_LETTERS",
    "TypeAAttachment", "classify", "e82_closure", "e82_letter_of", "e82_mutation_graph",
    "gen_a3n3", "gen_dnll", "gen_e82", "is_connecting_vertex", "leaf_normalized",
    "normalized_stars", "pendant_variants",
]
