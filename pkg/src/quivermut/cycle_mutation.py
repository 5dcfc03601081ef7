"""
Mutation of a quiver at an oriented cycle of summands.

The cycle ``v0 -> v1 -> ... -> v(l-1) -> v0`` is the mutated part (the "m"
vertices); everything else is frozen (the "f" vertices). Arrows entering the
cycle from frozen vertices are graded by ``c_index`` and arrows leaving it by
``b_index``: an arrow ``g`` has index ``i`` when ``g`` followed by ``i + 1``
cycle steps factors through a frozen-frozen arrow in the Jacobian algebra but
``g`` followed by ``i`` steps does not. Index ``l - 2`` means no such relation.

Besides the arrow-level rule (:func:`mutate_cycle`) this module builds the
integer exchange matrix ``S`` and evaluates the congruence ``S M S^t`` so the
two routes can be compared entrywise.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .quiver import (
    Arrow,
    Potential,
    Quiver,
    QuiverError,
    QuiverWithPotential,
    cancel_two_cycles,
    canonical_form,
    cyclic_derivative,
    fresh_id,
    fz_mutate_matrix,
    fz_mutate_quiver,
    skew_matrix,
)


class CycleSpecError(ValueError):
    """The annotation does not describe a valid cycle mutation."""


class UndecidableAnnotation(CycleSpecError):
    """Rewriting could not decide an index; supply the CycleSpec by hand."""


@dataclass(frozen=True)
class CycleSpec:
    cycle: tuple[str, ...]
    c_index: Mapping[str, int] = field(default_factory=dict)
    b_index: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "cycle", tuple(self.cycle))
        object.__setattr__(self, "c_index", dict(self.c_index))
        object.__setattr__(self, "b_index", dict(self.b_index))

    @property
    def length(self) -> int:
        return len(self.cycle)

    def position(self, v: str) -> int:
        return self.cycle.index(v)

    def to_json(self) -> str:
        d = {
            "cycle": list(self.cycle),
            "c_index": dict(sorted(self.c_index.items())),
            "b_index": dict(sorted(self.b_index.items())),
        }
        return json.dumps(d, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: Mapping) -> "CycleSpec":
        return cls(tuple(d["cycle"]), dict(d.get("c_index", {})), dict(d.get("b_index", {})))


@dataclass(frozen=True)
class Bipartition:
    mm: tuple[Arrow, ...]
    mf: tuple[Arrow, ...]
    fm: tuple[Arrow, ...]
    ff: tuple[Arrow, ...]


def classify_bipartition(q: Quiver, cycle_vertices: Iterable[str]) -> Bipartition:
    """Split the arrows of ``q`` by whether their endpoints lie on the cycle."""
    m = set(cycle_vertices)
    if not m <= set(q.vertices):
        raise QuiverError("cycle vertices must be vertices of the quiver")
    blocks = {(True, True): [], (True, False): [], (False, True): [], (False, False): []}
    for a in q.arrows:
        blocks[(a.source in m, a.target in m)].append(a)
    return Bipartition(
        tuple(blocks[(True, True)]),
        tuple(blocks[(True, False)]),
        tuple(blocks[(False, True)]),
        tuple(blocks[(False, False)]),
    )


def cycle_arrows(q: Quiver, cycle: Sequence[str]) -> list[Arrow]:
    """The arrows ``v_i -> v_(i+1)`` of the cycle, in cycle order."""
    out = []
    l = len(cycle)
    for i in range(l):
        hits = [a for a in q.arrows if a.source == cycle[i] and a.target == cycle[(i + 1) % l]]
        if len(hits) != 1:
            raise CycleSpecError(f"expected one arrow {cycle[i]} -> {cycle[(i + 1) % l]}")
        out.append(hits[0])
    return out


def block_matrices(q: Quiver, spec: CycleSpec) -> dict:
    """Matrix blocks in the vertex order ``cycle + frozen``.

    Returns a dict with ``order``, ``A``, ``B``, ``C``, ``D`` (arrow-count
    matrices of the four blocks), the graded pieces ``Cs[i]``/``Bs[i]`` for
    ``0 <= i <= l - 2`` and the skew matrix ``M``.
    """
    l = spec.length
    frozen = [v for v in q.vertices if v not in spec.cycle]
    order = list(spec.cycle) + frozen
    pos = {v: i for i, v in enumerate(order)}
    nf = len(frozen)
    A = np.zeros((l, l), dtype=int)
    B = np.zeros((l, nf), dtype=int)
    C = np.zeros((nf, l), dtype=int)
    D = np.zeros((nf, nf), dtype=int)
    Bs = [np.zeros((l, nf), dtype=int) for _ in range(max(l - 1, 0))]
    Cs = [np.zeros((nf, l), dtype=int) for _ in range(max(l - 1, 0))]
    for a in q.arrows:
        s, t = pos[a.source], pos[a.target]
        if s < l and t < l:
            A[s, t] += 1
        elif s < l:
            B[s, t - l] += 1
            Bs[spec.b_index[a.id]][s, t - l] += 1
        elif t < l:
            C[s - l, t] += 1
            Cs[spec.c_index[a.id]][s - l, t] += 1
        else:
            D[s - l, t - l] += 1
    return {
        "order": order, "A": A, "B": B, "C": C, "D": D, "Bs": Bs, "Cs": Cs,
        "M": skew_matrix(q, order),
    }


def validate_cycle_spec(q: Quiver, spec: CycleSpec) -> None:
    """Raise :class:`CycleSpecError` unless ``spec`` is a valid annotation of ``q``."""
    l = spec.length
    if l < 3:
        raise CycleSpecError("cycle length must be at least 3")
    if len(set(spec.cycle)) != l or not set(spec.cycle) <= set(q.vertices):
        raise CycleSpecError("cycle vertices must be distinct vertices of the quiver")
    sub = q.induced(spec.cycle)
    arrows = cycle_arrows(q, spec.cycle)
    if len(sub.arrows) != l:
        raise CycleSpecError("the cycle vertices induce more than the oriented cycle")
    del arrows
    parts = classify_bipartition(q, spec.cycle)
    if set(spec.c_index) != {a.id for a in parts.fm}:
        raise CycleSpecError("c_index must cover exactly the arrows entering the cycle")
    if set(spec.b_index) != {a.id for a in parts.mf}:
        raise CycleSpecError("b_index must cover exactly the arrows leaving the cycle")
    for k, v in list(spec.c_index.items()) + list(spec.b_index.items()):
        if not (isinstance(v, (int, np.integer)) and 0 <= v <= l - 2):
            raise CycleSpecError(f"index of {k!r} must lie in [0, {l - 2}]")
    blocks = block_matrices(q, spec)
    A = blocks["A"]
    for i in range(l - 2):
        lhs = blocks["Cs"][i].T
        rhs = np.linalg.matrix_power(A, i + 1) @ blocks["Bs"][i]
        if not np.array_equal(lhs, rhs):
            raise CycleSpecError(f"C_{i}^t != A^{i + 1} B_{i}: incoming and outgoing grading disagree")


# ---------------------------------------------------------------------------
# deriving the grading from a potential


class _Rewriter:
    """Decides whether a path factors through a frozen-frozen arrow.

    Each cyclic derivative ``sum c_k p_k`` is read as the rules
    ``p_k -> -(sum_{j != k} c_j p_j) / c_k``. A path factors if it already uses
    a frozen-frozen arrow, if it contains a term whose relation has no other
    terms (so the path is zero), or if some rewrite turns it into paths that
    all factor.
    """

    def __init__(self, qp: QuiverWithPotential, frozen_arrows: set[str], max_len: int, max_depth: int = 4):
        self.ff = frozen_arrows
        self.max_len = max_len
        self.max_depth = max_depth
        self.rules: list[tuple[tuple[str, ...], list[tuple[str, ...]]]] = []
        for a in qp.quiver.arrows:
            rel = cyclic_derivative(qp.potential, a.id)
            terms = list(rel)
            for t in terms:
                if t:
                    self.rules.append((t, [o for o in terms if o != t]))
        self.cut = False

    def factors(self, path: tuple[str, ...], depth: int = 0, seen=None) -> bool:
        if any(x in self.ff for x in path):
            return True
        if depth >= self.max_depth:
            self.cut = True
            return False
        seen = set() if seen is None else seen
        if path in seen:
            return False
        seen = seen | {path}
        for lhs, others in self.rules:
            k = len(lhs)
            for s in range(len(path) - k + 1):
                if path[s:s + k] != lhs:
                    continue
                rewritten = [path[:s] + o + path[s + k:] for o in others]
                if any(len(p) > self.max_len for p in rewritten):
                    self.cut = True
                    continue
                if all(self.factors(p, depth + 1, seen) for p in rewritten):
                    return True
        return False


def derive_cb_indices(qp: QuiverWithPotential, cycle_vertices: Sequence[str]) -> CycleSpec:
    """Grade the arrows entering and leaving the cycle using the potential.

    ``c_index(g)`` is the least ``i <= l - 3`` such that ``g`` followed by
    ``i + 1`` cycle arrows factors through a frozen-frozen arrow, and
    ``l - 2`` if there is none; ``b_index`` is the dual notion for arrows
    leaving the cycle (cycle arrows first). Decisions come from bounded
    rewriting with the cyclic derivatives (paths up to length ``2l``).
    """
    q = qp.quiver
    cycle = tuple(cycle_vertices)
    l = len(cycle)
    alphas = cycle_arrows(q, cycle)
    parts = classify_bipartition(q, cycle)
    rw = _Rewriter(qp, {a.id for a in parts.ff}, max_len=2 * l)
    pos = {v: i for i, v in enumerate(cycle)}

    def grade(make_path) -> int:
        for i in range(l - 2):
            rw.cut = False
            if rw.factors(make_path(i + 1)):
                return i
            if rw.cut:
                raise UndecidableAnnotation(
                    "rewriting hit its bound before deciding a factorization; "
                    "supply the CycleSpec manually"
                )
        return l - 2

    c_index = {}
    for g in parts.fm:
        p0 = pos[g.target]
        c_index[g.id] = grade(lambda k, g=g, p0=p0: (g.id,) + tuple(alphas[(p0 + j) % l].id for j in range(k)))
    b_index = {}
    for b in parts.mf:
        p0 = pos[b.source]
        b_index[b.id] = grade(
            lambda k, b=b, p0=p0: tuple(alphas[(p0 - k + j) % l].id for j in range(k)) + (b.id,)
        )
    spec = CycleSpec(cycle, c_index, b_index)
    validate_cycle_spec(q, spec)
    return spec


# ---------------------------------------------------------------------------
# the arrow-level rule


def mutate_cycle(q: Quiver, spec: CycleSpec) -> Quiver:
    """Mutate ``q`` at the oriented cycle described by ``spec``.

    Cycle arrows and frozen-frozen arrows are kept. An entering arrow ``g`` of
    index ``l - 2`` is replaced by the reverse of ``g a^(l-1)``; leaving arrows
    of index ``l - 2`` dually. For each ``g a^i b`` with ``i`` at most both
    indices and at least one index equal to ``l - 2`` a composite arrow is
    added. Loops and 2-cycles are cancelled at the end.
    """
    validate_cycle_spec(q, spec)
    l = spec.length
    alphas = cycle_arrows(q, spec.cycle)
    pos = {v: i for i, v in enumerate(spec.cycle)}
    parts = classify_bipartition(q, spec.cycle)
    taken = set(q.arrow_ids)
    out: list[Arrow] = list(parts.mm) + list(parts.ff)

    def walk(p0: int, k: int) -> list[str]:
        return [alphas[(p0 + j) % l].id for j in range(k)]

    def add(word: str, src: str, tgt: str):
        aid = fresh_id(word, taken)
        taken.add(aid)
        out.append(Arrow(aid, src, tgt))

    for g in parts.fm:
        if spec.c_index[g.id] < l - 2:
            out.append(g)
        else:
            p0 = pos[g.target]
            end = spec.cycle[(p0 + l - 1) % l]
            add("[" + ".".join([g.id] + walk(p0, l - 1)) + "]^t", end, g.source)
    for b in parts.mf:
        if spec.b_index[b.id] < l - 2:
            out.append(b)
        else:
            p0 = pos[b.source]
            start = (p0 - (l - 1)) % l
            add("[" + ".".join(walk(start, l - 1) + [b.id]) + "]^t", b.target, spec.cycle[start])
    for g in parts.fm:
        ci = spec.c_index[g.id]
        for b in parts.mf:
            bi = spec.b_index[b.id]
            if ci != l - 2 and bi != l - 2:
                continue
            i = (pos[b.source] - pos[g.target]) % l
            if i <= ci and i <= bi:
                add("[" + ".".join([g.id] + walk(pos[g.target], i) + [b.id]) + "]", g.source, b.target)
    return q.with_arrows(cancel_two_cycles(out))


# ---------------------------------------------------------------------------
# exchange matrix and congruence


@dataclass(frozen=True)
class ExchangeMatrixS:
    """Exchange matrix in the vertex order ``order`` (cycle first).

    ``untwisted`` has top-left block ``-1``; ``twisted`` is ``untwisted``
    multiplied on the left by ``diag(A^-1, 1)``, which keeps the cycle
    vertices' labels aligned with the arrow-level rule.
    """

    order: tuple[str, ...]
    untwisted: np.ndarray
    twisted: np.ndarray


def build_exchange_matrix(q: Quiver, spec: CycleSpec) -> ExchangeMatrixS:
    validate_cycle_spec(q, spec)
    blocks = block_matrices(q, spec)
    A = blocks["A"]
    l = spec.length
    nf = len(blocks["order"]) - l
    lower = np.zeros((nf, l), dtype=int)
    power_sum = np.zeros((l, l), dtype=int)
    for i, Ci in enumerate(blocks["Cs"]):
        power_sum = power_sum + np.linalg.matrix_power(A, i)
        lower = lower + Ci @ power_sum
    top = np.hstack([-np.eye(l, dtype=int), np.zeros((l, nf), dtype=int)])
    bottom = np.hstack([lower, np.eye(nf, dtype=int)])
    S = np.vstack([top, bottom])
    twist = np.eye(l + nf, dtype=int)
    twist[:l, :l] = A.T  # A is a permutation matrix, so A^-1 = A^t
    return ExchangeMatrixS(tuple(blocks["order"]), S, twist @ S)


def palu_mutate(m: np.ndarray, s: np.ndarray | ExchangeMatrixS) -> np.ndarray:
    """Congruence ``S M S^t`` (twisted ``S`` when given an :class:`ExchangeMatrixS`)."""
    S = s.twisted if isinstance(s, ExchangeMatrixS) else np.asarray(s, dtype=int)
    m = np.asarray(m, dtype=int)
    if S.shape != m.shape or m.shape[0] != m.shape[1]:
        raise ValueError(f"dimension mismatch: S is {S.shape}, M is {m.shape}")
    return S @ m @ S.T


def verify_appendix_identities(q: Quiver, spec: CycleSpec) -> dict[str, bool]:
    """Evaluate the block identities behind the cycle rule on one instance.

    * ``mm``: the cycle block of ``S M S^t`` equals ``A - A^t``;
    * ``top_index_bracket``: the summands of type ``C_(l-2) (...) C_(l-2)^t``
      cancel;
    * ``lower_index_sum``: the summands involving only indices ``<= l - 3``
      cancel;
    * ``fm_closed_form``: the frozen-to-cycle block equals
      ``sum C_i - sum B_i^t + (A^(l-1) B_(l-2))^t - C_(l-2) A^(l-1)``
      (sums over ``i <= l - 3``).
    """
    validate_cycle_spec(q, spec)
    b = block_matrices(q, spec)
    A, Cs, Bs = b["A"], b["Cs"], b["Bs"]
    l = spec.length
    At = A.T
    mp = lambda k: np.linalg.matrix_power(A, k % l)
    partial = lambda i: sum((mp(j) for j in range(i + 1)), np.zeros_like(A))
    S = build_exchange_matrix(q, spec)
    Mp = palu_mutate(b["M"], S)

    top = Cs[l - 2]
    P = partial(l - 2)
    bracket = top @ P @ (A - At) @ P.T @ top.T - top @ P @ top.T + top @ P.T @ top.T

    lower = np.zeros((len(b["order"]) - l,) * 2, dtype=int)
    for i1 in range(l - 2):
        for i2 in range(l - 2):
            P1, P2 = partial(i1), partial(i2)
            lower += Cs[i1] @ P1 @ (A - At) @ P2.T @ Cs[i2].T
            lower += Cs[i1] @ P1 @ (Bs[i2] - Cs[i2].T)
            lower += (Cs[i1] - Bs[i1].T) @ P2.T @ Cs[i2].T

    closed = (
        sum((Cs[i] - Bs[i].T for i in range(l - 2)), np.zeros_like(b["C"]))
        + (mp(l - 1) @ Bs[l - 2]).T
        - Cs[l - 2] @ mp(l - 1)
    )
    return {
        "mm": bool(np.array_equal(Mp[:l, :l], A - At)),
        "top_index_bracket": bool(not bracket.any()),
        "lower_index_sum": bool(not lower.any()),
        "fm_closed_form": bool(np.array_equal(Mp[l:, :l], closed)),
    }


# ---------------------------------------------------------------------------
# FZ witness search


def find_fz_sequence(
    q: Quiver,
    target: Quiver,
    max_depth: int,
    vertices: Iterable[str] | None = None,
    labelled: bool = False,
) -> list[str] | None:
    """Shortest FZ mutation sequence from ``q`` to ``target``.

    Breadth-first search. By default the goal is the isomorphism class of
    ``target`` and states are deduplicated by canonical form. With
    ``labelled`` the goal is ``target`` on the same vertex ids, up to
    permuting the mutated vertices among themselves (FZ mutation does not
    track which mutated summand is which); states are skew matrices. This
    rules out the empty answer when the two quivers are merely isomorphic.
    ``vertices`` restricts the mutated vertices; in the unlabelled search they
    are coloured so the restriction is respected.
    """
    allowed = list(q.vertices if vertices is None else vertices)
    if labelled:
        return _labelled_search(q, target, max_depth, allowed)
    colours = {v: int(v in allowed) for v in q.vertices}
    restricted = vertices is not None
    key = lambda x: canonical_form(x, colours if restricted else None)
    goal = canonical_form(target)
    if canonical_form(q) == goal:
        return []
    seen = {key(q)}
    frontier = deque([(q, [])])
    while frontier:
        cur, path = frontier.popleft()
        if len(path) >= max_depth:
            continue
        for v in allowed:
            nxt = fz_mutate_quiver(cur, v)
            if (canonical_form(nxt) if restricted else key(nxt)) == goal:
                return path + [v]
            k = key(nxt)
            if k in seen:
                continue
            seen.add(k)
            frontier.append((nxt, path + [v]))
    return None


def _labelled_search(q: Quiver, target: Quiver, max_depth: int, allowed: list[str]) -> list[str] | None:
    if set(target.vertices) != set(q.vertices):
        raise QuiverError("labelled search needs the same vertex set")
    if len(allowed) > 7:
        raise ValueError("labelled search permutes the mutated vertices; restrict to at most 7")
    order = list(q.vertices)
    goals = set()
    for perm in permutations(allowed):
        ren = dict(zip(allowed, perm))
        goals.add(skew_matrix(target, [ren.get(v, v) for v in order]).tobytes())
    m0 = skew_matrix(q, order)
    if m0.tobytes() in goals:
        return []
    idx = [order.index(v) for v in allowed]
    seen = {m0.tobytes()}
    frontier = deque([(m0, [])])
    while frontier:
        m, path = frontier.popleft()
        if len(path) >= max_depth:
            continue
        for i in idx:
            m2 = fz_mutate_matrix(m, i)
            k = m2.tobytes()
            if k in goals:
                return path + [order[i]]
            if k not in seen:
                seen.add(k)
                frontier.append((m2, path + [order[i]]))
    return None


def mutation_class(q: Quiver, max_depth: int) -> dict:
    """Breadth-first exploration of the FZ mutation class up to ``max_depth``.

    Returns ``classes`` (canonical forms as text, in discovery order),
    ``depth_counts`` (new classes found at each depth), ``edges`` (pairs of
    class indices joined by one mutation) and ``complete`` (whether the search
    exhausted the class before the depth bound).
    """
    start = canonical_form(q)
    index = {start: 0}
    reps = [q]
    depth_counts = [1]
    edges = set()
    frontier = [0]
    depth = 0
    while frontier and depth < max_depth:
        depth += 1
        nxt = []
        for i in frontier:
            cur = reps[i]
            for v in cur.vertices:
                m = fz_mutate_quiver(cur, v)
                key = canonical_form(m)
                if key not in index:
                    index[key] = len(reps)
                    reps.append(m)
                    nxt.append(index[key])
                j = index[key]
                if i != j:
                    edges.add((min(i, j), max(i, j)))
        if nxt:
            depth_counts.append(len(nxt))
        frontier = nxt
    return {
        "classes": [k.decode() for k in index],
        "depth_counts": depth_counts,
        "edges": sorted(edges),
        "complete": not frontier,
    }


def apply_fz_sequence(q: Quiver, seq: Iterable[str]) -> Quiver:
    for v in seq:
        q = fz_mutate_quiver(q, v)
    return q


__all__ = [
    "Bipartition", "CycleSpec", "CycleSpecError", "ExchangeMatrixS", "UndecidableAnnotation",
    "apply_fz_sequence", "block_matrices", "build_exchange_matrix", "classify_bipartition",
    "cycle_arrows", "derive_cb_indices", "find_fz_sequence", "mutate_cycle", "mutation_class", "palu_mutate",
    "validate_cycle_spec", "verify_appendix_identities",
]
