"""
Cyclic Galois coverings of quivers and mutation at loops and 2-cycles.

A cover of order ``ell`` is built from a voltage assignment: every base arrow
``a: u -> v`` with shift ``s`` lifts to the arrows ``(u, k) -> (v, k + s)``.
Cover vertices are named ``f"{v}_{k}"`` and cover arrows ``f"{a}_{k}"`` with
``k = 1..ell`` the copy of the source. The deck generator sends copy ``k`` to
copy ``k + 1``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .cycle_mutation import CycleSpec, derive_cb_indices, mutate_cycle
from .quiver import (
    Arrow,
    MutationError,
    Potential,
    Quiver,
    QuiverError,
    QuiverWithPotential,
    fz_mutate_quiver,
    normalize_cycle,
    sum_of_minimal_cycles_potential,
)


class CoveringError(ValueError):
    """Malformed voltage data or a quiver that does not descend to the base."""


class UnsupportedConfiguration(MutationError):
    """The fiber of the mutated vertex is neither cycles nor isolated vertices."""


@dataclass(frozen=True)
class CoveringMap:
    cover: Quiver
    base: Quiver
    ell: int
    shifts: Mapping[str, int]
    vertex_proj: Mapping[str, str]
    arrow_proj: Mapping[str, str]

    def lift_vertex(self, v: str, k: int) -> str:
        return f"{v}_{(k - 1) % self.ell + 1}"

    def fiber(self, v: str) -> list[str]:
        return [self.lift_vertex(v, k) for k in range(1, self.ell + 1)]

    def copy_of(self, x: str) -> int:
        return int(x.rsplit("_", 1)[1])

    def deck_vertex(self, x: str, times: int = 1) -> str:
        return self.lift_vertex(self.vertex_proj[x], self.copy_of(x) + times)

    def deck_quiver(self, q: Quiver, times: int = 1) -> Quiver:
        """Move every vertex of ``q`` (a quiver on the cover vertices) by the deck action."""
        return q.relabel({x: self.deck_vertex(x, times) for x in q.vertices})


def build_cyclic_cover(base: Quiver, ell: int, shifts: Mapping[str, int] | None = None) -> CoveringMap:
    """Lift ``base`` to its ``ell``-fold cyclic cover along the voltages ``shifts``.

    Missing shifts default to 0. Loops must carry a nonzero shift so the cover
    is loop-free.
    """
    if not isinstance(ell, int) or ell < 2:
        raise CoveringError("ell must be an integer >= 2")
    shifts = dict(shifts or {})
    unknown = set(shifts) - base.arrow_ids
    if unknown:
        raise CoveringError(f"shifts given for unknown arrows: {sorted(unknown)}")
    for aid, s in shifts.items():
        if not isinstance(s, int) or not 0 <= s < ell:
            raise CoveringError(f"shift of {aid!r} must lie in Z/{ell} (0..{ell - 1})")
    full = {a.id: shifts.get(a.id, 0) for a in base.arrows}
    for a in base.loops():
        if full[a.id] == 0:
            raise CoveringError(f"loop {a.id!r} needs a nonzero shift")
    vertices, vproj = [], {}
    for k in range(1, ell + 1):
        for v in base.vertices:
            x = f"{v}_{k}"
            vertices.append(x)
            vproj[x] = v
    arrows, aproj = [], {}
    for k in range(1, ell + 1):
        for a in base.arrows:
            t = (k - 1 + full[a.id]) % ell + 1
            aid = f"{a.id}_{k}"
            arrows.append(Arrow(aid, f"{a.source}_{k}", f"{a.target}_{t}"))
            aproj[aid] = a.id
    if len(set(vproj)) != len(vertices):
        raise CoveringError("cover vertex names collide; rename the base vertices")
    cover = Quiver(tuple(vertices), tuple(arrows))
    return CoveringMap(cover, base, ell, full, vproj, aproj)


def lift_potential(cm: CoveringMap, p: Potential) -> Potential:
    """Lift each base term from every copy and keep one representative per cover cycle."""
    targets = {a.id: a.target for a in cm.cover.arrows}
    terms = {}
    for coeff, cyc in p.terms:
        for k in range(1, cm.ell + 1):
            here = cm.lift_vertex(cm.base.arrow(cyc[0]).source, k)
            start = here
            word = []
            for x in cyc:
                aid = f"{x}_{cm.copy_of(here)}"
                word.append(aid)
                here = targets[aid]
            if here != start:
                raise CoveringError(f"term {' '.join(cyc)} does not close up in the cover")
            terms.setdefault(normalize_cycle(word), coeff)
    return Potential(tuple((c, w) for w, c in terms.items()))


def is_deck_invariant(cm: CoveringMap, q: Quiver) -> bool:
    m = q.multiplicity()
    moved = Counter({(cm.deck_vertex(s), cm.deck_vertex(t)): n for (s, t), n in m.items()})
    return moved == m


def _strip_copy(aid: str) -> str:
    head, _, tail = aid.rpartition("_")
    return head if tail.isdigit() and head else aid


def project(cm: CoveringMap, q: Quiver) -> Quiver:
    """Project a deck-invariant quiver on the cover vertices down to the base.

    One base arrow is kept per deck orbit of arrows: the representative whose
    source lies in copy 1, named after it with the copy suffix removed.
    """
    if set(q.vertices) != set(cm.cover.vertices):
        raise CoveringError("quiver is not defined on the cover's vertex set")
    if not is_deck_invariant(cm, q):
        raise CoveringError("quiver is not invariant under the deck action")
    arrows = []
    taken: set[str] = set()
    for a in sorted(q.arrows, key=lambda a: a.id):
        if cm.copy_of(a.source) != 1:
            continue
        name = _strip_copy(a.id)
        while name in taken:
            name += "'"
        taken.add(name)
        arrows.append(Arrow(name, cm.vertex_proj[a.source], cm.vertex_proj[a.target]))
    return Quiver(cm.base.vertices, tuple(arrows))


def _fiber_cycles(cm: CoveringMap, v: str) -> list[tuple[str, ...]] | None:
    """Split the subquiver induced on the fiber of ``v`` into oriented cycles.

    Returns an empty list when the fiber is a set of isolated vertices and
    None when it is neither isolated vertices nor disjoint cycles.
    """
    sub = cm.cover.induced(cm.fiber(v))
    if not sub.arrows:
        return []
    succ: dict[str, list[str]] = {x: [] for x in sub.vertices}
    indeg = Counter()
    for a in sub.arrows:
        succ[a.source].append(a.target)
        indeg[a.target] += 1
    if any(len(s) != 1 for s in succ.values()) or any(indeg[x] != 1 for x in sub.vertices):
        return None
    cycles, seen = [], set()
    for x in sub.vertices:
        if x in seen:
            continue
        cyc = [x]
        seen.add(x)
        while succ[cyc[-1]][0] != x:
            cyc.append(succ[cyc[-1]][0])
            seen.add(cyc[-1])
        if len(cyc) < 3:
            return None
        cycles.append(tuple(cyc))
    return cycles


def _mutate_in_cover(base: Quiver, v: str, cm: CoveringMap, annotations, potential) -> Quiver:
    cycles = _fiber_cycles(cm, v)
    if cycles is None:
        raise UnsupportedConfiguration(
            f"the fiber of {v!r} is neither disjoint oriented cycles of length >= 3 nor isolated vertices"
        )
    q = cm.cover
    if any(q.has_two_cycle_at(x) for x in cm.fiber(v)):
        raise UnsupportedConfiguration(
            f"the lift of {v!r} still meets a 2-cycle upstairs; choose shifts that unfold it"
        )
    if not cycles:
        for x in cm.fiber(v):
            q = fz_mutate_quiver(q, x)
        return q
    if potential is not None and len(potential):
        lifted = lift_potential(cm, potential)
    else:
        lifted = sum_of_minimal_cycles_potential(q)
    qp = QuiverWithPotential(q, lifted)
    # several fiber cycles are mutated one after another, the others frozen;
    # later annotations are re-derived on the intermediate quiver
    for cyc in cycles:
        spec = (annotations or {}).get(cyc)
        if spec is None:
            spec = derive_cb_indices(qp, cyc)
        q = mutate_cycle(q, spec)
        qp = QuiverWithPotential(q, sum_of_minimal_cycles_potential(q))
    return q


def mutate_at_vertex_via_cover(
    base: Quiver | QuiverWithPotential,
    v: str,
    ell: int,
    shifts: Mapping[str, int] | None = None,
    annotations: Mapping[tuple[str, ...], CycleSpec] | None = None,
    potential: Potential | None = None,
    delegate_plain: bool = True,
) -> Quiver:
    """Mutate ``base`` at ``v`` by lifting to the cyclic cover.

    If the fiber of ``v`` consists of oriented cycles (a loop downstairs), each
    cycle is mutated with the cycle rule; if it consists of isolated vertices
    (only 2-cycles downstairs), every fiber vertex is FZ-mutated. The result
    is projected back. ``annotations`` may supply a :class:`CycleSpec` per fiber
    cycle (keyed by its vertex tuple); otherwise indices are derived from the
    lifted potential, which defaults to the cover's minimal cycles.

    With ``delegate_plain`` a vertex on neither a loop nor a 2-cycle is
    mutated directly in the base.
    """
    return mutate_qp_via_cover(base, v, ell, shifts, annotations, potential, delegate_plain).quiver


def mutate_qp_via_cover(
    base: Quiver | QuiverWithPotential,
    v: str,
    ell: int,
    shifts: Mapping[str, int] | None = None,
    annotations: Mapping[tuple[str, ...], CycleSpec] | None = None,
    potential: Potential | None = None,
    delegate_plain: bool = True,
) -> QuiverWithPotential:
    """As :func:`mutate_at_vertex_via_cover`, also returning a base potential.

    The potential is the projection of the minimal cycles of the mutated
    cover (or the minimal cycles of the result when mutating directly).
    """
    if isinstance(base, QuiverWithPotential):
        potential = base.potential if potential is None else potential
        base = base.quiver
    if v not in base.vertices:
        raise QuiverError(f"unknown vertex {v!r}")
    if delegate_plain and not base.has_loop_at(v) and not base.has_two_cycle_at(v):
        out = fz_mutate_quiver(base, v)
        return QuiverWithPotential(out, sum_of_minimal_cycles_potential(out))
    cm = build_cyclic_cover(base, ell, shifts)
    q = _mutate_in_cover(base, v, cm, annotations, potential)
    return project_qp(cm, q)


def project_qp(cm: CoveringMap, q: Quiver, p: Potential | None = None) -> QuiverWithPotential:
    """Project ``q`` and a potential on it (default: its minimal cycles)."""
    base = project(cm, q)
    p = sum_of_minimal_cycles_potential(q) if p is None else p
    # match every cover arrow to its copy-1 representative, parallel arrows in id order
    reps: dict[tuple[str, str], list[str]] = {}
    for a in sorted(q.arrows, key=lambda a: a.id):
        if cm.copy_of(a.source) == 1:
            reps.setdefault((a.source, a.target), []).append(a.id)
    names = dict(zip(
        [a.id for a in sorted(q.arrows, key=lambda a: a.id) if cm.copy_of(a.source) == 1],
        [a.id for a in base.arrows],
    ))
    used: Counter = Counter()
    amap = {}
    for a in sorted(q.arrows, key=lambda a: a.id):
        back = 1 - cm.copy_of(a.source)
        key = (cm.deck_vertex(a.source, back), cm.deck_vertex(a.target, back))
        k = used[(cm.copy_of(a.source), key)]
        used[(cm.copy_of(a.source), key)] += 1
        amap[a.id] = names[reps[key][k]]
    terms = {}
    for coeff, cyc in p.terms:
        terms.setdefault(normalize_cycle([amap[x] for x in cyc]), coeff)
    return QuiverWithPotential(base, Potential(tuple((c, w) for w, c in terms.items())))


def load_preset(name_or_path: str) -> dict:
    """A shipped preset (``a9-3``, ``d6-3``) or a JSON file ``{ell, shifts}``."""
    from .fixtures import PRESETS

    if name_or_path in PRESETS:
        return json.loads(json.dumps(PRESETS[name_or_path]))
    path = Path(name_or_path)
    if not path.exists():
        raise CoveringError(f"unknown cover preset {name_or_path!r}")
    d = json.loads(path.read_text())
    if not isinstance(d.get("ell"), int) or not isinstance(d.get("shifts", {}), dict):
        raise CoveringError("preset must be {ell: int, shifts: {arrow id: int}}")
    return {"ell": d["ell"], "shifts": d.get("shifts", {})}


__all__ = [
    "CoveringError", "CoveringMap", "UnsupportedConfiguration", "build_cyclic_cover",
    "is_deck_invariant", "lift_potential", "load_preset", "mutate_at_vertex_via_cover",
    "mutate_qp_via_cover", "project", "project_qp",
]
