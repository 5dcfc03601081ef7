"""
Worked instances shipped with the package.

Vertex ids follow the subscripted naming of the source figures (``"1_1"``,
``"5_3"``); Greek arrow names are spelled out in ASCII (``alpha_1``).
"""

from __future__ import annotations

from .cycle_mutation import CycleSpec
from .quiver import Potential, Quiver, QuiverWithPotential, sum_of_minimal_cycles_potential

_R = (1, 2, 3)


def _nxt(k: int, step: int = 1) -> int:
    return (k - 1 + step) % 3 + 1


# -- A9 with a 3-cycle of summands ------------------------------------------


def a9() -> QuiverWithPotential:
    """Nine vertices: the alpha 3-cycle on ``1_k`` and three beta-gamma-delta triangles."""
    arrows = []
    for k in _R:
        arrows += [
            (f"alpha_{k}", f"1_{k}", f"1_{_nxt(k)}"),
            (f"beta_{k}", f"1_{k}", f"2_{k}"),
            (f"gamma_{k}", f"2_{k}", f"3_{k}"),
            (f"delta_{k}", f"3_{k}", f"1_{k}"),
        ]
    verts = [f"{i}_{k}" for k in _R for i in (1, 2, 3)]
    q = Quiver.from_edges(verts, arrows)
    return QuiverWithPotential(q, sum_of_minimal_cycles_potential(q))


def a9_spec() -> CycleSpec:
    return CycleSpec(
        ("1_1", "1_2", "1_3"),
        {f"delta_{k}": 1 for k in _R},
        {f"beta_{k}": 1 for k in _R},
    )


def a9_mutated() -> Quiver:
    """The mutated quiver as drawn: alpha cycle kept, triangles ``1_j -> 3_(j+1) -> 2_(j+2) -> 1_j``."""
    arrows = []
    for j in _R:
        arrows += [
            (f"alpha_{j}", f"1_{j}", f"1_{_nxt(j)}"),
            (f"x_{j}", f"1_{j}", f"3_{_nxt(j)}"),
            (f"y_{j}", f"3_{_nxt(j)}", f"2_{_nxt(j, 2)}"),
            (f"z_{j}", f"2_{_nxt(j, 2)}", f"1_{j}"),
        ]
    return Quiver.from_edges(a9().quiver.vertices, arrows)


def a9_base() -> QuiverWithPotential:
    """Three vertices: loop ``alpha`` at 1 and the triangle ``1 -> 2 -> 3 -> 1``."""
    q = Quiver.from_edges(
        ["1", "2", "3"],
        [("alpha", "1", "1"), ("beta", "1", "2"), ("gamma", "2", "3"), ("delta", "3", "1")],
    )
    return QuiverWithPotential(q, Potential(((1, ("alpha",) * 3), (1, ("beta", "gamma", "delta")))))


def a9_base_mutated() -> Quiver:
    """Loop kept, triangle reversed: ``1 -> 3 -> 2 -> 1``."""
    return Quiver.from_edges(
        ["1", "2", "3"],
        [("alpha", "1", "1"), ("x", "1", "3"), ("y", "3", "2"), ("z", "2", "1")],
    )


# -- D6 cover of a loop plus 2-cycle ----------------------------------------


def d6_cover() -> QuiverWithPotential:
    """Six vertices: alpha 3-cycle, ``beta_j: 1_(j+1) -> 2_j`` and ``gamma_j: 2_j -> 1_j``."""
    arrows = []
    for j in _R:
        arrows += [
            (f"alpha_{j}", f"1_{j}", f"1_{_nxt(j)}"),
            (f"beta_{j}", f"1_{_nxt(j)}", f"2_{j}"),
            (f"gamma_{j}", f"2_{j}", f"1_{j}"),
        ]
    verts = [f"{i}_{k}" for k in _R for i in (1, 2)]
    q = Quiver.from_edges(verts, arrows)
    return QuiverWithPotential(q, sum_of_minimal_cycles_potential(q))


def d6_spec() -> CycleSpec:
    return CycleSpec(
        ("1_1", "1_2", "1_3"),
        {f"gamma_{k}": 0 for k in _R},
        {f"beta_{k}": 0 for k in _R},
    )


def d6_base() -> QuiverWithPotential:
    """Two vertices: loop ``alpha`` at 1 and the 2-cycle ``beta: 1 -> 2``, ``gamma: 2 -> 1``."""
    q = Quiver.from_edges(["1", "2"], [("alpha", "1", "1"), ("beta", "1", "2"), ("gamma", "2", "1")])
    return QuiverWithPotential(q, Potential(((1, ("alpha",) * 3), (1, ("alpha", "beta", "gamma")))))


# -- preprojective algebra of type A6 ---------------------------------------

_PP_LOCAL = [("5", "3"), ("3", "4"), ("4", "5"), ("5", "2"), ("2", "4"), ("4", "1"), ("1", "2")]


def ppa6() -> QuiverWithPotential:
    """Fifteen vertices ``i_k`` (``i = 1..5``) with the three 5-vertices on a 3-cycle.

    Arrow ids are ``"s>t"``. The potential is the sum of the oriented triangles.
    """
    edges = []
    for y in _R:
        edges += [(f"{s}_{y}", f"{t}_{y}") for s, t in _PP_LOCAL]
    for x, y in ((2, 1), (3, 2), (1, 3)):
        edges += [(f"2_{y}", f"3_{x}"), (f"3_{x}", f"5_{y}"), (f"5_{y}", f"5_{x}")]
    verts = [f"{i}_{k}" for k in _R for i in (1, 2, 3, 4, 5)]
    q = Quiver.from_edges(verts, [(f"{s}>{t}", s, t) for s, t in edges])
    return QuiverWithPotential(q, Potential.from_cycles(c for c in _triangles(q)))


def _triangles(q: Quiver) -> list[tuple[str, ...]]:
    out = []
    for a in q.arrows:
        for b in q.arrows:
            if b.source != a.target:
                continue
            for c in q.arrows:
                if c.source == b.target and c.target == a.source and len({a.source, b.source, c.source}) == 3:
                    out.append((a.id, b.id, c.id))
    return out


def ppa6_spec() -> CycleSpec:
    q = ppa6().quiver
    c_index, b_index = {}, {}
    for a in q.arrows:
        s, t = a.source[0], a.target[0]
        if t == "5" and s != "5":
            c_index[a.id] = 0 if s == "3" else 1
        elif s == "5" and t != "5":
            b_index[a.id] = 0 if t == "3" else 1
    return CycleSpec(("5_1", "5_2", "5_3"), c_index, b_index)


def ppa6_mutated() -> Quiver:
    """The mutated quiver as drawn, with the figure's relabelled positions."""
    place = {}
    for y in _R:
        place[f"5-{y}"] = f"5_{y}"
        place[f"3-{y}"] = f"3_{y}"
    place.update({"4-1": "4_2", "4-2": "4_3", "4-3": "4_1"})
    place.update({"2-1": "2_3", "2-2": "2_1", "2-3": "2_2"})
    place.update({"1-1": "1_3", "1-2": "1_1", "1-3": "1_2"})
    edges = []
    for y in _R:
        edges += [(f"5-{y}", f"3-{y}"), (f"5-{y}", f"4-{y}"), (f"2-{y}", f"5-{y}"),
                  (f"4-{y}", f"2-{y}"), (f"1-{y}", f"2-{y}")]
    for x, y in ((2, 1), (3, 2), (1, 3)):
        edges += [(f"3-{x}", f"5-{y}"), (f"4-{x}", f"1-{y}"), (f"5-{y}", f"5-{x}")]
    named = [(place[s], place[t]) for s, t in edges]
    return Quiver.from_edges(ppa6().quiver.vertices, [(f"{s}>{t}", s, t) for s, t in named])


# -- cover presets ----------------------------------------------------------

PRESETS = {
    "a9-3": {"ell": 3, "shifts": {"alpha": 1, "beta": 0, "gamma": 0, "delta": 0}},
    "d6-3": {"ell": 3, "shifts": {"alpha": 1, "beta": 2, "gamma": 0}},
}

FIXTURES = {
    "a9": (a9, a9_spec),
    "ppa6": (ppa6, ppa6_spec),
    "d6-cover": (d6_cover, d6_spec),
}

BASES = {"a9-base": (a9_base, "a9-3"), "d6-base": (d6_base, "d6-3")}
