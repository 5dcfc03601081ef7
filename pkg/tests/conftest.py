import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import settings, strategies as st

from quivermut.quiver import Quiver

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@st.composite
def skew_matrices(draw, max_n=8, max_mult=3, min_n=1):
    """Random skew-symmetric integer matrix with entries bounded by ``max_mult``."""
    n = draw(st.integers(min_n, max_n))
    m = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(i + 1, n):
            x = draw(st.integers(-max_mult, max_mult))
            m[i, j], m[j, i] = x, -x
    return m


def quiver_from_matrix(m, names=None) -> Quiver:
    n = m.shape[0]
    names = names or [str(i) for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            for k in range(max(int(m[i, j]), 0)):
                edges.append((f"{names[i]}>{names[j]}#{k}", names[i], names[j]))
    return Quiver.from_edges(names, edges)


@st.composite
def plain_quivers(draw, max_n=8, max_mult=3, min_n=1):
    """Loop-free, 2-cycle-free quivers with shuffled vertex names."""
    m = draw(skew_matrices(max_n, max_mult, min_n))
    perm = draw(st.permutations(list(range(m.shape[0]))))
    return quiver_from_matrix(m, [f"v{p}" for p in perm])


@st.composite
def multi_quivers(draw, max_n=6, max_arrows=12):
    """Arbitrary quivers, loops and 2-cycles allowed."""
    n = draw(st.integers(1, max_n))
    verts = [f"v{i}" for i in range(n)]
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=max_arrows))
    return Quiver.from_edges(verts, [(f"a{k}", verts[s], verts[t]) for k, (s, t) in enumerate(pairs)])


def nx_graph(q: Quiver) -> nx.DiGraph:
    """Networkx view used by the isomorphism oracle: multiplicities as edge weights, loops as node labels."""
    g = nx.DiGraph()
    mult = q.multiplicity()
    for v in q.vertices:
        g.add_node(v, loops=mult[(v, v)])
    for (s, t), k in mult.items():
        if s != t:
            g.add_edge(s, t, mult=k)
    return g


def nx_isomorphic(q1: Quiver, q2: Quiver) -> bool:
    return nx.is_isomorphic(
        nx_graph(q1), nx_graph(q2),
        node_match=lambda a, b: a["loops"] == b["loops"],
        edge_match=lambda a, b: a["mult"] == b["mult"],
    )


def shuffled(q: Quiver, rng: random.Random) -> Quiver:
    """Rename vertices by a random permutation and shuffle arrow order."""
    perm = list(q.vertices)
    rng.shuffle(perm)
    names = {v: f"w{perm.index(v)}" for v in q.vertices}
    r = q.relabel(names)
    arrows = list(r.arrows)
    rng.shuffle(arrows)
    verts = list(r.vertices)
    rng.shuffle(verts)
    return Quiver(tuple(verts), tuple(arrows))


@pytest.fixture
def rng():
    return random.Random(20261018)
