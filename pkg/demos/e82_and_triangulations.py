"""
Finite type: the E82 component and rotation-invariant triangulations
=====================================================================
"""

import networkx as nx

from quivermut.catalog import E82_EDGES, classify, e82_closure, gen_dnll, gen_e82
from quivermut.covering import mutate_qp_via_cover
from quivermut.triangulation import g_invariant_triangulations, quotient_quiver

# every letter, every vertex, through the order-2 cover
c = e82_closure()
print("closed:", c.closed)
print("edges:", sorted("".join(sorted(e)) for e in c.graph.edges()))
print("equals the drawn graph:", {frozenset(e) for e in c.graph.edges()} == E82_EDGES)
print("degrees:", dict(c.graph.degree()))
print(nx.to_numpy_array(c.graph, nodelist=sorted(c.graph)).astype(int))

# %%
g = gen_e82("g")
print(g.quiver)
print(classify(g.qp))

e = gen_dnll(2, 3, [1])
print(e.quiver, e.params)
# keep the projected potential: a bare 3-cycle is indistinguishable from type A
for v in e.quiver.vertices:
    out = mutate_qp_via_cover(e.qp, v, e.cover_ell, e.cover_shifts, delegate_plain=False)
    print(v, "->", classify(out))

# %%
# quotients of the (3n+3)-gon by the order-3 rotation all carry one loop
for n in (1, 2, 3):
    ts = g_invariant_triangulations(n)
    fams = {classify(quotient_quiver(t)).family for t in ts}
    print(n, len(ts), fams)
