"""
Mutation at a loop
==================

A vertex carrying a loop cannot be FZ-mutated. Lift the quiver to a 3-fold
cyclic cover where the loop unrolls into a 3-cycle, mutate that cycle, and
project back down.
"""

from quivermut import fixtures
from quivermut.covering import build_cyclic_cover, load_preset, mutate_qp_via_cover, project
from quivermut.cycle_mutation import mutate_cycle
from quivermut.quiver import MutationError, fz_mutate_quiver, is_isomorphic

base = fixtures.a9_base()
print(base.quiver)
try:
    fz_mutate_quiver(base.quiver, "1")
except MutationError as e:
    print("plain FZ refuses:", e)

preset = load_preset("a9-3")
cm = build_cyclic_cover(base.quiver, preset["ell"], preset["shifts"])
print(len(cm.cover.vertices), "vertices upstairs; same as the nine-vertex fixture:",
      cm.cover.multiplicity() == fixtures.a9().quiver.multiplicity())

# %%
# by hand: mutate the fibre cycle, then project
down = project(cm, mutate_cycle(cm.cover, fixtures.a9_spec()))
print(down)

# in one call, with the projected potential
out = mutate_qp_via_cover(base, "1", preset["ell"], preset["shifts"])
print(out.quiver)
print(out.potential.terms)

# %%
# loop plus 2-cycle: mutation returns the same shape
d6 = fixtures.d6_base()
p = load_preset("d6-3")
res = mutate_qp_via_cover(d6, "1", p["ell"], p["shifts"])
print(res.quiver, "isomorphic to the input:", is_isomorphic(res.quiver, d6.quiver) is not None)
