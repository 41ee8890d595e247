"""Build the q = 29 two-sided product and poke at it.

Run:  python demos/02_desk_product.py
Takes a few seconds; everything stays in memory.
"""
import numpy as np

from expander_forge.pipeline import Build, BuildConfig
from expander_forge.product import audit, neighbors
from expander_forge.verify import collision_analysis, expansion_profile

b = Build(BuildConfig(out_dir="artifacts"))
print(b.complex_L, b.complex_R)
print("code words:", b.code.codewords)

GL, GR = b.graph_L, b.graph_R
print(GL)
print("special sets per pair:", {k: t.r for k, t in GL.special_sets.items()})
print(GL.special_set_report())

H, cert = b.gadget
print("gadget", H.D_L, "x", H.D_R, "degree", H.d_L, "method", H.method, "certified", cert["pass"])

Z = b.product
print({k: v for k, v in audit(Z).items() if k != "expected_degrees"})

# one left vertex: 12 slots, 12 distinct right neighbours
d, u = neighbors(Z, [0], "L")
print("N(0):", d)

# small sets
prof = expansion_profile(Z, "L", sizes=(1, 2, 3))
for r in prof.records:
    print(f"|S|={r.size}  min |N(S)|={r.min_neighbors}  ratio={r.ratio:.3f}  "
          f"min unique={r.min_unique}  ({r.mode}, {r.evaluated} sets)")

# a set built so two middle vertices lead to the same right vertex
from expander_forge.checks import colliding_set

S = colliding_set(Z, 6, np.random.default_rng(0))
m = collision_analysis(Z, S)["measured"]
print("S =", S.tolist())
print("N(S) = %d, e(RED) = %d, e(C) = %d" % (m["N_Z_S"], m["e_RED"], m["e_C"]))
