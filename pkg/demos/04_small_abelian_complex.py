"""A k = 4 cubical complex over Z_7^4, small enough to count everything.

Heavy faces (>= 4 corners in U), their zero-sum quadruples, and the
per-vertex nu^{3/2} comparison.
"""
import numpy as np

from expander_forge.basegraph import build_coded_incidence, trim_by_signature
from expander_forge.codes import hadamard
from expander_forge.cubical import validate_generators
from expander_forge.groups import AbelianGroup, axis_generators
from expander_forge.verify import check_nu_bound, count_heavy_faces, full_scan_heavy_faces, size_limit

G = AbelianGroup((7, 7, 7, 7))
X = validate_generators(G, axis_generators(G, (1, 2)))
C = hadamard(4)
print(X, "faces:", X.face_count)
print(C.words)

limit = size_limit(X, C)
print("largest U allowed:", limit)

rng = np.random.default_rng(1)
# U made of corners of a handful of faces, so some faces are heavy
U = set()
for f in rng.integers(X.face_count, size=10):
    base, r = divmod(int(f), X.n_sig)
    for c, w in enumerate(C.words):
        m = int(sum(int(b) << i for i, b in enumerate(w)))
        U.add(c * G.order + int(G.mul(base, X.corner_offsets[m, r])))
U = sorted(U)[:limit]

res = count_heavy_faces(X, C, U, nu_checks=True)
print("heavy faces:", res.count, "scan:", full_scan_heavy_faces(X, C, U))
print("per quadruple:", res.per_quadruple, "covered:", res.covered_by_quadruples)
for rep in res.nu_checks:
    worst = max((v["F"] - v["nu"] ** 1.5 for v in rep["vertices"]), default=0)
    print("sigma", rep["sigma"], "holds", rep["holds"], "max F - nu^1.5 =", worst)

g = trim_by_signature(build_coded_incidence(X, C), 16)
print(g, g.biregularity_audit()["pass"])
