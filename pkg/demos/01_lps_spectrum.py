"""Walk from quaternions to a Ramanujan graph and look at its spectrum.

Run:  python demos/01_lps_spectrum.py
"""
import math

import numpy as np

from expander_forge.lps import build_cayley, enumerate_A, generator_set
from expander_forge.numtheory import PrimeParams, find_modulus_prime, four_square_count
from expander_forge.psl2 import PSL2Group, embed
from expander_forge.verify import second_eigenvalue

# Norm-5 quaternions with odd positive real part: six of them, one per +- pair
A5 = enumerate_A(5)
for a in A5:
    print(a, "norm", a.norm)
print("r_4(5) =", four_square_count(5), "= 8 * sigma(5)")

# smallest modulus where both 5 and 13 are squares
q = find_modulus_prime([5, 13], mode="scan")
print("q =", q)

G = PSL2Group(q)
print("|PSL(2, %d)| = %d" % (q, G.order))
print("first generator as a matrix:", embed(A5[0], q))

S = generator_set(5, q)
print("generator indices:", S.indices(G))

X = build_cayley(PrimeParams((5,), q), G)
A = X.adjacency()
print("vertices", A.shape[0], "edges", X.n_edges)

est = second_eigenvalue(A)
print("lambda_2 = %.6f   2*sqrt(5) = %.6f   residual %.1e" % (est.value, 2 * math.sqrt(5), est.residual))

# the same number from a plain eigensolver without any deflation
from scipy.sparse.linalg import eigsh

hi = np.sort(eigsh(A.astype(float), k=2, which="LA", return_eigenvectors=False))
lo = eigsh(A.astype(float), k=1, which="SA", return_eigenvectors=False)
print("eigsh: top", hi[-1], "next", hi[0], "bottom", lo[0])
