"""Trace identities: orthogonal similarity of matrices and isometry of quiver representations."""

import numpy as np

from lutrace import Quiver, QuiverRep, quiver_isometric, specht_equivalent

A = np.array([[0.0, 1, 2], [0, 0, 3], [0, 0, 0]])
res = specht_equivalent(A, A.T, max_len=6)
print("A vs A^t (similar, but not orthogonally):", res.equal, "witness", res.witness.word,
      res.witness.trace_a, res.witness.trace_b)

rng = np.random.default_rng(2)
O, _ = np.linalg.qr(rng.normal(size=(3, 3)))
print("A vs O A O^t:", specht_equivalent(A, O @ A @ O.T, max_len=6).equal)

Q = Quiver((2, 3), [(0, 1, "f"), (1, 0, "g"), (1, 1, "h")])
R = QuiverRep(Q, [rng.normal(size=(3, 2)), rng.normal(size=(2, 3)), rng.normal(size=(3, 3))])
Os = [np.linalg.qr(rng.normal(size=(d, d)))[0] for d in Q.dims]
S = R.conjugated(Os)
print("conjugated representation isometric:", quiver_isometric(R, S, 6).equal)
bumped = QuiverRep(Q, [S.matrices[0], S.matrices[1] * 1.01, S.matrices[2]])
out = quiver_isometric(R, bumped, 6)
print("perturbed representation isometric:", out.equal, "first failing cycle", out.witness.word)
