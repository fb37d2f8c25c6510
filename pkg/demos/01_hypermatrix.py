"""Outer products, unfoldings and the multilinear action on a 2x3x2 array."""

import numpy as np

from lutrace import kron, multilinear_apply, outer, unfold, vec

rng = np.random.default_rng(0)
u, v, w = rng.normal(size=2), rng.normal(size=3), rng.normal(size=2)
T = outer(u, v, w)
print("rank-one array, shape", T.shape)
for k in range(3):
    print(f"  mode-{k} unfolding has rank {np.linalg.matrix_rank(unfold(T, k))}")

X = [rng.normal(size=(2, 2)), rng.normal(size=(3, 3)), rng.normal(size=(2, 2))]
A = rng.normal(size=(2, 3, 2))
B = multilinear_apply(X, A)
rhs = X[0] @ unfold(A, 0) @ kron(X[2], X[1]).T
print("unfolding of (X1,X2,X3)*A matches X1 A_(1) (X3 kron X2)^t:", np.allclose(unfold(B, 0), rhs))

M = rng.normal(size=(3, 2))
Y1, Y2 = rng.normal(size=(3, 3)), rng.normal(size=(2, 2))
print("vec(Y1 M Y2^t) == (Y2 kron Y1) vec(M):", np.allclose(vec(Y1 @ M @ Y2.T), kron(Y2, Y1) @ vec(M)))
