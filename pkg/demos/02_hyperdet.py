"""Hyperdeterminants of 2x2x2 and 3x3x3 arrays and how they transform."""

import numpy as np

from lutrace import det222, det333, multilinear_apply

# GHZ and W as 2x2x2 amplitude arrays
ghz = np.zeros((2, 2, 2)); ghz[0, 0, 0] = ghz[1, 1, 1] = 2 ** -0.5
w = np.zeros((2, 2, 2)); w[1, 0, 0] = w[0, 1, 0] = w[0, 0, 1] = 3 ** -0.5
print(f"three-tangle 4|Det(psi)|: GHZ {4 * abs(det222(ghz)):.3f}, W {4 * abs(det222(w)):.3f}")

rng = np.random.default_rng(1)
A = rng.normal(size=(3, 3, 3))
X = [rng.normal(size=(3, 3)) for _ in range(3)]
ratio = det333(multilinear_apply(X, A)) / det333(A)
scale = np.prod([np.linalg.det(x) for x in X]) ** 12
print(f"det333 picks up prod det(X_i)^12: ratio/scale = {ratio / scale:.9f}")

