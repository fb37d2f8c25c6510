"""Coefficient tensors of a state and how local unitaries act on them."""

import numpy as np

from lutrace import extract_rep, pure_state, random_lu_pair, reconstruct, transport_orthogonals

bell = pure_state(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
rep = extract_rep(bell)
print("Bell state: local vectors", rep[(1,)], rep[(2,)])
print("correlation matrix\n", np.round(rep[(1, 2)], 12))

rho, rho_hat, Us = random_lu_pair((2, 3), seed=4)
rep, hat = extract_rep(rho), extract_rep(rho_hat)
O1, O2 = transport_orthogonals(Us)
print("T12 transported by the induced rotations:", np.allclose(hat[(1, 2)], O1 @ rep[(1, 2)] @ O2.T))
print("round trip error:", np.max(np.abs(reconstruct(rep).mat - rho.mat)))
