"""Dense real hypermatrices and the multilinear operations on them.

A hypermatrix of order ``d`` is a plain ``float64`` ndarray with ``d`` axes.
Modes are numbered from 0 in the API (like numpy axes) and reported
1-based in error messages, which is how they are written in the literature.

The storage order of an ndarray is irrelevant here; everything observable
is pinned by two layouts:

* ``unfold(A, k)`` puts mode ``k`` on the rows and enumerates the remaining
  modes in their natural order with the *first* remaining index varying
  fastest, i.e. column ``j = sum_{l != k} i_l * prod_{m < l, m != k} n_m``.
* ``vec(M)`` stacks the columns of ``M``.

With these conventions ``vec((X1, X2) * M) == kron(X2, X1) @ vec(M)`` and
``unfold((X1, ..., Xd) * A, k) == Xk @ unfold(A, k) @ kron(Xd, ..., X1 without Xk).T``.
"""

from functools import reduce

import numpy as np

DEFAULT_ATOL = 1e-10


class ShapeError(ValueError):
    """Raised when operands of a multilinear operation do not conform."""


def as_hypermatrix(A):
    """Return ``A`` as a float64 array, checking order >= 1 and positive dims."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim < 1:
        raise ShapeError("a hypermatrix needs order >= 1, got a scalar")
    if any(n < 1 for n in A.shape):
        raise ShapeError(f"every dimension must be >= 1, got shape {A.shape}")
    return A


def outer(*tensors):
    """Outer product ``A o B o ...``; the order of the result is the sum of orders."""
    if not tensors:
        raise ShapeError("outer() needs at least one operand")
    return reduce(np.multiply.outer, (as_hypermatrix(t) for t in tensors))


def mode_apply(X, A, mode):
    """Multiply mode ``mode`` of ``A`` by the matrix ``X`` (a single-factor multilinear product)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != A.shape[mode]:
        raise ShapeError(
            f"mode {mode + 1}: matrix of shape {X.shape} cannot act on dimension {A.shape[mode]}"
        )
    return np.moveaxis(np.tensordot(X, A, axes=(1, mode)), 0, mode)


def multilinear_apply(mats, A):
    """Multilinear matrix multiplication ``(X1, ..., Xd) * A``.

    ``result[i1..id] = sum_j X1[i1, j1] ... Xd[id, jd] A[j1..jd]``.
    """
    A = as_hypermatrix(A)
    mats = list(mats)
    if len(mats) != A.ndim:
        raise ShapeError(f"got {len(mats)} matrices for a hypermatrix of order {A.ndim}")
    for k, X in enumerate(mats):
        A = mode_apply(X, A, k)
    return A


def unfold(A, mode):
    """k-mode unfolding (matricization) of ``A``; ``mode`` is 0-based."""
    A = as_hypermatrix(A)
    if not 0 <= mode < A.ndim:
        raise ShapeError(f"mode {mode + 1} out of range for a hypermatrix of order {A.ndim}")
    return np.moveaxis(A, mode, 0).reshape(A.shape[mode], -1, order="F")


def fold(M, mode, shape):
    """Inverse of :func:`unfold`."""
    shape = tuple(shape)
    if not 0 <= mode < len(shape):
        raise ShapeError(f"mode {mode + 1} out of range for order {len(shape)}")
    rest = shape[:mode] + shape[mode + 1:]
    M = np.asarray(M, dtype=np.float64)
    if M.shape != (shape[mode], int(np.prod(rest))):
        raise ShapeError(f"matrix of shape {M.shape} is not a mode-{mode + 1} unfolding of {shape}")
    return np.moveaxis(M.reshape((shape[mode],) + rest, order="F"), 0, mode)


def vec(M):
    """Column-stacking vectorization."""
    return np.asarray(M, dtype=np.float64).reshape(-1, order="F")


def unvec(v, rows, cols):
    return np.asarray(v, dtype=np.float64).reshape((rows, cols), order="F")


def kron(*mats):
    """Kronecker product of one or more matrices, left to right."""
    return reduce(np.kron, (np.asarray(X, dtype=np.float64) for X in mats))


def frobenius(A):
    return float(np.linalg.norm(np.ravel(A)))


def allclose(A, B, atol=DEFAULT_ATOL):
    """Tolerance-based equality: same shape and max-abs difference <= ``atol``."""
    A, B = np.asarray(A), np.asarray(B)
    return A.shape == B.shape and bool(np.all(np.abs(A - B) <= atol))
