"""Cayley hyperdeterminants of 2x2x2 and 3x3x3 hypermatrices.

``det222`` is Cayley's quartic.  ``det333`` follows Schlafli: the mode-3
slices ``A[:, :, i]`` define the ternary cubic ``F(x) = det(sum_i x_i A_i)``
whose discriminant is the 3x3x3 hyperdeterminant (degree 36).  The
discriminant is evaluated as ``T**2 - 64 * S**3`` from Aronhold's invariants
of the cubic, normalized so that on the Hesse pencil
``x^3 + y^3 + z^3 + 6 m xyz``::

    S = m**4 - m,    T = 1 - 20 m**3 - 8 m**6.

Only ratios and equalities of ``det333`` values are meaningful downstream,
so this single global normalization is all that matters.
"""

import itertools
from functools import lru_cache
from math import factorial

import numpy as np

from .hypermatrix import ShapeError, as_hypermatrix, mode_apply, unfold

_PERMS = tuple(itertools.permutations(range(3)))
_SIGNS = np.array([1, -1, -1, 1, 1, -1])  # parity of _PERMS in itertools order


def det222(A):
    """Cayley's hyperdeterminant of a 2x2x2 hypermatrix (homogeneous of degree 4)."""
    A = as_hypermatrix(A)
    if A.shape != (2, 2, 2):
        raise ShapeError(f"det222 needs shape (2, 2, 2), got {A.shape}")
    a = A
    return float(
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
        - 2 * (
            a[0, 0, 0] * a[0, 0, 1] * a[1, 1, 0] * a[1, 1, 1]
            + a[0, 0, 0] * a[0, 1, 0] * a[1, 0, 1] * a[1, 1, 1]
            + a[0, 0, 0] * a[1, 0, 0] * a[0, 1, 1] * a[1, 1, 1]
            + a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 1] * a[1, 1, 0]
            + a[0, 0, 1] * a[1, 0, 0] * a[0, 1, 1] * a[1, 1, 0]
            + a[0, 1, 0] * a[1, 0, 0] * a[0, 1, 1] * a[1, 0, 1]
        )
        + 4 * (
            a[0, 0, 0] * a[0, 1, 1] * a[1, 0, 1] * a[1, 1, 0]
            + a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0] * a[1, 1, 1]
        )
    )


def cubic_form_tensor(A):
    """Symmetric 3x3x3 coefficient tensor ``f`` with ``det(sum_i x_i A[:, :, i]) = f(x, x, x)``.

    Expanded exactly over the six permutations of the determinant.
    """
    A = as_hypermatrix(A)
    if A.shape != (3, 3, 3):
        raise ShapeError(f"need shape (3, 3, 3), got {A.shape}")
    g = np.zeros((3, 3, 3))
    for s, p in zip(_SIGNS, _PERMS):
        g += s * np.multiply.outer(np.multiply.outer(A[0, p[0]], A[1, p[1]]), A[2, p[2]])
    return sum(g.transpose(q) for q in _PERMS) / 6.0


def cubic_form_coefficients(A):
    """The ten monomial coefficients of ``det(sum_i x_i A[:, :, i])``.

    Returns a dict keyed by exponent triples ``(e0, e1, e2)`` with ``e0+e1+e2 == 3``.
    """
    f = cubic_form_tensor(A)
    out = {}
    for e in itertools.product(range(4), repeat=3):
        if sum(e) != 3:
            continue
        idx = (0,) * e[0] + (1,) * e[1] + (2,) * e[2]
        out[e] = float(f[idx]) * factorial(3) / (factorial(e[0]) * factorial(e[1]) * factorial(e[2]))
    return out


@lru_cache(maxsize=None)
def _bracket_expansion(brackets):
    # Symbolic-method product of 3x3 brackets, expanded over the 6 nonzero
    # entries of each Levi-Civita factor.  Each letter occurs in three
    # brackets and stands for one copy of the symmetric cubic tensor.
    n = len(brackets)
    perms = np.array(_PERMS)
    combos = np.array(list(itertools.product(range(6), repeat=n)))
    sign = np.prod(_SIGNS[combos], axis=1).astype(np.float64)
    slots = {}
    for b, letters in enumerate(brackets):
        for pos, letter in enumerate(letters):
            slots.setdefault(letter, []).append(perms[combos[:, b], pos])
    index = tuple(np.ravel_multi_index(tuple(slots[k]), (3, 3, 3)) for k in sorted(slots))
    return sign, index


def _contract(f, brackets):
    sign, index = _bracket_expansion(brackets)
    flat = f.ravel()
    prod = sign.copy()
    for ix in index:
        prod *= flat[ix]
    return float(np.sum(prod))


def aronhold_invariants(f):
    """Aronhold ``(S, T)`` of a ternary cubic given by its symmetric coefficient tensor."""
    f = np.asarray(f, dtype=np.float64)
    S = _contract(f, ("abc", "abd", "acd", "bcd")) / 24.0
    T = -_contract(f, ("abc", "abd", "ace", "bcf", "def", "def")) / 6.0
    return S, T


def ternary_cubic_discriminant(f):
    S, T = aronhold_invariants(f)
    return T * T - 64.0 * S ** 3


def balance(A, sweeps=30, rtol=1e-14):
    """Bring ``A`` near a balanced point of its SL(3)^3 orbit.

    Each step whitens one mode by the unit-determinant matrix
    ``G^{-1/2} det(G)^{1/6}`` with ``G`` that mode's Gram matrix, so every
    SL-invariant is unchanged.  Returns ``(B, log_scale, ok)`` where
    ``A``'s degree-36 invariant equals ``B``'s times ``exp(log_scale)``;
    ``ok`` is False when a mode Gram was numerically singular.
    """
    A = as_hypermatrix(A)
    nrm = np.linalg.norm(A)
    if nrm == 0.0:
        return A, 0.0, False
    B = A / nrm
    log_scale = 36.0 * np.log(nrm)
    for _ in range(sweeps):
        for k in range(3):
            M = unfold(B, k)
            w, V = np.linalg.eigh(M @ M.T)
            if w[0] <= rtol * w[-1]:
                return B, log_scale, False
            X = (V * w ** -0.5) @ V.T * np.prod(w) ** (1.0 / 6.0)
            B = mode_apply(X, B, k)
        n = np.linalg.norm(B)
        B = B / n
        log_scale += 36.0 * np.log(n)
    return B, log_scale, True


def det333(A):
    """Hyperdeterminant of a 3x3x3 hypermatrix, up to the fixed normalization above.

    Satisfies ``det333((X1, X2, X3) * A) == (det X1 det X2 det X3)**12 * det333(A)``.
    Balancing stops early on a numerically singular mode Gram; the value
    is then evaluated on the partially balanced tensor and comes out at
    rounding level, as it should for a degenerate mode.
    """
    A = as_hypermatrix(A)
    if A.shape != (3, 3, 3):
        raise ShapeError(f"det333 needs shape (3, 3, 3), got {A.shape}")
    B, log_scale, _ = balance(A)
    return float(ternary_cubic_discriminant(cubic_form_tensor(B)) * np.exp(log_scale))


def hyperdet(A):
    """Dispatch to :func:`det222` or :func:`det333` by shape."""
    A = as_hypermatrix(A)
    if A.shape == (2, 2, 2):
        return det222(A)
    if A.shape == (3, 3, 3):
        return det333(A)
    raise ShapeError(f"no hyperdeterminant implemented for shape {A.shape}")


def hyperdet_degree(shape):
    return {(2, 2, 2): 4, (3, 3, 3): 36}[tuple(shape)]
