import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lutrace.hyperdet import (aronhold_invariants, balance, cubic_form_coefficients, cubic_form_tensor, det222,
                              det333, hyperdet, hyperdet_degree, ternary_cubic_discriminant)
from lutrace.hypermatrix import ShapeError, multilinear_apply, outer

seeds = st.integers(0, 2**32 - 1)

# Sylvester's 6x6 resultant of the cubic's partials equals this multiple of det333
RESULTANT_FACTOR = -(2**9) * 3**12


def scaled(rng, det, n=3):
    X = rng.normal(size=(n, n))
    if np.linalg.det(X) < 0:
        X[0] *= -1
    return X * (det / np.linalg.det(X)) ** (1.0 / n)


def special_orthogonal(rng, n):
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    if np.linalg.det(Q) < 0:
        Q[:, 0] *= -1
    return Q


def brute_det222(a):
    # explicit Cayley quartic in the a_{ijk} notation
    d = (a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
         + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2)
    d -= 2 * (a[0, 0, 0] * a[0, 0, 1] * a[1, 1, 0] * a[1, 1, 1] + a[0, 0, 0] * a[0, 1, 0] * a[1, 0, 1] * a[1, 1, 1]
              + a[0, 0, 0] * a[1, 0, 0] * a[0, 1, 1] * a[1, 1, 1] + a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 1] * a[1, 1, 0]
              + a[0, 0, 1] * a[1, 0, 0] * a[0, 1, 1] * a[1, 1, 0] + a[0, 1, 0] * a[1, 0, 0] * a[0, 1, 1] * a[1, 0, 1])
    d += 4 * (a[0, 0, 0] * a[0, 1, 1] * a[1, 0, 1] * a[1, 1, 0] + a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0] * a[1, 1, 1])
    return d


def test_det222_zero():
    assert det222(np.zeros((2, 2, 2))) == 0.0


def test_det222_diagonal_pair():
    A = np.zeros((2, 2, 2))
    A[0, 0, 0] = A[1, 1, 1] = 1
    assert det222(A) == 1.0


def test_det222_w_type_vanishes_with_critical_point():
    A = np.zeros((2, 2, 2))
    A[0, 0, 1] = A[0, 1, 0] = A[1, 0, 0] = 1
    assert det222(A) == 0.0
    # the multilinear form has a nontrivial critical point at x = y = z = e_2
    e = np.array([0.0, 1.0])
    grads = [np.einsum("ijk,j,k->i", A, e, e), np.einsum("ijk,i,k->j", A, e, e), np.einsum("ijk,i,j->k", A, e, e)]
    assert all(np.all(g == 0) for g in grads)


def test_det222_generic_has_no_critical_point_on_grid():
    # grid search for a critical point of a generic form finds none
    A = np.zeros((2, 2, 2))
    A[0, 0, 0] = A[1, 1, 1] = 1
    angles = np.linspace(0, np.pi, 61)
    pts = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    best = np.inf
    for x, y in itertools.product(pts, pts):
        for z in pts:
            g = np.concatenate([np.einsum("ijk,j,k->i", A, y, z), np.einsum("ijk,i,k->j", A, x, z),
                                np.einsum("ijk,i,j->k", A, x, y)])
            best = min(best, np.linalg.norm(g))
    assert best > 0.1


@given(seeds)
def test_det222_matches_explicit_quartic(seed):
    A = np.random.default_rng(seed).uniform(-1, 1, (2, 2, 2))
    assert det222(A) == pytest.approx(brute_det222(A), rel=1e-12, abs=1e-15)


@given(seeds)
def test_det222_transformation_law(seed):
    rng = np.random.default_rng(seed)
    A = rng.uniform(-1, 1, (2, 2, 2))
    Xs = [rng.uniform(-1, 1, (2, 2)) for _ in range(3)]
    factor = np.prod([np.linalg.det(X) for X in Xs]) ** 2
    assert det222(multilinear_apply(Xs, A)) == pytest.approx(factor * det222(A), rel=1e-8, abs=1e-14)


def test_det222_degree_four(rng):
    A = rng.uniform(-1, 1, (2, 2, 2))
    for lam in (2.0, 0.5, -3.0):
        assert det222(lam * A) == pytest.approx(lam**4 * det222(A), rel=1e-13)


def test_det222_shape_error():
    with pytest.raises(ShapeError):
        det222(np.zeros((2, 2)))


def test_det333_zero_and_rank_one():
    assert det333(np.zeros((3, 3, 3))) == 0.0
    e = np.eye(3)[0]
    assert det333(outer(e, e, e)) == 0.0


def test_det333_rank_one_random_is_negligible(rng):
    A = outer(*(rng.normal(size=3) for _ in range(3)))
    assert abs(det333(A)) <= 1e-12 * np.linalg.norm(A) ** 36


def test_det333_law_with_det_two(rng):
    A = rng.uniform(-1, 1, (3, 3, 3))
    X = scaled(rng, 2.0)
    for mode in range(3):
        mats = [np.eye(3)] * 3
        mats[mode] = X
        assert det333(multilinear_apply(mats, A)) / det333(A) == pytest.approx(4096, rel=1e-6)


@given(seeds)
def test_det333_transformation_law(seed):
    rng = np.random.default_rng(seed)
    A = rng.uniform(-1, 1, (3, 3, 3))
    Xs = [rng.uniform(-1, 1, (3, 3)) for _ in range(3)]
    factor = np.prod([np.linalg.det(X) for X in Xs]) ** 12
    assert det333(multilinear_apply(Xs, A)) == pytest.approx(factor * det333(A), rel=1e-6)


@given(seeds)
def test_special_orthogonal_invariance(seed):
    rng = np.random.default_rng(seed)
    A2, A3 = rng.uniform(-1, 1, (2, 2, 2)), rng.uniform(-1, 1, (3, 3, 3))
    O2 = [special_orthogonal(rng, 2) for _ in range(3)]
    O3 = [special_orthogonal(rng, 3) for _ in range(3)]
    assert det222(multilinear_apply(O2, A2)) == pytest.approx(det222(A2), rel=1e-6, abs=1e-14)
    assert det333(multilinear_apply(O3, A3)) == pytest.approx(det333(A3), rel=1e-6)


def test_det333_degree_36(rng):
    A = rng.uniform(-1, 1, (3, 3, 3))
    for lam in (2.0, 0.5):
        assert det333(lam * A) == pytest.approx(lam**36 * det333(A), rel=1e-6)


def test_cubic_form_matches_determinant(rng):
    A = rng.uniform(-1, 1, (3, 3, 3))
    coeffs = cubic_form_coefficients(A)
    assert len(coeffs) == 10
    for _ in range(5):
        x = rng.normal(size=3)
        direct = np.linalg.det(np.einsum("rci,i->rc", A, x))
        poly = sum(c * x[0] ** e[0] * x[1] ** e[1] * x[2] ** e[2] for e, c in coeffs.items())
        assert poly == pytest.approx(direct, rel=1e-12)
        assert np.einsum("ijk,i,j,k->", cubic_form_tensor(A), x, x, x) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("m", [0.0, 0.5, -1.25, 2.0])
def test_aronhold_normalization_on_hesse_pencil(m):
    f = np.zeros((3, 3, 3))
    f[0, 0, 0] = f[1, 1, 1] = f[2, 2, 2] = 1.0
    for p in itertools.permutations(range(3)):
        f[p] = m
    S, T = aronhold_invariants(f)
    assert S == pytest.approx(m**4 - m, abs=1e-12)
    assert T == pytest.approx(1 - 20 * m**3 - 8 * m**6, abs=1e-10)


def test_hesse_pencil_singular_members():
    # x^3 + y^3 + z^3 + 6 m xyz is singular exactly when m = -1/2 (or 8 m^3 = -1)
    f = np.zeros((3, 3, 3))
    f[0, 0, 0] = f[1, 1, 1] = f[2, 2, 2] = 1.0
    for p in itertools.permutations(range(3)):
        f[p] = -0.5
    S, T = aronhold_invariants(f)
    assert T * T - 64 * S**3 == pytest.approx(0, abs=1e-12)


def test_det333_against_sylvester_resultant():
    sp = pytest.importorskip("sympy")
    x = sp.symbols("x0:3")

    def resultant(A):
        M = sp.Matrix(3, 3, lambda r, c: sum(x[i] * sp.Rational(float(A[r, c, i])) for i in range(3)))
        F = sp.expand(M.det())
        grads = [sp.diff(F, xi) for xi in x]
        H = sp.Matrix(3, 3, lambda i, j: sp.diff(F, x[i], x[j])).det()
        Hg = [sp.expand(sp.diff(H, xi)) for xi in x]
        mons = [x[0] ** 2, x[1] ** 2, x[2] ** 2, x[0] * x[1], x[0] * x[2], x[1] * x[2]]
        return float(sp.Matrix([[sp.Poly(q, *x).coeff_monomial(m) for m in mons] for q in grads + Hg]).det())

    rng = np.random.default_rng(7)
    for _ in range(3):
        A = rng.uniform(-1, 1, (3, 3, 3))
        assert RESULTANT_FACTOR * det333(A) == pytest.approx(resultant(A), rel=1e-8)


def test_balance_preserves_invariant(rng):
    A = rng.uniform(-1, 1, (3, 3, 3)) * 3.7
    B, log_scale, ok = balance(A)
    assert ok
    for k in range(3):
        others = [j for j in range(3) if j != k]
        w = np.linalg.eigvalsh(np.tensordot(B, B, axes=(others, others)))
        assert np.ptp(w) < 1e-2 * w.max()  # nearly isotropic modes
    direct = ternary_cubic_discriminant(cubic_form_tensor(A))
    assert ternary_cubic_discriminant(cubic_form_tensor(B)) * np.exp(log_scale) == pytest.approx(direct, rel=1e-6)


def test_dispatch_and_degree(rng):
    A = rng.uniform(-1, 1, (2, 2, 2))
    assert hyperdet(A) == det222(A)
    assert hyperdet_degree((2, 2, 2)) == 4 and hyperdet_degree((3, 3, 3)) == 36
    with pytest.raises(ShapeError):
        hyperdet(np.zeros((2, 3, 2)))
    with pytest.raises(ShapeError):
        det333(np.zeros((2, 2, 2)))
