import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lutrace.bloch import (DensityMatrix, HypermatrixRep, StateValidationError, apply_local_unitaries, extract_rep,
                           ggm_basis, induced_orthogonal, maximally_mixed, partial_trace, pure_state,
                           random_density, random_lu_pair, random_su, reconstruct, reconstruct_matrix,
                           subsets, tensor_product, transport_orthogonals)
from lutrace.hypermatrix import frobenius, multilinear_apply

seeds = st.integers(0, 2**32 - 1)
DIMS = [(2, 2), (2, 3), (3, 3), (2, 2, 2), (2, 2, 3)]

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0 + 0j, -1.0])


def bell():
    return pure_state([1, 0, 0, 1], (2, 2))


def ghz():
    return pure_state([1, 0, 0, 0, 0, 0, 0, 1], (2, 2, 2))


def brute_partial_trace_first(rho, d1):
    # sum_i (<i| x I) rho (|i> x I)
    D = rho.shape[0]
    rest = D // d1
    out = np.zeros((rest, rest), dtype=complex)
    for i in range(d1):
        bra = np.kron(np.eye(d1)[i:i + 1], np.eye(rest))
        out += bra @ rho @ bra.conj().T
    return out


def test_ggm_qubit_is_scaled_pauli():
    L = ggm_basis(2)
    for got, want in zip(L, (SX, SY, SZ)):
        assert np.allclose(got, want / np.sqrt(2), atol=1e-15)


def test_ggm_qutrit_count():
    assert len(ggm_basis(3)) == 8


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_ggm_orthonormal_hermitian_traceless(d):
    L = ggm_basis(d)
    gram = np.einsum("aij,bji->ab", L, L)
    assert np.max(np.abs(gram - np.eye(d * d - 1))) <= 1e-12
    assert np.max(np.abs(L - L.conj().transpose(0, 2, 1))) == 0
    assert np.max(np.abs(np.trace(L, axis1=1, axis2=2))) <= 1e-15


def test_ggm_rejects_small_d():
    with pytest.raises(ValueError):
        ggm_basis(1)


def test_maximally_mixed_has_zero_tensors():
    for dims in DIMS:
        rep = extract_rep(maximally_mixed(dims))
        assert all(np.all(np.abs(T) <= 1e-15) for T in rep.tensors.values())


@pytest.mark.parametrize("dims", DIMS)
def test_roundtrip(dims):
    for seed in range(5):
        rho = random_density(dims, seed)
        assert np.max(np.abs(reconstruct(extract_rep(rho)).mat - rho.mat)) <= 1e-10


def test_bell_tensors():
    rep = extract_rep(bell())
    assert np.allclose(rep[1], 0, atol=1e-15) and np.allclose(rep[2], 0, atol=1e-15)
    # c_S = 4 times Tr(rho sigma_a sigma_b / 2)
    assert np.allclose(rep[1, 2], np.diag([2.0, -2.0, 2.0]), atol=1e-14)


def test_zero_rep_reconstructs_maximally_mixed():
    dims = (2, 3)
    rep = HypermatrixRep(dims, {S: np.zeros(tuple(dims[j - 1] ** 2 - 1 for j in S)) for S in subsets(2)})
    assert np.allclose(reconstruct(rep).mat, np.eye(6) / 6)


def test_reconstruct_surfaces_invalid_state():
    rep = extract_rep(bell())
    bad = HypermatrixRep(rep.dims, {S: 3 * T for S, T in rep.tensors.items()})
    assert np.trace(reconstruct_matrix(bad)).real == pytest.approx(1.0)
    with pytest.raises(StateValidationError, match="positive semidefinite"):
        reconstruct(bad)


def test_rep_shape_checks():
    with pytest.raises(ValueError, match="missing"):
        HypermatrixRep((2, 2), {(1,): np.zeros(3), (2,): np.zeros(3)})
    with pytest.raises(ValueError, match="shape"):
        HypermatrixRep((2, 2), {(1,): np.zeros(3), (2,): np.zeros(3), (1, 2): np.zeros((3, 2))})


def test_rep_indexing_forms():
    rep = extract_rep(random_density((2, 2, 2), 1))
    assert rep[1, 2] is rep["12"] is rep[(1, 2)]
    assert rep[3] is rep["3"]


def test_partial_trace_of_product():
    r1, r23 = random_density((2,), 1), random_density((2, 3), 2)
    out = partial_trace(tensor_product(r1, r23), 1)
    assert out.dims == (2, 3)
    assert np.allclose(out.mat, r23.mat, atol=1e-14)


def test_partial_trace_ghz():
    out = partial_trace(ghz(), 1)
    want = np.zeros((4, 4))
    want[0, 0] = want[3, 3] = 0.5
    assert np.allclose(out.mat, want, atol=1e-15)


def test_partial_trace_matches_definition():
    rho = random_density((3, 2, 2), 5)
    assert np.allclose(partial_trace(rho, 1).mat, brute_partial_trace_first(rho.mat, 3), atol=1e-14)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_partial_trace_unit_trace_and_tensors(k):
    rho = random_density((2, 3, 2), 11)
    out = partial_trace(rho, k)
    assert np.trace(out.mat).real == pytest.approx(1.0, abs=1e-12)
    reduced = extract_rep(rho).reduced(k)
    direct = extract_rep(out)
    for S in direct.tensors:
        assert np.allclose(reduced[S], direct[S], atol=1e-12)


def test_partial_trace_range():
    with pytest.raises(ValueError):
        partial_trace(bell(), 3)


def test_identity_unitaries():
    rho = random_density((2, 3), 3)
    assert np.allclose(apply_local_unitaries(rho, [np.eye(2), np.eye(3)]).mat, rho.mat, atol=1e-15)


@given(seeds)
def test_local_unitaries_preserve_spectrum(seed):
    rho, rho_hat, _ = random_lu_pair((2, 3), seed)
    assert np.allclose(rho.spectrum(), rho_hat.spectrum(), atol=1e-9)


def test_local_unitaries_errors():
    rho = bell()
    with pytest.raises(ValueError, match="unitary"):
        apply_local_unitaries(rho, [np.eye(2), 2 * np.eye(2)])
    with pytest.raises(ValueError):
        apply_local_unitaries(rho, [np.eye(2), np.eye(3)])


def test_induced_orthogonal_identity():
    assert np.allclose(induced_orthogonal(np.eye(3)), np.eye(8), atol=1e-15)


def test_induced_orthogonal_z_rotation():
    theta = 0.7
    U = np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    c, s = np.cos(theta), np.sin(theta)
    want = np.array([[c, s, 0], [-s, c, 0], [0, 0, 1]])
    assert np.allclose(induced_orthogonal(U), want, atol=1e-14)


@given(seeds)
def test_su2_maps_to_so3(seed):
    X = induced_orthogonal(random_su(2, seed))
    assert np.max(np.abs(X.T @ X - np.eye(3))) <= 1e-10
    assert np.linalg.det(X) == pytest.approx(1.0, abs=1e-9)


def test_induced_orthogonal_rejects_non_unitary():
    with pytest.raises(ValueError):
        induced_orthogonal(np.diag([1.0, 2.0]))


@given(seeds, st.sampled_from(DIMS))
def test_quasi_lu_transport(seed, dims):
    rho, rho_hat, Us = random_lu_pair(dims, seed)
    rep, hat = extract_rep(rho), extract_rep(rho_hat)
    Os = transport_orthogonals(Us)
    for S, T in rep.tensors.items():
        assert np.max(np.abs(hat[S] - multilinear_apply([Os[j - 1] for j in S], T))) <= 1e-8
        assert frobenius(hat[S]) == pytest.approx(frobenius(T), abs=1e-8)
    assert np.allclose(rep.transformed(Os)[1], hat[1], atol=1e-8)


@given(seeds)
def test_partial_trace_is_quasi_lu_invariant(seed):
    rho, rho_hat, Us = random_lu_pair((2, 2, 3), seed)
    Os = transport_orthogonals(Us)
    a, b = extract_rep(partial_trace(rho, 1)), extract_rep(partial_trace(rho_hat, 1))
    assert np.max(np.abs(b[1, 2] - Os[1] @ a[1, 2] @ Os[2].T)) <= 1e-8


def test_generators_are_deterministic():
    assert np.array_equal(random_su(3, 9), random_su(3, 9))
    assert np.array_equal(random_density((2, 3), 9).mat, random_density((2, 3), 9).mat)
    a, b = random_lu_pair((2, 2), 4), random_lu_pair((2, 2), 4)
    assert np.array_equal(a[1].mat, b[1].mat)
    assert all(np.array_equal(x, y) for x, y in zip(a[2], b[2]))


@given(seeds)
def test_random_su_contract(seed):
    U = random_su(2, seed)
    assert np.max(np.abs(U.conj().T @ U - np.eye(2))) <= 1e-12
    assert abs(np.linalg.det(U) - 1) <= 1e-12


def test_random_lu_pair_relation():
    rho, rho_hat, Us = random_lu_pair((2, 3), 2, rank=2)
    assert np.allclose(apply_local_unitaries(rho, Us).mat, rho_hat.mat)
    assert np.sum(rho.spectrum() > 1e-12) == 2


def test_validation_messages():
    with pytest.raises(StateValidationError, match="trace"):
        DensityMatrix((2,), np.diag([0.5, 0.4]))
    with pytest.raises(StateValidationError, match="Hermitian"):
        DensityMatrix((2,), np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(StateValidationError, match="positive semidefinite"):
        DensityMatrix((2,), np.diag([1.5, -0.5]))
    with pytest.raises(StateValidationError):
        DensityMatrix((2, 2), np.eye(3) / 3)


def test_small_asymmetry_is_symmetrized():
    M = np.eye(2) / 2 + np.array([[0, 1e-12], [0, 0]])
    rho = DensityMatrix((2,), M)
    assert np.array_equal(rho.mat, rho.mat.conj().T)
    with pytest.raises(ValueError):
        rho.mat[0, 0] = 1

