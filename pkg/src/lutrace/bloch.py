"""Density matrices, generalized Gell-Mann bases and Fano coefficient tensors.

Conventions used everywhere in the package:

* Subsystems are labelled 1..n.  A subset of subsystems is a sorted tuple
  such as ``(1, 3)``; in files it is written ``"13"``.
* The GGM basis of ``C^d`` is orthonormal, ``Tr(l_a l_b) = delta_ab``,
  ordered: symmetric ``(E_jk + E_kj)/sqrt2`` for ``j < k`` in lexicographic
  order, then antisymmetric ``-i(E_jk - E_kj)/sqrt2`` in the same order,
  then diagonal ``(sum_{l<=j} E_ll - j E_{j+1,j+1}) / sqrt(j(j+1))``.
* For a subset ``S`` the coefficient tensor is
  ``T_S[a1..am] = c_S * Tr(rho l_a1^(j1) ... l_am^(jm))`` with
  ``c_S = prod_{k in S} d_k``, which makes
  ``rho = (I + sum_S sum_a T_S[a] l_a^(S)) / (d_1 ... d_n)`` exact.
  Any fixed per-subset scaling leaves every equivalence verdict unchanged.
"""

import itertools
import string
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .hypermatrix import ShapeError, multilinear_apply

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
UNITARY_TOL = 1e-10


class StateValidationError(ValueError):
    """A matrix failed the density-matrix checks.  ``problems`` lists each violation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def validation_problems(mat, dims):
    """Return human-readable violations of the density-matrix conditions (empty if valid)."""
    mat = np.asarray(mat)
    D = int(np.prod(dims)) if len(dims) else 0
    if any(d < 2 for d in dims) or not dims:
        return [f"subsystem dimensions must all be >= 2, got {list(dims)}"]
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        return [f"matrix must be square, got shape {mat.shape}"]
    if mat.shape[0] != D:
        return [f"matrix size {mat.shape[0]} does not match dims {list(dims)} (product {D})"]
    if not np.all(np.isfinite(mat)):
        return ["matrix has non-finite entries"]
    problems = []
    asym = float(np.max(np.abs(mat - mat.conj().T)))
    if asym > HERMITIAN_TOL:
        problems.append(f"not Hermitian: max |rho - rho^dagger| = {asym:.3g} > {HERMITIAN_TOL:g}")
    herm = (mat + mat.conj().T) / 2
    tr = np.trace(herm).real
    if abs(tr - 1.0) > TRACE_TOL:
        problems.append(f"trace deviation: trace = {tr:.12g}, |trace - 1| = {abs(tr - 1):.3g} > {TRACE_TOL:g}")
    lmin = float(np.linalg.eigvalsh(herm)[0])
    if lmin < -PSD_TOL:
        problems.append(f"not positive semidefinite: smallest eigenvalue {lmin:.3g} < {-PSD_TOL:g}")
    return problems


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix on ``C^d1 x ... x C^dn``.

    The matrix is symmetrized on construction, ``(rho + rho^dagger)/2``, once
    its Hermiticity defect is within tolerance.
    """

    dims: tuple
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        mat = np.array(self.mat, dtype=np.complex128)
        problems = validation_problems(mat, dims)
        if problems:
            raise StateValidationError(problems)
        mat = (mat + mat.conj().T) / 2
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def n(self):
        return len(self.dims)

    def spectrum(self):
        return np.linalg.eigvalsh(self.mat)


@lru_cache(maxsize=None)
def _ggm_array(d):
    mats = []
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        m = np.zeros((d, d), dtype=np.complex128)
        m[j, k] = m[k, j] = 1 / np.sqrt(2)
        mats.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=np.complex128)
        m[j, k] = -1j / np.sqrt(2)
        m[k, j] = 1j / np.sqrt(2)
        mats.append(m)
    for j in range(1, d):
        diag = np.zeros(d)
        diag[:j] = 1.0
        diag[j] = -j
        mats.append(np.diag(diag / np.sqrt(j * (j + 1))).astype(np.complex128))
    arr = np.array(mats)
    arr.setflags(write=False)
    return arr


def ggm_basis(d):
    """Orthonormal generalized Gell-Mann matrices of ``C^d`` as an array of shape ``(d*d-1, d, d)``."""
    if d < 2:
        raise ValueError(f"GGM basis needs d >= 2, got {d}")
    return _ggm_array(int(d))


def subsets(n):
    """All nonempty subsets of ``{1..n}`` as sorted tuples, ordered by size then lexicographically."""
    return [S for m in range(1, n + 1) for S in itertools.combinations(range(1, n + 1), m)]


def subset_label(S):
    return "".join(str(j) for j in S)


def parse_subset(label):
    if isinstance(label, str):
        return tuple(int(c) for c in label)
    if isinstance(label, int):
        return (label,)
    return tuple(label)


@dataclass(frozen=True, eq=False)
class HypermatrixRep:
    """The coefficient tensors ``{T_S}`` of a state, keyed by subset tuples.

    Index with a tuple, an int or a label string: ``rep[1]``, ``rep[1, 2]``,
    ``rep["123"]``.
    """

    dims: tuple
    tensors: dict

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        tensors = {}
        for S in subsets(len(dims)):
            if S not in self.tensors:
                raise ShapeError(f"missing tensor for subset {subset_label(S)}")
            T = np.array(self.tensors[S], dtype=np.float64)
            want = tuple(dims[j - 1] ** 2 - 1 for j in S)
            if T.shape != want:
                raise ShapeError(f"T_{subset_label(S)} has shape {T.shape}, expected {want}")
            T.setflags(write=False)
            tensors[S] = T
        extra = set(self.tensors) - set(tensors)
        if extra:
            raise ShapeError(f"unexpected subsets {sorted(extra)} for {len(dims)} subsystems")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "tensors", tensors)

    def __getitem__(self, key):
        if isinstance(key, tuple) and len(key) == 1 and isinstance(key[0], str):
            key = key[0]
        return self.tensors[parse_subset(key)]

    @property
    def n(self):
        return len(self.dims)

    @property
    def deltas(self):
        return tuple(d * d - 1 for d in self.dims)

    def reduced(self, k):
        """Representation of the state with subsystem ``k`` traced out.

        Under the ``c_S`` convention the reduced state's tensors are exactly
        the tensors of subsets avoiding ``k``, relabelled.
        """
        if not 1 <= k <= self.n:
            raise ValueError(f"subsystem {k} out of range 1..{self.n}")
        if self.n < 2:
            raise ValueError("cannot trace out the only subsystem")
        relabel = {j: (j if j < k else j - 1) for j in range(1, self.n + 1) if j != k}
        tensors = {
            tuple(relabel[j] for j in S): T for S, T in self.tensors.items() if k not in S
        }
        return HypermatrixRep(self.dims[: k - 1] + self.dims[k:], tensors)

    def transformed(self, orthogonals):
        """Apply per-subsystem matrices: ``T_S -> (O_j1, ..., O_jm) * T_S``."""
        if len(orthogonals) != self.n:
            raise ShapeError(f"need {self.n} matrices, got {len(orthogonals)}")
        return HypermatrixRep(
            self.dims,
            {S: multilinear_apply([orthogonals[j - 1] for j in S], T) for S, T in self.tensors.items()},
        )


def _embed_einsum(S):
    # subscripts for Tr(rho_S (l_a1 x ... x l_am)) with rho_S reshaped to 2m axes
    letters = iter(string.ascii_letters)
    row = [next(letters) for _ in S]
    col = [next(letters) for _ in S]
    alpha = [next(letters) for _ in S]
    ops = [f"{alpha[t]}{col[t]}{row[t]}" for t in range(len(S))]
    return "".join(row + col) + "," + ",".join(ops) + "->" + "".join(alpha)


def reduced_matrix(rho, keep):
    """Reduced density matrix on the (1-based, sorted) subsystems ``keep`` as a plain array."""
    dims = rho.dims
    n = len(dims)
    keep = tuple(keep)
    t = rho.mat.reshape(dims + dims)
    drop = [j for j in range(1, n + 1) if j not in keep]
    # trace out from the highest label so axis numbers stay valid
    cur = n
    for j in sorted(drop, reverse=True):
        t = np.trace(t, axis1=j - 1, axis2=j - 1 + cur)
        cur -= 1
    dk = int(np.prod([dims[j - 1] for j in keep]))
    return t.reshape(dk, dk)


def extract_rep(rho):
    """Hypermatrix representation ``{T_S}`` of a density matrix."""
    if not isinstance(rho, DensityMatrix):
        raise TypeError("extract_rep needs a DensityMatrix")
    dims = rho.dims
    tensors = {}
    for S in subsets(rho.n):
        sub = [dims[j - 1] for j in S]
        r = reduced_matrix(rho, S).reshape(tuple(sub) * 2)
        vals = np.einsum(_embed_einsum(S), r, *[ggm_basis(d) for d in sub])
        imag = float(np.max(np.abs(vals.imag)))
        if imag > 1e-10:
            raise StateValidationError([f"T_{subset_label(S)} has imaginary part {imag:.3g}"])
        tensors[S] = np.prod(sub) * vals.real
    return HypermatrixRep(dims, tensors)


def reconstruct_matrix(rep):
    """``(I + sum_S sum_a T_S[a] l_a^(S)) / prod(d)`` as a plain complex array (not validated)."""
    dims = rep.dims
    D = int(np.prod(dims))
    out = np.eye(D, dtype=np.complex128)
    for S, T in rep.tensors.items():
        ops = []
        for j in range(1, rep.n + 1):
            d = dims[j - 1]
            ops.append(ggm_basis(d) if j in S else np.eye(d, dtype=np.complex128)[None])
        # contract T_S with the basis factors of S, then kron the per-subsystem blocks
        letters = iter(string.ascii_lowercase)
        idx = {j: next(letters) for j in S}
        rows = [next(letters) for _ in range(rep.n)]
        cols = [next(letters) for _ in range(rep.n)]
        one = [next(letters) for _ in range(rep.n)]
        terms = []
        for t, j in enumerate(range(1, rep.n + 1)):
            terms.append((idx[j] if j in S else one[t]) + rows[t] + cols[t])
        subs = "".join(idx[j] for j in S) + "," + ",".join(terms) + "->" + "".join(rows + cols)
        block = np.einsum(subs, T, *ops)
        out += block.reshape(D, D)
    return out / D


def reconstruct(rep):
    """Density matrix with the given representation; raises if the result is not a state."""
    return DensityMatrix(rep.dims, reconstruct_matrix(rep))


def partial_trace(rho, k):
    """Trace out subsystem ``k`` (1-based)."""
    if not 1 <= k <= rho.n:
        raise ValueError(f"subsystem {k} out of range 1..{rho.n}")
    if rho.n < 2:
        raise ValueError("cannot trace out the only subsystem")
    keep = tuple(j for j in range(1, rho.n + 1) if j != k)
    return DensityMatrix(tuple(rho.dims[j - 1] for j in keep), reduced_matrix(rho, keep))


def tensor_product(*states):
    dims = sum((s.dims for s in states), ())
    mat = states[0].mat
    for s in states[1:]:
        mat = np.kron(mat, s.mat)
    return DensityMatrix(dims, mat)


def is_unitary(U, tol=UNITARY_TOL):
    U = np.asarray(U)
    return U.ndim == 2 and U.shape[0] == U.shape[1] and np.max(np.abs(U.conj().T @ U - np.eye(len(U)))) <= tol


def apply_local_unitaries(rho, Us):
    """``(U1 x ... x Un) rho (U1 x ... x Un)^dagger``."""
    if len(Us) != rho.n:
        raise ShapeError(f"need {rho.n} unitaries, got {len(Us)}")
    full = np.eye(1, dtype=np.complex128)
    for k, (U, d) in enumerate(zip(Us, rho.dims), start=1):
        U = np.asarray(U, dtype=np.complex128)
        if U.shape != (d, d):
            raise ShapeError(f"unitary for subsystem {k} has shape {U.shape}, expected ({d}, {d})")
        if not is_unitary(U):
            raise ValueError(f"factor for subsystem {k} is not unitary")
        full = np.kron(full, U)
    return DensityMatrix(rho.dims, full @ rho.mat @ full.conj().T)


def induced_orthogonal(U):
    """Real orthogonal ``X`` with ``U l_a U^dagger = sum_b X[a, b] l_b`` in the GGM basis.

    The coefficient tensors transport with the transpose: ``T_hat = X.T @ T``
    for a single subsystem (see :func:`transport_orthogonals`).
    """
    U = np.asarray(U, dtype=np.complex128)
    if not is_unitary(U):
        raise ValueError("induced_orthogonal needs a unitary matrix")
    lam = ggm_basis(U.shape[0])
    conj = U @ lam @ U.conj().T
    X = np.einsum("bij,aji->ab", lam, conj)
    if np.max(np.abs(X.imag)) > 1e-10:
        raise ValueError("induced map has a non-negligible imaginary part")
    return X.real


def transport_orthogonals(Us):
    """The matrices ``O_k = induced_orthogonal(U_k).T`` acting on coefficient tensors."""
    return [induced_orthogonal(U).T for U in Us]


def _rng(seed):
    return np.random.default_rng(seed)


def random_su(d, seed=None):
    """Haar-random element of SU(d) (QR of a Ginibre matrix, phase-corrected)."""
    rng = _rng(seed)
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    return Q / np.linalg.det(Q) ** (1.0 / d)


def random_density(dims, seed=None, rank=None):
    """Random state ``G G^dagger / Tr`` from a ``D x rank`` Ginibre matrix (full rank by default)."""
    dims = tuple(int(d) for d in dims)
    D = int(np.prod(dims))
    rank = D if rank is None else int(rank)
    if not 1 <= rank <= D:
        raise ValueError(f"rank must be in 1..{D}, got {rank}")
    rng = _rng(seed)
    G = rng.standard_normal((D, rank)) + 1j * rng.standard_normal((D, rank))
    M = G @ G.conj().T
    return DensityMatrix(dims, M / np.trace(M).real)


def random_lu_pair(dims, seed=None, rank=None):
    """``(rho, rho_hat, Us)`` with ``rho_hat = apply_local_unitaries(rho, Us)``."""
    seeds = np.random.SeedSequence(seed).spawn(len(dims) + 1)
    rho = random_density(dims, seeds[0], rank)
    Us = [random_su(d, s) for d, s in zip(dims, seeds[1:])]
    return rho, apply_local_unitaries(rho, Us), Us


def pure_state(psi, dims):
    psi = np.asarray(psi, dtype=np.complex128)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(dims, np.outer(psi, psi.conj()))


def maximally_mixed(dims):
    D = int(np.prod(dims))
    return DensityMatrix(dims, np.eye(D) / D)
