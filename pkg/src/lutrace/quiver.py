"""Real quiver representations and their isometry test by cycle traces.

Two representations of the same quiver are isometric (per-vertex
orthogonal matrices carry one onto the other) exactly when every oriented
cycle of the doubled quiver has the same trace on both sides.  The doubled
quiver adds, for each arrow ``a: u -> v``, an arrow ``a*: v -> u`` carrying
the transpose.

Arrow matrices act from source to target, so ``A[a]`` is
``dims[target] x dims[source]``.  A cycle ``(a1, ..., al)`` is evaluated as
the product ``A[a1] @ A[a2] @ ... @ A[al]``, which composes when
``source(a_t) == target(a_{t+1})`` cyclically.  Cycles are stored as arrow
index tuples in their lexicographically least rotation.
"""

from dataclasses import dataclass

import numpy as np

from .specht import (DEFAULT_TOL, TraceCheck, Witness, _compensated_sum, _lex_less,
                     _min_rotation, traces_close, triangular_root)


@dataclass(frozen=True)
class Quiver:
    """Directed multigraph with one dimension per vertex (0 allowed)."""

    dims: tuple
    arrows: tuple  # (source, target, label)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "arrows", tuple((int(s), int(t), str(lab)) for s, t, lab in self.arrows))
        nv = len(self.dims)
        if any(d < 0 for d in self.dims):
            raise ValueError(f"vertex dimensions must be >= 0, got {self.dims}")
        for s, t, lab in self.arrows:
            if not (0 <= s < nv and 0 <= t < nv):
                raise ValueError(f"arrow {lab!r} has endpoint outside 0..{nv - 1}")
        labels = [a[2] for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise ValueError("arrow labels must be unique")

    @property
    def n_vertices(self):
        return len(self.dims)

    def max_multiplicity(self):
        """Largest number of arrows sharing the same (source, target) pair, ignoring direction."""
        counts = {}
        for s, t, _ in self.arrows:
            key = (min(s, t), max(s, t))
            counts[key] = counts.get(key, 0) + 1
        return max(counts.values(), default=0)


@dataclass(frozen=True)
class QuiverRep:
    quiver: Quiver
    matrices: tuple

    def __post_init__(self):
        if len(self.matrices) != len(self.quiver.arrows):
            raise ValueError(f"{len(self.quiver.arrows)} arrows but {len(self.matrices)} matrices")
        mats = []
        for a, M in zip(self.quiver.arrows, self.matrices):
            M, shape = np.array(M, dtype=np.float64), self._shape(a)
            if M.size == 0 and 0 in shape:
                M = M.reshape(shape)  # zero-dimensional vertex
            if M.shape != shape:
                raise ValueError(f"arrow {a[2]!r} needs a {shape} matrix, got {M.shape}")
            M.setflags(write=False)
            mats.append(M)
        object.__setattr__(self, "matrices", tuple(mats))

    def _shape(self, arrow):
        s, t, _ = arrow
        return (self.quiver.dims[t], self.quiver.dims[s])

    def conjugated(self, orthogonals):
        """Apply per-vertex orthogonal (or any invertible) maps: ``A[a] -> O[t] A[a] O[s]^t``."""
        mats = [orthogonals[t] @ M @ np.asarray(orthogonals[s]).T
                for (s, t, _), M in zip(self.quiver.arrows, self.matrices)]
        return QuiverRep(self.quiver, mats)


def quiver_double(Q):
    """Doubled quiver: every arrow ``a: u -> v`` gains a partner ``a*: v -> u``."""
    return Quiver(Q.dims, Q.arrows + tuple((t, s, lab + "*") for s, t, lab in Q.arrows))


def double_rep(A):
    """Representation of the doubled quiver, starred arrows carrying transposes."""
    return QuiverRep(quiver_double(A.quiver), A.matrices + tuple(M.T for M in A.matrices))


def _cycle_levels(Q, max_len, reps=()):
    """Yield ``(length, cycles, traces)`` per length; ``traces`` has one array per rep.

    Walks grow by appending arrows whose target is the walk's current source
    vertex.  Only arrows with index >= the first arrow are appended, which
    still reaches the least rotation of every cycle.
    """
    arrows = Q.arrows
    mats = [[np.asarray(M, dtype=np.longdouble) for M in R.matrices] for R in reps]
    # group key (start vertex = target of first arrow, current vertex = source of last)
    groups = {}
    for a, (s, t, _) in enumerate(arrows):
        key = (t, s)
        seqs = np.array([[a]], dtype=np.int64)
        prods = [m[a][None] for m in mats]
        groups.setdefault(key, []).append((seqs, prods))
    groups = {k: _merge(v) for k, v in groups.items()}
    for n in range(1, max_len + 1):
        closed_seqs, closed_tr = [], [[] for _ in reps]
        for (v0, cur), (seqs, prods) in groups.items():
            if v0 != cur or len(seqs) == 0:
                continue
            keep = ~_lex_less(_min_rotation(seqs), seqs) if n > 1 else np.ones(len(seqs), bool)
            closed_seqs.append(seqs[keep])
            for r, P in enumerate(prods):
                closed_tr[r].append(_compensated_sum(np.diagonal(P[keep], axis1=1, axis2=2)))
        if closed_seqs:
            seqs = np.concatenate(closed_seqs)
            order = np.lexsort(seqs.T[::-1])
            yield n, seqs[order], [np.concatenate(t)[order] for t in closed_tr]
        else:
            yield n, np.zeros((0, n), dtype=np.int64), [np.zeros(0, dtype=np.longdouble) for _ in reps]
        if n == max_len:
            return
        nxt = {}
        for (v0, cur), (seqs, prods) in groups.items():
            for b, (s, t, _) in enumerate(arrows):
                if t != cur:
                    continue
                sel = seqs[:, 0] <= b
                if not sel.any():
                    continue
                new = np.hstack([seqs[sel], np.full((int(sel.sum()), 1), b, dtype=np.int64)])
                nprods = [P[sel] @ m[b] for P, m in zip(prods, mats)]
                nxt.setdefault((v0, s), []).append((new, nprods))
        groups = {k: _merge(v) for k, v in nxt.items()}


def _merge(parts):
    seqs = np.concatenate([p[0] for p in parts])
    prods = [np.concatenate([p[1][r] for p in parts]) for r in range(len(parts[0][1]))]
    return seqs, prods


def enumerate_cycles(Q, max_len):
    """Oriented cycles of length <= ``max_len``, one per rotation class, shortest first.

    Each cycle is a tuple of arrow indices (into ``Q.arrows``) in least rotation.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    out = []
    for _, seqs, _ in _cycle_levels(Q, max_len):
        out.extend(tuple(int(x) for x in row) for row in seqs)
    return out


def cycle_labels(Q, cycle):
    return tuple(Q.arrows[a][2] for a in cycle)


def quiver_word_bound(Q):
    """Sufficient cycle length ``((r + 2) * sum(dims))**2`` with ``r`` from the arrow multiplicity."""
    r = triangular_root(max(1, Q.max_multiplicity()))
    return ((r + 2) * sum(Q.dims)) ** 2


def quiver_isometric(A, B, max_len, tol=DEFAULT_TOL):
    """Compare cycle traces of the doubled representations up to ``min(max_len, bound)``.

    The witness (if any) is the shortest, then lexicographically least,
    failing cycle, given as arrow labels of the doubled quiver.
    """
    if A.quiver != B.quiver:
        raise ValueError("representations live on different quivers")
    Ad, Bd = double_rep(A), double_rep(B)
    Q = Ad.quiver
    bound = quiver_word_bound(A.quiver)
    depth = min(max_len, bound) if bound else max_len
    checked = 0
    for n, seqs, (ta, tb) in _cycle_levels(Q, depth, (Ad, Bd)):
        checked += len(seqs)
        bad = np.flatnonzero(~traces_close(ta, tb, tol))
        if bad.size:
            i = bad[0]
            w = Witness(cycle_labels(Q, seqs[i]), float(ta[i]), float(tb[i]))
            return TraceCheck(False, w, depth=depth, words_checked=checked)
    res = TraceCheck(True, None, depth=depth, words_checked=checked)
    res.notes.append(f"sufficient length {bound}")
    return res


def loop_quiver(d):
    return Quiver((d,), ((0, 0, "a"),))


def specht_equivalent(A, B, max_len, tol=DEFAULT_TOL):
    """Orthogonal similarity test ``B = O A O^t`` via words in ``A`` and ``A^t``."""
    A, B = np.asarray(A, dtype=np.float64), np.asarray(B, dtype=np.float64)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"need two square matrices of equal size, got {A.shape} and {B.shape}")
    Q = loop_quiver(A.shape[0])
    return quiver_isometric(QuiverRep(Q, (A,)), QuiverRep(Q, (B,)), max_len, tol)
