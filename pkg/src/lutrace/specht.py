"""Trace-identity engine: canonical words, gram alphabets and Specht-type checks.

Two families of real matrices that are simultaneously orthogonally
equivalent have equal traces on every word in their gram letters
``A_i A_j^t``.  The engine evaluates those traces on one representative per
necklace (trace is invariant under rotation of the word) and, when the
alphabet carries a transpose involution, additionally on one representative
per reversal-and-transpose pair, since ``Tr W = Tr W^t``.

A failure is always a proof of inequivalence.  Passing at depth ``L`` only
says no word of length <= ``L`` separates the families; the sufficient
depths (hundreds for qubits) are far out of reach for exhaustive search.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

DEFAULT_TOL = 1e-8
_CHUNK = 1 << 15


def euler_phi(n):
    return sum(1 for k in range(1, n + 1) if gcd(n, k) == 1)


def necklace_count(k, n):
    """Number of k-ary necklaces of length n (Burnside / Polya)."""
    total = sum(euler_phi(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def necklaces(k, n):
    """All k-ary necklaces of length ``n`` in lexicographic order (FKM algorithm).

    Each necklace is returned as its lexicographically least rotation.
    """
    if k < 1 or n < 1:
        return []
    out = []
    a = [0] * (n + 1)

    def gen(t, p):
        if t > n:
            if n % p == 0:
                out.append(tuple(a[1:]))
            return
        a[t] = a[t - p]
        gen(t + 1, p)
        for j in range(a[t - p] + 1, k):
            a[t] = j
            gen(t + 1, t)

    gen(1, 1)
    return out


@lru_cache(maxsize=64)
def _necklace_array(k, n):
    arr = np.array(necklaces(k, n), dtype=np.int64).reshape(-1, n)
    arr.setflags(write=False)
    return arr


def enumerate_canonical_words(k, max_len):
    """One representative per necklace class for every length 1..max_len.

    Shortest first, lexicographic within a length; the count for length n
    is ``necklace_count(k, n)``.
    """
    return [w for n in range(1, max_len + 1) for w in necklaces(k, n)]


def canonical_rotation(word):
    word = tuple(word)
    return min(word[i:] + word[:i] for i in range(len(word))) if word else word


def _lex_less(a, b):
    diff = a != b
    has = diff.any(axis=1)
    first = diff.argmax(axis=1)
    rows = np.arange(len(a))
    return has & (a[rows, first] < b[rows, first])


def _min_rotation(words):
    best = words
    for r in range(1, words.shape[1]):
        rot = np.roll(words, -r, axis=1)
        best = np.where(_lex_less(rot, best)[:, None], rot, best)
    return best


def _keep_under_involution(words, involution):
    # keep w iff w <= canon(reverse(tau(w))); the pair shares one trace
    twin = _min_rotation(np.asarray(involution)[words[:, ::-1]])
    return ~_lex_less(twin, words)


def _compensated_sum(x):
    # Neumaier summation along the last axis
    x = np.moveaxis(x, -1, 0)
    if len(x) == 0:
        return np.zeros(x.shape[1:], dtype=x.dtype)
    s = x[0].copy()
    c = np.zeros_like(s)
    for v in x[1:]:
        t = s + v
        c += np.where(np.abs(s) >= np.abs(v), (s - t) + v, (v - t) + s)
        s = t
    return s + c


def _word_traces(letters, words):
    """Traces of the products ``letters[w0] @ letters[w1] @ ...`` for each row of ``words``."""
    out = np.empty(len(words), dtype=np.longdouble)
    for start in range(0, len(words), _CHUNK):
        w = words[start:start + _CHUNK]
        P = letters[w[:, 0]]
        for t in range(1, w.shape[1]):
            P = P @ letters[w[:, t]]
        out[start:start + _CHUNK] = _compensated_sum(np.diagonal(P, axis1=1, axis2=2))
    return out


def word_trace(letters, word):
    """Trace of a single word, accumulated in extended precision."""
    L = np.asarray(letters, dtype=np.longdouble)
    return float(_word_traces(L, np.asarray([word], dtype=np.int64))[0])


def traces_close(a, b, tol):
    return np.abs(a - b) <= tol * np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))


@dataclass
class Witness:
    """A word (or cycle) whose traces differ between the two sides."""

    word: tuple
    trace_a: float
    trace_b: float

    @property
    def length(self):
        return len(self.word)

    def to_dict(self):
        return {"word": list(self.word), "length": self.length,
                "trace_a": self.trace_a, "trace_b": self.trace_b}


@dataclass
class TraceCheck:
    """Outcome of a trace-identity comparison.  Truthy iff no separating word was found."""

    equal: bool
    witness: Witness = None
    depth: int = 0
    words_checked: int = 0
    sampled: int = 0
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.equal

    def __iter__(self):
        return iter((self.equal, self.witness))


def _as_letters(letters):
    arr = np.asarray(letters, dtype=np.longdouble)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError(f"letters must be a stack of square matrices, got shape {arr.shape}")
    return arr


def trace_identities_equal(letters_a, letters_b, max_len, tol=DEFAULT_TOL, involution=None,
                           n_random=0, random_max_len=None, seed=None):
    """Compare ``Tr w(A)`` and ``Tr w(B)`` over all canonical words of length <= ``max_len``.

    Parameters
    ----------
    letters_a, letters_b : sequences of square matrices, same count and sizes.
    max_len : exhaustive depth.
    tol : relative tolerance, ``|a - b| <= tol * max(1, |a|, |b|)``.
    involution : optional permutation ``tau`` of letter indices with
        ``letter[tau[i]] == letter[i].T`` on both sides; halves the work.
    n_random, random_max_len, seed : optionally sample ``n_random`` further
        words with lengths in ``max_len+1 .. random_max_len``.

    Returns a :class:`TraceCheck`; its witness is the shortest, then
    lexicographically least, failing canonical word.
    """
    A = _as_letters(letters_a)
    B = _as_letters(letters_b)
    if A.shape != B.shape:
        raise ValueError(f"alphabets differ in shape: {A.shape} vs {B.shape}")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    k = len(A)
    checked = 0
    for n in range(1, max_len + 1):
        words = _necklace_array(k, n)
        if involution is not None and n > 1:
            words = words[_keep_under_involution(words, involution)]
        ta, tb = _word_traces(A, words), _word_traces(B, words)
        checked += len(words)
        bad = np.flatnonzero(~traces_close(ta, tb, tol))
        if bad.size:
            i = bad[0]
            return TraceCheck(False, Witness(tuple(int(x) for x in words[i]), float(ta[i]), float(tb[i])),
                              depth=max_len, words_checked=checked)
    result = TraceCheck(True, None, depth=max_len, words_checked=checked)
    if n_random and random_max_len and random_max_len > max_len:
        rng = np.random.default_rng(seed)
        lengths = rng.integers(max_len + 1, random_max_len + 1, size=n_random)
        failures = []
        for n in np.unique(lengths):
            cnt = int(np.sum(lengths == n))
            words = _min_rotation(rng.integers(0, k, size=(cnt, n)))
            ta, tb = _word_traces(A, words), _word_traces(B, words)
            for i in np.flatnonzero(~traces_close(ta, tb, tol)):
                failures.append((int(n), tuple(int(x) for x in words[i]), float(ta[i]), float(tb[i])))
        result.sampled = n_random
        if failures:
            _, w, a, b = min(failures)
            result.equal = False
            result.witness = Witness(w, a, b)
    return result


def gram_alphabet(family):
    """Letters ``A_i A_j^t`` for all ordered pairs ``(i, j)``, in lexicographic order."""
    mats = [np.asarray(M, dtype=np.float64) for M in family]
    if not mats:
        raise ValueError("empty matrix family")
    mats = [M.reshape(-1, 1) if M.ndim == 1 else M for M in mats]
    rows = {M.shape[0] for M in mats}
    if len(rows) != 1:
        raise ValueError(f"family members must share their row count, got {sorted(rows)}")
    cols = {M.shape[1] for M in mats}
    if len(cols) != 1:
        raise ValueError(f"cross letters A_i A_j^t need equal column counts, got {sorted(cols)}")
    return [Ai @ Aj.T for Ai in mats for Aj in mats]


def gram_involution(k, offset=0):
    """Index map sending letter ``(i, j)`` to ``(j, i)`` for a ``k``-member gram alphabet."""
    return [offset + j * k + i for i in range(k) for j in range(k)]


def _check_families(As, Bs):
    if len(As) != len(Bs):
        raise ValueError(f"families have {len(As)} and {len(Bs)} members")
    for t, (a, b) in enumerate(zip(As, Bs)):
        if np.shape(a) != np.shape(b):
            raise ValueError(f"member {t + 1} has shape {np.shape(a)} vs {np.shape(b)}")


def families_orthogonally_equivalent(As, Bs, max_len, tol=DEFAULT_TOL, **kw):
    """Trace test for ``B_i = O A_i P^t`` (common orthogonal ``O``, ``P``) over the gram alphabet."""
    _check_families(As, Bs)
    return trace_identities_equal(gram_alphabet(As), gram_alphabet(Bs), max_len, tol,
                                  involution=gram_involution(len(As)), **kw)


def triangular_root(x):
    """Smallest positive ``r`` with ``r (r + 1) / 2 >= x``."""
    r = 1
    while r * (r + 1) // 2 < x:
        r += 1
    return r


def word_bound_blocks(n1, n2, m, k, l):
    """Sufficient word length ``[(r + 2)(n1 + n2 + m)]^2`` for the two-block trace test.

    ``r`` is the least positive integer with ``r(r+1)/2 >= max(k, l - k)``.
    ``l == k`` (an empty second block, ``n2 = 0``) gives the one-block bound.
    """
    if not 1 <= k <= l:
        raise ValueError(f"need 1 <= k <= l, got k={k}, l={l}")
    r = triangular_root(max(k, l - k))
    return ((r + 2) * (n1 + n2 + m)) ** 2


def word_bound_bipartite(delta1, delta2):
    """Sufficient depth for the bipartite check: two delta1 x delta2 members, ``16 (delta1 + delta2)^2``."""
    return word_bound_blocks(delta2, 0, delta1, 2, 2)


def block_alphabet(As, k):
    """Within-block gram letters for a family split as ``As[:k] | As[k:]`` and the matching involution."""
    left, right = [np.asarray(a, dtype=np.float64) for a in As[:k]], [np.asarray(a, dtype=np.float64) for a in As[k:]]
    if not left:
        raise ValueError("the first block must be nonempty")
    letters = gram_alphabet(left)
    inv = gram_involution(len(left))
    if right:
        letters += gram_alphabet([r.reshape(-1, 1) if r.ndim == 1 else r for r in right])
        inv += gram_involution(len(right), offset=len(left) ** 2)
    rows = {L.shape[0] for L in letters}
    if len(rows) != 1:
        raise ValueError("both blocks must share the row count")
    return letters, inv


def block_family_isometric(As, Bs, k, max_len, tol=DEFAULT_TOL, **kw):
    """Trace test for ``B = (O A_1 P1, ..., O A_k P1, O A_{k+1} P2, ..., O A_l P2)``.

    ``As[:k]`` share a column count ``n1`` and ``As[k:]`` a column count
    ``n2``; all have ``m`` rows.  Words run over the within-block gram
    letters, to depth ``min(max_len, word_bound_blocks(...))``.
    """
    _check_families(As, Bs)
    l = len(As)
    cols = [np.shape(a)[1] if np.ndim(a) == 2 else 1 for a in As]
    m = np.shape(As[0])[0]
    if len(set(cols[:k])) != 1 or (l > k and len(set(cols[k:])) != 1):
        raise ValueError("members within a block must share their column count")
    bound = word_bound_blocks(cols[0], cols[k] if l > k else 0, m, k, l)
    la, inv = block_alphabet(As, k)
    lb, _ = block_alphabet(Bs, k)
    res = trace_identities_equal(la, lb, min(max_len, bound), tol, involution=inv, **kw)
    res.notes.append(f"sufficient depth {bound}")
    return res
