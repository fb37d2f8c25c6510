"""Decision procedures for quasi-LU and LU equivalence of bipartite and tripartite states.

Every criterion reported as ``fail`` is the violation of an LU invariant,
so ``not-equivalent`` verdicts are conclusive.  Passing verdicts are
bounded by the word depth actually checked; the depths that would make
them sufficient are reported alongside.
"""

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bloch import HypermatrixRep, extract_rep
from .hyperdet import det333
from .hypermatrix import frobenius, unfold, vec
from .specht import (families_orthogonally_equivalent, block_family_isometric, traces_close,
                     word_bound_bipartite, word_bound_blocks)

CHOICES = ((1, 2, 2, 3), (2, 1, 1, 3), (3, 3, 1, 2))
SIGN_PAIRS = ((1, 2), (2, 3), (3, 1))
NORM_PATTERNS = ((1, 2, 3), (2, 1, 3), (3, 1, 2))
DET_PAIRS = ((1, 2), (1, 3), (2, 3))
DET_RTOL = 1e-6
DET_FLOOR = 1e-10  # relative to ||A||**36: below this a value is rounding noise


class DimensionMismatch(ValueError):
    pass


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"
    NOT_APPLICABLE = "not-applicable"


class Overall(str, enum.Enum):
    NOT_EQUIVALENT = "not-equivalent"
    CONSISTENT = "consistent-with-quasi-LU"
    QUASI_LU_CERTIFIED = "quasi-LU-certified"
    LU_CERTIFIED = "LU-certified"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CheckOptions:
    max_word_len: int = 4
    tol: float = 1e-8
    choice: object = "all"  # "all" or one (i, j1, j2, k) tuple
    mode: str = "strict"
    qubit_det_check: bool = True
    zero_tol: float = 1e-10
    invertibility_extension: bool = False

    def __post_init__(self):
        if int(self.max_word_len) < 1:
            raise ValueError("max_word_len must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.mode not in ("strict", "fallback"):
            raise ValueError(f"mode must be 'strict' or 'fallback', got {self.mode!r}")
        if self.choice != "all":
            c = tuple(int(x) for x in self.choice)
            if c not in CHOICES:
                raise ValueError(f"choice must be 'all' or one of {CHOICES}, got {self.choice}")
            object.__setattr__(self, "choice", c)

    def choices(self):
        return CHOICES if self.choice == "all" else (self.choice,)


@dataclass
class Criterion:
    name: str
    verdict: Verdict
    detail: dict = field(default_factory=dict)
    witness: object = None
    informational: bool = False

    def to_dict(self):
        d = {"name": self.name, "verdict": self.verdict.value, "detail": _jsonable(self.detail)}
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        if self.informational:
            d["informational"] = True
        return d


@dataclass
class CheckReport:
    kind: str
    dims: tuple
    overall: Overall
    depth: int
    criteria: list
    preconditions: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    options: CheckOptions = None

    def __getitem__(self, name):
        for c in self.criteria:
            if c.name == name:
                return c
        raise KeyError(name)

    def verdicts(self):
        return {c.name: c.verdict for c in self.criteria}

    @property
    def summary(self):
        if self.overall is Overall.CONSISTENT:
            return f"{self.overall.value}(depth {self.depth})"
        return self.overall.value

    def to_dict(self):
        opts = asdict(self.options) if self.options else None
        return {
            "kind": self.kind,
            "dims": list(self.dims),
            "overall": self.overall.value,
            "summary": self.summary,
            "depth": self.depth,
            "criteria": [c.to_dict() for c in self.criteria],
            "preconditions": list(self.preconditions),
            "notes": list(self.notes),
            "options": _jsonable(opts),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if hasattr(x, "to_dict"):
        return x.to_dict()
    return x


def _close(a, b, tol):
    return bool(traces_close(a, b, tol))


def _rep(x):
    return x if isinstance(x, HypermatrixRep) else extract_rep(x)


def _check_dims(a, b, n=None):
    if tuple(a.dims) != tuple(b.dims):
        raise DimensionMismatch(f"subsystem dimensions differ: {tuple(a.dims)} vs {tuple(b.dims)}")
    if n is not None and len(a.dims) != n:
        raise DimensionMismatch(f"expected {n} subsystems, got {len(a.dims)}")


def _zero_log(rep, labels, zero_tol):
    return [f"T_{lab} is numerically zero (norm {frobenius(rep[lab]):.3e})"
            for lab in labels if frobenius(rep[lab]) <= zero_tol]


def _det_compare(A, B):
    a, b = det333(A), det333(B)
    scale = max(frobenius(A), frobenius(B)) ** 36
    floor = DET_FLOOR * scale
    equal = abs(a - b) <= max(DET_RTOL * max(abs(a), abs(b)), floor)
    nonzero = max(abs(a), abs(b)) > floor
    return equal, nonzero, a, b


def _det_criterion(rep, hat, pairs):
    rows, ok, nonzero = [], True, True
    for i, j in pairs:
        S = (min(i, j), max(i, j))
        M, Mh = rep[S], hat[S]
        # outer product T_i o T_ij with the T_i axis first
        A = np.multiply.outer(rep[i], M if i < j else M.T)
        Ah = np.multiply.outer(hat[i], Mh if i < j else Mh.T)
        eq, nz, a, b = _det_compare(A, Ah)
        rows.append({"pair": [i, j], "det": a, "det_hat": b, "equal": eq, "nonzero": nz})
        ok &= eq
        nonzero &= nz
    detail = {"pairs": rows, "all_nonzero": nonzero}
    if not nonzero:
        detail["note"] = ("Det of an outer product T_i o T_ij vanishes identically, so the "
                          "nonzero hypothesis of the LU upgrade cannot hold")
    return Criterion("hyperdet", Verdict.PASS if ok else Verdict.FAIL, detail, informational=True), ok and nonzero


def _trace_witness(res, names):
    w = res.witness
    return {"word": [names[x] for x in w.word], "indices": list(w.word), "length": w.length,
            "trace_a": w.trace_a, "trace_b": w.trace_b}


def _gram_names(members):
    return [f"{a}{b}^t" for a in members for b in members]


# bipartite

def check_bipartite(rho, rho_hat, opts=None):
    """Quasi-LU (and, for two qubits, LU) test of two bipartite states."""
    return check_bipartite_reps(_rep(rho), _rep(rho_hat), opts)


def check_bipartite_reps(rep, hat, opts=None):
    opts = opts or CheckOptions()
    _check_dims(rep, hat, 2)
    d1, d2 = rep.deltas
    bound = word_bound_bipartite(d1, d2)
    depth = min(opts.max_word_len, bound)
    pre = _zero_log(rep, ("1", "2", "12"), opts.zero_tol) + [
        "hat " + s for s in _zero_log(hat, ("1", "2", "12"), opts.zero_tol)]
    criteria = []

    norms = {f"T_{i}": (frobenius(rep[i]), frobenius(hat[i])) for i in (1, 2)}
    norms["T_12"] = (frobenius(rep[1, 2]), frobenius(hat[1, 2]))
    matched = [k for k in ("T_1", "T_2") if _close(*norms[k], opts.tol)]
    criteria.append(Criterion(
        "norms", Verdict.PASS if matched else Verdict.FAIL,
        {"norms": {k: list(v) for k, v in norms.items()}, "matched": matched},
        witness=None if matched else {k: list(norms[k]) for k in ("T_1", "T_2")}))

    fam = [np.outer(rep[1], rep[2]), rep[1, 2]]
    fam_hat = [np.outer(hat[1], hat[2]), hat[1, 2]]
    res = families_orthogonally_equivalent(fam, fam_hat, depth, opts.tol)
    names = _gram_names(["A1", "A2"])
    criteria.append(Criterion(
        "trace-identities", Verdict.PASS if res.equal else Verdict.FAIL,
        {"depth": depth, "sufficient_depth": bound, "words_checked": res.words_checked,
         "letters": "A1 = T_1 T_2^t, A2 = T_12"},
        witness=_trace_witness(res, names) if not res.equal else None))

    lu_ok = False
    qubits = rep.dims == (2, 2)
    if qubits and opts.qubit_det_check:
        crit, lu_ok = _det_criterion(rep, hat, ((1, 2), (2, 1)))
        criteria.append(crit)
    else:
        criteria.append(Criterion("hyperdet", Verdict.NOT_APPLICABLE,
                                  {"reason": "two-qubit inputs only" if not qubits else "disabled"},
                                  informational=True))

    failed = any(c.verdict is Verdict.FAIL and not c.informational for c in criteria)
    notes = []
    if failed:
        overall = Overall.NOT_EQUIVALENT
    elif pre:
        overall = Overall.INCONCLUSIVE
        notes.append("a coefficient tensor is zero, which the characterization excludes")
    elif depth >= bound:
        overall = Overall.LU_CERTIFIED if lu_ok else Overall.QUASI_LU_CERTIFIED
    else:
        overall = Overall.CONSISTENT
        notes.append(f"trace identities checked to length {depth}; length {bound} would be sufficient")
    return CheckReport("bipartite", rep.dims, overall, depth, criteria, pre, notes, opts)


# tripartite

_OUTER = {
    "T1oT23": ("1", "23", "a,bc->abc"),
    "T2oT13": ("2", "13", "b,ac->abc"),
    "T12oT3": ("12", "3", "ab,c->abc"),
}


def _outer3(rep, name):
    """Outer products laid out with axes in subsystem order 1, 2, 3."""
    if name == "T1oT2oT3":
        return np.einsum("a,b,c->abc", rep[1], rep[2], rep[3])
    x, y, sub = _OUTER[name]
    return np.einsum(sub, rep[x], rep[y])


def _complement(i):
    j, k = (x for x in (1, 2, 3) if x != i)
    return j, k


def tripartite_family(rep, choice, mode="strict"):
    """The matrices ``(A1, ..., A5)`` for one ``(i, j1, j2, k)``; all have ``delta_i`` rows.

    Each outer product is formed with its axes in subsystem order before
    unfolding on mode ``i``, so ``A1..A4`` all transform as
    ``O_i A (O_k kron O_j)^t`` under local orthogonal maps.
    """
    i = choice[0]
    second = "T1oT2oT3" if mode == "fallback" else "T1oT23"
    A = [unfold(rep[1, 2, 3], i - 1)]
    A += [unfold(_outer3(rep, n), i - 1) for n in (second, "T2oT13", "T12oT3")]
    A.append(rep[i].reshape(-1, 1))
    return A


def sign_condition(rep, hat, pair, tol=1e-8):
    """Compare the signs of ``T_i^t T_ij T_j`` on both sides (``T_ij = T_ji^t`` for ``i > j``).

    Returns ``(verdict, s, s_hat)``.  A near-zero scalar on either side is inconclusive.
    """
    def scalar(r):
        i, j = pair
        M = r[min(i, j), max(i, j)]
        M = M if i < j else M.T
        s = float(r[i] @ M @ r[j])
        scale = max(1.0, frobenius(r[i]) * frobenius(M) * frobenius(r[j]))
        return s, abs(s) <= tol * scale

    s, z = scalar(rep)
    sh, zh = scalar(hat)
    if z or zh:
        return Verdict.INCONCLUSIVE, s, sh
    return (Verdict.PASS if np.sign(s) == np.sign(sh) else Verdict.FAIL), s, sh


def invertibility_gram(rep, choice, mode="strict"):
    i = choice[0]
    if mode == "fallback":
        M = unfold(_outer3(rep, "T1oT2oT3"), i - 1)
    else:
        j, k = _complement(i)
        M = np.outer(rep[i], vec(rep[j, k]))
    return M.T @ M


def invertibility_condition(rep, choice, mode="strict", tol=1e-8):
    """Smallest-singular-value test of the invertibility Gram matrix.

    Returns ``(verdict, singular_values)``; pass iff ``s_min > tol * s_max``.
    """
    return gram_verdict(invertibility_gram(rep, choice, mode), tol)


def gram_verdict(G, tol=1e-8):
    """``(verdict, singular_values)``: pass iff ``G`` is numerically invertible."""
    s = np.linalg.svd(np.atleast_2d(G), compute_uv=False)
    ok = s[0] > 0 and s[-1] > tol * s[0]
    return (Verdict.PASS if ok else Verdict.FAIL), s


def _norm_criterion(rep, hat, mode, tol):
    rows, ok = [], True
    for i, j, k in NORM_PATTERNS:
        a, b = frobenius(rep[i]), frobenius(hat[i])
        if mode == "fallback":
            lab = f"T_{j}oT_{k}"
            c, d = frobenius(rep[j]) * frobenius(rep[k]), frobenius(hat[j]) * frobenius(hat[k])
        else:
            lab = f"T_{j}{k}"
            c, d = frobenius(rep[j, k]), frobenius(hat[j, k])
        hit = _close(a, b, tol) or _close(c, d, tol)
        rows.append({"pattern": [i, j, k], f"T_{i}": [a, b], lab: [c, d], "holds": hit})
        ok &= hit
    bad = [r for r in rows if not r["holds"]]
    return Criterion("norms", Verdict.PASS if ok else Verdict.FAIL, {"patterns": rows},
                     witness=bad or None)


def _sign_criterion(rep, hat, tol):
    rows = []
    for pair in SIGN_PAIRS:
        v, s, sh = sign_condition(rep, hat, pair, tol)
        rows.append({"pair": list(pair), "verdict": v, "value": s, "value_hat": sh})
    vs = [r["verdict"] for r in rows]
    if Verdict.FAIL in vs:
        v = Verdict.FAIL
    elif Verdict.PASS in vs:
        v = Verdict.PASS
    else:
        v = Verdict.INCONCLUSIVE
    return Criterion("sign", v, {"pairs": rows},
                     witness=[r for r in rows if r["verdict"] is Verdict.FAIL] or None)


_BLOCK_NAMES = _gram_names(["A1", "A2", "A3", "A4"]) + ["A5A5^t"]


def _choice_criteria(rep, hat, choice, opts):
    tag = ",".join(map(str, choice))
    i = choice[0]
    fam, fam_hat = tripartite_family(rep, choice, opts.mode), tripartite_family(hat, choice, opts.mode)
    j, k = _complement(i)
    bound = word_bound_blocks(fam[0].shape[1], 1, fam[0].shape[0], 4, 5)
    res = block_family_isometric(fam, fam_hat, 4, opts.max_word_len, opts.tol)
    out = [Criterion(
        f"trace-identities[{tag}]", Verdict.PASS if res.equal else Verdict.FAIL,
        {"depth": res.depth, "sufficient_depth": bound, "words_checked": res.words_checked,
         "mode": opts.mode},
        witness=_trace_witness(res, _BLOCK_NAMES) if not res.equal else None)]

    sub = check_bipartite_reps(rep.reduced(i), hat.reduced(i), opts)
    v = {Overall.NOT_EQUIVALENT: Verdict.FAIL, Overall.INCONCLUSIVE: Verdict.INCONCLUSIVE}.get(
        sub.overall, Verdict.PASS)
    out.append(Criterion(f"partial-trace[{i}]", v,
                         {"remaining": [j, k], "overall": sub.overall, "depth": sub.depth,
                          "certified": sub.overall in (Overall.QUASI_LU_CERTIFIED, Overall.LU_CERTIFIED)},
                         witness=[c.to_dict() for c in sub.criteria if c.verdict is Verdict.FAIL] or None))

    v, s = invertibility_condition(rep, choice, opts.mode, opts.tol)
    out.append(Criterion(
        f"invertibility[{tag}]", v,
        {"mode": opts.mode, "singular_values": s, "rank": int(np.sum(s > opts.tol * s[0])) if s[0] > 0 else 0,
         "size": len(s)}))
    if opts.invertibility_extension:
        v, s = gram_verdict(sum(A.T @ A for A in fam[:4]), opts.tol)
        out.append(Criterion(
            f"invertibility-extension[{tag}]", v,
            {"singular_values": s, "note": "sum of A^t A over A1..A4; an extension, never affects the verdict"},
            informational=True))
    return out


def _threads():
    try:
        return max(1, int(os.environ.get("LUTRACE_THREADS", "1")))
    except ValueError:
        return 1


def check_tripartite(rho, rho_hat, opts=None):
    """Quasi-LU (and, for three qubits, LU) test of two tripartite states."""
    return check_tripartite_reps(_rep(rho), _rep(rho_hat), opts)


def check_tripartite_reps(rep, hat, opts=None):
    opts = opts or CheckOptions()
    _check_dims(rep, hat, 3)
    needed = ("1", "2", "3") if opts.mode == "fallback" else ("1", "2", "3", "12", "13", "23")
    pre = _zero_log(rep, needed, opts.zero_tol) + [
        "hat " + s for s in _zero_log(hat, needed, opts.zero_tol)]
    criteria = [_norm_criterion(rep, hat, opts.mode, opts.tol), _sign_criterion(rep, hat, opts.tol)]

    choices = opts.choices()
    workers = min(_threads(), len(choices))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            per_choice = list(ex.map(lambda c: _choice_criteria(rep, hat, c, opts), choices))
    else:
        per_choice = [_choice_criteria(rep, hat, c, opts) for c in choices]
    for block in per_choice:
        criteria.extend(block)

    lu_ok = False
    qubits = rep.dims == (2, 2, 2)
    if qubits and opts.qubit_det_check:
        crit, lu_ok = _det_criterion(rep, hat, DET_PAIRS)
        criteria.append(crit)
    else:
        criteria.append(Criterion("hyperdet", Verdict.NOT_APPLICABLE,
                                  {"reason": "three-qubit inputs only" if not qubits else "disabled"},
                                  informational=True))

    depth = min(c.detail["depth"] for c in criteria if c.name.startswith("trace-identities"))
    failed = any(c.verdict is Verdict.FAIL and not c.informational and not c.name.startswith("invertibility")
                 for c in criteria)
    notes = []
    if failed:
        overall = Overall.NOT_EQUIVALENT
    elif pre:
        overall = Overall.INCONCLUSIVE
        if opts.mode == "strict" and not any(f"T_{x} " in p for p in pre for x in "123"):
            notes.append("only pair tensors vanish; fallback mode relaxes that assumption")
    else:
        certified = False
        base = criteria[0].verdict is Verdict.PASS and criteria[1].verdict is Verdict.PASS
        for c, block in zip(choices, per_choice):
            tr, pt, inv = block[:3]
            if (base and tr.verdict is Verdict.PASS and tr.detail["depth"] >= tr.detail["sufficient_depth"]
                    and pt.detail["certified"] and inv.verdict is Verdict.PASS):
                certified = True
        if certified:
            overall = Overall.LU_CERTIFIED if lu_ok else Overall.QUASI_LU_CERTIFIED
        else:
            overall = Overall.CONSISTENT
            inv = [c for c in criteria if c.name.startswith("invertibility[")]
            if any(c.verdict is Verdict.FAIL for c in inv):
                notes.append("the invertibility Gram is singular (rank <= 1 by construction), so the "
                             "sufficient direction cannot be invoked")
            if criteria[1].verdict is not Verdict.PASS:
                notes.append("sign condition undecided")
            notes.append(f"necessary conditions hold at word depth {depth}")
    return CheckReport("tripartite", rep.dims, overall, depth, criteria, pre, notes, opts)


def check(rho, rho_hat, opts=None):
    """Dispatch on the number of subsystems (2 or 3)."""
    a, b = _rep(rho), _rep(rho_hat)
    _check_dims(a, b)
    if a.n == 2:
        return check_bipartite_reps(a, b, opts)
    if a.n == 3:
        return check_tripartite_reps(a, b, opts)
    raise DimensionMismatch(f"only bipartite and tripartite states are supported, got {a.n} subsystems")
