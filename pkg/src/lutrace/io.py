"""JSON formats for states, coefficient-tensor representations and unitaries.

State::

    {"dims": [2, 2], "matrix": [[[re, im], ...], ...]}      # row-major

Representation::

    {"dims": [2, 2], "convention": {...},
     "tensors": {"1": {"shape": [3], "data": [...]}, "12": {...}, ...}}

Floats are written with ``repr`` precision, so a write/read cycle is exact.
"""

import json

import numpy as np

from .bloch import DensityMatrix, HypermatrixRep, parse_subset, subset_label

CONVENTION = {
    "basis": "generalized Gell-Mann, orthonormal: Tr(l_a l_b) = delta_ab",
    "order": "symmetric (j<k), antisymmetric (j<k), diagonal; each block lexicographic",
    "scaling": "T_S = (prod_{k in S} d_k) * Tr(rho l_a1 ... l_am)",
    "reconstruction": "rho = (I + sum_S sum_a T_S[a] l_a) / prod(d)",
}


class FormatError(ValueError):
    """Malformed or inconsistent file contents."""


def _complex_rows(M):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


def _parse_complex(data, what):
    try:
        arr = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise FormatError(f"{what}: entries must be [re, im] pairs ({e})") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise FormatError(f"{what}: expected an N x N array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _parse_dims(obj):
    dims = obj.get("dims")
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and d >= 2 for d in dims):
        raise FormatError(f"'dims' must be a nonempty list of integers >= 2, got {dims!r}")
    return tuple(dims)


def _load_json(path):
    try:
        with open(path) as f:
            obj = json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from None
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: top-level value must be an object")
    return obj


def state_to_dict(rho):
    return {"dims": list(rho.dims), "matrix": _complex_rows(rho.mat)}


def parse_state(obj):
    """Return ``(dims, complex matrix)`` without validating the state itself."""
    if "matrix" not in obj:
        raise FormatError("missing 'matrix'")
    dims = _parse_dims(obj)
    M = _parse_complex(obj["matrix"], "matrix")
    D = int(np.prod(dims))
    if M.shape != (D, D):
        raise FormatError(f"matrix is {M.shape[0]}x{M.shape[1]} but dims {list(dims)} need {D}x{D}")
    return dims, M


def state_from_dict(obj):
    dims, M = parse_state(obj)
    return DensityMatrix(dims, M)


def rep_to_dict(rep):
    return {
        "dims": list(rep.dims),
        "convention": CONVENTION,
        "tensors": {subset_label(S): {"shape": list(T.shape), "data": T.tolist()}
                    for S, T in rep.tensors.items()},
    }


def rep_from_dict(obj):
    dims = _parse_dims(obj)
    raw = obj.get("tensors")
    if not isinstance(raw, dict):
        raise FormatError("missing 'tensors' object")
    tensors = {}
    for label, entry in raw.items():
        try:
            S = parse_subset(label)
            T = np.asarray(entry["data"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f"tensor {label!r}: {e}") from None
        if list(T.shape) != list(entry.get("shape", T.shape)):
            raise FormatError(f"tensor {label!r}: data shape {list(T.shape)} disagrees with 'shape'")
        tensors[S] = T
    try:
        return HypermatrixRep(dims, tensors)
    except ValueError as e:
        raise FormatError(str(e)) from None


def unitaries_to_dict(Us):
    return {"dims": [len(U) for U in Us], "unitaries": [_complex_rows(U) for U in Us]}


def unitaries_from_dict(obj):
    return [_parse_complex(U, f"unitary {k + 1}") for k, U in enumerate(obj["unitaries"])]


def dump(obj, path):
    with open(path, "w") as f:
        json.dump(obj, f, indent=1)
        f.write("\n")


def read_state(path):
    return state_from_dict(_load_json(path))


def read_state_raw(path):
    return parse_state(_load_json(path))


def read_rep(path):
    return rep_from_dict(_load_json(path))


def write_state(rho, path):
    dump(state_to_dict(rho), path)


def write_rep(rep, path):
    dump(rep_to_dict(rep), path)
