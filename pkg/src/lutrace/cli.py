"""``lutrace`` command line: validate, extract, check, gen.

Exit codes: 0 consistent or certified, 2 not equivalent, 3 inconclusive,
4 dimension mismatch, 5 parse or validation error (including bad usage).
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import io
from .bloch import (StateValidationError, extract_rep, random_density, random_lu_pair, tensor_product,
                    validation_problems)
from .equivalence import CHOICES, CheckOptions, DimensionMismatch, Overall, check
from .specht import word_bound_bipartite, word_bound_blocks

EXIT_OK, EXIT_NOT_EQUIVALENT, EXIT_INCONCLUSIVE, EXIT_DIMS, EXIT_INPUT = 0, 2, 3, 4, 5

_EXIT = {
    Overall.NOT_EQUIVALENT: EXIT_NOT_EQUIVALENT,
    Overall.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _dims(text):
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 2,2 or 2,2,3, got {text!r}") from None
    if not 2 <= len(dims) <= 3 or min(dims) < 2:
        raise argparse.ArgumentTypeError("need 2 or 3 subsystems, each of dimension >= 2")
    return dims


def _choice(text):
    if text == "all":
        return "all"
    digits = tuple(int(c) for c in text if c.isdigit())
    if digits not in CHOICES:
        raise argparse.ArgumentTypeError(f"choice must be 'all' or one of 1223, 2113, 3312, got {text!r}")
    return digits


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _fail(msg, code=EXIT_INPUT):
    print(f"error: {msg}", file=sys.stderr)
    return code


def cmd_validate(args):
    try:
        dims, M = io.read_state_raw(args.path)
    except (OSError, ValueError) as e:
        return _fail(e)
    problems = validation_problems(M, dims)
    if problems:
        print(f"{args.path}: INVALID")
        for p in problems:
            print(f"  - {p}")
        return EXIT_INPUT
    w = np.linalg.eigvalsh((M + M.conj().T) / 2)
    print(f"{args.path}: valid state, dims {list(dims)}, rank {int(np.sum(w > 1e-9))}, "
          f"min eigenvalue {w[0]:.3e}")
    return EXIT_OK


def cmd_extract(args):
    try:
        rep = extract_rep(io.read_state(args.path))
    except (OSError, ValueError) as e:
        return _fail(e)
    if args.json or args.out:
        text = json.dumps(io.rep_to_dict(rep), indent=1)
        if args.out:
            with open(args.out, "w") as f:
                f.write(text + "\n")
        else:
            print(text)
        return EXIT_OK
    print(f"dims {list(rep.dims)}; tensors scaled by prod d_k, orthonormal GGM basis")
    with np.printoptions(precision=6, suppress=True):
        for S, T in rep.tensors.items():
            label = "".join(map(str, S))
            print(f"T_{label}  shape {T.shape}  norm {np.linalg.norm(T):.6g}")
            print(np.array2string(T, prefix="  "))
    return EXIT_OK


def _load_either(path, force_rep):
    with open(path) as f:
        obj = json.load(f)
    if force_rep or "tensors" in obj:
        return io.rep_from_dict(obj)
    return io.state_from_dict(obj)


def _sufficient_bounds(dims):
    deltas = [d * d - 1 for d in dims]
    if len(dims) == 2:
        rows = [("bipartite", word_bound_bipartite(*deltas), 4)]
    else:
        rows = []
        for c in CHOICES:
            i = c[0]
            j, k = (x for x in (1, 2, 3) if x != i)
            rows.append((f"choice {''.join(map(str, c))}",
                         word_bound_blocks(deltas[j - 1] * deltas[k - 1], 1, deltas[i - 1], 4, 5), 17))
    out = []
    for name, bound, letters in rows:
        # necklaces of length n over k letters ~ k**n / n
        digits = bound * math.log10(letters) - math.log10(bound)
        out.append({"scope": name, "sufficient_length": bound, "letters": letters,
                    "log10_words_at_that_length": round(digits, 1)})
    return out


def cmd_check(args):
    try:
        a = _load_either(args.a, args.rep)
        b = _load_either(args.b, args.rep)
    except (OSError, ValueError) as e:
        return _fail(e)
    try:
        opts = CheckOptions(max_word_len=args.max_word_len, tol=args.tol, choice=args.choice,
                            mode=args.mode, qubit_det_check=args.qubit_det,
                            invertibility_extension=args.extension)
    except ValueError as e:
        return _fail(e)
    try:
        report = check(a, b, opts)
    except DimensionMismatch as e:
        return _fail(e, EXIT_DIMS)
    bounds = _sufficient_bounds(a.dims) if args.paper_bound else None
    if args.json:
        out = report.to_dict()
        if bounds:
            out["sufficient_bounds"] = {"bounds": bounds, "note": "printed only; far beyond exhaustive reach"}
        print(json.dumps(out, indent=1))
    else:
        _print_report(report)
        if bounds:
            print("sufficient word lengths (not run; exhaustive search is infeasible):")
            for r in bounds:
                print(f"  {r['scope']}: {r['sufficient_length']} "
                      f"(~10^{r['log10_words_at_that_length']:.0f} words at that length)")
    return _EXIT.get(report.overall, EXIT_OK)


def _print_report(report):
    print(f"{report.kind} check, dims {list(report.dims)}: {report.summary}")
    for c in report.criteria:
        tag = " (informational)" if c.informational else ""
        print(f"  {c.name:32s} {c.verdict.value}{tag}")
        if c.witness is not None and c.verdict.value == "fail":
            print(f"      witness: {json.dumps(c.to_dict()['witness'])[:300]}")
    for p in report.preconditions:
        print(f"  precondition: {p}")
    for n in report.notes:
        print(f"  note: {n}")


def cmd_gen(args):
    dims, seed, out = args.dims, args.seed, args.out
    os.makedirs(out, exist_ok=True)
    written = []

    def save(name, obj):
        path = os.path.join(out, name)
        io.dump(obj, path)
        written.append(path)

    try:
        if args.kind == "random":
            save("state.json", io.state_to_dict(random_density(dims, seed, args.rank)))
        elif args.kind == "lu-pair":
            rho, rho_hat, Us = random_lu_pair(dims, seed, args.rank)
            save("a.json", io.state_to_dict(rho))
            save("b.json", io.state_to_dict(rho_hat))
            save("unitaries.json", io.unitaries_to_dict(Us))
        else:
            ss = np.random.SeedSequence(seed).spawn(2)
            r = args.rank
            first = random_density(dims[:1], ss[0], r and min(r, dims[0]))
            rest = random_density(dims[1:], ss[1], r and min(r, int(np.prod(dims[1:]))))
            save("state.json", io.state_to_dict(tensor_product(first, rest)))
            save("factor_1.json", io.state_to_dict(first))
            save("factor_rest.json", io.state_to_dict(rest))
    except ValueError as e:
        return _fail(e)
    for p in written:
        print(p)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="lutrace", description="Local-unitary equivalence checks for bipartite and tripartite states.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="check that a file holds a valid density matrix")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("extract", help="print the coefficient tensors of a state")
    e.add_argument("path")
    e.add_argument("--json", action="store_true", help="emit the JSON representation")
    e.add_argument("--out", help="write the JSON representation to this file")
    e.set_defaults(func=cmd_extract)

    c = sub.add_parser("check", help="compare two states (or two representations)")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--rep", action="store_true", help="inputs are representation files")
    c.add_argument("--max-word-len", type=int, default=4)
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--choice", type=_choice, default="all", help="all, 1223, 2113 or 3312")
    c.add_argument("--mode", choices=("strict", "fallback"), default="strict")
    c.add_argument("--qubit-det", type=_on_off, default=True, metavar="on|off")
    c.add_argument("--extension", action="store_true",
                   help="also report the summed invertibility Gram (informational)")
    c.add_argument("--paper-bound", action="store_true",
                   help="print the sufficient word lengths without running them")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("gen", help="write seeded random states")
    g.add_argument("--kind", choices=("random", "lu-pair", "product"), default="random")
    g.add_argument("--dims", type=_dims, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--rank", type=int)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # usage errors and --help
        return e.code
    try:
        return args.func(args)
    except StateValidationError as e:
        return _fail(e)


if __name__ == "__main__":
    sys.exit(main())
