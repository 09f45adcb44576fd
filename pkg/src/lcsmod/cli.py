"""Command-line front end.

Exit codes: 0 satisfiable / verified / extracted, 1 unsatisfiable / no quantum
solution / verification failed, 2 usage or format error, 3 unsupported regime.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import families, pauli
from .errors import (
    EvenDimension,
    LcsError,
    NotAQuantumSolution,
    ParseError,
    RegimeMismatch,
    UnsupportedModulus,
    VariantParityMismatch,
)
from .lcs import Lcs, lcs_from_dict, lcs_to_dict, verify_classical
from .solution_group import (
    presentation_from_lcs,
    reflect_certificate,
    verify_certificate,
    witness_from_dict,
    witness_to_dict,
    word_str,
)
from .zd_linalg import brute_force_satisfiable, matrix, solve_linear_system

OK, FAILED, USAGE, UNSUPPORTED = 0, 1, 2, 3

SCHEMAS = """input formats (a file path, '-' for stdin, or inline JSON):
  LCS:        {"d": 3, "constraints": [{"coeffs": [[0, 1], [1, 1]], "rhs": 1}], "labels": [...]}
  assignment: [0, 1, 2]  or  {"assignment": [0, 1, 2]}
  pauli:      {"D": 3, "n": 1, "ops": [{"phase2D": 0, "z": [1], "x": [0]}, ...]}
  family:     {"family": "square" | "pentagram", "d": 3, "coeffs": [...], "b": [...]}
  witness:    {"d": 3, "phase_c": 1, "factors": [[4, 1], [2, 1]], "target": [[0, -1], ...],
               "pairs": [{"u": [[gen, 1], ...], "relator": 7, "power": -1}, ...]}"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}\n\n{SCHEMAS}", file=sys.stderr)
        raise SystemExit(USAGE)


def _read(source: str) -> str:
    s = source.lstrip()
    if s.startswith("{") or s.startswith("["):
        return source
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {source!r}: {exc.strerror}") from None


def _load_json(source: str):
    text = _read(source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None


def _load_lcs(source: str) -> Lcs:
    return lcs_from_dict(_load_json(source))


def _load_assignment(source: str):
    doc = _load_json(source)
    if isinstance(doc, dict):
        doc = doc.get("assignment")
    if not isinstance(doc, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in doc):
        raise ParseError("expected a list of integers", "assignment")
    return doc


def _ints(text: str | None, what: str):
    if text is None:
        return None
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"{what} must be a comma-separated list of integers") from None


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, doc: dict, text: str):
        if self.as_json:
            print(json.dumps(doc, sort_keys=True))
        else:
            print(text)


def _fmt_assignment(lcs: Lcs, a) -> str:
    return "\n".join(f"  {lcs.label(j)} = {v}" for j, v in enumerate(a))


# -- subcommands ---------------------------------------------------------------------


def cmd_solve(args, out: _Out) -> int:
    lcs = _load_lcs(args.lcs)
    x = solve_linear_system(lcs.M, lcs.b)
    if x is None:
        out.emit({"satisfiable": False}, "unsatisfiable")
        return FAILED
    out.emit({"satisfiable": True, "assignment": x.tolist()}, "satisfiable\n" + _fmt_assignment(lcs, x))
    return OK


def cmd_verify_classical(args, out: _Out) -> int:
    lcs = _load_lcs(args.lcs)
    a = _load_assignment(args.assignment)
    if len(a) != lcs.n:
        raise ParseError(f"assignment has {len(a)} entries for {lcs.n} variables", "assignment")
    lhs = lcs.M.matvec(a)
    bad = [i for i in range(lcs.m) if lhs[i] != lcs.b[i]]
    ok = verify_classical(lcs, a)
    text = "verified" if ok else "failed\n" + "\n".join(
        f"  row {i + 1}: {lhs[i]} != {lcs.b[i]} (mod {lcs.d})" for i in bad
    )
    out.emit({"verified": ok, "failed_rows": [i + 1 for i in bad]}, text)
    return OK if ok else FAILED


def cmd_verify_quantum(args, out: _Out) -> int:
    lcs = _load_lcs(args.lcs)
    A = pauli.assignment_from_dict(_load_json(args.pauli))
    failures = pauli.quantum_solution_failures(lcs, A)
    doc = {"verified": not failures, "failures": failures}
    if args.dense:
        doc["dense_verified"] = pauli.verify_quantum_solution_dense(lcs, A)
    ok = not failures and doc.get("dense_verified", True)
    lines = ["verified" if ok else "failed"] + [f"  {f}" for f in failures]
    if args.dense:
        lines.append(f"  dense check: {'passed' if doc['dense_verified'] else 'failed'}")
    out.emit(doc, "\n".join(lines))
    return OK if ok else FAILED


def cmd_extract(args, out: _Out) -> int:
    lcs = _load_lcs(args.lcs)
    A = pauli.assignment_from_dict(_load_json(args.pauli))
    try:
        a = pauli.extract_classical(lcs, A)
    except EvenDimension:
        print(
            f"extract: unsupported for even D={A.D}: the parity-trace value of Z^p X^q vanishes "
            "whenever the overlap p.q is odd, so no classical value can be read off",
            file=sys.stderr,
        )
        return UNSUPPORTED
    except NotAQuantumSolution as exc:
        out.emit({"extracted": False, "reason": str(exc)}, f"not a quantum solution: {exc}")
        return FAILED
    ok = verify_classical(lcs, a)
    out.emit(
        {"extracted": True, "assignment": a.tolist(), "verified": ok},
        "extracted\n" + _fmt_assignment(lcs, a) + f"\n{'verified' if ok else 'FAILED verification'}",
    )
    return OK if ok else FAILED


def _gen(args, family: str, out: _Out) -> int:
    n, m = (9, 6) if family == "square" else (10, 5)
    coeffs = _ints(args.coeffs, "--coeffs") or [1] * (2 * n)
    default_b = [0, 0, 0, 0, 0, 1] if family == "square" else [1, 0, 0, 0, 0]
    b = _ints(args.b, "--b") or default_b
    if len(coeffs) != 2 * n or len(b) != m:
        raise ParseError(f"{family} needs {2 * n} coefficients and {m} right-hand sides")
    spec = families.FamilySpec(family, args.d, tuple(coeffs), tuple(b))
    doc = spec.to_dict() if args.spec else lcs_to_dict(spec.lcs())
    print(json.dumps(doc, sort_keys=True))
    return OK


def cmd_classify(args, out: _Out) -> int:
    spec = families.spec_from_dict(_load_json(args.spec))
    c = families.classify(spec)
    doc = c.to_dict()
    if c.kind == "unsupported":
        out.emit(doc, f"unsupported: {c.reason}")
        return UNSUPPORTED
    if c.kind == "classically_satisfiable":
        text = (
            f"classically satisfiable ({c.method}); quantum and classical satisfiability agree here\n"
            + _fmt_assignment(spec.lcs(), c.assignment)
        )
        out.emit(doc, text)
        return OK
    w = c.witness
    text = "\n".join(
        [
            "no quantum solution",
            f"  reduced gammas: {list(c.reduced.gammas)}, b' = {list(c.reduced.b)}",
            f"  phase commutation: {w.relation_str()}",
            f"  certificate: {len(w.certificate.pairs)} conjugated relators, verified",
            f"  consequence: {c.verdict.consequence}",
            "  (use --json for the full certificate)",
        ]
    )
    out.emit(doc, text)
    return FAILED


def cmd_witness(args, out: _Out) -> int:
    spec = families.spec_from_dict(_load_json(args.spec))
    try:
        red = families.reduce_spec(spec)
    except UnsupportedModulus as exc:
        print(f"witness: {exc}", file=sys.stderr)
        return UNSUPPORTED
    P = presentation_from_lcs(red.lcs())
    if args.check:
        wit = witness_from_dict(_load_json(args.check))
        ok = verify_certificate(P, wit.certificate) and wit.certificate.target == wit.target
        reflected_ok = ok and verify_certificate(P, reflect_certificate(P, wit.certificate))
        doc = {"verified": ok, "reflected_verified": reflected_ok, "relation": wit.relation_str()}
        out.emit(doc, f"{'verified' if ok else 'failed'}: {wit.relation_str()}")
        return OK if ok else FAILED
    try:
        wit = families.witness_for(red)
    except RegimeMismatch as exc:
        print(f"witness: {exc}", file=sys.stderr)
        return UNSUPPORTED
    doc = witness_to_dict(wit)
    if out.as_json:
        print(json.dumps(doc, sort_keys=True))
    else:
        print(f"{wit.relation_str()}  (reduced presentation, c = {wit.phase})")
        print(f"target word: {word_str(wit.target)}")
        print(f"certificate: {len(wit.certificate.pairs)} conjugated relators, verified")
    return OK


def _selftest_qubit(out: _Out) -> int:
    rows = []
    ok = True
    for name, (lcs, A) in (("square", pauli.qubit_square_solution()), ("pentagram", pauli.qubit_pentagram_solution())):
        sym = pauli.verify_quantum_solution(lcs, A)
        dense = pauli.verify_quantum_solution_dense(lcs, A)
        ok &= sym and dense
        rows.append({"system": name, "symbolic": sym, "dense": dense})
    text = "\n".join(f"{r['system']}: symbolic {'ok' if r['symbolic'] else 'FAIL'}, "
                     f"dense {'ok' if r['dense'] else 'FAIL'}" for r in rows)
    out.emit({"passed": ok, "results": rows}, text)
    return OK if ok else FAILED


def _selftest_even_dimension(t: int, out: _Out) -> int:
    variant = "left" if t % 2 else "right"
    lcs, A = pauli.table1_solution(t, variant)
    failures = pauli.quantum_solution_failures(lcs, A)
    third = pauli.row_product(lcs, A, 5)
    minus_one = third == pauli.PauliOp.scalar(t, A.n, A.D)
    ok = not failures and minus_one
    text = "\n".join(
        [f"D = {2 * t} ({variant} table)"]
        + [f"  {lcs.label(j)} = {op}" for j, op in enumerate(A.ops)]
        + [f"  third-column product = {'-I' if minus_one else third}",
           "  all conditions hold" if not failures else "  failures: " + "; ".join(failures)]
    )
    out.emit({"passed": ok, "D": 2 * t, "variant": variant, "failures": failures,
              "third_column_product": "-I" if minus_one else str(third)}, text)
    return OK if ok else FAILED


def _selftest_fuzz(seed: int, count: int, out: _Out) -> int:
    rng = np.random.default_rng(seed)
    mismatches = []
    for k in range(count):
        d = int(rng.integers(2, 8))
        m, n = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        M = matrix(rng.integers(0, d, (m, n)).tolist(), d)
        b = [int(v) for v in rng.integers(0, d, m)]
        x = solve_linear_system(M, b)
        truth = brute_force_satisfiable(M, b)
        if (x is not None) != truth or (x is not None and M.matvec(x).tolist() != [v % d for v in b]):
            mismatches.append(k)
        if d % 2:
            lcs, A = pauli.random_quantum_solution(rng, M, n=int(rng.integers(1, 3)))
            if not verify_classical(lcs, pauli.extract_classical(lcs, A)):
                mismatches.append(k)
    ok = not mismatches
    out.emit({"passed": ok, "seed": seed, "count": count, "mismatches": mismatches},
             f"fuzz seed={seed}: {count} cases, {len(mismatches)} mismatches")
    return OK if ok else FAILED


def cmd_selftest(args, out: _Out) -> int:
    if args.which == "fig2":
        return _selftest_qubit(out)
    if args.which == "table1":
        if args.t < 1:
            raise ParseError("--t must be >= 1")
        return _selftest_even_dimension(args.t, out)
    return _selftest_fuzz(args.seed, args.count, out)


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lcsmod", description=__doc__, epilog=SCHEMAS,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--json", action="store_true", help="canonical key-sorted JSON output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="canonical key-sorted JSON output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="find a classical solution")
    p.add_argument("lcs")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-classical", parents=[common], help="check an assignment")
    p.add_argument("lcs")
    p.add_argument("assignment")
    p.set_defaults(func=cmd_verify_classical)

    p = sub.add_parser("verify-quantum", parents=[common], help="check a Pauli operator solution")
    p.add_argument("lcs")
    p.add_argument("pauli")
    p.add_argument("--dense", action="store_true", help="also check with explicit matrices")
    p.set_defaults(func=cmd_verify_quantum)

    p = sub.add_parser("extract", parents=[common], help="read a classical solution off a Pauli solution (odd D)")
    p.add_argument("lcs")
    p.add_argument("pauli")
    p.set_defaults(func=cmd_extract)

    for name, family in (("gen-square", "square"), ("gen-pentagram", "pentagram")):
        p = sub.add_parser(name, parents=[common], help=f"emit a {family} system")
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--coeffs", help="a1..aN then a'1..a'N, comma separated")
        p.add_argument("--b", help="right-hand sides, comma separated")
        p.add_argument("--spec", action="store_true", help="emit the family spec instead of the LCS")
        p.set_defaults(func=lambda a, o, f=family: _gen(a, f, o))

    p = sub.add_parser("classify", parents=[common], help="classify a square or pentagram family spec")
    p.add_argument("spec")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("witness", parents=[common], help="emit or check a phase-commutation certificate")
    p.add_argument("spec")
    p.add_argument("--check", metavar="WITNESS", help="verify a supplied witness instead")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("selftest", parents=[common], help="built-in reproduction checks")
    p.add_argument("which", choices=["fig2", "table1", "fuzz"])
    p.add_argument("--t", type=int, default=1, help="table1: D = 2t")
    p.add_argument("--seed", type=int, default=0, help="fuzz: RNG seed")
    p.add_argument("--count", type=int, default=200, help="fuzz: number of cases")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = _Out(args.json)
    try:
        return args.func(args, out)
    except (UnsupportedModulus, VariantParityMismatch) as exc:
        print(f"{args.command}: unsupported: {exc}", file=sys.stderr)
        return UNSUPPORTED
    except LcsError as exc:
        print(f"{args.command}: {exc}\n\n{SCHEMAS}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
