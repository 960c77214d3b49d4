"""Command-line interface.

Subcommands: enumerate, classify, membership, violation, ghz, id, ppt-check.
Streams are JSON-lines (or CSV via --format csv); single results are one
JSON object.  Randomized commands take --seed and echo it in the output.
Exit codes: 0 success, 2 invalid input, 3 numeric nonconvergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import classical, inequality, quantum, symmetry
from .transform import DimensionMismatchError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NONCONVERGED = 3

_ENUM_ALL_MAX_SITES = 4


def _signs_string(f: inequality.SignTable) -> str:
    return "".join("+" if v > 0 else "-" for v in f.signs)


def _signs_from_string(text: str) -> inequality.SignTable:
    cleaned = text.strip()
    if set(cleaned) - {"+", "-"}:
        raise ValueError("signs must be a string over '+' and '-'")
    m = len(cleaned)
    if m == 0 or m & (m - 1):
        raise ValueError(f"got {m} signs, expected a power of two")
    values = tuple(1 if ch == "+" else -1 for ch in cleaned)
    return inequality.SignTable(m.bit_length() - 1, values)


def _emit_rows(rows: list[dict], fmt: str, stream) -> None:
    if fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    else:
        for row in rows:
            stream.write(json.dumps(row) + "\n")


def cmd_enumerate(args: argparse.Namespace) -> int:
    n = args.n
    if args.id is not None:
        ids = [args.id]
    elif args.range is not None:
        lo, hi = args.range
        if not 0 <= lo <= hi <= 1 << (1 << n):
            raise ValueError(f"range [{lo}, {hi}) out of bounds for n={n}")
        ids = range(lo, hi)
    elif args.all:
        if n > _ENUM_ALL_MAX_SITES:
            raise ValueError(
                f"--all would stream 2^(2^{n}) lines; use --range for n > {_ENUM_ALL_MAX_SITES}"
            )
        ids = range(1 << (1 << n))
    else:
        raise ValueError("one of --id, --range, --all is required")

    rows = []
    for value in ids:
        f = inequality.id_to_signs(n, value)
        beta = inequality.coefficients_from_signs(f)
        rows.append(
            {
                "n": n,
                "id": value,
                "polynomial": inequality.polynomial_string(beta),
                "signs": _signs_string(f),
            }
        )
    _emit_rows(rows, args.format, sys.stdout)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    records = symmetry.classify_all(args.n)
    rows = []
    for rec in records:
        row = {
            "n": rec.n,
            "canonical_id": rec.canonical_id,
            "size": rec.size,
            "permutation_invariant": rec.permutation_invariant,
            "factorizing": rec.factorizing,
        }
        if not args.no_violations:
            beta = inequality.bell_table_from_id(rec.n, rec.canonical_id)
            result = quantum.max_violation(beta, seed=args.seed)
            row["max_violation"] = round(result.value, 9)
            row["seed"] = args.seed
        rows.append(row)
    _emit_rows(rows, args.format, sys.stdout)
    return EXIT_OK


def _load_vectors(path: Path) -> list[classical.CorrelationVector]:
    text = path.read_text()
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        return [classical.correlation_vector_from_json(json.loads(text))]
    return classical.correlation_vectors_from_csv(text.splitlines())


def cmd_membership(args: argparse.Namespace) -> int:
    rows = []
    for xi in _load_vectors(Path(args.file)):
        margin = classical.l1_margin(xi)
        wit = classical.witness(xi)
        rows.append(
            {
                "n": xi.n,
                "margin": round(margin, 12),
                "member": bool(margin <= 1.0 + classical.BOUNDARY_TOL),
                "witness_id": inequality.signs_to_id(wit),
                "witness_signs": _signs_string(wit),
            }
        )
    _emit_rows(rows, args.format, sys.stdout)
    return EXIT_OK


def cmd_violation(args: argparse.Namespace) -> int:
    beta = inequality.bell_table_from_id(args.n, args.id)
    result = quantum.max_violation(beta, seed=args.seed)
    bound = quantum.mermin_bound(args.n)
    report = {
        "n": args.n,
        "id": args.id,
        "value": round(result.value, 9),
        "phases": [round(v, 9) for v in result.phases.phi],
        "bound": round(bound, 9),
        "attained_fraction": round(result.value / bound, 9),
        "seed": args.seed,
        "converged": result.converged,
    }
    print(json.dumps(report))
    return EXIT_OK if result.converged else EXIT_NONCONVERGED


def cmd_ghz(args: argparse.Namespace) -> int:
    phi = tuple(float(v) for v in args.phi.split(","))
    if args.n is not None and args.n != len(phi):
        raise ValueError(f"-n {args.n} but {len(phi)} site angles given")
    phases = quantum.PhaseVector(args.phi0, phi)
    obs = quantum.ghz_observables(phases)
    xi = quantum.simulate_correlations(quantum.ghz_state(phases.n), obs)
    report = {
        "n": phases.n,
        "phi0": phases.phi0,
        "phi": list(phases.phi),
        "alpha": phases.phi0 / phases.n,
        "observable_angles": [list(pair) for pair in obs.angles],
        "correlations": [round(v, 12) for v in xi.xi],
    }
    print(json.dumps(report))
    return EXIT_OK


def cmd_id(args: argparse.Namespace) -> int:
    if args.mermin:
        if args.n is None:
            raise ValueError("--mermin requires -n")
        f = inequality.mermin_sign_table(args.n)
    elif args.signs is not None:
        f = _signs_from_string(args.signs)
    elif args.polynomial is not None:
        beta = inequality.parse_polynomial(args.polynomial)
        f = inequality.signs_from_coefficients(beta)
    else:
        raise ValueError("one of --mermin, --signs, --polynomial is required")
    print(json.dumps({"n": f.n, "id": inequality.signs_to_id(f)}))
    return EXIT_OK


def cmd_ppt_check(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    threshold = 1.0 + 1e-9
    worst = 0.0
    for _ in range(args.states):
        rho = quantum.sample_separable(args.n, args.terms, rng)
        for _ in range(args.specs):
            angles = rng.uniform(0.0, 2.0 * np.pi, size=(args.n, 2))
            spec = quantum.ObservableSpec(tuple(map(tuple, angles)))
            xi = quantum.simulate_correlations(rho, spec)
            worst = max(worst, classical.l1_margin(xi))
    report = {
        "n": args.n,
        "states": args.states,
        "specs": args.specs,
        "terms": args.terms,
        "seed": args.seed,
        "max_value": round(worst, 12),
        "threshold": threshold,
        "passed": bool(worst <= threshold),
    }
    print(json.dumps(report))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellpoly",
        description="Multipartite Bell correlation inequalities toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="emit inequalities by number")
    p.add_argument("-n", type=int, required=True, help="site count")
    p.add_argument("--id", type=int, help="a single inequality number")
    p.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"), help="half-open id range")
    p.add_argument("--all", action="store_true", help="every id (n <= 4)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="orbit census with quantum violations")
    p.add_argument("-n", type=int, required=True, help="site count (<= 4)")
    p.add_argument("--no-violations", action="store_true", help="census only")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("membership", help="classical membership of correlation vectors")
    p.add_argument("file", help="correlation vector file (.json object or CSV rows)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("violation", help="maximal quantum violation of one inequality")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--id", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_violation)

    p = sub.add_parser("ghz", help="GHZ correlations for given phases")
    p.add_argument("-n", type=int, default=None)
    p.add_argument("--phi0", type=float, required=True)
    p.add_argument("--phi", type=str, required=True, help="comma-separated site angles")
    p.set_defaults(func=cmd_ghz)

    p = sub.add_parser("id", help="number an inequality given signs or polynomial")
    p.add_argument("-n", type=int, default=None)
    p.add_argument("--mermin", action="store_true")
    p.add_argument("--signs", type=str, help="e.g. '+++-'")
    p.add_argument("--polynomial", type=str, help="e.g. '1/2 a1 b1 + ... - 1/2 a2 b2'")
    p.set_defaults(func=cmd_id)

    p = sub.add_parser("ppt-check", help="probabilistic PPT-implies-classical check")
    p.add_argument("-n", type=int, default=3)
    p.add_argument("--states", type=int, default=20)
    p.add_argument("--specs", type=int, default=10)
    p.add_argument("--terms", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ppt_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, DimensionMismatchError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
