"""Command-line interface tying the package together.

Subcommands: ``decide | factor | fejer | outer | a2 | dominate | extend |
selftest``.  Reports are canonical JSON on stdout (or ``--output FILE``).

Exit codes: 0 success (or a yes-verdict), 2 principled negative (a no-verdict
or a mathematically impossible request: infeasibility, negative samples, bad
POVMs, ...), 64 usage or parse errors, 65 numerical failures (convergence or
precision budgets exhausted).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .domination import SubspaceMap, dominating_state, two_summing_norm
from .errors import (
    DegenerateLeading,
    DimensionMismatch,
    Infeasible,
    NoConvergence,
    NotHermitian,
    NotNonnegative,
    NotPOVM,
    NotPSD,
    NotPositive,
    NotQuadratic,
    NotQuadraticFamily,
    NotTransitive,
    NumericalFailure,
    ParallelogramViolation,
    ParseError,
    PrecisionUnreachable,
    TooLarge,
    WitnessInvalid,
)
from .extension import PatternRepresentation, positive_extension
from .factor import factor_attempt, structured_cholesky
from .linalg import frobenius
from .patterns import decide_logmodular
from .spectral import TrigPoly, fejer_riesz, logmodular_witness

EXIT_OK = 0
EXIT_NEGATIVE = 2
EXIT_USAGE = 64
EXIT_NUMERIC = 65

_NEGATIVE_ERRORS = (
    Infeasible,
    NotPositive,
    NotNonnegative,
    NotPSD,
    NotTransitive,
    NotPOVM,
    NotQuadratic,
    NotQuadraticFamily,
    WitnessInvalid,
    NotHermitian,
    ParallelogramViolation,
    DegenerateLeading,
)
_USAGE_ERRORS = (ParseError, DimensionMismatch, TooLarge, ValueError)
_NUMERIC_ERRORS = (NoConvergence, NumericalFailure, PrecisionUnreachable)


class _CliParser(argparse.ArgumentParser):
    """Argument parser whose usage errors map to exit code 64."""

    def error(self, message):
        raise ParseError(message)


def _emit(report: dict, output: str | None) -> None:
    if output:
        io.write_json(output, report)
    else:
        sys.stdout.write(io.canonical_text(report))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_decide(args) -> int:
    pattern = io.json_to_pattern(io.read_json(args.pattern))
    verdict = decide_logmodular(pattern)
    if verdict.is_logmodular:
        cert = verdict.certificate
        report = {
            "command": "decide",
            "verdict": "logmodular",
            "certificate": {
                "permutation": list(cert.permutation),
                "block_sizes": list(cert.block_sizes),
            },
            "cross_check": {"certificate_matches": bool(cert.matches(pattern))},
        }
        _emit(report, args.output)
        return EXIT_OK
    i, j = verdict.witness
    report = {
        "command": "decide",
        "verdict": "not-logmodular",
        "witness": [i, j],
        "cross_check": {
            "witness_incomparable": (i, j) not in pattern and (j, i) not in pattern
        },
    }
    _emit(report, args.output)
    return EXIT_NEGATIVE


def _cmd_factor(args) -> int:
    pattern = io.json_to_pattern(io.read_json(args.pattern))
    matrix = io.json_to_matrix(io.read_json(args.matrix))
    verdict = decide_logmodular(pattern)
    if verdict.is_logmodular:
        factor = structured_cholesky(matrix, verdict.certificate, tol=args.tol_psd)
        residual = frobenius(factor.conj().T @ factor - matrix)
        report = {
            "command": "factor",
            "route": "structured",
            "residual": float(residual),
            "converged": True,
            "seed": args.seed,
            "factor": io.matrix_to_json(factor),
        }
    else:
        result = factor_attempt(
            matrix, pattern, starts=args.starts, iters=args.iters, seed=args.seed
        )
        report = {
            "command": "factor",
            "route": "projected-descent",
            "residual": float(result.residual),
            "converged": bool(result.converged),
            "seed": args.seed,
            "witness": list(verdict.witness),
            "factor": io.matrix_to_json(result.factor),
        }
    _emit(report, args.output)
    return EXIT_OK


def _cmd_fejer(args) -> int:
    coeffs = io.json_to_coeffs(io.read_json(args.coeffs))
    try:
        poly = TrigPoly(coeffs)
    except ValueError as exc:
        raise ParseError(f"coefficient file is not a trig polynomial: {exc}") from exc
    tol = args.tol_recon if args.tol_recon is not None else 1e-9
    factor = fejer_riesz(poly, tol=tol)
    theta = 2.0 * np.pi * np.arange(4096) / 4096.0
    residual = float(
        np.abs(np.abs(factor.on_circle(theta)) ** 2 - poly.evaluate(theta)).max()
    )
    report = {
        "command": "fejer",
        "degree": factor.degree,
        "residual": residual,
        "factor": io.coeffs_to_json(factor.coeffs),
    }
    _emit(report, args.output)
    return EXIT_OK


def _cmd_outer(args) -> int:
    boundary = io.json_to_boundary(io.read_json(args.samples))
    witness, err = logmodular_witness(boundary, args.eps)
    report = {
        "command": "outer",
        "eps": args.eps,
        "achieved_error": err,
        "witness": io.boundary_to_json(witness),
    }
    _emit(report, args.output)
    return EXIT_OK


def _load_function_map(obj) -> SubspaceMap:
    obj = obj if isinstance(obj, dict) else {}
    if "basis" not in obj or "images" not in obj:
        raise ParseError("instance file needs 'basis' and 'images'")
    basis = io.json_to_matrix(obj["basis"], "basis")
    images = io.json_to_matrix(obj["images"], "images")
    return SubspaceMap("functions", basis, images)


def _cmd_a2(args) -> int:
    cert = two_summing_norm(
        _load_function_map(io.read_json(args.instance)),
        tol=args.tol_gap if args.tol_gap is not None else 1e-9,
    )
    report = {
        "command": "a2",
        "value": cert.value,
        "objective": cert.objective,
        "gap": cert.gap,
        "slack": cert.slack,
        "measure": [float(w) for w in cert.measure],
        "dual": io.matrix_to_json(cert.dual),
    }
    _emit(report, args.output)
    return EXIT_OK


def _cmd_dominate(args) -> int:
    obj = io.read_json(args.instance)
    if not isinstance(obj, dict) or "basis" not in obj or "images" not in obj:
        raise ParseError("instance file needs 'basis' and 'images'")
    if not isinstance(obj["basis"], list):
        raise ParseError("'basis' must be a list of matrices for dominate")
    basis = tuple(
        io.json_to_matrix(entry, f"basis[{k}]") for k, entry in enumerate(obj["basis"])
    )
    images = io.json_to_matrix(obj["images"], "images")
    side = args.side or obj.get("side", "row")
    cert = dominating_state(
        SubspaceMap("matrices", basis, images),
        side=side,
        tol=args.tol_gap if args.tol_gap is not None else 1e-9,
    )
    report = {
        "command": "dominate",
        "side": cert.side,
        "value": cert.value,
        "objective": cert.objective,
        "gap": cert.gap,
        "slack": cert.slack,
        "state": io.matrix_to_json(cert.measure),
        "dual": io.matrix_to_json(cert.dual),
    }
    _emit(report, args.output)
    return EXIT_OK


def _cmd_extend(args) -> int:
    obj = io.read_json(args.instance)
    if not isinstance(obj, dict) or "pattern" not in obj or "images" not in obj:
        raise ParseError("instance file needs 'pattern', 'dim' and 'images'")
    pattern = io.json_to_pattern(obj["pattern"])
    if "dim" not in obj or isinstance(obj["dim"], bool) or not isinstance(obj["dim"], int):
        raise ParseError("'dim' must be an integer")
    if not isinstance(obj["images"], list):
        raise ParseError("'images' must be a list of [i, j, matrix] triples")
    images = {}
    for entry in obj["images"]:
        if not isinstance(entry, list) or len(entry) != 3:
            raise ParseError("'images' entries must be [i, j, matrix] triples")
        images[(entry[0], entry[1])] = io.json_to_matrix(entry[2], "image")
    try:
        rep = PatternRepresentation(pattern, obj["dim"], images)
    except ValueError as exc:
        raise ParseError(f"invalid representation: {exc}") from exc
    phi, rep_report = positive_extension(rep, seed=args.seed)
    report = {
        "command": "extend",
        "seed": args.seed,
        "input_size": phi.input_size,
        "output_dim": phi.output_dim,
        "choi": io.matrix_to_json(phi.choi),
        "report": {
            "extension_error": rep_report.extension_error,
            "schwarz_defect": rep_report.schwarz_defect,
            "parallelogram_residual": rep_report.parallelogram_residual,
            "unital_error": rep_report.unital_error,
            "positivity_defect": rep_report.positivity_defect,
        },
    }
    _emit(report, args.output)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    from . import selftest

    results = selftest.run_all(criteria=args.criteria)
    for res in results:
        sys.stdout.write(res.line() + "\n")
        sys.stdout.flush()
    ok = all(res.passed for res in results)
    sys.stdout.write("selftest: " + ("all criteria passed" if ok else "FAILURES") + "\n")
    return EXIT_OK if ok else 1


# ---------------------------------------------------------------------------
# parser


def _add_common(sub, output=True, seed=False, tols=()):
    if output:
        sub.add_argument("--output", help="write the report to this file")
    if seed:
        sub.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    if "psd" in tols:
        sub.add_argument("--tol-psd", type=float, default=None, dest="tol_psd")
    if "gap" in tols:
        sub.add_argument("--tol-gap", type=float, default=None, dest="tol_gap")
    if "recon" in tols:
        sub.add_argument("--tol-recon", type=float, default=None, dest="tol_recon")


def _build_parser() -> _CliParser:
    parser = _CliParser(prog="logmod", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_CliParser)
    sub.required = True

    p = sub.add_parser("decide", help="decide block-triangularizability of a pattern")
    p.add_argument("pattern", help="pattern JSON file")
    _add_common(p)
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("factor", help="factor a psd matrix within a pattern")
    p.add_argument("matrix", help="matrix JSON file")
    p.add_argument("pattern", help="pattern JSON file")
    p.add_argument("--starts", type=int, default=10)
    p.add_argument("--iters", type=int, default=500)
    _add_common(p, seed=True, tols=("psd",))
    p.set_defaults(func=_cmd_factor)

    p = sub.add_parser("fejer", help="spectral factor of a nonnegative trig polynomial")
    p.add_argument("coeffs", help="coefficient JSON file (c_-m .. c_m)")
    _add_common(p, tols=("recon",))
    p.set_defaults(func=_cmd_fejer)

    p = sub.add_parser("outer", help="outer analytic witness for positive samples")
    p.add_argument("samples", help="boundary-function JSON file")
    p.add_argument("--eps", type=float, default=1e-6, help="target sup error")
    _add_common(p)
    p.set_defaults(func=_cmd_outer)

    p = sub.add_parser("a2", help="2-summing norm with a dominating measure")
    p.add_argument("instance", help="instance JSON file (basis + images)")
    _add_common(p, tols=("gap",))
    p.set_defaults(func=_cmd_a2)

    p = sub.add_parser("dominate", help="dominating state for a matrix-subspace map")
    p.add_argument("instance", help="instance JSON file (basis list + images)")
    p.add_argument("--side", choices=("row", "column"), default=None)
    _add_common(p, tols=("gap",))
    p.set_defaults(func=_cmd_dominate)

    p = sub.add_parser("extend", help="positive extension of a pattern representation")
    p.add_argument("instance", help="instance JSON file (pattern + dim + images)")
    _add_common(p, seed=True)
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("selftest", help="run the acceptance criteria end to end")
    p.add_argument(
        "--criteria",
        type=int,
        nargs="*",
        default=None,
        help="criterion numbers to run (default: all)",
    )
    p.set_defaults(func=_cmd_selftest, output=None)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except ParseError as exc:
        print(f"logmod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"logmod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NEGATIVE_ERRORS as exc:
        print(f"logmod: no-verdict: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except _NUMERIC_ERRORS as exc:
        print(f"logmod: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
