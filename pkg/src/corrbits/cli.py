"""Command line front end.

Every subcommand prints one report (JSON or CSV) and exits 0, or maps a
failure onto an exit code: 2 for invalid input, 3 for a resource cap,
4 for a broken invariant detected while running. Reports depend only on
the arguments and the seed, never on --workers, so the same invocation
is byte-reproducible (wall_time aside).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import harness
from .errors import InvariantViolation, ResourceCapError, ValidationError
from .protocol import load_code, save_code

__all__ = ["build_parser", "main"]


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}") from exc


def _add_format_out(sp: argparse.ArgumentParser, default_format: str) -> None:
    sp.add_argument("--format", choices=("json", "csv"), default=default_format,
                    help=f"report format (default {default_format})")
    sp.add_argument("--out", metavar="PATH", default=None,
                    help="write the report here instead of stdout")


def _add_run_flags(sp: argparse.ArgumentParser, trials_default: int) -> None:
    sp.add_argument("--n", type=int, default=None,
                    help="string length (default 64*k)")
    sp.add_argument("--k", type=int, required=True, help="output bits")
    sp.add_argument("--eps", type=float, required=True, help="per-bit noise rate")
    sp.add_argument("--trials", type=int, default=trials_default,
                    help=f"Monte Carlo trials (default {trials_default})")
    sp.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    sp.add_argument("--workers", type=int, default=1,
                    help="worker processes; never changes the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrbits",
        description="Simulate and bound zero-communication randomness agreement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="estimate a protocol's agreement probability")
    _add_run_flags(sp, trials_default=100_000)
    sp.add_argument("--protocol", choices=("trivial", "affine"), default="affine")
    sp.add_argument("--codebook", metavar="PATH", default=None,
                    help="codebook file: loaded if present, else sampled and saved")
    sp.add_argument("--stop-after", dest="stop_after", type=int, default=None,
                    help="stop once this many agreements are seen")
    _add_format_out(sp, "json")

    sp = sub.add_parser("cover", help="frequency of the both-uniquely-covered event")
    _add_run_flags(sp, trials_default=100_000)
    _add_format_out(sp, "json")

    sp = sub.add_parser("audit", help="uniformity audit of a codebook's outputs")
    sp.add_argument("--codebook", metavar="PATH", required=True)
    sp.add_argument("--eps", type=float, default=None,
                    help="noise rate for the agreement-conditioned check")
    sp.add_argument("--trials", type=int, default=None,
                    help="sampled draws (forces sampled mode; default exhaustive when n <= 14)")
    sp.add_argument("--exhaustive", action="store_true",
                    help="force exhaustive mode (requires n <= 14)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    _add_format_out(sp, "json")

    sp = sub.add_parser("bounds", help="analytic bound table over a (k, eps) grid")
    sp.add_argument("--k", type=_int_list, default=None,
                    help="comma-separated k values (default 8,12,16,20,24)")
    sp.add_argument("--eps", type=_float_list, default=None,
                    help="comma-separated eps values (default 0.05,0.1,0.25,0.4,0.5)")
    _add_format_out(sp, "csv")

    sp = sub.add_parser("figure1", help="advantage-cap curve over eps")
    sp.add_argument("--points", type=int, default=200,
                    help="geometric grid size on [1e-4, 0.5] (default 200)")
    _add_format_out(sp, "csv")

    sp = sub.add_parser("codegen", help="sample a codebook and persist it")
    sp.add_argument("--n", type=int, default=None, help="string length (default 64*k)")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", metavar="PATH", required=True, help="codebook file to write")
    sp.add_argument("--format", choices=("json", "csv"), default="json",
                    help="format of the stdout summary")

    sp = sub.add_parser("verify", help="run the spectral identity and inequality sweeps")
    sp.add_argument("--trials", type=int, default=100,
                    help="random functions per check (default 100)")
    sp.add_argument("--seed", type=int, default=0)
    _add_format_out(sp, "json")

    return parser


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return harness.report_json(payload)
    return harness.report_csv(payload)


def _cmd_simulate(args) -> str:
    n = args.n if args.n is not None else harness.default_dimension(args.k)
    config = harness.SimulationConfig(
        n=n,
        k=args.k,
        epsilon=args.eps,
        trials=args.trials,
        seed=args.seed,
        protocol=args.protocol,
        codebook_path=args.codebook,
        workers=args.workers,
        stop_after_agreements=args.stop_after,
    )
    report = harness.run_simulation(config)
    return _render(harness.simulation_report_dict(report), args.format)


def _cmd_cover(args) -> str:
    n = args.n if args.n is not None else harness.default_dimension(args.k)
    report = harness.unique_covering_experiment(
        n, args.k, args.eps, args.trials, args.seed, workers=args.workers
    )
    return _render(harness.covering_report_dict(report), args.format)


def _cmd_audit(args) -> str:
    path = Path(args.codebook)
    if not path.exists():
        raise ValidationError(f"codebook file not found: {path}")
    code = load_code(path)
    exhaustive = True if args.exhaustive else (None if args.trials is None else False)
    report = harness.uniformity_audit(
        code,
        sample_count=args.trials,
        exhaustive=exhaustive,
        epsilon=args.eps,
        seed=args.seed,
        workers=args.workers,
    )
    return _render(harness.audit_report_dict(report), args.format)


def _cmd_bounds(args) -> str:
    reports = harness.emit_bounds_table(args.k, args.eps)
    if args.format == "csv":
        return harness.bounds_table_csv(reports)
    return harness.report_json(harness.bounds_table_dict(reports, args.k, args.eps))


def _cmd_figure1(args) -> str:
    if args.points < 1:
        raise ValidationError(f"points must be >= 1, got {args.points}")
    points = harness.emit_figure1(np.geomspace(1e-4, 0.5, args.points))
    if args.format == "csv":
        return harness.figure1_csv(points)
    return harness.report_json(harness.figure1_dict(points))


def _cmd_codegen(args) -> str:
    n = args.n if args.n is not None else harness.default_dimension(args.k)
    code = harness.fresh_codebook(n, args.k, args.seed)
    save_code(code, args.out)
    payload = {
        "config": {"n": n, "k": args.k, "seed": args.seed},
        "results": {"path": str(args.out), "file_bytes": Path(args.out).stat().st_size},
        "bounds": {},
        "checks": {},
    }
    return _render(payload, args.format)


def _cmd_verify(args) -> str:
    summary = harness.run_fourier_sweeps(functions_per_check=args.trials, seed=args.seed)
    payload = {
        "config": {
            "functions_per_check": summary["functions_per_check"],
            "seed": args.seed,
            "dimensions": summary["dimensions"],
            "epsilons": summary["epsilons"],
        },
        "results": {
            "equality_max_error": summary["equality_max_error"],
            "geometric_worst_margin": summary["geometric_worst_margin"],
            "indicator_worst_margin": summary["indicator_worst_margin"],
            "hyper_worst_margin": summary["hyper_worst_margin"],
        },
        "bounds": {},
        "checks": {"all_passed": summary["all_passed"]},
    }
    return _render(payload, args.format)


_COMMANDS = {
    "simulate": _cmd_simulate,
    "cover": _cmd_cover,
    "audit": _cmd_audit,
    "bounds": _cmd_bounds,
    "figure1": _cmd_figure1,
    "codegen": _cmd_codegen,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    out = getattr(args, "out", None)
    if out is not None and args.command != "codegen":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
