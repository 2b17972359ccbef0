"""Command-line front end.

Exit codes: 0 success, 1 numerical or internal failure, 2 invalid input.

Values starting with '-' must be attached with '=' so argparse does not read
them as flags, e.g. ``--b=-1,0`` or ``--range=-3:3``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from contextlib import contextmanager
from dataclasses import replace

import numpy as np

from . import __version__
from .adjrep import build_adjoint
from .analysis import analyze, default_symmetries, symmetry_verdict, to_jsonable
from .dynamics import evolve
from .errors import QuadhamError, ValidationError
from .modelfile import ModelFile, ModelFileError, load_model, parse_model
from .models import BUILTINS, hamiltonian
from .opcore import basis_labels
from .reproduce import format_table, run_suite
from .spectra import eigen
from .sweep import (
    AXES,
    EpFindConfig,
    SweepConfig,
    ep_find,
    run_sweep,
    sweep_json,
    write_sweep_csv,
)

EXIT_OK, EXIT_FAILURE, EXIT_INVALID = 0, 1, 2


class UsageError(ValidationError):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"--b expects 're' or 're,im', got {text!r}")


def parse_range(text: str) -> tuple:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--range expects 'lo:hi', got {text!r}") from None
    return lo, hi


def parse_times(text: str) -> np.ndarray:
    try:
        t0, t1, n = text.split(":")
        t0, t1, n = float(t0), float(t1), int(n)
    except ValueError:
        raise UsageError(f"--times expects 't0:t1:n', got {text!r}") from None
    if n < 1:
        raise UsageError("--times needs n >= 1")
    return np.linspace(t0, t1, n)


def resolve_model(args) -> ModelFile:
    if args.model and args.builtin:
        raise UsageError("give either --model or --builtin, not both")
    if args.model:
        model = load_model(args.model)
    elif args.builtin:
        model = parse_model({"model": args.builtin})
    else:
        raise UsageError("a model is required: --model FILE or --builtin NAME")
    spec = model.spec
    if args.a is not None:
        spec = replace(spec, a=args.a)
    if args.b is not None:
        spec = replace(spec, b=parse_complex(args.b))
    return ModelFile(spec, model.symmetries)


@contextmanager
def output_stream(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def emit_json(obj, path) -> None:
    with output_stream(path) as fh:
        json.dump(to_jsonable(obj), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> int:
    emit_json(analyze(resolve_model(args)), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    model = resolve_model(args)
    lo, hi = parse_range(args.range)
    config = SweepConfig(model.spec, args.param, lo, hi, args.steps)
    rows = run_sweep(config, workers=args.workers)
    if args.format == "json":
        emit_json(sweep_json(rows), args.out)
    else:
        with output_stream(args.out) as fh:
            write_sweep_csv(rows, model.spec.K, fh)
    return EXIT_OK


def cmd_ep_find(args) -> int:
    model = resolve_model(args)
    lo, hi = parse_range(args.range)
    res = ep_find(EpFindConfig(model.spec, args.param, lo, hi, args.tol))
    emit_json(
        {
            "model": model.spec.name,
            "parameter": args.param,
            "value": res.value,
            "bracket": list(res.bracket),
            "iterations": res.iterations,
            "colliding_pair": [[z.real, z.imag] for z in res.colliding_pair],
            "defect": {"algebraic": res.algebraic, "geometric": res.geometric},
            "eigenvalues": [[z.real, z.imag] for z in res.eigenvalues],
        },
        args.out,
    )
    return EXIT_OK


def cmd_symmetry_check(args) -> int:
    model = resolve_model(args)
    rep = build_adjoint(hamiltonian(model.spec))
    spectrum = eigen(rep)
    syms = model.symmetries or default_symmetries(model.spec.K)
    emit_json([symmetry_verdict(rep, s, spectrum) for s in syms], args.out)
    return EXIT_OK


def cmd_evolve(args) -> int:
    model = resolve_model(args)
    times = parse_times(args.times)
    rep = build_adjoint(hamiltonian(model.spec))
    samples = evolve(rep, times)
    labels = basis_labels(model.spec.K)
    if args.format == "json":
        emit_json(
            {
                "basis": labels,
                "samples": [
                    {"t": s.t, "coefficients": [[[z.real, z.imag] for z in row] for row in s.coefficients]}
                    for s in samples
                ],
            },
            args.out,
        )
        return EXIT_OK
    # column re_<O>_<B> holds Re of the coefficient of B in O(t)
    pairs = [(o, b) for o in labels for b in labels]
    header = ["t"] + [f"re_{o}_{b}" for o, b in pairs] + [f"im_{o}_{b}" for o, b in pairs]
    with output_stream(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for s in samples:
            flat = s.coefficients.ravel()
            writer.writerow(
                [format(s.t, ".17g")]
                + [format(v, ".17g") for v in flat.real]
                + [format(v, ".17g") for v in flat.imag]
            )
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite()
    with output_stream(args.out) as fh:
        fh.write(format_table(results) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadham",
        description="Spectral analysis of quadratic (possibly non-Hermitian) Hamiltonians.",
        epilog="Attach negative values with '=': --b=-1,0  --range=-3:3",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(p):
        p.add_argument("--model", metavar="FILE", help="JSON model file")
        p.add_argument("--builtin", choices=BUILTINS, help="builtin model name")
        p.add_argument("--a", type=float, help="override parameter a")
        p.add_argument("--b", metavar="RE[,IM]", help="override parameter b")
        p.add_argument("--out", metavar="PATH", help="output file (default stdout)")

    p = sub.add_parser("analyze", help="full JSON report for one model")
    model_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="eigenvalues along one parameter axis")
    model_args(p)
    p.add_argument("--param", choices=AXES, required=True)
    p.add_argument("--range", required=True, metavar="LO:HI")
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1, help="processes for the grid (default 1)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ep-find", help="bisect the real/complex boundary")
    model_args(p)
    p.add_argument("--param", choices=AXES, required=True)
    p.add_argument("--range", required=True, metavar="LO:HI")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_ep_find)

    p = sub.add_parser("symmetry-check", help="check the model's (or the builtin) symmetries")
    model_args(p)
    p.set_defaults(func=cmd_symmetry_check)

    p = sub.add_parser("evolve", help="Heisenberg-picture coefficients of x and p over time")
    model_args(p)
    p.add_argument("--times", required=True, metavar="T0:T1:N")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("verify", help="run the reproduction suite")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ModelFileError) as exc:
        print(f"quadham: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except QuadhamError as exc:
        print(f"quadham: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_FAILURE
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to the exit-code contract
        print(f"quadham: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
