"""Command-line entry point: ``aqc run | runtimes | closest-product | selftest``."""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algorithms import COLORS, Algorithm, make_spec, n_qubits_of
from .entanglement import closest_product
from .numerics import NumericalError
from .output import SCHEMA_VERSION, dumps, reference_for, svg_polylines, trace_to_csv, within_tolerance, write_text
from .schedule import DEFAULT_EPS, DEFAULT_GRID, MIN_GRID, printed_trun_runtime
from .selftest import format_report, run_selftest
from .trace import run_trace, runtime_table

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
NORM_WARN_TOL = 1e-6
REFERENCE_EPS = 0.01


class ConfigError(ValueError):
    pass


def parse_amplitudes(text: str) -> list[Fraction]:
    """Comma-separated integers, decimals or simple fractions such as ``3/2``."""
    try:
        amps = [Fraction(tok.strip()) for tok in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse amplitude list {text!r}: {exc}") from None
    if not amps:
        raise ConfigError("empty amplitude list")
    return amps


def normalize_amplitudes(amps: list[Fraction], warn=None) -> np.ndarray:
    norm2 = sum(a * a for a in amps)
    if norm2 == 0:
        raise ConfigError("amplitude list has zero norm")
    norm = math.sqrt(norm2)
    if abs(norm - 1.0) > NORM_WARN_TOL and warn is not None:
        warn(f"warning: amplitudes had norm {norm:.6g}; normalized on ingest")
    return np.array([float(a) / norm for a in amps])


@dataclass
class RunConfig:
    algorithm: Algorithm
    n_qubits: int
    initial: str | np.ndarray
    alpha: int = 0
    marked_index: int = 0
    epsilon: float = DEFAULT_EPS
    grid_points: int = DEFAULT_GRID
    output: str | None = None
    output_format: str = "csv"
    svg: str | None = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")
        if self.grid_points < MIN_GRID:
            raise ConfigError(f"grid-points must be >= {MIN_GRID}")

    def spec(self):
        return make_spec(self.algorithm, self.n_qubits, self.initial, self.alpha, self.marked_index)


def _initial_arg(text: str, n_qubits: int, warn):
    if text in COLORS:
        return text
    amps = normalize_amplitudes(parse_amplitudes(text), warn)
    if amps.size != 2**n_qubits:
        raise ConfigError(f"--initial has {amps.size} amplitudes, expected {2**n_qubits}")
    return amps


def _emit(text: str, path: str | None, stdout) -> None:
    if path:
        write_text(path, text)
    else:
        stdout.write(text)


def cmd_run(args, stdout, stderr) -> int:
    cfg = RunConfig(
        algorithm=Algorithm(args.algorithm),
        n_qubits=args.qubits,
        initial=_initial_arg(args.initial, args.qubits, lambda m: print(m, file=stderr)),
        alpha=args.alpha,
        marked_index=args.marked_index,
        epsilon=args.epsilon,
        grid_points=args.grid_points,
        output=args.output,
        output_format=args.format,
        svg=args.svg,
    )
    trace = run_trace(cfg.spec(), cfg.epsilon, cfg.grid_points)
    if cfg.output_format == "csv":
        text = trace_to_csv(trace.header, trace.as_array())
    else:
        text = dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "algorithm": cfg.algorithm.value,
                "n_qubits": cfg.n_qubits,
                "epsilon": cfg.epsilon,
                "columns": {k: v.tolist() for k, v in trace.columns.items()},
            }
        )
    _emit(text, cfg.output, stdout)
    if cfg.svg:
        cols = ["entropy_max", "F", "d_unnorm", "gap"]
        write_text(cfg.svg, svg_polylines(trace["s"], {c: trace[c] for c in cols}))
    return EXIT_OK


def cmd_runtimes(args, stdout, stderr) -> int:
    if not args.epsilon > 0:
        raise ConfigError("epsilon must be positive")
    if args.grid_points < MIN_GRID:
        raise ConfigError(f"grid-points must be >= {MIN_GRID}")
    presets = [p.strip() for p in args.presets.split(",") if p.strip()] if args.presets else list(COLORS)
    unknown = [p for p in presets if p not in COLORS]
    if unknown:
        raise ConfigError(f"unknown presets {unknown}")
    algorithm = Algorithm(args.algorithm)
    if algorithm is Algorithm.CONSTANT_TIME_DJ and not args.presets:
        presets = ["cyan", "blue", "yellow"]
    table = runtime_table(algorithm, args.qubits, presets, args.epsilon, args.alpha, args.grid_points)
    printed = {}
    if args.printed_trun:
        printed = {name: printed_trun_runtime(prof, args.epsilon) for name, prof in table.profiles.items()}

    record = table.to_dict()
    if printed:
        for row in record["rows"]:
            row["t_printed_integrand"] = printed[row["preset"]]
    if args.json:
        stdout.write(dumps(record))
    else:
        stdout.write(f"{algorithm.value} n={args.qubits} alpha={args.alpha} eps={args.epsilon:g}\n")
        stdout.write(f"{'preset':<8} {'T_unopt':>12} {'T_opt':>12} {'F0':>10} {'G0':>10} {'S_max':>8}\n")
        for r in table.rows:
            stdout.write(
                f"{r.preset:<8} {r.t_unoptimized:12.4f} {r.t_optimized:12.4f} "
                f"{r.initial_f:10.6f} {r.initial_g:10.6f} {r.max_entropy:8.5f}\n"
            )

    if not args.check:
        return EXIT_OK
    ref = reference_for(algorithm.value, args.qubits)
    if abs(args.epsilon - REFERENCE_EPS) > 1e-15 or ref is None or args.alpha != 0:
        print("notice: no reference values for this configuration; check skipped", file=stderr)
        return EXIT_OK
    bad = []
    for r in table.rows:
        for key, value in (("unoptimized", r.t_unoptimized), ("optimized", printed.get(r.preset, r.t_optimized))):
            expected = ref[key].get(r.preset)
            if expected is not None and not within_tolerance(value, expected):
                bad.append(f"{r.preset} {key}: {value:.4g} vs {expected}")
    for line in bad:
        print(f"MISMATCH {line}", file=stderr)
    print(f"check: {'FAIL' if bad else 'PASS'} ({len(bad)} mismatches)", file=stderr)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_closest_product(args, stdout, stderr) -> int:
    amps = normalize_amplitudes(parse_amplitudes(args.amps), lambda m: print(m, file=stderr))
    try:
        n = n_qubits_of(amps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if n < 2:
        raise ConfigError("closest-product needs at least 4 amplitudes")
    res = closest_product(amps)
    stdout.write(dumps({"schema_version": SCHEMA_VERSION, "n_qubits": n, **res.to_dict()}))
    return EXIT_OK


def cmd_selftest(args, stdout, stderr) -> int:
    checks = run_selftest(fast=args.fast, printed_trun=args.printed_trun)
    stdout.write(format_report(checks))
    return EXIT_FAIL if any(c.failed for c in checks) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aqc", description="Adiabatic schedules and ground-state entanglement.")
    sub = p.add_subparsers(dest="command", required=True)

    def problem_args(sp):
        sp.add_argument("--algorithm", choices=[a.value for a in Algorithm], required=True)
        sp.add_argument("--qubits", type=int, required=True)
        sp.add_argument("--alpha", type=int, choices=(0, 1), default=0)
        sp.add_argument("--epsilon", type=float, default=DEFAULT_EPS)
        sp.add_argument("--grid-points", type=int, default=DEFAULT_GRID)

    run = sub.add_parser("run", help="emit the full diagnostic trace")
    problem_args(run)
    run.add_argument("--initial", default="green", help="preset color or amplitude list like '1,3/2,1,3/2'")
    run.add_argument("--marked-index", type=int, default=0)
    run.add_argument("--output", "-o")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--svg", help="also write an SVG plot of selected columns")
    run.set_defaults(func=cmd_run)

    rt = sub.add_parser("runtimes", help="runtime table over presets")
    problem_args(rt)
    rt.add_argument("--presets", help="comma-separated preset colors (default: all)")
    rt.add_argument("--check", action="store_true", help="compare against the embedded reference values")
    rt.add_argument("--json", action="store_true")
    rt.add_argument("--printed-trun", action="store_true", help="also evaluate the reciprocal integrand")
    rt.set_defaults(func=cmd_runtimes)

    cp = sub.add_parser("closest-product", help="closest product state of an amplitude list")
    cp.add_argument("--amps", required=True)
    cp.set_defaults(func=cmd_closest_product)

    st = sub.add_parser("selftest", help="run the built-in verification suite")
    st.add_argument("--fast", action="store_true", help="skip the slow grid-oracle comparison")
    st.add_argument("--printed-trun", action="store_true")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return args.func(args, stdout, stderr)
    except BrokenPipeError:
        return EXIT_OK
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
