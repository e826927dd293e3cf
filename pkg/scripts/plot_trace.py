#!/usr/bin/env python3
"""Write an SVG of entropy, fidelity distance and geometric measure against optimized time."""

import argparse

from aqc_entangle.algorithms import make_spec
from aqc_entangle.output import svg_polylines, write_text
from aqc_entangle.trace import run_trace


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--algorithm", default="search", choices=("search", "dj", "ctdj"))
    ap.add_argument("--qubits", type=int, default=2)
    ap.add_argument("--initial", default="green")
    ap.add_argument("--grid-points", type=int, default=20001)
    ap.add_argument("--x", default="t_opt", choices=("t_opt", "s"))
    ap.add_argument("-o", "--output", default="trace.svg")
    args = ap.parse_args()

    tr = run_trace(make_spec(args.algorithm, args.qubits, args.initial), grid_points=args.grid_points)
    series = {k: tr[k] for k in ("entropy_max", "F", "d_unnorm", "dF_ds")}
    write_text(args.output, svg_polylines(tr[args.x], series))
    print(f"wrote {args.output} ({len(tr)} rows, T_opt = {tr['t_opt'][-1]:.2f})")


if __name__ == "__main__":
    main()
