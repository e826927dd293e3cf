#!/usr/bin/env python3
"""Rank correlations, entropy/fidelity-rate peak offsets and half-max entropy times per table."""

import argparse
import json

from aqc_entangle.output import load_reference
from aqc_entangle.selftest import TABLE_BLOCKS
from aqc_entangle.trace import correlation_report, run_trace, runtime_table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid-points", type=int, default=20001)
    args = ap.parse_args()
    ref = load_reference()
    for alg, n in TABLE_BLOCKS:
        presets = list(ref["tables"][f"{alg}/{n}"]["unoptimized"])
        table = runtime_table(alg, n, presets, grid_points=args.grid_points)
        traces = {
            name: run_trace(prof.spec, table.eps, args.grid_points, profile=prof)
            for name, prof in table.profiles.items()
        }
        print(f"== {alg} n={n}")
        print(json.dumps(correlation_report(table, traces).to_dict(), indent=2))


if __name__ == "__main__":
    main()
