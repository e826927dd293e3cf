#!/usr/bin/env python3
"""Recompute every reference runtime table and print computed vs reference values."""

import argparse
import sys
import time

from aqc_entangle.output import load_reference, within_tolerance
from aqc_entangle.selftest import TABLE_BLOCKS
from aqc_entangle.trace import runtime_table


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid-points", type=int, default=20001)
    args = ap.parse_args()

    ref = load_reference()
    misses = 0
    for alg, n in TABLE_BLOCKS:
        expected = ref["tables"][f"{alg}/{n}"]
        t0 = time.perf_counter()
        table = runtime_table(alg, n, list(expected["unoptimized"]), ref["epsilon"], grid_points=args.grid_points)
        print(f"== {alg} n={n}  ({time.perf_counter() - t0:.1f} s)")
        for r in table.rows:
            cells = []
            for key, val in (("unoptimized", r.t_unoptimized), ("optimized", r.t_optimized)):
                want = expected[key][r.preset]
                ok = within_tolerance(val, want, ref["rel_tol"], ref["abs_tol"])
                misses += not ok
                cells.append(f"{key[:5]} {val:9.2f} / {want:<5} {'ok' if ok else 'MISS'}")
            print(f"  {r.preset:<8} " + "   ".join(cells))
    print(f"{misses} mismatches")
    return 1 if misses else 0


if __name__ == "__main__":
    sys.exit(main())
