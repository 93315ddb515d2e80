"""Node counts of dp and naive search on right-nested CEM formulas.

Prints a CSV with one row per (depth, width, strategy).  Naive search runs
with the same node budget as dp, so its rows show where it gives up.
"""

import argparse
import csv
import sys
import time

from condcalc.generate import nested_cem
from condcalc.prover import SearchLimits, prove
from condcalc.syntax import Sequent


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depths", type=int, nargs="+", default=[3, 6, 9, 12, 15])
    ap.add_argument("--widths", type=int, nargs="+", default=[3, 6, 9])
    ap.add_argument("--max-nodes", type=int, default=10**6)
    ap.add_argument("--skip-naive", action="store_true")
    args = ap.parse_args()

    limits = SearchLimits(max_nodes=args.max_nodes, max_depth=10**4)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["depth", "width", "strategy", "verdict", "nodes", "seconds"])
    for width in args.widths:
        for depth in args.depths:
            f = Sequent.of(nested_cem(depth, width))
            for strat in ("dp",) if args.skip_naive else ("dp", "naive"):
                t = time.perf_counter()
                v = prove(f, "ckcem", strat, limits)
                w.writerow([depth, width, strat, v.status, v.stats.nodes,
                            f"{time.perf_counter() - t:.3f}"])
                sys.stdout.flush()


if __name__ == "__main__":
    main()
