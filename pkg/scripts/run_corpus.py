"""Verdicts of every strategy on the exhaustive and random corpora.

Writes one CSV row per (formula, logic, strategy) and prints a timing
summary plus any disagreement between strategies on the same logic.
"""

import argparse
import csv
import sys
import time

from condcalc.calculus import LogicId
from condcalc.generate import exhaustive_corpus, random_corpus
from condcalc.prover import prove
from condcalc.syntax import Sequent, print_formula

PAIRS = [(lg, "naive") for lg in LogicId if not lg.is_modal]
PAIRS += [(lg, s) for lg in LogicId if lg.has_mp for s in ("marked", "marked-descendants")]
PAIRS += [(LogicId.CKCEM, "dp"), (LogicId.CKCEMID, "dp")]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=9)
    ap.add_argument("--random", type=int, default=500)
    ap.add_argument("--random-size", type=int, default=20)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    formulas = exhaustive_corpus(args.max_size) + random_corpus(args.seed, args.random,
                                                                args.random_size)
    print(f"{len(formulas)} formulas", flush=True)
    verdicts: dict = {}
    writer = csv.writer(open(args.csv, "w", newline="")) if args.csv else None
    total = time.perf_counter()
    for logic, strat in PAIRS:
        memo: dict = {}
        t = time.perf_counter()
        out = [prove(Sequent.of(f), logic, strat, memo=memo).status for f in formulas]
        verdicts[logic, strat] = out
        print(f"{logic.value:10} {strat:20} {time.perf_counter() - t:7.1f}s "
              f"provable={out.count('provable')} exceeded={out.count('resource_exceeded')}",
              flush=True)
        if writer:
            writer.writerows((print_formula(f), logic.value, strat, v) for f, v in zip(formulas, out))
    print(f"total {time.perf_counter() - total:.1f}s")
    bad = 0
    for (logic, strat), out in verdicts.items():
        if strat != "naive":
            ref = verdicts[logic, "naive"]
            diff = [i for i, (x, y) in enumerate(zip(out, ref)) if x != y]
            bad += len(diff)
            for i in diff[:5]:
                print(f"disagreement {logic.value} {strat}: {print_formula(formulas[i])}")
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
