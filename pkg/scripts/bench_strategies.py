"""Compare strategies on random formulas for each logic they apply to.

Output: one summary line per (logic, strategy) with verdict counts, total
nodes and wall time.
"""

import argparse
import time

from condcalc.calculus import LogicId
from condcalc.generate import modal_op, random_corpus
from condcalc.prover import StrategyError, prove, resolve_strategy
from condcalc.syntax import Sequent

STRATEGIES = ("naive", "marked", "marked-descendants", "dp")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--max-size", type=int, default=16)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    print(f"{'logic':10} {'strategy':20} {'prov':>5} {'unpr':>5} {'exc':>4} {'nodes':>9} {'sec':>6}")
    for logic in LogicId:
        formulas = random_corpus(args.seed, args.count, args.max_size, modal_op(logic))
        for strat in STRATEGIES:
            try:
                resolve_strategy(strat, logic)
            except StrategyError:
                continue
            memo: dict = {}
            counts = {"provable": 0, "unprovable": 0, "resource_exceeded": 0}
            nodes = 0
            t = time.perf_counter()
            for f in formulas:
                v = prove(Sequent.of(f), logic, strat, memo=memo)
                counts[v.status] += 1
                nodes += v.stats.nodes
            print(f"{logic.value:10} {strat:20} {counts['provable']:5} {counts['unprovable']:5} "
                  f"{counts['resource_exceeded']:4} {nodes:9} {time.perf_counter() - t:6.2f}")


if __name__ == "__main__":
    main()
