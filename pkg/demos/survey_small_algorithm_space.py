"""Sweep every small algorithm and mechanize the color lower bounds.

Two colors never suffice: all 36 two-color algorithms receive a divergence
certificate from some same-color start under synchronous rounds with rigid
moves.  Among the 729 three-color algorithms, any one missing a 1/2, 1, or 0
label on the orbit of some start color is defeated by the matching canned
adversary; and under the atomic asynchronous class, none of the 729 certifies
rendezvous from all same-color starts.
"""

from collections import Counter
from fractions import Fraction

from lumirend import MovementModel, SchedulerClass
from lumirend.algorithms import enumerate_graphs
from lumirend.verify import (
    Diverges,
    Rendezvous,
    SearchConfig,
    missing_label_adversary,
    search_one,
    structural_check,
)

F = Fraction
LABELS = (F(0), F(1, 2), F(1))
RIGID = MovementModel.rigid()


def main():
    print("two-color sweep under synchronous rounds:")
    cfg = SearchConfig(horizon=40, scheduler=SchedulerClass.ssync(), movement=RIGID)
    defeated = 0
    for g in enumerate_graphs(2, LABELS):
        if any(isinstance(search_one(g, cfg, (c, c), 1), Diverges) for c in g.colors):
            defeated += 1
    print(f"  {defeated}/36 defeated from some same-color start")

    print("\nmissing-label adversaries over the three-color space:")
    wins = Counter()
    for g in enumerate_graphs(3, LABELS):
        for start, missing in structural_check(g).per_start_missing.items():
            for lam in missing:
                _s, _t, cert = missing_label_adversary(g, start, lam, horizon=40)
                if cert is not None:
                    wins[lam] += 1
    for lam, n in sorted(wins.items()):
        print(f"  label {lam} absent: {n} defeats")

    print("\nthree-color sweep under the atomic asynchronous class:")
    cfg = SearchConfig(
        horizon=40,
        scheduler=SchedulerClass.asynchronous(lc_atomic=True, move_atomic=True),
        movement=RIGID,
    )
    achievers = survivors = 0
    for g in enumerate_graphs(3, LABELS):
        verdicts = [search_one(g, cfg, (c, c), 1) for c in g.colors]
        if all(isinstance(v, Rendezvous) for v in verdicts):
            achievers += 1
        elif all(not isinstance(v, Diverges) for v in verdicts):
            survivors += 1
    print(f"  algorithms certifying all same-color starts: {achievers}")
    print(f"  algorithms with no divergence found either: {survivors}")


if __name__ == "__main__":
    main()
