"""Survey random nilpotent structures: how often each criterion holds.

Tallies (sGG, Delta^1 = 0, strong, weak) over seeded random structures and
checks that the strong lemma agrees with sGG and Delta^1 = 0 on every sample.

    python scripts/survey_random.py [count] [seed]
"""

import random
import sys
from collections import Counter

from ddbar.criteria import criteria_report
from ddbar.generate import random_nilpotent
from ddbar.structure import build_complex


def survey(count: int, seed: int) -> int:
    rng = random.Random(seed)
    tally = Counter()
    mismatches = 0
    for k in range(count):
        _, se = random_nilpotent(3 if k % 3 else 2, rng, abelian=k % 5 == 0)
        r = criteria_report(build_complex(se))
        sgg, d1 = bool(r.sgg.verdict), r.delta[1] == 0
        tally[(sgg, d1, r.strong.direct, r.weak.verdict)] += 1
        mismatches += r.strong.direct != (sgg and d1)
    print(f"{'sGG':>5} {'D1=0':>5} {'strong':>6} {'weak':>5}  count")
    for (sgg, d1, strong, weak), c in sorted(tally.items(), key=str):
        print(f"{sgg!s:>5} {d1!s:>5} {strong!s:>6} {weak!s:>5}  {c}")
    print(f"samples {count}, biconditional mismatches {mismatches}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 60
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    sys.exit(survey(count, seed))
