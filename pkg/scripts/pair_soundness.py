#!/usr/bin/env python3
"""Run random scripts under every non-conflicting two-subtype plan.

Singleton plans are always sound.  Two-subtype plans can break in three
ways, all visible in the table this prints:

* a subtype skipped as redundant is not actually implied by the other
  (Euclidean does not imply symmetric; a null variant does not imply what
  its base implies);
* a tuple-generating subtype adds rows that a rejecting subtype forbids;
* the pair is contradictory but absent from the conflict table.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from helpers import random_run  # noqa: E402

from hbfp import Decision, Subtype, holds_all, plan  # noqa: E402


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=150)
    ap.add_argument("--steps", type=int, default=25)
    ap.add_argument("--nodes", type=int, default=5)
    args = ap.parse_args()

    broken = 0
    total = 0
    for a, b in itertools.combinations(Subtype, 2):
        p = plan({a, b})
        if p.has_conflicts:
            continue
        total += 1
        failures = 0
        witness = None
        for i in range(args.runs):
            state = random_run(random.Random(f"{a}-{b}-{i}"), p, args.steps, args.nodes)
            bad = [v for v in holds_all(state, {a, b}) if not v.holds]
            if bad:
                failures += 1
                witness = witness or bad[0].render()
        if failures:
            broken += 1
            skipped = [str(e.subtype) for e in p.entries if e.decision is Decision.REDUNDANT]
            note = f" skipped={','.join(skipped)}" if skipped else ""
            print(f"{a}+{b}: {failures}/{args.runs} runs violate{note}; first: {witness}")
    print(f"{broken} of {total} non-conflicting pairs admit violations")


if __name__ == "__main__":
    main()
