#!/usr/bin/env python3
"""Generate fictitious bindings for one simulated school allocation decision.

Prints a bindings CSV (template,instance,variable,value) to stdout. The same
seed always yields the same decision.

Usage: generate.py [--seed N] [--decision N]
"""

import argparse
import random

CRITERION_TYPES = ["sa:Distance", "sa:SiblingLink", "sa:PreferenceRank"]
AUTHORITIES = ["sa:authorities/camden", "sa:authorities/hackney"]
SCHOOLS = ["Hillside Primary", "Riverside Academy", "Oakwood School"]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--decision", type=int, default=1)
    args = parser.parse_args()
    rng = random.Random(args.seed)

    d = args.decision
    rows = [("template", "instance", "variable", "value")]

    criterion_ids = rng.sample(range(1, 60), rng.randint(2, 3))
    authority = rng.choice(AUTHORITIES)
    for i, criterion in enumerate(criterion_ids, start=1):
        rows.append(("criterion-attribution", str(i), "criterion",
                     f"sa:criteria/{criterion}"))
        rows.append(("criterion-attribution", str(i), "ctype",
                     rng.choice(CRITERION_TYPES)))
        rows.append(("criterion-attribution", str(i), "authority", authority))

    rows.append(("ranking", "1", "ranking", f"sa:rankings/{d}"))
    rows.append(("ranking", "1", "rank", f"sa:ranks/{d}"))
    rows.append(("ranking", "1", "ranker", "sa:systems/ranker1"))
    for i, criterion in enumerate(criterion_ids, start=1):
        rows.append(("rank-input", str(i), "ranking", f"sa:rankings/{d}"))
        rows.append(("rank-input", str(i), "rank", f"sa:ranks/{d}"))
        rows.append(("rank-input", str(i), "criterion",
                     f"sa:criteria/{criterion}"))

    rows.append(("allocation", "1", "allocation", f"sa:allocations/{d}"))
    rows.append(("allocation", "1", "allocating", f"sa:allocatings/{d}"))
    rows.append(("allocation", "1", "rank", f"sa:ranks/{d}"))
    rows.append(("allocation", "1", "school", rng.choice(SCHOOLS)))
    rows.append(("allocation", "1", "authority", authority))

    for row in rows:
        print(",".join(row))


if __name__ == "__main__":
    main()
