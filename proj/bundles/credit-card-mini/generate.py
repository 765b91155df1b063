#!/usr/bin/env python3
"""Generate fictitious bindings for one simulated credit card decision.

Prints a bindings CSV (template,instance,variable,value) to stdout. The same
seed always yields the same decision.

Usage: generate.py [--seed N] [--decision N]
"""

import argparse
import random

RECORD_TYPES = ["cs:Salary", "cs:LatePayment", "cs:Address"]
AGENCIES = ["cs:agencies/cra1", "cs:agencies/cra2"]
OUTCOMES = ["approved", "rejected"]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--decision", type=int, default=1)
    args = parser.parse_args()
    rng = random.Random(args.seed)

    d = args.decision
    rows = [("template", "instance", "variable", "value")]

    record_ids = rng.sample(range(900, 1000), rng.randint(2, 4))
    agency = rng.choice(AGENCIES)
    for i, record in enumerate(record_ids, start=1):
        rows.append(("record-attribution", str(i), "record",
                     f"cs:records/{record}"))
        rows.append(("record-attribution", str(i), "rectype",
                     rng.choice(RECORD_TYPES)))
        rows.append(("record-attribution", str(i), "provider", agency))

    if rng.random() < 0.5:
        rows.append(("electoral-attribution", "1", "record",
                     f"cs:records/{rng.randint(1000, 1099)}"))
        rows.append(("electoral-attribution", "1", "provider", agency))

    rows.append(("scoring", "1", "scoring", f"cs:scorings/{d}"))
    rows.append(("scoring", "1", "score", f"cs:scores/{d}"))
    rows.append(("scoring", "1", "scorer", "cs:systems/scorer1"))
    for i, record in enumerate(record_ids, start=1):
        rows.append(("score-input", str(i), "scoring", f"cs:scorings/{d}"))
        rows.append(("score-input", str(i), "score", f"cs:scores/{d}"))
        rows.append(("score-input", str(i), "record", f"cs:records/{record}"))

    rows.append(("decision", "1", "decision", f"cs:decisions/{d}"))
    rows.append(("decision", "1", "deciding", f"cs:decidings/{d}"))
    rows.append(("decision", "1", "score", f"cs:scores/{d}"))
    rows.append(("decision", "1", "outcome", rng.choice(OUTCOMES)))
    rows.append(("decision", "1", "bank", "cs:agents/bank1"))

    for row in rows:
        print(",".join(row))


if __name__ == "__main__":
    main()
