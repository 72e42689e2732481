#!/usr/bin/env python3
"""Regenerate the committed midpoint-variant adjudication fixture.

Runs the kernel-identity residual table over the built-in adjudication
corpus for both midpoint variants and writes the winner plus the full
residual table to src/simpsonlab/data/lemma_adjudication.json. The test
suite re-derives the same record and compares against the committed one,
so this script only needs re-running if the adjudication corpus or the
oracle defaults change.
"""

import json
import pathlib
import sys

from simpsonlab.kernel import adjudication_record

OUT = (
    pathlib.Path(__file__).resolve().parents[1]
    / "src" / "simpsonlab" / "data" / "lemma_adjudication.json"
)


def main() -> int:
    record = adjudication_record()
    OUT.write_text(json.dumps(record, sort_keys=True, indent=2) + "\n",
                   encoding="utf-8")
    print(f"winner: {record['winner']}")
    worst = {}
    for row in record["residuals"]:
        worst[row["variant"]] = max(worst.get(row["variant"], 0.0),
                                    row["residual"])
    for variant, value in sorted(worst.items()):
        print(f"max residual {variant}: {value:.3e}")
    print(f"wrote {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
