#!/usr/bin/env python3
# Copyright 2026 The pmallows Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the bundled synthetic questionnaire dataset.

The data are invented. Only the item list, the prior stage order and the
per-item response counts follow the svPPA well-being questionnaire.
"""

import argparse
import csv
import json
import random
from pathlib import Path

# (label, prior stage, respondents who answered)
ITEMS = [
    ("Changes to sleeping patterns, e.g. napping", 1, 23),
    ("Gluttonous", 2, 19),
    ("Bodily complaints with no apparent cause", 2, 17),
    ("Increased sensitivity to sound / tinnitus", 2, 13),
    ("More 'rigid' / obsessional", 2, 18),
    ("Walking more slowly", 3, 16),
    ("Needs help dressing", 3, 18),
    ("Difficulty swallowing", 4, 11),
]
RESPONDENTS = 30
STAGES = 4
OFFSET = 2


def build(seed):
    rng = random.Random(seed)
    ids = [f"s{m + 1:02d}" for m in range(RESPONDENTS)]
    progress = {i: rng.random() for i in ids}
    rows = {i: {} for i in ids}
    for label, prior, count in ITEMS:
        # Later symptoms are reported mostly by respondents further along.
        weight = (prior - 1) / (STAGES - 1)
        score = {i: weight * progress[i] + (1 - weight) * rng.random() for i in ids}
        chosen = sorted(ids, key=lambda i: -score[i])[:count]
        for i in chosen:
            stage = prior + rng.choice([-1, 0, 0, 0, 1])
            rows[i][label] = min(STAGES, max(1, stage))
    for i in ids:
        if not rows[i]:
            raise SystemExit(f"seed {seed} leaves {i} without answers")
    return ids, rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20)
    parser.add_argument("--out", type=Path, default=Path("data/ppa_shaped_synthetic"))
    args = parser.parse_args()

    ids, rows = build(args.seed)
    labels = [label for label, _, _ in ITEMS]
    with open(args.out.with_suffix(".csv"), "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["respondent_id", "item", "stage"])
        for i in ids:
            for label in labels:
                if label in rows[i]:
                    writer.writerow([i, label, rows[i][label] - 1 + OFFSET])
    sidecar = {
        "items": labels,
        "l": STAGES,
        "stage_label_offset": OFFSET,
        "provenance": "SYNTHETIC. Invented responses shaped like the svPPA "
        "well-being questionnaire (8 symptoms, 30 respondents, matching "
        f"per-item response counts). Generated by tools/make_ppa_synthetic.py --seed {args.seed}.",
    }
    args.out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")
    with open(args.out.parent / "ppa_prior_center.csv", "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["item", "stage"])
        for label, prior, _ in ITEMS:
            writer.writerow([label, prior - 1 + OFFSET])


if __name__ == "__main__":
    main()
