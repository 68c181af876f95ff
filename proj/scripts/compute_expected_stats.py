#!/usr/bin/env python3
"""Independent statistics counter for a name dataset CSV.

Counts lengths and character frequencies directly from the file, without
going through the toolkit, and emits the same JSON schema the `stats`
command produces. The committed data/sample_expected_stats.json is the
output of this script over data/sample_names.csv and is what the offline
acceptance check compares against.

Counting rules (mirrors the documented stats contract):
  * lengths are Unicode code point counts of the whole field, ZWNJ and
    internal spaces included;
  * character frequencies count every code point except spaces and ZWNJ;
  * frequency lists sort by descending count, ties by ascending code point.

Usage: compute_expected_stats.py [dataset.csv] > expected.json
"""

import csv
import json
import sys
from collections import Counter
from pathlib import Path

ZWNJ = "‌"


def char_list(counter: Counter):
    items = sorted(counter.items(), key=lambda kv: (-kv[1], ord(kv[0])))
    return [[ch, count] for ch, count in items]


def main():
    root = Path(__file__).resolve().parent.parent
    path = Path(sys.argv[1]) if len(sys.argv) > 1 else root / "data" / "sample_names.csv"

    rows = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols = {name.strip().lower(): i for i, name in enumerate(header)}
        ip = cols.get("persian", 0)
        il = cols.get("latin", cols.get("english", 1))
        ig = cols.get("gender", 2)
        for row in reader:
            if not row:
                continue
            rows.append((row[ip], row[il], row[ig].strip().lower()))

    total = len(rows)
    male_total = sum(1 for r in rows if r[2] in ("male", "m"))

    persian_hist, latin_hist = Counter(), Counter()
    chars = {"male": {"persian": Counter(), "latin": Counter()},
             "female": {"persian": Counter(), "latin": Counter()}}
    persian_len_sum = latin_len_sum = 0

    for persian, latin, gender in rows:
        g = "male" if gender in ("male", "m") else "female"
        persian_hist[len(persian)] += 1
        latin_hist[len(latin)] += 1
        persian_len_sum += len(persian)
        latin_len_sum += len(latin)
        for ch in persian:
            if ch != " " and ch != ZWNJ:
                chars[g]["persian"][ch] += 1
        for ch in latin:
            if ch != " " and ch != ZWNJ:
                chars[g]["latin"][ch] += 1

    doc = {
        "total": total,
        "male_total": male_total,
        "male_fraction": male_total / total,
        "female_fraction": 1.0 - male_total / total,
        "persian_length_histogram": {str(k): v for k, v in sorted(persian_hist.items())},
        "latin_length_histogram": {str(k): v for k, v in sorted(latin_hist.items())},
        "persian_length_mean": persian_len_sum / total,
        "latin_length_mean": latin_len_sum / total,
        "char_frequency": {
            "male": {"persian": char_list(chars["male"]["persian"]),
                     "latin": char_list(chars["male"]["latin"])},
            "female": {"persian": char_list(chars["female"]["persian"]),
                       "latin": char_list(chars["female"]["latin"])},
        },
    }
    json.dump(doc, sys.stdout, ensure_ascii=False, indent=1, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
