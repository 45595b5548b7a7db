#!/usr/bin/env python3
"""Writes the UCI Wheat Seeds dataset as CSV (7 feature columns + label).

Usage: python3 scripts/fetch_wheat.py [output.csv]
"""
import sys
import urllib.request

URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/00236/seeds_dataset.txt"


def main():
    out_path = sys.argv[1] if len(sys.argv) > 1 else "wheat.csv"
    rows = []
    with urllib.request.urlopen(URL, timeout=30) as response:
        for line in response.read().decode().splitlines():
            fields = line.split()
            if len(fields) != 8:
                continue
            *values, label = fields
            rows.append([float(v) for v in values] + [int(float(label)) - 1])
    if len(rows) != 210:
        raise SystemExit(f"expected 210 rows, got {len(rows)}")
    header = ["area", "perimeter", "compactness", "kernel_length", "kernel_width",
              "asymmetry", "groove_length", "label"]
    with open(out_path, "w") as out:
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    print(f"wrote {len(rows)} rows to {out_path}")


if __name__ == "__main__":
    main()
