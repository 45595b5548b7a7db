#!/usr/bin/env python3
"""Writes the Iris dataset as CSV (4 feature columns + integer label column).

Tries scikit-learn first, then a direct download from the UCI repository.
Usage: python3 scripts/fetch_iris.py [output.csv]
"""
import sys


def from_sklearn():
    from sklearn.datasets import load_iris

    iris = load_iris()
    return [[float(v) for v in row] + [int(label)] for row, label in zip(iris.data, iris.target)]


def from_uci():
    import urllib.request

    url = "https://archive.ics.uci.edu/ml/machine-learning-databases/iris/iris.data"
    names = ["Iris-setosa", "Iris-versicolor", "Iris-virginica"]
    rows = []
    with urllib.request.urlopen(url, timeout=30) as response:
        for line in response.read().decode().splitlines():
            line = line.strip()
            if not line:
                continue
            *values, name = line.split(",")
            rows.append([float(v) for v in values] + [names.index(name)])
    return rows


def main():
    out_path = sys.argv[1] if len(sys.argv) > 1 else "iris.csv"
    try:
        rows = from_sklearn()
    except Exception:
        rows = from_uci()
    if len(rows) != 150:
        raise SystemExit(f"expected 150 rows, got {len(rows)}")
    with open(out_path, "w") as out:
        out.write("sepal_length,sepal_width,petal_length,petal_width,label\n")
        for row in rows:
            out.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    print(f"wrote {len(rows)} rows to {out_path}")


if __name__ == "__main__":
    main()
