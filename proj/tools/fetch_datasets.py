#!/usr/bin/env python3
"""Write the wine, breast-cancer and digits CSV snapshots used by the benchmark.

The snapshots are checked into data/; this script only needs to be rerun to
regenerate them. Output format: header f1,...,fd,label with the original
class identifiers in the label column.
"""
import argparse
import csv
import pathlib

from sklearn import datasets


def write(path, X, y):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"f{i + 1}" for i in range(X.shape[1])] + ["label"])
        for row, label in zip(X, y):
            w.writerow([repr(float(v)) for v in row] + [int(label)])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, loader in [("wine", datasets.load_wine),
                         ("breast_cancer", datasets.load_breast_cancer),
                         ("digits", datasets.load_digits)]:
        d = loader()
        write(out / f"{name}.csv", d.data, d.target)
        print(f"{name}: {d.data.shape[0]} rows, {d.data.shape[1]} features")


if __name__ == "__main__":
    main()
