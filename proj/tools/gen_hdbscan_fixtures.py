"""Regenerates the reference clusterings in tests/data with scikit-learn."""

import pathlib

import numpy as np
from sklearn.cluster import HDBSCAN

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"


def blobs(rng, centers, per, sd, noise):
    pts = [rng.normal(c, sd, size=(per, len(c))) for c in centers]
    lo = np.min(centers, axis=0) - 0.5
    hi = np.max(centers, axis=0) + 0.5
    pts.append(rng.uniform(lo, hi, size=(noise, len(centers[0]))))
    x = np.abs(np.vstack(pts)) + 0.01
    return x[rng.permutation(len(x))]


def write(name, x, mcs):
    labels = HDBSCAN(min_cluster_size=mcs, metric="manhattan").fit(x).labels_
    with open(OUT / name, "w") as f:
        f.write(f"# min_cluster_size={mcs}\n")
        for row, label in zip(x, labels):
            f.write(",".join(repr(float(v)) for v in row) + f",{label}\n")


def main():
    rng = np.random.default_rng(20)
    write("hdbscan_2d.csv", blobs(rng, [(1.0, 1.0), (3.0, 1.5), (1.5, 4.0)], 60, 0.2, 30), 10)
    write("hdbscan_3d.csv",
          blobs(rng, [(1.0, 1.0, 1.0), (2.0, 3.0, 1.0), (3.0, 1.0, 2.5), (1.0, 2.5, 3.0)],
                40, 0.25, 40), 8)
    write("hdbscan_uneven.csv",
          blobs(rng, [(1.0, 1.0), (2.0, 1.2), (4.0, 4.0)], 25, 0.15, 20)[:120], 5)


if __name__ == "__main__":
    main()
