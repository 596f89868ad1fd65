#!/usr/bin/env python3
"""Populate data/ucr/ with the datasets used by the test and benchmark suites.

Real UCR datasets are pulled out of PyPI wheels that bundle them:

  Trace    tslearn   (tslearn/.cached_datasets/Trace.npz)
  Coffee   pyts      (pyts/datasets/cached_datasets/UCR/Coffee)
  GunPoint pyts      (pyts/datasets/cached_datasets/UCR/GunPoint)

CBF and SyntheticControl are synthetic datasets in the archive. They are
regenerated here from their published generating processes with a fixed seed
and the archive's split sizes.

Every dataset is written as <name>/<name>_TRAIN.tsv and <name>/<name>_TEST.tsv
in the archive's TSV layout (label first, then values).
"""

import argparse
import io
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

import numpy as np


def write_tsv(path, labels, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        for y, x in zip(labels, rows):
            f.write(str(int(y)) + "\t" + "\t".join(repr(float(v)) for v in x) + "\n")


def download_wheel(requirement, dest):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", requirement, "--no-deps", "-q", "-d", str(dest)],
        check=True,
    )
    name = requirement.split("==")[0].replace("-", "_")
    return next(Path(dest).glob(f"{name}-*.whl"))


def extract_trace(out, tmp):
    whl = download_wheel("tslearn==0.9.0", tmp)
    data = np.load(io.BytesIO(zipfile.ZipFile(whl).read("tslearn/.cached_datasets/Trace.npz")))
    for split, key in (("TRAIN", "train"), ("TEST", "test")):
        write_tsv(out / "Trace" / f"Trace_{split}.tsv", data[f"y_{key}"], data[f"X_{key}"][:, :, 0])


def extract_pyts(out, tmp):
    whl = zipfile.ZipFile(download_wheel("pyts==0.11.0", tmp))
    for name in ("Coffee", "GunPoint"):
        for split in ("TRAIN", "TEST"):
            raw = whl.read(f"pyts/datasets/cached_datasets/UCR/{name}/{name}_{split}.txt").decode()
            arr = np.loadtxt(io.StringIO(raw))
            write_tsv(out / name / f"{name}_{split}.tsv", arr[:, 0], arr[:, 1:])


def znorm(x):
    return (x - x.mean()) / x.std()


def cbf_series(rng, cls, n=128):
    # Cylinder (1), Bell (2), Funnel (3) on an [a, b] event window.
    a = rng.integers(16, 33)
    b = a + rng.integers(32, 97)
    t = np.arange(n)
    eta = rng.standard_normal()
    eps = rng.standard_normal(n)
    window = ((t >= a) & (t <= b)).astype(float)
    if cls == 1:
        shape = window
    elif cls == 2:
        shape = window * (t - a) / (b - a)
    else:
        shape = window * (b - t) / (b - a)
    return znorm((6.0 + eta) * shape + eps)


def generate_cbf(out, seed):
    rng = np.random.default_rng(seed)
    for split, count in (("TRAIN", 30), ("TEST", 900)):
        labels = np.tile([1, 2, 3], count // 3)
        rows = [cbf_series(rng, c) for c in labels]
        write_tsv(out / "CBF" / f"CBF_{split}.tsv", labels, rows)


def control_series(rng, cls, n=60):
    m, s = 30.0, 2.0
    t = np.arange(n)
    y = m + rng.uniform(-3, 3, n) * s
    if cls == 2:
        y += rng.uniform(10, 15) * np.sin(2 * np.pi * t / rng.uniform(10, 15))
    elif cls == 3:
        y += rng.uniform(0.2, 0.5) * t
    elif cls == 4:
        y -= rng.uniform(0.2, 0.5) * t
    elif cls in (5, 6):
        t3 = rng.integers(n // 3, 2 * n // 3 + 1)
        shift = rng.uniform(7.5, 20) * (t >= t3)
        y += shift if cls == 5 else -shift
    return y


def generate_synthetic_control(out, seed):
    rng = np.random.default_rng(seed)
    for split in ("TRAIN", "TEST"):
        labels = np.repeat([1, 2, 3, 4, 5, 6], 50)
        rows = [control_series(rng, c) for c in labels]
        write_tsv(out / "SyntheticControl" / f"SyntheticControl_{split}.tsv", labels, rows)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "ucr")
    parser.add_argument("--seed", type=int, default=20240)
    args = parser.parse_args()
    with tempfile.TemporaryDirectory() as tmp:
        extract_trace(args.out, Path(tmp))
        extract_pyts(args.out, Path(tmp))
    generate_cbf(args.out, args.seed)
    generate_synthetic_control(args.out, args.seed + 1)


if __name__ == "__main__":
    main()
