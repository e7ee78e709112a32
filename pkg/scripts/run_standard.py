#!/usr/bin/env python3
"""Persistence estimates on the bundled measurement tables."""
import argparse
from pathlib import Path

import clusterpersist
from clusterpersist import load_csv, normalize_zscore, persistence_profile

DATA_DIR = Path(clusterpersist.__file__).parent / "data"

# fixture name -> (label column, class count in the table)
TABLES = {"iris": (4, 3), "wine": (13, 3), "wisconsin": (30, 2)}


def main(k_max, restarts, seed):
    print(f"{'dataset':<12} {'classes':>7} {'k_t':>4}  top v(k)")
    for name, (label_col, classes) in TABLES.items():
        ds = load_csv(DATA_DIR / f"{name}.csv", label_column=label_col)
        prof = persistence_profile(
            normalize_zscore(ds), k_max, restarts=restarts, seed=seed
        )
        ranked = sorted(prof.v, key=prof.v.get, reverse=True)[:3]
        tops = ", ".join(f"v({k})={prof.v[k]:.3f}" for k in ranked)
        print(f"{name:<12} {classes:>7} {prof.k_t:>4}  {tops}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--k-max", type=int, default=10)
    parser.add_argument("--restarts", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    main(args.k_max, args.restarts, args.seed)
