#!/usr/bin/env python3
"""Persistence sweeps over the synthetic mixture families.

Prints one block per dataset: the estimated k_t and the v(k) table.
"""
import argparse

import numpy as np

from clusterpersist import (
    gen_gaussian_mixture,
    gen_supercluster_grid,
    gen_two_disks,
    normalize_zscore,
    persistence_profile,
)


def four_gaussians(sd, n_per, seed):
    cov = (sd * sd) * np.eye(2)
    means = [(-5.0, -5.0), (-5.0, 5.0), (5.0, -5.0), (5.0, 5.0)]
    return gen_gaussian_mixture(means, [cov] * 4, [n_per] * 4, seed)


def combo_mixture(seed):
    centers = [(0, 0), (10, 0), (20, 4), (3, 9), (13, 10), (22, 12), (-4, 16), (8, 18)]
    sds = [0.5, 0.8, 1.2, 0.6, 1.0, 0.7, 0.9, 1.1]
    sizes = [100, 150, 300, 120, 200, 250, 180, 140]
    ds = gen_gaussian_mixture(centers, [(s * s) * np.eye(2) for s in sds], sizes, seed)
    return normalize_zscore(ds)


def report(name, prof):
    print(f"{name}: k_t = {prof.k_t}")
    for k in sorted(prof.v):
        print(f"  v({k}) = {prof.v[k]:.4f}")


def main(seed, restarts):
    ds = gen_two_disks(1.0, 4.0, 5000, seed)
    report("two-disks", persistence_profile(ds, 6, restarts=restarts, seed=seed))

    for spacing, label in ((20.0, "superclusters-wide"), (5.0, "superclusters-narrow")):
        ds = gen_supercluster_grid(spacing, 2.0, 0.0625 * np.eye(2), 150, seed)
        report(label, persistence_profile(ds, 12, restarts=restarts, seed=seed))

    report(
        "gaussians4-low-variance",
        persistence_profile(four_gaussians(0.5, 250, seed), 10, restarts=restarts, seed=seed),
    )
    report(
        "gaussians8-combo",
        persistence_profile(combo_mixture(seed), 12, restarts=restarts, seed=seed),
    )
    ds = normalize_zscore(four_gaussians(10.0 / 2.4, 600, seed))
    report(
        "gaussians4-high-variance",
        persistence_profile(ds, 10, restarts=restarts, seed=seed),
    )


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--restarts", type=int, default=8)
    args = parser.parse_args()
    main(args.seed, args.restarts)
