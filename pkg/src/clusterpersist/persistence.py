"""Critical resolutions, persistence values v(k), and the estimate k_t.

The critical resolution of a k-cluster solution is
beta_bar_k = 1 / (2 max_j lambda_max(S_j)) with S_j the unnormalized scatter
of cluster j about its centroid (kernelized via the doubly centered Gram
block when clustering shapes). The persistence of the k-cluster solution is
v(k) = log beta_bar_k - log beta_bar_{k-1} and the estimated true number of
clusters is the argmax of v, ties going to the smaller k.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Optional

import numpy as np

from .clustering import ClusteringSolution, kmeans, spectral_cluster
from .dataset import Dataset
from .linalg import gaussian_kernel, kernel_scatter_matrix, largest_eigenvalue, scatter_matrix

__all__ = [
    "CriticalBeta",
    "PersistenceProfile",
    "critical_beta",
    "critical_beta_kernel",
    "persistence_profile",
    "estimate_k",
]


class CriticalBeta(NamedTuple):
    """The resolution at which a solution stops being a free-energy minimum,
    plus the index of the widest cluster (the one that splits first)."""

    beta: float
    cluster: int


def _critical_from_lmax(lmax: np.ndarray) -> CriticalBeta:
    top = float(lmax.max())
    if top <= 0.0:
        raise ValueError("resolution unbounded; reduce k_max")
    j = int(np.argmax(lmax))
    return CriticalBeta(beta=1.0 / (2.0 * top), cluster=j)


def critical_beta(solution: ClusteringSolution, data: Dataset) -> CriticalBeta:
    """Critical resolution of a feature-space solution via scatter spectra.

    Singleton clusters have zero scatter and simply lose the max; if every
    cluster has zero spectrum the resolution is unbounded and an error is
    raised.
    """
    lmax = np.zeros(solution.k)
    for j in range(solution.k):
        members = solution.members(j)
        if members.size <= 1:
            continue
        S = scatter_matrix(data, solution.assignment, solution.centroids[j], j)
        lmax[j], _ = largest_eigenvalue(S)
    return _critical_from_lmax(lmax)


def critical_beta_kernel(solution: ClusteringSolution, K: np.ndarray) -> CriticalBeta:
    """Critical resolution with cluster scatters taken in kernel feature space."""
    lmax = np.zeros(solution.k)
    for j in range(solution.k):
        members = solution.members(j)
        if members.size <= 1:
            continue
        A = kernel_scatter_matrix(K, members)
        lmax[j], _ = largest_eigenvalue(A)
    return _critical_from_lmax(lmax)


@dataclass
class PersistenceProfile:
    """Per-k critical resolutions, persistence values, and the argmax k_t.

    beta_bar maps k -> beta_bar_k for k = k_min-1 .. k_max (k_min defaults
    to 1, so normally 1..k_max); v maps k -> v(k) for k = max(2, k_min) ..
    k_max. critical_cluster records which cluster attained the max
    eigenvalue at each k.
    """

    k_max: int
    k_min: int
    beta_bar: Dict[int, float]
    v: Dict[int, float]
    k_t: int
    critical_cluster: Dict[int, int] = field(default_factory=dict)
    per_k_solutions: Optional[Dict[int, ClusteringSolution]] = None

    def to_csv(self, path=None) -> Optional[str]:
        """Write rows k, beta_bar, log_beta_bar, v (v blank on the first row)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "beta_bar", "log_beta_bar", "v"])
        for k in sorted(self.beta_bar):
            b = self.beta_bar[k]
            vk = self.v.get(k)
            writer.writerow([k, repr(b), repr(math.log(b)), "" if vk is None else repr(vk)])
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w") as fh:
            fh.write(text)
        return None

    def to_json_dict(self) -> dict:
        return {
            "k_min": self.k_min,
            "k_max": self.k_max,
            "k_t": self.k_t,
            "beta_bar": {str(k): v for k, v in sorted(self.beta_bar.items())},
            "v": {str(k): v for k, v in sorted(self.v.items())},
            "critical_cluster": {str(k): v for k, v in sorted(self.critical_cluster.items())},
        }

    def to_json(self, path=None) -> Optional[str]:
        text = json.dumps(self.to_json_dict(), indent=2)
        if path is None:
            return text
        with open(path, "w") as fh:
            fh.write(text)
        return None


def persistence_profile(
    data: Dataset,
    k_max: int,
    mode: str = "linear",
    restarts: int = 10,
    seed: int = 0,
    sigma: Optional[float] = None,
    k_min: int = 1,
    keep_solutions: bool = False,
) -> PersistenceProfile:
    """Run the clustering sweep k = k_min-1 .. k_max and assemble v(k), k_t.

    mode "linear" clusters with kmeans and uses feature-space scatters; mode
    "kernel" requires sigma, clusters spectrally on the Gaussian similarity
    matrix and uses kernel-space scatters. Every randomized step derives from
    seed, one child stream per k. k_min > 1 restricts both the computed
    solutions and the argmax range (used for wide scans around a known k).
    """
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    if k_max > data.n - 1:
        raise ValueError("k_max must be at most N-1")
    if not 1 <= k_min <= k_max - 1:
        raise ValueError("k_min must lie in 1..k_max-1")
    if mode not in ("linear", "kernel"):
        raise ValueError(f"unknown mode {mode!r}")
    K = None
    if mode == "kernel":
        if sigma is None or sigma <= 0:
            raise ValueError("kernel mode requires a positive sigma")
        K = gaussian_kernel(data, sigma)

    beta_bar: Dict[int, float] = {}
    crit: Dict[int, int] = {}
    sols: Dict[int, ClusteringSolution] = {}
    for k in range(max(1, k_min - 1), k_max + 1):
        child = int(np.random.SeedSequence([seed, k]).generate_state(1)[0])
        try:
            if mode == "linear":
                sol = kmeans(data, k, restarts=restarts, seed=child)
                cb = critical_beta(sol, data)
            else:
                sol = spectral_cluster(K, k, restarts=restarts, seed=child)
                cb = critical_beta_kernel(sol, K)
        except (ValueError, RuntimeError) as e:
            raise type(e)(f"k={k}: {e}") from e
        beta_bar[k] = cb.beta
        crit[k] = cb.cluster
        if keep_solutions:
            sols[k] = sol

    v: Dict[int, float] = {}
    for k in range(max(2, k_min), k_max + 1):
        v[k] = math.log(beta_bar[k]) - math.log(beta_bar[k - 1])
    k_t = min(v)
    for k in sorted(v):
        if v[k] > v[k_t]:
            k_t = k
    return PersistenceProfile(
        k_max=k_max,
        k_min=k_min,
        beta_bar=beta_bar,
        v=v,
        k_t=k_t,
        critical_cluster=crit,
        per_k_solutions=sols if keep_solutions else None,
    )


def estimate_k(
    data: Dataset,
    k_max: int,
    mode: str = "linear",
    restarts: int = 10,
    seed: int = 0,
    sigma: Optional[float] = None,
) -> int:
    """Convenience wrapper returning only the estimated cluster count."""
    return persistence_profile(
        data, k_max, mode=mode, restarts=restarts, seed=seed, sigma=sigma
    ).k_t
