"""Fuzzy C-Means by alternating membership and centroid updates."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .core import Centroids, Dataset, MembershipMatrix, pairwise_sq_dists
from .errors import DegenerateDataError, EmptyClusterError, InvalidArgumentError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FcmConfig:
    k: int
    m: float = 2.0
    epsilon: float = 1e-4
    max_iterations: int = 100
    restarts: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 2:
            raise InvalidArgumentError("K must be >= 2")
        if not self.m > 1.0:
            raise InvalidArgumentError("fuzziness m must be > 1")
        if not self.epsilon > 0.0:
            raise InvalidArgumentError("epsilon must be > 0")
        if self.max_iterations < 1:
            raise InvalidArgumentError("max_iterations must be >= 1")
        if self.restarts < 1:
            raise InvalidArgumentError("restarts must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError("seed must be a 64-bit unsigned integer")

    def with_k(self, k: int) -> FcmConfig:
        return FcmConfig(k, self.m, self.epsilon, self.max_iterations, self.restarts, self.seed)


@dataclass(frozen=True, eq=False)
class ClusterModel:
    centroids: Centroids
    memberships: MembershipMatrix
    fw_trace: tuple[float, ...]
    iterations_run: int
    converged: bool
    seed_used: int = 0

    @property
    def k(self) -> int:
        return self.centroids.k

    @property
    def fw(self) -> float:
        return self.fw_trace[-1]


def _points(data: Dataset | np.ndarray) -> np.ndarray:
    return data.points if isinstance(data, Dataset) else np.asarray(data, dtype=float)


def _centers(centroids: Centroids | np.ndarray) -> np.ndarray:
    return centroids.centers if isinstance(centroids, Centroids) else np.asarray(centroids, dtype=float)


def initialize_centroids(data: Dataset | np.ndarray, k: int, seed: int) -> Centroids:
    """Pick ``k`` data points with pairwise-distinct coordinates, without replacement.

    Sampling walks a seeded permutation of row indices and keeps the first
    rows whose coordinates have not been taken yet, so duplicated points never
    yield coincident initial centroids.
    """
    x = _points(data)
    n = x.shape[0]
    if k > n:
        raise InvalidArgumentError(f"cannot pick K={k} centroids from {n} points")
    rng = np.random.default_rng(seed)
    chosen: list[int] = []
    seen: set[bytes] = set()
    for idx in rng.permutation(n):
        key = x[idx].tobytes()
        if key in seen:
            continue
        seen.add(key)
        chosen.append(int(idx))
        if len(chosen) == k:
            break
    if len(chosen) < k:
        raise DegenerateDataError(f"only {len(chosen)} distinct points, K={k} requested")
    return Centroids(x[chosen])


def _membership_values(d2: np.ndarray, m: float) -> np.ndarray:
    n, k = d2.shape
    u = np.zeros((n, k))
    zero = d2 == 0.0
    hit = zero.any(axis=1)
    if hit.any():
        # limit of the update as a distance reaches 0: share among coincident centroids
        u[hit] = zero[hit] / zero[hit].sum(axis=1, keepdims=True)
    rest = ~hit
    if rest.any():
        dr = d2[rest]
        # scaling by the row minimum keeps every term in (0, 1] and the sum >= 1
        scaled = dr / dr.min(axis=1, keepdims=True)
        inv = scaled ** (-1.0 / (m - 1.0))
        u[rest] = inv / inv.sum(axis=1, keepdims=True)
    return u


def update_memberships(data: Dataset | np.ndarray, centroids: Centroids | np.ndarray, m: float) -> MembershipMatrix:
    if not m > 1.0:
        raise InvalidArgumentError("fuzziness m must be > 1")
    d2 = pairwise_sq_dists(_points(data), _centers(centroids))
    return MembershipMatrix(_membership_values(d2, m))


def _centroid_values(x: np.ndarray, u: np.ndarray, m: float) -> np.ndarray:
    um = u**m
    mass = um.sum(axis=0)
    if np.any(mass <= 0.0):
        empty = [int(j) for j in np.flatnonzero(mass <= 0.0)]
        raise EmptyClusterError(f"clusters {empty} have no membership mass")
    return (um.T @ x) / mass[:, None]


def update_centroids(data: Dataset | np.ndarray, memberships: MembershipMatrix | np.ndarray, m: float) -> Centroids:
    u = memberships.values if isinstance(memberships, MembershipMatrix) else np.asarray(memberships, dtype=float)
    return Centroids(_centroid_values(_points(data), u, m))


def within_inertia(x: np.ndarray, u: np.ndarray, c: np.ndarray, m: float) -> float:
    return float(np.sum((u**m) * pairwise_sq_dists(x, c)))


def _fit_once(x: np.ndarray, config: FcmConfig, seed: int) -> ClusterModel:
    m = config.m
    c = initialize_centroids(x, config.k, seed).centers
    trace: list[float] = []
    converged = False
    u = None
    for _ in range(config.max_iterations):
        u = _membership_values(pairwise_sq_dists(x, c), m)
        c = _centroid_values(x, u, m)
        fw = within_inertia(x, u, c, m)
        if trace:
            change = abs(trace[-1] - fw)
            trace.append(fw)
            if change == 0.0 or (fw > 0.0 and change / fw < config.epsilon):
                converged = True
                break
        else:
            trace.append(fw)
            if fw == 0.0:
                converged = True
                break
    if not np.all(np.isfinite(c)):
        raise DegenerateDataError("centroids diverged to non-finite values")
    return ClusterModel(
        centroids=Centroids(c),
        memberships=MembershipMatrix(u),
        fw_trace=tuple(trace),
        iterations_run=len(trace),
        converged=converged,
        seed_used=seed,
    )


def fit(data: Dataset | np.ndarray, config: FcmConfig) -> ClusterModel:
    """Run ``config.restarts`` seeded FCM restarts and keep the lowest final FW.

    Restart ``r`` is initialized from seed ``config.seed + r``. Each iteration
    updates memberships from the current centroids and then centroids from
    those memberships; the loop stops once ``|FW_t - FW_{t-1}| / FW_t`` drops
    below ``config.epsilon`` or after ``config.max_iterations`` iterations.
    Because centroids are always recomputed last, the returned centroids are
    exactly the membership-weighted means of the returned memberships.

    A restart that loses a cluster is skipped; :class:`EmptyClusterError`
    is raised only when every restart degenerates.
    """
    x = _points(data)
    n = x.shape[0]
    if not 2 <= config.k < n:
        raise InvalidArgumentError(f"need 2 <= K < n, got K={config.k}, n={n}")
    best: ClusterModel | None = None
    failures: list[str] = []
    for r in range(config.restarts):
        seed = (config.seed + r) % 2**64
        try:
            model = _fit_once(x, config, seed)
        except EmptyClusterError as exc:
            log.debug("restart %d (seed %d) degenerated: %s", r, seed, exc)
            failures.append(str(exc))
            continue
        if best is None or model.fw < best.fw:
            best = model
    if best is None:
        raise EmptyClusterError(f"all {config.restarts} restarts degenerated: {failures[-1]}")
    return best
