"""Data model shared by every stage: datasets, membership matrices, centroids."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import InvalidArgumentError

ROW_SUM_TOL = 1e-9


def _frozen_array(values: Any, dtype: Any = float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True, order="C")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """Numeric points (n, d) with optional integer labels.

    ``label_names`` maps integer labels back to the original class names when
    they were read from text. ``meta`` holds generator parameters and similar
    provenance (for example the ``sd`` used to draw a synthetic set).
    """

    points: np.ndarray
    labels: np.ndarray | None = None
    name: str = "dataset"
    feature_names: tuple[str, ...] = ()
    label_names: Mapping[int, str] = field(default_factory=dict)
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise InvalidArgumentError("points must be a 2-D array (n, d)")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidArgumentError("dataset needs n >= 1 and d >= 1")
        if not np.all(np.isfinite(pts)):
            raise InvalidArgumentError("every coordinate must be finite")
        object.__setattr__(self, "points", _frozen_array(pts))

        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.ndim != 1 or labels.shape[0] != pts.shape[0]:
                raise InvalidArgumentError("labels must be 1-D with one entry per point")
            if labels.size and not np.all(np.equal(np.mod(labels, 1), 0)):
                raise InvalidArgumentError("labels must be integers")
            object.__setattr__(self, "labels", _frozen_array(labels, dtype=np.int64))

        names = tuple(self.feature_names) or tuple(f"x{j + 1}" for j in range(pts.shape[1]))
        if len(names) != pts.shape[1]:
            raise InvalidArgumentError("feature_names length must equal d")
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "label_names", MappingProxyType(dict(self.label_names)))
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def n_labels(self) -> int | None:
        if self.labels is None:
            return None
        return int(np.unique(self.labels).size)

    def scaled(self, factor: float) -> Dataset:
        return Dataset(
            self.points * factor,
            self.labels,
            name=self.name,
            feature_names=self.feature_names,
            label_names=self.label_names,
            meta=self.meta,
        )

    def same_as(self, other: Dataset) -> bool:
        """Exact equality of points and labels (names and metadata ignored)."""
        if self.points.shape != other.points.shape:
            return False
        if not np.array_equal(self.points, other.points):
            return False
        if (self.labels is None) != (other.labels is None):
            return False
        return self.labels is None or bool(np.array_equal(self.labels, other.labels))


@dataclass(frozen=True, eq=False)
class MembershipMatrix:
    """Row-stochastic (n, K) matrix of fuzzy membership degrees.

    Invalid input is rejected, never renormalized.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        u = np.asarray(self.values, dtype=float)
        if u.ndim != 2:
            raise InvalidArgumentError("membership matrix must be 2-D")
        if u.shape[1] < 2:
            raise InvalidArgumentError("membership matrix needs K >= 2 columns")
        if u.shape[0] < 1:
            raise InvalidArgumentError("membership matrix needs at least one row")
        if not np.all(np.isfinite(u)) or u.min() < 0.0 or u.max() > 1.0:
            raise InvalidArgumentError("membership entries must lie in [0, 1]")
        worst = float(np.max(np.abs(u.sum(axis=1) - 1.0)))
        if worst > ROW_SUM_TOL:
            raise InvalidArgumentError(f"membership rows must sum to 1 (max deviation {worst:.3g})")
        object.__setattr__(self, "values", _frozen_array(u))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class Centroids:
    centers: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.centers, dtype=float)
        if c.ndim != 2 or c.shape[0] < 2:
            raise InvalidArgumentError("centroids must be a (K, d) array with K >= 2")
        if not np.all(np.isfinite(c)):
            raise InvalidArgumentError("centroid coordinates must be finite")
        object.__setattr__(self, "centers", _frozen_array(c))

    @property
    def k(self) -> int:
        return self.centers.shape[0]


def squared_euclidean(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.dot(diff.ravel(), diff.ravel()))


def pairwise_sq_dists(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    # (n, d) x (K, d) -> (n, K); explicit differences, no |x|^2 - 2xc + |c|^2 cancellation
    diff = x[:, None, :] - c[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def grand_mean(data: Dataset | np.ndarray) -> np.ndarray:
    points = data.points if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    if points.ndim != 2 or points.shape[0] == 0:
        raise InvalidArgumentError("grand mean of an empty dataset is undefined")
    return points.mean(axis=0)
