"""Artificial benchmark datasets.

Randomness comes from numpy's ``Generator`` on the PCG64 bit generator; its
normal draws use the ziggurat method. Both are fixed by numpy's stream
compatibility policy for a given seed, so datasets regenerate identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset
from .errors import InvalidArgumentError


@dataclass(frozen=True)
class GaussianSpec:
    cluster_count: int
    points_per_cluster: int = 50
    sd: float = 0.3
    dimension: int = 2
    seed: int = 0

    def __post_init__(self) -> None:
        if self.cluster_count < 2:
            raise InvalidArgumentError("cluster_count must be >= 2")
        if self.points_per_cluster < 1:
            raise InvalidArgumentError("points_per_cluster must be >= 1")
        if not self.sd > 0:
            raise InvalidArgumentError("sd must be > 0")
        if self.dimension < 1:
            raise InvalidArgumentError("dimension must be >= 1")


@dataclass(frozen=True)
class NoiseSpec:
    points_per_label: int
    left_probability: float = 0.25
    # None: twice each label's per-coordinate standard deviation
    offset_scale: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.points_per_label < 1:
            raise InvalidArgumentError("points_per_label must be >= 1")
        if not 0.0 < self.left_probability < 1.0:
            raise InvalidArgumentError("left_probability must lie in (0, 1)")
        if self.offset_scale is not None and not self.offset_scale > 0:
            raise InvalidArgumentError("offset_scale must be > 0")


def gen_gaussian_clusters(spec: GaussianSpec, name: str | None = None) -> Dataset:
    """Cluster i (1-based) is isotropic Gaussian around (i, ..., i), labelled i."""
    rng = np.random.default_rng(spec.seed)
    blocks = []
    labels = []
    for i in range(1, spec.cluster_count + 1):
        blocks.append(i + spec.sd * rng.standard_normal((spec.points_per_cluster, spec.dimension)))
        labels.append(np.full(spec.points_per_cluster, i))
    return Dataset(
        np.vstack(blocks),
        np.concatenate(labels),
        name=name or f"gaussian-{spec.cluster_count}",
        meta={
            "generator": "gaussian",
            "cluster_count": spec.cluster_count,
            "points_per_cluster": spec.points_per_cluster,
            "sd": spec.sd,
            "dimension": spec.dimension,
            "seed": spec.seed,
        },
    )


def gen_e1071(cluster_count: int, seed: int = 0) -> Dataset:
    return gen_gaussian_clusters(GaussianSpec(cluster_count, seed=seed), name=f"E1071-{cluster_count}")


def gen_overlapped(spec: GaussianSpec, name: str | None = None) -> Dataset:
    """Same layout as :func:`gen_gaussian_clusters` but with sd 0.4."""
    wide = GaussianSpec(spec.cluster_count, spec.points_per_cluster, 0.4, spec.dimension, spec.seed)
    return gen_gaussian_clusters(wide, name=name or f"E1071-{spec.cluster_count}-overlapped")


def add_skewed_noise(data: Dataset, spec: NoiseSpec, name: str | None = None) -> Dataset:
    """Append right-skewed outliers around each label's gravity center.

    For every new point a uniform r is drawn; r <= ``left_probability`` puts
    it below the center on every coordinate, otherwise above. Per-coordinate
    offsets are |g| * scale for standard normal g. The input points stay an
    unchanged prefix of the output.
    """
    if data.labels is None:
        raise InvalidArgumentError("skewed noise needs labelled data")
    rng = np.random.default_rng(spec.seed)
    extra_pts = []
    extra_lab = []
    for label in np.unique(data.labels):
        members = data.points[data.labels == label]
        center = members.mean(axis=0)
        if spec.offset_scale is None:
            scale = 2.0 * members.std(axis=0)
            # a single-point label has no spread; fall back to the overall spread
            scale = np.where(scale > 0, scale, 2.0 * data.points.std(axis=0))
        else:
            scale = np.full(data.d, spec.offset_scale)
        r = rng.random(spec.points_per_label)
        side = np.where(r <= spec.left_probability, -1.0, 1.0)
        mag = np.abs(rng.standard_normal((spec.points_per_label, data.d))) * scale
        extra_pts.append(center + side[:, None] * mag)
        extra_lab.append(np.full(spec.points_per_label, label))
    return Dataset(
        np.vstack([data.points, *extra_pts]),
        np.concatenate([data.labels, *extra_lab]),
        name=name or f"{data.name}_noised",
        feature_names=data.feature_names,
        label_names=data.label_names,
        meta={
            **data.meta,
            "noise_points_per_label": spec.points_per_label,
            "noise_left_probability": spec.left_probability,
            "noise_offset_scale": spec.offset_scale,
            "noise_seed": spec.seed,
        },
    )


# Ruspini data: 75 points in four groups, matching the copy in R's cluster package.
_RUSPINI_X = (
    4, 5, 10, 9, 13, 13, 12, 15, 18, 19, 22, 27, 28, 24, 27, 28, 30, 31, 32, 36,
    28, 32, 35, 33, 38, 41, 38, 38, 32, 34, 44, 44, 44, 46, 47, 49, 50, 53, 52, 55, 54, 60, 63,
    86, 85, 85, 78, 74, 97, 98, 98, 99, 99, 101, 108, 110, 108, 111, 115, 117,
    70, 77, 83, 61, 69, 78, 66, 58, 64, 69, 66, 61, 76, 72, 64,
)
_RUSPINI_Y = (
    53, 63, 59, 77, 49, 69, 88, 75, 61, 65, 74, 72, 76, 58, 55, 60, 52, 60, 61, 72,
    147, 149, 153, 154, 151, 150, 145, 143, 143, 141, 156, 149, 143, 142, 149, 152, 142, 144, 152, 155, 124, 136, 139,
    132, 115, 96, 94, 96, 122, 116, 124, 119, 128, 115, 111, 111, 116, 126, 117, 115,
    4, 12, 21, 15, 15, 16, 18, 13, 20, 21, 23, 25, 27, 31, 30,
)
_RUSPINI_GROUP_SIZES = (20, 23, 17, 15)


def ruspini_fixture() -> Dataset:
    labels = np.repeat(np.arange(1, 5), _RUSPINI_GROUP_SIZES)
    return Dataset(
        np.column_stack([_RUSPINI_X, _RUSPINI_Y]).astype(float),
        labels,
        name="Ruspini",
        feature_names=("x", "y"),
        meta={"generator": "ruspini"},
    )


def ruspini_noised(seed: int = 0, points_per_label: int = 5) -> Dataset:
    return add_skewed_noise(ruspini_fixture(), NoiseSpec(points_per_label, seed=seed), name="Ruspini_noised")


BUILTIN = {
    "ruspini": lambda seed: ruspini_fixture(),
    "ruspini-noised": lambda seed: ruspini_noised(seed),
    "e1071-3": lambda seed: gen_e1071(3, seed),
    "e1071-5": lambda seed: gen_e1071(5, seed),
    "e1071-3-overlapped": lambda seed: gen_overlapped(GaussianSpec(3, seed=seed)),
    "e1071-5-overlapped": lambda seed: gen_overlapped(GaussianSpec(5, seed=seed)),
}


def builtin_dataset(kind: str, seed: int = 0) -> Dataset:
    try:
        return BUILTIN[kind](seed)
    except KeyError:
        raise InvalidArgumentError(f"unknown dataset {kind!r}; choose from {sorted(BUILTIN)}") from None
