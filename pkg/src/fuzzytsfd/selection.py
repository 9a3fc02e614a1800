"""K sweeps and the rules that turn a sweep into per-index K verdicts."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Mapping

from .core import Dataset
from .errors import DegenerateDataError, FuzzyTsfdError, InsufficientRangeError, InvalidArgumentError
from .fcm import FcmConfig, fit
from .indices import MAXIMIZED, MINIMIZED, IndexReport, InertiaTriple, index_report, inertia

log = logging.getLogger(__name__)

DEFAULT_PLATEAU = 0.10
DEFAULT_K_MAX = 18

Orientation = Literal["maximized", "minimized"]


@dataclass(frozen=True)
class FitSummary:
    iterations_run: int
    converged: bool
    seed_used: int
    fw_trace: tuple[float, ...]
    centroids: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class SweepEntry:
    inertia: InertiaTriple
    report: IndexReport
    fit: FitSummary


@dataclass(frozen=True)
class KSweepResult:
    k_min: int
    k_max: int
    per_k: Mapping[int, SweepEntry]
    failures: Mapping[int, str] = field(default_factory=dict)

    @property
    def ks(self) -> list[int]:
        return sorted(self.per_k)

    def series(self, name: str) -> dict[int, float]:
        if name in ("fw", "fb", "fi"):
            return {k: getattr(e.inertia, name) for k, e in sorted(self.per_k.items())}
        return {k: getattr(e.report, name) for k, e in sorted(self.per_k.items())}


@dataclass(frozen=True)
class VisualTsfd:
    angles: dict[int, float]
    candidates: list[int]

    @property
    def chosen(self) -> int:
        """K beyond which no further drop in angle is significant."""
        return self.candidates[-1]


@dataclass(frozen=True)
class SelectionVerdicts:
    """Per-index K verdicts for one sweep.

    ``by_rule`` holds plain argmax/argmin choices. ``elbows`` holds elbow
    choices for the unpenalized ratio indices (``tsfd``, ``v_fratio``), or
    ``None`` with a note in ``notes`` when the range is too short.
    """

    by_rule: dict[str, int]
    elbows: dict[str, int | None]
    notes: dict[str, str]
    visual: VisualTsfd

    @property
    def elbow_tsfd(self) -> int | None:
        return self.elbows["tsfd"]

    def table_row(self, fratio_rule: str = "argmax") -> dict[str, int | str | None]:
        """Verdicts keyed by the verdict-table column they fill.

        FB/FW tends to grow with K, so its argmax usually sits at the top of
        the range. ``fratio_rule="elbow"`` fills the FRatio column with the
        elbow of the curve instead, the same treatment TSFD gets.
        """
        if fratio_rule == "elbow":
            fratio: int | str | None = self.elbows["v_fratio"] if self.elbows["v_fratio"] is not None else self.notes["v_fratio"]
        elif fratio_rule == "argmax":
            fratio = self.by_rule["v_fratio"]
        else:
            raise InvalidArgumentError(f"unknown FRatio rule {fratio_rule!r}")
        return {
            "v_pc": self.by_rule["v_pc"],
            "v_cl": self.by_rule["v_cl"],
            "v_fratio": fratio,
            "v_fch": self.by_rule["v_fch"],
            "v_fs": self.by_rule["v_fs"],
            "v_xb": self.by_rule["v_xb"],
            "elbow_tsfd": self.elbow_tsfd if self.elbow_tsfd is not None else self.notes["tsfd"],
            "visual_tsfd": ",".join(str(k) for k in self.visual.candidates),
            "psfd": self.by_rule["psfd"],
        }


def default_k_max(n: int) -> int:
    return min(DEFAULT_K_MAX, n - 1)


def sweep(data: Dataset, template: FcmConfig, k_min: int = 2, k_max: int | None = None) -> KSweepResult:
    """Fit each K in ``[k_min, k_max]`` once and score it with every index.

    A K whose fit fails is recorded in ``failures`` instead of aborting the
    sweep.
    """
    if k_max is None:
        k_max = default_k_max(data.n)
    if not 2 <= k_min <= k_max < data.n:
        raise InsufficientRangeError(f"need 2 <= k_min <= k_max < n, got [{k_min}, {k_max}] with n={data.n}")
    per_k: dict[int, SweepEntry] = {}
    failures: dict[int, str] = {}
    for k in range(k_min, k_max + 1):
        cfg = template.with_k(k)
        try:
            model = fit(data, cfg)
            tri = inertia(data, model, cfg.m)
            report = index_report(data, model, cfg.m, tri)
        except FuzzyTsfdError as exc:
            log.warning("K=%d failed: %s", k, exc)
            failures[k] = f"{type(exc).__name__}: {exc}"
            continue
        summary = FitSummary(
            iterations_run=model.iterations_run,
            converged=model.converged,
            seed_used=model.seed_used,
            fw_trace=model.fw_trace,
            centroids=tuple(tuple(float(v) for v in row) for row in model.centroids.centers),
        )
        per_k[k] = SweepEntry(tri, report, summary)
    return KSweepResult(k_min, k_max, per_k, failures)


def _best(series: Mapping[int, float], maximize: bool) -> int:
    best_k = None
    best_v = None
    for k in sorted(series):
        v = series[k]
        if math.isnan(v):
            continue
        # strict comparison keeps the smaller K on ties
        if best_v is None or (v > best_v if maximize else v < best_v):
            best_k, best_v = k, v
    if best_k is None:
        raise InvalidArgumentError("series has no comparable values")
    return best_k


def select_by_rule(result: KSweepResult | Mapping[str, Mapping[int, float]]) -> dict[str, int]:
    """Argmax or argmin per index over K, ties going to the smaller K.

    Accepts either a sweep or a mapping of index name to ``{K: value}``;
    names missing from the mapping are skipped.
    """
    if isinstance(result, KSweepResult):
        if not result.per_k:
            raise InvalidArgumentError("empty sweep")
        series = {name: result.series(name) for name in MAXIMIZED + MINIMIZED}
    else:
        series = dict(result)
    out = {}
    for name in MAXIMIZED + MINIMIZED:
        if name in series:
            out[name] = _best(series[name], maximize=name in MAXIMIZED)
    return out


def second_differences(series: Mapping[int, float]) -> dict[int, float]:
    """(i[K+1] - i[K]) - (i[K] - i[K-1]) at every K whose neighbours are present."""
    out = {}
    for k in sorted(series):
        if k - 1 in series and k + 1 in series:
            out[k] = (series[k + 1] - series[k]) - (series[k] - series[k - 1])
    return out


def elbow(series: Mapping[int, float], orientation: Orientation = "maximized") -> int:
    """K minimising the second difference of the index curve.

    Minimized indices are negated first so that both orientations look for
    the same kind of elbow. Ties go to the smaller K.
    """
    if orientation not in ("maximized", "minimized"):
        raise InvalidArgumentError(f"unknown orientation {orientation!r}")
    if orientation == "minimized":
        series = {k: -v for k, v in series.items()}
    diffs = second_differences(series)
    if not diffs:
        raise InsufficientRangeError("elbow needs at least 3 consecutive K values")
    return min(diffs, key=lambda k: (diffs[k], k))


def tsfd_angle(fb: float, fi: float) -> float:
    """Degrees between the FB = FI diagonal and the origin ray through (FI, FB)."""
    if not fi > 0.0:
        raise DegenerateDataError("FI must be positive")
    return 45.0 - math.degrees(math.atan(fb / fi))


def visual_tsfd(result: KSweepResult | Mapping[int, tuple[float, float]], plateau_threshold: float = DEFAULT_PLATEAU) -> VisualTsfd:
    """Angles per K and the K values where the angle still drops noticeably.

    A K is a candidate when its angle improves on the best angle seen at any
    smaller K by more than ``plateau_threshold`` times the angle at the
    smallest K. When no K qualifies the smallest K is the sole candidate.

    ``result`` may also be a plain ``{K: (FI, FB)}`` mapping.
    """
    if plateau_threshold < 0:
        raise InvalidArgumentError("plateau_threshold must be >= 0")
    if isinstance(result, KSweepResult):
        points = {k: (e.inertia.fi, e.inertia.fb) for k, e in result.per_k.items()}
    else:
        points = dict(result)
    if not points:
        raise InvalidArgumentError("empty sweep")
    ks = sorted(points)
    angles = {k: tsfd_angle(points[k][1], points[k][0]) for k in ks}
    margin = plateau_threshold * angles[ks[0]]
    candidates = []
    best = angles[ks[0]]
    for k in ks[1:]:
        if best - angles[k] > margin:
            candidates.append(k)
        best = min(best, angles[k])
    return VisualTsfd(angles, candidates or [ks[0]])


ELBOW_INDICES = ("tsfd", "v_fratio")


def select_all(result: KSweepResult, plateau_threshold: float = DEFAULT_PLATEAU) -> SelectionVerdicts:
    by_rule = select_by_rule(result)
    elbows: dict[str, int | None] = {}
    notes: dict[str, str] = {}
    for name in ELBOW_INDICES:
        try:
            elbows[name] = elbow(result.series(name), "maximized")
        except InsufficientRangeError:
            elbows[name] = None
            notes[name] = "insufficient range"
    return SelectionVerdicts(by_rule, elbows, notes, visual_tsfd(result, plateau_threshold))


def angle_monotonicity_violations(angles: Mapping[int, float]) -> list[int]:
    """K values whose angle is larger than at the previous K."""
    ks = sorted(angles)
    return [b for a, b in zip(ks, ks[1:]) if angles[b] > angles[a]]


__all__ = [
    "FitSummary",
    "KSweepResult",
    "SelectionVerdicts",
    "SweepEntry",
    "VisualTsfd",
    "angle_monotonicity_violations",
    "default_k_max",
    "elbow",
    "second_differences",
    "select_all",
    "select_by_rule",
    "sweep",
    "tsfd_angle",
    "visual_tsfd",
]
