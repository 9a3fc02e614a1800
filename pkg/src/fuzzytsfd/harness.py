"""Experiment orchestration: CSV ingestion, K sweeps, verdict tables."""

from __future__ import annotations

import csv
import json
import logging
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .core import Dataset
from .datagen import builtin_dataset
from .errors import (
    DatasetIOError,
    DegenerateDataError,
    EmptyDatasetError,
    InsufficientRangeError,
    InvalidArgumentError,
    ParseError,
)
from .fcm import FcmConfig
from .selection import (
    DEFAULT_PLATEAU,
    KSweepResult,
    SelectionVerdicts,
    angle_monotonicity_violations,
    default_k_max,
    select_all,
    sweep,
)
from .svg import emit_elbow_svg, emit_visual_tsfd_svg

log = logging.getLogger(__name__)

# verdict table columns, in display order
REPORT_COLUMNS = (
    ("id", "ID"),
    ("dataset", "Dataset"),
    ("n", "# of data points"),
    ("true_k", "# of clusters"),
    ("v_pc", "V_PC"),
    ("v_cl", "V_CL"),
    ("v_fratio", "FRatio"),
    ("v_fch", "V_FCH"),
    ("v_fs", "V_FS"),
    ("v_xb", "V_XB"),
    ("elbow_tsfd", "Elbow V_TSFD"),
    ("visual_tsfd", "Visual V_TSFD"),
    ("psfd", "PSFD"),
)
VERDICT_KEYS = ("v_pc", "v_cl", "v_fratio", "v_fch", "v_fs", "v_xb", "elbow_tsfd", "visual_tsfd", "psfd")

METRIC_COLUMNS = (
    "K", "FW", "FB", "FI", "V_PC", "V_CL", "V_FRatio", "V_FCH", "V_FS", "V_XB",
    "SFD", "TSFD", "PSFD", "angle_deg", "iterations", "converged", "restart_seed",
)


def fmt_float(v: float) -> str:
    """Shortest repr that round-trips exactly."""
    return repr(float(v))


def safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name).strip("_") or "dataset"


# ---------------------------------------------------------------- CSV I/O


def load_csv(
    path: str | Path,
    label_column: str | None = None,
    drop_columns: Sequence[str] = (),
    name: str | None = None,
) -> Dataset:
    """Read a headered, comma-delimited numeric CSV.

    Every column other than ``label_column`` and ``drop_columns`` must be
    numeric and finite. Integer labels are kept as-is; text labels are
    numbered 1, 2, ... in order of first appearance.
    """
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise DatasetIOError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDatasetError(f"{path} is empty (no header row)") from None
        except csv.Error as exc:
            raise ParseError(str(exc), reader.line_num) from exc
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            raise ParseError("duplicate column names in header", 1)
        unknown = [c for c in (*drop_columns, *([label_column] if label_column else [])) if c not in header]
        if unknown:
            raise ParseError(f"columns not in header: {unknown}", 1)
        label_idx = header.index(label_column) if label_column else None
        feat_idx = [j for j, h in enumerate(header) if j != label_idx and h not in drop_columns]
        if not feat_idx:
            raise ParseError("no feature columns left", 1)

        rows: list[list[float]] = []
        raw_labels: list[str] = []
        try:
            for record in reader:
                line = reader.line_num
                if not record or all(not c.strip() for c in record):
                    continue
                if len(record) != len(header):
                    raise ParseError(f"expected {len(header)} fields, found {len(record)}", line)
                row = []
                for j in feat_idx:
                    cell = record[j].strip()
                    try:
                        v = float(cell)
                    except ValueError:
                        raise ParseError(f"non-numeric value {cell!r} in column {header[j]!r}", line) from None
                    if not math.isfinite(v):
                        raise ParseError(f"non-finite value {cell!r} in column {header[j]!r}", line)
                    row.append(v)
                rows.append(row)
                if label_idx is not None:
                    raw_labels.append(record[label_idx].strip())
        except csv.Error as exc:
            raise ParseError(str(exc), reader.line_num) from exc

    if not rows:
        raise EmptyDatasetError(f"{path} has a header but no data rows")
    points = np.array(rows, dtype=float)
    if np.all(points == points[0]):
        raise DegenerateDataError(f"{path}: all {len(rows)} points are identical")

    labels = None
    label_names: dict[int, str] = {}
    if label_idx is not None:
        try:
            as_int = [int(s) for s in raw_labels]
            labels = np.array(as_int)
        except ValueError:
            order: dict[str, int] = {}
            for s in raw_labels:
                order.setdefault(s, len(order) + 1)
            labels = np.array([order[s] for s in raw_labels])
            label_names = {v: k for k, v in order.items()}
    return Dataset(
        points,
        labels,
        name=name or path.stem,
        feature_names=tuple(header[j] for j in feat_idx),
        label_names=label_names,
    )


def write_csv(data: Dataset, path: str | Path, label_column: str = "label") -> Path:
    """Features with full round-trip precision, labels (if any) as the last column."""
    path = Path(path)
    header = list(data.feature_names)
    if data.labels is not None:
        header.append(label_column)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for i in range(data.n):
                row = [fmt_float(v) for v in data.points[i]]
                if data.labels is not None:
                    row.append(str(int(data.labels[i])))
                w.writerow(row)
    except OSError as exc:
        raise DatasetIOError(f"cannot write {path}: {exc}") from exc
    return path


# ------------------------------------------------------------ experiments


@dataclass(frozen=True)
class RunConfig:
    """One dataset sweep. Exactly one of ``input_path`` / ``builtin`` is set."""

    input_path: str | None = None
    builtin: str | None = None
    name: str | None = None
    label_column: str | None = None
    drop_columns: tuple[str, ...] = ()
    k_min: int = 2
    k_max: int | None = None
    m: float = 2.0
    epsilon: float = 1e-4
    max_iterations: int = 100
    restarts: int = 10
    seed: int = 0
    data_seed: int = 0
    plateau_threshold: float = DEFAULT_PLATEAU
    fratio_rule: str = "argmax"
    output_dir: str = "results"
    write_artifacts: bool = True

    def __post_init__(self) -> None:
        if (self.input_path is None) == (self.builtin is None):
            raise InvalidArgumentError("give exactly one of an input CSV or a builtin dataset")
        if self.fratio_rule not in ("elbow", "argmax"):
            raise InvalidArgumentError("fratio_rule must be 'elbow' or 'argmax'")
        self.fcm_template()  # validates m, epsilon, iterations, restarts, seed

    def fcm_template(self) -> FcmConfig:
        return FcmConfig(2, self.m, self.epsilon, self.max_iterations, self.restarts, self.seed)

    def load(self) -> Dataset:
        if self.builtin is not None:
            data = builtin_dataset(self.builtin, self.data_seed)
            if self.name:
                data = replace(data, name=self.name)
            return data
        return load_csv(self.input_path, self.label_column, self.drop_columns, self.name)


@dataclass
class ExperimentReport:
    dataset: str
    n: int
    true_k: int | None
    verdicts: dict[str, Any]
    visual_candidates: list[int]
    angles: dict[int, float]
    sweep: KSweepResult
    selection: SelectionVerdicts
    angle_violations: list[int] = field(default_factory=list)
    artifacts: dict[str, Path] = field(default_factory=dict)

    def row(self, row_id: int = 1) -> dict[str, Any]:
        return {"id": row_id, "dataset": self.dataset, "n": self.n, "true_k": self.true_k, **self.verdicts}

    def wins(self) -> dict[str, bool]:
        """Whether each column hit the true cluster count (needs labels)."""
        if self.true_k is None:
            return {}
        out = {}
        for key in VERDICT_KEYS:
            v = self.verdicts[key]
            if key == "visual_tsfd":
                out[key] = self.true_k in self.visual_candidates
            else:
                out[key] = v == self.true_k
        return out


def metrics_rows(result: KSweepResult, angles: dict[int, float]) -> list[list[str]]:
    rows = []
    for k in result.ks:
        e = result.per_k[k]
        r = e.report
        rows.append([
            str(k),
            fmt_float(e.inertia.fw), fmt_float(e.inertia.fb), fmt_float(e.inertia.fi),
            fmt_float(r.v_pc), fmt_float(r.v_cl), fmt_float(r.v_fratio), fmt_float(r.v_fch),
            fmt_float(r.v_fs), fmt_float(r.v_xb), fmt_float(r.sfd), fmt_float(r.tsfd), fmt_float(r.psfd),
            fmt_float(angles[k]), str(e.fit.iterations_run), str(e.fit.converged).lower(), str(e.fit.seed_used),
        ])
    return rows


def _write_rows(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(["" if c is None else c for c in row] for row in rows)
    except OSError as exc:
        raise DatasetIOError(f"cannot write {path}: {exc}") from exc
    return path


def report_table_rows(reports: Sequence[ExperimentReport]) -> list[list[Any]]:
    return [[rep.row(i)[key] for key, _ in REPORT_COLUMNS] for i, rep in enumerate(reports, 1)]


def wins_rows(reports: Sequence[ExperimentReport]) -> list[list[Any]]:
    """'# of wins' footer; only datasets with labels take part."""
    scored = [rep.wins() for rep in reports if rep.true_k is not None]
    if not scored:
        return []
    counts = [sum(w[key] for w in scored) for key in VERDICT_KEYS]
    return [["", f"# of wins ({len(scored)} labelled datasets)", "", "", *counts]]


def format_text_table(reports: Sequence[ExperimentReport]) -> str:
    header = [title for _, title in REPORT_COLUMNS]
    body = [["" if c is None else str(c) for c in row] for row in report_table_rows(reports)]
    body += [[str(c) for c in row] for row in wins_rows(reports)]
    widths = [max(len(r[j]) for r in [header, *body]) for j in range(len(header))]

    def line(cells: Sequence[str]) -> str:
        return " | ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

    rule = "-+-".join("-" * w for w in widths)
    out = [line(header), rule, *(line(r) for r in body)]
    notes = []
    for rep in reports:
        for k, msg in sorted(rep.sweep.failures.items()):
            notes.append(f"{rep.dataset}: K={k} failed ({msg})")
        if rep.angle_violations:
            notes.append(f"{rep.dataset}: Visual TSFD angle increased at K={rep.angle_violations}")
    if notes:
        out += ["", "Notes:", *notes]
    return "\n".join(out) + "\n"


def write_report(reports: Sequence[ExperimentReport], out_dir: Path) -> tuple[Path, Path]:
    csv_path = _write_rows(
        out_dir / "report.csv",
        [title for _, title in REPORT_COLUMNS],
        report_table_rows(reports) + wins_rows(reports),
    )
    txt_path = out_dir / "report.txt"
    try:
        txt_path.write_text(format_text_table(reports), encoding="utf-8")
    except OSError as exc:
        raise DatasetIOError(f"cannot write {txt_path}: {exc}") from exc
    return csv_path, txt_path


def evaluate(data: Dataset, config: RunConfig) -> ExperimentReport:
    """Sweep K on ``data`` and collect every verdict; writes nothing."""
    k_max = config.k_max if config.k_max is not None else default_k_max(data.n)
    if k_max < config.k_min:
        raise InsufficientRangeError(f"empty K range [{config.k_min}, {k_max}] for n={data.n}")
    result = sweep(data, config.fcm_template(), config.k_min, k_max)
    if not result.per_k:
        raise DegenerateDataError(f"every K failed on {data.name}: {dict(result.failures)}")
    sel = select_all(result, config.plateau_threshold)
    return ExperimentReport(
        dataset=data.name,
        n=data.n,
        true_k=data.n_labels,
        verdicts=sel.table_row(config.fratio_rule),
        visual_candidates=list(sel.visual.candidates),
        angles=dict(sel.visual.angles),
        sweep=result,
        selection=sel,
        angle_violations=angle_monotonicity_violations(sel.visual.angles),
    )


def write_artifacts(report: ExperimentReport, out_dir: Path) -> dict[str, Path]:
    tag = safe_name(report.dataset)
    arts = {
        "metrics": _write_rows(out_dir / f"metrics_{tag}.csv", METRIC_COLUMNS, metrics_rows(report.sweep, report.angles)),
        "visual_svg": emit_visual_tsfd_svg(report.sweep, out_dir / f"visual_tsfd_{tag}.svg", f"Visual TSFD: {report.dataset}"),
    }
    tsfd = report.sweep.series("tsfd")
    if len(tsfd) >= 2:
        arts["elbow_svg"] = emit_elbow_svg(tsfd, out_dir / f"elbow_tsfd_{tag}.svg", "TSFD", title=f"Elbow TSFD: {report.dataset}")
    return arts


def _ensure_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DatasetIOError(f"cannot create {path}: {exc}") from exc
    return path


def run_experiment(config: RunConfig) -> ExperimentReport:
    """Sweep one dataset and write metrics, report and both charts."""
    data = config.load()
    report = evaluate(data, config)
    if config.write_artifacts:
        out_dir = _ensure_dir(Path(config.output_dir))
        report.artifacts = write_artifacts(report, out_dir)
        report.artifacts["report_csv"], report.artifacts["report_txt"] = write_report([report], out_dir)
    return report


# ------------------------------------------------------------- batch table

ARTIFICIAL_MANIFEST = (
    {"name": "E1071-3", "builtin": "e1071-3"},
    {"name": "Ruspini", "builtin": "ruspini"},
    {"name": "E1071-5", "builtin": "e1071-5"},
    {"name": "E1071-3-overlapped", "builtin": "e1071-3-overlapped"},
    {"name": "Ruspini_noised", "builtin": "ruspini-noised"},
    {"name": "E1071-5-overlapped", "builtin": "e1071-5-overlapped"},
)

_MANIFEST_KEYS = {"name", "csv", "builtin", "label_column", "drop_columns", "k_min", "k_max", "seed", "data_seed"}


def read_manifest(path: str | Path) -> list[dict[str, Any]]:
    """JSON list of dataset entries; ``csv`` paths resolve against the manifest's folder."""
    path = Path(path)
    try:
        entries = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DatasetIOError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"manifest is not valid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(entries, list) or not entries:
        raise ParseError("manifest must be a non-empty JSON list")
    out = []
    for i, entry in enumerate(entries, 1):
        if not isinstance(entry, dict):
            raise ParseError(f"manifest entry {i} is not an object")
        extra = set(entry) - _MANIFEST_KEYS
        if extra:
            raise ParseError(f"manifest entry {i} has unknown keys {sorted(extra)}")
        entry = dict(entry)
        if "csv" in entry and not Path(entry["csv"]).is_absolute():
            entry["csv"] = str(path.parent / entry["csv"])
        out.append(entry)
    return out


def manifest_config(entry: dict[str, Any], base: RunConfig, out_dir: Path) -> RunConfig:
    name = entry.get("name") or Path(entry.get("csv", entry.get("builtin", "dataset"))).stem
    return replace(
        base,
        input_path=entry.get("csv"),
        builtin=entry.get("builtin"),
        name=name,
        label_column=entry.get("label_column", base.label_column if entry.get("csv") else None),
        drop_columns=tuple(entry.get("drop_columns", ())),
        k_min=entry.get("k_min", base.k_min),
        k_max=entry.get("k_max", base.k_max),
        seed=entry.get("seed", base.seed),
        data_seed=entry.get("data_seed", base.data_seed),
        output_dir=str(out_dir / safe_name(name)),
    )


def run_table(entries: Sequence[dict[str, Any]], base: RunConfig, out_dir: str | Path, jobs: int = 1) -> list[ExperimentReport]:
    """Run every manifest entry in its own subdirectory, then write the combined table."""
    out_dir = _ensure_dir(Path(out_dir))
    configs = [manifest_config(e, base, out_dir) for e in entries]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run_experiment, configs))
    else:
        reports = [run_experiment(c) for c in configs]
    write_report(reports, out_dir)
    return reports
