"""Command-line entry point: ``fuzzy-tsfd generate | sweep | table``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .datagen import BUILTIN, GaussianSpec, NoiseSpec, add_skewed_noise, gen_gaussian_clusters, gen_overlapped
from .errors import FuzzyTsfdError, InvalidArgumentError
from .harness import ARTIFICIAL_MANIFEST, RunConfig, format_text_table, load_csv, read_manifest, run_experiment, run_table, write_csv
from .selection import DEFAULT_PLATEAU

log = logging.getLogger("fuzzytsfd")


def _add_fit_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("clustering")
    g.add_argument("--k-min", type=int, default=2)
    g.add_argument("--k-max", type=int, default=None, help="default: min(18, n - 1)")
    g.add_argument("--m", type=float, default=2.0, help="fuzziness coefficient (> 1)")
    g.add_argument("--epsilon", type=float, default=1e-4, help="relative FW change that stops FCM")
    g.add_argument("--max-iterations", type=int, default=100)
    g.add_argument("--restarts", type=int, default=10)
    g.add_argument("--seed", type=int, default=0, help="restart r uses seed + r")
    g.add_argument("--plateau-threshold", type=float, default=DEFAULT_PLATEAU,
                   help="Visual TSFD: minimum angle drop, as a fraction of the angle at k-min")
    g.add_argument("--fratio-rule", choices=("argmax", "elbow"), default="argmax",
                   help="how the FRatio column picks K")
    p.add_argument("--out", default="results", help="output directory")


def _base_config(args: argparse.Namespace, **kw) -> RunConfig:
    return RunConfig(
        k_min=args.k_min,
        k_max=args.k_max,
        m=args.m,
        epsilon=args.epsilon,
        max_iterations=args.max_iterations,
        restarts=args.restarts,
        seed=args.seed,
        plateau_threshold=args.plateau_threshold,
        fratio_rule=args.fratio_rule,
        output_dir=args.out,
        **kw,
    )


def cmd_generate(args: argparse.Namespace) -> int:
    if args.kind == "gaussian":
        data = gen_gaussian_clusters(GaussianSpec(args.clusters, args.points, args.sd, args.dim, args.seed))
    elif args.kind == "overlapped":
        data = gen_overlapped(GaussianSpec(args.clusters, args.points, dimension=args.dim, seed=args.seed))
    elif args.kind == "noise":
        if not args.input:
            raise InvalidArgumentError("generate noise: --input is required")
        base = load_csv(args.input, args.label_column)
        spec = NoiseSpec(args.noise_per_label, args.left_probability, args.offset_scale, args.seed)
        data = add_skewed_noise(base, spec)
    else:
        data = BUILTIN[args.kind](args.seed)
    write_csv(data, args.output)
    print(f"wrote {data.n} points (d={data.d}) to {args.output}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _base_config(
        args,
        input_path=args.csv,
        builtin=args.builtin,
        name=args.name,
        label_column=args.label_column,
        drop_columns=tuple(args.drop_columns or ()),
        data_seed=args.data_seed,
    )
    report = run_experiment(cfg)
    print(format_text_table([report]), end="")
    for k in sorted(report.angles):
        print(f"K={k:>3}  TSFD angle = {report.angles[k]:.4f} deg")
    print(f"artifacts in {Path(args.out).resolve()}")
    return 0


def cmd_table(args: argparse.Namespace) -> int:
    if args.manifest:
        entries = read_manifest(args.manifest)
    else:
        entries = [dict(e) for e in ARTIFICIAL_MANIFEST]
    # source fields are placeholders; each manifest entry overrides them
    base = _base_config(args, builtin="ruspini", label_column=args.label_column, data_seed=args.data_seed)
    reports = run_table(entries, base, args.out, jobs=args.jobs)
    print(format_text_table(reports), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzy-tsfd", description="Fuzzy C-Means validity indices and Visual TSFD.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an artificial dataset as CSV")
    g.add_argument("kind", choices=sorted(BUILTIN) + ["gaussian", "overlapped", "noise"])
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--clusters", type=int, default=3)
    g.add_argument("--points", type=int, default=50, help="points per cluster")
    g.add_argument("--sd", type=float, default=0.3)
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--input", help="labelled CSV to add noise to (kind=noise)")
    g.add_argument("--label-column", default="label")
    g.add_argument("--noise-per-label", type=int, default=5)
    g.add_argument("--left-probability", type=float, default=0.25)
    g.add_argument("--offset-scale", type=float, default=None, help="default: 2x each label's per-coordinate sd")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("sweep", help="sweep K on one dataset")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--csv", help="input CSV with a header row")
    src.add_argument("--builtin", choices=sorted(BUILTIN))
    s.add_argument("--name")
    s.add_argument("--label-column")
    s.add_argument("--drop-columns", nargs="*")
    s.add_argument("--data-seed", type=int, default=0, help="seed for builtin generators")
    _add_fit_flags(s)
    s.set_defaults(func=cmd_sweep)

    t = sub.add_parser("table", help="sweep several datasets into one verdict table")
    t.add_argument("--manifest", help="JSON list of datasets; default: the built-in artificial sets")
    t.add_argument("--label-column", help="default label column for CSV entries")
    t.add_argument("--data-seed", type=int, default=0)
    t.add_argument("--jobs", type=int, default=1)
    _add_fit_flags(t)
    t.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FuzzyTsfdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
