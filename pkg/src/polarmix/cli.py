"""The ``augment`` command line tool.

Subcommands: ``run`` (execute a recipe), ``stats`` (class histogram of a
dataset), ``export-ply`` (colorized inspection export), ``pair-preview``
(print the pairing a recipe would use, without running it).

Exit codes: 0 success, 1 at least one task failed, 2 configuration or usage
error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, effective_config_text, load_recipe
from .pipeline import (
    PipelineError,
    build_tasks,
    enumerate_dataset,
    histogram_labels,
    run_recipe,
)
from .scan_io import ScanIOError, export_ply, load_palette, read_labels, read_scan


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = load_recipe(args.config)
    if args.print_effective_config:
        sys.stdout.write(effective_config_text(cfg))
        return 0
    report = run_recipe(cfg)
    print(
        f"{len(report.tasks)} tasks, {report.num_failed} failed, "
        f"{report.wall_time_s:.2f}s wall, report at {cfg.output_root / 'run_report.json'}"
    )
    return 1 if report.num_failed else 0


def _cmd_stats(args: argparse.Namespace) -> int:
    entries = enumerate_dataset(args.root)
    hist: dict[int, int] = {}
    labelled = 0
    for entry in entries:
        if entry.label_path is None:
            continue
        labelled += 1
        for cid, count in histogram_labels(read_labels(entry.label_path)).items():
            hist[cid] = hist.get(cid, 0) + count
    print(f"# {len(entries)} scans ({labelled} labelled) under {args.root}")
    print("class_id points")
    for cid in sorted(hist):
        print(f"{cid} {hist[cid]}")
    print(f"total {sum(hist.values())}")
    return 0


def _cmd_export_ply(args: argparse.Namespace) -> int:
    scan = read_scan(args.scan, args.labels)
    palette = load_palette(args.palette) if args.palette else None
    export_ply(scan, args.out, palette=palette)
    print(f"wrote {len(scan)} vertices to {args.out}")
    return 0


def _cmd_pair_preview(args: argparse.Namespace) -> int:
    cfg = load_recipe(args.config)
    tasks, _ = build_tasks(cfg)
    for task in tasks:
        donor = task.entry_b.rel if task.entry_b is not None else "-"
        print(f"{task.entry_a.rel} <- {donor} slot={task.slot} seed={task.seed}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="augment",
        description="Deterministic batch augmentation over on-disk LiDAR datasets.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a recipe config")
    p_run.add_argument("--config", required=True, type=Path)
    p_run.add_argument(
        "--print-effective-config",
        action="store_true",
        help="print all resolved settings and exit without running",
    )
    p_run.set_defaults(func=_cmd_run)

    p_stats = sub.add_parser("stats", help="per-class point counts of a dataset")
    p_stats.add_argument("--root", required=True, type=Path)
    p_stats.set_defaults(func=_cmd_stats)

    p_ply = sub.add_parser("export-ply", help="write a colorized ASCII PLY of one scan")
    p_ply.add_argument("--scan", required=True, type=Path)
    p_ply.add_argument("--labels", type=Path)
    p_ply.add_argument("--out", required=True, type=Path)
    p_ply.add_argument("--palette", type=Path, help="palette file: 'class_id r g b' lines")
    p_ply.set_defaults(func=_cmd_export_ply)

    p_pairs = sub.add_parser("pair-preview", help="print the pairing without executing")
    p_pairs.add_argument("--config", required=True, type=Path)
    p_pairs.set_defaults(func=_cmd_pair_preview)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, PipelineError, ScanIOError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
