"""Batch pipeline: walk a dataset, pair scans, augment, write, report.

Determinism contract: the output tree is a pure function of (dataset,
config).  Each task derives its own seed from the global seed and its stable
identity (base-scan index, multiplier slot) by hashing, so worker count and
scheduling order can never change what gets written.  Per-task rng schedules
are listed in the augment module docstring; the per-mode schedules used here
are:

* polarmix / uda_mix: the polar_mix schedule;
* scene_swap: one sector-start draw;
* rotate_paste: the preset's angle draws;
* simple_paste / mix3d: no draws;
* cga: scale draw then angle draw.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from . import __version__ as _version
from .augment import (
    AugmentConfig,
    global_aug,
    mix3d_concat,
    polar_mix,
    rotate_paste,
    sample_angles,
    sample_sector,
    scene_swap,
    simple_paste,
    uda_mix,
)
from .config import RecipeConfig
from .scan import Scan
from .scan_io import read_labels, read_scan, write_scan

log = logging.getLogger(__name__)

SCAN_SUFFIX = ".bin"
LABEL_SUFFIX = ".label"
CONFIDENCE_SUFFIX = ".conf"
REPORT_NAME = "run_report.json"

# Distinct rng stream for pairing so it never aliases a task seed.
_PAIRING_STREAM = 0x9A1C


class PipelineError(Exception):
    """Dataset layout or pairing problem that prevents a run."""


@dataclass(frozen=True)
class DatasetEntry:
    """One scan on disk: payload path, optional label partner, tree-relative id."""

    scan_path: Path
    label_path: Path | None
    rel: str


def _label_partner(scan_path: Path) -> Path | None:
    sibling = scan_path.with_suffix(LABEL_SUFFIX)
    if sibling.is_file():
        return sibling
    # 64-beam dataset layout: sequences/NN/velodyne/*.bin + sequences/NN/labels/*.label
    if scan_path.parent.name == "velodyne":
        kitti = scan_path.parent.parent / "labels" / (scan_path.stem + LABEL_SUFFIX)
        if kitti.is_file():
            return kitti
    return None


def enumerate_dataset(root: Path | str) -> list[DatasetEntry]:
    """All scans under ``root`` in lexicographic order of their relative paths.

    Scans missing a label partner are still listed (label_path None) with a
    warning; pairing conventions: ``<name>.label`` beside the scan, or the
    ``velodyne/`` - ``labels/`` sibling-directory layout.
    """
    root = Path(root)
    if not root.is_dir():
        raise PipelineError(f"dataset root {root} is not a readable directory")
    entries = []
    for scan_path in sorted(root.rglob(f"*{SCAN_SUFFIX}")):
        rel = scan_path.relative_to(root).as_posix()
        label_path = _label_partner(scan_path)
        if label_path is None:
            log.warning("no label file for %s", scan_path)
        entries.append(DatasetEntry(scan_path, label_path, rel))
    return entries


def pair_scans(
    n_entries: int, pairing: str, seed: int
) -> list[tuple[int, int]]:
    """Assign a donor index B to every base index A; never pairs a scan with itself.

    ``sequential``: B = (A + 1) mod N.  ``shuffled``: a seeded permutation,
    re-drawn up to 16 times while it has fixed points, then any remaining
    self-pairs are broken by swapping with the neighbouring assignment.
    """
    if pairing not in ("shuffled", "sequential"):
        raise PipelineError(f"unknown pairing {pairing!r}")
    if n_entries < 2:
        raise PipelineError(
            f"pairing {pairing!r} needs at least 2 scans, dataset has {n_entries}"
        )
    if pairing == "sequential":
        return [(i, (i + 1) % n_entries) for i in range(n_entries)]
    rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, _PAIRING_STREAM])
    perm = rng.permutation(n_entries)
    for _ in range(16):
        if not np.any(perm == np.arange(n_entries)):
            break
        perm = rng.permutation(n_entries)
    for i in np.flatnonzero(perm == np.arange(n_entries)):
        if perm[i] != i:  # already broken by a previous swap
            continue
        j = (int(i) + 1) % n_entries
        # perm[j] != i here (i is taken by position i), so both entries end up non-fixed
        perm[i], perm[j] = perm[j], perm[i]
    return [(i, int(perm[i])) for i in range(n_entries)]


def derive_task_seed(global_seed: int, a_index: int, slot: int) -> int:
    """Stable 64-bit per-task seed: sha256 of "<seed>:<a_index>:<slot>", first 8 bytes LE."""
    digest = hashlib.sha256(f"{global_seed}:{a_index}:{slot}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "little")


def histogram_labels(labels: np.ndarray) -> dict[int, int]:
    sem = np.asarray(labels, dtype=np.uint32) & np.uint32(0xFFFF)
    ids, counts = np.unique(sem, return_counts=True)
    return {int(i): int(c) for i, c in zip(ids, counts)}


def report_stats(scans: Iterable[Scan]) -> dict[int, int]:
    """Exact per-semantic-class point counts aggregated over the given scans."""
    total: dict[int, int] = {}
    for scan in scans:
        for cid, count in histogram_labels(scan.labels).items():
            total[cid] = total.get(cid, 0) + count
    return total


def _merge_hist(into: dict[int, int], part: dict[int, int]) -> None:
    for cid, count in part.items():
        into[cid] = into.get(cid, 0) + count


@dataclass
class TaskRecord:
    index: int
    slot: int
    seed: int
    scan_a: str
    scan_b: str | None
    output_scan: str
    status: str = "ok"
    error: str | None = None
    points_a: int = 0
    points_b: int = 0
    points_out: int = 0
    histogram_out: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "slot": self.slot,
            "seed": self.seed,
            "scan_a": self.scan_a,
            "scan_b": self.scan_b,
            "output_scan": self.output_scan,
            "status": self.status,
            "error": self.error,
            "points_a": self.points_a,
            "points_b": self.points_b,
            "points_out": self.points_out,
        }


@dataclass
class RunReport:
    config_text: str
    tasks: list[TaskRecord]
    histogram_input: dict[int, int]
    histogram_output: dict[int, int]
    wall_time_s: float
    workers: int

    @property
    def num_failed(self) -> int:
        return sum(1 for t in self.tasks if t.status != "ok")

    def to_json(self) -> dict:
        return {
            "tool_version": _version,
            "config": self.config_text,
            "workers": self.workers,
            "num_tasks": len(self.tasks),
            "num_failed": self.num_failed,
            "wall_time_s": self.wall_time_s,
            "histogram_input": {str(k): v for k, v in sorted(self.histogram_input.items())},
            "histogram_output": {str(k): v for k, v in sorted(self.histogram_output.items())},
            "tasks": [t.to_json() for t in self.tasks],
        }

    def write(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_json(), indent=2) + "\n")


@dataclass(frozen=True)
class _Task:
    index: int
    slot: int
    seed: int
    entry_a: DatasetEntry
    entry_b: DatasetEntry | None
    out_scan: Path
    out_label: Path
    out_rel: str


def _read_confidences(entry: DatasetEntry, n_points: int) -> np.ndarray:
    conf_path = entry.scan_path.with_suffix(CONFIDENCE_SUFFIX)
    if not conf_path.is_file():
        # No confidence sidecar: treat every pseudo-label as fully confident.
        return np.ones(n_points, dtype=np.float64)
    payload = conf_path.read_bytes()
    if len(payload) % 4 != 0:
        raise PipelineError(f"{conf_path}: {len(payload)} bytes is not a multiple of 4")
    raw = np.frombuffer(payload, dtype="<f4")
    if raw.shape[0] != n_points:
        raise PipelineError(
            f"{conf_path}: {raw.shape[0]} confidences for {n_points} points"
        )
    return raw.astype(np.float64)


def _apply_operator(cfg: RecipeConfig, task: _Task, scan_a: Scan, scan_b: Scan | None) -> Scan:
    rng = np.random.default_rng(task.seed)
    aug: AugmentConfig = cfg.augment
    op = cfg.operator
    if op == "polarmix":
        return polar_mix(scan_a, scan_b, aug, rng)
    if op == "scene_swap":
        sector = sample_sector(aug.sector_width, rng)
        return scene_swap(scan_a, scan_b, sector)
    if op == "rotate_paste":
        omegas = sample_angles(aug.angle_preset, rng)
        return rotate_paste(scan_a, scan_b, aug.classes, omegas)
    if op == "simple_paste":
        return simple_paste(scan_a, scan_b, aug.classes)
    if op == "mix3d":
        return mix3d_concat(scan_a, scan_b)
    if op == "cga":
        return global_aug(scan_a, (cfg.scale_lo, cfg.scale_hi), rng)
    if op == "uda_mix":
        conf = _read_confidences(task.entry_b, len(scan_b))
        return uda_mix(scan_a, scan_b, conf, cfg.conf_threshold, aug, rng)
    raise PipelineError(f"unknown operator {op!r}")


def _run_task(cfg: RecipeConfig, task: _Task) -> TaskRecord:
    record = TaskRecord(
        index=task.index,
        slot=task.slot,
        seed=task.seed,
        scan_a=task.entry_a.rel,
        scan_b=task.entry_b.rel if task.entry_b is not None else None,
        output_scan=task.out_rel,
    )
    try:
        scan_a = read_scan(task.entry_a.scan_path, task.entry_a.label_path)
        scan_b = None
        if task.entry_b is not None:
            scan_b = read_scan(task.entry_b.scan_path, task.entry_b.label_path)
        result = _apply_operator(cfg, task, scan_a, scan_b)
        write_scan(result, task.out_scan, task.out_label)
        record.points_a = len(scan_a)
        record.points_b = len(scan_b) if scan_b is not None else 0
        record.points_out = len(result)
        record.histogram_out = histogram_labels(result.labels)
    except Exception as exc:  # continue-and-report: corruption is usually localized
        record.status = "failed"
        record.error = f"{type(exc).__name__}: {exc}"
    return record


def build_tasks(cfg: RecipeConfig) -> tuple[list[_Task], list[DatasetEntry]]:
    """Enumerate inputs, compute the pairing, and lay out every task."""
    if cfg.operator == "uda_mix":
        base_entries = enumerate_dataset(cfg.source_root)
        donor_entries = enumerate_dataset(cfg.target_root)
        if not base_entries:
            raise PipelineError(f"no scans under source root {cfg.source_root}")
        if not donor_entries:
            raise PipelineError(f"no scans under target root {cfg.target_root}")
        if cfg.pairing == "sequential":
            pairs = [(i, i % len(donor_entries)) for i in range(len(base_entries))]
        else:
            rng = np.random.default_rng([cfg.seed & 0xFFFFFFFFFFFFFFFF, _PAIRING_STREAM])
            draws = rng.integers(0, len(donor_entries), size=len(base_entries))
            pairs = [(i, int(b)) for i, b in enumerate(draws)]
    else:
        base_entries = enumerate_dataset(cfg.input_root)
        donor_entries = base_entries
        if not base_entries:
            raise PipelineError(f"no scans under input root {cfg.input_root}")
        if cfg.operator == "cga":
            pairs = [(i, -1) for i in range(len(base_entries))]
        else:
            pairs = pair_scans(len(base_entries), cfg.pairing, cfg.seed)

    tasks = []
    for a_index, b_index in pairs:
        entry_a = base_entries[a_index]
        entry_b = donor_entries[b_index] if b_index >= 0 else None
        rel = Path(entry_a.rel)
        for slot in range(cfg.multiplier):
            stem = f"{rel.stem}_aug{slot}"
            out_rel = (rel.parent / (stem + SCAN_SUFFIX)).as_posix()
            out_scan = cfg.output_root / rel.parent / (stem + SCAN_SUFFIX)
            out_label = cfg.output_root / rel.parent / (stem + LABEL_SUFFIX)
            tasks.append(
                _Task(
                    index=a_index,
                    slot=slot,
                    seed=derive_task_seed(cfg.seed, a_index, slot),
                    entry_a=entry_a,
                    entry_b=entry_b,
                    out_scan=out_scan,
                    out_label=out_label,
                    out_rel=out_rel,
                )
            )
    return tasks, base_entries


def run_recipe(cfg: RecipeConfig) -> RunReport:
    """Execute every task, write outputs and the JSON report, return the report.

    Failures are recorded per task and do not stop the run; the caller turns
    ``report.num_failed`` into the process exit status.
    """
    from .config import effective_config_text

    start = time.perf_counter()
    tasks, base_entries = build_tasks(cfg)

    hist_in: dict[int, int] = {}
    for entry in base_entries:
        if entry.label_path is None:
            continue
        try:
            _merge_hist(hist_in, histogram_labels(read_labels(entry.label_path)))
        except Exception as exc:
            # corrupt inputs surface as task failures; stats just skip them
            log.warning("skipping %s in input histogram: %s", entry.label_path, exc)

    if cfg.workers == 1:
        records = [_run_task(cfg, task) for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(lambda t: _run_task(cfg, t), tasks))

    records.sort(key=lambda r: (r.index, r.slot))
    hist_out: dict[int, int] = {}
    for record in records:
        _merge_hist(hist_out, record.histogram_out)

    report = RunReport(
        config_text=effective_config_text(cfg),
        tasks=records,
        histogram_input=hist_in,
        histogram_output=hist_out,
        wall_time_s=time.perf_counter() - start,
        workers=cfg.workers,
    )
    report.write(cfg.output_root / REPORT_NAME)
    for record in records:
        if record.status != "ok":
            log.error("task %s slot %d failed: %s", record.scan_a, record.slot, record.error)
    return report
