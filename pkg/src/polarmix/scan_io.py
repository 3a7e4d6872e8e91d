"""Bit-exact readers/writers for on-disk scans, labels, and PLY export.

File formats:

* scan: ``<name>.bin`` - packed little-endian float32 quadruples
  (x, y, z, intensity), 16 bytes per point;
* labels: ``<name>.label`` - packed little-endian uint32, 4 bytes per
  point, low 16 bits semantic id, high 16 bits instance id;
* inspection: ASCII PLY 1.0 with per-vertex x y z (float) and
  red green blue (uchar).

Readers validate structure only (byte lengths, scan/label count agreement)
and never reorder, drop, or synthesize records; value-level policing such as
finiteness is the concern of the layers above.  Writers go through a
temporary file plus atomic rename, so a crashed run never leaves a
half-written file behind.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Mapping

import numpy as np

from .scan import Scan, UNLABELED

POINT_RECORD_BYTES = 16
LABEL_RECORD_BYTES = 4

# Color used for semantic ids missing from the palette.
FALLBACK_COLOR = (128, 128, 128)


class ScanIOError(Exception):
    """Base class for structured scan/label file errors."""

    def __init__(self, message: str, *, path: Path | str | None = None) -> None:
        super().__init__(message)
        self.path = Path(path) if path is not None else None


class FileFormatError(ScanIOError):
    """Byte length not a whole number of records; ``offset`` is where the partial record starts."""

    def __init__(self, path: Path | str, size: int, record_bytes: int) -> None:
        offset = size - (size % record_bytes)
        super().__init__(
            f"{path}: {size} bytes is not a multiple of {record_bytes}; "
            f"partial record at byte offset {offset}",
            path=path,
        )
        self.size = size
        self.offset = offset
        self.record_bytes = record_bytes


class CountMismatchError(ScanIOError):
    """Scan and label files describe different point counts."""

    def __init__(self, scan_path: Path | str, label_path: Path | str, scan_count: int, label_count: int) -> None:
        super().__init__(
            f"{label_path}: {label_count} labels but {scan_path} has {scan_count} points",
            path=label_path,
        )
        self.scan_count = scan_count
        self.label_count = label_count


def read_points(path: Path | str) -> np.ndarray:
    """Read an (N, 4) float32 point array from a packed .bin file."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ScanIOError(f"{path}: {exc}", path=path) from exc
    if len(raw) % POINT_RECORD_BYTES != 0:
        raise FileFormatError(path, len(raw), POINT_RECORD_BYTES)
    return np.frombuffer(raw, dtype="<f4").reshape(-1, 4)


def read_labels(path: Path | str) -> np.ndarray:
    """Read an N-long uint32 label array from a packed .label file."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ScanIOError(f"{path}: {exc}", path=path) from exc
    if len(raw) % LABEL_RECORD_BYTES != 0:
        raise FileFormatError(path, len(raw), LABEL_RECORD_BYTES)
    return np.frombuffer(raw, dtype="<u4")


def read_scan(scan_path: Path | str, label_path: Path | str | None = None) -> Scan:
    """Load a scan; without a label file every point gets the unlabeled id 0."""
    points = read_points(scan_path)
    if label_path is None:
        labels = np.full(points.shape[0], UNLABELED, dtype=np.uint32)
    else:
        labels = read_labels(label_path)
        if labels.shape[0] != points.shape[0]:
            raise CountMismatchError(scan_path, label_path, points.shape[0], labels.shape[0])
    return Scan(points, labels)


def _atomic_write(path: Path, payload: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp_name, path)
    except OSError as exc:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise ScanIOError(f"{path}: {exc}", path=path) from exc


def write_scan(scan: Scan, scan_path: Path | str, label_path: Path | str) -> None:
    """Write scan and labels; both files are replaced atomically."""
    _atomic_write(Path(scan_path), np.ascontiguousarray(scan.points, dtype="<f4").tobytes())
    _atomic_write(Path(label_path), np.ascontiguousarray(scan.labels, dtype="<u4").tobytes())


def stable_color(class_id: int) -> tuple[int, int, int]:
    """Deterministic, well-spread RGB for a semantic id (used when no palette is given)."""
    # Golden-ratio hue walk; same id always maps to the same color.
    hue = (int(class_id) * 0.61803398875) % 1.0
    i = int(hue * 6.0)
    f = hue * 6.0 - i
    v, p, q, t = 230, 60, int(230 - 170 * f), int(60 + 170 * f)
    rgb = [(v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)][i % 6]
    return rgb


def export_ply(
    scan: Scan,
    path: Path | str,
    palette: Mapping[int, tuple[int, int, int]] | None = None,
) -> None:
    """Write an ASCII PLY of the scan, colored by semantic id.

    With ``palette=None`` ids are colored by :func:`stable_color`; with a
    palette, ids missing from it fall back to mid-gray ``FALLBACK_COLOR``.
    """
    sem = scan.semantic_ids
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(scan)}",
        "property float x",
        "property float y",
        "property float z",
        "property uchar red",
        "property uchar green",
        "property uchar blue",
        "end_header",
    ]
    for i in range(len(scan)):
        cid = int(sem[i])
        if palette is None:
            r, g, b = stable_color(cid)
        else:
            r, g, b = palette.get(cid, FALLBACK_COLOR)
        x, y, z = (f"{float(v):.9g}" for v in scan.points[i, :3])
        lines.append(f"{x} {y} {z} {r} {g} {b}")
    _atomic_write(Path(path), ("\n".join(lines) + "\n").encode("ascii"))


def load_palette(path: Path | str) -> dict[int, tuple[int, int, int]]:
    """Parse a palette file: one ``class_id r g b`` per line, # comments allowed."""
    palette: dict[int, tuple[int, int, int]] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 4:
            raise ScanIOError(f"{path}:{lineno}: expected 'class_id r g b', got {line!r}", path=path)
        try:
            cid, r, g, b = (int(p) for p in parts)
        except ValueError as exc:
            raise ScanIOError(f"{path}:{lineno}: non-integer field in {line!r}", path=path) from exc
        if not all(0 <= v <= 255 for v in (r, g, b)):
            raise ScanIOError(f"{path}:{lineno}: RGB out of range in {line!r}", path=path)
        palette[cid] = (r, g, b)
    return palette
