"""The Scan value type: an (N, 4) float32 point array paired with N uint32 labels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SEMANTIC_BITS = np.uint32(0xFFFF)
UNLABELED = np.uint32(0)


@dataclass(frozen=True)
class Scan:
    """One LiDAR sweep: points (x, y, z, intensity) float32 plus per-point labels.

    Labels are 32-bit words: low 16 bits semantic id, high 16 bits instance
    id.  Operators only interpret the semantic half and always carry the
    full word along with its point.  Instances are treated as immutable;
    operators return new Scans and never modify their inputs.
    """

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        pts = np.ascontiguousarray(self.points, dtype=np.float32)
        lab = np.ascontiguousarray(self.labels, dtype=np.uint32)
        if pts.ndim != 2 or pts.shape[1] != 4:
            raise ValueError(f"scan points must be (N, 4), got shape {pts.shape}")
        if lab.ndim != 1:
            raise ValueError(f"scan labels must be 1-D, got shape {lab.shape}")
        if pts.shape[0] != lab.shape[0]:
            raise ValueError(
                f"points/labels length mismatch: {pts.shape[0]} points vs {lab.shape[0]} labels"
            )
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", lab)

    def __len__(self) -> int:
        return self.points.shape[0]

    @classmethod
    def empty(cls) -> "Scan":
        return cls(np.empty((0, 4), dtype=np.float32), np.empty(0, dtype=np.uint32))

    @property
    def semantic_ids(self) -> np.ndarray:
        return self.labels & SEMANTIC_BITS

    @property
    def instance_ids(self) -> np.ndarray:
        return self.labels >> np.uint32(16)

    def take(self, selector: np.ndarray) -> "Scan":
        """Filter or permute points and labels with the same index/mask."""
        return Scan(self.points[selector], self.labels[selector])


def concat_scans(*scans: Scan) -> Scan:
    if not scans:
        return Scan.empty()
    return Scan(
        np.concatenate([s.points for s in scans], axis=0),
        np.concatenate([s.labels for s in scans], axis=0),
    )


def scans_equal(a: Scan, b: Scan) -> bool:
    """Elementwise equality of points and labels (NaN-unaware, like ==)."""
    return np.array_equal(a.points, b.points) and np.array_equal(a.labels, b.labels)
