"""Cross-scan augmentation operators for rotating-LiDAR scans.

Two families of operators are provided:

* sector swapping: exchange the points of an azimuth sector between two
  scans, preserving the circular scanning geometry;
* rotate-and-paste: crop all points of chosen semantic classes from a donor
  scan, spin copies of them about the z-axis, and append them to a base scan.

``polar_mix`` composes the two behind independent probability gates, and a
handful of reference baselines (whole-scene concatenation, global
scale/rotate, plain pasting) plus a source/target mixing mode for domain
adaptation round out the set.

Every operator is a pure function: given the same inputs (and, where
randomness is involved, the same generator state) it produces the same Scan,
bit for bit.  Randomness always comes from an explicit
``numpy.random.Generator`` owned by the caller, and the number and order of
draws per operator is fixed and documented so runs can be replayed:

* ``polar_mix``: gate-1 uniform, [sector start uniform], gate-2 uniform,
  [angle draws per preset].  Gates fire when ``draw < delta``.
* ``sample_sector``: one uniform for the start angle.
* ``sample_angles``: kitti3 two uniforms, perpendicular2 one, explicit none.
* ``global_aug``: one uniform for scale, then one for the rotation angle.

Base points always precede donor points in every result, so output layouts
are deterministic and byte-comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import PI, TWO_PI, SectorSpec, class_mask, rotate_z, sector_mask
from .scan import Scan

# kitti3 draws land in (0, OMEGA_STEP] and (OMEGA_STEP, 2*OMEGA_STEP].
OMEGA_STEP = 2.0 * math.pi / 3.0
HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class AnglePreset:
    """Rotation-angle sampling rule for rotate-and-paste copies.

    * ``kitti3``: three angles [0, u1, u2] with u1 uniform in (0, 120deg]
      and u2 uniform in (120deg, 240deg] (64-beam urban scans).
    * ``perpendicular2``: two angles [0, +-90deg], sign picked uniformly
      (sparser 32-beam / campus scans).
    * ``explicit``: a fixed list, returned verbatim.
    """

    kind: str
    angles: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("kitti3", "perpendicular2", "explicit"):
            raise ValueError(f"unknown angle preset {self.kind!r}")

    @classmethod
    def kitti3(cls) -> "AnglePreset":
        return cls("kitti3")

    @classmethod
    def perpendicular2(cls) -> "AnglePreset":
        return cls("perpendicular2")

    @classmethod
    def explicit(cls, angles: Iterable[float]) -> "AnglePreset":
        return cls("explicit", tuple(float(a) for a in angles))


@dataclass(frozen=True)
class AugmentConfig:
    """Everything that determines one augmentation run.

    ``classes`` is the semantic-id set cropped by the paste stage; there is
    no universal default, pick it per dataset (see the README for a
    suggested starting set).  ``delta1``/``delta2`` gate the swap and paste
    stages independently; the defaults (0.5, 1.0) swap half the time and
    always paste.
    """

    classes: frozenset[int] = frozenset()
    sector_width: float = PI
    angle_preset: AnglePreset = field(default_factory=AnglePreset.kitti3)
    delta1: float = 0.5
    delta2: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.sector_width <= TWO_PI:
            raise ValueError(f"sector_width {self.sector_width!r} outside [0, 2*pi]")
        for name in ("delta1", "delta2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} {v!r} outside [0, 1]")
        object.__setattr__(self, "classes", frozenset(int(c) for c in self.classes))


def sample_sector(width: float, rng: np.random.Generator) -> SectorSpec:
    """Sector of the given width with its start angle uniform in [-pi, pi).

    Consumes exactly one draw.  Width 2*pi yields the full circle.
    """
    if not 0.0 <= width <= TWO_PI:
        raise ValueError(f"sector width {width!r} outside [0, 2*pi]")
    alpha = -PI + TWO_PI * rng.random()
    if width == TWO_PI:
        return SectorSpec.full_circle()
    return SectorSpec.from_start_width(alpha, width)


def sample_angles(preset: AnglePreset, rng: np.random.Generator) -> list[float]:
    """Draw a rotation-angle list from the preset (see AnglePreset)."""
    if preset.kind == "kitti3":
        u1 = OMEGA_STEP * (1.0 - rng.random())
        u2 = OMEGA_STEP * (2.0 - rng.random())
        return [0.0, u1, u2]
    if preset.kind == "perpendicular2":
        sign_draw = rng.random()
        return [0.0, HALF_PI if sign_draw < 0.5 else -HALF_PI]
    return list(preset.angles)


def scene_swap(scan_a: Scan, scan_b: Scan, sector: SectorSpec) -> Scan:
    """Replace scan A's sector with scan B's points from the same sector.

    Result: A's points outside the sector (in A's order) followed by B's
    points inside it (in B's order); labels travel with their points.  The
    symmetric output (B receiving A's sector) is
    ``scene_swap(scan_b, scan_a, sector)``.
    """
    keep_a = ~sector_mask(scan_a.points, sector)
    take_b = sector_mask(scan_b.points, sector)
    return Scan(
        np.concatenate((scan_a.points[keep_a], scan_b.points[take_b]), axis=0),
        np.concatenate((scan_a.labels[keep_a], scan_b.labels[take_b]), axis=0),
    )


def rotate_paste(
    scan_a: Scan,
    scan_b: Scan,
    classes: Iterable[int],
    omegas: Sequence[float],
) -> Scan:
    """Append z-rotated copies of B's class-cropped points to A.

    The crop keeps B's point order.  One copy is appended per angle in
    ``omegas``, in order; each copy reuses the cropped labels verbatim
    (semantic labels are invariant under rotation, and the instance half of
    the word is carried through unchanged).  The result has exactly
    ``len(A) + len(omegas) * crop_size`` points.
    """
    omegas = [float(w) for w in omegas]
    crop = class_mask(scan_b.labels, classes)
    n_crop = int(np.count_nonzero(crop))
    if not omegas or n_crop == 0:
        return scan_a
    crop_points = scan_b.points[crop]
    crop_labels = scan_b.labels[crop]
    point_parts = [scan_a.points]
    label_parts = [scan_a.labels]
    for w in omegas:
        point_parts.append(rotate_z(crop_points, w))
        label_parts.append(crop_labels)
    return Scan(np.concatenate(point_parts, axis=0), np.concatenate(label_parts, axis=0))


def simple_paste(scan_a: Scan, scan_b: Scan, classes: Iterable[int]) -> Scan:
    """Paste a single unrotated copy of B's class-cropped points onto A."""
    return rotate_paste(scan_a, scan_b, classes, [0.0])


def mix3d_concat(scan_a: Scan, scan_b: Scan) -> Scan:
    """Whole-scene concatenation baseline: A's points followed by all of B's."""
    if len(scan_b) == 0:
        return scan_a
    if len(scan_a) == 0:
        return scan_b
    return Scan(
        np.concatenate((scan_a.points, scan_b.points), axis=0),
        np.concatenate((scan_a.labels, scan_b.labels), axis=0),
    )


def global_aug(
    scan: Scan, scale_range: tuple[float, float], rng: np.random.Generator
) -> Scan:
    """Whole-scan baseline: one uniform scale of x/y/z, one uniform z-rotation.

    Draw order is scale then angle.  Intensity is untouched.  Scaling and
    rotation are applied in float64 and rounded once into float32.
    """
    lo, hi = float(scale_range[0]), float(scale_range[1])
    if not (0.0 < lo <= hi):
        raise ValueError(f"invalid scale range [{lo!r}, {hi!r}]: need 0 < lo <= hi")
    scale = lo + (hi - lo) * rng.random()
    angle = -PI + TWO_PI * rng.random()
    x = scale * scan.points[:, 0].astype(np.float64)
    y = scale * scan.points[:, 1].astype(np.float64)
    z = scale * scan.points[:, 2].astype(np.float64)
    c = math.cos(angle)
    s = math.sin(angle)
    out = scan.points.copy()
    out[:, 0] = c * x - s * y
    out[:, 1] = s * x + c * y
    out[:, 2] = z
    return Scan(out, scan.labels)


def polar_mix(
    scan_a: Scan, scan_b: Scan, config: AugmentConfig, rng: np.random.Generator
) -> Scan:
    """Stochastic composition: gated sector swap, then gated rotate-paste.

    Starting from scan A, a sector swap with a freshly sampled sector fires
    with probability ``delta1``, then a rotate-paste of ``config.classes``
    with freshly sampled angles fires independently with probability
    ``delta2``; both stages draw from scan B.  The rng schedule is fixed
    (gate-1, sector if fired, gate-2, angles if fired), so a forced-gates run
    equals the manual composition of the two operators under a replayed
    generator.
    """
    result = scan_a
    if rng.random() < config.delta1:
        sector = sample_sector(config.sector_width, rng)
        result = scene_swap(result, scan_b, sector)
    if rng.random() < config.delta2:
        omegas = sample_angles(config.angle_preset, rng)
        result = rotate_paste(result, scan_b, config.classes, omegas)
    return result


def uda_mix(
    source: Scan,
    target: Scan,
    target_confidences: np.ndarray,
    conf_threshold: float,
    config: AugmentConfig,
    rng: np.random.Generator,
) -> Scan:
    """Mix a labelled source scan with a pseudo-labelled target scan.

    Target points whose confidence is below ``conf_threshold`` are dropped
    (with their labels) before mixing; the source is always the base and the
    filtered target the donor of a regular ``polar_mix``.  A threshold of 0
    disables filtering.
    """
    conf = np.asarray(target_confidences, dtype=np.float64)
    if conf.ndim != 1 or conf.shape[0] != len(target):
        raise ValueError(
            f"confidence length {conf.shape} does not match target point count {len(target)}"
        )
    donor = target.take(conf >= float(conf_threshold))
    return polar_mix(source, donor, config, rng)
