"""Polar-coordinate geometry over point arrays.

Conventions used throughout the package:

* azimuth ``theta``: angle of the (x, y) projection, measured from +x toward
  +y, in ``[-pi, pi)``.  A point with atan2 exactly ``+pi`` (negative x,
  y == +0) is reported as ``-pi``; the origin gets azimuth 0.
* depth ``r``: Euclidean distance to the sensor, ``>= 0``.
* inclination ``phi``: angle between +z and the point vector, in
  ``[0, pi]``; defined as 0 at the origin.

Points are rows of an ``(N, 3)`` or ``(N, 4)`` float array (x, y, z
[, intensity]).  All trigonometry runs in float64 regardless of the input
dtype; results are cast back to the input dtype where points are returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels

PI = math.pi
TWO_PI = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Wrap a scalar angle into [-pi, pi)."""
    a = float(angle)
    while a < -PI:
        a += TWO_PI
    while a >= PI:
        a -= TWO_PI
    return a


@dataclass(frozen=True)
class SectorSpec:
    """Azimuth interval [alpha, beta): inclusive at alpha, exclusive at beta.

    ``alpha > beta`` denotes a sector crossing the -pi/+pi seam
    (membership: theta >= alpha OR theta < beta).  ``alpha == beta`` is the
    empty sector.  ``beta`` may be exactly ``+pi`` so the full circle is
    representable as ``SectorSpec(-pi, pi)``.
    """

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (-PI <= self.alpha < PI):
            raise ValueError(f"sector alpha {self.alpha!r} outside [-pi, pi)")
        if not (-PI <= self.beta <= PI):
            raise ValueError(f"sector beta {self.beta!r} outside [-pi, pi]")

    @classmethod
    def full_circle(cls) -> "SectorSpec":
        return cls(-PI, PI)

    @classmethod
    def from_start_width(cls, alpha: float, width: float) -> "SectorSpec":
        """Sector starting at ``alpha`` spanning ``width`` radians counter-clockwise."""
        if not 0.0 <= width <= TWO_PI:
            raise ValueError(f"sector width {width!r} outside [0, 2*pi]")
        if width == TWO_PI:
            return cls.full_circle()
        return cls(wrap_angle(alpha), wrap_angle(alpha + width))

    @property
    def width(self) -> float:
        if self.beta >= self.alpha:
            return self.beta - self.alpha
        return self.beta - self.alpha + TWO_PI

    def complement(self) -> "SectorSpec":
        """The sector claiming exactly the azimuths this one does not."""
        if self.alpha == self.beta:
            return SectorSpec.full_circle()
        return SectorSpec(wrap_angle(self.beta), self.alpha)

    def contains(self, theta: float) -> bool:
        """Membership test for a single azimuth already in [-pi, pi)."""
        if self.alpha == self.beta:
            return False
        if self.alpha < self.beta:
            return self.alpha <= theta < self.beta
        return theta >= self.alpha or theta < self.beta


def _check_points(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points)
    if pts.ndim != 2 or pts.shape[1] not in (3, 4):
        raise ValueError(f"expected an (N, 3) or (N, 4) point array, got shape {pts.shape}")
    return pts


def _xy64(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pts = _check_points(points)
    x = np.ascontiguousarray(pts[:, 0], dtype=np.float64)
    y = np.ascontiguousarray(pts[:, 1], dtype=np.float64)
    return x, y


def azimuth(points: np.ndarray) -> np.ndarray:
    """Per-point azimuth in [-pi, pi), float64."""
    x, y = _xy64(points)
    return _kernels.azimuth_xy(x, y)


def to_polar(points: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Convert Cartesian points to (theta, r, phi) float64 arrays."""
    pts = _check_points(points)
    x, y = _xy64(pts)
    z = np.ascontiguousarray(pts[:, 2], dtype=np.float64)
    theta = _kernels.azimuth_xy(x, y)
    r = np.sqrt(x * x + y * y + z * z)
    ratio = np.divide(z, r, out=np.zeros_like(r), where=r > 0)
    phi = np.where(r > 0, np.arccos(np.clip(ratio, -1.0, 1.0)), 0.0)
    return theta, r, phi


def from_polar(theta: np.ndarray, r: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_polar`; returns an (N, 3) float64 array."""
    theta = np.asarray(theta, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    sin_phi = np.sin(phi)
    return np.stack(
        (r * sin_phi * np.cos(theta), r * sin_phi * np.sin(theta), r * np.cos(phi)),
        axis=1,
    )


def sector_mask(points: np.ndarray, sector: SectorSpec) -> np.ndarray:
    """Boolean flags: point azimuth inside ``sector`` (inclusive alpha, exclusive beta)."""
    x, y = _xy64(points)
    return _kernels.sector_flags_xy(x, y, sector.alpha, sector.beta)


def class_mask(labels: np.ndarray, classes: Iterable[int]) -> np.ndarray:
    """Boolean flags: semantic id (low 16 label bits) is in ``classes``."""
    lab = np.ascontiguousarray(labels, dtype=np.uint32)
    if lab.ndim != 1:
        raise ValueError(f"expected a 1-D label array, got shape {lab.shape}")
    ids = np.array(sorted({int(c) for c in classes}), dtype=np.uint32)
    if ids.size == 0:
        return np.zeros(lab.shape[0], dtype=np.bool_)
    return _kernels.class_flags(lab, ids)


def rotation_matrix_z(omega: float) -> np.ndarray:
    """3x3 float64 rotation about +z by ``omega`` radians (counter-clockwise)."""
    c = math.cos(omega)
    s = math.sin(omega)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotate_z(points: np.ndarray, omega: float) -> np.ndarray:
    """Rotate points about the z-axis by ``omega`` radians.

    z and any trailing columns (intensity) are carried over untouched; the
    result has the dtype and column count of the input.  Rotation arithmetic
    is float64 and rounds once into the output dtype.
    """
    pts = _check_points(points)
    x, y = _xy64(pts)
    c = math.cos(omega)
    s = math.sin(omega)
    xr, yr = _kernels.rotate_xy(x, y, c, s)
    out = pts.copy()
    out[:, 0] = xr
    out[:, 1] = yr
    return out
