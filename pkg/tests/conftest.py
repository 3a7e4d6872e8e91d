import math

import numpy as np
import pytest

from polarmix import Scan


def make_points(rng, n, span=60.0, dtype=np.float32):
    pts = np.empty((n, 4), dtype=np.float64)
    pts[:, :3] = rng.uniform(-span, span, (n, 3))
    pts[:, 3] = rng.uniform(0.0, 1.0, n)
    return pts.astype(dtype)


def make_scan(rng, n, classes=(10, 11, 30, 40, 48), span=60.0):
    sem = rng.choice(np.array(classes, dtype=np.uint32), size=n)
    inst = rng.integers(0, 2**16, size=n).astype(np.uint32)
    return Scan(make_points(rng, n, span), (inst << np.uint32(16)) | sem)


def ring_scan(angles_deg, radius=10.0, z=0.5, intensity=0.25, sem=10):
    """Scan with one point per azimuth, on a circle (exact only for axis angles)."""
    pts = np.array(
        [
            (
                radius * math.cos(math.radians(a)),
                radius * math.sin(math.radians(a)),
                z,
                intensity,
            )
            for a in angles_deg
        ],
        dtype=np.float32,
    )
    return Scan(pts, np.full(len(angles_deg), sem, dtype=np.uint32))


def oracle_azimuth(x, y):
    """Reference azimuth in [-pi, pi): scalar libm atan2 with the +pi seam wrapped."""
    t = math.atan2(float(y), float(x))
    return -math.pi if t == math.pi else t


def oracle_in_sector(theta, alpha, beta):
    if alpha == beta:
        return False
    if alpha < beta:
        return alpha <= theta < beta
    return theta >= alpha or theta < beta


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
