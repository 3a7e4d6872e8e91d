"""Hot per-point kernels, JIT-compiled with numba when available.

Every kernel has a pure-numpy twin; the active backend is chosen once at
import time.  Setting ``POLARMIX_NO_NUMBA=1`` (or numba being absent)
selects the numpy path.  Inputs are 1-D float64/uint32 arrays; trigonometry
always runs in double precision so results do not depend on the storage
dtype of the surrounding scan.

The two backends agree bit-for-bit on rotation (cos/sin) and may differ in
the final ulp of atan2 on a small fraction of points, which matters only if
a sector boundary happens to fall inside that gap.
"""

import math
import os

import numpy as np

_PI = math.pi


def _numba_disabled_by_env() -> bool:
    return os.environ.get("POLARMIX_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")


try:
    if _numba_disabled_by_env():
        raise ImportError
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    njit = None
    NUMBA_ENABLED = False


# ---------------------------------------------------------------------------
# numpy implementations

def azimuth_xy_numpy(x, y):
    # atan2 returns +pi for (y=+0, x<0); the azimuth convention is [-pi, pi).
    theta = np.arctan2(y, x)
    theta[theta == _PI] = -_PI
    return theta


def sector_flags_xy_numpy(x, y, alpha, beta):
    if alpha == beta:
        return np.zeros(x.shape[0], dtype=np.bool_)
    theta = azimuth_xy_numpy(x, y)
    if alpha < beta:
        return (theta >= alpha) & (theta < beta)
    return (theta >= alpha) | (theta < beta)


def rotate_xy_numpy(x, y, cos_w, sin_w):
    return cos_w * x - sin_w * y, sin_w * x + cos_w * y


def class_flags_numpy(labels, class_ids):
    return np.isin(labels & np.uint32(0xFFFF), class_ids)


# ---------------------------------------------------------------------------
# numba implementations

if NUMBA_ENABLED:

    @njit(cache=True)
    def azimuth_xy_numba(x, y):  # pragma: no cover - exercised via dispatch
        n = x.shape[0]
        theta = np.empty(n, dtype=np.float64)
        for i in range(n):
            t = math.atan2(y[i], x[i])
            if t == _PI:
                t = -_PI
            theta[i] = t
        return theta

    @njit(cache=True)
    def sector_flags_xy_numba(x, y, alpha, beta):  # pragma: no cover
        n = x.shape[0]
        flags = np.zeros(n, dtype=np.bool_)
        if alpha == beta:
            return flags
        wraps = alpha > beta
        for i in range(n):
            t = math.atan2(y[i], x[i])
            if t == _PI:
                t = -_PI
            if wraps:
                flags[i] = t >= alpha or t < beta
            else:
                flags[i] = alpha <= t < beta
        return flags

    @njit(cache=True)
    def rotate_xy_numba(x, y, cos_w, sin_w):  # pragma: no cover
        n = x.shape[0]
        xr = np.empty(n, dtype=np.float64)
        yr = np.empty(n, dtype=np.float64)
        for i in range(n):
            xr[i] = cos_w * x[i] - sin_w * y[i]
            yr[i] = sin_w * x[i] + cos_w * y[i]
        return xr, yr

    @njit(cache=True)
    def class_flags_numba(labels, class_ids):  # pragma: no cover
        n = labels.shape[0]
        m = class_ids.shape[0]
        flags = np.zeros(n, dtype=np.bool_)
        for i in range(n):
            sem = labels[i] & np.uint32(0xFFFF)
            for j in range(m):
                if sem == class_ids[j]:
                    flags[i] = True
                    break
        return flags

    azimuth_xy = azimuth_xy_numba
    sector_flags_xy = sector_flags_xy_numba
    rotate_xy = rotate_xy_numba
    class_flags = class_flags_numba
else:
    azimuth_xy = azimuth_xy_numpy
    sector_flags_xy = sector_flags_xy_numpy
    rotate_xy = rotate_xy_numpy
    class_flags = class_flags_numpy


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
