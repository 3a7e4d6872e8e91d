"""Polar-coordinate cut-and-mix augmentation for rotating-LiDAR point clouds.

The library view: build :class:`Scan` values from ``(N, 4)`` float32 point
arrays plus uint32 labels, then apply pure augmentation operators
(``scene_swap``, ``rotate_paste``, ``polar_mix``, baselines).  The batch
view: the ``augment`` CLI walks on-disk datasets and materializes augmented
scans deterministically and in parallel.
"""

__version__ = "0.1.0"

from .augment import (
    AnglePreset,
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
from .geometry import (
    SectorSpec,
    azimuth,
    class_mask,
    from_polar,
    rotate_z,
    rotation_matrix_z,
    sector_mask,
    to_polar,
    wrap_angle,
)
from .scan import Scan, concat_scans, scans_equal
from .scan_io import (
    CountMismatchError,
    FileFormatError,
    ScanIOError,
    export_ply,
    read_scan,
    write_scan,
)

__all__ = [
    "__version__",
    "AnglePreset",
    "AugmentConfig",
    "Scan",
    "SectorSpec",
    "azimuth",
    "class_mask",
    "concat_scans",
    "CountMismatchError",
    "export_ply",
    "FileFormatError",
    "from_polar",
    "global_aug",
    "mix3d_concat",
    "polar_mix",
    "read_scan",
    "rotate_paste",
    "rotate_z",
    "rotation_matrix_z",
    "sample_angles",
    "sample_sector",
    "scans_equal",
    "ScanIOError",
    "scene_swap",
    "sector_mask",
    "simple_paste",
    "to_polar",
    "uda_mix",
    "wrap_angle",
    "write_scan",
]
