"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot per-point kernels on both backends in-process, then
re-executes itself under POLARMIX_NO_NUMBA=1 for an end-to-end comparison of
a full 130k-point mix.

Usage: python benchmarks/bench_kernels.py [N]
"""

import math
import os
import subprocess
import sys
import time

import numpy as np

from polarmix import AugmentConfig, Scan, polar_mix
from polarmix import _kernels

N = int(sys.argv[1]) if len(sys.argv) > 1 else 130_000
REPS = 20


def bench(label, fn, *args):
    fn(*args)  # warm-up / JIT
    times = []
    for _ in range(REPS):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    best = min(times) * 1e3
    print(f"  {label:<28s} {best:8.3f} ms   ({N / min(times) / 1e6:7.1f} Mpts/s)")
    return best


def make_pair(rng):
    def scan():
        pts = np.empty((N, 4), dtype=np.float32)
        pts[:, :3] = rng.uniform(-80, 80, (N, 3))
        pts[:, 3] = rng.uniform(0, 1, N)
        return Scan(pts, rng.integers(0, 50, N).astype(np.uint32))

    return scan(), scan()


def main():
    rng = np.random.default_rng(0)
    x = rng.uniform(-80, 80, N)
    y = rng.uniform(-80, 80, N)
    labels = rng.integers(0, 50, N).astype(np.uint32)
    ids = np.array([10, 11, 30], dtype=np.uint32)
    c, s = math.cos(1.0), math.sin(1.0)

    print(f"kernel benchmark, N={N:,}, backend={_kernels.backend_name()}")
    if _kernels.NUMBA_ENABLED:
        print("numba kernels:")
        nb_az = bench("azimuth", _kernels.azimuth_xy_numba, x, y)
        nb_sec = bench("sector flags (fused)", _kernels.sector_flags_xy_numba, x, y, -1.0, 2.0)
        nb_rot = bench("rotate xy", _kernels.rotate_xy_numba, x, y, c, s)
        nb_cls = bench("class flags", _kernels.class_flags_numba, labels, ids)
    print("numpy fallback kernels:")
    np_az = bench("azimuth", _kernels.azimuth_xy_numpy, x, y)
    np_sec = bench("sector flags", _kernels.sector_flags_xy_numpy, x, y, -1.0, 2.0)
    np_rot = bench("rotate xy", _kernels.rotate_xy_numpy, x, y, c, s)
    np_cls = bench("class flags", _kernels.class_flags_numpy, labels, ids)
    if _kernels.NUMBA_ENABLED:
        print("speedup numba/numpy:")
        for name, a, b in [
            ("azimuth", np_az, nb_az),
            ("sector flags", np_sec, nb_sec),
            ("rotate xy", np_rot, nb_rot),
            ("class flags", np_cls, nb_cls),
        ]:
            print(f"  {name:<28s} {a / b:6.2f}x")

    print(f"end-to-end mix of a {N:,}-point pair ({_kernels.backend_name()} backend):")
    a, b = make_pair(rng)
    cfg = AugmentConfig(classes=frozenset({10, 11}), delta1=1.0, delta2=1.0)
    gen = np.random.default_rng(7)
    bench("polar_mix", lambda: polar_mix(a, b, cfg, gen))

    if _kernels.NUMBA_ENABLED and os.environ.get("_BENCH_CHILD") != "1":
        env = dict(os.environ, POLARMIX_NO_NUMBA="1", _BENCH_CHILD="1")
        subprocess.run([sys.executable, __file__, str(N)], env=env, check=True)


if __name__ == "__main__":
    main()
