"""Benchmark: compiled kernel vs NumPy fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Set KLEINDIM_FORCE_PY=1
to check that the fallback is what the package falls back to.
"""

import time

import numpy as np

from kleindim import _core, _kernels_py
from kleindim.moebius import MoebiusMap
from kleindim.subgroup import BallLimit, enumerate_ball
from kleindim.surface import fn_surface_rep


def _random_rows(n, seed):
    rng = np.random.default_rng(seed)
    rows = rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))
    det = rows[:, 0] * rows[:, 3] - rows[:, 1] * rows[:, 2]
    return (rows / np.sqrt(det)[:, None]).astype(np.complex128)


def bench_kernel(impl, name, frontier, gens, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        prods = impl.expand(frontier.copy(), gens)
        impl.displacements(prods)
        best = min(best, time.perf_counter() - t0)
    print(f"  {name:10s} expand+disp {len(frontier)}x{len(gens)}: {best*1e3:.1f} ms")
    return best


def bench_ball():
    rep = fn_surface_rep(1, 3.0)
    t0 = time.perf_counter()
    ball = enumerate_ball(rep.generators, BallLimit(max_displacement=11.0, max_count=200_000))
    dt = time.perf_counter() - t0
    print(f"  enumerate_ball to radius 11: {len(ball)} elements in {dt:.2f} s "
          f"({_core.KERNEL_NAME} kernel)")


def main():
    frontier = _random_rows(50_000, 1)
    gens = _random_rows(8, 2)
    print("kernel micro-benchmark:")
    t_py = bench_kernel(_kernels_py, "numpy", frontier, gens)
    if _core.HAVE_COMPILED:
        from kleindim import _kernels_c

        t_c = bench_kernel(_kernels_c, "compiled", frontier, gens)
        print(f"  speedup: {t_py / t_c:.2f}x")
        a = _kernels_py.expand(frontier.copy(), gens)
        b = _kernels_c.expand(frontier.copy(), gens)
        print(f"  max |diff|: {np.max(np.abs(a - b)):.3e}")
    else:
        print("  compiled kernel unavailable; fallback only")
    print("orbit-ball benchmark:")
    bench_ball()


if __name__ == "__main__":
    main()
