"""Timing of the CHSH settings-scan kernel: numba JIT vs pure numpy.

Run as a script. The JIT path is warmed before timing so compilation cost is
reported separately. Both backends must agree on the scanned value; speedup
is whatever the hardware gives (the numpy path is fully vectorized, so the
JIT usually wins only modestly here).
"""

import time

import numpy as np

from renyi2._kernels import HAS_NUMBA, scan_numba, scan_numpy
from renyi2.chsh import COARSE_STEP, correlation_matrix
from renyi2.qstate import random_density


def grids():
    theta = np.linspace(0.0, np.pi, 10)
    phi = np.arange(0.0, 2.0 * np.pi, COARSE_STEP)
    return theta, phi, theta, phi


def time_backend(scan, matrices, repeats=3):
    th1, ph1, th2, ph2 = grids()
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        values = [scan(t, th1, ph1, th2, ph2)[0] for t in matrices]
        best = min(best, time.perf_counter() - t0)
    return best, values


def main():
    rng = np.random.default_rng(12)
    matrices = [correlation_matrix(random_density(2, 2, rng)).t for _ in range(200)]

    t_np, v_np = time_backend(scan_numpy, matrices)
    print(f"numpy : {t_np * 1e3:8.1f} ms for {len(matrices)} scans")

    if not HAS_NUMBA:
        print("numba : not installed, skipping")
        return

    t0 = time.perf_counter()
    scan_numba(matrices[0], *grids())  # JIT warmup
    print(f"numba : {time.perf_counter() - t0:8.2f} s one-time compile")

    t_nb, v_nb = time_backend(scan_numba, matrices)
    print(f"numba : {t_nb * 1e3:8.1f} ms for {len(matrices)} scans")

    worst = max(abs(a - b) for a, b in zip(v_np, v_nb))
    assert worst < 1e-12, f"backends disagree by {worst:.3e}"
    print(f"agreement: max |delta| = {worst:.2e}")
    print(f"speedup  : x{t_np / t_nb:.2f}")


if __name__ == "__main__":
    main()
