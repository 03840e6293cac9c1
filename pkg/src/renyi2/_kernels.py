"""Grid-search kernels for the CHSH settings optimizer.

Two interchangeable implementations of the same scan: a numba @njit kernel
and a vectorized numpy fallback. renyi2.chsh picks one at import time; set
RENYI2_NO_NUMBA=1 to force the numpy path. benchmarks/bench_chsh_kernel.py
times them against each other.

For fixed directions a, a' of the first observer, the optimum over the second
observer's settings is closed form: |t^T(a + a')| + |t^T(a - a')| with vector
norms. The kernels therefore scan only the four angles of (a, a').
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


def _unit_vectors(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Unit vectors for the (theta, phi) grid, shape (theta.size * phi.size, 3)."""
    t, p = np.meshgrid(theta, phi, indexing="ij")
    t = t.ravel()
    p = p.ravel()
    return np.column_stack((np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)))


def scan_numpy(t, th1, ph1, th2, ph2):
    """Best CHSH value over the (a, a') angle grid.

    Returns (value, i1, j1, i2, j2) where the indices locate the argmax in the
    theta/phi grids of a and a' respectively.
    """
    u1 = _unit_vectors(th1, ph1) @ t
    u2 = _unit_vectors(th2, ph2) @ t
    vals = np.linalg.norm(u1[:, None, :] + u2[None, :, :], axis=2)
    vals += np.linalg.norm(u1[:, None, :] - u2[None, :, :], axis=2)
    p, q = np.unravel_index(np.argmax(vals), vals.shape)
    i1, j1 = divmod(int(p), ph1.size)
    i2, j2 = divmod(int(q), ph2.size)
    return float(vals[p, q]), i1, j1, i2, j2


@njit(cache=True)
def _projected_grid(t, th, ph):
    # rows are t^T a for every grid direction a
    out = np.empty((th.size * ph.size, 3))
    for i in range(th.size):
        st = np.sin(th[i])
        ct = np.cos(th[i])
        for j in range(ph.size):
            a0 = st * np.cos(ph[j])
            a1 = st * np.sin(ph[j])
            k = i * ph.size + j
            for c in range(3):
                out[k, c] = a0 * t[0, c] + a1 * t[1, c] + ct * t[2, c]
    return out


@njit(cache=True)
def scan_numba(t, th1, ph1, th2, ph2):
    """Same contract as scan_numpy, compiled."""
    u1 = _projected_grid(t, th1, ph1)
    u2 = _projected_grid(t, th2, ph2)
    best = -1.0
    bp = 0
    bq = 0
    for p in range(u1.shape[0]):
        for q in range(u2.shape[0]):
            sp = 0.0
            sm = 0.0
            for c in range(3):
                d = u1[p, c] + u2[q, c]
                sp += d * d
                d = u1[p, c] - u2[q, c]
                sm += d * d
            v = np.sqrt(sp) + np.sqrt(sm)
            if v > best:
                best = v
                bp = p
                bq = q
    return best, bp // ph1.size, bp % ph1.size, bq // ph2.size, bq % ph2.size
