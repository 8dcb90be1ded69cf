"""Double-precision hot kernels.

Each kernel has a numba ``@njit`` implementation and a pure-numpy twin.
Which one is exported is decided once at import time:

* ``PADENOISE_NUMBA=0`` forces the numpy path;
* otherwise numba is used when importable.

The high-precision (gmpy2) code never runs through here; these kernels only
produce double-precision seeds and float64 reductions.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


def _env_wants_numba() -> bool:
    return os.environ.get("PADENOISE_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


USE_NUMBA = _HAVE_NUMBA and _env_wants_numba()


# ---------------------------------------------------------------- pairwise logs

def _pair_log_sum_numpy(z):
    z = np.asarray(z, dtype=np.complex128)
    n = z.shape[0]
    if n < 2:
        return 0.0, np.inf
    iu = np.triu_indices(n, 1)
    d = np.abs(z[:, None] - z[None, :])[iu]
    with np.errstate(divide="ignore"):  # coincident points: caller falls back to mp
        return float(np.sum(np.log(d))), float(d.min())


def _pair_log_sum_loops(z):
    n = z.shape[0]
    s = 0.0
    dmin = np.inf
    for i in range(n):
        for j in range(i + 1, n):
            d = abs(z[i] - z[j])
            if d < dmin:
                dmin = d
            s += np.log(d)
    return s, dmin


# ---------------------------------------------------------------- Aberth (double)

def _aberth_numpy(coeffs, z0, maxiter, tol):
    """Vectorised (Jacobi-style) Aberth iteration; coeffs low -> high."""
    a = np.asarray(coeffs, dtype=np.complex128)[::-1]
    da = np.polyder(a)
    z = np.array(z0, dtype=np.complex128)
    n = z.shape[0]
    done = np.zeros(n, dtype=np.bool_)
    eye = np.eye(n, dtype=np.bool_)
    absa = np.abs(a)
    it = 0
    for it in range(maxiter):
        p = np.polyval(a, z)
        dp = np.polyval(da, z)
        done |= np.abs(p) <= 8.0 * n * 2.2e-16 * np.polyval(absa, np.abs(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            diff[eye] = 1.0
            s = np.sum(1.0 / diff, axis=1) - 1.0
            w = ratio / (1.0 - ratio * s)
        w[~np.isfinite(w)] = 0.0
        w[done] = 0.0
        z = z - w
        done |= np.abs(w) <= tol * np.maximum(np.abs(z), 1e-300)
        if done.all():
            break
    return z, done, it + 1


def _aberth_loops(coeffs, z0, maxiter, tol):
    """Gauss-Seidel Aberth iteration; coeffs low -> high."""
    n = z0.shape[0]
    z = z0.copy()
    done = np.zeros(n, dtype=np.bool_)
    deg = coeffs.shape[0] - 1
    it = 0
    for it in range(maxiter):
        alldone = True
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            p = coeffs[deg]
            dp = 0.0 + 0.0j
            r = abs(zi)
            scale = abs(coeffs[deg])
            for k in range(deg - 1, -1, -1):
                dp = dp * zi + p
                p = p * zi + coeffs[k]
                scale = scale * r + abs(coeffs[k])
            if abs(p) <= 8.0 * n * 2.2e-16 * scale:
                done[i] = True
                continue
            if dp == 0:
                continue
            ratio = p / dp
            s = 0.0 + 0.0j
            for j in range(n):
                if j != i:
                    s += 1.0 / (zi - z[j])
            den = 1.0 - ratio * s
            if den == 0:
                continue
            w = ratio / den
            if not (np.isfinite(w.real) and np.isfinite(w.imag)):
                continue
            z[i] = zi - w
            if abs(w) <= tol * max(abs(z[i]), 1e-300):
                done[i] = True
            else:
                alldone = False
        if alldone:
            break
    return z, done, it + 1


if USE_NUMBA:
    _pair_log_sum_numba = njit(cache=False)(_pair_log_sum_loops)
    _aberth_numba = njit(cache=False)(_aberth_loops)
else:  # pragma: no cover - exercised with PADENOISE_NUMBA=0
    _pair_log_sum_numba = None
    _aberth_numba = None


def pair_log_sum(z) -> tuple[float, float]:
    """``(sum_{i<j} log|z_i - z_j|, min_{i<j} |z_i - z_j|)`` in float64."""
    z = np.ascontiguousarray(z, dtype=np.complex128)
    if USE_NUMBA:
        if z.shape[0] < 2:
            return 0.0, np.inf
        s, d = _pair_log_sum_numba(z)
        return float(s), float(d)
    return _pair_log_sum_numpy(z)


def aberth(coeffs, z0, maxiter: int = 500, tol: float = 4e-16):
    """Double-precision Aberth iteration from starting points ``z0``.

    Returns ``(roots, converged_mask, iterations)``.
    """
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(z0, dtype=np.complex128)
    if USE_NUMBA:
        return _aberth_numba(c, z, int(maxiter), float(tol))
    return _aberth_numpy(c, z, int(maxiter), float(tol))


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
