"""Simultaneous polynomial root finding at arbitrary precision.

Roots are seeded from the Newton polygon, refined in double precision by the
Aberth kernel, then iterated with Aberth corrections in gmpy2 ``mpc``
arithmetic and polished with a Newton step.  A root is accepted when its
residual is within the rounding-error bound of Horner evaluation.
"""

from __future__ import annotations

import math

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from . import _kernels
from .errors import RootFindingError
from .numeric import PrecisionContext, log10_abs, to_mpc


def trim(coeffs):
    """Drop exactly-zero high-order coefficients."""
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def newton_polygon_guesses(coeffs, offset: float = 0.4) -> np.ndarray:
    """Starting points on circles read off the upper hull of ``log|a_k|``."""
    n = len(coeffs) - 1
    logs = [log10_abs(a) for a in coeffs]
    pts = [(k, l) for k, l in enumerate(logs) if l > -math.inf]
    hull: list[tuple[int, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    z = []
    for (k0, l0), (k1, l1) in zip(hull[:-1], hull[1:]):
        m = k1 - k0
        r = 10.0 ** ((l0 - l1) / m)
        r = min(max(r, 1e-250), 1e250)
        for j in range(m):
            theta = 2 * math.pi * j / m + 2 * math.pi * k0 / n + offset
            z.append(r * complex(math.cos(theta), math.sin(theta)))
    return np.array(z, dtype=np.complex128)


def _double_seeds(coeffs) -> np.ndarray:
    z0 = newton_polygon_guesses(coeffs)
    logs = [log10_abs(a) for a in coeffs if a != 0]
    if max(logs) - min(logs) > 250 or max(abs(v) for v in logs) > 280:
        return z0
    c = np.array([complex(a) for a in coeffs], dtype=np.complex128)
    c = c / c[-1]
    z, _, _ = _kernels.aberth(c, z0, maxiter=50 * len(z0) + 100)
    bad = ~np.isfinite(z)
    z[bad] = z0[bad]
    return z


def _horner(a, z):
    p = a[-1]
    dp = mpc(0)
    for k in range(len(a) - 2, -1, -1):
        dp = dp * z + p
        p = p * z + a[k]
    return p, dp


def _abs_horner(absa, r):
    s = absa[-1]
    for k in range(len(absa) - 2, -1, -1):
        s = s * r + absa[k]
    return s


def find_roots(coeffs, ctx: PrecisionContext, maxiter: int | None = None, seeds=None, certify: bool = True):
    """All roots of ``sum coeffs[k] z**k`` as ``mpc`` values.

    ``coeffs`` may hold ``mpq``, ``mpfr`` or ``mpc``.  Exact zero roots
    (vanishing low-order coefficients) are returned exactly.  Raises
    :class:`RootFindingError` if some roots fail to converge within
    ``maxiter`` sweeps (default ``200 * degree``).
    """
    c = trim(coeffs)
    n = len(c) - 1
    if n <= 0:
        return []
    nzero = 0
    while nzero < n and c[nzero] == 0:
        nzero += 1
    c = c[nzero:]
    n = len(c) - 1
    with ctx.local():
        zeros = [mpc(0)] * nzero
        if n == 0:
            return zeros
        a = [to_mpc(x) for x in c]
        lead = a[-1]
        a = [x / lead for x in a]
        if n == 1:
            return zeros + [-a[0]]
        absa = [abs(x) for x in a]
        z0 = _double_seeds(c) if seeds is None else np.asarray(seeds, dtype=np.complex128)
        z = [mpc(complex(v)) for v in z0]
        # Horner rounding bound: |p(z)| <= eta * sum |a_k| |z|^k
        eta = mpfr(2) ** (-ctx.bits + 2) * (4 * n + 4)
        step_tol = mpfr(10) ** (-ctx.effective_digits + 2)
        done = [False] * n
        cap = maxiter if maxiter is not None else 200 * n
        for _ in range(cap):
            progressed = False
            for i in range(n):
                if done[i]:
                    continue
                zi = z[i]
                p, dp = _horner(a, zi)
                if abs(p) <= eta * _abs_horner(absa, abs(zi)):
                    done[i] = True
                    continue
                if dp == 0:
                    z[i] = zi * mpc(1 + 1e-3, 1e-3) + mpc(1e-10)
                    continue
                ratio = p / dp
                s = mpc(0)
                for j in range(n):
                    if j != i:
                        s += 1 / (zi - z[j])
                den = 1 - ratio * s
                w = ratio / den if den != 0 else ratio
                z[i] = zi - w
                progressed = True
                if abs(w) <= step_tol * abs(z[i]):
                    done[i] = True
            if all(done) or not progressed:
                break
        # Newton polish
        for i in range(n):
            p, dp = _horner(a, z[i])
            if dp != 0:
                z[i] = z[i] - p / dp
        if certify:
            bound = mpfr(10) ** (-(ctx.decimal_digits // 2))
            bad = []
            for i in range(n):
                p, _ = _horner(a, z[i])
                if not (abs(p) <= bound * _abs_horner(absa, abs(z[i]))) or not gmpy2.is_finite(z[i].real):
                    bad.append(z[i])
            if bad:
                raise RootFindingError(bad)
        return zeros + z


def polyval(coeffs, z):
    """Horner evaluation, coefficients low -> high."""
    p = coeffs[-1] * 0 + coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        p = p * z + coeffs[k]
    return p


def residual_scale(coeffs, z):
    """``sum |a_k| |z|^k``, the natural scale of ``|p(z)|``."""
    r = abs(z)
    s = abs(coeffs[-1])
    for k in range(len(coeffs) - 2, -1, -1):
        s = s * r + abs(coeffs[k])
    return s
