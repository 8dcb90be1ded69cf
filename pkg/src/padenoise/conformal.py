"""Conformal maps of cut planes onto the unit disk.

The built-in family is the symmetric M-cut map, with cuts running radially
from the roots of ``w**M = -1`` out to infinity::

    psi(w) = w / (1 + sqrt(1 + w**M)) ** (2/M)
    phi(z) = 2**(2/M) z / (1 - z**M) ** (2/M)

using principal branches, so ``psi`` is real and positive on ``(0, inf)``.
User maps supply ``phi`` and ``psi`` as callables; their derivatives are
taken by central differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import gmpy2
from gmpy2 import mpc, mpfr, mpq

from .errors import AlphaUndefined
from .numeric import DEFAULT_CONTEXT, PrecisionContext, as_rational, is_exact, to_mpc
from .series import TruncatedSeries

_SQRT2P1 = 1.0 + math.sqrt(2.0)


@dataclass(frozen=True)
class ConformalMap:
    """A map ``psi`` of the cut plane onto the disk and its inverse ``phi``.

    ``omega_inf`` are the unit-circle points where ``|psi|`` is smallest and
    ``z_inf`` that smallest value.
    """

    family: str
    M: int | None = None
    capacity: float | None = None
    omega_inf: tuple = ()
    z_inf: float | None = None
    phi_fn: Callable | None = field(default=None, compare=False, repr=False)
    psi_fn: Callable | None = field(default=None, compare=False, repr=False)
    name: str = ""

    def __post_init__(self):
        if self.family not in ("mcut", "user"):
            raise ValueError(f"unknown map family {self.family!r}")
        if self.family == "user" and (self.phi_fn is None or self.psi_fn is None):
            raise ValueError("user maps need both phi and psi")
        if self.z_inf is not None and not (0 < self.z_inf < 1):
            raise ValueError("|z_inf| must lie in (0, 1)")

    def psi(self, w, ctx: PrecisionContext | None = None):
        ctx = ctx or DEFAULT_CONTEXT
        with ctx.local():
            w = to_mpc(w)
            if self.family == "user":
                return to_mpc(self.psi_fn(w))
            M = self.M
            s = gmpy2.sqrt(1 + w**M)
            return w / (1 + s) ** (mpfr(2) / M)

    def phi(self, z, ctx: PrecisionContext | None = None):
        ctx = ctx or DEFAULT_CONTEXT
        with ctx.local():
            z = to_mpc(z)
            if self.family == "user":
                return to_mpc(self.phi_fn(z))
            M = self.M
            e = mpfr(2) / M
            return mpfr(2) ** e * z / (1 - z**M) ** e

    def phi_coefficients(self, order: int, ctx: PrecisionContext | None = None) -> list:
        """Taylor coefficients of ``phi`` through ``z**order``.

        Exact rationals for M = 1, 2; otherwise values at ``ctx``.
        """
        ctx = ctx or DEFAULT_CONTEXT
        if self.family == "user":
            return _cauchy_coefficients(self.phi_fn, order, ctx)
        M = self.M
        exact = M in (1, 2)
        with ctx.local():
            e = mpq(-2, M) if exact else mpfr(-2) / M
            lead = mpq(4 if M == 1 else 2) if exact else mpfr(2) ** (mpfr(2) / M)
            zero = mpq(0) if exact else mpfr(0)
            out = [zero] * (order + 1)
            b = mpq(1) if exact else mpfr(1)
            k = 0
            while 1 + M * k <= order:
                out[1 + M * k] = lead * b * (-1) ** k
                b = b * (e - k) / (k + 1)
                k += 1
        return out

    def label(self) -> str:
        return self.name or (f"mcut:{self.M}" if self.family == "mcut" else "user")

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "M": self.M,
            "capacity": self.capacity,
            "omega_inf": [[complex(w).real, complex(w).imag] for w in self.omega_inf],
            "z_inf": self.z_inf,
        }


def mcut_map(M: int) -> ConformalMap:
    """The symmetric M-cut map; capacity ``4**(-1/M)``."""
    if M < 1:
        raise ValueError("M must be >= 1")
    omegas = tuple(complex(math.cos(2 * math.pi * j / M), math.sin(2 * math.pi * j / M)) for j in range(M))
    return ConformalMap("mcut", M, 4.0 ** (-1.0 / M), omegas, _SQRT2P1 ** (-2.0 / M), name=f"mcut:{M}")


def user_map(phi: Callable, psi: Callable, capacity: float | None = None, name: str = "user",
             samples: int = 1024, ctx: PrecisionContext | None = None) -> ConformalMap:
    """Wrap user callables; ``omega_inf`` and ``z_inf`` found numerically."""
    m = ConformalMap("user", None, capacity, phi_fn=phi, psi_fn=psi, name=name)
    z, omegas = find_z_inf(m, samples, ctx)
    return ConformalMap("user", None, capacity, tuple(omegas), z, phi, psi, name)


def parse_map(text: str) -> ConformalMap:
    """``"mcut:M"`` to a map."""
    kind, _, arg = text.partition(":")
    if kind != "mcut" or not arg.isdigit():
        raise ValueError(f"unknown map {text!r}; expected 'mcut:M'")
    return mcut_map(int(arg))


def _cauchy_coefficients(fn, order: int, ctx: PrecisionContext, radius: float = 0.5) -> list:
    n = 4 * order + 64
    with ctx.local():
        two_pi = 2 * gmpy2.const_pi()
        rho = mpfr(radius)
        vals = []
        for s in range(n):
            t = two_pi * s / n
            vals.append(to_mpc(fn(rho * mpc(gmpy2.cos(t), gmpy2.sin(t)))))
        out = []
        for k in range(order + 1):
            acc = mpc(0)
            for s, v in enumerate(vals):
                t = -two_pi * k * s / n
                acc += v * mpc(gmpy2.cos(t), gmpy2.sin(t))
            out.append(acc / n / rho**k)
        return out


# ------------------------------------------------------------------ composition

def _binom(n: int, k: int) -> int:
    """``C(n, k)`` with the convention ``C(-1, 0) = 1``."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    if n < 0:
        return 0
    return math.comb(n, k)


def one_cut_weight(m: int, k: int) -> int:
    """``[z**m] (4z/(1-z)**2)**k = 4**k C(m+k-1, m-k)``."""
    if k > m:
        return 0
    return 4**k * _binom(m + k - 1, m - k)


def compose_with_map(f: TruncatedSeries, cmap: ConformalMap, out_order: int,
                     ctx: PrecisionContext | None = None, method: str = "auto") -> TruncatedSeries:
    """Coefficients of ``f(phi(z))`` through ``z**out_order``.

    ``method="closed"`` uses the one-cut binomial weights (M=1 only),
    ``"power"`` the generic accumulation of truncated powers of ``phi``.
    """
    if out_order < 0:
        raise ValueError("out_order must be >= 0")
    ctx = ctx or DEFAULT_CONTEXT
    if method == "auto":
        method = "closed" if (cmap.family == "mcut" and cmap.M == 1) else "power"
    top = min(f.order, out_order)
    if method == "closed":
        if not (cmap.family == "mcut" and cmap.M == 1):
            raise ValueError("closed-form composition is only available for the one-cut map")
        out = _compose_closed(f.coeffs[: top + 1], out_order, ctx)
    elif method == "power":
        out = _compose_power(f.coeffs[: top + 1], cmap.phi_coefficients(out_order, ctx), out_order, ctx)
    else:
        raise ValueError(f"unknown composition method {method!r}")
    return TruncatedSeries(out, f"{f.label}o{cmap.label()}", "composed", f.noise_mode,
                           dict(f.meta, map=cmap.label()))


def _compose_closed(fc, out_order, ctx):
    exact = all(is_exact(c) for c in fc)
    with ctx.local():
        coeffs = [as_rational(c) for c in fc] if exact else [to_mpc(c) if isinstance(c, mpc) else mpfr(c) for c in fc]
        out = []
        for m in range(out_order + 1):
            acc = mpq(0) if exact else mpfr(0)
            for k in range(min(m, len(coeffs) - 1) + 1):
                acc += coeffs[k] * one_cut_weight(m, k)
            out.append(acc)
    return out


def _compose_power(fc, phic, out_order, ctx):
    exact = all(is_exact(c) for c in fc) and all(is_exact(c) for c in phic)
    with ctx.local():
        if exact:
            f = [as_rational(c) for c in fc]
            p = [as_rational(c) for c in phic]
            zero = mpq(0)
        else:
            f = [c if isinstance(c, mpc) else mpfr(c) for c in fc]
            p = [c if isinstance(c, mpc) else mpfr(c) for c in phic]
            zero = mpfr(0)
        out = [zero] * (out_order + 1)
        out[0] = out[0] + f[0]
        power = [zero] * (out_order + 1)
        power[0] = zero + 1
        for j in range(1, len(f)):
            # power <- power * phi, truncated; phi has no constant term
            new = [zero] * (out_order + 1)
            for a in range(j - 1, out_order + 1):
                pa = power[a]
                if pa == 0:
                    continue
                for b in range(1, out_order - a + 1):
                    if p[b] != 0:
                        new[a + b] += pa * p[b]
            power = new
            if f[j] != 0:
                for m in range(j, out_order + 1):
                    out[m] += f[j] * power[m]
    return out


def composition_matrix(out_order: int, in_order: int | None = None):
    """Float64 matrix ``T[m, k] = 4**k C(m+k-1, m-k)`` for the one-cut map.

    ``T @ coeffs`` gives the composed coefficients; used by Monte Carlo runs.
    """
    import numpy as np

    in_order = out_order if in_order is None else in_order
    T = np.zeros((out_order + 1, in_order + 1))
    for m in range(out_order + 1):
        for k in range(min(m, in_order) + 1):
            T[m, k] = float(one_cut_weight(m, k))
    return T


# ------------------------------------------------------------------ derivatives and z_inf

@dataclass(frozen=True)
class MapDerivatives:
    """``psi``, ``psi'``, ``psi''`` at a point and the saddle quantity.

    ``alpha`` is ``psi''/psi - (psi'/psi)**2`` with derivatives in ``w``;
    ``alpha_theta`` is the same second log-derivative taken along
    ``w = exp(i theta)``, i.e. ``-w L' - w**2 L''`` with ``L = log psi``.
    """

    psi: mpc
    dpsi: mpc
    d2psi: mpc
    alpha: mpc
    alpha_theta: mpc

    def as_tuple(self):
        return self.psi, self.dpsi, self.d2psi, self.alpha


def map_derivatives(cmap: ConformalMap, w, ctx: PrecisionContext | None = None,
                    method: str = "auto") -> MapDerivatives:
    """``(psi, psi', psi'', alpha)`` at ``w``; analytic for M-cut maps."""
    ctx = ctx or DEFAULT_CONTEXT
    if method == "auto":
        method = "analytic" if cmap.family == "mcut" else "fd"
    with ctx.local():
        w = to_mpc(w)
        if method == "analytic":
            if cmap.family != "mcut":
                raise ValueError("analytic derivatives are only available for M-cut maps")
            M = cmap.M
            s = gmpy2.sqrt(1 + w**M)
            psi = w / (1 + s) ** (mpfr(2) / M)
            if psi == 0:
                raise AlphaUndefined()
            ds = M * w ** (M - 1) / (2 * s)
            g = w ** (M - 1)
            dg = (M - 1) * w ** (M - 2) if M > 1 else mpc(0)
            h = s * (1 + s)
            dh = ds * (1 + 2 * s)
            L1 = 1 / w - g / h
            L2 = -1 / w**2 - (dg * h - g * dh) / h**2
        elif method == "fd":
            h = mpfr(10) ** (-(ctx.decimal_digits // 3))
            p0 = cmap.psi(w, ctx)
            if p0 == 0:
                raise AlphaUndefined()
            pp, pm = cmap.psi(w + h, ctx), cmap.psi(w - h, ctx)
            psi = p0
            d1 = (pp - pm) / (2 * h)
            d2 = (pp - 2 * p0 + pm) / h**2
            L1 = d1 / p0
            L2 = d2 / p0 - L1**2
        else:
            raise ValueError(f"unknown derivative method {method!r}")
        dpsi = psi * L1
        d2psi = psi * (L2 + L1**2)
        alpha_theta = -w * L1 - w**2 * L2
        return MapDerivatives(psi, dpsi, d2psi, L2, alpha_theta)


def _abs_psi_on_circle(cmap, theta, ctx):
    with ctx.local():
        w = mpc(gmpy2.cos(theta), gmpy2.sin(theta))
        try:
            v = abs(cmap.psi(w, ctx))
        except (ZeroDivisionError, ValueError, ArithmeticError):
            return None
        if not gmpy2.is_finite(v):
            return None
        return v


def find_z_inf(cmap: ConformalMap, samples: int = 1024, ctx: PrecisionContext | None = None,
               tie: float = 1e-8, as_float: bool = True) -> tuple:
    """``min |psi(exp(i theta))|`` and all minimisers within ``tie`` of it.

    With ``as_float=False`` the minimum comes back as an ``mpfr`` at ``ctx``.
    """
    if samples < 256:
        raise ValueError("samples must be >= 256")
    ctx = ctx or DEFAULT_CONTEXT
    with ctx.local():
        two_pi = 2 * gmpy2.const_pi()
        thetas = [two_pi * s / samples for s in range(samples)]
        vals = [_abs_psi_on_circle(cmap, t, ctx) for t in thetas]
        cands = []
        for s, v in enumerate(vals):
            if v is None:
                continue
            left, right = vals[(s - 1) % samples], vals[(s + 1) % samples]
            if (left is None or v <= left) and (right is None or v <= right):
                cands.append(s)
        if not cands:
            raise ValueError("no admissible samples on the unit circle")
        h = two_pi / samples
        refined = []
        for s in cands:
            t, v = _golden(lambda t: _abs_psi_on_circle(cmap, t, ctx), thetas[s] - h, thetas[s] + h, ctx)
            refined.append((v, t))
        vmin = min(v for v, _ in refined)
        omegas = []
        for v, t in sorted(refined, key=lambda p: float(p[1] % two_pi)):
            if v - vmin <= tie:
                t = float(t % two_pi)
                w = complex(math.cos(t), math.sin(t))
                if all(abs(w - o) > 1e-6 for o in omegas):
                    omegas.append(w)
        return (float(vmin) if as_float else vmin), omegas


def _golden(fn, a, b, ctx, iters: int = 200):
    gr = (gmpy2.sqrt(mpfr(5)) - 1) / 2
    tol = mpfr(10) ** (-(ctx.decimal_digits // 2))
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = fn(c), fn(d)
    inf = mpfr("inf")
    for _ in range(iters):
        if abs(b - a) < tol:
            break
        if (fc if fc is not None else inf) < (fd if fd is not None else inf):
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = fn(d)
    t = (a + b) / 2
    v = fn(t)
    return t, v if v is not None else min(x for x in (fc, fd) if x is not None)
