"""Closed-form noise-growth predictions.

Covers the variance of conformally mapped noise coefficients, the saddle
point amplitude of their growth, the breakdown predicates built on it, and
the closed-form breakdown orders N_c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpfr, mpq

from .conformal import ConformalMap, find_z_inf, map_derivatives, mcut_map, one_cut_weight
from .errors import NonGenericMinimum, NoiseInsensitiveRegion
from .numeric import DEFAULT_CONTEXT, PrecisionContext, as_rational, to_mpc

KINDS = ("variance_exact", "variance_asymptotic", "sigma_nk", "Nc_nc1", "Nc_ncM", "Nc_resultM", "Nc_final",
         "breakdown_coeff", "breakdown_at_point")

# amplitude conventions: "closed" is 3**(-1/2) (2 pi)**(3/4) |psi'| (Re alpha)**(-1/4);
# "saddle" is what the steepest-descent evaluation of the Cauchy integral for
# the mapped coefficients gives, (4 pi)**(-1/4) in place of (2 pi)**(3/4) and
# an extra 1/|z_inf| (see README)
CONVENTIONS = ("closed", "saddle")


@dataclass(frozen=True)
class TheoryPrediction:
    kind: str
    value: float
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown prediction kind {self.kind!r}")
        if not (math.isfinite(self.value) and self.value > 0):
            raise ValueError(f"prediction must be finite and positive, got {self.value}")

    def as_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value, "inputs": self.inputs}


# ------------------------------------------------------------------ variance

def variance_terms(m: int) -> list[int]:
    """Integer summands ``(4**k C(m+k-1, m-k))**2`` for ``k = 0..m``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return [one_cut_weight(m, k) ** 2 for k in range(m + 1)]


def variance_exact(eps, m: int):
    """``sigma**2(m)`` for the one-cut map: exact ``mpq`` when ``eps`` is rational."""
    total = sum(variance_terms(m))
    e = as_rational(eps) if not isinstance(eps, float) else mpq(eps)
    return e * e * total / 3


def variance_asymptotic(eps, m: int, ctx: PrecisionContext | None = None):
    """Large-m form ``(eps**2/3) (1+sqrt2)**(4m) / (2**(1/4) sqrt(2 pi m))``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    ctx = ctx or DEFAULT_CONTEXT
    with ctx.local():
        e = mpfr(as_rational(eps)) if not isinstance(eps, float) else mpfr(eps)
        r = 1 + gmpy2.sqrt(mpfr(2))
        return e * e / 3 * r ** (4 * m) / (mpfr(2) ** mpfr(0.25) * gmpy2.sqrt(2 * gmpy2.const_pi() * m))


def variance_peak(m: int) -> int:
    """Index k of the largest summand of the exact variance."""
    t = variance_terms(m)
    return max(range(len(t)), key=t.__getitem__)


# ------------------------------------------------------------------ amplitude and sigma(n_k)

def _omegas(cmap: ConformalMap, ctx):
    if cmap.omega_inf:
        return list(cmap.omega_inf), cmap.z_inf
    z, om = find_z_inf(cmap, 1024, ctx)
    return om, z


def amplitude_terms(cmap: ConformalMap, convention: str = "closed", param: str = "theta",
                    ctx: PrecisionContext | None = None) -> list[float]:
    """Amplitude contribution of each minimiser ``omega_inf``.

    ``param`` selects whether the saddle quantity is the second derivative
    of ``log psi`` along the circle (``"theta"``) or in ``w`` (``"omega"``).
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown amplitude convention {convention!r}")
    if param not in ("theta", "omega"):
        raise ValueError(f"unknown parameterization {param!r}")
    ctx = ctx or DEFAULT_CONTEXT
    omegas, zinf = _omegas(cmap, ctx)
    out = []
    with ctx.local():
        pi = gmpy2.const_pi()
        for w in omegas:
            d = map_derivatives(cmap, w, ctx)
            a = (d.alpha_theta if param == "theta" else d.alpha).real
            if not a > 0:
                raise NonGenericMinimum()
            dpsi = abs(d.dpsi)
            if convention == "closed":
                A = (2 * pi) ** mpfr(0.75) * dpsi * a ** mpfr(-0.25) / gmpy2.sqrt(mpfr(3))
            else:
                A = (4 * pi) ** mpfr(-0.25) * dpsi * a ** mpfr(-0.25) / gmpy2.sqrt(mpfr(3)) / abs(d.psi)
            out.append(float(A))
    return out


def amplitude(cmap: ConformalMap, convention: str = "closed", param: str = "theta",
              ctx: PrecisionContext | None = None) -> float:
    """Combined amplitude; several minimisers add in variance."""
    return math.sqrt(sum(a * a for a in amplitude_terms(cmap, convention, param, ctx)))


def sigma_nk(eps, k: int, cmap: ConformalMap, convention: str = "closed", param: str = "theta",
             ctx: PrecisionContext | None = None) -> float:
    """Predicted standard deviation ``A eps k**(-1/4) |z_inf|**(-k)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    A = amplitude(cmap, convention, param, ctx)
    zinf = _omegas(cmap, ctx or DEFAULT_CONTEXT)[1]
    return A * float(eps) * k ** -0.25 * math.exp(-k * math.log(zinf))


def breakdown_coeff_condition(eps, k: int, delta: float, cmap: ConformalMap, **kw) -> bool:
    """Whether the predicted coefficient noise ``sigma(n_k)`` reaches ``delta``."""
    return sigma_nk(eps, k, cmap, **kw) >= delta


def breakdown_threshold_k(eps, delta: float, cmap: ConformalMap, kmax: int = 100000, **kw) -> int | None:
    """Smallest k satisfying :func:`breakdown_coeff_condition`."""
    A = amplitude(cmap, kw.get("convention", "closed"), kw.get("param", "theta"), kw.get("ctx"))
    zinf = _omegas(cmap, kw.get("ctx") or DEFAULT_CONTEXT)[1]
    lz = -math.log(zinf)
    logt = math.log(delta / (A * float(eps)))
    for k in range(1, kmax + 1):
        if -0.25 * math.log(k) + k * lz >= logt:
            return k
    return None


def breakdown_threshold_seed(eps, delta: float, cmap: ConformalMap, **kw) -> float:
    """``log(delta/(A eps)) / log(1/|z_inf|)``, the estimate without ``k**(-1/4)``."""
    A = amplitude(cmap, kw.get("convention", "closed"), kw.get("param", "theta"), kw.get("ctx"))
    zinf = _omegas(cmap, kw.get("ctx") or DEFAULT_CONTEXT)[1]
    return math.log(delta / (A * float(eps))) / -math.log(zinf)


def breakdown_point_condition(eps, k: int, delta: float, z, cmap: ConformalMap, convention: str = "closed",
                              param: str = "theta", ctx: PrecisionContext | None = None) -> bool:
    """Whether noise at order k is visible at the point ``z`` of the disk.

    Evaluates ``A eps k**(-1/4) |z/z_inf|**k / |1 - z_inf/z|`` with the
    largest contribution over the minimisers ``omega_inf``.
    """
    ctx = ctx or DEFAULT_CONTEXT
    z = complex(z)
    omegas, zinf = _omegas(cmap, ctx)
    if abs(z) <= zinf:
        raise NoiseInsensitiveRegion()
    terms = amplitude_terms(cmap, convention, param, ctx)
    best = 0.0
    for A, w in zip(terms, omegas):
        zi = complex(cmap.psi(w, ctx))
        val = A * float(eps) * k ** -0.25 * (abs(z) / abs(zi)) ** k / abs(1 - zi / z)
        best = max(best, val)
    return best >= delta


# ------------------------------------------------------------------ breakdown orders

L1P = math.log10(1 + math.sqrt(2))
RESULT_M_CONSTANT = math.log10(math.sqrt(2)) / L1P


def predict_Nc(eps, variant: str, M: int | None = None, cmap: ConformalMap | None = None,
               ctx: PrecisionContext | None = None, samples: int = 1024) -> float:
    """Closed-form breakdown order.

    ``nc1``: ``-log10 eps / (4 log10(1+sqrt2))``; ``ncM``: M times that;
    ``resultM``: ``0.3932... log10 eps / log10 c_M``; ``final``:
    ``log10 eps / (2 log10 |z_inf|)`` with ``z_inf`` located numerically.
    """
    ctx = ctx or DEFAULT_CONTEXT
    with ctx.local():
        e = mpfr(as_rational(eps)) if not isinstance(eps, float) else mpfr(eps)
        if not (0 < e < 1):
            raise ValueError("eps must satisfy 0 < eps < 1")
        le = gmpy2.log10(e)
        l1p = gmpy2.log10(1 + gmpy2.sqrt(mpfr(2)))
        if variant == "nc1":
            v = -le / (4 * l1p)
        elif variant == "ncM":
            if M is None:
                raise ValueError("ncM needs M")
            v = -M * le / (4 * l1p)
        elif variant == "resultM":
            if M is None:
                raise ValueError("resultM needs M")
            const = gmpy2.log10(gmpy2.sqrt(mpfr(2))) / l1p
            v = const * le / gmpy2.log10(mpfr(4) ** (mpfr(-1) / M))
        elif variant == "final":
            if cmap is None:
                cmap = mcut_map(M) if M is not None else None
            if cmap is None:
                raise ValueError("final needs a map")
            z, _ = _z_inf_mp(cmap, ctx, samples)
            v = le / (2 * gmpy2.log10(z))
        else:
            raise ValueError(f"unknown variant {variant!r}")
        return float(v)


def _z_inf_mp(cmap: ConformalMap, ctx: PrecisionContext, samples: int):
    return find_z_inf(cmap, samples, ctx, as_float=False)


def prediction(kind: str, value: float, **inputs) -> TheoryPrediction:
    return TheoryPrediction(kind, float(value), {k: (str(v) if not isinstance(v, (int, float)) else v)
                                                 for k, v in inputs.items()})
