"""Breakdown measurements: capacity traces, deviations and N_c detection."""

from __future__ import annotations

import logging
import math
import statistics
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import gmpy2
import numpy as np
from gmpy2 import mpfr, mpq

from . import _kernels
from .errors import DegeneratePadeError, DegeneratePolePair
from .noise import NoiseSpec, derived_seed, reference_spec
from .numeric import PrecisionContext, required_precision, to_mpc
from .pade import RayLocus, build_pade, find_poles, flag_spurious
from .series import TruncatedSeries, add_noise

log = logging.getLogger(__name__)

DEFAULT_DELTA = 1e-3


@dataclass(frozen=True)
class CapacityEntry:
    N: int
    d_N: float
    inv: float
    richardson: float | None = None


@dataclass
class CapacityTrace:
    entries: list
    label: str = ""
    skipped: list = field(default_factory=list)

    def __post_init__(self):
        Ns = [e.N for e in self.entries]
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise ValueError("capacity trace N values must be strictly increasing")

    def rows(self) -> list[tuple]:
        return [(e.N, e.d_N, e.inv, e.richardson) for e in self.entries]


@dataclass
class BreakdownResult:
    """Outcome of an N_c measurement over one or more realizations."""

    criterion: str
    threshold: float | None
    N_c: int | None
    delta_trace: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    ensemble_N_c: list = field(default_factory=list)
    errors: dict = field(default_factory=dict)
    traces: dict = field(default_factory=dict)

    @property
    def found(self) -> list[int]:
        return [n for n in self.ensemble_N_c if n is not None]

    @property
    def summary(self) -> dict:
        vals = self.found
        if not vals:
            return {"median": None, "min": None, "max": None, "mean": None, "count": 0}
        return {
            "median": statistics.median(vals),
            "min": min(vals),
            "max": max(vals),
            "mean": statistics.fmean(vals),
            "count": len(vals),
        }


@dataclass
class SlopeFit:
    points: list
    slope: float
    intercept: float
    residual_norm: float
    comparisons: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


# ------------------------------------------------------------------ capacity

def _pole_list(poles):
    return list(poles.poles) if hasattr(poles, "poles") else list(poles)


def capacity_estimate(poles, ctx: PrecisionContext | None = None) -> tuple[float, float]:
    """``(d_N, 1/d_N)`` from the geometric mean of pairwise pole distances.

    The product is accumulated as a sum of logarithms.  Poles closer than
    ``10**-decimal_digits`` raise :class:`DegeneratePolePair`.
    """
    ctx = ctx or PrecisionContext()
    z = _pole_list(poles)
    n = len(z)
    if n < 2:
        raise ValueError("capacity estimate needs at least two poles")
    zc = np.array([complex(w) for w in z], dtype=np.complex128)
    finite = np.all(np.isfinite(zc))
    s, dmin = _kernels.pair_log_sum(zc) if finite else (0.0, 0.0)
    scale = float(np.max(np.abs(zc))) if finite else 0.0
    if not finite or dmin <= 1e-12 * max(scale, 1.0):
        s = _pair_log_sum_mp(z, ctx)
    d = math.exp(2.0 * s / (n * (n - 1)))
    return d, 1.0 / d


def _pair_log_sum_mp(z, ctx: PrecisionContext) -> float:
    with ctx.local():
        zs = [to_mpc(w) for w in z]
        tiny = mpfr(10) ** (-ctx.decimal_digits)
        acc = mpfr(0)
        for i in range(len(zs)):
            for j in range(i + 1, len(zs)):
                d = abs(zs[i] - zs[j])
                if d < tiny:
                    raise DegeneratePolePair(i, j)
                acc += gmpy2.log(d)
        return float(acc)


def richardson2(trace) -> list[tuple[int, float]]:
    """Second-order Richardson extrapolation in ``1/N``.

    Each interior point is replaced by the value at ``1/N = 0`` of the
    quadratic through it and its two neighbours, which removes ``1/N`` and
    ``1/N**2`` corrections exactly.  ``N`` must be evenly spaced.
    """
    pts = [(int(n), float(s)) for n, s in trace]
    if len(pts) < 3:
        raise ValueError("Richardson extrapolation needs at least three entries")
    steps = {b[0] - a[0] for a, b in zip(pts, pts[1:])}
    if len(steps) != 1 or min(steps) <= 0:
        raise ValueError("non-consecutive N in Richardson trace")
    out = []
    for (n0, s0), (n1, s1), (n2, s2) in zip(pts, pts[1:], pts[2:]):
        x = (1.0 / n0, 1.0 / n1, 1.0 / n2)
        v = (s0 * x[1] * x[2] / ((x[0] - x[1]) * (x[0] - x[2]))
             + s1 * x[0] * x[2] / ((x[1] - x[0]) * (x[1] - x[2]))
             + s2 * x[0] * x[1] / ((x[2] - x[0]) * (x[2] - x[1])))
        out.append((n1, v))
    return out


def _default_ctx(f: TruncatedSeries, N: int, noise_digits: int, capacity: float | None) -> PrecisionContext:
    c = capacity if capacity is not None else 0.25
    return required_precision(max(N, 1), noise_digits, c)


def pade_block(f: TruncatedSeries, N: int, ctx: PrecisionContext) -> tuple[int, int]:
    """``(L, N)`` actually used at order N.

    The diagonal, unless the clean series has a degenerate diagonal block or
    a diagonal denominator of degree below N (as for odd or even series);
    then ``[N, N-1]``.
    """
    try:
        p = build_pade(f, N, N, ctx, exact=False)
    except DegeneratePadeError:
        return N, N - 1
    with ctx.local():
        tol = mpfr(10) ** (-(ctx.effective_digits - 8))
        if N >= 1 and abs(p.Q[-1]) <= tol * max(abs(q) for q in p.Q):
            return N, N - 1
    return N, N


def capacity_trace(f: TruncatedSeries, N_values: Iterable[int], capacity: float | None = None,
                   ctx_for: Callable[[int], PrecisionContext] | None = None, label: str = "") -> CapacityTrace:
    """``d_N`` and ``1/d_N`` over ``N_values`` with a Richardson column.

    Orders with a degenerate diagonal block are skipped and recorded.
    """
    rows, skipped = [], []
    for N in sorted(set(N_values)):
        ctx = ctx_for(N) if ctx_for else _default_ctx(f, N, 0, capacity)
        try:
            p = build_pade(f, N, N, ctx)
        except DegeneratePadeError:
            skipped.append(N)
            continue
        d, inv = capacity_estimate(find_poles(p, ctx, with_zeros=False), ctx)
        rows.append((N, d, inv))
    rich = {}
    if len(rows) >= 3:
        try:
            rich = dict(richardson2([(n, inv) for n, _, inv in rows]))
        except ValueError:
            log.warning("uneven N spacing: Richardson column left empty")
    entries = [CapacityEntry(n, d, inv, rich.get(n)) for n, d, inv in rows]
    return CapacityTrace(entries, label or f.label, skipped)


# ------------------------------------------------------------------ deviation and kink

@dataclass(frozen=True)
class DeltaPoint:
    N: int
    delta: float
    inv_noisy: float
    inv_reference: float
    block: tuple


def _noisy_pair(f: TruncatedSeries, spec: NoiseSpec, index: int):
    g, _ = add_noise(f, spec, index)
    h, _ = add_noise(f, reference_spec(spec), index)
    return g, h


def _inverse_dN(s: TruncatedSeries, L: int, N: int, ctx: PrecisionContext) -> float:
    p = build_pade(s, N, L, ctx)
    return capacity_estimate(find_poles(p, ctx, with_zeros=False), ctx)[1]


def deviation_delta(f: TruncatedSeries, spec: NoiseSpec, N: int, index: int = 0,
                    ctx: PrecisionContext | None = None, capacity: float | None = None,
                    _pair=None) -> DeltaPoint:
    """``|1/d_N(f_eps) - 1/d_N(f_eps')|`` for one realization.

    Both the noisy and the reference series use the same draws.  When the
    clean series has a degenerate diagonal block at N, both sides use the
    ``[N, N-1]`` approximant instead.
    """
    if f.order < 2 * N:
        raise ValueError(f"series order {f.order} < 2N = {2 * N}")
    ctx = ctx or _default_ctx(f, N, spec.noise_digits, capacity)
    g, h = _pair if _pair is not None else _noisy_pair(f, spec, index)
    L, M = pade_block(f, N, ctx)
    a = _inverse_dN(g, L, M, ctx)
    b = _inverse_dN(h, L, M, ctx)
    return DeltaPoint(N, abs(a - b), a, b, (L, M))


def delta_trace(f: TruncatedSeries, spec: NoiseSpec, N_values: Iterable[int], index: int = 0,
                delta: float | None = DEFAULT_DELTA, capacity: float | None = None,
                ctx_for: Callable[[int], PrecisionContext] | None = None) -> list[DeltaPoint]:
    """Deviation over increasing N; stops after the first exceedance of
    ``delta`` (pass ``delta=None`` for the full trace)."""
    pair = _noisy_pair(f, spec, index)
    out = []
    for N in sorted(set(N_values)):
        ctx = ctx_for(N) if ctx_for else _default_ctx(f, N, spec.noise_digits, capacity)
        pt = deviation_delta(f, spec, N, index, ctx, capacity, _pair=pair)
        out.append(pt)
        if delta is not None and pt.delta > delta:
            break
    return out


def detect_Nc_kink(trace, delta: float = DEFAULT_DELTA) -> int | None:
    """Smallest N with deviation above ``delta``."""
    pts = [(p.N, p.delta) if isinstance(p, DeltaPoint) else (int(p[0]), float(p[1])) for p in trace]
    if not pts:
        raise ValueError("empty deviation trace")
    hits = [n for n, d in pts if d > delta]
    return min(hits) if hits else None


def noise_resolution(spec: NoiseSpec) -> float:
    """Smallest coefficient change the noise can resolve."""
    if spec.mode == "additive":
        return float(spec.epsilon)
    if spec.mode == "truncation":
        return 10.0 ** (-spec.digits)
    return 0.0


def detect_Nc_spurious(f: TruncatedSeries, spec: NoiseSpec, locus: RayLocus, N_range: Iterable[int],
                       index: int = 0, tol: float = 0.1, window: float = 3.0, doublet_tol: float | None = None,
                       capacity: float | None = None,
                       ctx_for: Callable[[int], PrecisionContext] | None = None) -> int | None:
    """First N whose noisy approximant has a spurious pole inside ``window``.

    ``doublet_tol`` defaults to the noise resolution: a pole cancelled by a
    zero closer than that is invisible at the noise level and counted as a
    Froissart doublet rather than a spurious pole.
    """
    g, _ = add_noise(f, spec, index)
    dt = noise_resolution(spec) if doublet_tol is None else doublet_tol
    if dt <= 0:
        dt = 1e-3
    for N in sorted(set(N_range)):
        ctx = ctx_for(N) if ctx_for else _default_ctx(f, N, spec.noise_digits, capacity)
        L, M = pade_block(f, N, ctx)
        p = build_pade(g, M, L, ctx)
        poles = find_poles(p, ctx)
        part = flag_spurious(poles, expected_locus=locus, tol=tol, doublet_tol=dt, window=window)
        if part.spurious_in_window(poles.poles):
            return N
    return None


def ensemble_Nc(f: TruncatedSeries, spec: NoiseSpec, detector: str = "kink", N_range: Iterable[int] = (),
                delta: float = DEFAULT_DELTA, locus: RayLocus | None = None, capacity: float | None = None,
                keep_traces: bool = True, **kw) -> BreakdownResult:
    """Run a detector over realizations ``0..R-1`` of ``spec``.

    Failing realizations are recorded in ``errors``; the call fails only
    when every realization fails.
    """
    if spec.realizations < 1:
        raise ValueError("need at least one realization")
    if detector not in ("kink", "spurious"):
        raise ValueError(f"unknown detector {detector!r}")
    if detector == "spurious" and locus is None:
        raise ValueError("spurious-pole detection needs a locus")
    N_range = list(N_range)
    result = BreakdownResult(detector, delta if detector == "kink" else None, None)
    for i in range(spec.realizations):
        result.seeds.append(derived_seed(spec.seed, i))
        try:
            if detector == "kink":
                tr = delta_trace(f, spec, N_range, i, delta, capacity, kw.get("ctx_for"))
                nc = detect_Nc_kink(tr, delta)
                if keep_traces:
                    result.traces[i] = [(p.N, p.delta) for p in tr]
            else:
                nc = detect_Nc_spurious(f, spec, locus, N_range, i, capacity=capacity, **kw)
        except Exception as e:  # recorded, not fatal
            log.warning("realization %d failed: %s", i, e)
            result.errors[i] = f"{type(e).__name__}: {e}"
            result.ensemble_N_c.append(None)
            continue
        result.ensemble_N_c.append(nc)
    if len(result.errors) == spec.realizations:
        raise RuntimeError(f"all realizations failed: {result.errors}")
    med = result.summary["median"]
    result.N_c = None if med is None else int(round(med))
    if 0 in result.traces:
        result.delta_trace = result.traces[0]
    return result


# ------------------------------------------------------------------ slope fits

def slope_fit(results, M: int | None = None, capacity: float | None = None, z_inf: float | None = None) -> SlopeFit:
    """OLS fit of ``N_c`` against ``log10(eps)``.

    ``comparisons`` holds measured/predicted slope ratios for the closed-form
    laws that apply to the given ``M`` / ``capacity`` / ``z_inf``, and the
    fitted constant in ``N_c = C log10(eps) / log10(c)``.
    """
    pts = [(math.log10(float(mpq(e) if isinstance(e, str) else e)), float(n)) for e, n in results if n is not None]
    if len({x for x, _ in pts}) < 4:
        raise ValueError("slope fit needs at least four distinct epsilon values")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.linalg.norm(y - (slope * x + intercept)))
    comp = {}
    l1p = math.log10(1 + math.sqrt(2))
    if M is not None:
        comp["nc1"] = slope / (-1.0 / (4 * l1p))
        comp["ncM"] = slope / (-M / (4 * l1p))
        c = capacity if capacity is not None else 4.0 ** (-1.0 / M)
        comp["resultM"] = slope / (RESULT_M_CONSTANT / math.log10(c))
        zi = z_inf if z_inf is not None else (1 + math.sqrt(2)) ** (-2.0 / M)
        comp["final"] = slope / (1.0 / (2 * math.log10(zi)))
    if capacity is not None or M is not None:
        c = capacity if capacity is not None else 4.0 ** (-1.0 / M)
        comp["guess_constant"] = slope * math.log10(c)
    return SlopeFit([(float(a), float(b)) for a, b in pts], float(slope), float(intercept), resid, comp)


RESULT_M_CONSTANT = math.log10(math.sqrt(2)) / math.log10(1 + math.sqrt(2))
