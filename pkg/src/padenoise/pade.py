"""Diagonal and near-diagonal Padé approximants.

The denominator is found from the Toeplitz Taylor-match system.  Exact
series go through fraction-free (Bareiss) elimination over the integers;
everything else through partial-pivoting Gaussian elimination at the
working precision.  Degenerate Padé blocks show up as rank deficiency and
raise :class:`DegeneratePadeError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import lcm

import gmpy2
from gmpy2 import mpc, mpfr, mpq, mpz

from .errors import DegeneratePadeError
from .numeric import DEFAULT_CONTEXT, PrecisionContext, as_rational, to_mpc
from .roots import find_roots, polyval, residual_scale, trim
from .series import TruncatedSeries


@dataclass(frozen=True)
class PadeApproximant:
    """``P/Q`` with ``deg P <= L``, ``deg Q <= N`` and ``Q(0) = 1``."""

    P: tuple
    Q: tuple
    L: int
    N: int
    match_order: int
    exact: bool
    match_residual: float = 0.0
    ctx: PrecisionContext = DEFAULT_CONTEXT

    @property
    def degrees(self) -> tuple[int, int]:
        return self.L, self.N

    def __call__(self, w):
        return evaluate(self, w)


@dataclass
class PoleSet:
    """Roots of the denominator with residues and nearest-zero distances."""

    poles: list
    residues: list
    nearest_zero: list
    order: int
    zeros: list = field(default_factory=list)

    def __len__(self):
        return len(self.poles)

    def as_complex(self) -> list[complex]:
        return [complex(z) for z in self.poles]


# ------------------------------------------------------------------ linear algebra

def _toeplitz_system(f, L: int, N: int):
    """Rows ``sum_j f[L+i-j] q_j = -f[L+i]`` for ``i = 1..N``."""
    def c(k):
        return f[k] if k >= 0 else 0
    A = [[c(L + i - j) for j in range(1, N + 1)] for i in range(1, N + 1)]
    b = [-c(L + i) for i in range(1, N + 1)]
    return A, b


def _modular_rank(rows, p: int) -> int:
    M = [[int(x) % p for x in r] for r in rows]
    n, m = len(M), len(M[0]) if M else 0
    rank = 0
    for col in range(m):
        piv = next((i for i in range(rank, n) if M[i][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][col], -1, p)
        for i in range(rank + 1, n):
            if M[i][col]:
                fac = M[i][col] * inv % p
                M[i] = [(a - fac * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def solve_exact(A, b):
    """Solve ``A x = b`` over the rationals by fraction-free elimination.

    Returns ``(x, rank_deficiency)``; ``x`` is ``None`` when singular.
    """
    n = len(A)
    rows = []
    for r, rhs in zip(A, b):
        r = [as_rational(v) for v in r] + [as_rational(rhs)]
        d = 1
        for v in r:
            d = lcm(d, int(v.denominator))
        rows.append([mpz(v * d) for v in r])
    M = [row[:] for row in rows]
    prev = mpz(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            primes = (2305843009213693951, 4611686018427387847, 9223372036854775783)
            rank = max(_modular_rank([r[:n] for r in rows], p) for p in primes)
            return None, n - rank
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        Mk = M[k]
        akk = Mk[k]
        for i in range(k + 1, n):
            Mi = M[i]
            aik = Mi[k]
            if aik == 0:
                for j in range(k + 1, n + 1):
                    Mi[j] = (akk * Mi[j]) // prev
            else:
                for j in range(k + 1, n + 1):
                    Mi[j] = (akk * Mi[j] - aik * Mk[j]) // prev
            Mi[k] = mpz(0)
        prev = akk
    x = [mpq(0)] * n
    for i in range(n - 1, -1, -1):
        s = mpq(M[i][n])
        Mi = M[i]
        for j in range(i + 1, n):
            if Mi[j]:
                s -= Mi[j] * x[j]
        x[i] = s / Mi[i]
    return x, 0


def solve_float(A, b, ctx: PrecisionContext):
    """Partial-pivoting elimination at ``ctx``; returns ``(x, rank_deficiency)``.

    Rows are equilibrated first; a pivot below ``10**-(digits - 8)`` of its
    row scale counts as a lost rank.
    """
    n = len(A)
    with ctx.local():
        M = []
        for r, rhs in zip(A, b):
            row = [mpfr(v) for v in r] + [mpfr(rhs)]
            s = max(abs(v) for v in row[:n])
            if s == 0:
                s = mpfr(1)
            M.append([v / s for v in row])
        tol = mpfr(10) ** (-(ctx.effective_digits - 8))
        deficiency = 0
        for k in range(n):
            piv = max(range(k, n), key=lambda i: abs(M[i][k]))
            if abs(M[piv][k]) <= tol:
                deficiency += 1
                continue
            if piv != k:
                M[k], M[piv] = M[piv], M[k]
            Mk = M[k]
            inv = 1 / Mk[k]
            for i in range(k + 1, n):
                Mi = M[i]
                fac = Mi[k] * inv
                if fac == 0:
                    continue
                for j in range(k + 1, n + 1):
                    Mi[j] -= fac * Mk[j]
                Mi[k] = mpfr(0)
        if deficiency:
            return None, deficiency
        x = [mpfr(0)] * n
        for i in range(n - 1, -1, -1):
            Mi = M[i]
            s = Mi[n]
            for j in range(i + 1, n):
                s -= Mi[j] * x[j]
            x[i] = s / Mi[i]
        return x, 0


# ------------------------------------------------------------------ construction

def _use_exact(f: TruncatedSeries, exact) -> bool:
    if exact is None:
        return f.exact and f.noise_mode != "additive"
    if exact and not f.exact:
        raise ValueError("exact Padé requested for a series with inexact coefficients")
    return bool(exact)


def build_pade(f: TruncatedSeries, N: int, L: int | None = None, ctx: PrecisionContext | None = None,
               exact: bool | None = None, reduce: bool = False) -> PadeApproximant:
    """The [L, N] Padé approximant of ``f`` (``L`` defaults to ``N``).

    Only ``|L - N| <= 1`` is supported.  ``exact=None`` picks the rational
    path for exact, non-additively-noised series.  A singular system raises
    :class:`DegeneratePadeError` unless ``reduce`` is set, in which case the
    denominator degree is lowered by the rank deficiency (the corner of the
    degenerate block), provided the result still matches through ``L+N``.
    """
    if L is None:
        L = N
    if N < 0 or L < 0:
        raise ValueError("degrees must be non-negative")
    if abs(L - N) > 1:
        raise ValueError(f"only diagonal and near-diagonal approximants are supported, got [{L},{N}]")
    if f.order < L + N:
        raise ValueError(f"series order {f.order} < L+N = {L + N}")
    ctx = ctx or DEFAULT_CONTEXT
    use_exact = _use_exact(f, exact)
    coeffs = f.coeffs[: L + N + 1]
    if use_exact:
        fc = [as_rational(c) for c in coeffs]
    else:
        with ctx.local():
            fc = [mpfr(c) for c in coeffs]
    n = N
    while True:
        try:
            P, Q = _solve_block(fc, L, n, use_exact, ctx)
            break
        except DegeneratePadeError as e:
            if not reduce or e.rank_deficiency < 1 or n == 0:
                raise DegeneratePadeError(L, N, e.rank_deficiency) from None
            n = max(0, n - e.rank_deficiency)
    with ctx.local():
        residual = _match_residual(fc, P, Q, L + N)
    order = L + N
    if n < N:
        # a reduced block only guarantees the corner's own matching order
        order = _matched_order(fc, P, Q, L + N, use_exact, ctx)
        with ctx.local():
            residual = _match_residual(fc, P, Q, order)
    if use_exact and residual != 0:
        raise AssertionError("exact Padé failed its Taylor-match certificate")
    return PadeApproximant(tuple(P), tuple(Q), L, N, order, use_exact, float(residual), ctx)


def _matched_order(fc, P, Q, top, use_exact, ctx):
    tol = 0 if use_exact else 10.0 ** (-ctx.decimal_digits + 5)
    with ctx.local():
        res = _residuals(fc, P, Q, top)
    for k, r in enumerate(res):
        if r > tol:
            return k - 1
    return top


def _solve_block(fc, L: int, N: int, use_exact: bool, ctx: PrecisionContext):
    if N == 0:
        q = []
    else:
        with ctx.local():
            A, b = _toeplitz_system(fc, L, N)
        q, deficiency = solve_exact(A, b) if use_exact else solve_float(A, b, ctx)
        if deficiency:
            raise DegeneratePadeError(L, N, deficiency)
    one = mpq(1) if use_exact else mpfr(1)
    with ctx.local():
        Q = [one] + list(q)
        P = [sum((Q[j] * fc[i - j] for j in range(0, min(i, N) + 1)), 0 * one) for i in range(L + 1)]
    return P, Q


def _residuals(fc, P, Q, order):
    """``|[w^k](Q f - P)| / scale_k`` for ``k = 0..order`` (exactly 0 when exact)."""
    out = []
    for k in range(order + 1):
        acc = 0
        scale = 0
        for j in range(0, min(k, len(Q) - 1) + 1):
            t = Q[j] * fc[k - j]
            acc += t
            scale += abs(t)
        if k < len(P):
            acc -= P[k]
            scale += abs(P[k])
        out.append(abs(acc) / scale if acc != 0 else 0)
    return out


def _match_residual(fc, P, Q, order):
    return max(_residuals(fc, P, Q, order), default=0)


def taylor_coefficients(p: PadeApproximant, order: int):
    """Maclaurin coefficients of ``P/Q`` through ``order`` (power-series division)."""
    with p.ctx.local():
        out = []
        Q = p.Q
        for k in range(order + 1):
            acc = p.P[k] if k < len(p.P) else 0 * p.Q[0]
            for j in range(1, min(k, len(Q) - 1) + 1):
                acc -= Q[j] * out[k - j]
            out.append(acc / Q[0])
        return out


def evaluate(p: PadeApproximant, w, ctx: PrecisionContext | None = None):
    ctx = ctx or p.ctx
    with ctx.local():
        z = to_mpc(w)
        return polyval([to_mpc(c) for c in p.P], z) / polyval([to_mpc(c) for c in p.Q], z)


def pade_with_fallback(f: TruncatedSeries, N: int, ctx: PrecisionContext | None = None, exact: bool | None = None):
    """``build_pade(f, N)``; on a degenerate block retry at ``[N, N-1]``.

    Callers comparing two series at the same order should choose the block
    from the clean series instead (see ``breakdown.pade_block``).
    """
    try:
        return build_pade(f, N, N, ctx, exact)
    except DegeneratePadeError:
        if N < 1:
            raise
        return build_pade(f, N - 1, N, ctx, exact)


# ------------------------------------------------------------------ poles and zeros

def find_poles(p: PadeApproximant, ctx: PrecisionContext | None = None, with_zeros: bool = True) -> PoleSet:
    """All roots of ``Q`` with residues; zeros of ``P`` when ``with_zeros``."""
    ctx = ctx or p.ctx
    Q = trim(p.Q)
    if len(Q) < 2:
        raise ValueError("denominator has degree 0; no poles")
    poles = find_roots(Q, ctx)
    zeros = find_roots(trim(p.P), ctx) if with_zeros and len(trim(p.P)) > 1 else []
    with ctx.local():
        Pm = [to_mpc(c) for c in p.P]
        Qm = [to_mpc(c) for c in Q]
        dQ = [k * Qm[k] for k in range(1, len(Qm))]
        residues = []
        for w in poles:
            d = polyval(dQ, w)
            residues.append(abs(polyval(Pm, w) / d) if d != 0 else mpfr("inf"))
        if zeros:
            nearest = [min(abs(w - z) for z in zeros) for w in poles]
        else:
            nearest = [mpfr("inf")] * len(poles)
    return PoleSet(poles, residues, nearest, p.N, zeros)


def find_zeros(p: PadeApproximant, ctx: PrecisionContext | None = None) -> list:
    ctx = ctx or p.ctx
    P = trim(p.P)
    return find_roots(P, ctx) if len(P) > 1 else []


# ------------------------------------------------------------------ spurious poles

@dataclass(frozen=True)
class RayLocus:
    """Union of rays ``{s t / |s| : t >= |s|}`` from each start point ``s``."""

    starts: tuple

    def distance(self, w: complex) -> float:
        best = math.inf
        for s in self.starts:
            s = complex(s)
            u = s / abs(s)
            t = (w * u.conjugate()).real
            if t <= abs(s):
                d = abs(w - s)
            else:
                d = abs(w - t * u)
            best = min(best, d)
        return best

    def as_dict(self) -> dict:
        return {"kind": "rays", "starts": [[complex(s).real, complex(s).imag] for s in self.starts]}


def mcut_locus(M: int) -> RayLocus:
    """Radial cuts from the roots of ``w**M = -1`` out to infinity."""
    return RayLocus(tuple(complex(math.cos(math.pi * (2 * j + 1) / M), math.sin(math.pi * (2 * j + 1) / M))
                          for j in range(M)))


@dataclass
class SpuriousPartition:
    labels: list
    on_locus: list
    spurious: list
    doublet: list
    window: float

    def spurious_in_window(self, poles) -> list:
        return [i for i in self.spurious if abs(complex(poles[i])) < self.window]


def flag_spurious(poles: PoleSet, zeros=None, expected_locus: RayLocus | None = None, tol: float = 0.1,
                  doublet_tol: float = 1e-3, window: float = 3.0) -> SpuriousPartition:
    """Partition poles into on-locus, spurious and Froissart doublets.

    A pole is a doublet when its nearest zero lies within ``doublet_tol``;
    otherwise spurious when farther than ``tol`` from ``expected_locus``.
    Without explicit ``zeros`` the pole set's own nearest-zero distances
    are used.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if zeros is None:
        gaps = [float(d) for d in poles.nearest_zero]
    else:
        # distances at full precision: noise-level doublets are far below
        # double-precision resolution
        zs = [to_mpc(z) for z in zeros]
        with gmpy2.context(precision=max([z.precision[0] for z in zs] + [53]) if zs else 53):
            gaps = [float(min((abs(to_mpc(w) - z) for z in zs), default=mpfr("inf"))) for w in poles.poles]
    labels, on, sp, db = [], [], [], []
    for i, w in enumerate(poles.poles):
        wc = complex(w)
        if gaps[i] < doublet_tol:
            labels.append("doublet")
            db.append(i)
        elif expected_locus is not None and expected_locus.distance(wc) > tol:
            labels.append("spurious")
            sp.append(i)
        else:
            labels.append("on_locus")
            on.append(i)
    return SpuriousPartition(labels, on, sp, db, window)


# ------------------------------------------------------------------ |psi| from Padé differences

@dataclass
class PsiEstimate:
    value: float
    angles: list
    skipped: int
    degenerate: bool = False


def _polymul(a, b):
    out = [0 * a[0]] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _polysub(a, b):
    n = max(len(a), len(b))
    z = 0 * a[0]
    return [(a[i] if i < len(a) else z) - (b[i] if i < len(b) else z) for i in range(n)]


def psi_from_pade_diff(f: TruncatedSeries, N: int, circle_samples: int = 256,
                       ctx: PrecisionContext | None = None, rel_tie: float = 1e-6) -> PsiEstimate:
    """``min_theta |[N,N] - [N-1,N-1]|**(1/2N)`` on the unit circle.

    The difference is evaluated as ``D / (Q_N Q_{N-1})`` with the cross
    numerator ``D = P_N Q_{N-1} - P_{N-1} Q_N`` formed first, so exact
    series need no extra working precision.  Degenerate blocks are reduced to
    their corner approximant.
    """
    if circle_samples < 64:
        raise ValueError("circle_samples must be >= 64")
    if f.order < 2 * N:
        raise ValueError("series order must be >= 2N")
    ctx = ctx or DEFAULT_CONTEXT
    pa = build_pade(f, N, N, ctx, reduce=True)
    pb = build_pade(f, N - 1, N - 1, ctx, reduce=True)
    with ctx.local():
        D = trim(_polysub(_polymul(list(pa.P), list(pb.Q)), _polymul(list(pb.P), list(pa.Q))))
        if all(c == 0 for c in D):
            return PsiEstimate(0.0, [], 0, degenerate=True)
        Dm = [to_mpc(c) for c in D]
        Qa = [to_mpc(c) for c in pa.Q]
        Qb = [to_mpc(c) for c in pb.Q]
        skip_tol = mpfr(10) ** (-(ctx.decimal_digits // 2))
        vals = []
        skipped = 0
        two_pi = 2 * gmpy2.const_pi()
        for s in range(circle_samples):
            theta = two_pi * s / circle_samples
            w = mpc(gmpy2.cos(theta), gmpy2.sin(theta))
            qa, qb = polyval(Qa, w), polyval(Qb, w)
            if abs(qa) <= skip_tol * residual_scale(Qa, w) or abs(qb) <= skip_tol * residual_scale(Qb, w):
                skipped += 1
                vals.append(None)
                continue
            diff = abs(polyval(Dm, w) / (qa * qb))
            vals.append(diff)
        if skipped > circle_samples // 10:
            raise ValueError(f"{skipped} of {circle_samples} circle samples hit poles")
        good = [v for v in vals if v is not None]
        vmin = min(good)
        if vmin == 0:
            return PsiEstimate(0.0, [], skipped, degenerate=True)
        est = float(gmpy2.exp(gmpy2.log(vmin) / (2 * N)))
        angles = []
        n = circle_samples
        for s, v in enumerate(vals):
            if v is None:
                continue
            left, right = vals[(s - 1) % n], vals[(s + 1) % n]
            if (left is None or v <= left) and (right is None or v <= right) and v <= vmin * (1 + rel_tie):
                angles.append(2 * math.pi * s / n)
    return PsiEstimate(est, angles, skipped)
