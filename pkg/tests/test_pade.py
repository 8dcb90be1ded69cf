from __future__ import annotations

import math
import random

import mpmath
import numpy as np
import pytest
from gmpy2 import mpc, mpfr, mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from padenoise import _kernels
from padenoise.errors import DegeneratePadeError, RootFindingError
from padenoise.numeric import PrecisionContext
from padenoise.pade import (PoleSet, build_pade, find_poles, flag_spurious, mcut_locus, pade_with_fallback,
                            psi_from_pade_diff, taylor_coefficients)
from padenoise.roots import find_roots
from padenoise.series import TruncatedSeries, binomial_series

CTX = PrecisionContext(60)


def _series_of_rational(P, Q, order):
    """Exact Maclaurin coefficients of P/Q (Q[0] != 0)."""
    out = []
    for k in range(order + 1):
        acc = mpq(P[k]) if k < len(P) else mpq(0)
        for j in range(1, min(k, len(Q) - 1) + 1):
            acc -= Q[j] * out[k - j]
        out.append(acc / Q[0])
    return TruncatedSeries(out, "rational", "file")


def test_geometric_series():
    p = build_pade(TruncatedSeries([mpq(1)] * 5, provenance="file"), 1)
    assert p.exact and list(p.P) == [1, 0]
    assert list(p.Q) == [1, -1]
    assert p.match_order == 2


@given(st.lists(st.integers(-20, 20), min_size=13, max_size=13), st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_taylor_match_invariant_exact(coeffs, N):
    f = TruncatedSeries([mpq(c, 1 + abs(c) % 5) for c in coeffs], provenance="file")
    for L in (N - 1, N):
        try:
            p = build_pade(f, N, L)
        except DegeneratePadeError:
            continue
        assert taylor_coefficients(p, L + N) == list(f.coeffs[: L + N + 1])


def test_float_path_agrees_with_exact():
    f = binomial_series(mpq(-1, 9), 1, 40)
    pe = build_pade(f, 20, exact=True)
    pf = build_pade(f, 20, ctx=PrecisionContext(80), exact=False)
    assert pf.match_residual < 1e-60
    for a, b in zip(pe.Q, pf.Q):
        assert abs(mpq(a) - mpq(b)) <= abs(mpq(a)) * mpq(1, 10**50) + mpq(1, 10**70)


def test_degenerate_block_and_reduction():
    f = binomial_series(mpq(-1, 9), 2, 40)
    with pytest.raises(DegeneratePadeError) as err:
        build_pade(f, 11)
    assert err.value.rank_deficiency >= 1
    with pytest.raises(DegeneratePadeError):
        build_pade(f, 11, ctx=CTX, exact=False)
    r = build_pade(f, 11, reduce=True)
    assert r.match_order >= 21
    fb = pade_with_fallback(f, 11)
    assert (fb.L, fb.N) == (11, 10)


def test_rational_function_recovered_exactly():
    P, Q = [1, 2], [1, -3, 2]  # poles at 1/2 and 1
    f = _series_of_rational(P, Q, 20)
    p = build_pade(f, 6, reduce=True)
    ps = find_poles(p, CTX)
    got = sorted(complex(z).real for z in ps.poles)
    assert got == pytest.approx([0.5, 1.0], abs=1e-40)
    assert psi_from_pade_diff(f, 6, 64, CTX).degenerate


def test_find_roots_against_mpmath():
    rnd = random.Random(3)
    for _ in range(10):
        n = rnd.randint(2, 14)
        c = [mpq(rnd.randint(-50, 50), rnd.randint(1, 9)) for _ in range(n)] + [mpq(rnd.randint(1, 9))]
        got = find_roots(c, CTX)
        mpmath.mp.dps = 60
        ref = mpmath.polyroots([mpmath.mpf(int(x.numerator)) / int(x.denominator) for x in reversed(c)],
                               maxsteps=200, extraprec=200)
        with CTX.local():
            for r in ref:
                rr = mpc(mpfr(str(mpmath.re(r))), mpfr(str(mpmath.im(r))))
                assert min(abs(g - rr) for g in got) < 1e-40


def test_find_roots_exact_zero_and_failure():
    r = find_roots([mpq(0), mpq(0), mpq(-1), mpq(1)], CTX)
    assert sum(1 for z in r if z == 0) == 2
    with pytest.raises(RootFindingError):
        find_roots([mpq(1)] + [mpq(0)] * 30 + [mpq(1)], CTX, maxiter=1, seeds=[0.1 + 0.1j] * 31)


def test_kernels_agree_across_backends():
    rng = np.random.default_rng(0)
    z = rng.standard_normal(30) + 1j * rng.standard_normal(30)
    s1, d1 = _kernels._pair_log_sum_numpy(z)
    s2, d2 = _kernels._pair_log_sum_loops(z)
    assert s1 == pytest.approx(s2, rel=1e-12) and d1 == pytest.approx(d2)
    roots = np.exp(2j * np.pi * np.arange(12) / 12) * 0.7
    c = np.poly(roots)[::-1].astype(np.complex128)
    z0 = 1.2 * np.exp(2j * np.pi * (np.arange(12) + 0.25) / 12)
    for fn in (_kernels._aberth_numpy, _kernels._aberth_loops):
        got, conv, _ = fn(c, z0.copy(), 500, 4e-16)
        assert conv.all()
        assert max(min(abs(g - r) for g in got) for r in roots) < 1e-12
    assert _kernels.backend() in ("numba", "numpy")


def test_flag_spurious_partition():
    poles = [mpc(-1.5, 0.0), mpc(0.5, 0.8), mpc(2.0, 0.0), mpc(-5.0, 0.3)]
    nz = [mpfr(1), mpfr(1), mpfr("1e-40"), mpfr(1)]
    ps = PoleSet(poles, [mpfr(1)] * 4, nz, 4)
    part = flag_spurious(ps, expected_locus=mcut_locus(1), tol=0.1)
    assert part.labels == ["on_locus", "spurious", "doublet", "spurious"]
    assert part.spurious_in_window(ps.poles) == [1]
    with pytest.raises(ValueError):
        flag_spurious(ps, tol=0)


def test_locus_distance():
    loc = mcut_locus(2)
    assert loc.distance(3j) == pytest.approx(0)
    assert loc.distance(0) == pytest.approx(1)
    assert loc.distance(2) == pytest.approx(math.sqrt(5))


def test_psi_from_pade_diff_one_cut():
    f = binomial_series(mpq(-1, 9), 1, 60)
    est = psi_from_pade_diff(f, 30, 256, PrecisionContext(80))
    assert est.value == pytest.approx((math.sqrt(2) + 1) ** -2, rel=0.15)
    assert est.angles == [0.0]
