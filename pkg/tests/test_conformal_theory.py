from __future__ import annotations

import math

import numpy as np
import pytest
from gmpy2 import mpc, mpfr, mpq

from padenoise.conformal import (composition_matrix, compose_with_map, find_z_inf, map_derivatives, mcut_map,
                                 one_cut_weight, parse_map, user_map)
from padenoise.errors import NoiseInsensitiveRegion, NonGenericMinimum
from padenoise.noise import draw_matrix
from padenoise.numeric import PrecisionContext
from padenoise.series import binomial_series
from padenoise.theory import (TheoryPrediction, amplitude, amplitude_terms, breakdown_coeff_condition,
                              breakdown_point_condition, breakdown_threshold_k, breakdown_threshold_seed,
                              predict_Nc, sigma_nk, variance_asymptotic, variance_exact, variance_peak)

CTX = PrecisionContext(40)


@pytest.mark.parametrize("M", [1, 2, 3, 4])
def test_map_round_trip(M):
    cmap = mcut_map(M)
    for z in (0.3, 0.2 + 0.4j, -0.5j, 0.6 * np.exp(0.7j)):
        w = cmap.phi(z, CTX)
        back = cmap.psi(w, CTX)
        assert abs(complex(back) - z) < 1e-30


@pytest.mark.parametrize("M", [1, 2, 3])
def test_phi_coefficients_match_cauchy(M):
    cmap = mcut_map(M)
    closed = cmap.phi_coefficients(12, CTX)
    um = user_map(lambda z: cmap.phi(z, CTX), lambda w: cmap.psi(w, CTX), name="copy", ctx=CTX)
    numeric = um.phi_coefficients(12, CTX)
    for a, b in zip(closed, numeric):
        assert abs(complex(a) - complex(b)) < 1e-25


def test_one_cut_weight_brute_force():
    # [z^m] (4z/(1-z)^2)^k by repeated polynomial multiplication
    order = 12
    base = [0] + [4 * (j + 1) for j in range(order)]  # 4z/(1-z)^2 = sum 4 j z^j
    power = [1] + [0] * order
    for k in range(order + 1):
        for m in range(order + 1):
            assert one_cut_weight(m, k) == power[m]
        power = [sum(power[i] * base[m - i] for i in range(m + 1)) for m in range(order + 1)]


def test_composition_closed_equals_power():
    f = binomial_series(mpq(-1, 9), 1, 20)
    a = compose_with_map(f, mcut_map(1), 20, method="closed")
    b = compose_with_map(f, mcut_map(1), 20, method="power")
    assert a.coeffs == b.coeffs
    with pytest.raises(ValueError):
        compose_with_map(f, mcut_map(2), 10, method="closed")


def test_composition_evaluates_f_of_phi():
    f = binomial_series(mpq(-1, 9), 2, 60)
    g = compose_with_map(f, mcut_map(2), 60, CTX)
    z = mpfr("0.2")
    cmap = mcut_map(2)
    with CTX.local():
        w = cmap.phi(z, CTX)
        direct = (1 + w**2) ** (mpfr(-1) / 9)
        series = sum(mpfr(c) * z**k for k, c in enumerate(g.coeffs))
        assert abs(direct - series) < mpfr("1e-30")


@pytest.mark.parametrize("M", [1, 2, 3])
def test_z_inf_numeric_matches_closed_form(M):
    cmap = mcut_map(M)
    z, om = find_z_inf(cmap, 1024, CTX)
    assert z == pytest.approx(cmap.z_inf, rel=1e-12)
    assert len(om) == M


def test_derivatives_analytic_vs_finite_difference():
    cmap = mcut_map(2)
    w = mpc(0.3, 0.4)
    a = map_derivatives(cmap, w, CTX, "analytic")
    b = map_derivatives(cmap, w, CTX, "fd")
    for x, y in ((a.dpsi, b.dpsi), (a.d2psi, b.d2psi), (a.alpha_theta, b.alpha_theta)):
        assert abs(complex(x) - complex(y)) < 1e-10


def test_parse_map():
    assert parse_map("mcut:3").M == 3
    with pytest.raises(ValueError):
        parse_map("disk")


# ------------------------------------------------------------------ theory

def test_variance_exact_and_asymptotic():
    assert variance_exact(1, 0) == mpq(1, 3)
    assert variance_exact(1, 1) == mpq(16, 3)
    for m in (50, 80):
        r = float(variance_asymptotic(1, m) / variance_exact(1, m))
        assert abs(r - 1) < 0.01
    assert variance_peak(100) == 71


def test_variance_monte_carlo_small():
    T = composition_matrix(20)
    draws = draw_matrix(11, range(4000), 21)
    mc = (draws @ T.T).var(axis=0)
    for m in (5, 20):
        assert mc[m] / float(variance_exact(1, m)) == pytest.approx(1, rel=0.1)


def test_amplitude_conventions():
    one = mcut_map(1)
    assert amplitude(one, "closed") == pytest.approx(0.4287, rel=1e-3)
    assert amplitude(one, "saddle") == pytest.approx(1 / math.sqrt(3 * 2**0.25 * math.sqrt(2 * math.pi)), rel=1e-9)
    assert len(amplitude_terms(mcut_map(2))) == 2
    with pytest.raises(NonGenericMinimum):
        amplitude(one, param="omega")


def test_breakdown_predicates_consistent():
    cmap = mcut_map(1)
    eps, delta = 1e-20, 1e-3
    k = breakdown_threshold_k(eps, delta, cmap)
    assert breakdown_coeff_condition(eps, k, delta, cmap)
    assert not breakdown_coeff_condition(eps, k - 1, delta, cmap)
    seed = breakdown_threshold_seed(eps, delta, cmap)
    assert seed <= k <= seed + 2
    assert sigma_nk(eps, k, cmap) >= delta
    with pytest.raises(NoiseInsensitiveRegion):
        breakdown_point_condition(eps, k, delta, 0.1, cmap)
    assert breakdown_point_condition(eps, 80, delta, 0.9, cmap)


@pytest.mark.parametrize("M", [1, 2, 3, 4])
def test_predict_Nc_variants_agree(M):
    a = predict_Nc(mpq(1, 10**40), "final", M=M)
    b = predict_Nc(mpq(1, 10**40), "ncM", M=M)
    c = predict_Nc(mpq(1, 10**40), "resultM", M=M)
    assert a == pytest.approx(b, rel=1e-12) and c == pytest.approx(b, rel=1e-12)
    assert predict_Nc(mpq(1, 10**40), "nc1") == pytest.approx(b / M, rel=1e-14)
    with pytest.raises(ValueError):
        predict_Nc(2, "nc1")


def test_theory_prediction_validation():
    assert TheoryPrediction("Nc_nc1", 3.0).as_dict()["value"] == 3.0
    with pytest.raises(ValueError):
        TheoryPrediction("Nc_nc1", -1.0)
    with pytest.raises(ValueError):
        TheoryPrediction("bogus", 1.0)
