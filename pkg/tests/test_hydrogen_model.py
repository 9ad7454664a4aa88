import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import minimize_scalar
from scipy.special import eval_gegenbauer, eval_genlaguerre

from trotterbounds import dense_oracle as do
from trotterbounds import hydrogen_model as hm

LEVELS = [(n, l) for n in range(1, 5) for l in range(n)]


def level(n, l):
    return hm.HydrogenLevel(n, l)


def radial_moment(lev, k):
    f = lambda r: r ** (2 - k) * hm.radial_wavefunction(lev, r) ** 2
    return quad(f, 0, 20 * lev.n, limit=200)[0] + quad(f, 20 * lev.n, np.inf)[0]


def test_level_validation():
    with pytest.raises(ValueError):
        hm.HydrogenLevel(0, 0)
    with pytest.raises(ValueError):
        hm.HydrogenLevel(2, 2)
    with pytest.raises(ValueError):
        hm.HydrogenLevel(3, 1, m=2)
    assert level(3, 2).energy == Fraction(-1, 18)


@given(st.integers(0, 8), st.floats(0, 4), st.floats(0, 30))
def test_laguerre_recurrence(k, alpha, x):
    assert float(hm.laguerre(k, alpha, x)) == pytest.approx(eval_genlaguerre(k, alpha, x), rel=1e-9, abs=1e-9)


@given(st.integers(0, 8), st.floats(0.5, 5), st.floats(-1, 1))
def test_gegenbauer_recurrence(k, alpha, x):
    assert float(hm.gegenbauer(k, alpha, x)) == pytest.approx(eval_gegenbauer(k, alpha, x), rel=1e-9, abs=1e-9)


def test_low_order_polynomials():
    x = 0.7
    assert float(hm.laguerre(2, 1.0, x)) == pytest.approx((x * x - 6 * x + 6) / 2)
    assert float(hm.gegenbauer(2, 1.5, x)) == pytest.approx(1.5 * (5 * x * x - 1))


def test_ground_state():
    u = np.linspace(0, 5, 11)
    assert np.allclose(hm.radial_wavefunction(level(1, 0), u), 2 * np.exp(-u), rtol=1e-14)
    with pytest.raises(ValueError):
        hm.radial_wavefunction(level(1, 0), -1.0)


@pytest.mark.parametrize("n,l", LEVELS)
def test_normalisation(n, l):
    assert radial_moment(level(n, l), 0) == pytest.approx(1.0, abs=1e-8)


def test_2p_peak():
    res = minimize_scalar(lambda u: -float(u * hm.radial_wavefunction(level(2, 1), u)), bounds=(0.5, 10),
                          method="bounded", options={"xatol": 1e-9})
    assert res.x == pytest.approx(4.0, abs=1e-6)


@pytest.mark.parametrize("n,l", [(n, l) for n, l in LEVELS])
def test_momentum_density_normalised(n, l):
    f = lambda p: float(hm.momentum_distribution(level(n, l), p))
    assert quad(f, 0, 5 / n, limit=200)[0] + quad(f, 5 / n, np.inf, limit=200)[0] == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("n,l", LEVELS)
def test_potential_moments_against_quadrature(n, l):
    lev = level(n, l)
    m = hm.potential_moments(lev)
    assert m[0] == Fraction(1, n * n)
    assert m[1] == 1 / ((l + Fraction(1, 2)) * n**3)
    for k in (1, 2):
        assert float(m[k - 1]) == pytest.approx(radial_moment(lev, k), rel=1e-8)
    if l == 0:
        assert m[2] is hm.DIVERGENT and m[3] is hm.DIVERGENT
        assert float(m[3]) == math.inf
    else:
        for k in (3, 4):
            assert float(m[k - 1]) == pytest.approx(radial_moment(lev, k), rel=1e-8)


def test_fourth_moment_example():
    # (3*4 - 2) / (2*1*2*(3/2)*(1/2)*(5/2)*32) = 10/240; R_21^2 = r^2 e^-r / 24 agrees
    assert hm.potential_moments(level(2, 1))[3] == Fraction(1, 24)


def test_tail_exponents():
    te = hm.tail_exponents(level(1, 0))
    assert (te.delta1, te.delta2) == (Fraction(5, 4), Fraction(3, 2))
    te = hm.tail_exponents(level(3, 2))
    assert (te.delta1, te.delta2) == (Fraction(9, 4), Fraction(7, 2))
    te = hm.tail_exponents(level(5, 4))
    assert (te.delta1, te.delta2) == (Fraction(13, 4), Fraction(11, 2))


@pytest.mark.parametrize("n,l", [(n, l) for n, l in LEVELS if l <= 3])
def test_tail_caps_hold(n, l):
    lev = level(n, l)
    te = hm.tail_exponents(lev)
    d1, d2 = float(te.delta1), float(te.delta2)
    for cut in np.geomspace(0.5, 1e4, 12):
        assert hm.kinetic_tail(lev, cut) <= (te.lambda1 / cut) ** (2 * d1) * (1 + 1e-9)
        assert hm.coulomb_tail(lev, cut) <= (te.lambda2 / cut) ** (2 * d2) * (1 + 1e-9)


def test_tail_caps_are_asymptotically_tight():
    lev = level(2, 0)
    te = hm.tail_exponents(lev)
    cut = 1e6
    ratio = hm.kinetic_tail(lev, cut) / (te.lambda1 / cut) ** (2 * float(te.delta1))
    assert ratio == pytest.approx(1.0, rel=1e-5)


def test_published_coefficients():
    t = lambda n, l: [tm.coeff for tm in hm.first_order_terms(level(n, l))]
    assert t(1, 0) == pytest.approx([1.34365, 2.04665, 0.832107], rel=5e-6)
    assert t(2, 1) == pytest.approx([0.133831, 0.145959], rel=5e-6)
    assert t(3, 2) == pytest.approx([0.023591], rel=5e-6)
    # also within the simpler t^2/(40 N) statement for this state
    assert hm.first_order_bound(level(3, 2), 1.0, 1) <= 1 / 40


def test_corrected_kinetic_prefactor():
    lev = level(3, 2)
    printed = hm.first_order_bound(lev, 1.0, 1)
    corrected = hm.first_order_bound(lev, 1.0, 1, printed=False)
    assert corrected > printed
    # exact ||H1^2 phi|| of this state equals the Gegenbauer bound sqrt(X)/2
    assert hm.kinetic_square_norm(lev) == pytest.approx(hm.kinetic_square_norm_bound(lev), rel=1e-8)


@pytest.mark.parametrize("n,l", [(4, 2), (5, 2), (5, 3)])
def test_kinetic_square_norm_bound_dominates(n, l):
    lev = level(n, l)
    assert hm.kinetic_square_norm(lev) <= hm.kinetic_square_norm_bound(lev)
    assert hm.kinetic_square_norm_bound(level(2, 1)) == math.inf


@pytest.mark.parametrize("n,l", [(3, 2), (4, 2), (4, 3), (5, 4), (6, 3)])
def test_closed_form_equals_assembled_bound(n, l):
    lev = level(n, l)
    for N in (2, 7, 50, 1000):
        assert hm.first_order_bound(lev, 1.0, N, printed=False) == pytest.approx(
            hm.assembled_first_order_bound(lev, 1.0, N), rel=1e-10)


@pytest.mark.parametrize("n,l", [(1, 0), (2, 0), (2, 1), (3, 1)])
def test_low_l_closed_form_equals_assembled_bound(n, l):
    lev = level(n, l)
    for N in (2, 50, 1000):
        assert hm.first_order_bound(lev, 1.0, N) == pytest.approx(hm.assembled_first_order_bound(lev, 1.0, N),
                                                                 rel=1e-10)


@pytest.mark.parametrize("l", [0, 1])
def test_dominant_exponent(l):
    terms = hm.first_order_terms(level(l + 2, l))
    assert min(tm.step_power for tm in terms) == Fraction(l, 2) + Fraction(1, 4)
    lev = level(l + 2, l)
    rows = [(N, hm.first_order_bound(lev, 1.0, N)) for N in np.geomspace(1e8, 1e10, 5)]
    assert do.slope_fit(rows).slope == pytest.approx(-(l / 2 + 0.25), abs=0.02)


def test_first_order_bound_arguments():
    assert hm.first_order_bound(level(2, 1), 0.0, 3) == 0.0
    with pytest.raises(ValueError):
        hm.first_order_bound(level(2, 1), 1.0, 0)


TABLE = {
    0: (Fraction(1, 4), Fraction(1, 4), Fraction(1, 4)),
    1: (Fraction(3, 4), Fraction(3, 4), Fraction(3, 4)),
    2: (Fraction(1), Fraction(5, 4), Fraction(5, 4)),
    3: (Fraction(1), Fraction(3, 2), Fraction(7, 4)),
    4: (Fraction(1), Fraction(2), Fraction(2)),
    5: (Fraction(1), Fraction(2), Fraction(2)),
}


@pytest.mark.parametrize("l", sorted(TABLE))
def test_scaling_tables(l):
    sc = hm.scaling_class(level(l + 1, l))
    assert (sc.first_order, sc.second_order_ABA, sc.second_order_BAB) == TABLE[l]
    allowed = {Fraction(x, 4) for x in (1, 3, 4, 5, 6, 7, 8)}
    assert {sc.first_order, sc.second_order_ABA, sc.second_order_BAB} <= allowed


def test_mixed_exponents():
    assert hm.mixed_exponents(level(1, 0)) == (None, None)
    assert hm.mixed_exponents(level(3, 2)) == (Fraction(1, 2), Fraction(3, 4))
    assert hm.mixed_exponents(level(4, 3)) == (Fraction(1, 2), Fraction(5, 4))


def test_sto3g():
    assert float(hm.sto3g_state(0.0)) == pytest.approx(1.12)
    assert float(hm.sto3g_state(60.0)) < 1e-150

    def overlap(normalized):
        f = lambda r: r * r * float(hm.sto3g_state(r, normalized)) * float(hm.radial_wavefunction(level(1, 0), r))
        # the exact 1s orbital is R_10 / sqrt(4 pi)
        val = 4 * math.pi * quad(f, 0, np.inf, limit=200)[0] / math.sqrt(4 * math.pi)
        return val / hm.sto3g_norm(normalized)

    assert overlap(True) >= 0.99
    # the bare printed coefficients give a visibly worse function
    assert overlap(False) == pytest.approx(0.968, abs=1e-3)
