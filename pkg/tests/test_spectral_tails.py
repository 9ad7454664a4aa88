import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trotterbounds import dense_oracle as do
from trotterbounds import hydrogen_model as hm
from trotterbounds import spectral_tails as tails

KIND_LOWER = {"delta0": 0.0, "delta1": 1.0, "delta2": 2.0, "delta2_tilde": 1.0}


def saturating_profile(delta, lam0):
    # ||H^k phi||^2 = 2 delta lam0^(2k) / (2 delta - 2k) for the saturating density
    moments = {k: math.sqrt(2 * delta * lam0 ** (2 * k) / (2 * delta - 2 * k))
               for k in (1, 2, 3) if delta > k}
    return tails.TailProfile(delta, lam0, moments=moments)


def test_subcritical_closed_form():
    tp = tails.TailProfile(1.5, 0.7)
    for s in (1e-3, 0.1, 1.0):
        assert tails.delta1_bound(tp, s) == pytest.approx(math.pi * (0.7 * s) ** 3, rel=1e-14)


def test_domain_regime_with_vanishing_moment():
    tp = tails.TailProfile(2.5, 1.0)
    assert tails.delta1_bound(tp, 0.3, norm_h2=0.0) == 0.0


def test_regime_selection():
    assert tails.delta_bound("delta1", tails.TailProfile(1.5, 1.0)).regime == tails.SUB
    assert tails.delta_bound("delta1", tails.TailProfile(2.0, 1.0, moments={1: 1.0})).regime == tails.LOG
    assert tails.delta_bound("delta1", tails.TailProfile(3.0, 1.0, moments={2: 1.0})).regime == tails.DOMAIN


def test_slow_tails_rejected():
    with pytest.raises(ValueError, match="arbitrarily slow"):
        tails.delta1_bound(tails.TailProfile(1.0, 1.0), 0.1)


def test_missing_moments_reported():
    with pytest.raises(tails.MissingMomentError):
        tails.delta1_bound(tails.TailProfile(2.0, 1.0), 0.1)
    with pytest.raises(tails.MissingMomentError):
        tails.delta1_bound(tails.TailProfile(2.5, 1.0), 0.1)


def test_invalid_profiles():
    with pytest.raises(ValueError):
        tails.TailProfile(0.0, 1.0)
    with pytest.raises(ValueError):
        tails.TailProfile(1.5, -1.0)


def test_hydrogen_ground_state_kinetic_term():
    # l = 0: sqrt(Delta_1) of the kinetic profile is the N^(-1/4) term of the closed form
    lev = hm.HydrogenLevel(1, 0)
    kin, _ = hm.tail_profiles(lev)
    closed = hm.first_order_terms(lev)[0]
    for N in (4, 40, 400):
        s = 1.0 / N
        assert N * math.sqrt(tails.delta1_bound(kin, s)) == pytest.approx(closed(1.0, N), rel=1e-12)


@pytest.mark.parametrize("kind", ["delta0", "delta1", "delta2", "delta2_tilde"])
def test_bounds_dominate_saturating_density(kind):
    lo = KIND_LOWER[kind]
    for delta in (lo + 0.2, lo + 0.7, lo + 1.0, lo + 1.5):
        for lam0 in (0.3, 2.0):
            bound = tails.delta_bound(kind, saturating_profile(delta, lam0))
            for s in np.geomspace(1e-3, 2.0, 6):
                assert bound(s) >= tails.saturating_delta(kind, delta, lam0, s)


@given(st.floats(1.05, 3.5), st.floats(0.1, 5.0), st.floats(1e-3, 1.0), st.floats(1.01, 3.0))
def test_monotone_in_s_and_scale(delta, lam0, s, factor):
    b = tails.delta_bound("delta1", saturating_profile(delta, lam0))
    assert b(s * factor) >= b(s)
    if abs(delta - 2) > 1e-9:
        bigger = tails.delta_bound("delta1", saturating_profile(delta, lam0 * factor))
        assert bigger(s) >= b(s)


def test_critical_regime_continuity():
    s = 1e-3
    crit = tails.delta_bound("delta1", saturating_profile(2.0, 1.0))(s)
    for d in (1.95, 1.99, 2.01, 2.05):
        other = tails.delta_bound("delta1", saturating_profile(d, 1.0))(s)
        assert crit / 10 <= other <= crit * 10


def test_first_order_fractional():
    tp = tails.TailProfile(2.5, 1.0, moments={2: 0.8})
    assert tails.first_order_fractional(tp, tp, 0.0, 10) == 0.0
    vals = [tails.first_order_fractional(tp, tp, 1.0, N) for N in (10, 20, 40)]
    # domain regime on both sides: exactly t^2/N
    assert vals[0] / vals[1] == pytest.approx(2.0, rel=1e-12)
    assert vals[1] / vals[2] == pytest.approx(2.0, rel=1e-12)
    with pytest.raises(ValueError):
        tails.first_order_fractional(tp, tp, 1.0, 0)


def test_shift_terms():
    sh = tails.Shift(g=-0.5, norm_h=0.3)
    assert tails.shift_terms([sh], 2.0, 4) == pytest.approx(0.25 * 4 / 8 + 0.5 * 4 * 0.3 / 4)


def test_fractional_scaling_exponents():
    assert tails.first_order_scaling(1.25) == (0.25, False)
    assert tails.first_order_scaling(2) == (1, True)
    assert tails.first_order_scaling(3) == (1, False)
    with pytest.raises(ValueError):
        tails.first_order_scaling(1)


def test_second_order_ground_state_rate():
    lev = hm.HydrogenLevel(1, 0)
    kin, pot = hm.tail_profiles(lev)
    data = tails.SecondOrderData(kin, pot)
    assert tails.second_order_fractional(data, 0.0, 5) == 0.0
    rows = [(N, tails.second_order_fractional(data, 1.0, N)) for N in np.geomspace(1e4, 1e7, 8).astype(int)]
    assert do.slope_fit(rows).slope == pytest.approx(-0.25, abs=0.03)


def test_second_order_smooth_states():
    # delta above 3 everywhere, third moments finite: t^3/N^2
    tp = tails.TailProfile(3.5, 1.0, moments={1: 1.0, 2: 1.0, 3: 1.0})
    data = tails.SecondOrderData(tp, tp, cross=tails.TailProfile(3.5, 1.0, moments={1: 1.0}))
    rows = [(N, tails.second_order_fractional(data, 1.0, N)) for N in (100, 200, 400, 800)]
    assert do.slope_fit(rows).slope == pytest.approx(-2.0, abs=1e-9)


def test_second_order_needs_some_regime():
    data = tails.SecondOrderData(tails.TailProfile(2.0, 1.0), tails.TailProfile(1.5, 1.0))
    with pytest.raises(tails.MissingMomentError):
        tails.second_order_fractional(data, 1.0, 10)


def test_superposition_examples():
    assert tails.superposition_bound([(1.0, 0.37)]) == pytest.approx(0.37)
    c = 1 / math.sqrt(2)
    assert tails.superposition_bound([(c, 0.3), (c, 0.4)]) == pytest.approx(0.7 * c)
    assert round(tails.superposition_bound([(c, 0.3), (c, 0.4)]), 4) == 0.4950
    assert tails.superposition_bound([(0.6, 0.0), (0.8, 0.0)]) == 0.0
    div = tails.superposition_bound([(0.6, 1.0), (0.8, math.inf)])
    assert isinstance(div, tails.Unbounded) and float(div) == math.inf
    with pytest.raises(ValueError):
        tails.superposition_bound([(1.0, 0.1), (0.5, 0.1)])


weights = st.lists(st.tuples(st.floats(0, 1), st.floats(0, 10), st.floats(0, 10)), min_size=1, max_size=5)


@given(weights)
def test_superposition_symmetry_and_subadditivity(rows):
    norm = math.sqrt(sum(c * c for c, _, _ in rows)) or 1.0
    cs = [c / max(norm, 1.0) for c, _, _ in rows]
    x = [(c, a) for c, (_, a, _) in zip(cs, rows)]
    y = [(c, b) for c, (_, _, b) in zip(cs, rows)]
    xy = [(c, a + b) for c, (_, a, b) in zip(cs, rows)]
    fx = tails.superposition_bound(x)
    for perm in list(permutations(x))[:6]:
        assert tails.superposition_bound(list(perm)) == pytest.approx(fx)
    assert tails.superposition_bound(xy) <= fx + tails.superposition_bound(y) + 1e-12
