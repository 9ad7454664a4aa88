import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from trotterbounds import dense_oracle as do
from trotterbounds.formula_algebra import derive_bound, first_order, suzuki_times

FORMULAS = {1: first_order(), 2: suzuki_times(2), 4: suzuki_times(4)}
BOUNDS = {p: derive_bound(pf) for p, pf in FORMULAS.items()}


def test_pair_validation():
    h = np.diag([1.0, 2.0])
    phi = np.array([1.0, 0.0])
    with pytest.raises(ValueError, match="Hermitian"):
        do.HermitianPair(np.array([[0, 1], [0, 0]]), h, phi, 3.0)
    with pytest.raises(ValueError, match="dimension"):
        do.HermitianPair(h, np.eye(3), phi, 3.0)
    with pytest.raises(ValueError, match="normalised"):
        do.HermitianPair(h, h, 2 * phi, 2.0)
    with pytest.raises(ValueError, match="eigenstate"):
        do.HermitianPair(h, h, phi, 1.0)
    with pytest.raises(ValueError, match="exceeds"):
        do.HermitianPair.from_matrices(np.eye(65), np.eye(65))
    pair = do.HermitianPair(h, h, phi, 2.0)
    assert pair.dim == 2


def test_slot_exponentials_are_unitary():
    pair = do.random_pair(np.random.default_rng(3), 6, scale=5.0)
    for which in (1, 2):
        u = do.expm_hermitian(pair, which, 0.37)
        assert np.allclose(u @ u.conj().T, np.eye(6), atol=1e-12)
        assert abs(np.linalg.norm(u @ pair.phi) - 1) <= 1e-12
        ref = expm(-0.37j * (pair.H1 if which == 1 else pair.H2))
        assert np.allclose(u, ref, atol=1e-12)


def test_no_go_example():
    pair = do.no_go_example()
    assert do.commutator_action(pair) <= 1e-12
    assert do.trotter_error(pair, first_order(), 1.0, 4) > 1e-6


def test_block_example_is_exact():
    A = np.array([[1.0, 0.3], [0.3, -0.5]])
    B = np.array([[0.0, 1.0], [1.0, 2.0]])
    pair = do.block_example(0.0, A, B)
    for p, pf in FORMULAS.items():
        for N in (1, 3, 8):
            assert do.trotter_error(pair, pf, 1.0, N) <= 1e-14
    v = do.bound_validation(pair, first_order(), 1.0, 2)
    assert v.measured <= 1e-14
    assert v.bound == 0.0 and v.g == 0.0 and v.holds


def test_block_example_with_coupling():
    A = np.array([[1.0, 0.3], [0.3, -0.5]])
    B = np.array([[0.0, 1.0], [1.0, 2.0]])
    with pytest.raises(ValueError, match="eigenstate"):
        do.block_example(0.2, A, B)
    coupled = do.block_example(0.0, A, B)
    coupled_h1 = coupled.H1.copy()
    coupled_h1[0, 1:] = coupled_h1[1:, 0] = 0.2
    pair = do.HermitianPair.from_matrices(coupled_h1, coupled.H2)
    assert do.trotter_error(pair, first_order(), 1.0, 4) > 1e-6


def test_commuting_generators():
    pair = do.HermitianPair.from_matrices(np.diag([0.0, 1.0, 3.0]), np.diag([2.0, -1.0, 0.5]), index=1)
    for pf in FORMULAS.values():
        for N in (1, 5):
            assert do.trotter_error(pair, pf, 2.0, N) <= 1e-13


def test_trotter_error_rejects_zero_steps():
    with pytest.raises(ValueError):
        do.trotter_error(do.no_go_example(), first_order(), 1.0, 0)


def test_word_norms():
    rng = np.random.default_rng(0)
    A = do.random_hermitian(rng, 3)
    B = do.random_hermitian(rng, 3)
    phi = np.array([1.0, 0.0, 0.0])
    norms = do.word_norms(A, B, phi, 3)
    assert len(norms) == 2 + 4 + 8
    assert norms["ab"] == pytest.approx(np.linalg.norm(A @ B @ phi))
    assert norms["bba"] == pytest.approx(np.linalg.norm(B @ B @ A @ phi))


def test_slope_fit_examples():
    Ns = np.arange(2, 31)
    exact = do.slope_fit([(N, 3.0 / N) for N in Ns])
    assert exact.slope == pytest.approx(-1.0, abs=1e-9)
    assert exact.residual_rms <= 1e-12
    assert do.slope_fit([(N, 0.5 / N**0.25) for N in Ns]).slope == pytest.approx(-0.25, abs=1e-9)
    mixed = do.slope_fit([(N, 1.34365 / N**0.25 + 2.04665 / N**0.5 + 0.832107 / N) for N in Ns])
    assert -0.65 < mixed.slope < -0.25
    windowed = do.slope_fit([(N, 1.0 / N**2) for N in Ns], window=(10, 20))
    assert windowed.points == 11


def test_slope_fit_input_checks():
    with pytest.raises(ValueError, match="4 points"):
        do.slope_fit([(1, 1.0), (2, 0.5), (3, 0.3)])
    with pytest.raises(ValueError, match="positive"):
        do.slope_fit([(1, 1.0), (2, 0.0), (3, 0.3), (4, 0.2)])


@given(st.floats(-5, 5), st.floats(1e-3, 1e3), st.integers(1, 50))
def test_slope_fit_recovers_power_laws(k, c, start):
    rows = [(N, c * N**k) for N in range(start, start + 8)]
    assert do.slope_fit(rows).slope == pytest.approx(k, abs=1e-8)


@pytest.mark.parametrize("p", [1, 2, 4])
def test_order_law(p):
    pair = do.random_pair(np.random.default_rng(11), 8, scale=4.0)
    rows = [(N, do.trotter_error(pair, FORMULAS[p], 1.0, N)) for N in (64, 128, 256, 512)]
    assert do.slope_fit(rows).slope == pytest.approx(-p, abs=0.05)


@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 4]), st.sampled_from([1, 2, 5, 16]),
       st.sampled_from([2, 3, 4, 6]), st.floats(0.1, 2.0))
def test_bound_dominates_measured_error(seed, p, N, d, t):
    pair = do.random_pair(np.random.default_rng(seed), d)
    v = do.bound_validation(pair, FORMULAS[p], t, N, expression=BOUNDS[p])
    assert v.holds, (v.measured, v.bound)


def test_battery_is_deterministic():
    a = do.validation_battery(first_order(), 5, seed=9, Ns=(1, 4))
    b = do.validation_battery(first_order(), 5, seed=9, Ns=(1, 4))
    assert [(v.measured, v.bound) for v in a] == [(v.measured, v.bound) for v in b]
    assert len(a) == 10 and all(v.holds for v in a)
