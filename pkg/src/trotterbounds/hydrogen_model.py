"""Hydrogen-atom analytics in Hartree units (hbar = m_e = a0 = 1).

The Trotter split is H1 = p^2/2 (kinetic) and H2 = -1/r (Coulomb).  Everything
here is closed form: eigenfunctions, radial moments, the spectral-tail caps of
H1 and H2 at an eigenstate, and the explicit first-order error bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import spectral_tails as st


@dataclass(frozen=True)
class HydrogenLevel:
    n: int
    l: int
    m: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("principal quantum number must be >= 1")
        if not 0 <= self.l < self.n:
            raise ValueError(f"l must lie in 0..{self.n - 1}")
        if abs(self.m) > self.l:
            raise ValueError("|m| must not exceed l")

    @property
    def energy(self) -> Fraction:
        return Fraction(-1, 2 * self.n**2)

    @property
    def label(self) -> str:
        return f"{self.n}{self.l}{self.m}"


class Divergent:
    """Typed marker for a radial moment that does not exist."""

    def __repr__(self):
        return "Divergent()"

    def __float__(self):
        return math.inf

    def __eq__(self, other):
        return isinstance(other, Divergent)

    def __hash__(self):
        return hash("Divergent")


DIVERGENT = Divergent()


# --- orthogonal polynomials -------------------------------------------------

def laguerre(k: int, alpha: float, x):
    """Generalised Laguerre L_k^(alpha)(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = 1 + alpha - x
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur


def gegenbauer(k: int, alpha: float, x):
    """Gegenbauer C_k^(alpha)(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = 2 * alpha * x
    for j in range(1, k):
        prev, cur = cur, (2 * (j + alpha) * x * cur - (j + 2 * alpha - 1) * prev) / (j + 1)
    return cur


# --- wave functions ---------------------------------------------------------

def radial_wavefunction(level: HydrogenLevel, u):
    """R_nl(u) normalised as int u^2 R^2 du = 1."""
    n, l = level.n, level.l
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("radius must be nonnegative")
    norm = (2 / n) ** 1.5 * math.sqrt(math.factorial(n - l - 1) / (2 * n * math.factorial(n + l)))
    rho = 2 * u / n
    return norm * np.exp(-u / n) * rho**l * laguerre(n - l - 1, 2 * l + 1, rho)


def momentum_distribution(level: HydrogenLevel, p):
    """Radial momentum density Xi_nl(p) with int_0^inf Xi dp = 1."""
    n, l = level.n, level.l
    p = np.asarray(p, dtype=float)
    x = (n * p) ** 2
    pref = (4 ** (2 * l + 3) * n**2 * math.factorial(l) ** 2 * math.factorial(n - l - 1)
            / (2 * math.pi * math.factorial(n + l)))
    c = gegenbauer(n - l - 1, l + 1, (x - 1) / (x + 1))
    return pref * x ** (l + 1) / (x + 1) ** (2 * l + 4) * c**2


def potential_moments(level: HydrogenLevel) -> tuple:
    """(<1/r>, <1/r^2>, <1/r^3>, <1/r^4>) as exact rationals; DIVERGENT where undefined."""
    n, l = level.n, level.l
    m1 = Fraction(1, n**2)
    m2 = Fraction(2, (2 * l + 1) * n**3)
    if l == 0:
        return m1, m2, DIVERGENT, DIVERGENT
    lh = Fraction(2 * l + 1, 2)
    m3 = 1 / (l * (l + 1) * lh * n**3)
    m4 = Fraction(3 * n**2 - l * (l + 1)) / (
        2 * l * (l + 1) * lh * (lh - 1) * (lh + 1) * n**5)
    return m1, m2, m3, m4


# --- spectral tails ---------------------------------------------------------

@dataclass(frozen=True)
class TailExponents:
    """Tail exponents and caps of H1 (kinetic) and H2 (Coulomb) at an eigenstate.

    The densities in energy obey rho_j(lam) <= c_j lam^-(2 delta_j + 1), so
    mu_j(|lam| >= L) <= (lambda_j / L)^(2 delta_j) with lambda_j^(2 delta_j) = c_j / (2 delta_j).
    """

    delta1: Fraction
    delta2: Fraction
    c1: float
    c2: float

    @property
    def lambda1(self) -> float:
        d = float(self.delta1)
        return (self.c1 / (2 * d)) ** (1 / (2 * d))

    @property
    def lambda2(self) -> float:
        d = float(self.delta2)
        return (self.c2 / (2 * d)) ** (1 / (2 * d))


def tail_exponents(level: HydrogenLevel) -> TailExponents:
    n, l = level.n, level.l
    f = math.factorial
    d1 = Fraction(l, 2) + Fraction(5, 4)
    d2 = Fraction(l) + Fraction(3, 2)
    c1 = (2 ** (3 * l + 1.5) * f(l) ** 2 * f(n + l)
          / (math.pi * n ** (2 * l + 4) * f(2 * l + 1) ** 2 * f(n - l - 1)))
    c2 = 2 ** (2 * l + 2) * f(n + l) / (n ** (2 * l + 4) * f(2 * l + 1) ** 2 * f(n - l - 1))
    return TailExponents(d1, d2, c1, c2)


def kinetic_tail(level: HydrogenLevel, cutoff: float) -> float:
    """Exact mu_1(p^2/2 >= cutoff) by quadrature of the momentum density."""
    from scipy.integrate import quad

    p0 = math.sqrt(2 * cutoff)
    f = lambda p: float(momentum_distribution(level, p))
    # the density varies on the scale 1/n near the origin and like a power of p far out
    near = [p0 + k / level.n for k in (0, 1, 4, 16)]
    edges = near + [2 * near[-1], 8 * near[-1]]
    val = sum(quad(f, a, b, epsabs=0, epsrel=1e-12, limit=200)[0] for a, b in zip(edges, edges[1:]))
    return val + quad(f, edges[-1], np.inf, epsabs=0, epsrel=1e-12, limit=200)[0]


def coulomb_tail(level: HydrogenLevel, cutoff: float) -> float:
    """Exact mu_2(1/r >= cutoff) = int_0^(1/cutoff) r^2 R^2 dr."""
    from scipy.integrate import quad

    return quad(lambda r: float(r * r * radial_wavefunction(level, r) ** 2), 0, 1 / cutoff, limit=200)[0]


def kinetic_square_norm(level: HydrogenLevel) -> float:
    """||H1^2 phi|| = sqrt(<p^8>)/4 by quadrature of the momentum density."""
    from scipy.integrate import quad

    s = 1 / level.n
    f = lambda p: float(p**8 * momentum_distribution(level, p))
    val = quad(f, 0, 10 * s, limit=400)[0] + quad(f, 10 * s, np.inf, limit=400)[0]
    return math.sqrt(val) / 4


def kinetic_square_norm_bound(level: HydrogenLevel) -> float:
    """Upper bound on ||H1^2 phi|| from |C_k^(l+1)| <= C_k^(l+1)(1): sqrt(X)/2.

    X = (n+l)! B(l - 3/2, l + 11/2) / (n^7 (n-l-1)! Gamma(l + 3/2)^2); exact when
    n = l + 1 and finite only for l >= 2.
    """
    n, l = level.n, level.l
    if l < 2:
        return math.inf
    return math.sqrt(_x_factor(n, l)) / 2


def _x_factor(n: int, l: int) -> float:
    beta = math.exp(math.lgamma(l - 1.5) + math.lgamma(l + 5.5) - math.lgamma(2 * l + 4))
    return math.factorial(n + l) * beta / (n**7 * math.factorial(n - l - 1) * math.gamma(l + 1.5) ** 2)


# --- first-order bounds -----------------------------------------------------

@dataclass(frozen=True)
class BoundTerm:
    """coeff * t^time_power / N^step_power."""

    coeff: float
    step_power: Fraction
    time_power: Fraction

    def __call__(self, t: float, N: float) -> float:
        return self.coeff * t ** float(self.time_power) / N ** float(self.step_power)


def first_order_terms(level: HydrogenLevel, printed: bool = True) -> list[BoundTerm]:
    """Closed-form first-order bound as a list of power-law terms in t and 1/N.

    Kinetic operator unshifted, Coulomb operator shifted by E_n.  For l >= 2
    ``printed=True`` keeps the kinetic prefactor sqrt(X)/8 of the published
    closed form; ``printed=False`` uses the prefactor sqrt(X)/2 that the Gegenbauer
    bound on ||H1^2 phi|| actually yields.
    """
    n, l = level.n, level.l
    shift = math.sqrt(1 / (n**7 * (l + 0.5))) + 1 / (4 * n**4)
    if l == 0:
        return [
            BoundTerm(4 / math.sqrt(5 * math.sqrt(math.pi) * n**3), Fraction(1, 4), Fraction(5, 4)),
            BoundTerm(math.sqrt(4 * math.pi / (3 * n**3)), Fraction(1, 2), Fraction(3, 2)),
            BoundTerm(shift / 2, Fraction(1), Fraction(2)),
        ]
    m4 = float(potential_moments(level)[3])
    if l == 1:
        kin = math.sqrt(64 * (n**2 - 1) / (189 * math.sqrt(math.pi) * n**5))
        return [
            BoundTerm(kin, Fraction(3, 4), Fraction(7, 4)),
            BoundTerm((math.sqrt(m4) + shift) / 2, Fraction(1), Fraction(2)),
        ]
    kin = math.sqrt(_x_factor(n, l)) * (0.125 if printed else 0.5)
    return [BoundTerm((kin + math.sqrt(m4) + shift) / 2, Fraction(1), Fraction(2))]


def first_order_bound(level: HydrogenLevel, t_tilde: float, N: int, printed: bool = True) -> float:
    """First-order Trotter bound for an eigenstate at reduced time ``t_tilde``."""
    if N < 1 or t_tilde < 0:
        raise ValueError("need N >= 1 and t_tilde >= 0")
    return sum(term(t_tilde, N) for term in first_order_terms(level, printed))


def tail_profiles(level: HydrogenLevel) -> tuple[st.TailProfile, st.TailProfile]:
    """Kinetic and Coulomb tail profiles with the moments that exist."""
    te = tail_exponents(level)
    m1, m2, _, m4 = potential_moments(level)
    # ||H1 phi|| = ||(E + 1/r) phi||
    e = float(level.energy)
    kin_moments = {1: math.sqrt(e * e + 2 * e * float(m1) + float(m2))}
    if level.l >= 2:
        kin_moments[2] = kinetic_square_norm_bound(level)
    pot_moments = {1: math.sqrt(float(m2))}
    if level.l >= 1:
        pot_moments[2] = math.sqrt(float(m4))
    return (st.TailProfile(float(te.delta1), te.lambda1, moments=kin_moments),
            st.TailProfile(float(te.delta2), te.lambda2, moments=pot_moments))


def assembled_first_order_bound(level: HydrogenLevel, t_tilde: float, N: int) -> float:
    """The same bound rebuilt from tail profiles, moments and the energy shift."""
    kin, pot = tail_profiles(level)
    shift = st.Shift(float(level.energy), pot.moments[1])
    return st.first_order_fractional(kin, pot, t_tilde, N, shifts=[shift])


# --- scaling tables ---------------------------------------------------------

@dataclass(frozen=True)
class ScalingClass:
    """Exponents of 1/N of the first- and second-order bounds."""

    first_order: Fraction
    second_order_ABA: Fraction
    second_order_BAB: Fraction


def mixed_exponents(level: HydrogenLevel) -> tuple:
    """Tail exponents of H2 at H1^2 phi and of H1 at H2^2 phi (None if the vector is undefined).

    For l >= 4 the first value is a lower bound (5/2), which already saturates
    the second-order rate.
    """
    l = level.l
    d12 = None if l < 2 else (Fraction(1, 2) if l <= 3 else Fraction(5, 2))
    d21 = None if l < 1 else Fraction(l, 2) - Fraction(1, 4)
    return d12, d21


def scaling_class(level: HydrogenLevel) -> ScalingClass:
    te = tail_exponents(level)
    d12, d21 = mixed_exponents(level)
    first = min(Fraction(st.first_order_scaling(te.delta1)[0]),
                Fraction(st.first_order_scaling(te.delta2)[0]))
    aba = st.second_order_scaling(te.delta1, te.delta2, d12)
    bab = st.second_order_scaling(te.delta2, te.delta1, d21)
    return ScalingClass(first, Fraction(aba), Fraction(bab))


# --- STO-3G approximation of the ground state -------------------------------

STO3G_TERMS = ((0.44, 0.11), (0.53, 0.41), (0.15, 2.23))


def sto3g_state(u, normalized_primitives: bool = False):
    """Three-Gaussian ground-state approximation sum c_i exp(-a_i r^2).

    With ``normalized_primitives`` each Gaussian carries its (2a/pi)^(3/4) factor,
    as in the usual contracted basis; otherwise the bare coefficients are used.
    """
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    for c, a in STO3G_TERMS:
        w = c * (2 * a / math.pi) ** 0.75 if normalized_primitives else c
        out = out + w * np.exp(-a * u * u)
    return out


def sto3g_norm(normalized_primitives: bool = False) -> float:
    """sqrt(4 pi int r^2 psi^2 dr) of the STO-3G function, in closed form."""
    acc = 0.0
    for c1, a1 in STO3G_TERMS:
        for c2, a2 in STO3G_TERMS:
            w1 = c1 * (2 * a1 / math.pi) ** 0.75 if normalized_primitives else c1
            w2 = c2 * (2 * a2 / math.pi) ** 0.75 if normalized_primitives else c2
            acc += w1 * w2 * (math.pi / (a1 + a2)) ** 1.5
    return math.sqrt(acc)
