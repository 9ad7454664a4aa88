"""Bounds on short-time propagation remainders from spectral-tail decay.

For a state whose spectral measure under H obeys
``mu({|lambda| >= L}) <= mass * (lambda0 / L)^(2 delta)`` the quantities

    Delta_q(s) = int f_q(s lambda) dmu(lambda)

(with f_q the squared modulus of e^{-ix} minus its Taylor polynomial) are
bounded in three regimes: a pure power law below the critical exponent, a
logarithmic bound at it, and a moment bound above it.  These feed the
fractional first- and second-order Trotter bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import special

SUB = "sub-critical"
LOG = "critical-log"
DOMAIN = "domain-satisfied"


class MissingMomentError(ValueError):
    """A regime needs a norm ||H^k phi|| that was not supplied."""


@dataclass(frozen=True)
class TailProfile:
    """Tail cap mu({|lambda| >= L}) <= mass * (lambda0/L)^(2 delta).

    ``moments`` maps k to ||H^k phi|| when known; ``mass`` is ||phi||^2 for
    unnormalised vectors.
    """

    delta: float
    lambda0: float
    mass: float = 1.0
    moments: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("tail exponent must be positive")
        if not self.lambda0 > 0:
            raise ValueError("energy scale lambda0 must be positive")
        if self.mass < 0:
            raise ValueError("mass must be nonnegative")

    def moment(self, k: int) -> float:
        if k not in self.moments:
            raise MissingMomentError(f"regime needs ||H^{k} phi|| (delta={self.delta})")
        return float(self.moments[k])


# name -> (critical delta, subcritical constant, low-part factor, high-part factor, g, kernel)
# The log bound reads  a * Lam^2 * ||H^m phi||^2 s^(2c) + b * lambda0^(2c) / Lam^(2c) * g(Lam s)
# and the domain bound a * ||H^c phi||^2 s^(2c), where c is the critical exponent.


def _const0(d):
    return 2 * math.pi * d / (math.gamma(2 * d + 1) * math.sin(d * math.pi))


def _const1(d):
    return math.pi / (math.gamma(2 * d - 1) * math.sin((d - 1) * math.pi))


def _const2(d):
    return math.pi / (2 * math.gamma(2 * d - 2) * math.sin(d * math.pi))


def _const2_tilde(d):
    if abs(d - 2) < 1e-9:
        # removable singularity: (d-2)/sin((d-2) pi) -> 1/pi
        return 2 ** (2 * d - 1) / math.gamma(2 * d - 1)
    return 2 ** (2 * d - 1) * (d - 2) * math.pi / (math.gamma(2 * d - 1) * math.sin((d - 2) * math.pi))


@dataclass(frozen=True)
class _Kind:
    name: str
    critical: int          # delta at which the log regime sits
    lower: float           # smallest admissible delta (exclusive)
    const: Callable
    low: float             # coefficient a of the low-energy term
    high: float            # coefficient b of the high-energy term
    g: Callable
    kernel: Callable
    lam_factor: float      # quasi-optimal Lam = lam_factor * lambda0^c / ||H^(c-1) phi||


_KINDS = {
    "delta0": _Kind("delta0", 1, 0.0, _const0, 1.0, 2.0, special.g0, special.f0, 1.0),
    "delta1": _Kind("delta1", 2, 1.0, _const1, 0.25, 1.0, special.g1, special.f1, math.sqrt(2)),
    "delta2": _Kind("delta2", 3, 2.0, _const2, 1 / 36, 1 / 6, special.g2, special.f2, math.sqrt(3)),
    "delta2_tilde": _Kind("delta2_tilde", 3, 1.0, _const2_tilde, 4 / 9, 8 / 3,
                          special.g2_tilde, special.f2_tilde, math.sqrt(3)),
}

KINDS = tuple(_KINDS)


@dataclass(frozen=True)
class DeltaBound:
    """Upper bound s -> Delta(s) for one kernel and one tail profile."""

    kind: str
    regime: str
    profile: TailProfile
    _fn: Callable = field(repr=False, compare=False)

    def __call__(self, s: float) -> float:
        if s < 0:
            raise ValueError("time step must be nonnegative")
        if s == 0:
            return 0.0
        return self._fn(s)


def delta_bound(kind: str, tp: TailProfile) -> DeltaBound:
    """Select the regime for ``tp`` and return the corresponding bound."""
    k = _KINDS[kind]
    d, lam0, mass = tp.delta, tp.lambda0, tp.mass
    c = k.critical
    if d <= k.lower:
        raise ValueError(f"{kind} needs delta > {k.lower}; got {d} (the rate can be arbitrarily slow)")
    if d < c - 1e-12:
        const = k.const(d)
        return DeltaBound(kind, SUB, tp, lambda s: mass * const * (lam0 * s) ** (2 * d))
    if abs(d - c) <= 1e-12:
        # Delta0 at delta = 1 needs no moment: the low part uses the total mass
        if c == 1:
            m, lam = mass, lam0
        else:
            m = tp.moment(c - 1) ** 2
            if m == 0:
                return DeltaBound(kind, LOG, tp, lambda s: 0.0)
            # minimiser of the small-s expansion of the two-term bound
            lam = k.lam_factor * lam0**c / math.sqrt(m)

        def fn(s, lam=lam, m=m):
            return k.low * lam**2 * m * s ** (2 * c) + mass * k.high * lam0 ** (2 * c) / lam ** (2 * c) * k.g(lam * s)

        return DeltaBound(kind, LOG, tp, fn)
    mc = tp.moment(c) ** 2
    return DeltaBound(kind, DOMAIN, tp, lambda s: k.low * mc * s ** (2 * c))


def delta0_bound(tp: TailProfile, s: float) -> float:
    return delta_bound("delta0", tp)(s)


def delta1_bound(tp: TailProfile, s: float, norm_h: float | None = None,
                 norm_h2: float | None = None) -> float:
    """Bound on int [(1 - cos s lambda)^2 + (s lambda - sin s lambda)^2] dmu."""
    if norm_h is not None or norm_h2 is not None:
        moments = dict(tp.moments)
        if norm_h is not None:
            moments[1] = norm_h
        if norm_h2 is not None:
            moments[2] = norm_h2
        tp = TailProfile(tp.delta, tp.lambda0, tp.mass, moments)
    return delta_bound("delta1", tp)(s)


def delta2_bound(tp: TailProfile, s: float) -> float:
    return delta_bound("delta2", tp)(s)


def delta2_tilde_bound(tp: TailProfile, s: float) -> float:
    return delta_bound("delta2_tilde", tp)(s)


def saturating_delta(kind: str, delta: float, lambda0: float, s: float) -> float:
    """Delta(s) for the density 2 delta lambda0^(2 delta) lambda^(-2 delta - 1) on [lambda0, inf).

    Quadrature oracle.  With x = s lambda the integral is
    2 delta (lambda0 s)^(2 delta) int_a^inf f(x) x^(-2 delta - 1) dx, a = lambda0 s.
    Panels cover [a, X]; beyond X the kernel is split into its polynomial part
    (integrated in closed form) and Fourier parts (QAWF quadrature).
    """
    from scipy.integrate import quad

    f = _KINDS[kind].kernel
    poly, osc = special.KERNEL_PARTS[kind]
    p = 2 * delta + 1
    a = lambda0 * s
    big = max(a, 40 * math.pi)

    def integrand(x):
        return f(x) * x ** (-p)

    total = 0.0
    edges = [a]
    while edges[-1] < min(1.0, big):
        edges.append(min(edges[-1] * 4, 1.0, big))
    while edges[-1] < big:
        edges.append(min(edges[-1] + math.pi, big))
    for lo, hi in zip(edges, edges[1:]):
        total += quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    for k, c in poly.items():
        if k - p >= -1:
            raise ValueError(f"{kind} diverges for delta={delta}")
        total += c * big ** (k - p + 1) / (p - k - 1)
    for w, qpoly, rpoly in osc:
        for k, c in qpoly.items():
            total += c * quad(lambda x, k=k: x ** (k - p), big, math.inf, weight="cos", wvar=w)[0]
        for k, c in rpoly.items():
            total += c * quad(lambda x, k=k: x ** (k - p), big, math.inf, weight="sin", wvar=w)[0]
    return 2 * delta * a ** (2 * delta) * total


@dataclass(frozen=True)
class Shift:
    """Energy shift g applied to one generator, with ||H_j phi||."""

    g: float
    norm_h: float


def shift_terms(shifts: Sequence[Shift], t: float, N: int) -> float:
    """g^2 t^2/(2N) + |g| t^2 ||H_j phi|| / N summed over generators (hbar = 1)."""
    return sum(sh.g**2 * t**2 / (2 * N) + abs(sh.g) * t**2 * sh.norm_h / N for sh in shifts)


def first_order_fractional(tp1: TailProfile, tp2: TailProfile, t: float, N: int,
                           shifts: Sequence[Shift] = ()) -> float:
    """N (sqrt(Delta_1(t/N)) + sqrt(Delta_2(t/N))) plus energy-shift corrections."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if t == 0:
        return 0.0
    s = t / N
    b1 = delta_bound("delta1", tp1)(s)
    b2 = delta_bound("delta1", tp2)(s)
    return N * (math.sqrt(b1) + math.sqrt(b2)) + shift_terms(shifts, t, N)


def first_order_scaling(delta):
    """Exponent of 1/N in the first-order bound and whether a sqrt(log) factor appears."""
    if delta <= 1:
        raise ValueError("no rate for delta <= 1")
    if delta < 2:
        return delta - 1, False
    return 1, delta == 2


@dataclass(frozen=True)
class SecondOrderData:
    """Inputs for the second-order bound of the symmetric cycle e^{H1/2} e^{H2} e^{H1/2}.

    ``outer`` profiles H1 (split in halves) at phi, ``inner`` profiles H2 at phi,
    and ``cross`` profiles H2 at the vector H1^2 phi (mass ||H1^2 phi||^2).
    """

    outer: TailProfile
    inner: TailProfile
    cross: TailProfile | None = None


def second_order_fractional(data: SecondOrderData, t: float, N: int,
                            shifts: Sequence[Shift] = ()) -> float:
    """Smallest applicable second-order remainder bound.

    Always available (phi in D(H1) and D(H2)):
        2N sqrt(Delta1_H1(t/2N)) + N sqrt(Delta2~_H2(t/2N)).
    When ||H1^2 phi|| is finite and the cross profile is given:
        2N sqrt(Delta2_H1(t/2N)) + N sqrt(Delta2~_H2(t/2N)) + t^2/(8N) sqrt(Delta0_cross(t/N)).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if t == 0:
        return 0.0
    s = t / (2 * N)
    inner = N * math.sqrt(delta_bound("delta2_tilde", data.inner)(s))
    candidates = []
    try:
        candidates.append(2 * N * math.sqrt(delta_bound("delta1", data.outer)(s)) + inner)
    except MissingMomentError:
        pass
    if data.cross is not None and data.outer.delta > 2:
        try:
            cross = delta_bound("delta0", data.cross)(t / N)
            candidates.append(2 * N * math.sqrt(delta_bound("delta2", data.outer)(s)) + inner
                              + t**2 / (8 * N) * math.sqrt(cross))
        except MissingMomentError:
            pass
    if not candidates:
        raise MissingMomentError("no second-order regime is available for the supplied data")
    return min(candidates) + shift_terms(shifts, t, N)


def second_order_scaling(outer, inner, cross=None):
    """Exponent of 1/N of the second-order bound from tail exponents (log factors dropped).

    ``outer`` belongs to the generator split into half steps, ``inner`` to the
    middle one, and ``cross`` to the middle generator at outer^2 phi.
    """
    inner_exp = min(inner, 3) - 1
    plain = min(min(outer, 2) - 1, inner_exp)
    if cross is None or outer <= 2:
        return plain
    refined = min(min(outer, 3) - 1, inner_exp, 1 + min(cross, 1))
    return max(plain, refined)


UNBOUNDED = math.inf


@dataclass(frozen=True)
class Unbounded:
    """Typed marker for a divergent superposition series."""

    reason: str = "series diverges"

    def __float__(self):
        return math.inf


def superposition_bound(weights: Sequence[tuple[float, float]]) -> float | Unbounded:
    """min(sum |c| xi, sqrt(sum xi^2)) for a superposition of eigenstates.

    ``weights`` holds (|c_l|, xi_l) pairs; any infinite xi with nonzero weight
    makes the series divergent.
    """
    total_c2 = sum(abs(c) ** 2 for c, _ in weights)
    if total_c2 > 1 + 1e-12:
        raise ValueError("sum |c|^2 must not exceed 1")
    lin = 0.0
    quad_sum = 0.0
    for c, xi in weights:
        if xi < 0:
            raise ValueError("per-state bounds must be nonnegative")
        if c == 0:
            continue
        if math.isinf(xi):
            return Unbounded()
        lin += abs(c) * xi
        quad_sum += xi * xi
    return min(lin, math.sqrt(quad_sum))
