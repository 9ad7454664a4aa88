"""Cosine integral and the g-functions that control logarithmic Trotter bounds.

Each g-function is ``-x^n Ci(k x) + E(x)`` with an elementary part ``E``.  For
small ``x`` the elementary parts cancel catastrophically, so below
``_SERIES_CUTOFF`` they are summed from exact Taylor coefficients instead.
"""

from __future__ import annotations

import math
from fractions import Fraction

EULER_GAMMA = 0.57721566490153286060651209008240243

_SERIES_CUTOFF = 2.0
_DEG = 64


def cosine_integral(x: float) -> float:
    """Ci(x) = -int_x^inf cos(y)/y dy for x > 0.

    Power series up to x = 4; beyond that the auxiliary functions f, g of
    Ci(x) = f(x) sin x - g(x) cos x are obtained from the continued fraction of
    E1(ix), which converges where the asymptotic series would be truncated.
    """
    if not x > 0:
        raise ValueError("Ci(x) requires x > 0")
    if x <= 4.0:
        x2 = x * x
        term = 1.0
        total = 0.0
        k = 1
        while True:
            term *= -x2 / ((2 * k - 1) * (2 * k))
            inc = term / (2 * k)
            total += inc
            if abs(inc) < 1e-18 * max(1.0, abs(total)):
                break
            k += 1
        return EULER_GAMMA + math.log(x) + total
    f, g = _auxiliary(x)
    return f * math.sin(x) - g * math.cos(x)


def _auxiliary(x: float) -> tuple[float, float]:
    # modified Lentz evaluation of E1(ix) e^{ix} = g(x) - i f(x)
    tiny = 1e-300
    b = complex(1.0, x)
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    else:  # pragma: no cover - the fraction converges in < 100 steps for x > 4
        raise ArithmeticError("continued fraction for Ci did not converge")
    return -h.imag, h.real


# --- exact Taylor coefficients of the elementary parts ---------------------

def _cos_series(freq: int) -> list:
    out = [Fraction(0)] * (_DEG + 1)
    for k in range(0, _DEG + 1, 2):
        out[k] = Fraction((-1) ** (k // 2) * freq**k, math.factorial(k))
    return out


def _sin_series(freq: int) -> list:
    out = [Fraction(0)] * (_DEG + 1)
    for k in range(1, _DEG + 1, 2):
        out[k] = Fraction((-1) ** (k // 2) * freq**k, math.factorial(k))
    return out


def _poly(coeffs: dict) -> list:
    out = [Fraction(0)] * (_DEG + 1)
    for k, c in coeffs.items():
        out[k] = Fraction(c)
    return out


def _add(*series):
    return [sum(cs, Fraction(0)) for cs in zip(*series)]


def _scale(a, c):
    return [c * v for v in a]


def _mul(a, b):
    out = [Fraction(0)] * (_DEG + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(_DEG + 1 - i):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def _elementary_series():
    one_minus_cos = _add(_poly({0: 1}), _scale(_cos_series(1), -1))
    x_minus_sin = _add(_poly({1: 1}), _scale(_sin_series(1), -1))
    f1 = _add(_mul(one_minus_cos, one_minus_cos), _mul(x_minus_sin, x_minus_sin))
    e0 = _add(one_minus_cos, _mul(_poly({1: 1}), _sin_series(1)))
    e1 = _add(
        _mul(_poly({0: 1, 2: Fraction(1, 2)}), f1),
        _mul(_poly({3: -2}), x_minus_sin),
        _poly({4: Fraction(3, 2)}),
    )
    e2 = _add(
        _poly({0: 12, 4: Fraction(9, 2)}),
        _scale(_mul(_poly({0: 12, 2: -6, 4: 1}), _cos_series(1)), -1),
        _scale(_mul(_poly({1: 12, 3: 2, 5: -1}), _sin_series(1)), -1),
    )
    # 2x(2 - x^2)(3 + 2x^2) = 12x + 2x^3 - 4x^5
    et = _scale(_add(
        _poly({0: 6, 2: 9}),
        _scale(_mul(_poly({0: 6, 2: -3, 4: 2}), _cos_series(2)), -1),
        _scale(_mul(_poly({1: 12, 3: 2, 5: -4}), _sin_series(2)), -1),
    ), Fraction(1, 8))
    return [[float(c) for c in s] for s in (e0, e1, e2, et)]


_E0, _E1, _E2, _ET = _elementary_series()


def _horner(coeffs: list, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _f1(x: float) -> float:
    return (1 - math.cos(x)) ** 2 + (x - math.sin(x)) ** 2


def _elem0(x):
    if x < _SERIES_CUTOFF:
        return _horner(_E0, x)
    return (1 - math.cos(x)) + x * math.sin(x)


def _elem1(x):
    if x < _SERIES_CUTOFF:
        return _horner(_E1, x)
    return (1 + x * x / 2) * _f1(x) - 2 * x**3 * (x - math.sin(x)) + 1.5 * x**4


def _elem2(x):
    if x < _SERIES_CUTOFF:
        return _horner(_E2, x)
    return (12 + 4.5 * x**4 - (12 - 6 * x**2 + x**4) * math.cos(x)
            - x * (12 + 2 * x**2 - x**4) * math.sin(x))


def _elem_tilde(x):
    if x < _SERIES_CUTOFF:
        return _horner(_ET, x)
    c2, s2 = math.cos(2 * x), math.sin(2 * x)
    return (6 + 9 * x**2 - (6 - 3 * x**2 + 2 * x**4) * c2
            - 2 * x * (2 - x**2) * (3 + 2 * x**2) * s2) / 8


def _check(x):
    if not x > 0:
        raise ValueError("g-functions require x > 0")


def g0(x: float) -> float:
    """x^2 int_x^inf 2(1 - cos y)/y^3 dy; ~ -x^2 log x + (3/2 - gamma) x^2."""
    _check(x)
    return -x * x * cosine_integral(x) + _elem0(x)


def g1(x: float) -> float:
    """4 x^4 int_x^inf f1(y)/y^5 dy with f1 = (1 - cos)^2 + (y - sin)^2."""
    _check(x)
    return -x**4 * cosine_integral(x) + _elem1(x)


def g2(x: float) -> float:
    """36 x^6 int_x^inf f2(y)/y^7 dy with f2 = (1 - y^2/2 - cos)^2 + (y - sin)^2."""
    _check(x)
    return -x**6 * cosine_integral(x) + _elem2(x)


def g2_tilde(x: float) -> float:
    """(9/4) x^6 int_x^inf 4 (sin y - y cos y)^2 / y^7 dy."""
    _check(x)
    return -x**6 * cosine_integral(2 * x) + _elem_tilde(x)


def g_functions(x: float) -> tuple[float, float, float, float]:
    return g0(x), g1(x), g2(x), g2_tilde(x)


# spectral kernels |e^{-ix} - Taylor polynomial|^2 behind each Delta
def _kernel_series():
    one_minus_cos = _add(_poly({0: 1}), _scale(_cos_series(1), -1))
    x_minus_sin = _add(_poly({1: 1}), _scale(_sin_series(1), -1))
    k0 = _scale(one_minus_cos, 2)
    k1 = _add(_mul(one_minus_cos, one_minus_cos), _mul(x_minus_sin, x_minus_sin))
    r2 = _add(_poly({0: 1, 2: Fraction(-1, 2)}), _scale(_cos_series(1), -1))
    k2 = _add(_mul(r2, r2), _mul(x_minus_sin, x_minus_sin))
    rt = _add(_sin_series(1), _scale(_mul(_poly({1: 1}), _cos_series(1)), -1))
    kt = _scale(_mul(rt, rt), 4)
    return [[float(c) for c in s] for s in (k0, k1, k2, kt)]


_K0, _K1, _K2, _KT = _kernel_series()
_KERNEL_CUTOFF = 1.0


def f0(x: float) -> float:
    return 4 * math.sin(x / 2) ** 2


def f1(x: float) -> float:
    if abs(x) < _KERNEL_CUTOFF:
        return _horner(_K1, x)
    return _f1(x)


def f2(x: float) -> float:
    if abs(x) < _KERNEL_CUTOFF:
        return _horner(_K2, x)
    return (1 - x * x / 2 - math.cos(x)) ** 2 + (x - math.sin(x)) ** 2


def f2_tilde(x: float) -> float:
    if abs(x) < _KERNEL_CUTOFF:
        return _horner(_KT, x)
    return 4 * (math.sin(x) - x * math.cos(x)) ** 2


# each kernel as P(x) + sum q(x) cos(w x) + r(x) sin(w x); polynomials as {power: coeff}
KERNEL_PARTS = {
    "delta0": ({0: 2.0}, [(1.0, {0: -2.0}, {})]),
    "delta1": ({0: 2.0, 2: 1.0}, [(1.0, {0: -2.0}, {1: -2.0})]),
    "delta2": ({0: 2.0, 4: 0.25}, [(1.0, {0: -2.0, 2: 1.0}, {1: -2.0})]),
    "delta2_tilde": ({0: 2.0, 2: 2.0}, [(2.0, {0: -2.0, 2: 2.0}, {1: -4.0})]),
}
