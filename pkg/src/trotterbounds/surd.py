"""Exact arithmetic in the real radical fields Q(2^(1/L)).

An element is stored sparsely as ``{e: c}`` meaning ``sum c * 2^(e/L)`` with
``0 <= e < L`` and rational ``c``.  Elements with different ``L`` are lifted to
the least common multiple before combining, so Suzuki constants such as
``1/(2 - 2^(1/3))`` and ``1/(2 - 2^(1/5))`` mix freely and stay exact.
"""

from __future__ import annotations

import decimal
from fractions import Fraction
from math import gcd, lcm
from numbers import Rational

_PREC = 60


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class Surd:
    """Element of Q(2^(1/L)) in the power basis 2^(e/L)."""

    __slots__ = ("L", "terms", "_hash")

    def __init__(self, terms=None, L: int = 1):
        self.L = int(L)
        clean = {}
        if terms:
            for e, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[int(e)] = c
        self.terms = clean
        self._hash = None

    # construction ----------------------------------------------------------
    @classmethod
    def coerce(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        return cls({0: _as_fraction(x)}, 1)

    @classmethod
    def root2(cls, q: int, k: int = 1) -> "Surd":
        """Return 2^(k/q) exactly."""
        if q < 1:
            raise ValueError("root index must be positive")
        whole, e = divmod(k, q)
        return cls({e: Fraction(2) ** whole}, q)

    # structure -------------------------------------------------------------
    def _lift(self, L: int) -> dict:
        f = L // self.L
        return {e * f: c for e, c in self.terms.items()}

    def reduced(self) -> "Surd":
        """Same number over the smallest L that represents it."""
        if not self.terms:
            return Surd({}, 1)
        g = self.L
        for e in self.terms:
            g = gcd(g, e)
        if g == 1:
            return self
        return Surd({e // g: c for e, c in self.terms.items()}, self.L // g)

    def is_rational(self) -> bool:
        return all(e == 0 for e in self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        L = lcm(self.L, other.L)
        out = self._lift(L)
        for e, c in other._lift(L).items():
            out[e] = out.get(e, 0) + c
        return Surd(out, L).reduced()

    __radd__ = __add__

    def __neg__(self):
        return Surd({e: -c for e, c in self.terms.items()}, self.L)

    def __sub__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd({e: c * other for e, c in self.terms.items()}, self.L)
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        L = lcm(self.L, other.L)
        a, b = self._lift(L), other._lift(L)
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                c = c1 * c2
                if e >= L:
                    e -= L
                    c *= 2
                out[e] = out.get(e, 0) + c
        return Surd(out, L).reduced()

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        """Multiplicative inverse via an exact linear solve in the power basis."""
        x = self.reduced()
        if not x.terms:
            raise ZeroDivisionError("inverse of zero")
        L = x.L
        if L == 1:
            return Surd({0: 1 / x.terms[0]}, 1)
        # column k of the multiplication matrix is x * 2^(k/L)
        mat = [[Fraction(0)] * L for _ in range(L)]
        for k in range(L):
            for e, c in x.terms.items():
                r = e + k
                if r >= L:
                    mat[r - L][k] += 2 * c
                else:
                    mat[r][k] += c
        rhs = [Fraction(0)] * L
        rhs[0] = Fraction(1)
        sol = _solve(mat, rhs)
        return Surd(dict(enumerate(sol)), L).reduced()

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        return self * Surd.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Surd.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = Surd({0: 1})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison ------------------------------------------------------------
    def __eq__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return not (self - other).terms

    def __hash__(self):
        if self._hash is None:
            r = self.reduced()
            self._hash = hash((r.L, frozenset(r.terms.items())))
        return self._hash

    def to_decimal(self, prec: int = _PREC) -> decimal.Decimal:
        with decimal.localcontext() as ctx:
            ctx.prec = prec + 10
            total = decimal.Decimal(0)
            for e, c in self.terms.items():
                term = decimal.Decimal(c.numerator) / decimal.Decimal(c.denominator)
                if e:
                    term *= decimal.Decimal(2) ** (decimal.Decimal(e) / decimal.Decimal(self.L))
                total += term
            return +total

    def sign(self) -> int:
        if not self.terms:
            return 0
        if self.is_rational():
            return 1 if self.terms[0] > 0 else -1
        # a nonzero algebraic number of this size is never below 1e-50
        v = self.to_decimal()
        if v == 0:
            raise ArithmeticError("sign undecidable at working precision")
        return 1 if v > 0 else -1

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        return (self - Surd.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - Surd.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - Surd.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - Surd.coerce(other)).sign() >= 0

    def __float__(self):
        return float(self.to_decimal(30))

    # display ---------------------------------------------------------------
    def __str__(self):
        r = self.reduced()
        if not r.terms:
            return "0"
        parts = []
        for e in sorted(r.terms):
            c = r.terms[e]
            if e == 0:
                parts.append(str(c))
            else:
                g = gcd(e, r.L)
                root = f"2^({e // g}/{r.L // g})"
                parts.append(root if c == 1 else f"-{root}" if c == -1 else f"{c}*{root}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Surd({self})"


def _solve(mat, rhs):
    """Gauss-Jordan elimination over the rationals."""
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular multiplication matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


ZERO = Surd()
ONE = Surd({0: 1})
