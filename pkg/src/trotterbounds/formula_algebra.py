"""Exact symbolic engine for product-formula error bounds.

A product formula is a cycle of ``M`` exponentials with switching times
``tau_1..tau_M``; slot ``j`` carries H1 (letter ``a``) when ``j`` is odd and H2
(letter ``b``) when ``j`` is even.  Operator words are strings over ``"ab"``
whose rightmost letter acts first on the state, so ``"baa"`` is
``H2 H1 H1 phi``.

All coefficients are exact elements of Q(2^(1/L)) (see :mod:`.surd`).  Time is
measured in units of the slot length ``h = t/N``; the in-slot variable ``u``
runs over ``[0, h)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .surd import ONE, ZERO, Surd

LETTERS = "ab"


class FormulaError(ValueError):
    """Raised for malformed or non-conforming product formulas."""


class MissingNormError(KeyError):
    """A bound was evaluated without the norm of one of its words."""

    def __init__(self, word: str):
        super().__init__(word)
        self.word = word

    def __str__(self):
        return f"no norm supplied for word {self.word!r}"


def letter(j: int) -> str:
    """Generator letter of slot ``j`` (1-based)."""
    return "a" if j % 2 else "b"


def normalize_word(word: str) -> str:
    w = word.lower()
    if not w or any(ch not in LETTERS for ch in w):
        raise ValueError(f"not an operator word over {{a, b}}: {word!r}")
    return w


def swap_letters(word: str) -> str:
    return word.translate(str.maketrans("ab", "ba"))


def all_words(k: int) -> list[str]:
    """Words of length ``k`` in lexicographic order (a < b)."""
    words = [""]
    for _ in range(k):
        words = [w + c for w in words for c in LETTERS]
    return words


@dataclass(frozen=True)
class ProductFormula:
    taus: tuple
    order_p: int

    def __init__(self, taus: Sequence, order_p: int):
        taus = tuple(Surd.coerce(x) for x in taus)
        if order_p < 1:
            raise FormulaError("order must be a positive integer")
        if len(taus) < order_p:
            raise FormulaError(f"{len(taus)} slots cannot carry order {order_p}")
        odd = sum(taus[0::2], ZERO)
        even = sum(taus[1::2], ZERO)
        if odd != ONE or even != ONE:
            raise FormulaError(f"switching times must sum to 1 per generator, got {odd} and {even}")
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "order_p", int(order_p))

    @property
    def M(self) -> int:
        return len(self.taus)

    def float_taus(self) -> list[float]:
        return list(_float_taus(self.taus))


@lru_cache(maxsize=256)
def _float_taus(taus: tuple) -> tuple:
    return tuple(float(x) for x in taus)


def first_order() -> ProductFormula:
    return ProductFormula([1, 1], 1)


def suzuki_times(p: int) -> ProductFormula:
    """Suzuki fractal of order ``p``: S_p(x) = S_{p-2}(s x) S_{p-2}((1-2s) x) S_{p-2}(s x).

    ``s = 1/(2 - 2^(1/(p-1)))``; the touching H1 slots of neighbouring copies are
    merged, so the slot count is 2*3^(p/2-1) + 1.
    """
    if p < 2 or p % 2:
        raise FormulaError("Suzuki recursion needs an even order >= 2")
    taus = [Surd.coerce(Fraction(1, 2)), ONE, Surd.coerce(Fraction(1, 2))]
    for q in range(4, p + 1, 2):
        s = (2 - Surd.root2(q - 1)).inverse()
        parts = [s, 1 - 2 * s, s]
        out: list = []
        for c in parts:
            block = [c * x for x in taus]
            if out:
                out[-1] = out[-1] + block[0]
                block = block[1:]
            out.extend(block)
        taus = out
    return ProductFormula(taus, p)


def swapped_formula(pf: ProductFormula) -> ProductFormula:
    """Same switching times with the roles of H1 and H2 exchanged (ABA -> BAB)."""
    taus = list(pf.taus)
    if not taus[0]:
        return ProductFormula(taus[1:], pf.order_p)
    return ProductFormula([ZERO] + taus, pf.order_p)


# --- formal exponential products --------------------------------------------

def _exp_left(series: dict, tau: Surd, x: str, kmax: int) -> dict:
    """Left-multiply a truncated series by exp(tau X), keeping degree <= kmax."""
    out: dict = {}
    for w, c in series.items():
        room = kmax - len(w)
        tp = ONE
        for m in range(room + 1):
            key = x * m + w
            term = c * tp * Fraction(1, factorial(m)) if m else c
            prev = out.get(key)
            out[key] = term if prev is None else prev + term
            tp = tp * tau
    return {w: c for w, c in out.items() if c}


def cycle_prefixes(pf: ProductFormula, kmax: int) -> list[dict]:
    """prefix[j] = exp(tau_j X_j) ... exp(tau_1 X_1) truncated at degree kmax (h = 1)."""
    series = {"": ONE}
    out = [series]
    for j, tau in enumerate(pf.taus, start=1):
        series = _exp_left(series, tau, letter(j), kmax)
        out.append(series)
    return out


@dataclass
class IntegralAction:
    """S_k(s) on slot ``j``: ``terms[word][m]`` multiplies u^m h^(k-m) word."""

    slot: int
    k: int
    terms: dict = field(default_factory=dict)

    def degree(self) -> int:
        return max((len(c) - 1 for c in self.terms.values()), default=0)

    def coefficient(self, word: str, m: int) -> Surd:
        cs = self.terms.get(word, ())
        return cs[m] if m < len(cs) else ZERO

    def evaluate(self, u: float, h: float) -> dict:
        """Numeric coefficients of each word at in-slot time ``u``."""
        return {w: sum(float(c) * u**m * h ** (self.k - m) for m, c in enumerate(cs))
                for w, cs in self.terms.items()}

    def global_form(self) -> dict:
        """Coefficients in the global cycle time s = (j-1) h + u.

        Returns ``{word: {(a, b): coeff}}`` meaning ``coeff * s^a h^b``.
        """
        shift = self.slot - 1
        out: dict = {}
        for w, cs in self.terms.items():
            acc: dict = {}
            for m, c in enumerate(cs):
                if not c:
                    continue
                # u^m = (s - shift h)^m
                for a in range(m + 1):
                    binom = factorial(m) // (factorial(a) * factorial(m - a))
                    coeff = c * (binom * (-shift) ** (m - a))
                    key = (a, self.k - a)
                    acc[key] = acc.get(key, ZERO) + coeff
            acc = {key: v for key, v in acc.items() if v}
            if acc:
                out[w] = acc
        return out


def _action_from_prefix(prefix: dict, tau: Surd, x: str, k: int, slot: int) -> IntegralAction:
    terms: dict = {}
    tp = ONE
    for m in range(k + 1):
        scale = tp * Fraction(1, factorial(m))
        for w, c in prefix.items():
            if len(w) != k - m:
                continue
            key = x * m + w
            cs = terms.setdefault(key, [ZERO] * (k + 1))
            cs[m] = cs[m] + c * scale
        tp = tp * tau
    terms = {w: tuple(cs) for w, cs in terms.items() if any(cs)}
    return IntegralAction(slot, k, terms)


def integral_action(pf: ProductFormula, k: int, j: int) -> IntegralAction:
    """k-th integral action on slot ``j`` as a polynomial in the in-slot time."""
    if k < 1:
        raise FormulaError("action order k must be positive")
    if not 1 <= j <= pf.M:
        raise FormulaError(f"slot {j} outside 1..{pf.M}")
    prefix = cycle_prefixes(pf, k)[j - 1]
    return _action_from_prefix(prefix, pf.taus[j - 1], letter(j), k, j)


def verify_order(pf: ProductFormula) -> tuple[bool, int | None]:
    """Check S_k(T_M) = (A+B)^k / k! for k = 1..p; returns (ok, first failing k)."""
    final = cycle_prefixes(pf, pf.order_p)[-1]
    for k in range(1, pf.order_p + 1):
        target = Fraction(1, factorial(k))
        for w in all_words(k):
            if final.get(w, ZERO) != target:
                return False, k
    return True, None


# --- bounds -------------------------------------------------------------------

def zero_eigenstate(vector: list) -> list:
    """Rewrite trailing letters with A phi = -B phi.

    ``vector`` holds coefficients of all words of one length in lexicographic
    order.  Entries at 1-based positions = 2 mod 4 (words ending "ab") move onto
    their left neighbour ("aa"); the entry after each such position (ending
    "ba") moves onto its right neighbour ("bb").
    """
    out = list(vector)
    carry = False
    for i in range(1, len(out) + 1):
        if i % 2 == 0 and i % 4 != 0:
            out[i - 2] = out[i - 2] - out[i - 1]
            out[i - 1] = ZERO
            carry = True
        elif carry:
            out[i] = out[i] - out[i - 1]
            out[i - 1] = ZERO
            carry = False
    return out


@dataclass
class BoundExpression:
    """sum_w terms[w] * ||w phi|| * t^time_power / N^step_power."""

    terms: dict
    time_power: int
    step_power: int

    @property
    def order(self) -> int:
        return self.step_power

    def float_terms(self) -> dict:
        return {w: float(c) for w, c in sorted(self.terms.items())}

    def global_factor(self) -> str:
        n = "N" if self.step_power == 1 else f"N^{self.step_power}"
        return f"t^{self.time_power}/{n}"

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "terms": [
                {"word": w, "coeff_exact": str(c), "coeff_float": float(c.to_decimal(20))}
                for w, c in sorted(self.terms.items())
            ],
            "global_factor": self.global_factor(),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def swapped(self) -> "BoundExpression":
        return BoundExpression({swap_letters(w): c for w, c in self.terms.items()},
                               self.time_power, self.step_power)


def derive_bound(pf: ProductFormula, simplify_zero_eigenstate: bool = True) -> BoundExpression:
    """State-dependent error bound of ``pf`` for an eigenstate shifted to energy 0.

    Per slot j the integrand tau_j H_sigma(j) S_p(u) phi is integrated exactly
    over the slot and the triangle inequality is applied per word.
    """
    ok, bad = verify_order(pf)
    if not ok:
        raise FormulaError(f"formula fails the order-{pf.order_p} conditions at k={bad}")
    p = pf.order_p
    words = all_words(p)
    prefixes = cycle_prefixes(pf, p)
    total: dict = {}
    for j in range(1, pf.M + 1):
        tau = pf.taus[j - 1]
        if not tau:
            continue
        act = _action_from_prefix(prefixes[j - 1], tau, letter(j), p, j)
        # integrate u^m h^(p-m) over [0, h): h^(p+1) / (m+1)
        integ = []
        for w in words:
            cs = act.terms.get(w)
            v = ZERO
            if cs:
                for m, c in enumerate(cs):
                    if c:
                        v = v + c * Fraction(1, m + 1)
            integ.append(v)
        if simplify_zero_eigenstate:
            integ = zero_eigenstate(integ)
        weight = abs(tau)
        x = letter(j)
        for w, v in zip(words, integ):
            if v:
                key = x + w
                total[key] = total.get(key, ZERO) + weight * abs(v)
    if simplify_zero_eigenstate:
        total = _match_trailing_letters(total)
    total = {w: c for w, c in total.items() if c}
    return BoundExpression(total, p + 1, p)


def _match_trailing_letters(terms: dict) -> dict:
    # ||W a phi|| = ||W b phi|| for a zero-energy eigenstate, so a lone trailing
    # letter can be relabelled to repeat its neighbour.  This only fires for
    # p = 1, where the rewrite above reaches length-one words.
    out: dict = {}
    for w, c in terms.items():
        if len(w) >= 2 and w[-1] != w[-2]:
            w = w[:-1] + w[-2]
        out[w] = out.get(w, ZERO) + c
    return out


def evaluate_bound(be: BoundExpression, norms: Mapping[str, float], t: float, N: int) -> float:
    """Numeric value of a bound given ||w phi|| for every word."""
    if t < 0 or N < 1:
        raise ValueError("need t >= 0 and N >= 1")
    acc = 0.0
    for w, c in be.terms.items():
        if w not in norms:
            raise MissingNormError(w)
        acc += float(c) * float(norms[w])
    return acc * t**be.time_power / N**be.step_power


@dataclass
class LooseBound:
    """(tau_* t)^(p+1) / ((p+1)! N^p) * max_w ||w phi|| over ``words``."""

    order: int
    tau_star: Surd
    words: frozenset

    @property
    def prefactor(self) -> Surd:
        return self.tau_star ** (self.order + 1) * Fraction(1, factorial(self.order + 1))

    def evaluate(self, norms: Mapping[str, float], t: float, N: int) -> float:
        missing = [w for w in sorted(self.words) if w not in norms]
        if missing:
            raise MissingNormError(missing[0])
        k = max(float(norms[w]) for w in self.words)
        return float(self.prefactor) * t ** (self.order + 1) / N**self.order * k


def loose_bound(pf: ProductFormula) -> LooseBound:
    ok, bad = verify_order(pf)
    if not ok:
        raise FormulaError(f"formula fails the order-{pf.order_p} conditions at k={bad}")
    tau_star = sum((abs(x) for x in pf.taus), ZERO)
    length = pf.order_p + 1
    # words H_sigma(j_L) ... H_sigma(j_1) with j_1 <= ... <= j_L; track last slot
    frontier = {("", 1)}
    for _ in range(length):
        nxt = set()
        for w, last in frontier:
            for j in range(last, pf.M + 1):
                nxt.add((letter(j) + w, j))
        frontier = nxt
    words = frozenset(w for w, _ in frontier)
    return LooseBound(pf.order_p, tau_star, words)


# reference closed forms for the fourth-order Suzuki bound
def fourth_order_closed_forms() -> dict:
    c = Surd.root2(3)
    c2 = c * c

    def quad(x, y, z):
        return x + y * c + z * c2

    a = [
        quad(23, 19, 17), quad(4, 3, 2), quad(14, 11, 9), quad(68, 55, 44),
        quad(18, 14, 11), (1 + c) / (2 - c) ** 5, quad(226, 180, 143), quad(330, 263, 209),
    ]
    table = {
        "aaaaa": (0, 17280), "aabaa": (1, 1152), "aabbb": (1, 1728),
        "abaaa": (2, 1728), "abbaa": (2, 576), "abbbb": (2, 864),
        "baaaa": (3, 6912), "babaa": (4, 576), "babbb": (4, 864),
        "bbaaa": (5, 48), "bbbaa": (6, 1728), "bbbbb": (7, 4320),
    }
    return {w: a[i] * Fraction(1, d) for w, (i, d) in table.items()}
