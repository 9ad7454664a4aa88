"""Brute-force Trotter errors for small Hermitian pairs.

Exponentials come from Hermitian eigendecompositions, so every slot is unitary
to rounding.  A cycle applies slot 1 first; slot j exponentiates H1 for odd j
and H2 for even j, matching the word convention of ``formula_algebra``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .formula_algebra import ProductFormula, derive_bound, letter, verify_order

MAX_DIM = 64
_HERM_TOL = 1e-12
_EIG_TOL = 1e-12


def _hermitian(m, name: str) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > _HERM_TOL * max(1.0, np.max(np.abs(a))):
        raise ValueError(f"{name} is not Hermitian")
    return a


@dataclass(frozen=True, eq=False)
class HermitianPair:
    """H1, H2 with a normalised eigenstate phi of H1 + H2 at eigenvalue h."""

    H1: np.ndarray
    H2: np.ndarray
    phi: np.ndarray
    h: float
    _eig: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        h1 = _hermitian(self.H1, "H1")
        h2 = _hermitian(self.H2, "H2")
        if h1.shape != h2.shape:
            raise ValueError("H1 and H2 differ in dimension")
        if h1.shape[0] > MAX_DIM:
            raise ValueError(f"dimension {h1.shape[0]} exceeds {MAX_DIM}")
        phi = np.asarray(self.phi, dtype=complex).reshape(-1)
        if phi.shape[0] != h1.shape[0]:
            raise ValueError("phi has the wrong dimension")
        nrm = np.linalg.norm(phi)
        if abs(nrm - 1) > 1e-12:
            raise ValueError("phi must be normalised")
        resid = np.linalg.norm((h1 + h2) @ phi - self.h * phi)
        if resid > _EIG_TOL * max(1.0, np.linalg.norm(h1 + h2, 2)):
            raise ValueError(f"phi is not an eigenstate (residual {resid:.3e})")
        object.__setattr__(self, "H1", h1)
        object.__setattr__(self, "H2", h2)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "h", float(self.h))

    @property
    def dim(self) -> int:
        return self.H1.shape[0]

    def eig(self, which: int):
        if which not in self._eig:
            self._eig[which] = np.linalg.eigh(self.H1 if which == 1 else self.H2)
        return self._eig[which]

    @classmethod
    def from_matrices(cls, H1, H2, index: int = 0) -> "HermitianPair":
        """Pair with phi the ``index``-th eigenvector (ascending) of H1 + H2."""
        h1 = _hermitian(H1, "H1")
        h2 = _hermitian(H2, "H2")
        w, v = np.linalg.eigh(h1 + h2)
        return cls(h1, h2, v[:, index], w[index])


def expm_hermitian(pair: HermitianPair, which: int, theta: float) -> np.ndarray:
    """exp(-i theta H_which) from the cached eigendecomposition."""
    w, v = pair.eig(which)
    return (v * np.exp(-1j * theta * w)) @ v.conj().T


def cycle_unitary(pair: HermitianPair, pf: ProductFormula, dt: float) -> np.ndarray:
    u = np.eye(pair.dim, dtype=complex)
    for j, tau in enumerate(pf.float_taus(), start=1):
        if tau:
            u = expm_hermitian(pair, 1 if letter(j) == "a" else 2, tau * dt) @ u
    return u


def trotter_error(pair: HermitianPair, pf: ProductFormula, t: float, N: int) -> float:
    """xi_N(t; phi) = ||(S_N(t) - e^{-i t h}) phi||."""
    if N < 1:
        raise ValueError("N must be at least 1")
    u = cycle_unitary(pair, pf, t / N)
    psi = pair.phi.copy()
    for _ in range(N):
        psi = u @ psi
    return float(np.linalg.norm(psi - np.exp(-1j * t * pair.h) * pair.phi))


def word_norms(A: np.ndarray, B: np.ndarray, phi: np.ndarray, max_len: int) -> dict:
    """||w phi|| for every word up to ``max_len``; the rightmost letter acts first."""
    out = {}
    frontier = {"": phi}
    for _ in range(max_len):
        nxt = {}
        for w, v in frontier.items():
            nxt["a" + w] = A @ v
            nxt["b" + w] = B @ v
        for w, v in nxt.items():
            out[w] = float(np.linalg.norm(v))
        frontier = nxt
    return out


@dataclass(frozen=True)
class Validation:
    measured: float
    bound: float
    holds: bool
    g: float


def optimal_word_sum(pair: HermitianPair, coeffs: dict, grid: int = 21) -> tuple[float, float]:
    """min over g of sum_w c_w ||w phi|| with generators H1 - g and H2 - h + g.

    g runs over ``grid`` points spanning [-||H1||, ||H1||]; returns (value, g).
    """
    length = max(len(w) for w in coeffs)
    span = np.linalg.norm(pair.H1, 2)
    eye = np.eye(pair.dim)
    best, best_g = math.inf, 0.0
    gs = np.linspace(-span, span, grid) if span > 0 else np.zeros(1)
    for g in gs:
        A = pair.H1 - g * eye
        B = pair.H2 - (pair.h - g) * eye
        norms = word_norms(A, B, pair.phi, length)
        val = sum(c * norms[w] for w, c in coeffs.items())
        if val < best:
            best, best_g = val, float(g)
    return best, best_g


def bound_validation(pair: HermitianPair, pf: ProductFormula, t: float, N: int,
                     grid: int = 21, expression=None) -> Validation:
    """Measured error against the derived bound minimised over the g grid."""
    be = expression if expression is not None else derive_bound(pf)
    measured = trotter_error(pair, pf, t, N)
    best, g = optimal_word_sum(pair, be.float_terms(), grid)
    bound = best * t**be.time_power / N**be.step_power
    return Validation(measured, bound, _holds(measured, bound, N), g)


def _holds(measured: float, bound: float, N: int) -> bool:
    # allow for rounding in the measured error itself
    return measured <= bound + 1e-12 * max(1.0, N)


@dataclass(frozen=True)
class ScalingReport:
    slope: float
    intercept: float
    residual_rms: float
    points: int


def slope_fit(errors: Sequence[tuple[float, float]], window: tuple[float, float] | None = None) -> ScalingReport:
    """Least-squares slope of log(xi) against log(N)."""
    pts = [(float(n), float(e)) for n, e in errors]
    if window is not None:
        lo, hi = window
        pts = [(n, e) for n, e in pts if lo <= n <= hi]
    if len(pts) < 4:
        raise ValueError("slope fit needs at least 4 points")
    if any(e <= 0 or n <= 0 for n, e in pts):
        raise ValueError("errors and N must be positive")
    x = np.log([n for n, _ in pts])
    y = np.log([e for _, e in pts])
    design = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    rms = float(np.sqrt(np.mean((design @ np.array([slope, intercept]) - y) ** 2)))
    return ScalingReport(float(slope), float(intercept), rms, len(pts))


# --- constructions -----------------------------------------------------------

def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = (z + z.conj().T) / 2
    return scale * h / np.linalg.norm(h, 2)


def random_pair(rng: np.random.Generator, d: int, scale: float = 1.0) -> HermitianPair:
    """Random pair normalised to ||H1|| = ||H2|| = scale, phi a random eigenvector."""
    h1 = random_hermitian(rng, d, scale)
    h2 = random_hermitian(rng, d, scale)
    return HermitianPair.from_matrices(h1, h2, int(rng.integers(d)))


def no_go_example() -> HermitianPair:
    """3x3 pair with [H1, H2] phi = 0 that still has a Trotter error."""
    h1 = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 1]], dtype=float)
    h2 = np.array([[0, -1, 0], [-1, 0, -1], [0, -1, 0]], dtype=float)
    return HermitianPair(h1, h2, np.array([1.0, 0, 0]), 0.0)


def block_example(eps: float, A, B, phi0=None) -> HermitianPair:
    """[[0, eps], [eps, A]] and [[0, eps], [eps, B]] with phi in the zero block.

    phi is an eigenstate only for eps = 0; for eps != 0 pass through
    ``HermitianPair.from_matrices`` instead.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    k = A.shape[0]
    phi0 = np.array([1.0]) if phi0 is None else np.asarray(phi0, dtype=complex)
    m = phi0.shape[0]
    coupling = eps * np.ones((m, k))

    def embed(blk):
        out = np.zeros((m + k, m + k), dtype=complex)
        out[:m, m:] = coupling
        out[m:, :m] = coupling.T
        out[m:, m:] = blk
        return out

    phi = np.concatenate([phi0 / np.linalg.norm(phi0), np.zeros(k)])
    return HermitianPair(embed(A), embed(B), phi, 0.0)


def commutator_action(pair: HermitianPair) -> float:
    c = pair.H1 @ pair.H2 - pair.H2 @ pair.H1
    return float(np.linalg.norm(c @ pair.phi))


def validation_battery(pf: ProductFormula, count: int, seed: int, d: int = 4, t: float = 1.0,
                       Ns: Sequence[int] = (1, 2, 4, 8, 16, 32)) -> list[Validation]:
    """Seeded random pairs checked against the derived bound at every N."""
    ok, bad = verify_order(pf)
    if not ok:
        raise ValueError(f"formula fails its order conditions at k={bad}")
    be = derive_bound(pf)
    coeffs = be.float_terms()
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        pair = random_pair(rng, d)
        best, g = optimal_word_sum(pair, coeffs)
        for N in Ns:
            measured = trotter_error(pair, pf, t, N)
            bound = best * t**be.time_power / N**be.step_power
            out.append(Validation(measured, bound, _holds(measured, bound, N), g))
    return out
