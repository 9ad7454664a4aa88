"""Radial hydrogen dynamics in a truncated spherical-Bessel basis.

States live in two orthonormal representations.  Mode space holds the
coefficients c_k of u(r) = r psi(r) in the normalised functions
u_k(r) = N_k r j_l(alpha_k r / R); there the kinetic operator is diagonal with
eigenvalues (alpha_k/R)^2 / 2.  Grid space holds sqrt(w_i) u(r_i) at the
collocation radii r_i = alpha_i R / alpha_{M+1}; there the Coulomb operator is
diagonal with entries -1/r_i.  The transform between them is a dense real
orthogonal matrix, so every Trotter slot is exactly unitary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import spherical_jn

from .formula_algebra import ProductFormula, letter
from .hydrogen_model import HydrogenLevel, radial_wavefunction

_ZERO_TOL = 1e-13
MAX_PROJECTION_LOSS = 1e-6


class ZeroFindingError(ArithmeticError):
    def __init__(self, l: int, lo: float, hi: float):
        super().__init__(f"no convergence for a zero of j_{l} in [{lo!r}, {hi!r}]")
        self.bracket = (lo, hi)


class ProjectionError(ValueError):
    pass


def _refine(l: int, lo: float, hi: float) -> float:
    """Safeguarded Newton on j_l inside a sign-changing bracket."""
    flo = spherical_jn(l, lo)
    fhi = spherical_jn(l, hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise ZeroFindingError(l, lo, hi)
    x = 0.5 * (lo + hi)
    for _ in range(200):
        f = spherical_jn(l, x)
        if f == 0:
            return x
        if (f > 0) == (flo > 0):
            lo = x
        else:
            hi = x
        d = spherical_jn(l, x, derivative=True)
        step = f / d if d else math.inf
        nx = x - step
        if not lo < nx < hi:
            nx = 0.5 * (lo + hi)
        if abs(nx - x) <= _ZERO_TOL * max(1.0, abs(x)):
            return nx
        x = nx
    raise ZeroFindingError(l, lo, hi)


def bessel_zeros(l: int, count: int) -> np.ndarray:
    """First ``count`` positive zeros of j_l.

    Zeros of j_l interlace with those of j_(l-1), starting from j_0 = sinc
    whose zeros are k pi, so each zero is bracketed before Newton refinement.
    """
    if l < 0 or count < 1:
        raise ValueError("need l >= 0 and count >= 1")
    zeros = np.pi * np.arange(1, count + l + 1, dtype=float)
    for m in range(1, l + 1):
        zeros = np.array([_refine(m, zeros[k], zeros[k + 1]) for k in range(len(zeros) - 1)])
    return zeros[:count]


@dataclass(frozen=True, eq=False)
class BesselBasis:
    l: int
    R: float
    M: int
    zeros: np.ndarray  # alpha_1 .. alpha_{M+1}
    grid: np.ndarray  # r_i
    weights: np.ndarray  # w_i, so that sum_i w_i u(r_i)^2 ~ int u^2 dr
    forward: np.ndarray  # grid = forward @ modes (orthogonal)
    kinetic: np.ndarray  # (alpha_k / R)^2 / 2
    potential: np.ndarray  # -1 / r_i

    @property
    def inverse(self) -> np.ndarray:
        return self.forward.T

    def to_grid(self, coeffs):
        return self.forward @ coeffs

    def to_modes(self, values):
        return self.forward.T @ values

    def sample(self, u) -> np.ndarray:
        """Grid representation sqrt(w_i) u(r_i) of a radial function u(r) = r psi(r)."""
        return np.sqrt(self.weights) * np.asarray(u(self.grid), dtype=float)

    def dense_hamiltonians(self) -> tuple[np.ndarray, np.ndarray]:
        """Kinetic and Coulomb matrices in mode space."""
        h1 = np.diag(self.kinetic)
        h2 = self.forward.T @ (self.potential[:, None] * self.forward)
        return h1, (h2 + h2.T) / 2


def build_basis(l: int, R: float, M: int) -> BesselBasis:
    """Collocation basis with M modes on [0, R].

    The symmetric Fourier-Bessel matrix j_l(alpha_i alpha_k / alpha_{M+1}),
    scaled by 1/|j_(l+1)(alpha_i) j_(l+1)(alpha_k)|, is orthogonal for l = 0
    (a sine transform) and nearly so otherwise; its orthogonal polar factor is
    used so that forward and inverse transforms are exact transposes.
    """
    if M < 8:
        raise ValueError("at least 8 modes are required")
    if not R > 0:
        raise ValueError("radial cutoff must be positive")
    zeros = bessel_zeros(l, M + 1)
    a = zeros[:M]
    top = zeros[M]
    grid = a * R / top
    jp = np.abs(spherical_jn(l + 1, a))
    kappa2 = 2 * np.pi / top**3
    weights = kappa2 * R**3 / (2 * grid**2 * jp**2)
    raw = np.sqrt(kappa2) * spherical_jn(l, np.outer(a, a) / top) / np.outer(jp, jp)
    u, _, vt = np.linalg.svd(raw)
    forward = u @ vt
    # fix the sign convention: mode k must sample as +u_k on the grid
    signs = np.sign(np.sum(forward * raw, axis=0))
    forward = forward * signs
    kinetic = 0.5 * (a / R) ** 2
    return BesselBasis(l, float(R), M, zeros, grid, weights, forward, kinetic, -1.0 / grid)


def orthogonality_defect(basis: BesselBasis) -> float:
    """max |T~^T T~ - I| of the raw collocation matrix before polishing."""
    a = basis.zeros[: basis.M]
    top = basis.zeros[basis.M]
    jp = np.abs(spherical_jn(basis.l + 1, a))
    raw = math.sqrt(2 * np.pi / top**3) * spherical_jn(basis.l, np.outer(a, a) / top) / np.outer(jp, jp)
    return float(np.max(np.abs(raw.T @ raw - np.eye(basis.M))))


# --- states ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RadialState:
    coeffs: np.ndarray
    l: int
    basis: BesselBasis

    def __post_init__(self):
        if self.l != self.basis.l:
            raise ValueError("state and basis carry different angular momenta")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def grid_values(self) -> np.ndarray:
        return self.basis.to_grid(self.coeffs)


@dataclass(frozen=True)
class Projection:
    state: RadialState
    loss: float


def project_function(basis: BesselBasis, u, max_loss: float = MAX_PROJECTION_LOSS) -> Projection:
    """Sample u(r) = r psi(r) on the grid and normalise.

    The loss is |1 - discrete norm^2|; it measures both the part of the
    function outside [0, R] and the sampling error.
    """
    g = basis.sample(u)
    nrm2 = float(g @ g)
    loss = abs(1 - nrm2)
    if loss > max_loss:
        raise ProjectionError(
            f"projection loss {loss:.3e} exceeds {max_loss:.1e} (R={basis.R}, M_modes={basis.M})")
    return Projection(RadialState(basis.to_modes(g / math.sqrt(nrm2)).astype(complex), basis.l, basis), loss)


def project_level(basis: BesselBasis, level: HydrogenLevel, max_loss: float = MAX_PROJECTION_LOSS) -> Projection:
    if level.l != basis.l:
        raise ValueError("level and basis carry different angular momenta")
    return project_function(basis, lambda r: r * radial_wavefunction(level, r), max_loss)


# --- Trotter evolution -------------------------------------------------------

def fused_slots(pf: ProductFormula, N: int) -> list[tuple[str, float]]:
    """Slot sequence of N cycles with zero slots dropped and equal neighbours merged."""
    cycle = [(letter(j), tau) for j, tau in enumerate(pf.float_taus(), start=1) if tau]
    out: list[tuple[str, float]] = []
    for _ in range(N):
        for gen, tau in cycle:
            if out and out[-1][0] == gen:
                out[-1] = (gen, out[-1][1] + tau)
            else:
                out.append((gen, tau))
    return out


def unitary_count(pf: ProductFormula, N: int) -> int:
    return len(fused_slots(pf, N))


def _apply_slots(state: RadialState, slots, dt: float) -> RadialState:
    b = state.basis
    c = np.asarray(state.coeffs, dtype=complex)
    for gen, tau in slots:
        if gen == "a":
            c = np.exp(-1j * tau * dt * b.kinetic) * c
        else:
            g = b.forward @ c
            g = np.exp(-1j * tau * dt * b.potential) * g
            c = b.forward.T @ g
    return RadialState(c, state.l, b)


def trotter_step(state: RadialState, pf: ProductFormula, dt: float) -> RadialState:
    """One cycle of ``pf`` with step dt."""
    return _apply_slots(state, fused_slots(pf, 1), dt)


def trotter_evolve(state: RadialState, pf: ProductFormula, t: float, N: int) -> RadialState:
    """N cycles with boundary slots fused across cycles."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return _apply_slots(state, fused_slots(pf, N), t / N)


@dataclass(frozen=True, eq=False)
class ExactPropagator:
    """e^{-iHt} for the discretised H = K + T^T V T by eigendecomposition."""

    energies: np.ndarray
    vectors: np.ndarray

    @classmethod
    def build(cls, basis: BesselBasis) -> "ExactPropagator":
        h1, h2 = basis.dense_hamiltonians()
        w, v = np.linalg.eigh(h1 + h2)
        return cls(w, v)

    def evolve(self, state: RadialState, t: float) -> RadialState:
        v = self.vectors
        c = v @ (np.exp(-1j * t * self.energies) * (v.T @ state.coeffs))
        return RadialState(c, state.l, state.basis)


def trotter_error_curve(initial: RadialState, pf: ProductFormula, t: float, Ns: Sequence[int],
                        energy: float | None = None,
                        propagator: ExactPropagator | None = None) -> list[tuple[int, float]]:
    """(N, xi_N) pairs.

    The reference is the exactly exponentiated discretised H unless ``energy``
    is given, in which case it is e^{-i E t} times the initial state.  The
    latter is only meaningful for exact eigenvectors of the discretised H.
    """
    if not Ns:
        raise ValueError("empty N list")
    if energy is not None:
        ref = np.exp(-1j * energy * t) * initial.coeffs
    else:
        prop = propagator or ExactPropagator.build(initial.basis)
        ref = prop.evolve(initial, t).coeffs
    out = []
    for N in Ns:
        psi = trotter_evolve(initial, pf, t, int(N))
        out.append((int(N), float(np.linalg.norm(psi.coeffs - ref))))
    return out


def level_error_curve(level: HydrogenLevel, pf: ProductFormula, t: float, Ns: Sequence[int],
                      basis: BesselBasis, max_loss: float = MAX_PROJECTION_LOSS,
                      propagator: ExactPropagator | None = None) -> list[tuple[int, float]]:
    """Error curve of a sampled eigenstate against the exact discretised evolution.

    A sampled eigenstate is not an eigenvector of the discretised H, so
    e^{-i E_n t} as reference would add an N-independent discretisation floor.
    """
    proj = project_level(basis, level, max_loss)
    return trotter_error_curve(proj.state, pf, t, Ns, propagator=propagator)


@dataclass(frozen=True)
class DiscreteLevel:
    state: RadialState
    energy: float
    overlap: float


def discrete_level(basis: BesselBasis, level: HydrogenLevel,
                   propagator: ExactPropagator | None = None) -> DiscreteLevel:
    """Eigenvector of the discretised H with the largest overlap with the sampled level."""
    if level.l != basis.l:
        raise ValueError("level and basis carry different angular momenta")
    prop = propagator or ExactPropagator.build(basis)
    g = basis.sample(lambda r: r * radial_wavefunction(level, r))
    amp = prop.vectors.T @ basis.to_modes(g / np.linalg.norm(g))
    k = int(np.argmax(np.abs(amp)))
    vec = prop.vectors[:, k] * np.sign(amp[k])
    return DiscreteLevel(RadialState(vec.astype(complex), basis.l, basis), float(prop.energies[k]),
                         float(abs(amp[k])))


# --- ionization --------------------------------------------------------------

def bound_projector(basis: BesselBasis, n_max: int,
                    propagator: ExactPropagator | None = None) -> np.ndarray:
    """Orthonormal mode-space columns for the discretised bound states n' = l+1..n_max.

    Each column is the eigenvector of the discretised H matched to R_{n' l};
    using eigenvectors makes the projector commute with the exact evolution.
    """
    l = basis.l
    if n_max < l + 1:
        raise ValueError("n_max must be at least l + 1")
    prop = propagator or ExactPropagator.build(basis)
    cols = [discrete_level(basis, HydrogenLevel(n, l), prop).state.coeffs.real
            for n in range(l + 1, n_max + 1)]
    q, _ = np.linalg.qr(np.array(cols).T)
    return q


def ionization_probability(state: RadialState, projector: np.ndarray) -> float:
    """1 - ||P_bd psi||^2 for a normalised state."""
    amp = projector.T @ state.coeffs
    return float(1 - np.real(np.vdot(amp, amp)))


def ionization_curve(level: HydrogenLevel, pf: ProductFormula | None, t: float, Ns: Sequence[int],
                     basis: BesselBasis, n_max: int) -> list[tuple[int, float]]:
    """Ionization after evolving the discretised level; ``pf=None`` evolves exactly."""
    if n_max < level.n:
        raise ValueError("n_max must be at least n")
    prop = ExactPropagator.build(basis)
    start = discrete_level(basis, level, prop).state
    P = bound_projector(basis, n_max, prop)
    if pf is None:
        out = prop.evolve(start, t)
        return [(int(N), ionization_probability(out, P)) for N in Ns]
    return [(int(N), ionization_probability(trotter_evolve(start, pf, t, int(N)), P)) for N in Ns]
