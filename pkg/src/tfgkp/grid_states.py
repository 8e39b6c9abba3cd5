"""Finite-energy grid states as combs of Gaussians, with closed-form Wigner functions.

Width convention. Each peak is ``exp(-(tau - mu)^2 / (4 sigma_tau^2))`` in the
wavefunction, so ``sigma_tau`` is the standard deviation of a peak in
``|psi(tau)|^2``. Peak amplitudes follow the envelope
``exp(-(mu - center)^2 * sigma_omega^2 / 2)``, i.e. an envelope of width
``1 / sigma_omega`` in tau, which gives the frequency-space peaks a width of
order ``sigma_omega``. The two widths are independent knobs only while
``sigma_tau * sigma_omega`` is small; past that the peaks overlap and the
picture blurs. How this envelope width relates to other finite-energy
parameterisations is a modelling choice, not something derived here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import SQRT_PI, TWO_SQRT_PI, DomainError, PhasePoint

DEFAULT_SIGMA = 0.2 * SQRT_PI
DEFAULT_N_PEAKS = 7
ENVELOPE_CUTOFF = 1e-12


@dataclass(frozen=True)
class GridStateModel:
    logical_bit: int
    sigma_tau: float = DEFAULT_SIGMA
    sigma_omega: float = DEFAULT_SIGMA
    n_peaks: int = DEFAULT_N_PEAKS
    offset: Optional[PhasePoint] = None
    centers: np.ndarray = field(init=False, repr=False, compare=False)
    coeffs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.logical_bit not in (0, 1):
            raise DomainError(f"logical_bit must be 0 or 1, got {self.logical_bit}")
        for name in ("sigma_tau", "sigma_omega"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v}")
        if self.n_peaks < 1 or self.n_peaks % 2 == 0:
            raise DomainError(f"n_peaks must be odd and >= 1, got {self.n_peaks}")
        if self.offset is None:
            object.__setattr__(self, "offset", PhasePoint(self.logical_bit * SQRT_PI, 0.0))

        half = (self.n_peaks - 1) // 2
        rel = TWO_SQRT_PI * np.arange(-half, half + 1)
        env = np.exp(-0.5 * rel**2 * self.sigma_omega**2)
        keep = env >= ENVELOPE_CUTOFF
        rel, env = rel[keep], env[keep]
        # closed-form Gram matrix of the unnormalised peaks
        d = rel[:, None] - rel[None, :]
        gram = math.sqrt(2 * math.pi) * self.sigma_tau * np.exp(-(d**2) / (8 * self.sigma_tau**2))
        norm2 = float(env @ gram @ env)
        object.__setattr__(self, "centers", self.offset.tau + rel)
        object.__setattr__(self, "coeffs", env / math.sqrt(norm2))

    @property
    def envelope(self) -> np.ndarray:
        """Peak amplitudes relative to the central peak."""
        return self.coeffs / self.coeffs[len(self.coeffs) // 2]


def make_logical(
    bit: int,
    sigma_tau: float = DEFAULT_SIGMA,
    sigma_omega: float = DEFAULT_SIGMA,
    n_peaks: int = DEFAULT_N_PEAKS,
) -> GridStateModel:
    """Logical ``|0>`` (grid at tau = 0) or ``|1>`` (grid at tau = sqrt(pi)), peaks 2 sqrt(pi) apart."""
    return GridStateModel(bit, sigma_tau, sigma_omega, n_peaks)


def wavefunction_tau(state: GridStateModel, tau: np.ndarray | float) -> np.ndarray:
    tau = np.asarray(tau, dtype=float)
    s = state.sigma_tau
    peaks = np.exp(-((tau[..., None] - state.centers) ** 2) / (4 * s * s))
    psi = (peaks @ state.coeffs).astype(complex)
    if state.offset.omega != 0.0:
        psi = psi * np.exp(1j * state.offset.omega * tau)
    return psi


def wavefunction_omega(state: GridStateModel, omega: np.ndarray | float) -> np.ndarray:
    """Fourier transform ``(2 pi)^{-1/2} int psi(tau) exp(-i omega tau) dtau`` in closed form."""
    w = np.asarray(omega, dtype=float) - state.offset.omega
    s = state.sigma_tau
    phases = np.exp(-1j * w[..., None] * state.centers)
    return math.sqrt(2.0) * s * np.exp(-(s * w) ** 2) * (phases @ state.coeffs)


def wigner(state: GridStateModel, tau: np.ndarray | float, omega: np.ndarray | float) -> np.ndarray:
    """``W = (1/pi) int psi*(tau+s) psi(tau-s) exp(2 i omega s) ds``, summed pairwise over peaks.

    Peaks ``j, k`` contribute a Gaussian centred at their midpoint, modulated by
    ``cos(omega (mu_k - mu_j))``; ``tau`` and ``omega`` broadcast.
    """
    tau, omega = np.broadcast_arrays(np.asarray(tau, float), np.asarray(omega, float))
    w = omega - state.offset.omega
    s = state.sigma_tau
    mu, c = state.centers, state.coeffs
    mid = 0.5 * (mu[:, None] + mu[None, :])
    sep = mu[None, :] - mu[:, None]
    cc = c[:, None] * c[None, :]
    out = np.zeros(tau.shape)
    for j in range(len(mu)):
        # one row of the pair sum at a time keeps memory at O(grid * n_peaks)
        g = np.exp(-((tau[..., None] - mid[j]) ** 2) / (2 * s * s))
        out += np.sum(cc[j] * g * np.cos(w[..., None] * sep[j]), axis=-1)
    return math.sqrt(2 * math.pi) * s / math.pi * np.exp(-2 * (s * w) ** 2) * out


def marginal(state: GridStateModel, axis: str, grid: Sequence[float]) -> np.ndarray:
    """Probability density along ``axis`` ("tau" or "omega") at the grid points."""
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or np.any(np.diff(g) <= 0):
        raise DomainError("grid must be a strictly increasing 1-D sequence")
    if axis == "tau":
        return np.abs(wavefunction_tau(state, g)) ** 2
    if axis == "omega":
        return np.abs(wavefunction_omega(state, g)) ** 2
    raise DomainError(f"axis must be 'tau' or 'omega', got {axis!r}")


@dataclass(frozen=True)
class SupermodeWeights:
    weights: np.ndarray
    lam: float


def supermode_weights(g: Sequence[complex]) -> SupermodeWeights:
    """Normalise comb couplings ``g_m`` to supermode weights ``u_m = g_m / Lambda``."""
    g = np.asarray(g, dtype=complex)
    if g.size == 0:
        raise DomainError("coupling vector is empty")
    if not np.all(np.isfinite(g)):
        raise DomainError("couplings must be finite")
    lam = float(np.linalg.norm(g))
    if lam == 0.0:
        raise DomainError("all couplings are zero")
    return SupermodeWeights(g / lam, lam)
