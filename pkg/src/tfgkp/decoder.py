"""Nearest-lattice decoding and logical failure probabilities.

Two failure notions live here and must not be confused:

* the half-cell criterion: a shift fails unless ``|tau| < sqrt(pi)/2`` and
  ``|omega| < sqrt(pi)/2``. All failure probabilities below use this one; it
  is what ``1 - erf(.) erf(.)`` counts.
* the parity class: the shift is rounded to the nearest multiple of
  ``sqrt(pi)`` per axis and only odd multiples flip the logical state. This is
  weaker (a shift of ``2 sqrt(pi)`` fails the half-cell test but is class I).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._parallel import ordered_map
from .algebra import HALF_SQRT_PI, SQRT_PI, DomainError, PhasePoint
from .noise import NoiseModel, RngStream, sample_displacements

MC_BLOCK = 1 << 16


class Pauli(str, enum.Enum):
    """Logical Pauli up to phase; ``Z`` from odd tau multiples, ``X`` from odd omega multiples."""

    I = "I"
    X = "X"
    Z = "Z"
    Y = "Y"

    @property
    def code(self) -> int:
        # bit 0: Z component, bit 1: X component
        return _CODES[self]

    @classmethod
    def from_code(cls, code: int) -> Pauli:
        return _FROM_CODE[int(code) & 3]

    @classmethod
    def from_parities(cls, tau_odd: bool, omega_odd: bool) -> Pauli:
        return cls.from_code(int(tau_odd) | (int(omega_odd) << 1))

    def __mul__(self, other: Pauli) -> Pauli:
        return Pauli.from_code(self.code ^ other.code)


_CODES = {Pauli.I: 0, Pauli.Z: 1, Pauli.X: 2, Pauli.Y: 3}
_FROM_CODE = {v: k for k, v in _CODES.items()}


@dataclass(frozen=True)
class DecodeOutcome:
    residual: PhasePoint
    logical_class: Pauli
    paper_success: bool


def nearest_multiple(x: np.ndarray | float) -> tuple[np.ndarray, np.ndarray]:
    """Split ``x = k * sqrt(pi) + r`` with integer ``k`` and ``r`` in ``[-sqrt(pi)/2, sqrt(pi)/2)``.

    Exact half-cell ties go to the upper cell. Works elementwise on arrays.
    """
    x = np.asarray(x, dtype=float)
    k = np.floor(x / SQRT_PI + 0.5)
    r = x - k * SQRT_PI
    # floating-point fix-ups so the half-open interval holds exactly
    hi = r >= HALF_SQRT_PI
    k = np.where(hi, k + 1, k)
    r = np.where(hi, r - SQRT_PI, r)
    lo = r < -HALF_SQRT_PI
    k = np.where(lo, k - 1, k)
    r = np.where(lo, r + SQRT_PI, r)
    return k, r


def inside_half_cell(tau: np.ndarray | float, omega: np.ndarray | float) -> np.ndarray:
    """The strict half-cell success test, elementwise."""
    return (np.abs(tau) < HALF_SQRT_PI) & (np.abs(omega) < HALF_SQRT_PI)


def parity_codes(k_tau: np.ndarray, k_omega: np.ndarray) -> np.ndarray:
    """Pauli codes (see ``Pauli.code``) of lattice vectors given by integer multiples."""
    kt = np.asarray(k_tau).astype(np.int64)
    ko = np.asarray(k_omega).astype(np.int64)
    return (kt & 1) | ((ko & 1) << 1)


def decode(delta: PhasePoint) -> DecodeOutcome:
    kt, rt = nearest_multiple(delta.tau)
    ko, ro = nearest_multiple(delta.omega)
    return DecodeOutcome(
        residual=PhasePoint(float(rt), float(ro)),
        logical_class=Pauli.from_code(int(parity_codes(kt, ko))),
        paper_success=bool(inside_half_cell(delta.tau, delta.omega)),
    )


def _erfc_half_cell(sigma: float) -> float:
    # probability that a N(0, sigma^2) shift lands outside (-sqrt(pi)/2, sqrt(pi)/2)
    if sigma == 0.0:
        return 0.0
    return math.erfc(SQRT_PI / (2.0 * math.sqrt(2.0) * sigma))


def p_fail_analytic(model: NoiseModel) -> float:
    """``1 - erf(a_tau) erf(a_omega)`` with ``a = sqrt(pi) / (2 sqrt(2) sigma)``.

    Evaluated as ``e_t + e_o - e_t e_o`` in terms of erfc so tiny failure
    probabilities keep full relative precision instead of cancelling to 0.
    """
    et = _erfc_half_cell(model.sigma_tau)
    eo = _erfc_half_cell(model.sigma_omega)
    return min(1.0, max(0.0, et + eo - et * eo))


def _block_sizes(trials: int, block: int = MC_BLOCK) -> list[int]:
    full, rest = divmod(trials, block)
    return [block] * full + ([rest] if rest else [])


def count_failures(
    model: NoiseModel,
    trials: int,
    seed: int,
    key: tuple[int, ...] = (),
    threads: Optional[int] = None,
) -> int:
    """Half-cell failures among ``trials`` shifts; block ``b`` draws from stream ``key + (b,)``."""
    sizes = _block_sizes(trials)

    def run(b: int) -> int:
        d = sample_displacements(model, RngStream(seed, key + (b,)), sizes[b])
        return int(np.count_nonzero(~inside_half_cell(d[:, 0], d[:, 1])))

    return sum(ordered_map(run, range(len(sizes)), threads))


def p_fail_monte_carlo(
    model: NoiseModel, trials: int, seed: int, threads: Optional[int] = None
) -> tuple[float, float]:
    """Return ``(estimate, stderr)`` of the half-cell failure probability."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    p = count_failures(model, trials, seed, threads=threads) / trials
    return p, math.sqrt(p * (1.0 - p) / trials)


@dataclass(frozen=True)
class FailureMap:
    sigma_tau_axis: list[float]
    sigma_omega_axis: list[float]
    p_fail: np.ndarray  # shape (len(tau axis), len(omega axis))
    stderr: Optional[np.ndarray] = None

    def rows(self) -> list[tuple[float, float, float]]:
        return [
            (st, so, float(self.p_fail[i, j]))
            for i, st in enumerate(self.sigma_tau_axis)
            for j, so in enumerate(self.sigma_omega_axis)
        ]


def _check_axis(axis: Sequence[float], name: str) -> list[float]:
    axis = [float(v) for v in axis]
    if not axis:
        raise DomainError(f"{name} axis is empty")
    if any(not math.isfinite(v) or v < 0 for v in axis):
        raise DomainError(f"{name} axis values must be finite and >= 0")
    if any(b <= a for a, b in zip(axis, axis[1:])):
        raise DomainError(f"{name} axis must be strictly increasing")
    return axis


def failure_map(
    tau_axis: Sequence[float],
    omega_axis: Sequence[float],
    mode: str = "analytic",
    trials: int = 100_000,
    seed: int = 0,
    threads: Optional[int] = None,
) -> FailureMap:
    """Failure probability on the grid ``tau_axis x omega_axis``.

    In ``"mc"`` mode cell ``(i, j)`` uses streams keyed ``(i, j, block)``, so the
    map does not depend on evaluation order or thread count.
    """
    ta = _check_axis(tau_axis, "sigma_tau")
    oa = _check_axis(omega_axis, "sigma_omega")
    cells = [(i, j) for i in range(len(ta)) for j in range(len(oa))]
    p = np.zeros((len(ta), len(oa)))
    if mode == "analytic":
        for i, j in cells:
            p[i, j] = p_fail_analytic(NoiseModel(ta[i], oa[j]))
        return FailureMap(ta, oa, p)
    if mode not in ("mc", "monte_carlo"):
        raise DomainError(f"unknown mode {mode!r}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")

    def cell(ij: tuple[int, int]) -> int:
        i, j = ij
        # blocks run serially inside a cell; the pool parallelises over cells
        return count_failures(NoiseModel(ta[i], oa[j]), trials, seed, key=(i, j), threads=1)

    for (i, j), n in zip(cells, ordered_map(cell, cells, threads)):
        p[i, j] = n / trials
    return FailureMap(ta, oa, p, np.sqrt(p * (1 - p) / trials))


def failure_line(
    omega_axis: Sequence[float],
    anisotropy: float,
    mode: str = "analytic",
    trials: int = 100_000,
    seed: int = 0,
    threads: Optional[int] = None,
) -> list[tuple[float, float, float]]:
    """Failure probability along ``sigma_tau = anisotropy * sigma_omega``."""
    oa = _check_axis(omega_axis, "sigma_omega")
    if not math.isfinite(anisotropy) or anisotropy <= 0:
        raise DomainError(f"anisotropy must be positive, got {anisotropy}")
    models = [NoiseModel(anisotropy * so, so) for so in oa]
    if mode == "analytic":
        return [(m.sigma_tau, m.sigma_omega, p_fail_analytic(m)) for m in models]
    if mode not in ("mc", "monte_carlo"):
        raise DomainError(f"unknown mode {mode!r}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    counts = ordered_map(
        lambda j: count_failures(models[j], trials, seed, key=(0, j), threads=1),
        range(len(models)),
        threads,
    )
    return [(m.sigma_tau, m.sigma_omega, n / trials) for m, n in zip(models, counts)]
