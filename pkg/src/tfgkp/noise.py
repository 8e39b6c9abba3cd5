"""Gaussian displacement noise and the mapping from laboratory noise budgets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .algebra import CombParams, DomainError, PhasePoint

StreamIndex = Union[int, tuple[int, ...]]

_U64 = 2**64


@dataclass(frozen=True)
class NoiseModel:
    """Independent zero-mean Gaussian shifts with these dimensionless std devs."""

    sigma_tau: float = 0.0
    sigma_omega: float = 0.0

    def __post_init__(self) -> None:
        for v in (self.sigma_tau, self.sigma_omega):
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"noise widths must be finite and >= 0, got {v!r}")

    def scaled(self, factor: float) -> NoiseModel:
        return NoiseModel(self.sigma_tau * factor, self.sigma_omega * factor)


@dataclass(frozen=True)
class LabNoiseBudget:
    """Timing terms in seconds, spectral terms in rad/s."""

    t_jitter: float = 0.0
    t_disp: float = 0.0
    t_tech: float = 0.0
    w_seed: float = 0.0
    w_pump: float = 0.0
    w_tech: float = 0.0

    def __post_init__(self) -> None:
        for name in ("t_jitter", "t_disp", "t_tech", "w_seed", "w_pump", "w_tech"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {v!r}")

    @property
    def sigma_t(self) -> float:
        return math.hypot(self.t_jitter, self.t_disp, self.t_tech)

    @property
    def sigma_w(self) -> float:
        return math.hypot(self.w_seed, self.w_pump, self.w_tech)


def _key(stream_index: StreamIndex) -> tuple[int, ...]:
    key = (stream_index,) if isinstance(stream_index, (int, np.integer)) else tuple(stream_index)
    for k in key:
        if not 0 <= int(k) < _U64:
            raise DomainError(f"stream index component {k} outside [0, 2**64)")
    return tuple(int(k) for k in key)


@dataclass
class RngStream:
    """A reproducible normal-variate stream keyed by ``(seed, stream_index)``.

    Backed by numpy's PCG64 seeded through ``SeedSequence`` with the stream
    index as spawn key, so distinct indices give independent streams and a
    given key replays the same sequence. Not safe to share between threads.
    """

    seed: int
    stream_index: StreamIndex = 0
    _gen: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 0 <= int(self.seed) < _U64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        ss = np.random.SeedSequence(int(self.seed), spawn_key=_key(self.stream_index))
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def standard_normal(self, shape: int | tuple[int, ...]) -> np.ndarray:
        return self._gen.standard_normal(shape)


def sample_displacements(model: NoiseModel, rng: RngStream, n: int) -> np.ndarray:
    """Draw ``n`` shifts as an ``(n, 2)`` array of ``(tau, omega)`` columns."""
    z = rng.standard_normal((n, 2))
    return z * np.array([model.sigma_tau, model.sigma_omega])


def sample_displacement(model: NoiseModel, rng: RngStream) -> PhasePoint:
    tau, omega = sample_displacements(model, rng, 1)[0]
    return PhasePoint(float(tau), float(omega))


def lab_to_dimensionless(budget: LabNoiseBudget, comb: CombParams) -> NoiseModel:
    """Root-sum-square the budget, then ``sigma_tau = sigma_t / T_r``, ``sigma_omega = T_r * sigma_w``."""
    return NoiseModel(budget.sigma_t / comb.t_rep, comb.t_rep * budget.sigma_w)
