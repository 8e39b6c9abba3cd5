"""Syndrome extraction and repeated correction at the displacement level.

The data mode is tracked only through its accumulated shift and a Pauli
frame. One correction cycle is:

1. the channel adds a Gaussian shift;
2. the ancilla readout returns that shift plus readout noise, reduced modulo
   ``sqrt(pi)`` into the half cell (beam-splitter back-action is folded into
   the readout widths);
3. the shift ``-syndrome`` is applied; what remains is rounded to the nearest
   multiple of ``sqrt(pi)``, whose parity is recorded in the frame, and the
   leftover in-cell part carries over to the next cycle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._parallel import ordered_map
from .algebra import HALF_SQRT_PI, DomainError, PhasePoint
from .decoder import (
    Pauli,
    _block_sizes,
    inside_half_cell,
    nearest_multiple,
    p_fail_analytic,
    parity_codes,
)
from .noise import NoiseModel, RngStream, sample_displacements

AncillaModel = NoiseModel
"""Readout noise of the syndrome measurement; ``AncillaModel()`` is ideal."""

IDEAL_ANCILLA = NoiseModel(0.0, 0.0)


@dataclass(frozen=True)
class CycleRecord:
    cycle: int
    syndrome: PhasePoint
    residual_after: PhasePoint
    increment: Pauli
    frame: Pauli


def _reduce(x: float) -> float:
    return float(nearest_multiple(x)[1])


def measure_syndrome(delta: PhasePoint, anc: AncillaModel, rng: RngStream) -> PhasePoint:
    xi = sample_displacements(anc, rng, 1)[0]
    return PhasePoint(_reduce(delta.tau + xi[0]), _reduce(delta.omega + xi[1]))


def apply_recovery(delta: PhasePoint, syndrome: PhasePoint) -> tuple[PhasePoint, Pauli]:
    """Shift by ``-syndrome``; return the in-cell remainder and the logical increment."""
    for v in syndrome.as_tuple():
        if not -HALF_SQRT_PI <= v < HALF_SQRT_PI:
            raise DomainError(f"syndrome component {v} outside [-sqrt(pi)/2, sqrt(pi)/2)")
    kt, rt = nearest_multiple(delta.tau - syndrome.tau)
    ko, ro = nearest_multiple(delta.omega - syndrome.omega)
    return PhasePoint(float(rt), float(ro)), Pauli.from_code(int(parity_codes(kt, ko)))


def simulate_trajectory(
    channel: NoiseModel, anc: AncillaModel, n_cycles: int, rng: RngStream
) -> list[CycleRecord]:
    """One trial, cycle by cycle, through the scalar gadget functions."""
    if n_cycles < 1:
        raise DomainError("n_cycles must be >= 1")
    residual = PhasePoint(0.0, 0.0)
    frame = Pauli.I
    out = []
    for c in range(1, n_cycles + 1):
        shift = sample_displacements(channel, rng, 1)[0]
        delta = PhasePoint(residual.tau + shift[0], residual.omega + shift[1])
        syndrome = measure_syndrome(delta, anc, rng)
        residual, inc = apply_recovery(delta, syndrome)
        frame = frame * inc
        out.append(CycleRecord(c, syndrome, residual, inc, frame))
    return out


@dataclass(frozen=True)
class CycleStats:
    per_cycle_error: np.ndarray
    cumulative_error: np.ndarray
    trials: int
    increments: Optional[np.ndarray] = None  # (trials, n_cycles) Pauli codes

    @property
    def cycles(self) -> np.ndarray:
        return np.arange(1, len(self.per_cycle_error) + 1)

    @property
    def stderr(self) -> np.ndarray:
        p = self.cumulative_error
        return np.sqrt(p * (1 - p) / self.trials)


def _cycle_block(
    channel: NoiseModel, anc: AncillaModel, n_cycles: int, n: int, rng: RngStream
) -> np.ndarray:
    res = np.zeros((n, 2))
    inc = np.empty((n, n_cycles), dtype=np.int8)
    for c in range(n_cycles):
        delta = res + sample_displacements(channel, rng, n)
        _, syn = nearest_multiple(delta + sample_displacements(anc, rng, n))
        k, res = nearest_multiple(delta - syn)
        inc[:, c] = parity_codes(k[:, 0], k[:, 1])
    return inc


def _check_counts(n_cycles: int, trials: int) -> None:
    if n_cycles < 1:
        raise DomainError(f"n_cycles must be >= 1, got {n_cycles}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")


def run_cycles(
    channel: NoiseModel,
    anc: AncillaModel,
    n_cycles: int,
    trials: int,
    seed: int,
    threads: Optional[int] = None,
    record: bool = False,
) -> CycleStats:
    """Monte Carlo over ``trials`` independent corrected trajectories.

    ``per_cycle_error[c]`` is the fraction of trials whose frame changed in
    cycle ``c + 1``; ``cumulative_error[c]`` the fraction whose frame is not
    ``I`` after it. Trial blocks use streams keyed by block index.
    """
    _check_counts(n_cycles, trials)
    sizes = _block_sizes(trials)
    blocks = ordered_map(
        lambda b: _cycle_block(channel, anc, n_cycles, sizes[b], RngStream(seed, (b,))),
        range(len(sizes)),
        threads,
    )
    inc = np.concatenate(blocks, axis=0)
    frames = np.bitwise_xor.accumulate(inc, axis=1)
    return CycleStats(
        per_cycle_error=np.count_nonzero(inc, axis=0) / trials,
        cumulative_error=np.count_nonzero(frames, axis=0) / trials,
        trials=trials,
        increments=inc if record else None,
    )


@dataclass(frozen=True)
class UncorrectedStats:
    failure: np.ndarray
    trials: int

    @property
    def cycles(self) -> np.ndarray:
        return np.arange(1, len(self.failure) + 1)

    @property
    def stderr(self) -> np.ndarray:
        p = self.failure
        return np.sqrt(p * (1 - p) / self.trials)


def _uncorrected_block(channel: NoiseModel, n_cycles: int, n: int, rng: RngStream) -> np.ndarray:
    total = np.zeros((n, 2))
    fails = np.empty(n_cycles, dtype=np.int64)
    for c in range(n_cycles):
        total += sample_displacements(channel, rng, n)
        fails[c] = np.count_nonzero(~inside_half_cell(total[:, 0], total[:, 1]))
    return fails


def run_uncorrected(
    channel: NoiseModel, n_cycles: int, trials: int, seed: int, threads: Optional[int] = None
) -> UncorrectedStats:
    """Half-cell failure of the summed, never-corrected shift after each cycle.

    Cycle 1 draws exactly the samples ``p_fail_monte_carlo`` draws for the same
    seed, so the two agree bit for bit there.
    """
    _check_counts(n_cycles, trials)
    sizes = _block_sizes(trials)
    fails = ordered_map(
        lambda b: _uncorrected_block(channel, n_cycles, sizes[b], RngStream(seed, (b,))),
        range(len(sizes)),
        threads,
    )
    return UncorrectedStats(np.sum(fails, axis=0) / trials, trials)


def uncorrected_analytic(channel: NoiseModel, n_cycles: int) -> float:
    """Closed-form failure after ``n_cycles`` uncorrected channel uses (widths grow as sqrt(n))."""
    return p_fail_analytic(channel.scaled(math.sqrt(n_cycles)))
