"""Dimensionless time-frequency phase space and the Weyl displacement algebra.

Coordinates are ``tau = t / T_r`` and ``omega = T_r * w`` where ``T_r`` is the
comb repetition period, so ``[tau, omega] = i``. A displacement
``D(tau, omega) = exp[i (omega * tau_op - tau * omega_op)]`` composes as

    D(a) D(b) = exp(i/2 * w(a, b)) D(a + b),
    w(a, b)   = a.omega * b.tau - a.tau * b.omega,

which follows from BCH because the commutator is central.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath

with mpmath.workdps(40):
    SQRT_PI: float = float(mpmath.sqrt(mpmath.pi))
    TWO_SQRT_PI: float = float(2 * mpmath.sqrt(mpmath.pi))
    HALF_SQRT_PI: float = float(mpmath.sqrt(mpmath.pi) / 2)
TWO_PI = 2.0 * math.pi

DEFAULT_TOL = 1e-9


class DomainError(ValueError):
    """Input outside the domain of an operation."""


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"non-finite value {v!r}")


def reduce_phase(phase: float) -> float:
    """Reduce ``phase`` into the half-open interval [0, 2*pi)."""
    r = math.fmod(phase, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    # fmod of a value just below a multiple of 2*pi can round up to 2*pi
    if r >= TWO_PI:
        r = 0.0
    return r


@dataclass(frozen=True)
class PhasePoint:
    tau: float
    omega: float

    def __post_init__(self) -> None:
        _check_finite(self.tau, self.omega)

    def __add__(self, other: PhasePoint) -> PhasePoint:
        return PhasePoint(self.tau + other.tau, self.omega + other.omega)

    def __sub__(self, other: PhasePoint) -> PhasePoint:
        return PhasePoint(self.tau - other.tau, self.omega - other.omega)

    def __neg__(self) -> PhasePoint:
        return PhasePoint(-self.tau, -self.omega)

    def as_tuple(self) -> tuple[float, float]:
        return (self.tau, self.omega)


ORIGIN = PhasePoint(0.0, 0.0)


@dataclass(frozen=True)
class WeylDisplacement:
    vector: PhasePoint
    phase: float = 0.0

    def __post_init__(self) -> None:
        _check_finite(self.phase)
        object.__setattr__(self, "phase", reduce_phase(self.phase))

    @classmethod
    def identity(cls) -> WeylDisplacement:
        return cls(ORIGIN, 0.0)

    @classmethod
    def of(cls, tau: float, omega: float) -> WeylDisplacement:
        return cls(PhasePoint(tau, omega), 0.0)

    def __matmul__(self, other: WeylDisplacement) -> WeylDisplacement:
        return compose(self, other)


@dataclass(frozen=True)
class LatticeSpec:
    """Square GKP lattice: stabilizers at 2*sqrt(pi), logical shifts at sqrt(pi)."""

    stabilizer_period: float = TWO_SQRT_PI
    logical_period: float = SQRT_PI
    half_cell: float = HALF_SQRT_PI

    def __post_init__(self) -> None:
        if not (self.stabilizer_period == 2 * self.logical_period == 4 * self.half_cell):
            raise DomainError("inconsistent lattice periods")


SQUARE_LATTICE = LatticeSpec()


@dataclass(frozen=True)
class CombParams:
    """Frequency-comb anchor. ``f_ceo`` is carried along but never used."""

    f_rep: float
    f_ceo: float = 0.0

    def __post_init__(self) -> None:
        _check_finite(self.f_rep, self.f_ceo)
        if self.f_rep <= 0:
            raise DomainError(f"f_rep must be positive, got {self.f_rep}")

    @property
    def t_rep(self) -> float:
        return 1.0 / self.f_rep

    @property
    def omega_rep(self) -> float:
        return TWO_PI * self.f_rep


def symplectic_form(a: PhasePoint, b: PhasePoint) -> float:
    """``a.omega * b.tau - a.tau * b.omega``; antisymmetric in its arguments."""
    return a.omega * b.tau - a.tau * b.omega


def compose(d1: WeylDisplacement, d2: WeylDisplacement) -> WeylDisplacement:
    """Product ``d1 @ d2`` (``d2`` acts first on a state)."""
    vector = d1.vector + d2.vector
    phase = d1.phase + d2.phase + 0.5 * symplectic_form(d1.vector, d2.vector)
    return WeylDisplacement(vector, phase)


def commutation_phase(a: PhasePoint, b: PhasePoint) -> float:
    """Phase ``phi`` in ``D(a) D(b) = exp(i phi) D(b) D(a)``, reduced to [0, 2*pi)."""
    return reduce_phase(symplectic_form(a, b))


class DisplacementClass(str, enum.Enum):
    IDENTITY = "Identity"
    STABILIZER = "Stabilizer"
    LOGICAL_X = "LogicalX"
    LOGICAL_Z = "LogicalZ"
    LOGICAL_Y = "LogicalY"
    GENERIC = "Generic"


def _residue(x: float, period: float) -> float:
    """Signed distance from ``x`` to the nearest multiple of ``period``."""
    return x - period * round(x / period)


def classify_displacement(
    p: PhasePoint, lattice: LatticeSpec = SQUARE_LATTICE, tol: float = DEFAULT_TOL
) -> DisplacementClass:
    if tol < 0:
        raise DomainError(f"tol must be nonnegative, got {tol}")
    s = lattice.stabilizer_period
    l = lattice.logical_period

    def parity(x: float) -> int | None:
        # 0: on the stabilizer lattice, 1: half-period off it, None: neither
        if abs(_residue(x, s)) <= tol:
            return 0
        if abs(_residue(x - l, s)) <= tol:
            return 1
        return None

    pt, po = parity(p.tau), parity(p.omega)
    if pt is None or po is None:
        return DisplacementClass.GENERIC
    if (pt, po) == (0, 0):
        if abs(p.tau) <= tol and abs(p.omega) <= tol:
            return DisplacementClass.IDENTITY
        return DisplacementClass.STABILIZER
    return {
        (1, 0): DisplacementClass.LOGICAL_Z,
        (0, 1): DisplacementClass.LOGICAL_X,
        (1, 1): DisplacementClass.LOGICAL_Y,
    }[(pt, po)]


def to_physical(p: PhasePoint, comb: CombParams) -> tuple[float, float]:
    """Return ``(delta_t [s], delta_omega [rad/s])``."""
    return p.tau * comb.t_rep, p.omega / comb.t_rep


def from_physical(delta_t: float, delta_omega: float, comb: CombParams) -> PhasePoint:
    return PhasePoint(delta_t / comb.t_rep, delta_omega * comb.t_rep)
