"""Physical lattice scales and control-hardware margin checks for a given comb."""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Sequence

from .algebra import HALF_SQRT_PI, SQRT_PI, TWO_SQRT_PI, CombParams, DomainError


class CapacityError(ValueError):
    """Not enough comb channels for the requested qubits."""


@dataclass(frozen=True)
class LatticeScales:
    dt_stab: float  # s
    dt_logical: float  # s
    dw_stab: float  # rad/s
    dw_logical: float  # rad/s


def lattice_scales(comb: CombParams) -> LatticeScales:
    t = comb.t_rep
    return LatticeScales(
        dt_stab=TWO_SQRT_PI * t,
        dt_logical=SQRT_PI * t,
        dw_stab=TWO_SQRT_PI / t,
        dw_logical=SQRT_PI / t,
    )


@dataclass(frozen=True)
class AxisCheck:
    resolution: float
    ratio: float  # resolution / half-cell
    passed: bool


@dataclass(frozen=True)
class ResolutionReport:
    margin: float
    tau: AxisCheck
    omega: AxisCheck

    @property
    def passed(self) -> bool:
        return self.tau.passed and self.omega.passed


def resolution_check(res_tau: float, res_omega: float, margin: float = 10.0) -> ResolutionReport:
    """An axis passes iff its resolution is below ``half_cell / margin``."""
    if not margin > 0:
        raise DomainError(f"margin must be positive, got {margin}")
    limit = HALF_SQRT_PI / margin
    checks = []
    for r in (res_tau, res_omega):
        if not (math.isfinite(r) and r >= 0):
            raise DomainError(f"resolution must be finite and >= 0, got {r}")
        checks.append(AxisCheck(r, r / HALF_SQRT_PI, r < limit))
    return ResolutionReport(margin, *checks)


@dataclass(frozen=True)
class BandwidthReport:
    f_ctrl: float
    f_op: float
    margin: float
    passed: bool


def bandwidth_check(f_ctrl: float, f_op: float) -> BandwidthReport:
    """Passes iff ``f_ctrl >= f_op`` (boundary inclusive)."""
    if not (f_ctrl > 0 and f_op > 0):
        raise DomainError("bandwidths must be positive")
    return BandwidthReport(f_ctrl, f_op, f_ctrl / f_op, f_ctrl >= f_op)


class ActuatorKind(str, enum.Enum):
    PZT = "PZT"
    AOM = "AOM"
    EOM = "EOM"


@dataclass(frozen=True)
class ActuatorResponse:
    """Low-pass magnitude ``(1 + (f/corner)^2)^(-order/2)``; a stand-in, not a device model."""

    kind: ActuatorKind
    corner_hz: float
    order: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.corner_hz) and self.corner_hz > 0):
            raise DomainError(f"corner_hz must be positive, got {self.corner_hz}")
        if self.order < 1:
            raise DomainError(f"order must be >= 1, got {self.order}")


DEFAULT_ACTUATORS = {
    ActuatorKind.PZT: ActuatorResponse(ActuatorKind.PZT, 1e3, 2),
    ActuatorKind.AOM: ActuatorResponse(ActuatorKind.AOM, 1e6, 1),
    ActuatorKind.EOM: ActuatorResponse(ActuatorKind.EOM, 1e8, 1),
}


def actuator_response(a: ActuatorResponse, f: float) -> float:
    if not f >= 0:
        raise DomainError(f"frequency must be >= 0, got {f}")
    x = f / a.corner_hz
    # log form keeps tiny magnitudes from underflowing to exactly 0
    return math.exp(-0.5 * a.order * math.log1p(x * x))


@dataclass(frozen=True)
class QubitAssignment:
    qubit: int
    units: tuple[int, int]
    channel: int


@dataclass(frozen=True)
class MultiplexPlan:
    n_qubits: int
    assignments: list[QubitAssignment]

    @property
    def units_used(self) -> int:
        return sum(len(a.units) for a in self.assignments)


def multiplex_plan(n_qubits: int, available_channels: Sequence[int]) -> MultiplexPlan:
    """Qubit k (1-based) gets source pair ``(2k-1, 2k)`` and the k-th lowest free channel."""
    if n_qubits < 1:
        raise DomainError(f"n_qubits must be >= 1, got {n_qubits}")
    channels = sorted(set(int(c) for c in available_channels))
    if len(channels) < n_qubits:
        raise CapacityError(f"{n_qubits} qubits need {n_qubits} distinct channels, got {len(channels)}")
    return MultiplexPlan(
        n_qubits,
        [QubitAssignment(k, (2 * k - 1, 2 * k), channels[k - 1]) for k in range(1, n_qubits + 1)],
    )


def scales_dict(s: LatticeScales) -> dict[str, float]:
    return {f"{k}_{'s' if k.startswith('dt') else 'rad_s'}": v for k, v in asdict(s).items()}
