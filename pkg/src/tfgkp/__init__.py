"""Time-frequency GKP qubit simulator: displacement algebra, grid states, shift noise, decoding."""
from .algebra import (
    HALF_SQRT_PI,
    SQRT_PI,
    SQUARE_LATTICE,
    TWO_SQRT_PI,
    CombParams,
    DisplacementClass,
    DomainError,
    LatticeSpec,
    PhasePoint,
    WeylDisplacement,
    classify_displacement,
    commutation_phase,
    compose,
    from_physical,
    symplectic_form,
    to_physical,
)
from .correction import (
    IDEAL_ANCILLA,
    AncillaModel,
    CycleRecord,
    apply_recovery,
    measure_syndrome,
    run_cycles,
    run_uncorrected,
    simulate_trajectory,
    uncorrected_analytic,
)
from .decoder import (
    DecodeOutcome,
    FailureMap,
    Pauli,
    decode,
    failure_line,
    failure_map,
    p_fail_analytic,
    p_fail_monte_carlo,
)
from .feasibility import (
    ActuatorKind,
    ActuatorResponse,
    CapacityError,
    LatticeScales,
    MultiplexPlan,
    actuator_response,
    bandwidth_check,
    lattice_scales,
    multiplex_plan,
    resolution_check,
)
from .grid_states import (
    GridStateModel,
    SupermodeWeights,
    make_logical,
    marginal,
    supermode_weights,
    wavefunction_omega,
    wavefunction_tau,
    wigner,
)
from .noise import (
    LabNoiseBudget,
    NoiseModel,
    RngStream,
    lab_to_dimensionless,
    sample_displacement,
    sample_displacements,
)
