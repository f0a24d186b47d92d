"""Finite-dimensional effect-algebra toolkit: states, effects, operational
superpositions, multi-channel measurements, and executable verifiers for the
non-coincidence and objectivity claims they support."""

__version__ = "0.1.0"

from .linalg import (
    DEFAULT_RANK_CUTOFF,
    DEFAULT_TOL,
    DimensionMismatch,
    Effect,
    State,
    ValidationError,
    basis_vector,
    complement,
    identity_effect,
    kernel_projector,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    prob,
    pure_state,
    random_effect,
    random_orthonormal,
    random_state,
    support_projector,
    tensor,
)
from .superposition import (
    SuperpositionSpec,
    is_member,
    is_orthogonal,
    is_sensitive_to_interference,
    make_pure_superposition,
    superposition_family,
)
from .discrimination import (
    DiscriminationError,
    best_discrimination_error,
    discriminates,
    synthesize_discriminator,
)
from .measurement import (
    ChannelLayout,
    MeasurementModel,
    ReadingSet,
    build_premeasurement,
    discriminating_reading,
    joint_outcome_distribution,
    m_eval,
    realized_effect,
    reduced_channel_state,
    sample_events,
    verify_separability,
)
from .theorems import (
    Report,
    brute_force_effect_oracle,
    counterexample_search,
    degrade_reading,
    inclusion_exclusion_distribution,
    membership_violation,
    oracle_is_member,
    verify_theorem1,
    verify_theorem1_prime,
    verify_theorem2,
)
from .scenarios import ScenarioConfig, run_scenario
