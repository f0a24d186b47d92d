"""Operational superposition sets between two orthogonal states.

A two-branch set is pinned down by the branch states and their weights.
Membership is decided by a block characterization: a candidate belongs to the
set iff compressing it to the kernel of either branch reproduces the other
branch at its weight. The test suite validates this against a brute-force
sampling oracle over random effects.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DimensionMismatch,
    State,
    ValidationError,
    kernel_projector,
    pure_state,
)

DEFAULT_COHERENCE_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_PHASE_GRID = tuple(2.0 * np.pi * k / 8 for k in range(8))

PURITY_TOL = 1e-9


def is_orthogonal(x1: State, x2: State, tol: float = DEFAULT_TOL) -> bool:
    """True iff Tr(X1 X2) vanishes (disjoint supports for PSD operators)."""
    if x1.dim != x2.dim:
        raise DimensionMismatch(f"state dims differ: {x1.dim} vs {x2.dim}")
    return float(np.trace(x1.matrix @ x2.matrix).real) <= tol


@dataclass(frozen=True)
class SuperpositionSpec:
    """Two orthogonal branch states with weights summing to one."""

    x1: State
    x2: State
    w1: float
    w2: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.x1.dim != self.x2.dim:
            raise DimensionMismatch(f"branch dims differ: {self.x1.dim} vs {self.x2.dim}")
        if not (-self.tol <= self.w1 <= 1 + self.tol and -self.tol <= self.w2 <= 1 + self.tol):
            raise ValidationError(f"weights ({self.w1}, {self.w2}) outside [0, 1]")
        if abs(self.w1 + self.w2 - 1.0) > self.tol:
            raise ValidationError(f"weights sum to {self.w1 + self.w2!r}, expected 1")
        overlap = float(np.trace(self.x1.matrix @ self.x2.matrix).real)
        if overlap > self.tol:
            raise ValidationError(f"branch states are not orthogonal: overlap {overlap:.3e}")

    @property
    def dim(self) -> int:
        return self.x1.dim

    def incoherent_mixture(self) -> State:
        return State(self.w1 * self.x1.matrix + self.w2 * self.x2.matrix, self.tol)

    def to_json_dict(self) -> dict:
        from .linalg import matrix_to_json

        return {
            "x1": matrix_to_json(self.x1.matrix),
            "x2": matrix_to_json(self.x2.matrix),
            "w1": self.w1,
            "w2": self.w2,
        }

    @classmethod
    def from_json_dict(cls, obj: dict, tol: float = DEFAULT_TOL) -> "SuperpositionSpec":
        from .linalg import matrix_from_json

        return cls(
            State(matrix_from_json(obj["x1"]), tol),
            State(matrix_from_json(obj["x2"]), tol),
            float(obj["w1"]),
            float(obj["w2"]),
            tol,
        )


def make_pure_superposition(phi1, phi2, c1: complex, c2: complex,
                            tol: float = DEFAULT_TOL) -> State:
    """Rank-one state built from c1*phi1 + c2*phi2 for orthonormal phi1, phi2."""
    v1 = np.asarray(phi1, dtype=np.complex128).reshape(-1)
    v2 = np.asarray(phi2, dtype=np.complex128).reshape(-1)
    if v1.shape != v2.shape:
        raise DimensionMismatch("component vectors have different dimensions")
    overlap = abs(np.vdot(v1, v2))
    if overlap > tol:
        raise ValidationError(f"component vectors are not orthogonal: |<1|2>| = {overlap:.3e}")
    weight = abs(c1) ** 2 + abs(c2) ** 2
    if abs(weight - 1.0) > tol:
        raise ValidationError(f"|c1|^2 + |c2|^2 = {weight!r}, expected 1")
    return pure_state(c1 * v1 + c2 * v2, tol)


def _principal_vector(x: State) -> np.ndarray:
    vals, vecs = np.linalg.eigh(x.matrix)
    return vecs[:, -1]


def superposition_family(spec: SuperpositionSpec, coherence: float,
                         phase: float = 0.0) -> State:
    """A parametrized member: the incoherent mixture plus a scaled cross block.

    Requires pure branches whenever coherence > 0; coherence = 0 always yields
    the incoherent mixture.
    """
    if not 0.0 <= coherence <= 1.0:
        raise ValidationError(f"coherence {coherence!r} outside [0, 1]")
    if coherence == 0.0:
        return spec.incoherent_mixture()
    if spec.x1.purity() < 1 - PURITY_TOL or spec.x2.purity() < 1 - PURITY_TOL:
        raise ValidationError("coherent members are constructible for pure branches only")
    v1 = _principal_vector(spec.x1)
    v2 = _principal_vector(spec.x2)
    amp = coherence * np.sqrt(spec.w1 * spec.w2) * np.exp(1j * phase)
    cross = amp * np.outer(v1, v2.conj())
    m = spec.w1 * spec.x1.matrix + spec.w2 * spec.x2.matrix + cross + cross.conj().T
    return State(m, spec.tol)


def is_member(x: State, spec: SuperpositionSpec, tol: float | None = None) -> bool:
    """Block test: Q1 X Q1 == w2 X2 and Q2 X Q2 == w1 X1 for kernel projectors Q."""
    if x.dim != spec.dim:
        raise DimensionMismatch(f"candidate dim {x.dim} != spec dim {spec.dim}")
    tol = spec.tol if tol is None else tol
    q1 = kernel_projector(spec.x1).matrix
    q2 = kernel_projector(spec.x2).matrix
    r1 = np.max(np.abs(q1 @ x.matrix @ q1 - spec.w2 * spec.x2.matrix))
    r2 = np.max(np.abs(q2 @ x.matrix @ q2 - spec.w1 * spec.x1.matrix))
    return float(max(r1, r2)) <= tol


def is_sensitive_to_interference(a, spec: SuperpositionSpec,
                                 coherence_grid=DEFAULT_COHERENCE_GRID,
                                 phase_grid=DEFAULT_PHASE_GRID,
                                 tol: float | None = None) -> bool:
    """True iff the effect's probability varies across the member family."""
    from .linalg import prob

    tol = spec.tol if tol is None else tol
    mixture = spec.incoherent_mixture()
    baseline = prob(a, mixture)
    worst = 0.0
    for c in coherence_grid:
        for ph in phase_grid:
            worst = max(worst, abs(prob(a, superposition_family(spec, c, ph)) - baseline))
    return worst > tol
