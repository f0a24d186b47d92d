"""Executable verifiers for the core claims.

Each verifier evaluates both sides of its claim numerically and reports
residuals and witnesses; none of them assumes the result it checks, so a
deliberately broken model fails them. Reports are structured values suitable
for machine checking and JSON emission.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations, product

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Effect,
    State,
    ValidationError,
    complement,
    kernel_projector,
    prob,
)
from .measurement import (
    MeasurementModel,
    ReadingSet,
    m_eval,
)
from .superposition import (
    DEFAULT_COHERENCE_GRID,
    DEFAULT_PHASE_GRID,
    SuperpositionSpec,
    is_member,
)

DEFAULT_WEIGHT_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class Report:
    """Structured verification outcome: pass flag, residuals, witnesses."""

    theorem: str
    passed: bool
    preconditions: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "pass": self.passed,
            "preconditions": self.preconditions,
            "residuals": self.residuals,
            "witnesses": self.witnesses,
        }


def verify_theorem1(a: Effect, psi1, psi2,
                    weight_grid=DEFAULT_WEIGHT_GRID,
                    phase_grid=DEFAULT_PHASE_GRID,
                    tol: float = DEFAULT_TOL) -> Report:
    """A positive operator vanishing on two vectors vanishes on every
    superposition of them.

    The grid sweeps the coefficient weight and relative phase; the exact
    witness |A psi1| + |A psi2| certifies that zero expectation on a PSD
    operator forces the vectors into its kernel.
    """
    v1 = np.asarray(psi1, dtype=np.complex128).reshape(-1)
    v2 = np.asarray(psi2, dtype=np.complex128).reshape(-1)
    if abs(np.linalg.norm(v1) - 1) > tol or abs(np.linalg.norm(v2) - 1) > tol:
        raise ValidationError("component vectors must be normalized")
    if abs(np.vdot(v1, v2)) > tol:
        raise ValidationError("component vectors must be orthogonal")
    lo = float(np.min(np.linalg.eigvalsh(a.matrix)))
    if lo < -tol:
        raise ValidationError(f"operator is not PSD: min eigenvalue {lo:.3e}")

    pre1 = float(np.vdot(v1, a.matrix @ v1).real)
    pre2 = float(np.vdot(v2, a.matrix @ v2).real)
    preconditions = {"expectation_psi1": pre1, "expectation_psi2": pre2,
                     "satisfied": max(pre1, pre2) <= tol}
    witness = float(np.linalg.norm(a.matrix @ v1) + np.linalg.norm(a.matrix @ v2))
    if not preconditions["satisfied"]:
        return Report("theorem1", False, preconditions,
                      {"max_grid_expectation": None},
                      {"kernel_witness": witness})

    worst = 0.0
    for w1, ph in product(weight_grid, phase_grid):
        psi = np.sqrt(w1) * v1 + np.sqrt(1.0 - w1) * np.exp(1j * ph) * v2
        worst = max(worst, float(np.vdot(psi, a.matrix @ psi).real))
    return Report("theorem1", worst <= tol, preconditions,
                  {"max_grid_expectation": worst},
                  {"kernel_witness": witness})


def verify_theorem1_prime(a: Effect, spec: SuperpositionSpec, members,
                          tol: float = DEFAULT_TOL) -> Report:
    """Extension to mixed states: an effect blind to both branches is blind to
    every member of the superposition set."""
    pre1 = prob(a, spec.x1)
    pre2 = prob(a, spec.x2)
    preconditions = {"prob_x1": pre1, "prob_x2": pre2,
                     "satisfied": max(pre1, pre2) <= tol}
    for k, x in enumerate(members):
        if not is_member(x, spec, tol=max(tol, spec.tol)):
            raise ValidationError(f"member {k} fails the superposition-set test")
    if not preconditions["satisfied"]:
        return Report("theorem1_prime", False, preconditions,
                      {"max_member_prob": None}, {})
    worst = max((prob(a, x) for x in members), default=0.0)
    return Report("theorem1_prime", worst <= tol, preconditions,
                  {"max_member_prob": worst}, {"members_checked": len(members)})


def verify_theorem2(model: MeasurementModel, mu: int, nu: int,
                    a_mu: Effect, a_nu: Effect, spec: SuperpositionSpec,
                    members, tol: float = DEFAULT_TOL) -> Report:
    """Two discriminating channel readings agree with certainty and fire with
    the first branch weight, on every member of the superposition set."""
    preconditions = {"satisfied": True, "failing_channels": []}
    for name, ch, eff in (("mu", mu, a_mu), ("nu", nu, a_nu)):
        p1 = m_eval(model, ReadingSet({ch: eff}), spec.x1)
        p2 = m_eval(model, ReadingSet({ch: eff}), spec.x2)
        preconditions[f"m_{name}_x1"] = p1
        preconditions[f"m_{name}_x2"] = p2
        if abs(p1 - 1.0) > tol or p2 > tol:
            preconditions["satisfied"] = False
            preconditions["failing_channels"].append(ch)
    for k, x in enumerate(members):
        if not is_member(x, spec, tol=max(tol, spec.tol)):
            raise ValidationError(f"member {k} fails the superposition-set test")
    if not preconditions["satisfied"]:
        return Report("theorem2", False, preconditions, {}, {})

    worst_agree = 0.0
    worst_disagree = 0.0
    for x in members:
        m_both = m_eval(model, ReadingSet({mu: a_mu, nu: a_nu}), x)
        m_mu = m_eval(model, ReadingSet({mu: a_mu}), x)
        m_nu = m_eval(model, ReadingSet({nu: a_nu}), x)
        worst_agree = max(worst_agree,
                          abs(m_both - spec.w1), abs(m_mu - spec.w1),
                          abs(m_nu - spec.w1))
        d1 = m_eval(model, ReadingSet({mu: a_mu, nu: complement(a_nu)}), x)
        d2 = m_eval(model, ReadingSet({mu: complement(a_mu), nu: a_nu}), x)
        worst_disagree = max(worst_disagree, d1, d2)
    passed = worst_agree <= tol and worst_disagree <= tol
    return Report("theorem2", passed, preconditions,
                  {"max_firing_deviation": worst_agree,
                   "max_disagreement": worst_disagree},
                  {"members_checked": len(members), "expected_rate": spec.w1})


def inclusion_exclusion_distribution(model: MeasurementModel,
                                     readings: ReadingSet, x: State) -> dict:
    """Joint outcome table rebuilt from plain coincidence probabilities only.

    Independent of the complement operator: the probability of a pattern is
    the alternating-sign sum of coincidence values over supersets of its
    firing channels. Used as the oracle against the direct product-effect
    table.
    """
    channels = readings.channels
    coincidence = {}
    for r in range(len(channels) + 1):
        for subset in combinations(channels, r):
            picked = ReadingSet({c: readings.entries[c] for c in subset})
            coincidence[subset] = m_eval(model, picked, x)
    dist = {}
    for bits in product((1, 0), repeat=len(channels)):
        ones = tuple(c for c, b in zip(channels, bits) if b)
        zeros = [c for c, b in zip(channels, bits) if not b]
        p = 0.0
        for r in range(len(zeros) + 1):
            for extra in combinations(zeros, r):
                key = tuple(sorted(chain(ones, extra)))
                p += (-1) ** r * coincidence[key]
        dist[bits] = p
    return dist


def degrade_reading(a: Effect, noise: float) -> Effect:
    """Detector imperfection: mix the reading with the maximally mixed effect."""
    if not 0.0 <= noise < 1.0:
        raise ValidationError(f"noise {noise!r} outside [0, 1)")
    d = a.dim
    return Effect((1.0 - noise) * a.matrix + noise * np.eye(d) / d, a.tol)


def counterexample_search(model: MeasurementModel, mu: int, nu: int,
                          a_mu: Effect, a_nu: Effect, spec: SuperpositionSpec,
                          noise: float, members,
                          tol: float = DEFAULT_TOL) -> Report:
    """Show that exact discrimination is necessary: degraded readings leak a
    strictly positive disagreement probability for any positive noise.

    The direct value is cross-checked against the inclusion-exclusion oracle.
    """
    b_mu = degrade_reading(a_mu, noise)
    b_nu = degrade_reading(a_nu, noise)
    worst = 0.0
    worst_mismatch = 0.0
    for x in members:
        d1 = m_eval(model, ReadingSet({mu: b_mu, nu: complement(b_nu)}), x)
        d2 = m_eval(model, ReadingSet({mu: complement(b_mu), nu: b_nu}), x)
        oracle = inclusion_exclusion_distribution(
            model, ReadingSet({mu: b_mu, nu: b_nu}), x)
        oracle_disagree = oracle[(1, 0)] + oracle[(0, 1)]
        worst = max(worst, d1 + d2)
        worst_mismatch = max(worst_mismatch, abs((d1 + d2) - oracle_disagree))
    passed = worst_mismatch <= tol and (worst <= tol if noise == 0.0 else worst > tol)
    return Report("discrimination_necessity", passed,
                  {"noise": noise},
                  {"max_disagreement": worst, "oracle_mismatch": worst_mismatch},
                  {"members_checked": len(members)})


def brute_force_effect_oracle(predicate, dim: int, samples: int, seed,
                              projector: np.ndarray | None = None) -> float:
    """Max violation of a caller-supplied identity over random effects.

    Effects are Wishart matrices normalized by trace (hence valid effects),
    optionally compressed into a subspace by projector conjugation. The
    predicate receives the raw effect matrix and returns a residual.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        b = g @ g.conj().T
        b /= float(np.trace(b).real)
        if projector is not None:
            b = projector @ b @ projector.conj().T
        worst = max(worst, float(predicate(b)))
    return worst


def membership_violation(x: State, spec: SuperpositionSpec,
                         samples: int = 1000, seed=0) -> float:
    """Brute-force membership oracle: max violation of the defining identities
    over random effects blind to one branch.

    For effects A supported on the kernel of X1 the candidate must satisfy
    Tr(A X) = w2 Tr(A X2), and symmetrically. Vectorized over a batch of
    trace-normalized Wishart effects; independent of the block test.
    """
    rng = np.random.default_rng(seed)
    d = spec.dim
    g = rng.standard_normal((samples, d, d)) + 1j * rng.standard_normal((samples, d, d))
    b = g @ g.conj().transpose(0, 2, 1)
    b /= np.trace(b, axis1=1, axis2=2).real[:, None, None]
    q1 = kernel_projector(spec.x1).matrix
    q2 = kernel_projector(spec.x2).matrix

    def side(q, target, weight):
        a = q[None] @ b @ q[None]
        lhs = np.einsum("nij,ji->n", a, x.matrix).real
        rhs = weight * np.einsum("nij,ji->n", a, target.matrix).real
        return float(np.max(np.abs(lhs - rhs)))

    return max(side(q1, spec.x2, spec.w2), side(q2, spec.x1, spec.w1))


def oracle_is_member(x: State, spec: SuperpositionSpec, samples: int = 1000,
                     seed=0, tol: float = 1e-9) -> bool:
    return membership_violation(x, spec, samples, seed) <= tol
