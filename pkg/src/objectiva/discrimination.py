"""Effects that perfectly separate orthogonal states, and the optimal bound
when perfect separation is impossible."""

from __future__ import annotations

import numpy as np

from .linalg import (
    DEFAULT_RANK_CUTOFF,
    DEFAULT_TOL,
    DimensionMismatch,
    Effect,
    State,
    prob,
)


class DiscriminationError(ValueError):
    """Perfect discrimination is impossible; carries the state overlap."""

    def __init__(self, overlap: float):
        super().__init__(f"states are not orthogonal: overlap {overlap:.3e}")
        self.overlap = overlap


def discriminates(a: Effect, x1: State, x2: State, tol: float = DEFAULT_TOL) -> bool:
    """True iff the effect answers 1 on one state and 0 on the other."""
    p1 = prob(a, x1)
    p2 = prob(a, x2)
    return (abs(p1 - 1.0) <= tol and p2 <= tol) or (p1 <= tol and abs(p2 - 1.0) <= tol)


def synthesize_discriminator(x1: State, x2: State,
                             rank_cutoff: float = DEFAULT_RANK_CUTOFF,
                             tol: float = DEFAULT_TOL) -> Effect:
    """Projector onto the positive eigenspace of X1 - X2.

    Deterministic canonical choice; requires orthogonal inputs and answers
    (1, 0) on (X1, X2). Eigenvalues within the cutoff band around zero are
    excluded to keep the joint-kernel directions out of the projector.
    """
    if x1.dim != x2.dim:
        raise DimensionMismatch(f"state dims differ: {x1.dim} vs {x2.dim}")
    overlap = float(np.trace(x1.matrix @ x2.matrix).real)
    if overlap > tol:
        raise DiscriminationError(overlap)
    diff = x1.matrix - x2.matrix
    vals, vecs = np.linalg.eigh(diff)
    cutoff = rank_cutoff * float(np.max(np.abs(vals)))
    keep = vals > cutoff
    v = vecs[:, keep]
    p = v @ v.conj().T
    return Effect(0.5 * (p + p.conj().T), tol)


def best_discrimination_error(x1: State, x2: State, prior: float = 0.5) -> float:
    """Minimum error probability for distinguishing the weighted pair.

    (1 - trace_norm(prior*X1 - (1-prior)*X2)) / 2; zero exactly when the pair
    is perfectly distinguishable at that prior.
    """
    if not 0.0 <= prior <= 1.0:
        raise ValueError(f"prior {prior!r} outside [0, 1]")
    if x1.dim != x2.dim:
        raise DimensionMismatch(f"state dims differ: {x1.dim} vs {x2.dim}")
    diff = prior * x1.matrix - (1.0 - prior) * x2.matrix
    trace_norm = float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
    return 0.5 * (1.0 - trace_norm)
