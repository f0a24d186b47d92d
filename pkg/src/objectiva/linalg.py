"""Dense complex-matrix foundation: states, effects, probabilities, tensor algebra.

Everything is double precision and validated eagerly at construction; the
operations below assume valid inputs and return validated values. All values
are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

DEFAULT_TOL = 1e-10
DEFAULT_RANK_CUTOFF = 1e-10


class ValidationError(ValueError):
    """An operator failed its construction invariants."""


class DimensionMismatch(ValueError):
    """Operands act on spaces of incompatible dimension."""


def as_complex_matrix(entries) -> np.ndarray:
    """Coerce to a square complex128 array, rejecting NaN/Inf entries."""
    m = np.array(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValidationError(f"expected a nonempty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValidationError("matrix contains NaN or Inf entries")
    return m


def hermiticity_residual(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def _validated_hermitian(entries, tol: float, what: str) -> np.ndarray:
    m = as_complex_matrix(entries)
    res = hermiticity_residual(m)
    if res > tol:
        raise ValidationError(f"{what} is not Hermitian: residual {res:.3e} > {tol:.3e}")
    # store the exactly Hermitian part so downstream traces are real to
    # machine precision
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class State:
    """Density matrix: Hermitian, positive semidefinite, unit trace."""

    matrix: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.tol < 0:
            raise ValidationError("tolerance must be nonnegative")
        m = _validated_hermitian(self.matrix, self.tol, "state")
        lo = float(np.min(np.linalg.eigvalsh(m)))
        if lo < -self.tol:
            raise ValidationError(f"state is not PSD: min eigenvalue {lo:.3e}")
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > self.tol:
            raise ValidationError(f"state trace is {tr!r}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(frozen=True)
class Effect:
    """Event observable: Hermitian with spectrum in [0, 1]."""

    matrix: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.tol < 0:
            raise ValidationError("tolerance must be nonnegative")
        m = _validated_hermitian(self.matrix, self.tol, "effect")
        vals = np.linalg.eigvalsh(m)
        if vals[0] < -self.tol or vals[-1] > 1.0 + self.tol:
            raise ValidationError(
                f"effect spectrum [{vals[0]:.3e}, {vals[-1]:.3e}] leaves [0, 1]"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def identity_effect(dim: int, tol: float = DEFAULT_TOL) -> Effect:
    return Effect(np.eye(dim), tol)


def prob(a: Effect, x: State) -> float:
    """Event probability Tr[A X], clamped to [0, 1] within tolerance."""
    if a.dim != x.dim:
        raise DimensionMismatch(f"effect dim {a.dim} != state dim {x.dim}")
    t = complex(np.trace(a.matrix @ x.matrix))
    tol = a.tol + x.tol
    if abs(t.imag) > tol:
        raise ValidationError(f"probability trace has imaginary residue {t.imag:.3e}")
    p = t.real
    if p < -tol or p > 1.0 + tol:
        raise ValidationError(f"probability {p!r} outside [0, 1] beyond tolerance")
    return min(max(p, 0.0), 1.0)


def complement(a: Effect) -> Effect:
    """The effect of the negated event: I - A."""
    return Effect(np.eye(a.dim) - a.matrix, a.tol)


def support_projector(x: State, rank_cutoff: float = DEFAULT_RANK_CUTOFF) -> Effect:
    """Orthogonal projector onto the range of x.

    Eigenvalues above rank_cutoff times the largest eigenvalue count as
    support; the cutoff is relative.
    """
    if rank_cutoff <= 0:
        raise ValueError("rank_cutoff must be positive")
    vals, vecs = np.linalg.eigh(x.matrix)
    keep = vals > rank_cutoff * float(vals[-1])
    if not np.any(keep):
        raise ValidationError("all eigenvalues below the rank cutoff; corrupted state")
    v = vecs[:, keep]
    p = v @ v.conj().T
    return Effect(0.5 * (p + p.conj().T), x.tol)


def kernel_projector(x: State, rank_cutoff: float = DEFAULT_RANK_CUTOFF) -> Effect:
    """Orthogonal projector onto the null space of x (complement of support)."""
    return complement(support_projector(x, rank_cutoff))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def partial_trace(m: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all tensor factors not listed in `keep`.

    `dims` factorizes the matrix dimension; `keep` holds factor indices to
    retain, in their original order.
    """
    m = as_complex_matrix(m)
    dims = [int(d) for d in dims]
    if prod(dims) != m.shape[0]:
        raise DimensionMismatch(f"dims {dims} do not factorize dimension {m.shape[0]}")
    keep = set(int(k) for k in keep)
    if not keep <= set(range(len(dims))):
        raise DimensionMismatch(f"keep indices {keep} outside factor range")
    cur = list(dims)
    t = m.reshape(cur + cur)
    for idx in sorted(set(range(len(dims))) - keep, reverse=True):
        t = np.trace(t, axis1=idx, axis2=idx + len(cur))
        cur.pop(idx)
    d = prod(cur) if cur else 1
    return t.reshape(d, d)


def random_state(dim: int, seed) -> State:
    """Ginibre-induced random density matrix, deterministic per seed."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    x = g @ g.conj().T
    return State(x / float(np.trace(x).real))


def random_effect(dim: int, seed) -> Effect:
    """Random Hermitian matrix spectrally rescaled into [0, 1]."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (g + g.conj().T)
    vals, vecs = np.linalg.eigh(h)
    spread = float(vals[-1] - vals[0])
    scaled = (vals - vals[0]) / spread if spread > 0 else np.full(dim, 0.5)
    return Effect(vecs @ np.diag(scaled) @ vecs.conj().T)


def pure_state(vector, tol: float = DEFAULT_TOL) -> State:
    """Rank-one density matrix |v><v| for a unit vector v."""
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"vector norm is {norm!r}, expected 1")
    return State(np.outer(v, v.conj()), tol)


def basis_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def random_orthonormal(dim: int, count: int, seed) -> np.ndarray:
    """`count` orthonormal columns of a Haar-random unitary."""
    if count > dim:
        raise DimensionMismatch(f"cannot fit {count} orthonormal vectors in dim {dim}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return q[:, :count]


def matrix_to_json(m: np.ndarray) -> dict:
    """Wire format for matrices: {"dim", "re", "im"}, row-major."""
    m = as_complex_matrix(m)
    return {"dim": m.shape[0], "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    dim = int(obj["dim"])
    m = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    if m.shape != (dim, dim):
        raise ValidationError(f"matrix payload shape {m.shape} does not match dim {dim}")
    return as_complex_matrix(m)
