import numpy as np

from objectiva import State, pure_state, random_orthonormal


def orthogonal_mixed_pair(dim, rng, rank1=None, rank2=None):
    """Two random states with disjoint supports inside the same space."""
    rank1 = rank1 or int(rng.integers(1, dim))
    rank2 = rank2 or int(rng.integers(1, dim - rank1 + 1))
    cols = random_orthonormal(dim, rank1 + rank2, rng)

    def mixed(basis):
        w = rng.uniform(0.2, 1.0, size=basis.shape[1])
        w /= w.sum()
        return State(sum(wi * np.outer(b, b.conj())
                         for wi, b in zip(w, basis.T)))

    return mixed(cols[:, :rank1]), mixed(cols[:, rank1:rank1 + rank2])


def orthogonal_pure_pair(dim, rng):
    cols = random_orthonormal(dim, 2, rng)
    return pure_state(cols[:, 0]), pure_state(cols[:, 1])
