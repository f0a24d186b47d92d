import numpy as np
import pytest

from objectiva import (
    Effect,
    State,
    SuperpositionSpec,
    ValidationError,
    basis_vector,
    is_member,
    is_orthogonal,
    is_sensitive_to_interference,
    make_pure_superposition,
    oracle_is_member,
    prob,
    pure_state,
    random_effect,
    support_projector,
    superposition_family,
)
from objectiva.linalg import kernel_projector

from helpers import orthogonal_mixed_pair, orthogonal_pure_pair

E0, E1 = basis_vector(2, 0), basis_vector(2, 1)


def half_spec(dim=2, rng=None):
    if rng is None:
        return SuperpositionSpec(pure_state(basis_vector(dim, 0)),
                                 pure_state(basis_vector(dim, 1)), 0.5, 0.5)
    x1, x2 = orthogonal_pure_pair(dim, rng)
    return SuperpositionSpec(x1, x2, 0.5, 0.5)


class TestOrthogonality:
    def test_basis_states(self):
        assert is_orthogonal(pure_state(E0), pure_state(E1))

    def test_overlapping_states(self):
        assert not is_orthogonal(pure_state(E0), pure_state((E0 + E1) / np.sqrt(2)))

    def test_mixed_diagonal_pair(self):
        x1 = State(np.diag([0.5, 0.5, 0.0, 0.0]))
        x2 = State(np.diag([0.0, 0.0, 1 / 3, 2 / 3]))
        assert is_orthogonal(x1, x2)

    def test_spec_rejects_non_orthogonal_branches(self):
        with pytest.raises(ValidationError, match="orthogonal"):
            SuperpositionSpec(pure_state(E0), pure_state((E0 + E1) / np.sqrt(2)), 0.5, 0.5)

    def test_spec_rejects_bad_weights(self):
        with pytest.raises(ValidationError, match="weights"):
            SuperpositionSpec(pure_state(E0), pure_state(E1), 0.7, 0.7)


class TestMakePureSuperposition:
    def test_trivial_coefficient(self):
        x = make_pure_superposition(E0, E1, 1.0, 0.0)
        assert np.allclose(x.matrix, pure_state(E0).matrix)

    def test_equal_split(self):
        x = make_pure_superposition(E0, E1, 1 / np.sqrt(2), 1 / np.sqrt(2))
        assert prob(Effect(np.outer(E0, E0)), x) == pytest.approx(0.5)

    def test_relative_phase_rotates_cross_block(self):
        theta = 0.7
        a = make_pure_superposition(E0, E1, 1 / np.sqrt(2), 1 / np.sqrt(2)).matrix
        b = make_pure_superposition(E0, E1, 1 / np.sqrt(2),
                                    np.exp(1j * theta) / np.sqrt(2)).matrix
        assert np.allclose(np.diag(a), np.diag(b))
        assert b[0, 1] == pytest.approx(a[0, 1] * np.exp(-1j * theta))

    def test_global_phase_invariance_exact(self):
        c = (0.6, 0.8j)
        a = make_pure_superposition(E0, E1, *c)
        phase = np.exp(1j * 1.234)
        b = make_pure_superposition(E0, E1, c[0] * phase, c[1] * phase)
        assert np.allclose(a.matrix, b.matrix, atol=1e-15)

    def test_rejects_non_orthogonal_components(self):
        with pytest.raises(ValidationError):
            make_pure_superposition(E0, (E0 + E1) / np.sqrt(2), 0.6, 0.8)

    def test_rejects_unnormalized_coefficients(self):
        with pytest.raises(ValidationError):
            make_pure_superposition(E0, E1, 0.9, 0.9)


class TestFamily:
    def test_zero_coherence_is_incoherent_mixture(self):
        spec = half_spec()
        x = superposition_family(spec, 0.0, 1.3)
        assert np.allclose(x.matrix, np.eye(2) / 2)

    def test_full_coherence_is_pure(self):
        x = superposition_family(half_spec(), 1.0, 0.0)
        assert x.purity() == pytest.approx(1.0, abs=1e-12)

    def test_all_grid_points_are_members(self, rng):
        spec = half_spec(4, rng)
        for c in (0.0, 0.25, 0.5, 0.75, 1.0):
            for ph in np.linspace(0, 2 * np.pi, 8, endpoint=False):
                assert is_member(superposition_family(spec, c, ph), spec, tol=1e-10)

    def test_rejects_out_of_range_coherence(self):
        with pytest.raises(ValidationError):
            superposition_family(half_spec(), 1.5)

    def test_rejects_mixed_branches_with_coherence(self, rng):
        x1, x2 = orthogonal_mixed_pair(5, rng, rank1=2, rank2=2)
        spec = SuperpositionSpec(x1, x2, 0.5, 0.5)
        with pytest.raises(ValidationError, match="pure"):
            superposition_family(spec, 0.5)
        # the incoherent mixture is always constructible
        assert is_member(superposition_family(spec, 0.0), spec)


class TestMembership:
    def test_incoherent_mixture_is_member(self, rng):
        x1, x2 = orthogonal_mixed_pair(5, rng)
        spec = SuperpositionSpec(x1, x2, 0.3, 0.7)
        assert is_member(spec.incoherent_mixture(), spec)

    def test_branch_state_is_not_member(self):
        spec = half_spec()
        assert not is_member(spec.x1, spec)

    def test_degenerate_weight_makes_branch_a_member(self):
        x1, x2 = pure_state(E0), pure_state(E1)
        spec = SuperpositionSpec(x1, x2, 1.0, 0.0)
        assert is_member(x1, spec)

    def test_convexity_of_member_set(self, rng):
        spec = half_spec(4, rng)
        a = superposition_family(spec, 0.8, 0.4)
        b = superposition_family(spec, 0.2, 2.0)
        for w in (0.25, 0.5, 0.9):
            assert is_member(State(w * a.matrix + (1 - w) * b.matrix), spec)

    def test_block_test_agrees_with_sampling_oracle(self, rng):
        # mandatory validation of the block characterization
        for k in range(40):
            dim = int(rng.integers(2, 7))
            x1, x2 = orthogonal_pure_pair(dim, rng)
            w1 = float(rng.uniform(0.1, 0.9))
            spec = SuperpositionSpec(x1, x2, w1, 1 - w1)
            if k % 2 == 0:
                x = superposition_family(spec, float(rng.uniform()),
                                         float(rng.uniform(0, 2 * np.pi)))
            else:
                x = spec.x1 if k % 4 == 1 else spec.x2
            block = is_member(x, spec, tol=1e-9)
            oracle = oracle_is_member(x, spec, samples=500,
                                      seed=int(rng.integers(2**32)))
            assert block == oracle

    def test_eq2_restatement_via_compressed_effects(self, rng):
        spec = half_spec(5, rng)
        q1 = kernel_projector(spec.x1).matrix
        x = superposition_family(spec, 0.6, 0.9)
        for seed in range(50):
            b = random_effect(5, seed)
            a = Effect(q1 @ b.matrix @ q1)
            assert prob(a, x) == pytest.approx(
                spec.w2 * prob(a, spec.x2), abs=1e-9)


class TestInterferenceSensitivity:
    def test_branch_support_projector_is_blind(self):
        spec = half_spec()
        assert not is_sensitive_to_interference(support_projector(spec.x1), spec)

    def test_plus_projector_is_sensitive(self):
        spec = half_spec()
        plus = Effect(np.full((2, 2), 0.5))
        assert is_sensitive_to_interference(plus, spec)

    def test_verdict_matches_cross_block_criterion(self, rng):
        spec = half_spec(3, rng)
        p1 = support_projector(spec.x1).matrix
        p2 = support_projector(spec.x2).matrix
        for seed in range(100):
            a = random_effect(3, seed)
            cross = np.max(np.abs(p1 @ a.matrix @ p2))
            assert is_sensitive_to_interference(a, spec) == (cross > 1e-10)
