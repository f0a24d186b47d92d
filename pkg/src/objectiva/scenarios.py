"""Built-in interferometer and pointer-measurement scenarios.

Each runner builds a concrete model (two-arm interferometer, detectors in
both arms, stacked detectors in one arm, or a spin-half beam split onto two
pointer channels), sweeps the configured superposition grid, and returns a
deterministic, JSON-serializable report with a pass flag.

Phase convention: the recombining beam splitter maps the two arm basis
vectors onto (e1 +/- e2)/sqrt(2); the swept phase is the relative phase of
the second arm amplitude.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, asdict

import numpy as np

from . import __version__
from .linalg import (
    DEFAULT_TOL,
    Effect,
    State,
    ValidationError,
    basis_vector,
    complement,
    matrix_from_json,
    prob,
    pure_state,
)
from .measurement import (
    ChannelLayout,
    MeasurementModel,
    ReadingSet,
    build_premeasurement,
    discriminating_reading,
    m_eval,
    sample_events,
)
from .superposition import (
    DEFAULT_COHERENCE_GRID,
    DEFAULT_PHASE_GRID,
    SuperpositionSpec,
    superposition_family,
)
from .theorems import (
    degrade_reading,
    inclusion_exclusion_distribution,
    verify_theorem1,
    verify_theorem2,
)

SCENARIOS = ("fig1a_interference", "fig1b_coincidence", "fig1c_reduction",
             "stern_gerlach", "custom")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "fig1a_interference"
    w1: float = 0.5
    w2: float = 0.5
    coherence_grid: tuple = DEFAULT_COHERENCE_GRID
    phase_grid: tuple = DEFAULT_PHASE_GRID
    detector_noise: float = 0.0
    trials: int = 10_000
    seed: int = 0
    tol: float = DEFAULT_TOL
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"unknown scenario {self.scenario!r}")
        if abs(self.w1 + self.w2 - 1.0) > self.tol:
            raise ValidationError(f"weights sum to {self.w1 + self.w2!r}, expected 1")
        if not (0 <= self.w1 <= 1 and 0 <= self.w2 <= 1):
            raise ValidationError("weights must lie in [0, 1]")
        if not self.coherence_grid or not self.phase_grid:
            raise ValidationError("sampling grids must be nonempty")
        if not 0.0 <= self.detector_noise < 1.0:
            raise ValidationError("detector_noise must lie in [0, 1)")
        if self.trials < 0:
            raise ValidationError("trials must be nonnegative")
        object.__setattr__(self, "coherence_grid", tuple(float(c) for c in self.coherence_grid))
        object.__setattr__(self, "phase_grid", tuple(float(p) for p in self.phase_grid))

    @classmethod
    def from_dict(cls, obj: dict) -> "ScenarioConfig":
        obj = dict(obj)
        kwargs = {}
        if "weights" in obj:
            w1, w2 = obj.pop("weights")
            kwargs["w1"], kwargs["w2"] = float(w1), float(w2)
        for key in ("scenario", "w1", "w2", "coherence_grid", "phase_grid",
                    "detector_noise", "trials", "seed", "extra"):
            if key in obj:
                kwargs[key] = obj.pop(key)
        for alias in ("tolerance", "tol"):
            if alias in obj:
                kwargs["tol"] = float(obj.pop(alias))
        if obj:
            raise ValidationError(f"unknown config keys: {sorted(obj)}")
        if "coherence_grid" in kwargs:
            kwargs["coherence_grid"] = tuple(kwargs["coherence_grid"])
        if "phase_grid" in kwargs:
            kwargs["phase_grid"] = tuple(kwargs["phase_grid"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coherence_grid"] = list(self.coherence_grid)
        d["phase_grid"] = list(self.phase_grid)
        return d

    def sha256(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()


def _finalize(report: dict, config: ScenarioConfig) -> dict:
    report["scenario"] = config.scenario
    report["config_sha256"] = config.sha256()
    report["version"] = __version__
    return report


def _two_arm_spec(config: ScenarioConfig, dim: int = 2,
                  idx1: int = 0, idx2: int = 1) -> SuperpositionSpec:
    return SuperpositionSpec(
        pure_state(basis_vector(dim, idx1)), pure_state(basis_vector(dim, idx2)),
        config.w1, config.w2, config.tol)


def _grid_members(spec: SuperpositionSpec, config: ScenarioConfig) -> list:
    return [superposition_family(spec, c, ph)
            for c in config.coherence_grid for ph in config.phase_grid]


def run_fig1a(config: ScenarioConfig) -> dict:
    """Open interferometer: one detector behind the recombining beam splitter.

    The fringe follows 1/2 + coherence * sqrt(w1 w2) * cos(phase); visibility
    at full coherence is 2 sqrt(w1 w2). Pass requires the swept fringe to
    match the closed form and the coherence-0 row to be flat.
    """
    spec = _two_arm_spec(config)
    plus = (basis_vector(2, 0) + basis_vector(2, 1)) / np.sqrt(2)
    port = Effect(np.outer(plus, plus.conj()), config.tol)
    rows = []
    worst = 0.0
    for c in config.coherence_grid:
        probs = [prob(port, superposition_family(spec, c, ph))
                 for ph in config.phase_grid]
        expected = [0.5 + c * np.sqrt(config.w1 * config.w2) * np.cos(ph)
                    for ph in config.phase_grid]
        worst = max(worst, max(abs(p - e) for p, e in zip(probs, expected)))
        rows.append({"coherence": c, "probabilities": probs,
                     "visibility": float(2 * c * np.sqrt(config.w1 * config.w2))})
    flat = next((r for r in rows if r["coherence"] == 0.0), None)
    flat_residual = (max(abs(p - 0.5) for p in flat["probabilities"])
                     if flat is not None else 0.0)
    passed = worst <= config.tol and flat_residual <= config.tol
    return _finalize({
        "pass": passed,
        "fringe": rows,
        "residuals": {"closed_form": worst, "incoherent_flatness": flat_residual},
    }, config)


def fig1b_arms():
    """Occupation-number arm space: |arm1 occupied>, |arm2 occupied>, and the
    single-quantum coincidence effect |both occupied><both occupied|."""
    phi1 = np.kron(basis_vector(2, 1), basis_vector(2, 0))
    phi2 = np.kron(basis_vector(2, 0), basis_vector(2, 1))
    both = np.kron(basis_vector(2, 1), basis_vector(2, 1))
    return phi1, phi2, Effect(np.outer(both, both.conj()))


def run_fig1b(config: ScenarioConfig, effect_override: Effect | None = None) -> dict:
    """Detectors in both arms: coincidences never occur.

    The experimenter's check is that the coincidence effect gives zero on
    either single-arm state; the sweep then confirms zero on every
    superposition. `effect_override` exists for mutation runs.
    """
    phi1, phi2, a_cc = fig1b_arms()
    if effect_override is not None:
        a_cc = effect_override
    pre1 = float(np.vdot(phi1, a_cc.matrix @ phi1).real)
    pre2 = float(np.vdot(phi2, a_cc.matrix @ phi2).real)
    pre_ok = max(pre1, pre2) <= config.tol
    theorem1 = verify_theorem1(a_cc, phi1, phi2, tol=config.tol)

    spec = SuperpositionSpec(pure_state(phi1), pure_state(phi2),
                             config.w1, config.w2, config.tol)
    worst = max(prob(a_cc, x) for x in _grid_members(spec, config))
    passed = pre_ok and theorem1.passed and worst <= config.tol
    return _finalize({
        "pass": passed,
        "preconditions": {"arm1_expectation": pre1, "arm2_expectation": pre2,
                          "satisfied": pre_ok},
        "residuals": {"max_coincidence_probability": worst},
        "theorem1": theorem1.to_dict(),
    }, config)


def _fire_idle_pointers(n_channels: int):
    # per channel: branch-1 pointer fires (|1>), branch-2 pointer stays idle (|0>)
    return [(basis_vector(2, 1), basis_vector(2, 0)) for _ in range(n_channels)]


def fig1c_setup(tol: float = DEFAULT_TOL, pointer_pairs=None):
    """Two stacked non-absorbing detectors in one arm, watching the same branch."""
    x1 = pure_state(basis_vector(2, 0))
    x2 = pure_state(basis_vector(2, 1))
    layout = ChannelLayout((2, 2), labels=("detector-1", "detector-2"))
    pointers = pointer_pairs if pointer_pairs is not None else _fire_idle_pointers(2)
    model = build_premeasurement(x1, x2, layout, pointers, tol=tol)
    readings = {mu: discriminating_reading(model, mu, x1, x2) for mu in (0, 1)}
    return model, readings, x1, x2


def stern_gerlach_setup(tol: float = DEFAULT_TOL, pointer_pairs=None):
    """Spin-half object, two spatial channels recording the deflection branch."""
    up = pure_state(basis_vector(2, 0))
    down = pure_state(basis_vector(2, 1))
    layout = ChannelLayout((2, 2), labels=("screen-left", "screen-right"))
    if pointer_pairs is None:
        pointer_pairs = [(basis_vector(2, 0), basis_vector(2, 1)) for _ in range(2)]
    model = build_premeasurement(up, down, layout, pointer_pairs, tol=tol)
    readings = {mu: discriminating_reading(model, mu, up, down) for mu in (0, 1)}
    return model, readings, up, down


def _disagreement(model: MeasurementModel, a_mu: Effect, a_nu: Effect,
                  x: State, use_complement: bool = True) -> float:
    # use_complement=False is the documented skipped-complement mutation hook
    b_nu = complement(a_nu) if use_complement else a_nu
    b_mu = complement(a_mu) if use_complement else a_mu
    d1 = m_eval(model, ReadingSet({0: a_mu, 1: b_nu}), x)
    d2 = m_eval(model, ReadingSet({0: b_mu, 1: a_nu}), x)
    return d1 + d2


def _two_channel_battery(model, readings, x1, x2, config: ScenarioConfig,
                         use_complement: bool = True) -> dict:
    spec = SuperpositionSpec(x1, x2, config.w1, config.w2, config.tol)
    members = _grid_members(spec, config)
    eta = config.detector_noise
    a0 = degrade_reading(readings[0], eta) if eta > 0 else readings[0]
    a1 = degrade_reading(readings[1], eta) if eta > 0 else readings[1]

    worst_disagree = 0.0
    worst_both = 0.0
    worst_oracle = 0.0
    for x in members:
        worst_disagree = max(worst_disagree,
                             _disagreement(model, a0, a1, x, use_complement))
        both = m_eval(model, ReadingSet({0: a0, 1: a1}), x)
        worst_both = max(worst_both, abs(both - config.w1))
        if eta > 0:
            oracle = inclusion_exclusion_distribution(
                model, ReadingSet({0: a0, 1: a1}), x)
            direct = _disagreement(model, a0, a1, x, use_complement=True)
            worst_oracle = max(worst_oracle,
                               abs(direct - (oracle[(1, 0)] + oracle[(0, 1)])))
    if eta > 0:
        passed = worst_oracle <= config.tol and worst_disagree > config.tol
    else:
        passed = worst_disagree <= config.tol and worst_both <= config.tol
    return {
        "pass": passed,
        "residuals": {
            "max_disagreement": worst_disagree,
            "max_both_fire_deviation": worst_both,
            "oracle_mismatch": worst_oracle,
        },
        "expected_both_fire": config.w1,
        "detector_noise": eta,
        "spec": spec,
        "members": members,
    }


def run_fig1c(config: ScenarioConfig, pointer_pairs=None,
              use_complement: bool = True) -> dict:
    """Stacked detectors in one path: both fire (with the branch weight) or
    neither does; disagreement has probability zero."""
    model, readings, x1, x2 = fig1c_setup(config.tol, pointer_pairs)
    battery = _two_channel_battery(model, readings, x1, x2, config, use_complement)
    battery.pop("spec")
    battery.pop("members")
    return _finalize(battery, config)


def run_stern_gerlach(config: ScenarioConfig, pointer_pairs=None,
                      use_complement: bool = True) -> dict:
    """Spin-half branch measurement on two channels, with the full objectivity
    check and a sampled-trial comparison against the exact probabilities."""
    model, readings, up, down = stern_gerlach_setup(config.tol, pointer_pairs)
    battery = _two_channel_battery(model, readings, up, down, config, use_complement)
    spec = battery.pop("spec")
    members = battery.pop("members")

    theorem2 = verify_theorem2(model, 0, 1, readings[0], readings[1],
                               spec, members, tol=config.tol)
    sampling = {"trials": config.trials}
    sampling_ok = True
    if config.trials > 0 and config.detector_noise == 0.0:
        reading_set = ReadingSet(readings)
        member = members[0]
        records = sample_events(model, reading_set, member,
                                config.trials, config.seed)
        disagreements = sum(
            1 for r in records if r["outcomes"][0] != r["outcomes"][1])
        fired = sum(r["outcomes"][0] for r in records)
        freq = fired / config.trials
        sigma = float(np.sqrt(max(config.w1 * config.w2, 0.0) / config.trials))
        sampling = {
            "trials": config.trials,
            "disagreements": disagreements,
            "channel1_frequency": freq,
            "expected_frequency": config.w1,
            "binomial_sigma": sigma,
        }
        sampling_ok = disagreements == 0 and abs(freq - config.w1) <= max(3 * sigma, config.tol)
    battery["pass"] = bool(battery["pass"] and theorem2.passed and sampling_ok)
    battery["theorem2"] = theorem2.to_dict()
    battery["sampling"] = sampling
    return _finalize(battery, config)


def run_custom(config: ScenarioConfig) -> dict:
    """User-supplied branch states and channel layout from the config payload.

    Payload keys in `extra`: "x1", "x2" (matrix exchange format) and
    "channel_dims". Pointers default to the first two basis vectors of each
    channel. Runs the objectivity check on the member grid (pure branches) or
    the incoherent mixture (mixed branches).
    """
    extra = config.extra
    for key in ("x1", "x2", "channel_dims"):
        if key not in extra:
            raise ValidationError(f"custom scenario requires extra[{key!r}]")
    x1 = State(matrix_from_json(extra["x1"]), config.tol)
    x2 = State(matrix_from_json(extra["x2"]), config.tol)
    layout = ChannelLayout(tuple(int(d) for d in extra["channel_dims"]))
    pointers = [(basis_vector(d, 0), basis_vector(d, 1))
                for d in layout.channel_dims]
    model = build_premeasurement(x1, x2, layout, pointers,
                                 pad_remainder=bool(extra.get("pad_remainder", False)),
                                 tol=config.tol)
    readings = {mu: discriminating_reading(model, mu, x1, x2)
                for mu in range(layout.n_channels)}
    spec = SuperpositionSpec(x1, x2, config.w1, config.w2, config.tol)
    pure = x1.purity() > 1 - 1e-9 and x2.purity() > 1 - 1e-9
    members = _grid_members(spec, config) if pure else [spec.incoherent_mixture()]
    theorem2 = verify_theorem2(model, 0, 1, readings[0], readings[1],
                               spec, members, tol=config.tol)
    return _finalize({
        "pass": theorem2.passed,
        "theorem2": theorem2.to_dict(),
        "members_checked": len(members),
    }, config)


RUNNERS = {
    "fig1a_interference": run_fig1a,
    "fig1b_coincidence": run_fig1b,
    "fig1c_reduction": run_fig1c,
    "stern_gerlach": run_stern_gerlach,
    "custom": run_custom,
}


def run_scenario(config: ScenarioConfig) -> dict:
    return RUNNERS[config.scenario](config)
