"""Built-in double-slit EPR scenario: a movable plate coupled to a particle.

Each subsystem gets a position basis (computational) and a momentum basis
(its discrete Fourier transform), which are mutually unbiased.  Position
lives on an index interval X; momentum sign is encoded by a partition of
frequency indices into positive, negative, and signless blocks.  The
combined system is the tensor product.

``derive_paradox`` runs the unresolved counterfactual chain under total
(pasted-lattice) semantics: after a position measurement the momentum-sign
propositions of the plate come out false, the joint momentum propositions
come out false, and the particle's own momentum signs are left free, so an
admissible integer-product assignment exists in which the particle both
sits in the position interval and has a definite momentum sign.  The three
``resolve_by_*`` pipelines each defuse that assignment in a different way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .hilbert import StateVector, Subspace
from .lattice import (
    Context,
    InvariantSubspaceLattice,
    LatticeCollection,
    PastedLattice,
    context_from_partition,
    lattice_of,
    paste,
)
from .tolerances import TENSOR_DIM_CAP
from .valuation import (
    Atomic,
    CollectionMode,
    ComplementarityCheck,
    Conjunction,
    ConstraintSystem,
    HilbertLatticeMode,
    KolmogorovVerdict,
    Proposition,
    Rule,
    SemanticsMode,
    TruthValue,
    ValuationResult,
    apply_correspondence,
    check_complementarity,
    counterfactual_value,
    factual_value,
    kolmogorov_admissibility,
)

__all__ = [
    "MUB_TOL",
    "MODE_HILBERT",
    "MODE_COLLECTION",
    "fourier_basis",
    "SignConvention",
    "SubsystemModel",
    "ScenarioConfig",
    "SystemBundle",
    "Scenario",
    "build_scenario",
    "MeasuredState",
    "run_position_measurement",
    "PipelineStep",
    "ParadoxReport",
    "derive_paradox",
    "resolve_by_correspondence",
    "resolve_by_kolmogorov",
    "resolve_by_gaps",
    "run_pipeline",
]

MUB_TOL = 1e-12

MODE_HILBERT = "hilbert_lattice"
MODE_COLLECTION = "collection"

RESOLUTION_NONE = "none"
RESOLUTION_CORRESPONDENCE = "correspondence"
RESOLUTION_KOLMOGOROV = "kolmogorov"
RESOLUTION_GAPS = "gaps"

NONLOCALITY_ANNOTATION = (
    "correspondence forces the particle's momentum-sign values to equal the "
    "plate's even though the plate is measured after the interaction; locality "
    "does not survive this"
)

KOLMOGOROV_WITHDRAWAL = (
    "momentum-sign counterfactuals withdrawn: read as probabilities over the "
    "two-outcome sample space they sum to 0 instead of 1"
)

KOLMOGOROV_CAVEAT = (
    "probabilistic admissibility is an extra assumption layered onto the "
    "valuation rules; truth values are not probabilities by themselves"
)

GAP_ANNOTATION = (
    "no declared context lattice contains both a position subspace and a "
    "momentum-sign subspace, so every cross-context ordering is undefined and "
    "the chain never starts"
)


def fourier_basis(dim: int) -> np.ndarray:
    """DFT matrix with entry (j, k) = exp(2*pi*i*j*k/dim)/sqrt(dim)."""
    j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    return np.exp(2j * np.pi * j * k / dim) / np.sqrt(dim)


@dataclass(frozen=True)
class SignConvention:
    """Partition of frequency indices into positive, negative, and signless blocks."""

    positive: tuple[int, ...]
    negative: tuple[int, ...]
    excluded: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "positive", tuple(sorted(set(self.positive))))
        object.__setattr__(self, "negative", tuple(sorted(set(self.negative))))
        object.__setattr__(self, "excluded", tuple(sorted(set(self.excluded))))
        if not self.positive or not self.negative:
            raise ValueError("positive and negative frequency sets must be nonempty")

    def validate_for(self, dim: int) -> None:
        blocks = (set(self.positive), set(self.negative), set(self.excluded))
        union: set[int] = set()
        for block in blocks:
            if union & block:
                raise ValueError("sign convention blocks must be disjoint")
            union |= block
        if union != set(range(dim)):
            raise ValueError(
                f"sign convention must partition all {dim} frequency indices"
            )

    @classmethod
    def default(cls, dim: int) -> "SignConvention":
        """One representative frequency per momentum sign.

        The fundamental frequency stands for positive momentum and its
        conjugate for negative momentum; all other frequencies carry no
        sign.  Single-frequency sign subspaces have full position support,
        so they intersect every proper position interval trivially at any
        even dimension.
        """
        signless = tuple(i for i in range(dim) if i not in (1, dim - 1))
        return cls((1,), (dim - 1,), signless)


@dataclass(frozen=True, eq=False)
class SubsystemModel:
    """One subsystem with Fourier-paired position and momentum bases."""

    name: str
    dim: int
    position_basis: np.ndarray
    momentum_basis: np.ndarray

    @classmethod
    def build(cls, name: str, dim: int) -> "SubsystemModel":
        if dim < 4 or dim % 2 != 0:
            raise ValueError(f"subsystem dimension must be even and >= 4, got {dim}")
        position = np.eye(dim, dtype=np.complex128)
        momentum = fourier_basis(dim)
        overlaps = np.abs(position.conj().T @ momentum) ** 2
        if float(np.max(np.abs(overlaps - 1.0 / dim))) > MUB_TOL:
            raise ValueError("position and momentum bases are not mutually unbiased")
        return cls(name, dim, position, momentum)


def _default_interval_error(interval: Sequence[int], dim: int) -> str | None:
    indices = sorted(set(int(i) for i in interval))
    if not indices:
        return "the position interval must be nonempty"
    if indices[0] < 0 or indices[-1] >= dim:
        return f"interval indices must lie in 0..{dim - 1}"
    if len(indices) >= dim:
        return "the position interval must be a proper subset of the index range"
    return None


@dataclass(frozen=True)
class ScenarioConfig:
    """Desk-scale configuration: dimensions, interval, signs, semantics, toggles."""

    dim_plate: int = 4
    dim_particle: int = 4
    interval: tuple[int, ...] = (0, 1)
    mode: str = MODE_HILBERT
    correspondence: bool = False
    kolmogorov: bool = False
    plate_signs: SignConvention | None = None
    particle_signs: SignConvention | None = None
    plate_amplitudes: tuple[complex, ...] | None = None
    particle_amplitudes: tuple[complex, ...] | None = None

    def __post_init__(self) -> None:
        interval = tuple(sorted(set(int(i) for i in self.interval)))
        object.__setattr__(self, "interval", interval)
        for label, dim in (("plate", self.dim_plate), ("particle", self.dim_particle)):
            if dim < 4 or dim % 2 != 0:
                raise ValueError(f"{label} dimension must be even and >= 4, got {dim}")
        if self.dim_plate * self.dim_particle > TENSOR_DIM_CAP:
            raise ValueError(
                f"combined dimension {self.dim_plate * self.dim_particle} exceeds "
                f"the cap {TENSOR_DIM_CAP}"
            )
        for dim in (self.dim_plate, self.dim_particle):
            problem = _default_interval_error(interval, dim)
            if problem:
                raise ValueError(problem)
        if self.mode not in (MODE_HILBERT, MODE_COLLECTION):
            raise ValueError(f"unknown semantics mode {self.mode!r}")
        if self.correspondence and self.kolmogorov:
            raise ValueError("the correspondence and kolmogorov toggles are exclusive")
        plate_signs = self.plate_signs or SignConvention.default(self.dim_plate)
        particle_signs = self.particle_signs or SignConvention.default(self.dim_particle)
        plate_signs.validate_for(self.dim_plate)
        particle_signs.validate_for(self.dim_particle)
        object.__setattr__(self, "plate_signs", plate_signs)
        object.__setattr__(self, "particle_signs", particle_signs)
        for label, amps in (
            ("plate", self.plate_amplitudes),
            ("particle", self.particle_amplitudes),
        ):
            if amps is not None and len(amps) != len(interval):
                raise ValueError(
                    f"{label} amplitudes must match the interval size {len(interval)}"
                )


@dataclass(frozen=True, eq=False)
class SystemBundle:
    """Contexts, lattices, and semantic modes for one system."""

    name: str
    dim: int
    position_context: Context
    momentum_context: Context
    collection: LatticeCollection
    pasted: PastedLattice

    def mode(self, mode_name: str) -> SemanticsMode:
        if mode_name == MODE_HILBERT:
            return HilbertLatticeMode(self.pasted)
        return CollectionMode(self.collection)

    @property
    def lattices(self) -> tuple[InvariantSubspaceLattice, ...]:
        return self.collection.lattices


@dataclass(frozen=True, eq=False)
class Scenario:
    """All built artifacts: subsystems, subspaces, propositions, contexts."""

    config: ScenarioConfig
    plate: SubsystemModel
    particle: SubsystemModel
    plate_x: Subspace
    plate_p_plus: Subspace
    plate_p_minus: Subspace
    particle_x: Subspace
    particle_p_plus: Subspace
    particle_p_minus: Subspace
    combined_x: Subspace
    combined_p_plus: Subspace
    combined_p_minus: Subspace
    prop_plate_x: Atomic
    prop_plate_p_plus: Atomic
    prop_plate_p_minus: Atomic
    prop_particle_x: Atomic
    prop_particle_p_plus: Atomic
    prop_particle_p_minus: Atomic
    conj_plus: Conjunction
    conj_minus: Conjunction
    plate_system: SystemBundle
    particle_system: SystemBundle
    combined_system: SystemBundle


def _system_bundle(
    name: str,
    position_basis: np.ndarray,
    momentum_basis: np.ndarray,
    position_blocks: Sequence[Sequence[int]],
    momentum_blocks: Sequence[Sequence[int]],
) -> SystemBundle:
    position_context = context_from_partition(
        position_basis, position_blocks, f"{name}:position"
    )
    momentum_context = context_from_partition(
        momentum_basis, momentum_blocks, f"{name}:momentum"
    )
    collection = LatticeCollection(
        (lattice_of(position_context), lattice_of(momentum_context))
    )
    return SystemBundle(
        name=name,
        dim=position_context.dim,
        position_context=position_context,
        momentum_context=momentum_context,
        collection=collection,
        pasted=paste(collection),
    )


def _pair_indices(left: Sequence[int], right: Sequence[int], right_dim: int) -> list[int]:
    return [a * right_dim + b for a in left for b in right]


def build_scenario(config: ScenarioConfig) -> Scenario:
    """Construct subsystems, subspaces, propositions, and per-system contexts."""
    plate = SubsystemModel.build("plate1", config.dim_plate)
    particle = SubsystemModel.build("particle", config.dim_particle)
    interval = list(config.interval)
    p_signs = config.plate_signs
    q_signs = config.particle_signs
    assert p_signs is not None and q_signs is not None

    def complement(indices: Sequence[int], dim: int) -> list[int]:
        chosen = set(indices)
        return [i for i in range(dim) if i not in chosen]

    plate_x = Subspace.span_of_columns(plate.position_basis, interval)
    particle_x = Subspace.span_of_columns(particle.position_basis, interval)
    plate_p_plus = Subspace.span_of_columns(plate.momentum_basis, p_signs.positive)
    plate_p_minus = Subspace.span_of_columns(plate.momentum_basis, p_signs.negative)
    particle_p_plus = Subspace.span_of_columns(particle.momentum_basis, q_signs.positive)
    particle_p_minus = Subspace.span_of_columns(particle.momentum_basis, q_signs.negative)

    combined_x = plate_x.tensor(particle_x)
    combined_p_plus = plate_p_plus.tensor(particle_p_plus)
    combined_p_minus = plate_p_minus.tensor(particle_p_minus)

    plate_full = Subspace.full(config.dim_plate)
    particle_full = Subspace.full(config.dim_particle)

    prop_plate_x = Atomic("plate1_X", plate_x)
    prop_plate_p_plus = Atomic("plate1_P+", plate_p_plus)
    prop_plate_p_minus = Atomic("plate1_P-", plate_p_minus)
    prop_particle_x = Atomic("particle_X", particle_x)
    prop_particle_p_plus = Atomic("particle_P+", particle_p_plus)
    prop_particle_p_minus = Atomic("particle_P-", particle_p_minus)

    # Single-subsystem momentum propositions lifted to the combined space;
    # the meet of the liftings is the joint momentum-sign subspace.
    lift_plate_plus = Atomic("plate1_P+", plate_p_plus.tensor(particle_full))
    lift_plate_minus = Atomic("plate1_P-", plate_p_minus.tensor(particle_full))
    lift_particle_plus = Atomic("particle_P+", plate_full.tensor(particle_p_plus))
    lift_particle_minus = Atomic("particle_P-", plate_full.tensor(particle_p_minus))
    conj_plus = Conjunction(lift_plate_plus, lift_particle_plus)
    conj_minus = Conjunction(lift_plate_minus, lift_particle_minus)

    plate_system = _system_bundle(
        "plate1",
        plate.position_basis,
        plate.momentum_basis,
        [interval, complement(interval, config.dim_plate)],
        [p_signs.positive, p_signs.negative, p_signs.excluded],
    )
    particle_system = _system_bundle(
        "particle",
        particle.position_basis,
        particle.momentum_basis,
        [interval, complement(interval, config.dim_particle)],
        [q_signs.positive, q_signs.negative, q_signs.excluded],
    )

    dq = config.dim_particle
    combined_dim = config.dim_plate * dq
    combined_x_indices = _pair_indices(interval, interval, dq)
    combined_plus_indices = _pair_indices(p_signs.positive, q_signs.positive, dq)
    combined_minus_indices = _pair_indices(p_signs.negative, q_signs.negative, dq)
    momentum_rest = [
        i
        for i in range(combined_dim)
        if i not in set(combined_plus_indices) | set(combined_minus_indices)
    ]
    combined_system = _system_bundle(
        "combined",
        np.eye(combined_dim, dtype=np.complex128),
        np.kron(plate.momentum_basis, particle.momentum_basis),
        [combined_x_indices, complement(combined_x_indices, combined_dim)],
        [combined_plus_indices, combined_minus_indices, momentum_rest],
    )

    return Scenario(
        config=config,
        plate=plate,
        particle=particle,
        plate_x=plate_x,
        plate_p_plus=plate_p_plus,
        plate_p_minus=plate_p_minus,
        particle_x=particle_x,
        particle_p_plus=particle_p_plus,
        particle_p_minus=particle_p_minus,
        combined_x=combined_x,
        combined_p_plus=combined_p_plus,
        combined_p_minus=combined_p_minus,
        prop_plate_x=prop_plate_x,
        prop_plate_p_plus=prop_plate_p_plus,
        prop_plate_p_minus=prop_plate_p_minus,
        prop_particle_x=prop_particle_x,
        prop_particle_p_plus=prop_particle_p_plus,
        prop_particle_p_minus=prop_particle_p_minus,
        conj_plus=conj_plus,
        conj_minus=conj_minus,
        plate_system=plate_system,
        particle_system=particle_system,
        combined_system=combined_system,
    )


@dataclass(frozen=True, eq=False)
class MeasuredState:
    """Representative states after the plate's position is found in the interval."""

    plate: StateVector
    particle: StateVector
    combined: StateVector


def _interval_state(
    dim: int, interval: Sequence[int], amplitudes: Sequence[complex] | None
) -> StateVector:
    if amplitudes is None:
        return StateVector.uniform_over(dim, interval)
    full = np.zeros(dim, dtype=np.complex128)
    for index, amp in zip(interval, amplitudes):
        full[index] = amp
    return StateVector(full).normalize()


def run_position_measurement(scenario: Scenario) -> MeasuredState:
    """States inside the position-interval subspaces (uniform by default)."""
    cfg = scenario.config
    plate_state = _interval_state(cfg.dim_plate, cfg.interval, cfg.plate_amplitudes)
    particle_state = _interval_state(
        cfg.dim_particle, cfg.interval, cfg.particle_amplitudes
    )
    return MeasuredState(plate_state, particle_state, plate_state.tensor(particle_state))


@dataclass(frozen=True)
class PipelineStep:
    label: str
    subject: str
    result: ValuationResult

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "subject": self.subject,
            "value": str(self.result.value),
            "rule": str(self.result.rule),
            "warnings": list(self.result.warnings),
        }


@dataclass(frozen=True, eq=False)
class ParadoxReport:
    """Full audit of one pipeline run: steps, assignments, verdicts, notes."""

    mode: str
    resolution: str
    steps: tuple[PipelineStep, ...]
    assignments: tuple[Mapping[str, int], ...]
    paradox_flag: bool
    complementarity: ComplementarityCheck
    annotations: tuple[str, ...]
    surviving: Mapping[str, TruthValue] | None = None
    kolmogorov_verdict: KolmogorovVerdict | None = None

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "resolution": self.resolution,
            "steps": [step.as_dict() for step in self.steps],
            "assignments": [dict(sorted(a.items())) for a in self.assignments],
            "paradox": self.paradox_flag,
            "complementarity": {
                "holds": self.complementarity.holds,
                "vacuous": self.complementarity.vacuous,
                "detail": self.complementarity.detail,
            },
            "annotations": list(self.annotations),
            "surviving": (
                None
                if self.surviving is None
                else {name: str(value) for name, value in sorted(self.surviving.items())}
            ),
            "kolmogorov": (
                None if self.kolmogorov_verdict is None else str(self.kolmogorov_verdict)
            ),
        }


def _factual_steps(scenario: Scenario, states: MeasuredState) -> list[PipelineStep]:
    return [
        PipelineStep(
            "factual position of plate1",
            scenario.prop_plate_x.name,
            factual_value(scenario.prop_plate_x, states.plate),
        ),
        PipelineStep(
            "factual position of particle",
            scenario.prop_particle_x.name,
            factual_value(scenario.prop_particle_x, states.particle),
        ),
    ]


def _momentum_steps(scenario: Scenario, mode_name: str) -> list[PipelineStep]:
    plate_mode = scenario.plate_system.mode(mode_name)
    combined_mode = scenario.combined_system.mode(mode_name)
    steps = []
    for prop in (scenario.prop_plate_p_plus, scenario.prop_plate_p_minus):
        steps.append(
            PipelineStep(
                "counterfactual momentum sign of plate1",
                prop.name,
                counterfactual_value(prop, scenario.plate_x, plate_mode),
            )
        )
    for conj in (scenario.conj_plus, scenario.conj_minus):
        steps.append(
            PipelineStep(
                "counterfactual joint momentum sign",
                conj.name,
                counterfactual_value(conj, scenario.combined_x, combined_mode),
            )
        )
    return steps


def _exclusivity_step(scenario: Scenario, states: MeasuredState) -> PipelineStep:
    both_signs = Conjunction(scenario.prop_particle_p_plus, scenario.prop_particle_p_minus)
    return PipelineStep(
        "factual joint momentum signs of particle",
        both_signs.name,
        factual_value(both_signs, states.particle),
    )


def _value_of(steps: Sequence[PipelineStep], subject: str) -> TruthValue:
    for step in steps:
        if step.subject == subject:
            return step.result.value
    raise KeyError(subject)


def _product_system(scenario: Scenario, steps: Sequence[PipelineStep]) -> ConstraintSystem:
    """Integer-product constraints tying the joint valuations to the factors."""
    system = ConstraintSystem()
    system.declare("plate1_X", _value_of(steps, "plate1_X"))
    system.declare("particle_X", _value_of(steps, "particle_X"))
    system.declare("plate1_P+", _value_of(steps, "plate1_P+"))
    system.declare("plate1_P-", _value_of(steps, "plate1_P-"))
    system.declare("particle_P+")
    system.declare("particle_P-")
    system.require_product(
        ("plate1_P+", "particle_P+"), _value_of(steps, "(plate1_P+ and particle_P+)")
    )
    system.require_product(
        ("plate1_P-", "particle_P-"), _value_of(steps, "(plate1_P- and particle_P-)")
    )
    system.require_product(
        ("particle_P+", "particle_P-"),
        _value_of(steps, "(particle_P+ and particle_P-)"),
    )
    return system


def _paradox_scan(
    scenario: Scenario, assignments: Sequence[Mapping[str, int]]
) -> tuple[bool, ComplementarityCheck]:
    """Does any admissible assignment claim path knowledge inside the interval?"""
    violation: ComplementarityCheck | None = None
    for assignment in assignments:
        for particle_prop in (scenario.prop_particle_p_plus, scenario.prop_particle_p_minus):
            if particle_prop.name not in assignment:
                continue
            verdict = check_complementarity(
                scenario.prop_particle_x, particle_prop, assignment
            )
            if not verdict.holds:
                violation = verdict
                break
        if violation:
            break
    if violation:
        return True, violation
    return False, ComplementarityCheck(
        True, detail="no admissible assignment asserts both behaviors"
    )


def _require_mode(scenario: Scenario, expected: str) -> None:
    actual = scenario.config.mode
    if actual != expected:
        raise ValueError(
            f"pipeline requires {expected!r} semantics, the scenario declares {actual!r}"
        )


def derive_paradox(scenario: Scenario) -> ParadoxReport:
    """Unresolved chain under total semantics; collection mode routes to the
    gap resolution instead."""
    _require_mode(scenario, MODE_HILBERT)
    states = run_position_measurement(scenario)
    steps = _factual_steps(scenario, states)
    steps += _momentum_steps(scenario, MODE_HILBERT)
    steps.append(_exclusivity_step(scenario, states))
    system = _product_system(scenario, steps)
    assignments = tuple(system.admissible_assignments())
    flag, verdict = _paradox_scan(scenario, assignments)
    annotations = []
    if flag:
        annotations.append(
            "an admissible assignment gives the particle a definite momentum sign "
            "while it sits in the position interval: path knowledge coexists with "
            "the interference sub-ensemble"
        )
    return ParadoxReport(
        mode=MODE_HILBERT,
        resolution=RESOLUTION_NONE,
        steps=tuple(steps),
        assignments=assignments,
        paradox_flag=flag,
        complementarity=verdict,
        annotations=tuple(annotations),
    )


def resolve_by_correspondence(scenario: Scenario) -> ParadoxReport:
    """Copy the plate's momentum-sign valuations onto the particle."""
    _require_mode(scenario, MODE_HILBERT)
    states = run_position_measurement(scenario)
    steps = _factual_steps(scenario, states)
    steps += _momentum_steps(scenario, MODE_HILBERT)
    steps.append(_exclusivity_step(scenario, states))
    for source, target in (
        ("plate1_P+", scenario.prop_particle_p_plus),
        ("plate1_P-", scenario.prop_particle_p_minus),
    ):
        transferred = apply_correspondence(_value_of(steps, source))
        steps.append(
            PipelineStep("particle momentum sign by correspondence", target.name, transferred)
        )
    system = _product_system(scenario, steps)
    system.pin("particle_P+", _value_of(steps, "particle_P+"))
    system.pin("particle_P-", _value_of(steps, "particle_P-"))
    assignments = tuple(system.admissible_assignments())
    flag, verdict = _paradox_scan(scenario, assignments)
    return ParadoxReport(
        mode=MODE_HILBERT,
        resolution=RESOLUTION_CORRESPONDENCE,
        steps=tuple(steps),
        assignments=assignments,
        paradox_flag=flag,
        complementarity=verdict,
        annotations=(NONLOCALITY_ANNOTATION,),
    )


def resolve_by_kolmogorov(scenario: Scenario) -> ParadoxReport:
    """Withdraw the momentum-sign counterfactuals as probabilistically inadmissible."""
    _require_mode(scenario, MODE_HILBERT)
    states = run_position_measurement(scenario)
    steps = _factual_steps(scenario, states)
    steps += _momentum_steps(scenario, MODE_HILBERT)
    steps.append(_exclusivity_step(scenario, states))
    verdict = kolmogorov_admissibility(
        {
            "positive": _value_of(steps, "plate1_P+"),
            "negative": _value_of(steps, "plate1_P-"),
        }
    )
    surviving = {"particle_X": _value_of(steps, "particle_X")}
    system = ConstraintSystem()
    system.declare("particle_X", surviving["particle_X"])
    assignments = tuple(system.admissible_assignments())
    flag, comp = _paradox_scan(scenario, assignments)
    return ParadoxReport(
        mode=MODE_HILBERT,
        resolution=RESOLUTION_KOLMOGOROV,
        steps=tuple(steps),
        assignments=assignments,
        paradox_flag=flag,
        complementarity=ComplementarityCheck(
            comp.holds,
            comp.vacuous,
            detail="momentum-sign propositions carry no surviving valuation",
        ),
        annotations=(KOLMOGOROV_WITHDRAWAL, KOLMOGOROV_CAVEAT),
        surviving=surviving,
        kolmogorov_verdict=verdict,
    )


def resolve_by_gaps(scenario: Scenario) -> ParadoxReport:
    """Collection semantics: every cross-context counterfactual is indeterminate."""
    _require_mode(scenario, MODE_COLLECTION)
    states = run_position_measurement(scenario)
    steps = _factual_steps(scenario, states)
    steps += _momentum_steps(scenario, MODE_COLLECTION)
    particle_mode = scenario.particle_system.mode(MODE_COLLECTION)
    for prop in (scenario.prop_particle_p_plus, scenario.prop_particle_p_minus):
        steps.append(
            PipelineStep(
                "counterfactual momentum sign of particle",
                prop.name,
                counterfactual_value(prop, scenario.particle_x, particle_mode),
            )
        )
    pseudo_assignment: dict[str, TruthValue] = {
        "particle_X": _value_of(steps, "particle_X"),
        "particle_P+": _value_of(steps, "particle_P+"),
        "particle_P-": _value_of(steps, "particle_P-"),
    }
    comp = check_complementarity(
        scenario.prop_particle_x, scenario.prop_particle_p_plus, pseudo_assignment
    )
    return ParadoxReport(
        mode=MODE_COLLECTION,
        resolution=RESOLUTION_GAPS,
        steps=tuple(steps),
        assignments=(),
        paradox_flag=False,
        complementarity=comp,
        annotations=(GAP_ANNOTATION,),
    )


def run_pipeline(config: ScenarioConfig) -> ParadoxReport:
    """Build the scenario and dispatch to the matching pipeline."""
    scenario = build_scenario(config)
    if config.mode == MODE_COLLECTION:
        return resolve_by_gaps(scenario)
    if config.correspondence:
        return resolve_by_correspondence(scenario)
    if config.kolmogorov:
        return resolve_by_kolmogorov(scenario)
    return derive_paradox(scenario)
