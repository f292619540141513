"""Three-valued truth assignment over propositions and subspaces.

Factual values come from state membership.  Counterfactual values depend
on how the given subspace and the proposition's subspace sit inside the
declared semantic structure: pasted-lattice semantics makes every
well-formed query definite, while bare collection semantics leaves a
query without a truth value whenever no single context lattice contains
both subspaces.

The module also provides the integer-product constraint machinery used to
analyze conjunction valuations, plus the complementarity and probability
admissibility checks built on top of it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence, Union

from .hilbert import StateVector, Subspace
from .lattice import LatticeCollection, PastedLattice

__all__ = [
    "MAX_FREE_VARIABLES",
    "TruthValue",
    "Rule",
    "Atomic",
    "Conjunction",
    "Proposition",
    "HilbertLatticeMode",
    "CollectionMode",
    "SemanticsMode",
    "ValuationResult",
    "factual_value",
    "counterfactual_value",
    "ProductConstraint",
    "ConstraintSystem",
    "VariableCapError",
    "product_constraints_for_conjunction",
    "ComplementarityCheck",
    "UnvaluedPropositionError",
    "check_complementarity",
    "KolmogorovVerdict",
    "kolmogorov_admissibility",
    "apply_correspondence",
    "NONLOCALITY_NOTE",
]

MAX_FREE_VARIABLES = 20

PARTIAL_OVERLAP_WARNING = (
    "PartialOverlap: the given subspace is neither inside nor disjoint from the "
    "proposition's subspace; value defaults to false"
)

NONLOCALITY_NOTE = (
    "nonlocality: the value is copied across subsystems, so the remote "
    "measurement choice acts as if it were locally available"
)


class TruthValue(Enum):
    TRUE = "true"
    FALSE = "false"
    INDETERMINATE = "indeterminate"

    @classmethod
    def from_bool(cls, flag: bool) -> "TruthValue":
        return cls.TRUE if flag else cls.FALSE

    @property
    def is_definite(self) -> bool:
        return self is not TruthValue.INDETERMINATE

    def as_int(self) -> int:
        """Definite values as integers 1 and 0; indeterminate has no integer form."""
        if not self.is_definite:
            raise ValueError("indeterminate truth value has no integer form")
        return 1 if self is TruthValue.TRUE else 0

    def __str__(self) -> str:
        return self.value


class Rule(Enum):
    """Which valuation rule produced a result; carried for auditability."""

    FACTUAL = "factual"
    COMPARABLE = "comparable"
    DISJOINT = "disjoint"
    GAP = "gap"
    CORRESPONDENCE = "correspondence"
    FORCED = "forced"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, eq=False)
class Atomic:
    """Named proposition represented by a subspace."""

    name: str
    subspace: Subspace


@dataclass(frozen=True, eq=False)
class Conjunction:
    """Conjunction of two propositions; its subspace is the meet of theirs."""

    left: "Proposition"
    right: "Proposition"
    name: str = field(init=False)
    subspace: Subspace = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "name", f"({self.left.name} and {self.right.name})")
        object.__setattr__(self, "subspace", self.left.subspace.meet(self.right.subspace))


Proposition = Union[Atomic, Conjunction]


@dataclass(frozen=True, eq=False)
class HilbertLatticeMode:
    """Total semantics: any two subspaces of the pasted lattice are orderable."""

    pasted: PastedLattice


@dataclass(frozen=True, eq=False)
class CollectionMode:
    """Partial semantics: ordering exists only inside a shared context lattice."""

    collection: LatticeCollection


SemanticsMode = Union[HilbertLatticeMode, CollectionMode]


@dataclass(frozen=True)
class ValuationResult:
    value: TruthValue
    rule: Rule
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        gap = self.rule is Rule.GAP
        indeterminate = self.value is TruthValue.INDETERMINATE
        if gap != indeterminate:
            raise ValueError("indeterminate values pair exactly with the gap rule")


def factual_value(prop: Proposition, state: StateVector) -> ValuationResult:
    """True exactly when the state lies in the proposition's subspace."""
    if not state.is_normalized():
        raise ValueError("factual valuation requires a normalized state")
    return ValuationResult(TruthValue.from_bool(prop.subspace.contains(state)), Rule.FACTUAL)


def counterfactual_value(
    prop: Proposition, given: Subspace, mode: SemanticsMode
) -> ValuationResult:
    """Truth value the proposition would take were the state inside ``given``.

    Inclusion of ``given`` in the proposition's subspace yields true; a
    trivial intersection yields false.  Under collection semantics the query
    is indeterminate when no declared lattice contains both subspaces.  A
    pair that genuinely overlaps without inclusion is outside the two
    classic cases and defaults to false with an explicit warning.
    """
    if given.dim == 0:
        raise ValueError("counterfactual queries need a nonzero given subspace")
    if given.equals(prop.subspace):
        # The hypothetical state sits in the representing subspace itself, so
        # this is the factual case.
        return ValuationResult(TruthValue.TRUE, Rule.FACTUAL)
    if isinstance(mode, CollectionMode):
        homes = mode.collection.home_lattices(given, prop.subspace)
        if not homes:
            return ValuationResult(
                TruthValue.INDETERMINATE,
                Rule.GAP,
                ("no declared context lattice contains both subspaces",),
            )
    return _ordering_value(prop.subspace, given)


def _ordering_value(target: Subspace, given: Subspace) -> ValuationResult:
    if given.leq(target):
        return ValuationResult(TruthValue.TRUE, Rule.COMPARABLE)
    if given.meet(target).dim == 0:
        return ValuationResult(TruthValue.FALSE, Rule.DISJOINT)
    return ValuationResult(TruthValue.FALSE, Rule.DISJOINT, (PARTIAL_OVERLAP_WARNING,))


class VariableCapError(ValueError):
    """Too many free variables for exhaustive enumeration."""


class UnvaluedPropositionError(KeyError):
    """A proposition required by a check carries no value in the assignment."""


def _as_bit(value: "TruthValue | int | bool") -> int:
    if isinstance(value, TruthValue):
        return value.as_int()
    number = int(value)
    if number not in (0, 1):
        raise ValueError(f"truth constants must be 0 or 1, got {value!r}")
    return number


def _as_truth(value: "TruthValue | int | bool") -> TruthValue:
    if isinstance(value, TruthValue):
        return value
    return TruthValue.from_bool(bool(_as_bit(value)))


Factor = Union[str, int]


@dataclass(frozen=True)
class ProductConstraint:
    """Requires the integer product of the factors to equal 0 or 1."""

    factors: tuple[Factor, ...]
    equals: int

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError("a product constraint needs at least one factor")
        for f in self.factors:
            if not isinstance(f, str) and f not in (0, 1):
                raise ValueError(f"constant factors must be 0 or 1, got {f!r}")
        if self.equals not in (0, 1):
            raise ValueError(f"a product must equal 0 or 1, got {self.equals!r}")


class ConstraintSystem:
    """Named {0,1} truth variables plus product constraints over them."""

    def __init__(self) -> None:
        self._values: dict[str, int | None] = {}
        self._constraints: list[ProductConstraint] = []

    def declare(self, name: str, value: "TruthValue | int | None" = None) -> None:
        """Add a variable, optionally pinned to a definite value."""
        pinned = None if value is None else _as_bit(value)
        if name in self._values and self._values[name] is not None and pinned is None:
            return
        self._values[name] = pinned

    def pin(self, name: str, value: "TruthValue | int") -> None:
        self._values[name] = _as_bit(value)

    def require_product(
        self, factors: Sequence[Factor], equals: "TruthValue | int"
    ) -> None:
        """Constrain the product of the factors; unseen variables become free."""
        normalized: list[Factor] = []
        for f in factors:
            if isinstance(f, str):
                self._values.setdefault(f, None)
                normalized.append(f)
            else:
                normalized.append(_as_bit(f))
        self._constraints.append(ProductConstraint(tuple(normalized), _as_bit(equals)))

    @property
    def variables(self) -> dict[str, int | None]:
        return dict(self._values)

    @property
    def constraints(self) -> tuple[ProductConstraint, ...]:
        return tuple(self._constraints)

    def free_variables(self) -> list[str]:
        return [name for name, value in self._values.items() if value is None]

    def admissible_assignments(self) -> list[dict[str, int]]:
        """All {0,1} assignments to free variables satisfying every constraint.

        Pinned variables appear in each returned assignment.  Enumeration is
        exhaustive and deterministic (declaration order, 0 before 1).
        """
        free = self.free_variables()
        if len(free) > MAX_FREE_VARIABLES:
            raise VariableCapError(
                f"{len(free)} free variables exceed the cap of {MAX_FREE_VARIABLES}"
            )
        pinned = {name: value for name, value in self._values.items() if value is not None}
        admissible = []
        for bits in itertools.product((0, 1), repeat=len(free)):
            assignment = dict(pinned)
            assignment.update(zip(free, bits))
            if all(self._satisfied(c, assignment) for c in self._constraints):
                admissible.append(assignment)
        return admissible

    @staticmethod
    def _satisfied(constraint: ProductConstraint, assignment: Mapping[str, int]) -> bool:
        product = 1
        for factor in constraint.factors:
            product *= assignment[factor] if isinstance(factor, str) else factor
            if product == 0:
                break
        return product == constraint.equals


def product_constraints_for_conjunction(
    left: Proposition,
    right: Proposition,
    conjunction_value: "TruthValue | int",
    known: Mapping[str, "TruthValue | int"] | None = None,
) -> ConstraintSystem:
    """System stating that the conjunction's value is the integer product of its parts.

    Variables are named after the propositions; any already-computed values
    are pinned, the rest stay free.
    """
    system = ConstraintSystem()
    known = dict(known or {})
    for prop in (left, right):
        system.declare(prop.name, known.get(prop.name))
    system.require_product((left.name, right.name), conjunction_value)
    return system


@dataclass(frozen=True)
class ComplementarityCheck:
    """Outcome of a wave-like vs particle-like exclusivity check."""

    holds: bool
    vacuous: bool = False
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds


def check_complementarity(
    wave: Proposition,
    particle: Proposition,
    assignment: Mapping[str, "TruthValue | int"],
) -> ComplementarityCheck:
    """The two propositions must not both be true.

    An indeterminate value on either side makes the check vacuously pass,
    annotated as a gap.  A missing value is an error.
    """
    values = []
    for prop in (wave, particle):
        if prop.name not in assignment:
            raise UnvaluedPropositionError(prop.name)
        values.append(_as_truth(assignment[prop.name]))
    wave_value, particle_value = values
    if not (wave_value.is_definite and particle_value.is_definite):
        return ComplementarityCheck(
            True, vacuous=True, detail="gap: at least one side carries no truth value"
        )
    if wave_value is TruthValue.TRUE and particle_value is TruthValue.TRUE:
        return ComplementarityCheck(
            False, detail=f"violated: {wave.name} and {particle.name} are both true"
        )
    return ComplementarityCheck(True)


class KolmogorovVerdict(Enum):
    ADMISSIBLE = "admissible"
    INADMISSIBLE = "inadmissible"
    NOT_APPLICABLE = "not applicable"

    def __str__(self) -> str:
        return self.value


def kolmogorov_admissibility(
    outcome_values: Mapping[str, "TruthValue | int"],
) -> KolmogorovVerdict:
    """Read definite truth values over a sample space as probabilities.

    The probabilities of the outcomes must sum to one.  Indeterminate values
    leave no probabilities to speak of, so the verdict is "not applicable".
    """
    if not outcome_values:
        raise ValueError("the sample space must contain at least one outcome")
    values = [
        v if isinstance(v, TruthValue) else _as_truth(v) for v in outcome_values.values()
    ]
    if any(not v.is_definite for v in values):
        return KolmogorovVerdict.NOT_APPLICABLE
    total = sum(v.as_int() for v in values)
    return KolmogorovVerdict.ADMISSIBLE if total == 1 else KolmogorovVerdict.INADMISSIBLE


def apply_correspondence(plate_value: TruthValue) -> ValuationResult:
    """Transfer one subsystem's momentum-sign valuation to the other.

    Undefined for indeterminate input.  The result carries the nonlocality
    caveat: the transfer makes a remote measurement choice act locally.
    """
    if not plate_value.is_definite:
        raise ValueError("correspondence is undefined for an indeterminate value")
    return ValuationResult(plate_value, Rule.CORRESPONDENCE, (NONLOCALITY_NOTE,))
