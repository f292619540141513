"""Contexts and their Boolean lattices of invariant block subspaces.

A context is a resolution of the identity by two or more nontrivial,
pairwise-orthogonal projectors (its atoms).  Its invariant-subspace
lattice is realized as the set of direct sums of atom ranges, indexed by
atom subsets; meets, joins, and complements of lattice elements are then
exact index-set operations mirrored by the numerical subspace algebra.

Several lattices over one ambient space form a collection, and pasting a
collection merges canonically equal elements (at least the zero subspace
and the full space) into one structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .hilbert import DimensionMismatchError, Projector, Subspace, range_of
from .tolerances import TAU_OP

__all__ = [
    "MAX_CONTEXT_ATOMS",
    "ContextValidationError",
    "NontrivialAtomError",
    "NotOrthogonalError",
    "IncompleteResolutionError",
    "EnumerationCapError",
    "PartitionError",
    "Context",
    "validate_context",
    "LatticeElement",
    "InvariantSubspaceLattice",
    "lattice_of",
    "common_elements",
    "LatticeCollection",
    "PastedEntry",
    "PastedLattice",
    "paste",
    "context_from_partition",
]

MAX_CONTEXT_ATOMS = 16


class ContextValidationError(ValueError):
    """A context clause is violated; subclasses name the clause."""


class NontrivialAtomError(ContextValidationError):
    """An atom equals the zero operator or the identity."""

    def __init__(self, index: int, kind: str):
        self.index = index
        self.kind = kind
        super().__init__(f"atom {index} is trivial: it equals the {kind} operator")


class NotOrthogonalError(ContextValidationError):
    """Two atoms fail pairwise orthogonality."""

    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(f"atoms {i} and {j} are not orthogonal")


class IncompleteResolutionError(ContextValidationError):
    """The atoms do not sum to the identity."""

    def __init__(self, deviation: float):
        self.deviation = deviation
        super().__init__(
            f"atoms do not resolve the identity (max deviation {deviation:.3e})"
        )


class EnumerationCapError(ValueError):
    """Lattice enumeration would exceed the atom cap."""


class PartitionError(ValueError):
    """Invalid basis-index partition for a context."""


@dataclass(frozen=True, eq=False)
class Context:
    """Validated resolution of the identity.  Construction runs all checks."""

    id: str
    dim: int
    atoms: tuple[Projector, ...]
    atom_ranges: tuple[Subspace, ...] = field(init=False)

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if len(atoms) < 2:
            raise ContextValidationError("a context needs at least two atoms")
        eye = np.eye(self.dim, dtype=np.complex128)
        for idx, atom in enumerate(atoms):
            if atom.dim != self.dim:
                raise DimensionMismatchError(
                    f"atom {idx} has dimension {atom.dim}, context has {self.dim}"
                )
            if atom.is_zero():
                raise NontrivialAtomError(idx, "zero")
            if atom.is_identity():
                raise NontrivialAtomError(idx, "identity")
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                product = atoms[i].entries @ atoms[j].entries
                if float(np.max(np.abs(product))) > TAU_OP:
                    raise NotOrthogonalError(i, j)
        total = sum(atom.entries for atom in atoms)
        deviation = float(np.max(np.abs(total - eye)))
        if deviation > TAU_OP:
            raise IncompleteResolutionError(deviation)
        object.__setattr__(self, "atom_ranges", tuple(range_of(a) for a in atoms))

    @property
    def k(self) -> int:
        return len(self.atoms)

    def __repr__(self) -> str:
        return f"Context(id={self.id!r}, dim={self.dim}, k={self.k})"


def validate_context(dim: int, atoms: Sequence[Projector], context_id: str = "ctx") -> Context:
    """Build a context, raising a structured error naming any violated clause."""
    return Context(context_id, dim, tuple(atoms))


@dataclass(frozen=True, eq=False)
class LatticeElement:
    """Block subspace of a context, tagged by the atom subset that spans it."""

    atom_indices: frozenset[int]
    subspace: Subspace

    def __repr__(self) -> str:
        tags = ",".join(str(i) for i in sorted(self.atom_indices))
        return f"LatticeElement({{{tags}}}, dim={self.subspace.dim})"


@dataclass(frozen=True, eq=False)
class InvariantSubspaceLattice:
    """Boolean lattice of the block subspaces of one context.

    Elements are ordered by atom-subset bitmask, so index 0 is the zero
    subspace and the last index is the full space.
    """

    context: Context
    elements: tuple[LatticeElement, ...]

    @property
    def context_id(self) -> str:
        return self.context.id

    @property
    def dim(self) -> int:
        return self.context.dim

    @property
    def k(self) -> int:
        return self.context.k

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def element(self, atom_indices: Iterable[int]) -> LatticeElement:
        mask = 0
        for i in atom_indices:
            if not 0 <= i < self.k:
                raise IndexError(f"atom index {i} out of range")
            mask |= 1 << i
        return self.elements[mask]

    def zero(self) -> LatticeElement:
        return self.elements[0]

    def full(self) -> LatticeElement:
        return self.elements[-1]

    def meet_elements(self, a: LatticeElement, b: LatticeElement) -> LatticeElement:
        return self.element(a.atom_indices & b.atom_indices)

    def join_elements(self, a: LatticeElement, b: LatticeElement) -> LatticeElement:
        return self.element(a.atom_indices | b.atom_indices)

    def complement_element(self, a: LatticeElement) -> LatticeElement:
        return self.element(frozenset(range(self.k)) - a.atom_indices)

    def member_indices(self, s: Subspace) -> frozenset[int] | None:
        """Atom subset reconstructing ``s`` as a direct sum of per-atom meets, or None.

        ``s`` belongs to the lattice exactly when joining its meets with all
        atom ranges gives ``s`` back.
        """
        if s.ambient_dim != self.dim:
            raise DimensionMismatchError(
                f"subspace ambient {s.ambient_dim} does not match lattice dimension {self.dim}"
            )
        parts = [s.meet(r) for r in self.context.atom_ranges]
        rebuilt = Subspace.zero(self.dim)
        for part in parts:
            if part.dim:
                rebuilt = rebuilt.join(part)
        if rebuilt.equals(s):
            return frozenset(i for i, part in enumerate(parts) if part.dim)
        return None

    def is_member(self, s: Subspace) -> bool:
        return self.member_indices(s) is not None


def lattice_of(context: Context) -> InvariantSubspaceLattice:
    """Enumerate all block subspaces (direct sums of atom-range subsets)."""
    if context.k > MAX_CONTEXT_ATOMS:
        raise EnumerationCapError(
            f"context has {context.k} atoms, enumeration is capped at {MAX_CONTEXT_ATOMS}"
        )
    elements = []
    for mask in range(2**context.k):
        indices = frozenset(i for i in range(context.k) if mask >> i & 1)
        blocks = [context.atom_ranges[i].basis for i in sorted(indices)]
        if blocks:
            basis = np.hstack(blocks)
        else:
            basis = np.zeros((context.dim, 0), dtype=np.complex128)
        elements.append(LatticeElement(indices, Subspace(context.dim, basis)))
    return InvariantSubspaceLattice(context, tuple(elements))


def common_elements(
    first: InvariantSubspaceLattice, second: InvariantSubspaceLattice
) -> list[Subspace]:
    """Elements of the first lattice canonically equal to some element of the second."""
    if first.dim != second.dim:
        raise DimensionMismatchError(
            f"lattice dimensions differ: {first.dim} != {second.dim}"
        )
    shared = []
    for el in first.elements:
        if any(el.subspace.equals(other.subspace) for other in second.elements):
            shared.append(el.subspace)
    return shared


@dataclass(frozen=True, eq=False)
class LatticeCollection:
    """Several context lattices over one ambient space, one per context."""

    lattices: tuple[InvariantSubspaceLattice, ...]

    def __post_init__(self) -> None:
        lattices = tuple(self.lattices)
        object.__setattr__(self, "lattices", lattices)
        ids = [lat.context_id for lat in lattices]
        if len(set(ids)) != len(ids):
            raise ValueError("context ids in a collection must be unique")
        dims = {lat.dim for lat in lattices}
        if len(dims) > 1:
            raise DimensionMismatchError(
                f"collection mixes ambient dimensions: {sorted(dims)}"
            )

    @property
    def dim(self) -> int | None:
        return self.lattices[0].dim if self.lattices else None

    def __len__(self) -> int:
        return len(self.lattices)

    def __iter__(self):
        return iter(self.lattices)

    def by_id(self, context_id: str) -> InvariantSubspaceLattice:
        for lat in self.lattices:
            if lat.context_id == context_id:
                return lat
        raise KeyError(context_id)

    def lattices_containing(self, s: Subspace) -> tuple[str, ...]:
        return tuple(lat.context_id for lat in self.lattices if lat.is_member(s))

    def home_lattices(self, a: Subspace, b: Subspace) -> tuple[str, ...]:
        """Ids of member lattices containing both subspaces; empty means no
        single context can order the pair."""
        return tuple(
            lat.context_id
            for lat in self.lattices
            if lat.is_member(a) and lat.is_member(b)
        )


@dataclass(frozen=True, eq=False)
class PastedEntry:
    subspace: Subspace
    lattice_ids: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class PastedLattice:
    """Union of a collection's lattices with canonically equal elements merged."""

    collection: LatticeCollection
    entries: tuple[PastedEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def subspaces(self) -> tuple[Subspace, ...]:
        return tuple(entry.subspace for entry in self.entries)

    def lattices_containing(self, s: Subspace) -> tuple[str, ...]:
        for entry in self.entries:
            if entry.subspace.equals(s):
                return entry.lattice_ids
        return self.collection.lattices_containing(s)


def paste(collection: LatticeCollection) -> PastedLattice:
    """Merge the collection's lattices at their common elements."""
    merged: list[tuple[Subspace, list[str]]] = []
    for lat in collection.lattices:
        for el in lat.elements:
            for known_subspace, ids in merged:
                if known_subspace.equals(el.subspace):
                    ids.append(lat.context_id)
                    break
            else:
                merged.append((el.subspace, [lat.context_id]))
    entries = tuple(PastedEntry(s, tuple(ids)) for s, ids in merged)
    return PastedLattice(collection, entries)


def context_from_partition(
    basis: np.ndarray,
    partition: Sequence[Iterable[int]],
    context_id: str = "ctx",
) -> Context:
    """Context whose atoms project onto spans of basis-column blocks.

    The partition blocks must be nonempty, disjoint, and cover every index;
    at least two blocks are required so every atom is nontrivial.
    """
    matrix = np.asarray(basis, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise PartitionError(f"basis must be a square matrix, got shape {matrix.shape}")
    dim = matrix.shape[0]
    gram = matrix.conj().T @ matrix
    if float(np.max(np.abs(gram - np.eye(dim)))) > TAU_OP:
        raise PartitionError("basis columns are not orthonormal within tolerance")
    blocks = [sorted(set(int(i) for i in block)) for block in partition]
    if len(blocks) < 2:
        raise PartitionError("a partition needs at least two blocks")
    seen: set[int] = set()
    for block in blocks:
        if not block:
            raise PartitionError("partition blocks must be nonempty")
        for i in block:
            if not 0 <= i < dim:
                raise PartitionError(f"index {i} out of range for dimension {dim}")
            if i in seen:
                raise PartitionError(f"index {i} appears in more than one block")
            seen.add(i)
    if seen != set(range(dim)):
        missing = sorted(set(range(dim)) - seen)
        raise PartitionError(f"partition does not cover indices {missing}")
    atoms = []
    for block in blocks:
        cols = matrix[:, block]
        atoms.append(Projector(cols @ cols.conj().T))
    return validate_context(dim, atoms, context_id)
