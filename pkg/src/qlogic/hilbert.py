"""States, projectors, and subspace algebra on finite-dimensional complex Hilbert spaces.

A subspace is held as an orthonormal spanning set (matrix columns); the
zero-dimensional subspace has an empty basis.  Rank decisions always go
through singular values relative to the largest one, intersections are
computed as the null space of a stacked matrix, and equality of subspaces
is mutual inclusion, never basis comparison.

Everything here is immutable after construction and every operation is a
pure function, so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .tolerances import TAU_NORM, TAU_OP, TAU_RANK, TENSOR_DIM_CAP, member_tol

__all__ = [
    "DimensionMismatchError",
    "NotAProjectorError",
    "ZeroStateError",
    "TensorDimensionCapError",
    "StateVector",
    "Operator",
    "Projector",
    "Subspace",
    "subspace_from_spanning_set",
    "projector_of",
    "range_of",
]

_ZERO_NORM_FLOOR = 1e-12


class DimensionMismatchError(ValueError):
    """Operands live in spaces of different dimension."""


class NotAProjectorError(ValueError):
    """Matrix is not self-adjoint idempotent within tolerance."""


class ZeroStateError(ValueError):
    """The zero vector cannot serve as a physical state."""


class TensorDimensionCapError(ValueError):
    """Tensor product would exceed the configured ambient-dimension cap."""


def _freeze(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=np.complex128, copy=True, order="C")
    out.flags.writeable = False
    return out


def _check_same_dim(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(f"ambient dimensions differ: {a} != {b}")


def _orthonormal_columns(matrix: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the column space; rank by relative singular values."""
    if matrix.shape[1] == 0:
        return matrix
    u, s, _ = np.linalg.svd(matrix, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        return matrix[:, :0]
    rank = int(np.sum(s > TAU_RANK * s[0]))
    return u[:, :rank]


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state of a finite-dimensional system, stored as complex amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size == 0:
            raise ValueError("a state needs at least one amplitude")
        object.__setattr__(self, "amplitudes", _freeze(amps))

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = TAU_NORM) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalize(self) -> "StateVector":
        """Unit-norm copy; the zero vector is rejected, it is not a physical state."""
        n = self.norm()
        if n < _ZERO_NORM_FLOOR:
            raise ZeroStateError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / n)

    def tensor(self, other: "StateVector") -> "StateVector":
        new_dim = self.dim * other.dim
        if new_dim > TENSOR_DIM_CAP:
            raise TensorDimensionCapError(
                f"tensor product dimension {new_dim} exceeds the cap {TENSOR_DIM_CAP}"
            )
        return StateVector(np.kron(self.amplitudes, other.amplitudes))

    @classmethod
    def basis_state(cls, dim: int, index: int) -> "StateVector":
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} out of range for dimension {dim}")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def uniform_over(cls, dim: int, indices: Iterable[int]) -> "StateVector":
        """Normalized equal-weight superposition of the given basis states."""
        amps = np.zeros(dim, dtype=np.complex128)
        for i in indices:
            if not 0 <= i < dim:
                raise ValueError(f"index {i} out of range for dimension {dim}")
            amps[i] = 1.0
        return cls(amps).normalize()

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Operator:
    """Square complex matrix acting on a finite-dimensional space."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator entries must be square, got shape {m.shape}")
        object.__setattr__(self, "entries", _freeze(m))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def identity(cls, dim: int) -> "Operator":
        return cls(np.eye(dim, dtype=np.complex128))

    @classmethod
    def zero(cls, dim: int) -> "Operator":
        return cls(np.zeros((dim, dim), dtype=np.complex128))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Projector(Operator):
    """Self-adjoint idempotent operator; validated at construction."""

    def __post_init__(self) -> None:
        super().__post_init__()
        m = self.entries
        if float(np.max(np.abs(m - m.conj().T))) > TAU_OP:
            raise NotAProjectorError("matrix is not self-adjoint within tolerance")
        if float(np.max(np.abs(m @ m - m))) > TAU_OP:
            raise NotAProjectorError("matrix is not idempotent within tolerance")

    def is_zero(self) -> bool:
        return float(np.max(np.abs(self.entries))) <= TAU_OP

    def is_identity(self) -> bool:
        return float(np.max(np.abs(self.entries - np.eye(self.dim)))) <= TAU_OP


@dataclass(frozen=True, eq=False)
class Subspace:
    """Closed linear subspace, held as orthonormal basis columns.

    ``basis`` has shape ``(ambient_dim, r)``; ``r == 0`` encodes the
    zero-dimensional subspace.  Two subspaces are canonically equal when
    each is contained in the other (``equals``), regardless of basis.
    """

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.basis, dtype=np.complex128)
        if b.ndim != 2 or b.shape[0] != self.ambient_dim:
            raise ValueError(
                f"basis shape {b.shape} does not match ambient dimension {self.ambient_dim}"
            )
        if b.shape[1] > self.ambient_dim:
            raise ValueError("more basis vectors than the ambient dimension allows")
        if b.shape[1] > 0:
            gram = b.conj().T @ b
            if float(np.max(np.abs(gram - np.eye(b.shape[1])))) > TAU_OP:
                raise ValueError("basis columns are not orthonormal within tolerance")
        object.__setattr__(self, "basis", _freeze(b))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0), dtype=np.complex128))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim, dtype=np.complex128))

    @classmethod
    def span_of_columns(cls, matrix: np.ndarray, indices: Sequence[int]) -> "Subspace":
        """Span of selected columns of an orthonormal matrix (basis columns)."""
        m = np.asarray(matrix, dtype=np.complex128)
        return cls(m.shape[0], m[:, list(indices)])

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def projector(self) -> Projector:
        return Projector(self.basis @ self.basis.conj().T)

    def contains(self, psi: StateVector, *, tol: float | None = None) -> bool:
        """Membership by projection residual: ``||P psi - psi|| <= tol``."""
        _check_same_dim(self.ambient_dim, psi.dim)
        limit = member_tol() if tol is None else tol
        vec = psi.amplitudes
        residual = vec - self.basis @ (self.basis.conj().T @ vec)
        return float(np.linalg.norm(residual)) <= limit

    def _holds_vector(self, vec: np.ndarray, limit: float) -> bool:
        residual = vec - self.basis @ (self.basis.conj().T @ vec)
        return float(np.linalg.norm(residual)) <= limit

    def leq(self, other: "Subspace") -> bool:
        """Lattice order: every basis vector of self lies in other."""
        _check_same_dim(self.ambient_dim, other.ambient_dim)
        if self.dim == 0:
            return True
        if self.dim > other.dim:
            return False
        images = other.basis @ (other.basis.conj().T @ self.basis)
        residuals = np.linalg.norm(images - self.basis, axis=0)
        return bool(np.all(residuals <= member_tol()))

    def equals(self, other: "Subspace") -> bool:
        """Canonical equality: mutual inclusion."""
        return self.dim == other.dim and self.leq(other) and other.leq(self)

    def meet(self, other: "Subspace") -> "Subspace":
        """Intersection via the null space of the stacked complement projectors."""
        _check_same_dim(self.ambient_dim, other.ambient_dim)
        d = self.ambient_dim
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(d)
        eye = np.eye(d, dtype=np.complex128)
        stacked = np.vstack(
            [eye - self.projector().entries, eye - other.projector().entries]
        )
        _, s, vh = np.linalg.svd(stacked)
        if s.size == 0 or s[0] <= 0.0:
            rank = 0
        else:
            rank = int(np.sum(s > TAU_RANK * s[0]))
        null_basis = vh[rank:].conj().T
        return Subspace(d, null_basis)

    def join(self, other: "Subspace") -> "Subspace":
        """Smallest subspace containing both: span of the union of bases."""
        _check_same_dim(self.ambient_dim, other.ambient_dim)
        combined = np.hstack([self.basis, other.basis])
        return Subspace(self.ambient_dim, _orthonormal_columns(combined))

    def orthocomplement(self) -> "Subspace":
        return range_of(Projector(np.eye(self.ambient_dim) - self.projector().entries))

    def tensor(self, other: "Subspace") -> "Subspace":
        new_dim = self.ambient_dim * other.ambient_dim
        if new_dim > TENSOR_DIM_CAP:
            raise TensorDimensionCapError(
                f"tensor product dimension {new_dim} exceeds the cap {TENSOR_DIM_CAP}"
            )
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(new_dim)
        return Subspace(new_dim, np.kron(self.basis, other.basis))

    def is_invariant_under(self, p: Projector) -> bool:
        """True when the projector maps every basis vector back into the subspace."""
        _check_same_dim(self.ambient_dim, p.dim)
        if self.dim == 0:
            return True
        limit = member_tol()
        images = p.entries @ self.basis
        for col in range(images.shape[1]):
            if not self._holds_vector(images[:, col], limit):
                return False
        return True

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.meet(other)

    def __or__(self, other: "Subspace") -> "Subspace":
        return self.join(other)

    def __invert__(self) -> "Subspace":
        return self.orthocomplement()

    def __le__(self, other: "Subspace") -> bool:
        return self.leq(other)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def subspace_from_spanning_set(vectors: Sequence[StateVector]) -> Subspace:
    """Orthonormalized span of the given vectors; dependent inputs collapse by rank."""
    if not vectors:
        raise ValueError("need at least one spanning vector")
    dim = vectors[0].dim
    for v in vectors[1:]:
        _check_same_dim(dim, v.dim)
    matrix = np.column_stack([v.amplitudes for v in vectors])
    return Subspace(dim, _orthonormal_columns(matrix))


def projector_of(subspace: Subspace) -> Projector:
    """Projector with the given subspace as its range (sum of outer products)."""
    return subspace.projector()


def range_of(p: Projector) -> Subspace:
    """Eigenspace of eigenvalue one; the spectrum of a projector is within {0, 1}."""
    eigenvalues, eigenvectors = np.linalg.eigh(p.entries)
    keep = eigenvalues > 0.5
    return Subspace(p.dim, eigenvectors[:, keep])
