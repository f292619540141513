"""Shared numerical tolerance policy.

Every predicate in the package makes its tolerance decisions through this
module so that subspace algebra, context validation, and valuations stay
mutually consistent.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator

TAU_OP = 1e-9
"""Operator identities: self-adjointness, idempotence, orthogonality, resolution."""

TAU_RANK = 1e-9
"""Relative singular-value cutoff for rank decisions (relative to the largest)."""

TAU_NORM = 1e-9
"""State normalization tolerance."""

DEFAULT_TAU_MEMBER = 1e-8
"""Default residual bound for membership predicates."""

TENSOR_DIM_CAP = 1024
"""Largest ambient dimension a tensor product may produce."""

_member_tol: ContextVar[float] = ContextVar("qlogic_member_tol", default=DEFAULT_TAU_MEMBER)


def member_tol() -> float:
    """Membership tolerance in effect for the calling context."""
    return _member_tol.get()


@contextmanager
def membership_tolerance(value: float) -> Iterator[None]:
    """Temporarily override the membership tolerance.

    Only membership decisions are affected; operator and rank tolerances stay
    fixed.  The override is context-local, so concurrent evaluations with
    different overrides do not interfere.
    """
    if value <= 0:
        raise ValueError("membership tolerance must be positive")
    token = _member_tol.set(float(value))
    try:
        yield
    finally:
        _member_tol.reset(token)
