"""Exception types shared across the package."""

from __future__ import annotations


class InputError(ValueError):
    """Malformed or inconsistent user input (bad shapes, unknown ids, ...)."""


class UnsupportedGroupError(InputError):
    """Operation requires a group/representation shape we do not support
    (e.g. the combinatorial path outside reflection-like two-groups)."""


class RepresentationError(InputError):
    """A claimed group representation fails validation (not a homomorphism,
    not orthogonal, not faithful, non-integral trace average, ...)."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""
