"""Integer repository addressed by hyperplane sign vectors."""

from ._core import (
    DimensionMismatch,
    DuplicatePoint,
    Error,
    FormatError,
    GeometryExhausted,
    IncidentPoint,
    Overflow,
    Repository,
    bench,
    orientation_vector,
    primes_below,
    separate,
    to_point,
    verify_separation,
)

__all__ = [
    "DimensionMismatch",
    "DuplicatePoint",
    "Error",
    "FormatError",
    "GeometryExhausted",
    "IncidentPoint",
    "Overflow",
    "Repository",
    "bench",
    "orientation_vector",
    "primes_below",
    "separate",
    "to_point",
    "verify_separation",
]
__version__ = "0.1.0"
