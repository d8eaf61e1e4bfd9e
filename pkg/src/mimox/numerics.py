"""Shared numerical primitives: ranks, subspace bases, rational arithmetic.

Every rank decision in the package flows through :class:`TolerancePolicy` so
that a single relative threshold governs what counts as zero.  Exact
quantities (bounds, allocations, closed forms) use :data:`Rational`
arithmetic instead and never touch floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction

__all__ = [
    "Rational",
    "TolerancePolicy",
    "InvalidInputError",
    "numerical_rank",
    "column_space_basis",
    "null_space_basis",
    "left_null_space_basis",
    "subspace_intersection",
    "least_squares_solve",
    "min_singular_value",
    "rational_min",
    "parse_rational",
    "format_rational",
]


class InvalidInputError(ValueError):
    """Raised when caller-supplied data violates a documented precondition."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds used by every floating-point decision.

    rank_rel_tol
        Singular values below ``rank_rel_tol * sigma_max`` are treated as
        zero when counting rank or extracting null spaces.
    residual_tol
        Upper bound on normalized residuals accepted by the feasibility
        verifier (zero-forcing products, alignment mismatches).
    """

    rank_rel_tol: float = 1e-10
    residual_tol: float = 1e-8

    def __post_init__(self):
        if self.rank_rel_tol <= 0 or self.residual_tol <= 0:
            raise InvalidInputError("tolerances must be positive")


DEFAULT_TOLERANCE = TolerancePolicy()


def _as_2d(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise InvalidInputError(f"expected a 2-D array, got shape {arr.shape}")
    if not np.iscomplexobj(arr):
        arr = arr.astype(float, copy=False)
    return arr


def numerical_rank(a, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> int:
    """Rank of ``a`` as the number of singular values above the relative cut."""
    arr = _as_2d(a)
    if arr.size == 0:
        return 0
    sv = np.linalg.svd(arr, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol.rank_rel_tol * sv[0]))


def column_space_basis(a, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthonormal basis for the column space, as columns of the result."""
    arr = _as_2d(a)
    if arr.size == 0:
        return np.zeros((arr.shape[0], 0))
    u, sv, _ = np.linalg.svd(arr, full_matrices=False)
    r = 0 if sv.size == 0 or sv[0] == 0.0 else int(
        np.count_nonzero(sv > tol.rank_rel_tol * sv[0]))
    return u[:, :r]


def null_space_basis(a, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthonormal basis for the (right) null space of ``a``."""
    arr = _as_2d(a)
    m, n = arr.shape
    if n == 0:
        return np.zeros((0, 0))
    if m == 0 or arr.size == 0:
        return np.eye(n)
    u, sv, vh = np.linalg.svd(arr, full_matrices=True)
    if sv.size == 0 or sv[0] == 0.0:
        r = 0
    else:
        r = int(np.count_nonzero(sv > tol.rank_rel_tol * sv[0]))
    return vh[r:, :].T.conj()


def left_null_space_basis(a, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthonormal basis of the left null space: columns q with q^H a = 0."""
    return null_space_basis(_as_2d(a).conj().T, tol)


def subspace_intersection(qa, qb, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthonormal basis for the intersection of two subspaces.

    Parameters
    ----------
    qa, qb : array_like
        Orthonormal bases (columns) of the two subspaces, same ambient
        dimension.  Non-orthonormal input is rejected rather than silently
        re-orthonormalized, because the principal-angle computation below is
        only meaningful for orthonormal factors.

    Returns
    -------
    ndarray
        Basis of the intersection, columns ordered by decreasing cosine of
        the principal angle (the best-aligned direction first).  Directions
        whose cosine falls below ``1 - rank_rel_tol`` are excluded.
    """
    qa = _as_2d(qa)
    qb = _as_2d(qb)
    if qa.shape[0] != qb.shape[0]:
        raise InvalidInputError("ambient dimensions differ")
    for q, name in ((qa, "first"), (qb, "second")):
        if q.shape[1] == 0:
            continue
        gram = q.conj().T @ q
        if not np.allclose(gram, np.eye(q.shape[1]), atol=1e-8):
            raise InvalidInputError(f"{name} basis is not orthonormal")
    if qa.shape[1] == 0 or qb.shape[1] == 0:
        return np.zeros((qa.shape[0], 0))
    u, sv, _ = np.linalg.svd(qa.conj().T @ qb)
    # svd returns cosines in decreasing order already
    keep = int(np.count_nonzero(sv >= 1.0 - tol.rank_rel_tol))
    return qa @ u[:, :keep]


def least_squares_solve(a, b, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Minimum-norm least-squares solution of ``a x = b`` via the SVD."""
    arr = _as_2d(a)
    rhs = np.asarray(b)
    if not np.iscomplexobj(rhs):
        rhs = rhs.astype(float, copy=False)
    squeeze = rhs.ndim == 1
    if squeeze:
        rhs = rhs[:, None]
    if rhs.shape[0] != arr.shape[0]:
        raise InvalidInputError("row counts of a and b differ")
    u, sv, vh = np.linalg.svd(arr, full_matrices=False)
    if sv.size == 0 or sv[0] == 0.0:
        x = np.zeros((arr.shape[1], rhs.shape[1]))
    else:
        r = int(np.count_nonzero(sv > tol.rank_rel_tol * sv[0]))
        coef = (u[:, :r].conj().T @ rhs) / sv[:r, None]
        x = vh[:r, :].conj().T @ coef
    return x[:, 0] if squeeze else x


def min_singular_value(a) -> float:
    """Smallest singular value; a matrix with no columns has none."""
    arr = _as_2d(a)
    if arr.shape[1] == 0 or arr.shape[0] == 0:
        raise InvalidInputError("matrix has no singular values")
    return float(np.linalg.svd(arr, compute_uv=False)[-1])


def rational_min(values: Iterable[Rational]) -> Rational:
    vals = list(values)
    if not vals:
        raise InvalidInputError("empty minimum")
    return min(vals)


def parse_rational(text: str) -> Rational:
    """Parse 'p/q' or integer strings into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"not a rational: {text!r}") from exc


def format_rational(value: Rational) -> str:
    """Render exactly, 'p/q' when the denominator is not 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
