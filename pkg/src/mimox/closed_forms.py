"""Closed-form achievable allocations for structured antenna shapes.

The shapes with equal antenna counts on one side have a small catalog of
regimes.  Each row carries the achieving stream counts and extension
length; rows attainable only by running the scheme on the reversed
network are flagged, and their hint is produced by recursing on the
swapped configuration and relabeling the result.

Catalog pages are identified by the roman ids the command line uses
("I" through "VIII" here, appendix pages elsewhere).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .allocator import StreamAllocation
from .channel import AntennaConfig
from .numerics import InvalidInputError, Rational

__all__ = [
    "ClosedFormResult",
    "UnsupportedShapeError",
    "closed_form_X",
    "closed_form_X21",
    "closed_form_rank_deficient",
    "cooperative_bound",
]


class UnsupportedShapeError(InvalidInputError):
    """No catalog row covers the requested antenna shape."""


@dataclass(frozen=True)
class ClosedFormResult:
    """One catalog row evaluated at a concrete configuration.

    ``dof_total`` is the attained total.  When ``via_reciprocal`` is set
    the attainment runs on the reversed network: ``allocation_hint`` is
    already relabeled back to original message labels, while
    ``row_streams`` / ``row_t`` / ``row_dof`` keep the row as printed.
    ``row_side`` says which program the row numbers satisfy: "original"
    for genuine catalog rows (their value is the exact optimum of the
    original-side program at ``row_t``), "reciprocal" for shapes served
    entirely through the swap (the row then just mirrors the hint).
    """

    dof_total: Rational
    allocation_hint: Optional[StreamAllocation]
    regime_label: str
    via_reciprocal: bool
    row_streams: Tuple[int, ...]
    row_t: int
    row_dof: Rational
    row_side: str
    catalog: str


def _alloc(ia: Sequence[int], ns: Sequence[int], t: int) -> StreamAllocation:
    return StreamAllocation(
        d11_ia=ia[0], d12_ia=ia[1], d21_ia=ia[2], d22_ia=ia[3],
        d11_ns=ns[0], d12_ns=ns[1], d21_ns=ns[2], d22_ns=ns[3], t=t)


def _checked(label: str, ia, ns) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    ia = tuple(int(v) for v in ia)
    ns = tuple(int(v) for v in ns)
    if any(v < 0 for v in ia + ns):
        raise InvalidInputError(f"regime {label!r} produced a negative stream count")
    return ia, ns


def _direct(catalog: str, label: str, ia, ns, t: int, row_dof: Rational) -> ClosedFormResult:
    ia, ns = _checked(label, ia, ns)
    total = Fraction(sum(ia) + sum(ns), 2 * t)
    if total != row_dof:
        raise InvalidInputError(f"regime {label!r} streams do not add up")
    return ClosedFormResult(
        dof_total=total, allocation_hint=_alloc(ia, ns, t), regime_label=label,
        via_reciprocal=False, row_streams=ia + ns, row_t=t, row_dof=total,
        row_side="original", catalog=catalog)


def _starred(config: AntennaConfig, catalog: str, label: str, ia, ns, t: int,
             row_dof: Rational) -> ClosedFormResult:
    """A row whose own numbers are only the best this side can do; the
    full value comes from the reversed network."""
    ia, ns = _checked(label, ia, ns)
    sub = closed_form_X(config.swapped)
    if sub.via_reciprocal or sub.allocation_hint is None:
        raise InvalidInputError("reversed-side recursion did not settle")
    hint = sub.allocation_hint.relabeled_swap()
    return ClosedFormResult(
        dof_total=sub.dof_total, allocation_hint=hint, regime_label=label,
        via_reciprocal=True, row_streams=ia + ns, row_t=t,
        row_dof=Fraction(row_dof), row_side="original", catalog=catalog)


def _via_swap(config: AntennaConfig) -> ClosedFormResult:
    """Shapes with no catalog page of their own: the swapped shape has one."""
    sub = closed_form_X(config.swapped)
    if sub.via_reciprocal or sub.allocation_hint is None:
        raise InvalidInputError("reversed-side recursion did not settle")
    hint = sub.allocation_hint.relabeled_swap()
    return ClosedFormResult(
        dof_total=sub.dof_total, allocation_hint=hint,
        regime_label=sub.regime_label, via_reciprocal=True,
        row_streams=hint.as_tuple(), row_t=hint.t, row_dof=sub.dof_total,
        row_side="reciprocal", catalog=sub.catalog)


def _catalog_symmetric(config: AntennaConfig, m: int, n: int) -> ClosedFormResult:
    if 2 * m >= 3 * n:
        return _direct("I", "3N/2 ≤ M", (0,) * 4, (n,) * 4, 1, Fraction(2 * n))
    if m >= n:
        return _direct("I", "N ≤ M < 3N/2", (6 * n - 4 * m,) * 4,
                       (6 * m - 6 * n,) * 4, 3, Fraction(4 * m, 3))
    if 2 * m >= n:
        return _starred(config, "I", "N/2 ≤ M < N", (4 * m - 2 * n,) * 4,
                        (0,) * 4, 3, Fraction(4 * (2 * m - n), 3))
    return _starred(config, "I", "M < N/2", (0,) * 4, (0,) * 4, 1, Fraction(0))


def _catalog_wide_tx(config: AntennaConfig) -> ClosedFormResult:
    m1, m2, n = config.m1, config.m2, config.n1
    if m1 >= 2 * n:
        return _direct("II", "2N ≤ M1", (0,) * 4, (2 * n, 0, 2 * n, 0), 1,
                       Fraction(2 * n))
    if m1 + m2 < 3 * n:
        ia = 6 * n - 2 * m1 - 2 * m2
        return _direct("II", "N ≤ M1 < 2N, M1+M2 < 3N", (ia,) * 4,
                       (6 * m1 - 6 * n, 6 * m2 - 6 * n) * 2, 3,
                       Fraction(2 * (m1 + m2), 3))
    return _direct("II", "N ≤ M1 < 2N, 3N ≤ M1+M2", (0,) * 4,
                   (2 * m1 - 2 * n, 4 * n - 2 * m1) * 2, 1, Fraction(2 * n))


def _catalog_mixed_tx(config: AntennaConfig) -> ClosedFormResult:
    m1, m2, n = config.m1, config.m2, config.n1
    if m1 < n <= m2:
        # the narrow transmitter is the first one
        if m1 + m2 < 2 * n:
            return _starred(config, "III", "N ≤ M1+M2 < 2N", (2 * m1,) * 4,
                            (0, 6 * m2 - 6 * n) * 2, 3,
                            Fraction(4 * m1, 3) + 2 * m2 - 2 * n)
        if m2 < 2 * n:
            return _direct("III", "2N ≤ M1+M2, M2 < 2N", (4 * n - 2 * m2,) * 4,
                           (0, 6 * m2 - 6 * n) * 2, 3, Fraction(2 * m2 + 2 * n, 3))
        return _direct("III", "2N ≤ M2", (0,) * 4, (0, 2 * n) * 2, 1,
                       Fraction(2 * n))
    if m1 + m2 < 2 * n:
        return _starred(config, "III", "N ≤ M1+M2 < 2N", (2 * m2,) * 4,
                        (6 * m1 - 6 * n, 0) * 2, 3,
                        Fraction(4 * m2, 3) + 2 * m1 - 2 * n)
    if m1 < 2 * n:
        return _direct("III", "2N ≤ M1+M2, M1 < 2N", (4 * n - 2 * m1,) * 4,
                       (6 * m1 - 6 * n, 0) * 2, 3, Fraction(2 * m1 + 2 * n, 3))
    return _direct("III", "2N ≤ M1", (0,) * 4, (2 * n, 0) * 2, 1, Fraction(2 * n))


def _pairwise(d1: Tuple[int, int], d2: Tuple[int, int]):
    """Both messages of a receiver share its pair of values."""
    return (d1[0], d1[0], d2[0], d2[0]), (d1[1], d1[1], d2[1], d2[1])


def _catalog_equal_tx_wide(config: AntennaConfig) -> ClosedFormResult:
    m, n1, n2 = config.m1, config.n1, config.n2
    if n1 >= n2:
        big = 3 * n2 <= 2 * n1
        if 2 * m >= 2 * n1 + n2:
            label = ("3N2/2 ≤ N1, N1+N2/2 ≤ M" if big
                     else "N1 < 3N2/2, N1+N2/2 ≤ M")
            ia, ns = _pairwise((0, n1), (0, n2))
            return _direct("IV", label, ia, ns, 1, Fraction(n1 + n2))
        if 2 * m >= 3 * n2:
            label = ("3N2/2 ≤ N1, N1 ≤ M < N1+N2/2" if big
                     else "N1 < 3N2/2, 3N2/2 ≤ M < N1+N2/2")
            ia, ns = _pairwise((0, 2 * m - n2),
                               (4 * n1 + 2 * n2 - 4 * m, 4 * m - 4 * n1))
            return _direct("IV", label, ia, ns, 2, Fraction(2 * m + n2, 2))
        ia, ns = _pairwise((6 * n2 - 4 * m, 6 * m - 6 * n2),
                           (6 * n1 - 4 * m, 6 * m - 6 * n1))
        return _direct("IV", "N1 < 3N2/2, N1 ≤ M < 3N2/2", ia, ns, 3,
                       Fraction(4 * m, 3))
    big = 3 * n1 <= 2 * n2
    if 2 * m >= 2 * n2 + n1:
        label = ("3N1/2 ≤ N2, N2+N1/2 ≤ M" if big
                 else "N2 < 3N1/2, N2+N1/2 ≤ M")
        ia, ns = _pairwise((0, n1), (0, n2))
        return _direct("V", label, ia, ns, 1, Fraction(n1 + n2))
    if 2 * m >= 3 * n1:
        label = ("3N1/2 ≤ N2, N2 ≤ M < N2+N1/2" if big
                 else "N2 < 3N1/2, 3N1/2 ≤ M < N2+N1/2")
        ia, ns = _pairwise((4 * n2 + 2 * n1 - 4 * m, 4 * m - 4 * n2),
                           (0, 2 * m - n1))
        return _direct("V", label, ia, ns, 2, Fraction(2 * m + n1, 2))
    ia, ns = _pairwise((6 * n2 - 4 * m, 6 * m - 6 * n2),
                       (6 * n1 - 4 * m, 6 * m - 6 * n1))
    return _direct("V", "N2 < 3N1/2, N2 ≤ M < 3N1/2", ia, ns, 3,
                   Fraction(4 * m, 3))


def _catalog_equal_tx_low_first(config: AntennaConfig) -> ClosedFormResult:
    m, n1, n2 = config.m1, config.n1, config.n2
    if 2 * m >= n2 and 2 * m < n1 + n2:
        ia, ns = _pairwise((4 * m - 2 * n2, 0), (2 * n1, 6 * m - 6 * n1))
        return _starred(config, "VI", "N2/2 ≤ M < (N1+N2)/2", ia, ns, 3,
                        Fraction(10 * m - 4 * n1 - 2 * n2, 3))
    if 2 * m >= n1 + n2 and 4 * m < 3 * n1 + 2 * n2:
        ia, ns = _pairwise((4 * m - 2 * n2, 0),
                           (6 * n1 + 4 * n2 - 8 * m, 6 * m - 6 * n1))
        return _direct("VI", "(N1+N2)/2 ≤ M < 3N1/4+N2/2", ia, ns, 3,
                       Fraction(2 * m + 2 * n2, 3))
    if 4 * m >= 3 * n1 + 2 * n2:
        ia, ns = _pairwise((2 * n1, 0), (0, 2 * n2 - n1))
        return _direct("VI", "3N1/4+N2/2 ≤ M < N2", ia, ns, 2,
                       Fraction(n1 + 2 * n2, 2))
    ia, ns = _pairwise((0, 0), (2 * n1, 6 * m - 6 * n1))
    return _starred(config, "VI", "N1 ≤ M < N2/2", ia, ns, 3,
                    Fraction(6 * m - 4 * n1, 3))


def _catalog_equal_tx_high_first(config: AntennaConfig) -> ClosedFormResult:
    m, n1, n2 = config.m1, config.n1, config.n2
    if 2 * m >= n1 and 2 * m < n1 + n2:
        ia, ns = _pairwise((2 * n2, 6 * m - 6 * n2), (4 * m - 2 * n1, 0))
        return _starred(config, "VII", "N1/2 ≤ M < (N1+N2)/2", ia, ns, 3,
                        Fraction(10 * m - 4 * n2 - 2 * n1, 3))
    if 2 * m >= n1 + n2 and 4 * m < 3 * n2 + 2 * n1:
        ia, ns = _pairwise((6 * n2 + 4 * n1 - 8 * m, 6 * m - 6 * n2),
                           (4 * m - 2 * n1, 0))
        return _direct("VII", "(N1+N2)/2 ≤ M < 3N2/4+N1/2", ia, ns, 3,
                       Fraction(2 * m + 2 * n1, 3))
    if 4 * m >= 3 * n2 + 2 * n1:
        ia, ns = _pairwise((0, 2 * n1 - n2), (2 * n2, 0))
        return _direct("VII", "3N2/4+N1/2 ≤ M < N1", ia, ns, 2,
                       Fraction(n2 + 2 * n1, 2))
    ia, ns = _pairwise((2 * n2, 6 * m - 6 * n2), (0, 0))
    return _starred(config, "VII", "N2 ≤ M < N1/2", ia, ns, 3,
                    Fraction(6 * m - 4 * n2, 3))


def closed_form_X(config: AntennaConfig) -> ClosedFormResult:
    """Catalog lookup for the full four-message network.

    Covered shapes need equal antenna counts on at least one side of the
    network; anything else raises :class:`UnsupportedShapeError` so the
    caller can fall back to the solver.
    """
    m1, m2, n1, n2 = config.as_tuple()
    if n1 == n2:
        if m1 == m2:
            return _catalog_symmetric(config, m1, n1)
        if min(m1, m2) >= n1:
            return _catalog_wide_tx(config)
        if max(m1, m2) >= n1:
            return _catalog_mixed_tx(config)
        return _via_swap(config)
    if m1 == m2:
        if m1 >= n1 and m1 >= n2:
            return _catalog_equal_tx_wide(config)
        if n1 <= m1 < n2:
            return _catalog_equal_tx_low_first(config)
        if n2 <= m1 < n1:
            return _catalog_equal_tx_high_first(config)
        return _via_swap(config)
    raise UnsupportedShapeError(
        f"no catalog page covers {config}; use the allocator instead")


def closed_form_X21(m: int, n: int) -> ClosedFormResult:
    """Catalog for the three-message network missing the second receiver's
    first message, on configurations (M, M, N, N) with M ≥ N.

    The attained total is min(2N, M) in every regime.
    """
    if n < 1 or m < n:
        raise UnsupportedShapeError(
            "catalog covers equal antenna counts with M ≥ N only")
    if 3 * m < 4 * n:
        label = "N ≤ M < 4N/3"
        streams = (2 * n, 6 * m - 6 * n, 2 * n, 0, 8 * n - 6 * m, 6 * m - 6 * n)
        t = 3
    elif 3 * m < 5 * n:
        label = "4N/3 ≤ M < 5N/3"
        streams = (2 * n, 6 * m - 8 * n, 2 * n, 0, 10 * n - 6 * m, 6 * m - 6 * n)
        t = 3
    elif m < 2 * n:
        label = "5N/3 ≤ M < 2N"
        streams = (2 * n - m, 2 * m - 2 * n, 2 * n - m, 0, 0, 2 * m - 2 * n)
        t = 1
    else:
        label = "2N ≤ M"
        streams = (0, 2 * n, 0, 0, 0, 2 * n)
        t = 1
    d11_ia, d11_ns, d12_ia, d12_ns, d22_ia, d22_ns = streams
    if any(v < 0 for v in streams):
        raise InvalidInputError(f"regime {label!r} produced a negative stream count")
    alloc = StreamAllocation(d11_ia=d11_ia, d11_ns=d11_ns, d12_ia=d12_ia,
                             d12_ns=d12_ns, d22_ia=d22_ia, d22_ns=d22_ns, t=t)
    total = Fraction(sum(streams), 2 * t)
    if total != min(2 * n, m):
        raise InvalidInputError(f"regime {label!r} streams do not add up")
    return ClosedFormResult(
        dof_total=total, allocation_hint=alloc, regime_label=label,
        via_reciprocal=False, row_streams=alloc.as_tuple(), row_t=t,
        row_dof=total, row_side="original", catalog="VIII")


def closed_form_rank_deficient(family: str, m: int, r_c: int, r_d: int) -> Rational:
    """Exact totals for the three rank-deficient symmetric families.

    ``family`` selects the network: "x" (all four messages), "ic" (direct
    pairs only, cross links pure interference), "bc" (one transmitter
    serving both receivers).  All nodes have ``m`` antennas; direct links
    have rank ``r_d`` and cross links rank ``r_c``.
    """
    if m < 1:
        raise InvalidInputError("antenna count must be positive")
    for r in (r_c, r_d):
        if not 0 <= r <= m:
            raise InvalidInputError("ranks must lie between 0 and m")
    sigma = r_c + r_d
    fam = family.lower()
    if fam == "x":
        if sigma >= m:
            return Fraction(8 * m - 2 * sigma, 3)
        return Fraction(2 * sigma)
    if fam == "ic":
        if r_c + 2 * r_d >= 2 * m and sigma >= m:
            return Fraction(2 * m - r_c)
        return Fraction(2 * r_d)
    if fam == "bc":
        return Fraction(min(m, sigma))
    raise InvalidInputError(f"unknown family {family!r}")


def cooperative_bound(m: int, r_c: int, r_d: int) -> Rational:
    """Total if both receivers pooled their antennas: twice the per-receiver
    signal-space dimension min(m, r_c + r_d)."""
    if m < 1:
        raise InvalidInputError("antenna count must be positive")
    for r in (r_c, r_d):
        if not 0 <= r <= m:
            raise InvalidInputError("ranks must lie between 0 and m")
    return Fraction(2 * min(m, r_c + r_d))
