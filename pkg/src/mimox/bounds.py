"""Outer bounds on the degrees-of-freedom region.

Two network families are covered: the crossed network with all four
messages active, and its one-message-removed reduction.  Each gets a
polyhedral region over (d11, d12, d21, d22) and a closed-form sum-bound;
the closed forms are cross-checked against exact linear programming over
the regions in the test suite, and the weighted maximization here always
goes through the LP.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .channel import AntennaConfig
from .numerics import InvalidInputError, Rational
from .simplex import simplex_maximize

MESSAGES: Tuple[Tuple[int, int], ...] = ((1, 1), (1, 2), (2, 1), (2, 2))


@dataclass(frozen=True)
class DoFPoint:
    """One candidate operating point, exact rational coordinates."""

    d11: Rational
    d12: Rational
    d21: Rational
    d22: Rational

    def get(self, i: int, j: int) -> Rational:
        return getattr(self, f"d{i}{j}")

    @property
    def total(self) -> Rational:
        return self.d11 + self.d12 + self.d21 + self.d22

    def as_tuple(self):
        return (self.d11, self.d12, self.d21, self.d22)


@dataclass(frozen=True)
class RegionConstraint:
    coeffs: Tuple[Rational, Rational, Rational, Rational]
    rhs: Rational
    label: str


@dataclass(frozen=True)
class DofRegion:
    """Intersection of labeled half-spaces with the non-negative orthant."""

    constraints: Tuple[RegionConstraint, ...]

    def contains(self, point: DoFPoint) -> bool:
        vec = point.as_tuple()
        if any(v < 0 for v in vec):
            return False
        return all(sum(c * v for c, v in zip(row.coeffs, vec)) <= row.rhs
                   for row in self.constraints)

    def violated(self, point: DoFPoint) -> List[str]:
        vec = point.as_tuple()
        out = [f"d{i}{j} < 0" for (i, j), v in zip(MESSAGES, vec) if v < 0]
        out += [row.label for row in self.constraints
                if sum(c * v for c, v in zip(row.coeffs, vec)) > row.rhs]
        return out

    def maximize(self, weights: Sequence[Rational]) -> Tuple[Rational, DoFPoint]:
        if len(weights) != 4:
            raise InvalidInputError("need one weight per message")
        lhs = [list(row.coeffs) for row in self.constraints]
        rhs = [row.rhs for row in self.constraints]
        value, x = simplex_maximize(list(weights), lhs, rhs)
        return value, DoFPoint(*x)


def lp_max_weighted(region: DofRegion, weights: Sequence[Rational],
                    ) -> Tuple[Rational, DoFPoint]:
    return region.maximize(weights)


def _eps(config: AntennaConfig, a: int, b: int) -> int:
    """max of transmitter-a and receiver-b antenna counts."""
    return max(config.tx(a), config.rx(b))


def x_outer_region(config: AntennaConfig) -> DofRegion:
    """Outer region with all four messages active.

    Four three-message rows (all messages except one, bounded by the larger
    antenna count on the excluded message's far side) plus the per-receiver
    and per-transmitter sum rows.
    """
    rows: List[RegionConstraint] = []
    for (i, j) in MESSAGES:
        k, q = 3 - i, 3 - j
        coeffs = tuple(Fraction(0 if (a, b) == (i, j) else 1) for (a, b) in MESSAGES)
        bound = Fraction(max(config.rx(k), config.tx(q)))
        rows.append(RegionConstraint(coeffs, bound, f"triple excluding d{i}{j}"))
    rows.append(RegionConstraint((Fraction(1), Fraction(1), Fraction(0), Fraction(0)),
                                 Fraction(config.n1), "receiver 1 sum"))
    rows.append(RegionConstraint((Fraction(0), Fraction(0), Fraction(1), Fraction(1)),
                                 Fraction(config.n2), "receiver 2 sum"))
    rows.append(RegionConstraint((Fraction(1), Fraction(0), Fraction(1), Fraction(0)),
                                 Fraction(config.m1), "transmitter 1 sum"))
    rows.append(RegionConstraint((Fraction(0), Fraction(1), Fraction(0), Fraction(1)),
                                 Fraction(config.m2), "transmitter 2 sum"))
    return DofRegion(tuple(rows))


def x_total_outer(config: AntennaConfig) -> Rational:
    """Largest message-sum in the four-message outer region (exact LP)."""
    value, _ = x_outer_region(config).maximize([Fraction(1)] * 4)
    return value


def x_total_outer_closed_form(config: AntennaConfig) -> Rational:
    """Closed-form evaluation of the same bound; the LP is authoritative."""
    e = {(a, b): _eps(config, a, b) for a in (1, 2) for b in (1, 2)}
    terms = [
        Fraction(config.m1 + config.m2),
        Fraction(config.n1 + config.n2),
        Fraction(e[(1, 1)] + e[(1, 2)] + config.m2, 2),
        Fraction(e[(2, 1)] + e[(2, 2)] + config.m1, 2),
        Fraction(e[(1, 1)] + e[(2, 1)] + config.n2, 2),
        Fraction(e[(1, 2)] + e[(2, 2)] + config.n1, 2),
        Fraction(e[(1, 1)] + e[(1, 2)] + e[(2, 1)] + e[(2, 2)], 3),
    ]
    return min(terms)


def z_outer_region(config: AntennaConfig, absent: Tuple[int, int] = (1, 1)) -> DofRegion:
    """Outer region after removing message ``absent`` from the network."""
    if absent not in MESSAGES:
        raise InvalidInputError(f"absent must be one of {MESSAGES}")
    ai, aj = absent
    k, q = 3 - ai, 3 - aj
    rows: List[RegionConstraint] = []
    coeffs = tuple(Fraction(0 if (a, b) == absent else 1) for (a, b) in MESSAGES)
    rows.append(RegionConstraint(coeffs, Fraction(max(config.rx(k), config.tx(q))),
                                 "all active messages"))
    for i in (1, 2):
        coeffs = tuple(Fraction(int(a == i and (a, b) != absent))
                       for (a, b) in MESSAGES)
        rows.append(RegionConstraint(coeffs, Fraction(config.rx(i)),
                                     f"receiver {i} sum"))
    for j in (1, 2):
        coeffs = tuple(Fraction(int(b == j and (a, b) != absent))
                       for (a, b) in MESSAGES)
        rows.append(RegionConstraint(coeffs, Fraction(config.tx(j)),
                                     f"transmitter {j} sum"))
    # the removed message carries nothing
    coeffs = tuple(Fraction(int((a, b) == absent)) for (a, b) in MESSAGES)
    rows.append(RegionConstraint(coeffs, Fraction(0), "absent message"))
    return DofRegion(tuple(rows))


def z_total_outer(config: AntennaConfig, absent: Tuple[int, int] = (1, 1)) -> Rational:
    value, _ = z_outer_region(config, absent).maximize([Fraction(1)] * 4)
    return value


def z_total_outer_closed_form(config: AntennaConfig,
                              absent: Tuple[int, int] = (1, 1)) -> Rational:
    ai, aj = absent
    k, q = 3 - ai, 3 - aj
    n_k, m_q = config.rx(k), config.tx(q)
    if m_q < n_k:
        return Fraction(min(config.m1 + config.m2, n_k))
    return Fraction(min(config.n1 + config.n2, m_q))
