"""Catalog pages for the three-message reductions on arbitrary shapes.

Unlike the equal-antenna catalog, these pages cover every antenna
configuration.  Routing goes by which links are tall and which are wide:
the four comparisons (M1 vs N1, M1 vs N2, M2 vs N1, M2 vs N2) select a
page, and shapes without a page of their own are served through the
reversed-and-relabeled network, whose comparison pattern always has one.

Rows use the tied variable set of the reduced without-(2,1) program: one
aligned count shared by both messages of receiver 1, one aligned count
for the remaining message, and three steered counts.  The final page
carries rows of the mirror reduction (without message (1, 2)) and is
reachable directly or as the reversed-network server of a starred row.
"""

from __future__ import annotations

from fractions import Fraction

from .allocator import StreamAllocation
from .channel import AntennaConfig
from .closed_forms import ClosedFormResult
from .numerics import InvalidInputError, Rational

__all__ = ["closed_form_Z_appendix"]


def _counts(label: str, values) -> tuple:
    values = tuple(int(v) for v in values)
    if any(v < 0 for v in values):
        raise InvalidInputError(f"regime {label!r} produced a negative stream count")
    return values


def _row21(catalog: str, label: str, tup, t: int, dof: Rational) -> ClosedFormResult:
    """Direct page row in tied without-(2,1) coordinates."""
    d1, d2, n11, n12, n22 = _counts(label, tup)
    alloc = StreamAllocation(d11_ia=d1, d12_ia=d1, d22_ia=d2,
                             d11_ns=n11, d12_ns=n12, d22_ns=n22, t=t)
    if alloc.dof != dof:
        raise InvalidInputError(f"regime {label!r} streams do not add up")
    return ClosedFormResult(
        dof_total=alloc.dof, allocation_hint=alloc, regime_label=label,
        via_reciprocal=False, row_streams=alloc.as_tuple(), row_t=t,
        row_dof=alloc.dof, row_side="original", catalog=catalog)


def _row12(catalog: str, label: str, tup, t: int, dof: Rational) -> ClosedFormResult:
    """Direct page row in tied without-(1,2) coordinates."""
    e1, e2, n21, n22 = _counts(label, tup)
    alloc = StreamAllocation(d11_ia=e1, d21_ia=e2, d22_ia=e2,
                             d21_ns=n21, d22_ns=n22, t=t)
    if alloc.dof != dof:
        raise InvalidInputError(f"regime {label!r} streams do not add up")
    return ClosedFormResult(
        dof_total=alloc.dof, allocation_hint=alloc, regime_label=label,
        via_reciprocal=False, row_streams=alloc.as_tuple(), row_t=t,
        row_dof=alloc.dof, row_side="original", catalog=catalog)


def _swap_ends(alloc: StreamAllocation) -> StreamAllocation:
    """Design of the reversed-and-relabeled network read in this one's labels.

    Reversal transposes message indices and relabeling transposes users,
    so the net permutation exchanges the two direct messages and fixes
    the cross ones, while the side flag flips.
    """
    other = "reciprocal" if alloc.side == "original" else "original"
    return StreamAllocation(
        d11_ia=alloc.d22_ia, d12_ia=alloc.d12_ia,
        d21_ia=alloc.d21_ia, d22_ia=alloc.d11_ia,
        d11_ns=alloc.d22_ns, d12_ns=alloc.d12_ns,
        d21_ns=alloc.d21_ns, d22_ns=alloc.d11_ns,
        t=alloc.t, side=other)


def _relabel_users(alloc: StreamAllocation) -> StreamAllocation:
    """Same design with both user indices transposed; no side change."""
    return StreamAllocation(
        d11_ia=alloc.d22_ia, d12_ia=alloc.d21_ia,
        d21_ia=alloc.d12_ia, d22_ia=alloc.d11_ia,
        d11_ns=alloc.d22_ns, d12_ns=alloc.d21_ns,
        d21_ns=alloc.d12_ns, d22_ns=alloc.d11_ns,
        t=alloc.t, side=alloc.side)


def _relabel_tuple(streams) -> tuple:
    s = tuple(streams)
    return (s[3], s[2], s[1], s[0], s[7], s[6], s[5], s[4])


def _through_swap_ends(config: AntennaConfig, depth: int) -> ClosedFormResult:
    """Serve a shape through its reversed-and-relabeled partner."""
    if depth > 3:
        raise InvalidInputError("catalog delegation did not settle")
    partner = AntennaConfig(config.n2, config.n1, config.m2, config.m1)
    sub = _without_21(partner, depth + 1)
    if sub.allocation_hint is None:
        raise InvalidInputError("partner page produced no allocation")
    hint = _swap_ends(sub.allocation_hint)
    return ClosedFormResult(
        dof_total=sub.dof_total, allocation_hint=hint,
        regime_label=sub.regime_label,
        via_reciprocal=hint.side == "reciprocal",
        row_streams=hint.as_tuple(), row_t=hint.t, row_dof=sub.dof_total,
        row_side=hint.side, catalog=sub.catalog)


def _served_reversed(catalog: str, label: str, hint: StreamAllocation,
                     dof: Rational) -> ClosedFormResult:
    return ClosedFormResult(
        dof_total=dof, allocation_hint=hint, regime_label=label,
        via_reciprocal=True, row_streams=hint.as_tuple(), row_t=hint.t,
        row_dof=dof, row_side="reciprocal", catalog=catalog)


def _trio(catalog: str, config: AntennaConfig) -> ClosedFormResult:
    """Three single-period rows shared by the pages whose second
    transmitter and first receiver both see wide links."""
    m1, m2, n1, n2 = config.as_tuple()
    if m2 >= n1 + n2:
        return _row21(catalog, "N1+N2 ≤ M2", (0, 0, 0, 2 * n1, 2 * n2), 1,
                      Fraction(n1 + n2))
    if n1 + 2 * n2 <= m1 + m2:
        return _row21(catalog, "N1+2N2 ≤ M1+M2, M2 < N1+N2",
                      (0, 0, 2 * (n1 + n2 - m2), 2 * (m2 - n2), 2 * (m2 - n1)),
                      1, Fraction(m2))
    return _row21(catalog, "M1+M2 < N1+2N2",
                  (n1 + 2 * n2 - m1 - m2, 0, 2 * (m1 - n2), 2 * (m2 - n2),
                   2 * (m2 - n1)), 1, Fraction(m2))


def _page_all_wide(config: AntennaConfig) -> ClosedFormResult:
    """Every link at least as wide as its receiver.  The page with the
    larger second receiver keeps two extension rows where alignment at
    the small first receiver still pays; its mirror needs none."""
    m1, m2, n1, n2 = config.as_tuple()
    if n2 < n1:
        return _trio("X", config)
    spread = m1 + m2 - 2 * n2
    if n1 >= 3 * spread:
        tup = (2 * n1, 2 * n1 - 6 * spread, 6 * (m1 - n2), 6 * (m2 - n2),
               6 * (m2 - n1))
        return _row21("IX", "3(M1+M2−2N2) ≤ N1", tup, 3, Fraction(m2))
    if n1 >= spread:
        tup = (3 * n1 - 3 * spread, 0, 6 * (m1 - n2), 6 * (m2 - n2),
               6 * (m2 - n1))
        return _row21("IX", "M1+M2−2N2 ≤ N1 < 3(M1+M2−2N2)", tup, 3,
                      Fraction(m2))
    return _trio("IX", config)


def _page_tall_first_tx(config: AntennaConfig) -> ClosedFormResult:
    """First transmitter shorter than the second receiver: no steering
    past it, so alignment carries the load until the second transmitter
    is wide enough on its own."""
    m1, m2, n1, n2 = config.as_tuple()
    room = m2 - n2
    if n1 >= 3 * room:
        tup = (2 * n1, 2 * n1, 0, 0, 6 * (m2 - n1))
        return _row21("XI", "3(M2−N2) ≤ N1", tup, 3, Fraction(m2))
    if 2 * n1 >= 3 * room:
        tup = (2 * n1, 4 * n1 - 6 * room, 0, 6 * room - 2 * n1,
               6 * (m2 - n1))
        return _row21("XI", "3(M2−N2)/2 ≤ N1 < 3(M2−N2)", tup, 3,
                      Fraction(m2))
    if n1 >= room:
        tup = (2 * (n1 + n2 - m2), 0, 0, 4 * m2 - 2 * n1 - 4 * n2,
               2 * (m2 - n1))
        return _row21("XI", "M2−N2 ≤ N1 < 3(M2−N2)/2", tup, 1, Fraction(m2))
    return _row21("XI", "N1 < M2−N2", (0, 0, 0, 2 * n1, 2 * n2), 1,
                  Fraction(n1 + n2))


def _page_tall_second_rx(config: AntennaConfig) -> ClosedFormResult:
    """Second receiver taller than the second transmitter: its own
    message is what limits the total, and one period suffices."""
    m1, m2, n1, n2 = config.as_tuple()
    if n1 + n2 <= m1:
        return _row21("XII", "N1+N2 ≤ M1", (0, 0, 2 * n1, 0, 2 * (m2 - n1)),
                      1, Fraction(m2))
    return _row21("XII", "M1 < N1+N2",
                  (n1 + n2 - m1, 0, 2 * (m1 - n2), 0, 2 * (m2 - n1)), 1,
                  Fraction(m2))


def _page_narrow_tall_mix(config: AntennaConfig) -> ClosedFormResult:
    """First transmitter below the first receiver only: the trio rows
    already cover the whole range."""
    return _trio("XIII", config)


def _page_narrow_first_tx(config: AntennaConfig) -> ClosedFormResult:
    """First transmitter below both receivers.  When the overflow at
    receiver side outgrows what the narrow transmitter can absorb, the
    row is starred: the reversed network serves it through the mirror
    reduction's page."""
    m1, m2, n1, n2 = config.as_tuple()
    if m2 >= n1 + n2:
        return _row21("XIV", "N1+N2 ≤ M2", (0, 0, 0, 2 * n1, 2 * n2), 1,
                      Fraction(n1 + n2))
    g = n1 + n2 - m2
    if g <= 2 * m1:
        tup = (g, 0, 0, 2 * (m2 - n2), 2 * (m2 - n1))
        return _row21("XIV", "N1+N2 ≤ 2M1+M2, M2 < N1+N2", tup, 1,
                      Fraction(m2))
    reversed_net = config.swapped
    if _mirror_shape(reversed_net):
        sub = _mirror_page(reversed_net)
        hint = sub.allocation_hint.relabeled_swap()
        return _served_reversed("XVII", sub.regime_label, hint, sub.dof_total)
    return _through_swap_ends(config, 0)


def _page_narrow_second_tx(config: AntennaConfig) -> ClosedFormResult:
    """Second transmitter below the first receiver but not the second:
    receiver 1 is the binding node and one period always attains it."""
    m1, m2, n1, n2 = config.as_tuple()
    if n1 + n2 <= m1:
        return _row21("XV", "N1+N2 ≤ M1", (0, 0, 2 * n1, 0, 0), 1,
                      Fraction(n1))
    return _row21("XV", "M1 < N1+N2",
                  (n1 + n2 - m1, 0, 2 * (m1 - n2), 0, 0), 1, Fraction(n1))


def _page_narrow_second_tx_both(config: AntennaConfig) -> ClosedFormResult:
    """Second transmitter below both receivers.  Past the absorption
    limit the shape is its own reversed partner, so the starred row is
    written out directly: the reversed network runs the first direct
    message as a lone pipe, aligned into the tiny far receiver and
    steered past the rest."""
    m1, m2, n1, n2 = config.as_tuple()
    h = n1 + n2 - m1
    if h <= 2 * m2:
        d1 = max(h, 0)
        return _row21("XVI", "N1+N2 ≤ M1+2M2",
                      (d1, 0, 2 * n1 - 2 * d1, 0, 0), 1, Fraction(n1))
    hint = StreamAllocation(d11_ia=2 * m2, d11_ns=2 * (n1 - m2), t=1,
                            side="reciprocal")
    return _served_reversed("XVI", "M1+2M2 < N1+N2", hint, Fraction(n1))


def _mirror_shape(config: AntennaConfig) -> bool:
    m1, m2, n1, n2 = config.as_tuple()
    return (n1 < m1 < n2 and n1 < m2 < n2 and m1 + m2 > n1 + n2)


def _mirror_page(config: AntennaConfig) -> ClosedFormResult:
    """Rows of the mirror reduction (message (1, 2) removed) for shapes
    squeezed between the two receivers."""
    m1, m2, n1, n2 = config.as_tuple()
    if 3 * (m1 + m2) < 4 * n1 + 3 * n2:
        tup = (8 * n1 + 6 * n2 - 6 * m1 - 6 * m2, 2 * n1,
               6 * (m1 - n1), 6 * (m2 - n1))
        return _row12("XVII", "3(M1+M2) < 4N1+3N2", tup, 3, Fraction(n2))
    if m1 + m2 <= 2 * n1 + n2:
        tup = (0, 2 * n1 + n2 - m1 - m2, 2 * (m1 - n1), 2 * (m2 - n1))
        return _row12("XVII", "M1+M2 ≤ 2N1+N2", tup, 1, Fraction(n2))
    tup = (0, 0, 2 * (n1 + n2 - m2), 2 * (m2 - n1))
    return _row12("XVII", "2N1+N2 < M1+M2", tup, 1, Fraction(n2))


def _without_21(config: AntennaConfig, depth: int = 0) -> ClosedFormResult:
    m1, m2, n1, n2 = config.as_tuple()
    pattern = (m1 >= n1, m1 >= n2, m2 >= n1, m2 >= n2)
    page = {
        (True, True, True, True): _page_all_wide,
        (True, False, True, True): _page_tall_first_tx,
        (True, True, True, False): _page_tall_second_rx,
        (False, True, True, True): _page_narrow_tall_mix,
        (False, False, True, True): _page_narrow_first_tx,
        (True, True, False, True): _page_narrow_second_tx,
        (True, True, False, False): _page_narrow_second_tx_both,
    }.get(pattern)
    if page is not None:
        return page(config)
    return _through_swap_ends(config, depth)


def closed_form_Z_appendix(config: AntennaConfig,
                           variant: str = "x21") -> ClosedFormResult:
    """Catalog lookup for the three-message networks.

    ``variant`` picks which message is removed: "x21" (second receiver's
    cross message) or "x12" (first receiver's).  Every shape is covered;
    results attained only on the reversed network carry a relabeled hint
    and the ``via_reciprocal`` flag, exactly as in the equal-antenna
    catalog.
    """
    v = variant.lower()
    if v == "x21":
        return _without_21(config)
    if v != "x12":
        raise InvalidInputError(
            f"unknown variant {variant!r}; choose 'x21' or 'x12'")
    if _mirror_shape(config):
        return _mirror_page(config)
    # the mirror reduction is the user-relabeled image of the main one
    partner = AntennaConfig(config.m2, config.m1, config.n2, config.n1)
    sub = _without_21(partner)
    if sub.allocation_hint is None:
        raise InvalidInputError("partner page produced no allocation")
    return ClosedFormResult(
        dof_total=sub.dof_total,
        allocation_hint=_relabel_users(sub.allocation_hint),
        regime_label=sub.regime_label, via_reciprocal=sub.via_reciprocal,
        row_streams=_relabel_tuple(sub.row_streams), row_t=sub.row_t,
        row_dof=sub.row_dof, row_side=sub.row_side, catalog=sub.catalog)
