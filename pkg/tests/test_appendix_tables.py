"""Tests for the any-shape catalog of the three-message reductions.

Same referee scheme as the equal-antenna catalog, but coverage is total:
every configuration on the grid must route to a page, the total must
equal the outer bound of the matching reduction, and the hint must pass
the masked stream program on whichever side it names.
"""

from fractions import Fraction
from itertools import product

import pytest

from mimox.allocator import (
    MessageMask,
    build_p0,
    build_px12,
    build_px21,
    generic_dims,
    solve_ilp,
)
from mimox.appendix_tables import closed_form_Z_appendix
from mimox.bounds import z_total_outer, z_total_outer_closed_form
from mimox.channel import AntennaConfig
from mimox.numerics import InvalidInputError

ABSENT = {"x21": (2, 1), "x12": (1, 2)}
MASK = {"x21": "z21", "x12": "z12"}


def _masked_program(config, t, variant):
    dims = generic_dims(config)
    return build_p0(config, dims.s1, dims.s2, dims, t,
                    mask=MessageMask.from_name(MASK[variant]))


def _check_hint(config, res, variant):
    """The hint must satisfy its side's program and attain the total."""
    hint = res.allocation_hint
    assert res.via_reciprocal == (hint.side == "reciprocal")
    if hint.side == "original":
        prob = _masked_program(config, hint.t, variant)
        point = hint
    else:
        other = {"x21": "x12", "x12": "x21"}[variant]
        prob = _masked_program(config.swapped, hint.t, other)
        point = hint.relabeled_swap()
    values = prob.values_for(point)
    assert not prob.violated(values)
    assert prob.objective_value(values) == res.dof_total


def test_grid_totals_match_outer_bound():
    for shape in product(range(1, 5), repeat=4):
        config = AntennaConfig(*shape)
        for variant in ("x21", "x12"):
            res = closed_form_Z_appendix(config, variant=variant)
            assert res.dof_total == z_total_outer(config, ABSENT[variant])


def test_wide_grid_hints_achieve():
    # the closed-form bound stands in for the solver-verified one here;
    # their agreement is covered by the bounds tests
    for shape in product(range(1, 7), repeat=4):
        config = AntennaConfig(*shape)
        for variant in ("x21", "x12"):
            res = closed_form_Z_appendix(config, variant=variant)
            expect = z_total_outer_closed_form(config, ABSENT[variant])
            assert res.dof_total == expect
            _check_hint(config, res, variant)


def test_original_rows_are_exact_reduced_optima():
    # x21 only: the mirror reduction's relabeled hints may spend the
    # steered slot its reduced program drops, so the full masked program
    # (exercised above) is their referee instead
    for shape in product(range(1, 5), repeat=4):
        config = AntennaConfig(*shape)
        res = closed_form_Z_appendix(config)
        if res.row_side != "original":
            continue
        prob = build_px21(config, generic_dims(config), res.row_t)
        assert prob.admits(res.allocation_hint)
        assert solve_ilp(prob).dof == res.row_dof


def test_page_routing_and_regimes():
    rows = [
        # shape, catalog, regime, dof, t, via
        ((3, 3, 2, 3), "IX", "3(M1+M2−2N2) ≤ N1", 3, 3, False),
        ((4, 4, 3, 3), "IX", "M1+M2−2N2 ≤ N1 < 3(M1+M2−2N2)", 4, 3, False),
        ((5, 4, 2, 3), "IX", "N1+2N2 ≤ M1+M2, M2 < N1+N2", 4, 1, False),
        ((4, 5, 2, 3), "IX", "N1+N2 ≤ M2", 5, 1, False),
        ((4, 5, 3, 2), "X", "N1+N2 ≤ M2", 5, 1, False),
        ((4, 4, 3, 2), "X", "N1+2N2 ≤ M1+M2, M2 < N1+N2", 4, 1, False),
        ((3, 3, 3, 2), "X", "M1+M2 < N1+2N2", 3, 1, False),
        ((2, 3, 1, 3), "XI", "3(M2−N2) ≤ N1", 3, 3, False),
        ((2, 4, 2, 3), "XI", "3(M2−N2)/2 ≤ N1 < 3(M2−N2)", 4, 3, False),
        ((2, 5, 2, 3), "XI", "M2−N2 ≤ N1 < 3(M2−N2)/2", 5, 1, False),
        ((6, 12, 6, 7), "XI", "M2−N2 ≤ N1 < 3(M2−N2)/2", 12, 1, False),
        ((2, 6, 2, 3), "XI", "N1 < M2−N2", 5, 1, False),
        ((4, 2, 1, 3), "XII", "N1+N2 ≤ M1", 2, 1, False),
        ((3, 2, 1, 3), "XII", "M1 < N1+N2", 2, 1, False),
        ((2, 5, 3, 2), "XIII", "N1+N2 ≤ M2", 5, 1, False),
        ((3, 5, 4, 2), "XIII", "N1+2N2 ≤ M1+M2, M2 < N1+N2", 5, 1, False),
        ((3, 5, 4, 3), "XIII", "M1+M2 < N1+2N2", 5, 1, False),
        ((1, 5, 2, 3), "XIV", "N1+N2 ≤ M2", 5, 1, False),
        ((1, 4, 2, 3), "XIV", "N1+N2 ≤ 2M1+M2, M2 < N1+N2", 4, 1, False),
        ((1, 5, 4, 4), "XVII", "2N1+N2 < M1+M2", 5, 1, True),
        ((4, 1, 3, 1), "XV", "N1+N2 ≤ M1", 3, 1, False),
        ((3, 2, 3, 2), "XV", "M1 < N1+N2", 3, 1, False),
        ((4, 1, 3, 2), "XVI", "N1+N2 ≤ M1+2M2", 3, 1, False),
        ((5, 1, 4, 4), "XVI", "M1+2M2 < N1+N2", 4, 1, True),
    ]
    for shape, catalog, label, dof, t, via in rows:
        res = closed_form_Z_appendix(AntennaConfig(*shape))
        assert res.catalog == catalog, shape
        assert res.regime_label == label, shape
        assert res.dof_total == Fraction(dof), shape
        assert res.row_t == t and res.via_reciprocal == via, shape


def test_served_shapes_report_the_partner_row():
    # no page of its own: served through the reversed-and-relabeled network
    res = closed_form_Z_appendix(AntennaConfig(1, 1, 2, 2))
    hint = res.allocation_hint
    assert res.catalog == "IX" and res.dof_total == 2 and res.via_reciprocal
    assert (hint.d11_ns, hint.d12_ns, hint.side) == (2, 2, "reciprocal")

    res = closed_form_Z_appendix(AntennaConfig(1, 3, 2, 4))
    hint = res.allocation_hint
    assert res.catalog == "XV" and res.dof_total == 3
    assert (hint.d22_ns, hint.side) == (6, "reciprocal")

    # a starred partner row: both hops flip the side, so it lands original
    res = closed_form_Z_appendix(AntennaConfig(5, 5, 6, 1))
    hint = res.allocation_hint
    assert res.catalog == "XVII" and res.dof_total == 6
    assert not res.via_reciprocal and res.row_side == "original"
    assert (hint.d11_ns, hint.d12_ns, hint.t) == (8, 4, 1)


def test_starred_rows_use_the_mirror_page():
    res = closed_form_Z_appendix(AntennaConfig(1, 5, 4, 4))
    hint = res.allocation_hint
    assert res.catalog == "XVII" and res.row_side == "reciprocal"
    assert (hint.d12_ns, hint.d22_ns, hint.t) == (4, 6, 1)

    # mirror shape fails on a tie: falls back to the reversed network
    res = closed_form_Z_appendix(AntennaConfig(1, 3, 3, 3))
    assert res.catalog == "X" and res.dof_total == 3 and res.via_reciprocal

    # past the absorption limit with no mirror partner at all, the page
    # writes the reversed-side row directly instead of delegating
    res = closed_form_Z_appendix(AntennaConfig(5, 1, 4, 4))
    hint = res.allocation_hint
    assert res.catalog == "XVI" and res.dof_total == 4
    assert (hint.d11_ia, hint.d11_ns, hint.side) == (2, 6, "reciprocal")


def test_mirror_page_direct_rows():
    rows = [
        ((6, 6, 4, 7), "3(M1+M2) < 4N1+3N2", 7, 3),
        ((6, 6, 3, 8), "M1+M2 ≤ 2N1+N2", 8, 1),
        ((4, 4, 1, 5), "2N1+N2 < M1+M2", 5, 1),
    ]
    for shape, label, dof, t in rows:
        config = AntennaConfig(*shape)
        res = closed_form_Z_appendix(config, variant="x12")
        assert res.catalog == "XVII" and res.row_side == "original"
        assert res.regime_label == label and res.row_t == t
        assert res.dof_total == Fraction(dof)
        prob = build_px12(config, generic_dims(config), t)
        assert prob.admits(res.allocation_hint)
        assert solve_ilp(prob).dof == res.dof_total


def test_catalog_coverage_on_grid():
    seen = set()
    for shape in product(range(1, 5), repeat=4):
        seen.add(closed_form_Z_appendix(AntennaConfig(*shape)).catalog)
    # the mirror page needs a wider second transmitter than the grid holds
    assert seen == {"IX", "X", "XI", "XII", "XIII", "XIV", "XV", "XVI"}
    seen.add(closed_form_Z_appendix(AntennaConfig(1, 5, 4, 4)).catalog)
    assert "XVII" in seen


def test_unknown_variant_rejected():
    with pytest.raises(InvalidInputError):
        closed_form_Z_appendix(AntennaConfig(2, 2, 2, 2), variant="x11")
