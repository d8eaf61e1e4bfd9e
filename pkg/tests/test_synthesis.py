import numpy as np
import pytest

from mimox.allocator import StreamAllocation
from mimox.channel import (
    AntennaConfig,
    extend_constant,
    generate_full_rank,
    reciprocal_channels,
)
from mimox.closed_forms import closed_form_X21
from mimox.numerics import InvalidInputError, Rational
from mimox.synthesis import (
    FeasibilityError,
    InfeasibleAllocationError,
    assemble_G,
    build_precoders,
    build_receivers,
    design,
    lemma16_check,
    reciprocal_transfer,
    verify_feasibility,
)
from mimox.subspace import extended_message_bases


def _alloc(ia, ns, t, side="original"):
    return StreamAllocation(
        d11_ia=ia[0], d12_ia=ia[1], d21_ia=ia[2], d22_ia=ia[3],
        d11_ns=ns[0], d12_ns=ns[1], d21_ns=ns[2], d22_ns=ns[3],
        t=t, side=side,
    )


def _design_on(config, alloc, seed):
    cs = generate_full_rank(config, seed=seed)
    ext = extend_constant(cs, alloc.t)
    pre, rec = design(ext, alloc, seed=seed + 17)
    return cs, ext, pre, rec


def test_symmetric_aligned_design_passes():
    config = AntennaConfig(3, 3, 3, 3)
    alloc = _alloc((6, 6, 6, 6), (0, 0, 0, 0), t=3)
    for seed in range(3):
        cs, ext, pre, rec = _design_on(config, alloc, seed)
        for key in pre.v:
            assert pre.v[key].shape == (18, 6)
            assert pre.z[key].shape == (18, 0)
        report = verify_feasibility(ext, pre, rec)
        assert report.passed, report.to_json()
        assert report.achieved_dof == Rational(4)
        assert report.max_zero_forcing_residual <= 1e-8


def test_aligned_images_coincide_column_by_column():
    # both messages bound for a receiver interfere at the other one
    # through identical columns, not merely identical spans
    config = AntennaConfig(3, 3, 3, 3)
    alloc = _alloc((6, 6, 6, 6), (0, 0, 0, 0), t=3)
    cs, ext, pre, rec = _design_on(config, alloc, seed=11)
    for i in (1, 2):
        k = 3 - i
        lhs = ext.link(k, 1) @ pre.v[(i, 1)]
        rhs = ext.link(k, 2) @ pre.v[(i, 2)]
        assert np.allclose(lhs, rhs, atol=1e-10)


def test_null_steered_design_passes():
    config = AntennaConfig(6, 6, 3, 3)
    alloc = _alloc((0, 0, 0, 0), (3, 3, 3, 3), t=1)
    cs, ext, pre, rec = _design_on(config, alloc, seed=4)
    # steered streams vanish at the receiver they avoid
    for (i, j) in ((1, 1), (1, 2), (2, 1), (2, 2)):
        k = 3 - i
        leak = ext.link(k, j) @ pre.z[(i, j)]
        assert np.linalg.norm(leak) <= 1e-10
    report = verify_feasibility(ext, pre, rec)
    assert report.passed, report.to_json()
    assert report.achieved_dof == Rational(6)


@pytest.mark.parametrize("m,n", [(4, 3), (7, 3)])
def test_single_message_dropped_rows_are_realizable(m, n):
    res = closed_form_X21(m, n)
    alloc = res.allocation_hint
    assert alloc.ia(2, 1) == 0 and alloc.ns(2, 1) == 0
    cs, ext, pre, rec = _design_on(AntennaConfig(m, m, n, n), alloc, seed=9)
    assert pre.v[(2, 1)].shape[1] == 0
    assert pre.z[(2, 1)].shape[1] == 0
    report = verify_feasibility(ext, pre, rec)
    assert report.passed, report.to_json()
    assert report.achieved_dof == res.dof_total


def test_interference_channel_style_allocation():
    config = AntennaConfig(3, 3, 3, 3)
    alloc = _alloc((3, 0, 0, 3), (0, 0, 0, 0), t=1)
    cs, ext, pre, rec = _design_on(config, alloc, seed=2)
    report = verify_feasibility(ext, pre, rec)
    assert report.passed, report.to_json()
    assert report.achieved_dof == Rational(3)


def test_reversed_network_reuses_the_design():
    # nothing is designable on (2,2,5,5) directly: no cross-link null
    # space and no overlap, so the reversed network does the work
    fwd = AntennaConfig(5, 5, 2, 2)
    alloc = _alloc((0, 0, 0, 0), (2, 2, 2, 2), t=1)
    cs, ext, pre, rec = _design_on(fwd, alloc, seed=21)
    report = verify_feasibility(ext, pre, rec)
    assert report.passed, report.to_json()

    rpre, rrec = reciprocal_transfer(pre, rec)
    assert rpre.allocation.side == "reciprocal"
    assert rpre.allocation.dof == Rational(4)
    # filters become precoders, transposed and index-swapped
    assert np.array_equal(rpre.z[(1, 2)], rec.f[(2, 1)].T)
    assert np.array_equal(rrec.l[(2, 1)], pre.v[(1, 2)].T)
    assert rpre.z[(1, 1)].shape == (4, 2)
    assert rrec.f[(1, 1)].shape == (2, 10)

    rext = extend_constant(reciprocal_channels(cs), 1)
    rreport = verify_feasibility(rext, rpre, rrec)
    assert rreport.passed, rreport.to_json()
    assert rreport.achieved_dof == Rational(4)


def test_overfull_allocation_is_rejected():
    config = AntennaConfig(3, 3, 3, 3)
    cs = generate_full_rank(config, seed=0)
    ext = extend_constant(cs, 1)
    bases = extended_message_bases(ext, seed=0)
    alloc = _alloc((8, 0, 0, 0), (0, 0, 0, 0), t=1)
    with pytest.raises(InfeasibleAllocationError):
        build_precoders(bases, alloc)


def test_receiver_overload_fails_loudly():
    # four streams per message fit the bases but drown the receivers
    config = AntennaConfig(3, 3, 3, 3)
    cs = generate_full_rank(config, seed=6)
    ext = extend_constant(cs, 1)
    bases = extended_message_bases(ext, seed=6)
    alloc = _alloc((4, 4, 4, 4), (0, 0, 0, 0), t=1)
    pre = build_precoders(bases, alloc)
    with pytest.raises(FeasibilityError):
        build_receivers(ext, pre)


def test_signal_space_blocks_and_width_guard():
    config = AntennaConfig(3, 3, 3, 3)
    alloc = _alloc((6, 6, 6, 6), (0, 0, 0, 0), t=3)
    cs, ext, pre, rec = _design_on(config, alloc, seed=13)
    ssm = assemble_G(1, ext, pre)
    assert ssm.receiver == 1
    assert ssm.g.shape == (18, 18)
    kinds = [kind for kind, _, _ in ssm.labels]
    assert kinds == [
        "desired_ia", "desired_ia", "desired_ns", "desired_ns", "interference",
    ]
    assert sum(width for _, _, width in ssm.labels) == 18

    cs2 = generate_full_rank(config, seed=1)
    ext2 = extend_constant(cs2, 1)
    bases2 = extended_message_bases(ext2, seed=1)
    pre2 = build_precoders(bases2, _alloc((4, 4, 4, 4), (0, 0, 0, 0), t=1))
    with pytest.raises(InfeasibleAllocationError):
        assemble_G(1, ext2, pre2)
    with pytest.raises(InvalidInputError):
        assemble_G(3, ext2, pre2)


def test_extension_mismatch_is_rejected():
    config = AntennaConfig(3, 3, 3, 3)
    cs = generate_full_rank(config, seed=0)
    ext = extend_constant(cs, 2)
    alloc = _alloc((2, 0, 0, 0), (0, 0, 0, 0), t=1)
    with pytest.raises(InvalidInputError):
        design(ext, alloc, seed=0)


def test_report_serialization():
    config = AntennaConfig(6, 6, 3, 3)
    alloc = _alloc((0, 0, 0, 0), (3, 3, 3, 3), t=1)
    cs, ext, pre, rec = _design_on(config, alloc, seed=8)
    payload = verify_feasibility(ext, pre, rec).to_json()
    assert payload["passed"] is True
    assert payload["achieved_dof"] == "6"
    assert set(payload["decode_rank_ok"]) == {"11", "12", "21", "22"}
    assert set(payload["min_g_singular_value"]) == {"1", "2"}
    assert payload["min_g_singular_value"]["1"] > 1e-6


def test_mixed_overlap_stack_probe():
    assert lemma16_check(2, 2, 2, 6, seed=1)
    assert not lemma16_check(1, 1, 1, 2, seed=3, aligned_phases=True)
