import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mimox.channel import AntennaConfig, acs_embed, extend_constant, generate_full_rank, generate_time_varying
from mimox.numerics import InvalidInputError, numerical_rank
from mimox.subspace import (
    build_extended_overlap,
    draw_mixers,
    embed_bases,
    extended_message_bases,
    gsvd,
    make_mixers,
    mixer_stack_full_rank,
    null_steer_basis,
    overlap_pair_basis,
    time_varying_bases,
)


def planted_pair(seed, p=6, ra=3, rb=3, s=2, m=4, n=4):
    """Two matrices whose column spaces overlap in exactly s dimensions."""
    assert ra - s + rb <= p and s <= min(ra, rb)
    rng = np.random.default_rng(seed)
    q_full, _ = np.linalg.qr(rng.standard_normal((p, p)))
    a = q_full[:, :ra] @ rng.standard_normal((ra, m))
    b = q_full[:, ra - s:ra - s + rb] @ rng.standard_normal((rb, n))
    return a, b


@given(st.integers(0, 500))
@settings(max_examples=30, deadline=None)
def test_gsvd_reconstructs_planted_pair(seed):
    a, b = planted_pair(seed)
    f = gsvd(a, b)
    assert (f.dims.r_a, f.dims.r_b, f.dims.s, f.dims.q) == (3, 3, 2, 4)
    assert np.max(np.abs(f.w @ f.c_a @ f.u_a.T - a)) < 1e-8
    assert np.max(np.abs(f.w @ f.c_b @ f.u_b.T - b)) < 1e-8


@given(st.integers(0, 500), st.integers(2, 5), st.integers(2, 5), st.integers(4, 7))
@settings(max_examples=40, deadline=None)
def test_gsvd_generic_shapes(seed, m, n, p):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((p, m))
    b = rng.standard_normal((p, n))
    f = gsvd(a, b)
    d = f.dims
    # dimension bookkeeping against independent rank computations
    assert d.r_a == numerical_rank(a) and d.r_b == numerical_rank(b)
    assert d.q == numerical_rank(np.hstack([a, b]))
    assert d.s == d.r_a + d.r_b - d.q
    assert d.v_a == d.q - d.r_b and d.v_b == d.q - d.r_a
    # factorization holds
    assert np.max(np.abs(f.w @ f.c_a @ f.u_a.T - a)) < 1e-7
    assert np.max(np.abs(f.w @ f.c_b @ f.u_b.T - b)) < 1e-7
    # u factors orthogonal, selection matrices complementary
    assert np.allclose(f.u_a.T @ f.u_a, np.eye(m), atol=1e-8)
    assert np.allclose(f.u_b.T @ f.u_b, np.eye(n), atol=1e-8)
    assert np.allclose(f.c_a @ f.c_a.T + f.c_b @ f.c_b.T, np.eye(d.q), atol=1e-12)
    # gains: ascending on the a side, complementary squares
    assert np.allclose(f.gamma ** 2 + f.sigma ** 2, 1.0)
    assert np.all(np.diff(f.gamma) >= -1e-12)
    # w has independent columns spanning the joint space
    assert numerical_rank(f.w) == d.q


def test_gsvd_overlap_columns_map_consistently():
    a, b = planted_pair(7)
    f = gsvd(a, b)
    s = f.dims.s
    w_mid = f.w[:, f.dims.v_b:f.dims.v_b + s]
    assert np.allclose(a @ f.u_a_overlap, w_mid * f.gamma, atol=1e-9)
    assert np.allclose(b @ f.u_b_overlap, w_mid * f.sigma, atol=1e-9)


def test_gsvd_disjoint_and_nested():
    rng = np.random.default_rng(1)
    q_full, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    a = q_full[:, :2] @ rng.standard_normal((2, 3))
    b = q_full[:, 2:5] @ rng.standard_normal((3, 4))
    f = gsvd(a, b)
    assert f.dims.s == 0 and f.gamma.size == 0
    assert np.max(np.abs(f.w @ f.c_a @ f.u_a.T - a)) < 1e-9
    # nested: col(b2) inside col(a)
    b2 = q_full[:, :1] @ rng.standard_normal((1, 2))
    f2 = gsvd(a, b2)
    assert f2.dims.s == 1 and f2.dims.v_b == 0


def test_gsvd_rejects_mismatched_rows():
    with pytest.raises(InvalidInputError):
        gsvd(np.eye(3), np.eye(4))


CFG = AntennaConfig(2, 2, 3, 3)


def test_overlap_pair_columns_agree():
    cs = generate_full_rank(CFG, seed=3)
    ha = acs_embed(cs.link(2, 1))
    hb = acs_embed(cs.link(2, 2))
    pair = overlap_pair_basis(ha, hb)
    # embedded overlap dimension: 2 * (M1 + M2 - N2) for full rank
    assert pair.common.shape[1] == 2 * (CFG.m1 + CFG.m2 - CFG.n2)
    assert np.max(np.abs(ha @ pair.omega_a - pair.common)) < 1e-9
    assert np.max(np.abs(hb @ pair.omega_b - pair.common)) < 1e-9
    # preimages live in the row spaces: null-steering directions cannot mix in
    psi_a = null_steer_basis(ha)
    if psi_a.shape[1]:
        assert np.max(np.abs(psi_a.T @ pair.omega_a)) < 1e-9


def test_overlap_pair_empty_when_disjoint():
    rng = np.random.default_rng(0)
    q_full, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    ha = q_full[:, :2] @ rng.standard_normal((2, 2))
    hb = q_full[:, 2:] @ rng.standard_normal((2, 2))
    pair = overlap_pair_basis(ha, hb)
    assert pair.common.shape[1] == 0
    assert pair.omega_a.shape == (2, 0)


def test_draw_mixers():
    rng = np.random.default_rng(5)
    ms = draw_mixers(rng, 4, 3)
    assert len(ms) == 3
    for m in ms:
        assert m.shape == (4, 4)
        assert np.min(np.abs(np.linalg.svd(m, compute_uv=False))) > 1e-6
        assert np.max(np.abs(m)) <= 1.0
    assert not np.array_equal(ms[0], ms[1])
    zero = draw_mixers(rng, 0, 2)
    assert len(zero) == 2 and zero[0].shape == (0, 0)
    # determinism under a fixed stream
    again = draw_mixers(np.random.default_rng(5), 4, 3)
    assert all(np.array_equal(x, y) for x, y in zip(ms, again))


def test_make_mixers_per_target_sizes_and_determinism():
    ms = make_mixers({1: 2, 2: 3}, t=3, seed=9)
    assert ms.t == 3
    # target i mixes inside the overlap at the other receiver
    assert all(m.shape == (6, 6) for m in ms.for_target(1))
    assert all(m.shape == (4, 4) for m in ms.for_target(2))
    assert len(ms.for_target(1)) == 3
    pairwise = ms.for_target(1)
    assert not np.array_equal(pairwise[0], pairwise[1])
    again = make_mixers((2, 3), t=3, seed=9)
    for i in (1, 2):
        assert all(np.array_equal(x, y)
                   for x, y in zip(ms.for_target(i), again.for_target(i)))


def test_embed_bases_and_extended_overlap():
    cs = generate_full_rank(CFG, seed=11)
    h1, h2 = cs.link(2, 1), cs.link(2, 2)
    pair = overlap_pair_basis(h1, h2)  # complex route
    psi = null_steer_basis(h1)
    om_emb, psi_emb, psi_hat = embed_bases(pair.omega_a, psi, t=3)
    assert om_emb.shape == (2 * CFG.m1, 2 * pair.omega_a.shape[1])
    assert psi_hat.shape == (6 * CFG.m1, 6 * psi.shape[1])
    # embedded pairing survives: both embedded images coincide
    om_b_emb = embed_bases(pair.omega_b, psi, t=1)[0]
    lhs = acs_embed(h1) @ om_emb
    rhs = acs_embed(h2) @ om_b_emb
    assert np.max(np.abs(lhs - rhs)) < 1e-9
    # identity mixer reproduces the basis; stacking matches manual kron
    width = om_emb.shape[1]
    assert np.array_equal(build_extended_overlap(om_emb, [np.eye(width)]), om_emb)
    mixers = make_mixers({1: 0, 2: pair.omega_a.shape[1]}, t=2, seed=3).for_target(1)
    stacked = build_extended_overlap(om_emb, mixers)
    assert stacked.shape == (2 * om_emb.shape[0], width)
    assert np.allclose(stacked[:om_emb.shape[0]], om_emb @ mixers[0])
    with pytest.raises(InvalidInputError):
        build_extended_overlap(om_emb, [np.eye(width + 2)])


def test_time_varying_bases_dimensions():
    cfg = AntennaConfig(3, 2, 3, 3)
    ext = generate_time_varying(cfg, 2, seed=6)
    bases = time_varying_bases(ext)
    for k in (1, 2):
        pair = bases.overlap[k]
        r1 = numerical_rank(ext.link(k, 1))
        r2 = numerical_rank(ext.link(k, 2))
        q = numerical_rank(np.hstack([ext.link(k, 1), ext.link(k, 2)]))
        assert pair.common.shape[1] == r1 + r2 - q
        for j in (1, 2):
            psi = bases.steer[(k, j)]
            assert psi.shape[1] == 2 * ext.t * cfg.tx(j) - numerical_rank(ext.link(k, j))
            if psi.shape[1]:
                assert np.max(np.abs(ext.link(k, j) @ psi)) < 1e-9


@pytest.mark.parametrize("t", [1, 2, 3])
def test_extended_bases_alignment_constant(t):
    cs = generate_full_rank(CFG, seed=8)
    ext = extend_constant(cs, t)
    bases = extended_message_bases(ext, seed=8)
    for i in (1, 2):
        k = 3 - i
        om1, om2 = bases[(i, 1)].omega, bases[(i, 2)].omega
        # cross-receiver images coincide column by column
        img1 = ext.link(k, 1) @ om1
        img2 = ext.link(k, 2) @ om2
        assert img1.shape == img2.shape
        assert np.max(np.abs(img1 - img2)) < 1e-8
        # overlap width is period independent
        assert om1.shape == (2 * t * CFG.m1, 2 * (CFG.m1 + CFG.m2 - ext.config.rx(k)))
        for j in (1, 2):
            psi = bases[(i, j)].psi
            phi = ext.config.tx(j) - min(ext.config.rx(k), ext.config.tx(j))
            assert psi.shape == (2 * t * ext.config.tx(j), 2 * t * phi)
            if psi.shape[1]:
                assert np.max(np.abs(ext.link(k, j) @ psi)) < 1e-9


def test_extended_bases_alignment_time_varying():
    cfg = AntennaConfig(3, 2, 3, 3)
    ext = generate_time_varying(cfg, 2, seed=4)
    bases = extended_message_bases(ext, seed=4)
    for i in (1, 2):
        k = 3 - i
        img1 = ext.link(k, 1) @ bases[(i, 1)].omega
        img2 = ext.link(k, 2) @ bases[(i, 2)].omega
        assert np.max(np.abs(img1 - img2)) < 1e-8
        psi = bases[(i, 1)].psi
        if psi.shape[1]:
            assert np.max(np.abs(ext.link(k, 1) @ psi)) < 1e-9


def test_mixer_stack_full_rank_generic_and_degenerate():
    ok = mixer_stack_full_rank(n=2, s=2, t=2, d=6, seed=1)
    assert ok.full_rank and ok.rows == 8 and ok.cols == 6
    # budget-saturating case still generically full
    ok2 = mixer_stack_full_rank(n=2, s=3, t=2, d=8, seed=2)
    assert ok2.full_rank
    # phase-locked single-dimension case collapses
    bad = mixer_stack_full_rank(n=1, s=1, t=1, d=2, seed=3, aligned_phases=True)
    assert not bad.full_rank and bad.min_sv < 1e-9
    with pytest.raises(InvalidInputError):
        mixer_stack_full_rank(n=1, s=1, t=1, d=3, seed=0)
    with pytest.raises(InvalidInputError):
        mixer_stack_full_rank(n=1, s=1, t=1, d=4, seed=0)
