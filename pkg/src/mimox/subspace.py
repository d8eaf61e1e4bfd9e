"""Subspace machinery behind aligned transmission.

Three constructions live here:

* a generalized SVD of two matrices sharing their row count, built from
  principal angles between the column spaces rather than from a joint
  factorization routine, exposing the overlapping / non-overlapping /
  null-space split of each input;
* paired overlap bases for two links into the same receiver, whose columns
  map to identical images (the raw material for alignment);
* random mixing matrices that spread those bases over symbol extensions
  while keeping the per-column pairing intact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .channel import ExtendedChannelSet, acs_embed
from .numerics import (
    DEFAULT_TOLERANCE,
    InvalidInputError,
    TolerancePolicy,
    column_space_basis,
    least_squares_solve,
    min_singular_value,
    null_space_basis,
    numerical_rank,
    subspace_intersection,
)

__all__ = [
    "GsvdDims",
    "GsvdFactors",
    "gsvd",
    "OverlapPair",
    "overlap_pair_basis",
    "null_steer_basis",
    "orthonormal_completion",
    "draw_mixers",
    "make_mixers",
    "MixerSet",
    "embed_bases",
    "build_extended_overlap",
    "MessageBases",
    "extended_message_bases",
    "ExtendedBases",
    "time_varying_bases",
    "mixer_stack_full_rank",
    "MixerStackResult",
]


@dataclass(frozen=True)
class GsvdDims:
    """Dimension bookkeeping for a pair (a, b) with a common row count p.

    q is the dimension of the joint column space, s of the intersection,
    v_a / v_b of the parts of each column space outside the intersection,
    phi_a / phi_b of the null spaces.
    """

    p: int
    m: int
    n: int
    r_a: int
    r_b: int
    q: int
    s: int
    v_a: int
    v_b: int
    phi_a: int
    phi_b: int


@dataclass(eq=False)
class GsvdFactors:
    """Joint factorization a = w @ c_a @ u_a.T, b = w @ c_b @ u_b.T.

    u_a and u_b are orthogonal; their columns are grouped as
    u_a = [overlap | non-overlap | null] and u_b = [non-overlap | overlap |
    null].  c_a and c_b are sparse selection matrices with
    c_a c_a^T + c_b c_b^T equal to the identity on the joint space; the
    gains gamma (for a) and sigma (for b) sit on their shared s x s block
    and satisfy gamma_k^2 + sigma_k^2 = 1, with gamma ascending.
    """

    dims: GsvdDims
    w: np.ndarray
    c_a: np.ndarray
    c_b: np.ndarray
    u_a: np.ndarray
    u_b: np.ndarray
    gamma: np.ndarray
    sigma: np.ndarray

    @property
    def u_a_overlap(self) -> np.ndarray:
        return self.u_a[:, :self.dims.s]

    @property
    def u_a_nonoverlap(self) -> np.ndarray:
        return self.u_a[:, self.dims.s:self.dims.s + self.dims.v_a]

    @property
    def u_a_null(self) -> np.ndarray:
        return self.u_a[:, self.dims.s + self.dims.v_a:]

    @property
    def u_b_nonoverlap(self) -> np.ndarray:
        return self.u_b[:, :self.dims.v_b]

    @property
    def u_b_overlap(self) -> np.ndarray:
        return self.u_b[:, self.dims.v_b:self.dims.v_b + self.dims.s]

    @property
    def u_b_null(self) -> np.ndarray:
        return self.u_b[:, self.dims.v_b + self.dims.s:]


def orthonormal_completion(partial: np.ndarray, space: np.ndarray,
                           tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthonormal basis of span(space) minus span(partial).

    ``partial`` must already be orthonormal and contained in span(space).
    """
    if partial.shape[1] == 0:
        return column_space_basis(space, tol)
    proj = space - partial @ (partial.T @ space)
    if proj.size == 0:
        return np.zeros((space.shape[0], 0))
    u, sv, _ = np.linalg.svd(proj, full_matrices=False)
    # both inputs are orthonormal (unit scale), so an absolute cut is the
    # right call: a relative one miscounts when the residual is negligible
    r = int(np.count_nonzero(sv > 1e-8))
    return u[:, :r]


def gsvd(a, b, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> GsvdFactors:
    """Joint factorization of two real matrices with equal row counts.

    Route: orthonormal bases of both column spaces, principal-angle
    intersection, minimum-norm preimages of the shared directions, then a
    generalized symmetric eigenproblem on the two preimage Gram matrices to
    orthonormalize both overlap blocks at once.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2:
        raise InvalidInputError("inputs must be matrices")
    if a.shape[0] != b.shape[0]:
        raise InvalidInputError("row counts differ")
    p, m = a.shape
    n = b.shape[1]

    qa = column_space_basis(a, tol)
    qb = column_space_basis(b, tol)
    r_a, r_b = qa.shape[1], qb.shape[1]
    q = numerical_rank(np.hstack([a, b]), tol)
    s = r_a + r_b - q
    dims = GsvdDims(p=p, m=m, n=n, r_a=r_a, r_b=r_b, q=q, s=s,
                    v_a=q - r_b, v_b=q - r_a, phi_a=m - r_a, phi_b=n - r_b)

    common = subspace_intersection(qa, qb, tol)
    if common.shape[1] != s:
        raise InvalidInputError(
            f"intersection dimension {common.shape[1]} disagrees with rank "
            f"arithmetic {s}; the inputs sit too close to a rank boundary")

    if s > 0:
        xa = least_squares_solve(a, common, tol)
        xb = least_squares_solve(b, common, tol)
        ma = xa.T @ xa
        mb = xb.T @ xb
        lam, t = scipy.linalg.eigh(ma, mb)
        # eigh orders lam ascending; reverse so the a-side gains ascend
        lam = lam[::-1]
        t = t[:, ::-1]
        if np.any(lam <= 0):
            raise InvalidInputError("overlap Gram matrix lost definiteness")
        gamma = 1.0 / np.sqrt(1.0 + lam)
        sigma = np.sqrt(lam / (1.0 + lam))
        u_a_ov = xa @ t / np.sqrt(lam)
        u_b_ov = xb @ t
        w_mid = common @ t * np.sqrt((1.0 + lam) / lam)
    else:
        gamma = np.zeros(0)
        sigma = np.zeros(0)
        u_a_ov = np.zeros((m, 0))
        u_b_ov = np.zeros((n, 0))
        w_mid = np.zeros((p, 0))

    row_a = column_space_basis(a.T, tol)
    row_b = column_space_basis(b.T, tol)
    u_a_nov = orthonormal_completion(u_a_ov, row_a, tol)
    u_b_nov = orthonormal_completion(u_b_ov, row_b, tol)
    if u_a_nov.shape[1] != dims.v_a or u_b_nov.shape[1] != dims.v_b:
        raise InvalidInputError("non-overlap completion has unexpected dimension")

    u_a = np.hstack([u_a_ov, u_a_nov, null_space_basis(a, tol)])
    u_b = np.hstack([u_b_nov, u_b_ov, null_space_basis(b, tol)])

    w = np.hstack([b @ u_b_nov, w_mid, a @ u_a_nov])

    c_a = np.zeros((q, m))
    c_b = np.zeros((q, n))
    vb = dims.v_b
    if s > 0:
        c_a[vb:vb + s, 0:s] = np.diag(gamma)
        c_b[vb:vb + s, vb:vb + s] = np.diag(sigma)
    if dims.v_a > 0:
        c_a[vb + s:, s:s + dims.v_a] = np.eye(dims.v_a)
    if vb > 0:
        c_b[0:vb, 0:vb] = np.eye(vb)

    return GsvdFactors(dims=dims, w=w, c_a=c_a, c_b=c_b, u_a=u_a, u_b=u_b,
                       gamma=gamma, sigma=sigma)


@dataclass(eq=False)
class OverlapPair:
    """Paired preimages of the shared column-space directions of two links.

    ``h_a @ omega_a[:, l]`` equals ``h_b @ omega_b[:, l]`` equals
    ``common[:, l]`` for every l, so firing the l-th column of each basis
    from each transmitter lands on one receive direction.
    """

    omega_a: np.ndarray
    omega_b: np.ndarray
    common: np.ndarray


def overlap_pair_basis(h_a, h_b, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> OverlapPair:
    """Column-paired bases of the overlap between two links into one receiver.

    Accepts real (embedded) or complex matrices.
    """
    h_a = np.asarray(h_a)
    h_b = np.asarray(h_b)
    if h_a.ndim != 2 or h_b.ndim != 2:
        raise InvalidInputError("links must be matrices")
    if h_a.shape[0] != h_b.shape[0]:
        raise InvalidInputError("links do not share a receiver dimension")
    qa = column_space_basis(h_a, tol)
    qb = column_space_basis(h_b, tol)
    common = subspace_intersection(qa, qb, tol)
    omega_a = least_squares_solve(h_a, common, tol)
    omega_b = least_squares_solve(h_b, common, tol)
    return OverlapPair(omega_a=omega_a, omega_b=omega_b, common=common)


def null_steer_basis(h, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthonormal basis of directions invisible to link ``h``."""
    return null_space_basis(h, tol)


def draw_mixers(rng: np.random.Generator, dim: int, count: int,
                min_sv: float = 1e-6, max_tries: int = 64) -> List[np.ndarray]:
    """Draw ``count`` well-conditioned square mixing matrices.

    Entries are uniform on [-1, 1]; a draw whose smallest singular value
    falls below ``min_sv`` is discarded and redrawn.
    """
    if dim < 0 or count < 0:
        raise InvalidInputError("dim and count must be non-negative")
    if dim == 0:
        return [np.zeros((0, 0)) for _ in range(count)]
    out = []
    for _ in range(count):
        for _attempt in range(max_tries):
            cand = rng.uniform(-1.0, 1.0, size=(dim, dim))
            if min_singular_value(cand) > min_sv:
                out.append(cand)
                break
        else:
            raise InvalidInputError("could not draw a well-conditioned mixer")
    return out


@dataclass(eq=False)
class MixerSet:
    """Per-receiver-target mixer sequences over a symbol extension.

    ``mixers[i]`` holds the T matrices shared by the two messages intended
    for receiver i; both are mixed identically so their cross images keep
    pairing column by column.
    """

    t: int
    mixers: Dict[int, List[np.ndarray]]

    def for_target(self, i: int) -> List[np.ndarray]:
        return self.mixers[i]


def make_mixers(overlap_dims, t: int, seed: int,
                min_sv: float = 1e-6) -> MixerSet:
    """Mixer sequences for both receiver targets.

    ``overlap_dims`` gives the overlap dimension s_k at each receiver
    (mapping or pair, receiver 1 first).  The messages intended for
    receiver i mix inside the overlap at the other receiver, so their
    mixers are square of side 2 s_{3-i}.  Stream draws match
    ``extended_message_bases`` seed for seed.
    """
    if t < 1:
        raise InvalidInputError("extension length must be positive")
    try:
        dims = {1: int(overlap_dims[1]), 2: int(overlap_dims[2])}
    except (KeyError, IndexError, TypeError):
        pair = tuple(overlap_dims)
        if len(pair) != 2:
            raise InvalidInputError("overlap_dims must give both receivers")
        dims = {1: int(pair[0]), 2: int(pair[1])}
    out: Dict[int, List[np.ndarray]] = {}
    for i in (1, 2):
        rng = np.random.default_rng([seed, i])
        out[i] = draw_mixers(rng, 2 * dims[3 - i], t, min_sv=min_sv)
    return MixerSet(t=t, mixers=out)


def embed_bases(omega, psi, t: int):
    """Real-embed complex alignment and steering bases for one link.

    Returns the embedded overlap basis, the embedded steering basis, and
    the steering basis repeated down the diagonal of a ``t``-period
    extension (a constant channel steers the same way every period).
    """
    if t < 1:
        raise InvalidInputError("extension length must be positive")
    omega_emb = acs_embed(np.asarray(omega))
    psi_emb = acs_embed(np.asarray(psi))
    psi_hat = np.kron(np.eye(t), psi_emb)
    return omega_emb, psi_emb, psi_hat


def build_extended_overlap(omega_emb, mixers: Sequence[np.ndarray]) -> np.ndarray:
    """Stack a per-period overlap basis through a mixer sequence.

    ``omega_emb`` is either one embedded basis reused every period or a
    sequence with one basis per period.
    """
    mixers = list(mixers)
    if not mixers:
        raise InvalidInputError("need at least one mixer")
    if isinstance(omega_emb, np.ndarray):
        per_period = [omega_emb] * len(mixers)
    else:
        per_period = [np.asarray(m) for m in omega_emb]
    if len(per_period) != len(mixers):
        raise InvalidInputError("one mixer per period required")
    for om, mx in zip(per_period, mixers):
        if om.shape[1] != mx.shape[0]:
            raise InvalidInputError("mixer side does not match overlap width")
    return np.vstack([om @ mx for om, mx in zip(per_period, mixers)])


@dataclass(eq=False)
class MessageBases:
    """Extended-input bases available to one message.

    ``omega``: columns whose cross-receiver images pair up with the partner
    message's columns (alignment material).  ``psi``: columns the cross
    receiver cannot see at all (null-steering material).
    """

    omega: np.ndarray
    psi: np.ndarray


def extended_message_bases(ext: ExtendedChannelSet, seed: int,
                           tol: TolerancePolicy = DEFAULT_TOLERANCE,
                           ) -> Dict[Tuple[int, int], MessageBases]:
    """Alignment and null-steering bases for all four messages.

    For the message pair intended for receiver i, overlap bases are taken at
    the other receiver k and stacked over the symbol extension with one
    shared mixer sequence, so the two cross images stay equal column by
    column.  Null-steering bases extend blockwise (identity Kronecker for a
    constant channel, per-period blocks otherwise).
    """
    t = ext.t
    slots = ext.slots if not ext.constant else [ext.slots[0]] * t
    out: Dict[Tuple[int, int], MessageBases] = {}
    for i in (1, 2):
        k = 3 - i
        pairs = [overlap_pair_basis(acs_embed(s.link(k, 1)),
                                    acs_embed(s.link(k, 2)), tol)
                 for s in slots]
        widths = {p.common.shape[1] for p in pairs}
        if len(widths) != 1:
            raise InvalidInputError("overlap dimension varies across periods")
        width = widths.pop()
        rng = np.random.default_rng([seed, i])
        mixers = draw_mixers(rng, width, t)
        if t > 1 and width > 0:
            for a in range(t):
                for b in range(a + 1, t):
                    if np.array_equal(mixers[a], mixers[b]):
                        raise InvalidInputError("mixer sequence repeats")
        for j in (1, 2):
            omega_slots = [p.omega_a if j == 1 else p.omega_b for p in pairs]
            omega = np.vstack([om @ mx for om, mx in zip(omega_slots, mixers)])
            psi_slots = [null_steer_basis(acs_embed(s.link(k, j)), tol)
                         for s in slots]
            psi = scipy.linalg.block_diag(*psi_slots)
            out[(i, j)] = MessageBases(omega=omega, psi=psi)
    return out


@dataclass(eq=False)
class ExtendedBases:
    """Overlap pairs and steering bases computed on full extended matrices."""

    overlap: Dict[int, OverlapPair]
    steer: Dict[Tuple[int, int], np.ndarray]


def time_varying_bases(ext: ExtendedChannelSet,
                       tol: TolerancePolicy = DEFAULT_TOLERANCE) -> ExtendedBases:
    """Alignment and steering bases straight from the extended matrices.

    Unlike the per-period route, this works on the full block matrices, so
    it is valid whether or not the channel repeats across periods.
    """
    overlap: Dict[int, OverlapPair] = {}
    steer: Dict[Tuple[int, int], np.ndarray] = {}
    for k in (1, 2):
        overlap[k] = overlap_pair_basis(ext.link(k, 1), ext.link(k, 2), tol)
        for j in (1, 2):
            steer[(k, j)] = null_steer_basis(ext.link(k, j), tol)
    return ExtendedBases(overlap=overlap, steer=steer)


@dataclass(frozen=True)
class MixerStackResult:
    min_sv: float
    full_rank: bool
    rows: int
    cols: int


def _rotation_grid(rng: np.random.Generator, n: int, s: int,
                   phases: Optional[np.ndarray] = None) -> np.ndarray:
    """Grid of scaled 2x2 rotations, one block per (receive, overlap) pair."""
    mags = rng.uniform(0.5, 1.5, size=(n, s))
    if phases is None:
        phases = rng.uniform(0.0, 2.0 * np.pi, size=(n, s))
    grid = np.zeros((2 * n, 2 * s))
    for a in range(n):
        for b in range(s):
            c, d = np.cos(phases[a, b]), np.sin(phases[a, b])
            grid[2 * a:2 * a + 2, 2 * b:2 * b + 2] = mags[a, b] * np.array(
                [[c, -d], [d, c]])
    return grid


def mixer_stack_full_rank(n: int, s: int, t: int, d: int, seed: int,
                          aligned_phases: bool = False,
                          tol: float = 1e-9) -> MixerStackResult:
    """Numerically probe the rank of a mixed two-source observation stack.

    Two sources see the same receiver through independent rotation grids
    (2n x 2s each); over ``t`` periods each source sends the first d/2
    columns of a shared random mixer.  The stacked observation matrix is
    2nt x d and should have full column rank whenever d <= 2 t min(n, s),
    except in degenerate phase-locked draws (``aligned_phases`` wires one
    up for demonstration).
    """
    if d % 2:
        raise InvalidInputError("d must be even (two equal column blocks)")
    if d > 2 * t * min(n, s):
        raise InvalidInputError("d exceeds the dimension budget 2 t min(n, s)")
    if d == 0:
        raise InvalidInputError("d must be positive")
    rng = np.random.default_rng(seed)
    phases_a = rng.uniform(0.0, 2.0 * np.pi, size=(n, s))
    grid_a = _rotation_grid(rng, n, s, phases_a)
    if aligned_phases:
        grid_b = grid_a.copy()
    else:
        grid_b = _rotation_grid(rng, n, s)
    half = d // 2
    blocks = []
    for _ in range(t):
        mixer = rng.uniform(-1.0, 1.0, size=(2 * s, 2 * s))
        cols = mixer[:, :half]
        blocks.append(np.hstack([grid_a @ cols, grid_b @ cols]))
    stack = np.vstack(blocks)
    sv = np.linalg.svd(stack, compute_uv=False)
    smallest = float(sv[-1])
    return MixerStackResult(min_sv=smallest, full_rank=smallest > tol,
                            rows=stack.shape[0], cols=d)
