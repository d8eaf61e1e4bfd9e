"""Precoder and receiver synthesis for a chosen stream allocation.

The transmit side is assembled from the per-message bases: alignment
streams take prefix columns of the shared-overlap basis, steered streams
take prefix columns of the cross-link null basis.  The receive side is
picked inside the left null space of everything a filter must reject, so
zero-forcing holds by construction and only the decode ranks and the
joint signal-space conditioning remain to be checked numerically.

Designs transfer to the reversed network by transposition: receive
filters become precoders and vice versa, with the user indices swapped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
import scipy.linalg

from .allocator import StreamAllocation
from .channel import ExtendedChannelSet, LINKS
from .numerics import (
    DEFAULT_TOLERANCE,
    InvalidInputError,
    Rational,
    TolerancePolicy,
    column_space_basis,
    format_rational,
    left_null_space_basis,
    min_singular_value,
    numerical_rank,
)
from .subspace import (
    MessageBases,
    extended_message_bases,
    mixer_stack_full_rank,
)

__all__ = [
    "InfeasibleAllocationError",
    "FeasibilityError",
    "PrecoderSet",
    "ReceiverSet",
    "SignalSpaceMatrix",
    "VerificationReport",
    "build_precoders",
    "build_receivers",
    "assemble_G",
    "verify_feasibility",
    "reciprocal_transfer",
    "lemma16_check",
    "design",
]

# Floor on the smallest singular value of the column-normalized signal
# space matrix; below this the desired and leaked directions are too
# close to separate reliably.
G_CONDITIONING_FLOOR = 1e-6


class InfeasibleAllocationError(InvalidInputError):
    """The allocation asks for more streams than the bases provide."""


class FeasibilityError(RuntimeError):
    """This channel draw cannot support the allocation.

    Raised instead of silently resampling, so a failing draw is always
    visible to the caller.
    """


@dataclass(eq=False)
class PrecoderSet:
    """Transmit-side design: per message, aligned and steered columns."""

    v: Dict[Tuple[int, int], np.ndarray]
    z: Dict[Tuple[int, int], np.ndarray]
    allocation: StreamAllocation


@dataclass(eq=False)
class ReceiverSet:
    """Receive-side design: per message, aligned and steered filter rows."""

    l: Dict[Tuple[int, int], np.ndarray]
    f: Dict[Tuple[int, int], np.ndarray]


@dataclass(eq=False)
class SignalSpaceMatrix:
    """Stacked images a receiver must resolve, with block provenance.

    ``labels`` holds one ``(kind, message, width)`` triple per block,
    where kind is ``desired_ia``, ``desired_ns`` or ``interference``.
    """

    receiver: int
    g: np.ndarray
    labels: Tuple[Tuple[str, Tuple[int, int], int], ...]


@dataclass(eq=False)
class VerificationReport:
    max_zero_forcing_residual: float
    alignment_residual: float
    min_g_singular_value: Dict[int, Optional[float]]
    decode_rank_ok: Dict[Tuple[int, int], bool]
    achieved_dof: Rational
    passed: bool

    def to_json(self) -> dict:
        return {
            "max_zero_forcing_residual": self.max_zero_forcing_residual,
            "alignment_residual": self.alignment_residual,
            "min_g_singular_value": {
                str(i): sv for i, sv in sorted(self.min_g_singular_value.items())
            },
            "decode_rank_ok": {
                f"{i}{j}": ok for (i, j), ok in sorted(self.decode_rank_ok.items())
            },
            "achieved_dof": format_rational(self.achieved_dof),
            "passed": self.passed,
        }


def build_precoders(
    bases: Mapping[Tuple[int, int], MessageBases],
    allocation: StreamAllocation,
) -> PrecoderSet:
    """Cut each message's precoders out of its basis prefixes.

    Aligned streams use the first ``d_ij_ia`` overlap columns so that
    messages sharing a target receiver occupy the same leading
    directions there; steered streams use the first ``d_ij_ns`` null
    columns.  Asking for more columns than a basis has raises
    :class:`InfeasibleAllocationError`.
    """
    v: Dict[Tuple[int, int], np.ndarray] = {}
    z: Dict[Tuple[int, int], np.ndarray] = {}
    for (i, j) in LINKS:
        base = bases[(i, j)]
        d_ia = allocation.ia(i, j)
        d_ns = allocation.ns(i, j)
        if d_ia > base.omega.shape[1]:
            raise InfeasibleAllocationError(
                f"message ({i},{j}) asks for {d_ia} aligned streams but the "
                f"overlap basis has only {base.omega.shape[1]} columns"
            )
        if d_ns > base.psi.shape[1]:
            raise InfeasibleAllocationError(
                f"message ({i},{j}) asks for {d_ns} steered streams but the "
                f"null basis has only {base.psi.shape[1]} columns"
            )
        v[(i, j)] = base.omega[:, :d_ia].copy()
        z[(i, j)] = base.psi[:, :d_ns].copy()
    return PrecoderSet(v=v, z=z, allocation=allocation)


def _select_filter(
    nuisance: np.ndarray,
    desired: np.ndarray,
    d: int,
    tol: TolerancePolicy,
) -> np.ndarray:
    """Pick d left-null rows of the nuisance stack that keep the desired
    image at full rank.

    Rows are chosen by column-pivoted QR on the desired image expressed
    in null-space coordinates, so the selection is deterministic and
    favors well-conditioned decode matrices.
    """
    rows = nuisance.shape[0]
    if d == 0:
        return np.zeros((0, rows))
    basis = left_null_space_basis(nuisance, tol)
    if basis.shape[1] < d:
        raise FeasibilityError(
            f"need {d} interference-free dimensions but the draw left only "
            f"{basis.shape[1]}"
        )
    coords = basis.T @ desired
    _, _, pivots = scipy.linalg.qr(coords.T, mode="economic", pivoting=True)
    chosen = np.sort(pivots[:d])
    filt = basis[:, chosen].T
    if numerical_rank(filt @ desired, tol) < d:
        raise FeasibilityError("decode matrix is rank deficient for this draw")
    return filt


def build_receivers(
    ext: ExtendedChannelSet,
    pre: PrecoderSet,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> ReceiverSet:
    """Solve for per-message filters inside the interference-free space.

    The aligned filter for message (i, j) must reject the message's own
    steered streams, everything the co-located message sends, and the
    other receiver's aligned transmissions; the steered filter swaps the
    own-message roles.  The other receiver's steered streams are not
    stacked: the transmit side already placed them in the cross-link
    null space, and their roundoff-sized images would otherwise pollute
    the rank decision when nothing else reaches the receiver.
    """
    for (i, j) in LINKS:
        expect = ext.link(i, j).shape[1]
        for mat in (pre.v[(i, j)], pre.z[(i, j)]):
            if mat.shape[0] != expect:
                raise InvalidInputError(
                    "precoder extension does not match the channel extension"
                )
    l: Dict[Tuple[int, int], np.ndarray] = {}
    f: Dict[Tuple[int, int], np.ndarray] = {}
    for (i, j) in LINKS:
        q = 3 - j
        k = 3 - i
        shared = [
            ext.link(i, q) @ pre.v[(i, q)],
            ext.link(i, q) @ pre.z[(i, q)],
            ext.link(i, 1) @ pre.v[(k, 1)],
            ext.link(i, 2) @ pre.v[(k, 2)],
        ]
        own_ia = ext.link(i, j) @ pre.v[(i, j)]
        own_ns = ext.link(i, j) @ pre.z[(i, j)]
        l[(i, j)] = _select_filter(
            np.hstack([own_ns] + shared), own_ia, pre.allocation.ia(i, j), tol
        )
        f[(i, j)] = _select_filter(
            np.hstack([own_ia] + shared), own_ns, pre.allocation.ns(i, j), tol
        )
    return ReceiverSet(l=l, f=f)


def assemble_G(
    receiver: int,
    ext: ExtendedChannelSet,
    pre: PrecoderSet,
) -> SignalSpaceMatrix:
    """Stack the images receiver i must separate into one matrix.

    Desired aligned and steered blocks for both of the receiver's
    messages come first, then one interference block: the wider of the
    other receiver's two aligned images, which covers the narrower one
    by the span-containment design rule.  The total width must fit the
    receiver's extended dimension.
    """
    i = receiver
    if i not in (1, 2):
        raise InvalidInputError(f"receiver index must be 1 or 2, got {i}")
    k = 3 - i
    alloc = pre.allocation
    blocks = []
    labels = []
    for j in (1, 2):
        img = ext.link(i, j) @ pre.v[(i, j)]
        blocks.append(img)
        labels.append(("desired_ia", (i, j), img.shape[1]))
    for j in (1, 2):
        img = ext.link(i, j) @ pre.z[(i, j)]
        blocks.append(img)
        labels.append(("desired_ns", (i, j), img.shape[1]))
    wide_j = 1 if alloc.ia(k, 1) >= alloc.ia(k, 2) else 2
    img = ext.link(i, wide_j) @ pre.v[(k, wide_j)]
    blocks.append(img)
    labels.append(("interference", (k, wide_j), img.shape[1]))
    g = np.hstack(blocks)
    rows = ext.link(i, 1).shape[0]
    if g.shape[1] > rows:
        raise InfeasibleAllocationError(
            f"receiver {i} must resolve {g.shape[1]} directions in a "
            f"{rows}-dimensional space"
        )
    return SignalSpaceMatrix(receiver=i, g=g, labels=tuple(labels))


def _normalized_min_sv(g: np.ndarray) -> Optional[float]:
    if g.shape[1] == 0:
        return None
    norms = np.linalg.norm(g, axis=0)
    if np.any(norms == 0.0):
        return 0.0
    return float(min_singular_value(g / norms))


def verify_feasibility(
    ext: ExtendedChannelSet,
    pre: PrecoderSet,
    rec: ReceiverSet,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> VerificationReport:
    """Check a finished design against the conditions it must satisfy.

    Every filter is applied to the image of every stream bundle except
    its own, and the worst relative residual is recorded; the decode
    matrices must have exactly the allocated ranks; at each receiver the
    narrower aligned interference image must lie in the span of the
    wider; and the stacked signal space must stay well conditioned after
    column normalization.  The achieved total is recomputed from the
    measured decode ranks, not from the allocation.
    """
    alloc = pre.allocation
    if alloc.t != ext.t:
        raise InvalidInputError(
            f"allocation extension {alloc.t} does not match channel extension {ext.t}"
        )
    images: Dict[Tuple[int, int, int, str], np.ndarray] = {}
    scales: Dict[Tuple[int, int, int, str], float] = {}
    for i in (1, 2):
        for (p, q) in LINKS:
            link = ext.link(i, q)
            for kind, part in (("ia", pre.v[(p, q)]), ("ns", pre.z[(p, q)])):
                images[(i, p, q, kind)] = link @ part
                # scale by what went in, not by what came out: an image
                # the design nulled exactly has roundoff norm and no
                # meaningful direction of its own
                scales[(i, p, q, kind)] = float(
                    np.linalg.norm(link) * np.linalg.norm(part)
                )

    max_zf = 0.0
    for (i, j) in LINKS:
        for filt, own_kind in ((rec.l[(i, j)], "ia"), (rec.f[(i, j)], "ns")):
            fnorm = np.linalg.norm(filt)
            if filt.shape[0] == 0 or fnorm == 0.0:
                continue
            for (p, q) in LINKS:
                for kind in ("ia", "ns"):
                    if (p, q, kind) == (i, j, own_kind):
                        continue
                    img = images[(i, p, q, kind)]
                    scale = scales[(i, p, q, kind)]
                    if img.shape[1] == 0 or scale == 0.0:
                        continue
                    res = np.linalg.norm(filt @ img) / (fnorm * scale)
                    max_zf = max(max_zf, float(res))

    decode_ok: Dict[Tuple[int, int], bool] = {}
    measured = 0
    for (i, j) in LINKS:
        rank_ia = numerical_rank(rec.l[(i, j)] @ images[(i, i, j, "ia")], tol)
        rank_ns = numerical_rank(rec.f[(i, j)] @ images[(i, i, j, "ns")], tol)
        decode_ok[(i, j)] = rank_ia == alloc.ia(i, j) and rank_ns == alloc.ns(i, j)
        measured += rank_ia + rank_ns
    achieved = Rational(measured, 2 * alloc.t)

    align_res = 0.0
    for i in (1, 2):
        k = 3 - i
        if images[(i, k, 1, "ia")].shape[1] >= images[(i, k, 2, "ia")].shape[1]:
            wide_key, narrow_key = (i, k, 1, "ia"), (i, k, 2, "ia")
        else:
            wide_key, narrow_key = (i, k, 2, "ia"), (i, k, 1, "ia")
        wide = images[wide_key]
        narrow = images[narrow_key]
        scale = scales[narrow_key]
        if narrow.shape[1] == 0 or wide.shape[1] == 0 or scale == 0.0:
            continue
        span = column_space_basis(wide, tol)
        res = np.linalg.norm(narrow - span @ (span.T @ narrow)) / scale
        align_res = max(align_res, float(res))

    min_sv: Dict[int, Optional[float]] = {}
    g_ok = True
    for i in (1, 2):
        sv = _normalized_min_sv(assemble_G(i, ext, pre).g)
        min_sv[i] = sv
        if sv is not None and sv <= G_CONDITIONING_FLOOR:
            g_ok = False

    passed = (
        max_zf <= tol.residual_tol
        and align_res <= tol.residual_tol
        and all(decode_ok.values())
        and g_ok
    )
    return VerificationReport(
        max_zero_forcing_residual=max_zf,
        alignment_residual=align_res,
        min_g_singular_value=min_sv,
        decode_rank_ok=decode_ok,
        achieved_dof=achieved,
        passed=passed,
    )


def reciprocal_transfer(
    pre: PrecoderSet, rec: ReceiverSet
) -> Tuple[PrecoderSet, ReceiverSet]:
    """Map a design onto the reversed network by transposition.

    Receive filters become transmit precoders for the transposed links
    and vice versa, with the user indices swapped; stream counts carry
    over through the relabeling, so the reversed allocation keeps the
    same total.
    """
    alloc = pre.allocation.relabeled_swap()
    v = {(i, j): rec.l[(j, i)].T.copy() for (i, j) in LINKS}
    z = {(i, j): rec.f[(j, i)].T.copy() for (i, j) in LINKS}
    l = {(i, j): pre.v[(j, i)].T.copy() for (i, j) in LINKS}
    f = {(i, j): pre.z[(j, i)].T.copy() for (i, j) in LINKS}
    return PrecoderSet(v=v, z=z, allocation=alloc), ReceiverSet(l=l, f=f)


def lemma16_check(
    n: int,
    s: int,
    t: int,
    d: int,
    seed: int,
    aligned_phases: bool = False,
    tol: float = 1e-9,
) -> bool:
    """Probe whether the mixed overlap stack keeps full column rank."""
    return mixer_stack_full_rank(
        n, s, t, d, seed, aligned_phases=aligned_phases, tol=tol
    ).full_rank


def design(
    ext: ExtendedChannelSet,
    allocation: StreamAllocation,
    seed: int,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Tuple[PrecoderSet, ReceiverSet]:
    """Run the full synthesis pipeline for one channel draw."""
    if allocation.t != ext.t:
        raise InvalidInputError(
            f"allocation extension {allocation.t} does not match "
            f"channel extension {ext.t}"
        )
    bases = extended_message_bases(ext, seed, tol)
    pre = build_precoders(bases, allocation)
    rec = build_receivers(ext, pre, tol)
    return pre, rec
