"""Channel models: antenna configurations, random links, real embedding.

A two-transmitter / two-receiver crossed network has four links ``h[(i, j)]``
(receiver ``i``, transmitter ``j``), each a complex ``n_i x m_j`` matrix.
Real-valued processing happens on the standard embedding

    [[Re H, -Im H],
     [Im H,  Re H]]

optionally extended over ``T`` symbol periods, either with a constant
channel (Kronecker structure) or with an independent draw per period
(block diagonal).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag

from .numerics import DEFAULT_TOLERANCE, InvalidInputError, TolerancePolicy, numerical_rank

LINKS: Tuple[Tuple[int, int], ...] = ((1, 1), (1, 2), (2, 1), (2, 2))


@dataclass(frozen=True)
class AntennaConfig:
    """Antenna counts (m1, m2) at the transmitters, (n1, n2) at the receivers."""

    m1: int
    m2: int
    n1: int
    n2: int

    def __post_init__(self):
        for name in ("m1", "m2", "n1", "n2"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise InvalidInputError(f"{name} must be a positive integer, got {v!r}")

    @classmethod
    def from_string(cls, text: str) -> "AntennaConfig":
        parts = text.split(",")
        if len(parts) != 4:
            raise InvalidInputError(f"expected 'M1,M2,N1,N2', got {text!r}")
        try:
            nums = [int(p) for p in parts]
        except ValueError as exc:
            raise InvalidInputError(f"expected integers in {text!r}") from exc
        return cls(*nums)

    def tx(self, j: int) -> int:
        return (self.m1, self.m2)[j - 1]

    def rx(self, i: int) -> int:
        return (self.n1, self.n2)[i - 1]

    @property
    def swapped(self) -> "AntennaConfig":
        """Configuration of the reciprocal network (roles of ends exchanged)."""
        return AntennaConfig(self.n1, self.n2, self.m1, self.m2)

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.m1, self.m2, self.n1, self.n2)

    def __str__(self):
        return f"({self.m1},{self.m2},{self.n1},{self.n2})"


@dataclass(frozen=True)
class RankProfile:
    """Intended rank of each link, keyed like the links themselves."""

    r11: int
    r12: int
    r21: int
    r22: int

    @classmethod
    def full(cls, config: AntennaConfig) -> "RankProfile":
        def r(i, j):
            return min(config.rx(i), config.tx(j))
        return cls(r(1, 1), r(1, 2), r(2, 1), r(2, 2))

    def rank(self, i: int, j: int) -> int:
        return getattr(self, f"r{i}{j}")

    @property
    def transposed(self) -> "RankProfile":
        """Profile of the reciprocal network, where link (i, j) becomes (j, i)."""
        return RankProfile(self.r11, self.r21, self.r12, self.r22)

    def validate(self, config: AntennaConfig) -> None:
        for (i, j) in LINKS:
            r = self.rank(i, j)
            cap = min(config.rx(i), config.tx(j))
            if not 0 <= r <= cap:
                raise InvalidInputError(
                    f"rank r{i}{j}={r} outside [0, {cap}] for {config}")

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.r11, self.r12, self.r21, self.r22)


@dataclass(eq=False)
class ChannelSet:
    """One realization of the four complex links."""

    config: AntennaConfig
    links: Dict[Tuple[int, int], np.ndarray]
    ranks: RankProfile
    seed: Optional[int] = None

    def link(self, i: int, j: int) -> np.ndarray:
        return self.links[(i, j)]

    def measured_ranks(self, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> RankProfile:
        vals = {f"r{i}{j}": numerical_rank(
            acs_embed(self.links[(i, j)]), tol) // 2 for (i, j) in LINKS}
        return RankProfile(**vals)


def _link_rng(seed: int, i: int, j: int) -> np.random.Generator:
    # independent substream per link so single links can be regenerated
    return np.random.default_rng([seed, 10 * i + j])


def _complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols))
            + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def generate_full_rank(config: AntennaConfig, seed: int) -> ChannelSet:
    """Draw all four links i.i.d. complex Gaussian (full rank w.p. 1)."""
    links = {}
    for (i, j) in LINKS:
        rng = _link_rng(seed, i, j)
        links[(i, j)] = _complex_gaussian(rng, config.rx(i), config.tx(j))
    return ChannelSet(config, links, RankProfile.full(config), seed)


def generate_rank_deficient(config: AntennaConfig, ranks: RankProfile,
                            seed: int) -> ChannelSet:
    """Draw links with prescribed ranks as products of thin Gaussian factors."""
    ranks.validate(config)
    links = {}
    for (i, j) in LINKS:
        rng = _link_rng(seed, i, j)
        r = ranks.rank(i, j)
        n, m = config.rx(i), config.tx(j)
        if r == 0:
            links[(i, j)] = np.zeros((n, m), dtype=complex)
        else:
            links[(i, j)] = _complex_gaussian(rng, n, r) @ _complex_gaussian(rng, r, m)
    return ChannelSet(config, links, ranks, seed)


def reciprocal_channels(channels: ChannelSet) -> ChannelSet:
    """Reciprocal network: link (i, j) is the adjoint of original (j, i)."""
    links = {(i, j): channels.links[(j, i)].conj().T.copy() for (i, j) in LINKS}
    return ChannelSet(channels.config.swapped, links,
                      channels.ranks.transposed, seed=None)


# conjugate transpose, so the embedded real blocks transpose exactly
reciprocal = reciprocal_channels


def acs_embed(h: np.ndarray) -> np.ndarray:
    """Real embedding of a complex matrix, doubling both dimensions."""
    h = np.asarray(h)
    re, im = np.real(h), np.imag(h)
    return np.block([[re, -im], [im, re]])


@dataclass(eq=False)
class ExtendedChannelSet:
    """Real embedded links over ``t`` symbol periods.

    ``links`` maps (i, j) to a ``2 t n_i x 2 t m_j`` real matrix.  ``slots``
    keeps the underlying per-period realizations (a single entry when the
    channel is constant).
    """

    config: AntennaConfig
    t: int
    links: Dict[Tuple[int, int], np.ndarray]
    slots: Sequence[ChannelSet]
    constant: bool

    def link(self, i: int, j: int) -> np.ndarray:
        return self.links[(i, j)]

    def extended_rank(self, i: int, j: int) -> int:
        """Exact rank from the slot rank profiles, no floating point."""
        if self.constant:
            return 2 * self.t * self.slots[0].ranks.rank(i, j)
        return sum(2 * s.ranks.rank(i, j) for s in self.slots)


def extend_constant(channels: ChannelSet, t: int) -> ExtendedChannelSet:
    """Repeat one realization over ``t`` periods (Kronecker with identity)."""
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    links = {lk: np.kron(np.eye(t), acs_embed(channels.links[lk])) for lk in LINKS}
    return ExtendedChannelSet(channels.config, t, links, [channels], True)


def extend_time_varying(slots: Sequence[ChannelSet]) -> ExtendedChannelSet:
    """Stack independent per-period realizations block diagonally."""
    if not slots:
        raise InvalidInputError("need at least one period")
    config = slots[0].config
    for s in slots[1:]:
        if s.config != config:
            raise InvalidInputError("all periods must share one antenna configuration")
    links = {lk: block_diag(*[acs_embed(s.links[lk]) for s in slots]) for lk in LINKS}
    return ExtendedChannelSet(config, len(slots), links, list(slots), False)


def generate_time_varying(config: AntennaConfig, t: int, seed: int,
                          ranks: Optional[RankProfile] = None) -> ExtendedChannelSet:
    """Convenience: draw ``t`` independent realizations and stack them."""
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    slots = []
    for k in range(t):
        slot_seed = seed + 1000 * k
        if ranks is None:
            slots.append(generate_full_rank(config, slot_seed))
        else:
            slots.append(generate_rank_deficient(config, ranks, slot_seed))
    return extend_time_varying(slots)


def channel_to_json(channels: ChannelSet) -> str:
    """Serialize a realization; complex entries become [re, im] pairs."""
    payload = {
        "config": list(channels.config.as_tuple()),
        "ranks": list(channels.ranks.as_tuple()),
        "seed": channels.seed,
        "links": {
            f"h{i}{j}": [[[float(z.real), float(z.imag)] for z in row]
                         for row in channels.links[(i, j)]]
            for (i, j) in LINKS
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def channel_from_json(text: str) -> ChannelSet:
    try:
        payload = json.loads(text)
        config = AntennaConfig(*payload["config"])
        ranks = RankProfile(*payload["ranks"])
        links = {}
        for (i, j) in LINKS:
            raw = payload["links"][f"h{i}{j}"]
            links[(i, j)] = np.array(
                [[complex(re, im) for re, im in row] for row in raw])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed channel payload: {exc}") from exc
    cs = ChannelSet(config, links, ranks, payload.get("seed"))
    for (i, j) in LINKS:
        expect = (config.rx(i), config.tx(j))
        if cs.links[(i, j)].shape != expect:
            raise InvalidInputError(
                f"link h{i}{j} has shape {cs.links[(i, j)].shape}, expected {expect}")
    return cs
