"""Exact integer programs for stream allocation over symbol extensions.

A transmission design assigns each message an integer number of aligned
streams (sharing paired directions at the far receiver) and null-steered
streams (invisible there), over a symbol extension of length ``t``.
Real-embedded dimension budgets at every node, overlap and null-space
caps, and optional per-link rank caps carve out a finite integer
polytope; each message contributes (aligned + steered) / (2 t) degrees of
freedom.

Everything is exact: integer constraint rows, rational objective weights,
and a branch-and-bound solver that never touches floating point.  Reduced
three-message programs with tied variables, the extension/reciprocity
sweep, and a weighted outer-vs-inner gap probe round out the toolkit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .bounds import MESSAGES, lp_max_weighted, x_outer_region
from .channel import AntennaConfig, RankProfile
from .numerics import InvalidInputError, Rational
from .simplex import integer_simplex_floor

# (receiver, transmitter, kind) with kind "ia" (aligned) or "ns" (steered)
Slot = Tuple[int, int, str]

UNIT_WEIGHTS: Tuple[Rational, ...] = (Fraction(1),) * 4

_MASK_NAMES = {
    "x": (True, True, True, True),
    "ic": (True, False, False, True),
    "bc": (True, False, True, False),
    "mac": (True, True, False, False),
    "z11": (False, True, True, True),
    "z12": (True, False, True, True),
    "z21": (True, True, False, True),
    "z22": (True, True, True, False),
}


@dataclass(frozen=True)
class SchemeDims:
    """Geometry counts driving the programs, in complex dimensions.

    ``s1`` / ``s2``: overlap dimension at each receiver, the room for
    pairing streams destined to the other one.  ``phi_kj``: null-space
    dimension at transmitter j toward receiver k, the room for steering
    past that receiver.
    """

    s1: int
    s2: int
    phi_11: int
    phi_12: int
    phi_21: int
    phi_22: int

    def __post_init__(self):
        for name in ("s1", "s2", "phi_11", "phi_12", "phi_21", "phi_22"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise InvalidInputError(f"{name} must be a non-negative integer")

    def s(self, k: int) -> int:
        return (self.s1, self.s2)[k - 1]

    def phi(self, k: int, j: int) -> int:
        return getattr(self, f"phi_{k}{j}")

    @property
    def phi_map(self) -> Dict[Tuple[int, int], int]:
        return {(k, j): self.phi(k, j) for k in (1, 2) for j in (1, 2)}


def generic_dims(config: AntennaConfig,
                 ranks: Optional[RankProfile] = None) -> SchemeDims:
    """Overlap and null dimensions for channels in general position.

    With full ranks these reduce to the familiar antenna-count formulas;
    a prescribed rank profile shrinks the overlap at each receiver and
    widens every null space accordingly.
    """
    if ranks is None:
        ranks = RankProfile.full(config)
    ranks.validate(config)

    def s_at(k: int) -> int:
        total = ranks.rank(k, 1) + ranks.rank(k, 2)
        return total - min(config.rx(k), total)

    return SchemeDims(
        s1=s_at(1), s2=s_at(2),
        phi_11=config.m1 - ranks.r11, phi_12=config.m2 - ranks.r12,
        phi_21=config.m1 - ranks.r21, phi_22=config.m2 - ranks.r22)


@dataclass(frozen=True)
class MessageMask:
    """Which of the four messages carry data; the rest are removed outright."""

    active_11: bool = True
    active_12: bool = True
    active_21: bool = True
    active_22: bool = True

    def __post_init__(self):
        if not (self.active_11 or self.active_12 or self.active_21 or self.active_22):
            raise InvalidInputError("at least one message must stay active")

    def active(self, i: int, j: int) -> bool:
        return getattr(self, f"active_{i}{j}")

    @property
    def active_messages(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(m for m in MESSAGES if self.active(*m))

    @property
    def transposed(self) -> "MessageMask":
        """Mask of the reversed network, where message (i, j) carries (j, i)."""
        return MessageMask(self.active_11, self.active_21,
                           self.active_12, self.active_22)

    @classmethod
    def from_name(cls, name: str) -> "MessageMask":
        try:
            return cls(*_MASK_NAMES[name.lower()])
        except KeyError:
            raise InvalidInputError(
                f"unknown mask {name!r}; choose from {sorted(_MASK_NAMES)}") from None

    @property
    def canonical_name(self) -> str:
        flags = (self.active_11, self.active_12, self.active_21, self.active_22)
        for name, pattern in _MASK_NAMES.items():
            if flags == pattern:
                return name
        return "custom"


@dataclass(frozen=True)
class StreamAllocation:
    """Integer stream counts for every message over one extension length."""

    d11_ia: int = 0
    d12_ia: int = 0
    d21_ia: int = 0
    d22_ia: int = 0
    d11_ns: int = 0
    d12_ns: int = 0
    d21_ns: int = 0
    d22_ns: int = 0
    t: int = 1
    side: str = "original"

    def __post_init__(self):
        for name in ("d11_ia", "d12_ia", "d21_ia", "d22_ia",
                     "d11_ns", "d12_ns", "d21_ns", "d22_ns"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise InvalidInputError(f"{name} must be a non-negative integer")
        if not isinstance(self.t, int) or self.t < 1:
            raise InvalidInputError("t must be a positive integer")
        if self.side not in ("original", "reciprocal"):
            raise InvalidInputError("side must be 'original' or 'reciprocal'")

    def ia(self, i: int, j: int) -> int:
        return getattr(self, f"d{i}{j}_ia")

    def ns(self, i: int, j: int) -> int:
        return getattr(self, f"d{i}{j}_ns")

    def count(self, slot: Slot) -> int:
        i, j, kind = slot
        return getattr(self, f"d{i}{j}_{kind}")

    def per_message_dof(self, i: int, j: int) -> Rational:
        return Fraction(self.ia(i, j) + self.ns(i, j), 2 * self.t)

    @property
    def total_streams(self) -> int:
        return sum(self.ia(i, j) + self.ns(i, j) for (i, j) in MESSAGES)

    @property
    def dof(self) -> Rational:
        return Fraction(self.total_streams, 2 * self.t)

    def as_tuple(self) -> Tuple[int, ...]:
        return (self.d11_ia, self.d12_ia, self.d21_ia, self.d22_ia,
                self.d11_ns, self.d12_ns, self.d21_ns, self.d22_ns)

    def relabeled_swap(self) -> "StreamAllocation":
        """Same design read in the other network's labels (indices transposed)."""
        other = "reciprocal" if self.side == "original" else "original"
        return StreamAllocation(
            d11_ia=self.d11_ia, d12_ia=self.d21_ia,
            d21_ia=self.d12_ia, d22_ia=self.d22_ia,
            d11_ns=self.d11_ns, d12_ns=self.d21_ns,
            d21_ns=self.d12_ns, d22_ns=self.d22_ns,
            t=self.t, side=other)


@dataclass(frozen=True)
class IlpVariable:
    """One integer unknown; ties make a variable feed several stream slots."""

    name: str
    slots: Tuple[Slot, ...]
    upper: int
    weight: Rational


@dataclass(frozen=True)
class IlpRow:
    coeffs: Tuple[int, ...]
    rhs: int
    label: str


@dataclass(frozen=True)
class IlpProblem:
    """Bounded integer maximization with non-negative rows; origin feasible."""

    label: str
    t: int
    variables: Tuple[IlpVariable, ...]
    rows: Tuple[IlpRow, ...]

    def __post_init__(self):
        if self.t < 1:
            raise InvalidInputError("t must be >= 1")
        n = len(self.variables)
        for v in self.variables:
            if v.upper < 0 or v.weight < 0:
                raise InvalidInputError(f"variable {v.name} has a negative bound or weight")
        for row in self.rows:
            if len(row.coeffs) != n:
                raise InvalidInputError(f"row {row.label!r} width {len(row.coeffs)} != {n}")
            if row.rhs < 0 or any(c < 0 for c in row.coeffs):
                raise InvalidInputError(f"row {row.label!r} breaks origin feasibility")

    @property
    def divisor(self) -> int:
        return 2 * self.t

    def check(self, values: Sequence[int]) -> bool:
        return not self.violated(values)

    def violated(self, values: Sequence[int]) -> List[str]:
        if len(values) != len(self.variables):
            raise InvalidInputError("value vector width mismatch")
        out = [v.name for v, x in zip(self.variables, values)
               if x < 0 or x > v.upper]
        out += [row.label for row in self.rows
                if sum(c * x for c, x in zip(row.coeffs, values)) > row.rhs]
        return out

    def objective_value(self, values: Sequence[int]) -> Rational:
        if len(values) != len(self.variables):
            raise InvalidInputError("value vector width mismatch")
        num = sum((v.weight * x for v, x in zip(self.variables, values)),
                  Fraction(0))
        return num / self.divisor

    def values_for(self, alloc: StreamAllocation) -> List[int]:
        """Variable vector matching an allocation, or an error if the
        allocation puts streams on a removed slot or breaks a tie."""
        covered = set()
        values = []
        for v in self.variables:
            counts = {alloc.count(slot) for slot in v.slots}
            if len(counts) != 1:
                raise InvalidInputError(
                    f"allocation breaks the tie on variable {v.name}")
            values.append(counts.pop())
            covered.update(v.slots)
        for (i, j) in MESSAGES:
            for kind in ("ia", "ns"):
                if (i, j, kind) not in covered and alloc.count((i, j, kind)) != 0:
                    raise InvalidInputError(
                        f"allocation uses d{i}{j}_{kind}, absent from this program")
        return values

    def admits(self, alloc: StreamAllocation) -> bool:
        try:
            return self.check(self.values_for(alloc))
        except InvalidInputError:
            return False


def _normalize_weights(weights: Sequence[Rational]) -> Tuple[Rational, ...]:
    w = tuple(Fraction(x) for x in weights)
    if len(w) != 4:
        raise InvalidInputError("need one weight per message")
    if any(x < 0 for x in w):
        raise InvalidInputError("weights must be non-negative")
    return w


def _emit(label: str, config: AntennaConfig, s1: int, s2: int,
          phi: Mapping[Tuple[int, int], int], t: int,
          weights: Sequence[Rational], mask: MessageMask,
          ties: Sequence[Tuple[Slot, ...]] = (),
          rank_caps: Optional[RankProfile] = None,
          drop_slots: Sequence[Slot] = ()) -> IlpProblem:
    """Mechanical assembly shared by all program flavors."""
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    if s1 < 0 or s2 < 0 or any(phi[key] < 0 for key in phi):
        raise InvalidInputError("dimension counts must be non-negative")
    w = dict(zip(MESSAGES, _normalize_weights(weights)))
    s_of = {1: s1, 2: s2}
    dropped = set(drop_slots)

    slots: List[Slot] = []
    for kind in ("ia", "ns"):
        for (i, j) in mask.active_messages:
            slot = (i, j, kind)
            if slot not in dropped:
                slots.append(slot)

    group_of: Dict[Slot, int] = {}
    for gid, tie in enumerate(ties):
        for slot in tie:
            if slot not in slots:
                raise InvalidInputError(f"tied slot {slot} is not in the program")
            group_of[slot] = gid

    variables: List[IlpVariable] = []
    var_of: Dict[Slot, int] = {}
    for slot in slots:
        if slot in var_of:
            continue
        if slot in group_of:
            members = tuple(s for s in slots if group_of.get(s) == group_of[slot])
        else:
            members = (slot,)
        name = "+".join(f"d{i}{j}_{kind}" for (i, j, kind) in members)
        weight = sum((w[(i, j)] for (i, j, _) in members), Fraction(0))
        idx = len(variables)
        variables.append(IlpVariable(name=name, slots=members, upper=0, weight=weight))
        for s in members:
            var_of[s] = idx

    nvars = len(variables)
    raw_rows: List[Tuple[Tuple[int, ...], int, str]] = []

    def add_row(row_slots: Sequence[Slot], rhs: int, label_: str) -> None:
        coeffs = [0] * nvars
        for slot in row_slots:
            coeffs[var_of[slot]] += 1
        raw_rows.append((tuple(coeffs), rhs, label_))

    # per-receiver dimension budget, one row per aligned interferer
    for i in (1, 2):
        k = 3 - i
        own = [s for s in slots if s[0] == i]
        if not own:
            continue
        interferers = [(k, q, "ia") for q in (1, 2) if (k, q, "ia") in var_of]
        if interferers:
            for intr in interferers:
                add_row(own + [intr], 2 * t * config.rx(i),
                        f"receiver {i} dims vs aligned d{intr[0]}{intr[1]}")
        else:
            add_row(own, 2 * t * config.rx(i), f"receiver {i} dims")

    # per-transmitter dimension budget
    for j in (1, 2):
        sourced = [s for s in slots if s[1] == j]
        if sourced:
            add_row(sourced, 2 * t * config.tx(j), f"transmitter {j} dims")

    # alignment caps at the far receiver, null-steer caps past it
    for (i, j, kind) in slots:
        k = 3 - i
        if kind == "ia":
            add_row([(i, j, kind)], 2 * s_of[k], f"alignment cap d{i}{j}")
        else:
            add_row([(i, j, kind)], 2 * t * phi[(k, j)], f"null-steer cap d{i}{j}")

    if rank_caps is not None:
        rank_caps.validate(config)
        for (i, j) in mask.active_messages:
            present = [s for s in ((i, j, "ia"), (i, j, "ns")) if s in var_of]
            if present:
                add_row(present, 2 * t * rank_caps.rank(i, j),
                        f"link rank cap d{i}{j}")

    seen = set()
    rows: List[IlpRow] = []
    for coeffs, rhs, label_ in raw_rows:
        key = (coeffs, rhs)
        if key in seen:
            continue
        seen.add(key)
        rows.append(IlpRow(coeffs=coeffs, rhs=rhs, label=label_))

    sized = []
    for idx, v in enumerate(variables):
        caps = [row.rhs // row.coeffs[idx] for row in rows if row.coeffs[idx] > 0]
        if not caps:
            raise InvalidInputError(f"variable {v.name} is unbounded")
        sized.append(IlpVariable(name=v.name, slots=v.slots,
                                 upper=min(caps), weight=v.weight))

    return IlpProblem(label=label, t=t, variables=tuple(sized), rows=tuple(rows))


def build_p0(config: AntennaConfig, s1: int, s2: int,
             phi: Union[Mapping[Tuple[int, int], int], SchemeDims], t: int,
             weights: Sequence[Rational] = UNIT_WEIGHTS,
             mask: MessageMask = MessageMask()) -> IlpProblem:
    """Dimension-count program over aligned and steered stream counts.

    Rows: per-receiver budgets charged once per aligned interferer (the
    pairing at that receiver makes the larger aligned block the binding
    one, so one row per interferer linearizes the maximum), per-transmitter
    budgets, alignment caps ``2 s_k`` at the far receiver, and null-steer
    caps ``2 t phi_kj`` past it.  ``phi`` maps (receiver, transmitter) to
    the cross link's null dimension.
    """
    if isinstance(phi, SchemeDims):
        phi = phi.phi_map
    return _emit("p0", config, s1, s2, dict(phi), t, weights, mask)


def build_p1(config: AntennaConfig, dims: SchemeDims, ranks: RankProfile,
             t: int, weights: Sequence[Rational] = UNIT_WEIGHTS,
             mask: MessageMask = MessageMask()) -> IlpProblem:
    """Rank-aware refinement: every message's streams ride its own link,
    so aligned plus steered counts are additionally capped by twice the
    extended link rank.  With full ranks the extra rows are implied and
    the feasible set equals the basic program's."""
    return _emit("p1", config, dims.s1, dims.s2, dims.phi_map, t, weights,
                 mask, rank_caps=ranks)


def build_px21(config: AntennaConfig, dims: SchemeDims, t: int) -> IlpProblem:
    """Three-message reduction without message (2, 1), with the pair
    destined to receiver 1 tied to a single aligned count.

    The tie reflects the pairing that makes alignment pay: both
    receiver-1 messages ride the same overlapped directions at receiver 2,
    so their aligned counts move together in the closed-form rows."""
    return _emit("px21", config, dims.s1, dims.s2, dims.phi_map, t,
                 UNIT_WEIGHTS, MessageMask.from_name("z21"),
                 ties=(((1, 1, "ia"), (1, 2, "ia")),))


def build_px12(config: AntennaConfig, dims: SchemeDims, t: int) -> IlpProblem:
    """Mirror reduction without message (1, 2): the receiver-2 pair is tied
    and the surviving receiver-1 message keeps only its aligned count (its
    steered count is pinned at zero in this reduced family; the full masked
    program via ``build_p0`` keeps that term when it matters)."""
    return _emit("px12", config, dims.s1, dims.s2, dims.phi_map, t,
                 UNIT_WEIGHTS, MessageMask.from_name("z12"),
                 ties=(((2, 1, "ia"), (2, 2, "ia")),),
                 drop_slots=((1, 1, "ns"),))


@dataclass(frozen=True)
class SolverStats:
    nodes: int
    time: float

    def merged(self, other: "SolverStats") -> "SolverStats":
        return SolverStats(self.nodes + other.nodes, self.time + other.time)


@dataclass(frozen=True)
class AllocationResult:
    best: StreamAllocation
    dof: Rational
    per_message_dof: Tuple[Rational, Rational, Rational, Rational]
    solver_stats: SolverStats


def _scaled_weights(variables: Sequence[IlpVariable]) -> Tuple[int, List[int]]:
    denoms = [v.weight.denominator for v in variables]
    scale = lcm(*denoms) if denoms else 1
    return scale, [int(v.weight * scale) for v in variables]


def solve_ilp(problem: IlpProblem) -> AllocationResult:
    """Exact maximization by depth-first branch and bound.

    Two passes: the first finds the optimum value, trying large values
    first; the second walks values in ascending order and returns the
    first assignment attaining the optimum, which is the
    lexicographically smallest maximizer in variable order.

    Pruning is two-tier.  A cheap optimistic bound charges every
    remaining variable its full row slack independently; when that fails
    to cut, the exact rational relaxation of the remaining subproblem is
    solved and floored, memoized on (depth, slack state) since the same
    residual polytope recurs all over the tree and across both passes.
    """
    start = time.perf_counter()
    variables = problem.variables
    n = len(variables)
    scale, iw = _scaled_weights(variables)
    rows = problem.rows
    touch: List[List[Tuple[int, int]]] = [
        [(ri, row.coeffs[vi]) for ri, row in enumerate(rows) if row.coeffs[vi] > 0]
        for vi in range(n)]
    # rows that still matter for the tail starting at each depth
    tail_rows: List[List[int]] = [
        sorted({ri for vi in range(idx, n) for ri, _ in touch[vi]})
        for idx in range(n + 1)]
    uppers = [v.upper for v in variables]
    slack = [row.rhs for row in rows]
    nodes = 0

    def local_cap(vi: int) -> int:
        cap = uppers[vi]
        for ri, c in touch[vi]:
            q = slack[ri] // c
            if q < cap:
                cap = q
        return cap

    def cheap_bound(idx: int) -> int:
        return sum(iw[vi] * local_cap(vi) for vi in range(idx, n))

    lp_cache: Dict[Tuple[int, Tuple[int, ...]], int] = {}

    def lp_bound(idx: int) -> int:
        """Floor of the exact relaxation over variables idx..n-1.

        Every variable has its own cap row in the problem, so the live
        rows alone already bound the polytope; no unit rows are added.
        """
        live = tail_rows[idx]
        key = (idx, tuple(slack[ri] for ri in live))
        cached = lp_cache.get(key)
        if cached is not None:
            return cached
        cols = range(idx, n)
        lhs = [[rows[ri].coeffs[vi] for vi in cols] for ri in live]
        rhs = [slack[ri] for ri in live]
        result = integer_simplex_floor([iw[vi] for vi in cols], lhs, rhs)
        lp_cache[key] = result
        return result

    def tail_fits(idx: int, room: int) -> bool:
        """Can the tail still contribute more than ``room``?"""
        if idx == n:
            return room < 0
        if cheap_bound(idx) <= room:
            return False
        return n - idx < 2 or lp_bound(idx) > room

    best = 0
    root_ub = lp_bound(0) if n >= 2 else None

    def dfs_max(idx: int, cur: int) -> None:
        nonlocal best, nodes
        if idx == n:
            if cur > best:
                best = cur
            return
        if not tail_fits(idx, best - cur):
            return
        for val in range(local_cap(idx), -1, -1):
            nodes += 1
            for ri, c in touch[idx]:
                slack[ri] -= c * val
            dfs_max(idx + 1, cur + iw[idx] * val)
            for ri, c in touch[idx]:
                slack[ri] += c * val
            if best == root_ub:
                return

    dfs_max(0, 0)

    assign = [0] * n
    found: Optional[List[int]] = None

    def dfs_lex(idx: int, cur: int) -> None:
        nonlocal found, nodes
        if idx == n:
            if cur == best:
                found = assign.copy()
            return
        for val in range(0, local_cap(idx) + 1):
            nodes += 1
            for ri, c in touch[idx]:
                slack[ri] -= c * val
            if tail_fits(idx + 1, best - cur - iw[idx] * val - 1):
                assign[idx] = val
                dfs_lex(idx + 1, cur + iw[idx] * val)
            for ri, c in touch[idx]:
                slack[ri] += c * val
            if found is not None:
                return

    dfs_lex(0, 0)
    if found is None:
        raise InvalidInputError("search failed to reproduce its own optimum")

    counts = {(i, j, kind): 0 for (i, j) in MESSAGES for kind in ("ia", "ns")}
    for v, val in zip(variables, found):
        for slot in v.slots:
            counts[slot] = val
    alloc = StreamAllocation(
        d11_ia=counts[(1, 1, "ia")], d12_ia=counts[(1, 2, "ia")],
        d21_ia=counts[(2, 1, "ia")], d22_ia=counts[(2, 2, "ia")],
        d11_ns=counts[(1, 1, "ns")], d12_ns=counts[(1, 2, "ns")],
        d21_ns=counts[(2, 1, "ns")], d22_ns=counts[(2, 2, "ns")],
        t=problem.t, side="original")
    dof = Fraction(sum(wv * xv for wv, xv in zip(iw, found)),
                   scale * problem.divisor)
    per_message = tuple(alloc.per_message_dof(i, j) for (i, j) in MESSAGES)
    stats = SolverStats(nodes=nodes, time=time.perf_counter() - start)
    return AllocationResult(best=alloc, dof=dof, per_message_dof=per_message,
                            solver_stats=stats)


def sweep_best(config: AntennaConfig, ranks: Optional[RankProfile] = None,
               mask: MessageMask = MessageMask(),
               weights: Sequence[Rational] = UNIT_WEIGHTS,
               t_max: int = 6) -> AllocationResult:
    """Best design over extension lengths and both network orientations.

    The swapped orientation solves on the reversed configuration with
    transposed ranks, mask, and weights (message (i, j) there carries the
    original (j, i)) and reads the result back in original labels.  Ties
    prefer the orientation with the larger transmit total, then the
    shorter extension; within one solve the smallest stream tuple wins.
    """
    if t_max < 1:
        raise InvalidInputError("t_max must be >= 1")
    if ranks is None:
        ranks = RankProfile.full(config)
    ranks.validate(config)
    w = _normalize_weights(weights)
    if config.m1 + config.m2 >= config.n1 + config.n2:
        order = ("original", "reciprocal")
    else:
        order = ("reciprocal", "original")

    best: Optional[AllocationResult] = None
    stats = SolverStats(0, 0.0)
    for side in order:
        if side == "original":
            c, rk, mk, ww = config, ranks, mask, w
        else:
            c, rk, mk = config.swapped, ranks.transposed, mask.transposed
            ww = (w[0], w[2], w[1], w[3])
        dims = generic_dims(c, rk)
        for t in range(1, t_max + 1):
            res = solve_ilp(build_p1(c, dims, rk, t, ww, mk))
            stats = stats.merged(res.solver_stats)
            if best is not None and res.dof <= best.dof:
                continue
            alloc = res.best if side == "original" else res.best.relabeled_swap()
            per_message = tuple(alloc.per_message_dof(i, j) for (i, j) in MESSAGES)
            best = AllocationResult(best=alloc, dof=res.dof,
                                    per_message_dof=per_message,
                                    solver_stats=stats)
    assert best is not None
    return AllocationResult(best=best.best, dof=best.dof,
                            per_message_dof=best.per_message_dof,
                            solver_stats=stats)


@dataclass(frozen=True)
class InnerCaps:
    """Per-message stream ceilings of the design space at one extension."""

    ia_cap: int
    ns_cap: int
    rank_cap: int


def inner_region_bounds(config: AntennaConfig,
                        ranks: Optional[RankProfile] = None,
                        t: int = 1, side: str = "original",
                        ) -> Dict[Tuple[int, int], InnerCaps]:
    """Alignment, steering, and link-rank caps per message.

    Side "reciprocal" computes the caps on the reversed network and reads
    them back in original message labels.
    """
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    if ranks is None:
        ranks = RankProfile.full(config)
    ranks.validate(config)
    if side == "original":
        dims = generic_dims(config, ranks)
        return {(i, j): InnerCaps(ia_cap=2 * dims.s(3 - i),
                                  ns_cap=2 * t * dims.phi(3 - i, j),
                                  rank_cap=2 * t * ranks.rank(i, j))
                for (i, j) in MESSAGES}
    if side == "reciprocal":
        swapped = inner_region_bounds(config.swapped, ranks.transposed, t,
                                      "original")
        return {(i, j): swapped[(j, i)] for (i, j) in MESSAGES}
    raise InvalidInputError("side must be 'original' or 'reciprocal'")


def reciprocal_caps_literal(config: AntennaConfig, t: int = 1,
                            ) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """Swapped-pass caps written index-for-index from the original counts.

    Kept for comparison only: the swap-based computation in
    ``inner_region_bounds`` is authoritative.  This variant indexes the
    far end by the message's receiver rather than its transmitter, and the
    two disagree on some asymmetric configurations; the tests pin a
    disagreeing case.  Full rank only; returns (ia_cap, ns_cap).
    """
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    out = {}
    for (i, j) in MESSAGES:
        mk = config.tx(3 - i)
        s_lit = min(mk, config.n1) + min(mk, config.n2) - min(mk, config.n1 + config.n2)
        out[(i, j)] = (2 * s_lit, 2 * t * max(0, mk - config.rx(i)))
    return out


@dataclass(frozen=True)
class ProbeSample:
    weights: Tuple[Rational, ...]
    outer: Rational
    inner: Rational

    @property
    def gap(self) -> Rational:
        return self.outer - self.inner

    @property
    def relative_gap(self) -> Rational:
        if self.outer == 0:
            return Fraction(0)
        return self.gap / self.outer


@dataclass(frozen=True)
class ProbeReport:
    config: AntennaConfig
    t_max: int
    seed: int
    samples: Tuple[ProbeSample, ...]

    @property
    def max_relative_gap(self) -> Rational:
        return max((s.relative_gap for s in self.samples), default=Fraction(0))


def conjecture_probe(config: AntennaConfig, weight_samples: int = 20,
                     t_max: int = 6, seed: int = 0) -> ProbeReport:
    """Weighted outer-bound maxima against the best weighted design.

    Samples small integer weight vectors, compares the exact region LP
    value with the best ILP value over extensions and orientations, and
    reports the gaps; a zero maximum backs the tightness conjecture on
    this configuration.
    """
    if weight_samples < 0:
        raise InvalidInputError("weight_samples must be non-negative")
    rng = np.random.default_rng(seed)
    region = x_outer_region(config)
    samples = []
    for _ in range(weight_samples):
        w = tuple(Fraction(int(x)) for x in rng.integers(1, 5, size=4))
        outer, _ = lp_max_weighted(region, w)
        inner = sweep_best(config, None, MessageMask(), w, t_max).dof
        samples.append(ProbeSample(weights=w, outer=outer, inner=inner))
    return ProbeReport(config=config, t_max=t_max, seed=seed,
                       samples=tuple(samples))
