"""Command line front end: scenarios in, bounds, allocations, verification
batches, catalog tables, curve data, and gap probes out.

Single results print as JSON, batches as CSV (comma separated, header row,
LF line endings); exact rationals print as "p/q".  Identical scenarios
produce byte-identical payloads, so report bundles can be replayed.

Exit codes: 0 success, 2 invalid input, 3 verification failure, 4 table
mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy

from . import __version__
from .allocator import MessageMask, StreamAllocation, sweep_best, conjecture_probe
from .appendix_tables import closed_form_Z_appendix
from .bounds import (
    DofRegion,
    x_outer_region,
    x_total_outer,
    z_outer_region,
    z_total_outer,
)
from .channel import (
    AntennaConfig,
    LINKS,
    RankProfile,
    extend_constant,
    extend_time_varying,
    generate_full_rank,
    generate_rank_deficient,
    generate_time_varying,
    reciprocal_channels,
)
from .closed_forms import (
    UnsupportedShapeError,
    closed_form_X,
    closed_form_X21,
    closed_form_rank_deficient,
    cooperative_bound,
)
from .numerics import (
    DEFAULT_TOLERANCE,
    InvalidInputError,
    Rational,
    TolerancePolicy,
    format_rational,
    parse_rational,
)
from .synthesis import (
    FeasibilityError,
    InfeasibleAllocationError,
    VerificationReport,
    design,
    reciprocal_transfer,
    verify_feasibility,
)

ROMANS = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X",
          "XI", "XII", "XIII", "XIV", "XV", "XVI", "XVII")
_X_PAGES = frozenset(ROMANS[:7])
_Z_PAGES = frozenset(ROMANS[8:])
_Z_ABSENT = {"z11": (1, 1), "z12": (1, 2), "z21": (2, 1), "z22": (2, 2)}
_UNIT = (Fraction(1), Fraction(1), Fraction(1), Fraction(1))

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFY = 3
EXIT_TABLES = 4


@dataclass(frozen=True)
class Scenario:
    """Everything one evaluation depends on, in one reproducible record."""

    config: AntennaConfig
    profile: Optional[RankProfile]
    mask: MessageMask
    t_max: int
    weights: Tuple[Rational, Rational, Rational, Rational]
    seed: int
    tolerance: TolerancePolicy
    channel_mode: str

    def to_dict(self) -> dict:
        return {
            "config": list(self.config.as_tuple()),
            "ranks": ("full" if self.profile is None
                      else list(self.profile.as_tuple())),
            "mask": self.mask.canonical_name,
            "t_max": self.t_max,
            "weights": [format_rational(w) for w in self.weights],
            "seed": self.seed,
            "tol_rank": self.tolerance.rank_rel_tol,
            "tol_res": self.tolerance.residual_tol,
            "channel_mode": self.channel_mode,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Scenario":
        unknown = set(data) - _SCENARIO_KEYS
        if unknown:
            raise InvalidInputError(
                f"unknown scenario keys: {sorted(unknown)}")
        if "config" not in data:
            raise InvalidInputError("scenario needs a config")
        config = _as_config(data["config"])
        ranks = data.get("ranks", "full")
        if ranks == "full":
            profile = None
        else:
            profile = _as_profile(ranks)
            profile.validate(config)
        mask = MessageMask.from_name(str(data.get("mask", "x")))
        t_max = int(data.get("t_max", 6))
        if t_max < 1:
            raise InvalidInputError("t_max must be >= 1")
        weights = _as_weights(data.get("weights", ["1", "1", "1", "1"]))
        seed = int(data.get("seed", 0))
        tol = TolerancePolicy(
            rank_rel_tol=float(data.get("tol_rank",
                                        DEFAULT_TOLERANCE.rank_rel_tol)),
            residual_tol=float(data.get("tol_res",
                                        DEFAULT_TOLERANCE.residual_tol)))
        mode = str(data.get("channel_mode", "constant"))
        if mode not in ("constant", "time-varying"):
            raise InvalidInputError(
                f"channel_mode must be 'constant' or 'time-varying', got {mode!r}")
        return cls(config=config, profile=profile, mask=mask, t_max=t_max,
                   weights=weights, seed=seed, tolerance=tol,
                   channel_mode=mode)


_SCENARIO_KEYS = frozenset(
    ("config", "ranks", "mask", "t_max", "weights", "seed",
     "tol_rank", "tol_res", "channel_mode"))


def _as_config(value) -> AntennaConfig:
    if isinstance(value, str):
        value = value.split(",")
    try:
        parts = [int(v) for v in value]
    except (TypeError, ValueError):
        raise InvalidInputError(f"config must be four integers, got {value!r}")
    if len(parts) != 4:
        raise InvalidInputError(f"config must be four integers, got {value!r}")
    return AntennaConfig(*parts)


def _as_profile(value) -> RankProfile:
    if isinstance(value, str):
        value = value.split(",")
    try:
        parts = [int(v) for v in value]
    except (TypeError, ValueError):
        raise InvalidInputError(f"ranks must be four integers, got {value!r}")
    if len(parts) != 4:
        raise InvalidInputError(f"ranks must be four integers, got {value!r}")
    return RankProfile(*parts)


def _as_weights(value) -> Tuple[Rational, Rational, Rational, Rational]:
    if isinstance(value, str):
        value = value.split(",")
    parts = [w if isinstance(w, Fraction) else parse_rational(str(w))
             for w in value]
    if len(parts) != 4:
        raise InvalidInputError("need exactly four weights")
    if any(w < 0 for w in parts):
        raise InvalidInputError("weights must be non-negative")
    if all(w == 0 for w in parts):
        raise InvalidInputError("at least one weight must be positive")
    return tuple(parts)


def _scenario_from_args(args: argparse.Namespace) -> Scenario:
    data: Dict = {}
    if getattr(args, "scenario", None):
        with open(args.scenario, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise InvalidInputError("scenario file must hold a JSON object")
        data.update(loaded)
    overrides = (
        ("config", args.config),
        ("ranks", args.ranks),
        ("mask", args.mask),
        ("t_max", args.tmax),
        ("weights", args.weights),
        ("seed", args.seed),
        ("tol_rank", args.tol_rank),
        ("tol_res", args.tol_res),
        ("channel_mode", "time-varying" if args.time_varying else None),
    )
    for key, value in overrides:
        if value is not None:
            data[key] = value
    return Scenario.from_dict(data)


# ---------------------------------------------------------------------------
# operations


def _region_for(scenario: Scenario) -> Optional[DofRegion]:
    # the implemented regions assume links in general position, so a
    # rank-deficient scenario has no applicable outer bound here
    if scenario.profile is not None:
        return None
    name = scenario.mask.canonical_name
    if name == "x":
        return x_outer_region(scenario.config)
    if name in _Z_ABSENT:
        return z_outer_region(scenario.config, _Z_ABSENT[name])
    return None


def cmd_bound(scenario: Scenario) -> dict:
    """Outer bound of the scenario's network, with the region rows."""
    name = scenario.mask.canonical_name
    config = scenario.config
    if name == "x":
        region = x_outer_region(config)
        total = x_total_outer(config)
    elif name in _Z_ABSENT:
        region = z_outer_region(config, _Z_ABSENT[name])
        total = z_total_outer(config, _Z_ABSENT[name])
    else:
        raise InvalidInputError(
            f"no outer bound is implemented for mask {name!r}")
    return {
        "config": list(config.as_tuple()),
        "mask": name,
        "outer_total": format_rational(total),
        "region_constraints": [
            {"coeffs": [format_rational(c) for c in row.coeffs],
             "rhs": format_rational(row.rhs),
             "label": row.label}
            for row in region.constraints],
        "per_Z_totals": {
            f"z{i}{j}": format_rational(z_total_outer(config, (i, j)))
            for (i, j) in LINKS},
    }


def cmd_allocate(scenario: Scenario) -> dict:
    """Best achievable allocation over extensions and orientations."""
    res = sweep_best(scenario.config, scenario.profile, scenario.mask,
                     scenario.weights, scenario.t_max)
    alloc = res.best
    region = _region_for(scenario)
    gap: Optional[str] = None
    if region is not None:
        outer, _ = region.maximize(scenario.weights)
        gap = format_rational(outer - res.dof)
    return {
        "config": list(scenario.config.as_tuple()),
        "mask": scenario.mask.canonical_name,
        "allocation": _alloc_dict(alloc),
        "dof": format_rational(res.dof),
        "per_message_dof": [format_rational(v) for v in res.per_message_dof],
        "side": alloc.side,
        "T": alloc.t,
        "gap_to_outer": gap,
    }


def _alloc_dict(alloc: StreamAllocation) -> dict:
    out = {f"d{i}{j}_ia": alloc.ia(i, j) for (i, j) in LINKS}
    out.update({f"d{i}{j}_ns": alloc.ns(i, j) for (i, j) in LINKS})
    out["t"] = alloc.t
    out["side"] = alloc.side
    return out


def _extended_draw(config: AntennaConfig, profile: Optional[RankProfile],
                   t: int, seed: int, mode: str):
    if mode == "time-varying":
        return generate_time_varying(config, t, seed, profile)
    if profile is None:
        cs = generate_full_rank(config, seed=seed)
    else:
        cs = generate_rank_deficient(config, profile, seed=seed)
    return extend_constant(cs, t)


def _reversed_extension(ext):
    slots = [reciprocal_channels(s) for s in ext.slots]
    if ext.constant:
        return extend_constant(slots[0], ext.t)
    return extend_time_varying(slots)


def _design_and_verify(scenario: Scenario, alloc: StreamAllocation,
                       seed: int) -> VerificationReport:
    tol = scenario.tolerance
    ext = _extended_draw(scenario.config, scenario.profile, alloc.t, seed,
                         scenario.channel_mode)
    if alloc.side == "reciprocal":
        rext = _reversed_extension(ext)
        pre_r, rec_r = design(rext, alloc.relabeled_swap(), seed=seed, tol=tol)
        pre, rec = reciprocal_transfer(pre_r, rec_r)
    else:
        pre, rec = design(ext, alloc, seed=seed, tol=tol)
    return verify_feasibility(ext, pre, rec, tol)


def _verify_worker(payload):
    scenario, alloc, trial, resample = payload
    base_seed = scenario.seed + trial
    attempts = 0
    while True:
        seed = base_seed + 7919 * attempts
        try:
            report = _design_and_verify(scenario, alloc, seed)
        except FeasibilityError as exc:
            if resample and attempts < 8:
                attempts += 1
                continue
            return (trial, base_seed, attempts, None, str(exc))
        except InfeasibleAllocationError as exc:
            return (trial, base_seed, attempts, None, str(exc))
        return (trial, base_seed, attempts, report, "")


VERIFY_HEADER = (
    "trial", "seed", "resampled", "passed", "max_zf_residual",
    "alignment_residual", "min_g_rx1", "min_g_rx2", "decode_11", "decode_12",
    "decode_21", "decode_22", "achieved_dof", "note")


def cmd_verify(scenario: Scenario, trials: int,
               allocation: Optional[StreamAllocation] = None,
               resample: bool = False, jobs: int = 1,
               ) -> Tuple[List[tuple], bool]:
    """Monte Carlo feasibility rows for an allocation on fresh draws.

    Without an explicit allocation the scenario's best one is used.  A
    draw the design cannot survive yields a failing row; with resampling
    enabled it is retried on derived seeds first, and the retry count is
    reported.
    """
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    if allocation is None:
        allocation = sweep_best(scenario.config, scenario.profile,
                                scenario.mask, scenario.weights,
                                scenario.t_max).best
    payloads = [(scenario, allocation, k, resample) for k in range(trials)]
    results = _parallel_map(_verify_worker, payloads, jobs)
    rows = []
    ok = True
    for trial, seed, resampled, report, note in results:
        if report is None:
            ok = False
            rows.append((trial, seed, resampled, "false", "", "", "", "",
                         "false", "false", "false", "false", "", note))
            continue
        ok = ok and report.passed
        d = report.decode_rank_ok
        sv = report.min_g_singular_value
        rows.append((
            trial, seed, resampled, _b(report.passed),
            _e(report.max_zero_forcing_residual),
            _e(report.alignment_residual),
            "" if sv[1] is None else _e(sv[1]),
            "" if sv[2] is None else _e(sv[2]),
            _b(d[(1, 1)]), _b(d[(1, 2)]), _b(d[(2, 1)]), _b(d[(2, 2)]),
            format_rational(report.achieved_dof), note))
    return rows, ok


TABLES_HEADER = (
    "catalog", "variant", "m1", "m2", "n1", "n2", "regime", "t",
    "d11_ia", "d12_ia", "d21_ia", "d22_ia",
    "d11_ns", "d12_ns", "d21_ns", "d22_ns",
    "dof", "side", "allocator_dof", "outer_total", "equal")


def _tables_referee(payload):
    kind, cfg, variant, t_max = payload
    config = AntennaConfig(*cfg)
    if kind == "x":
        best = sweep_best(config, t_max=t_max).dof
        outer = x_total_outer(config)
    else:
        absent = _Z_ABSENT["z21" if variant == "x21" else "z12"]
        mask = MessageMask.from_name(f"z{absent[0]}{absent[1]}")
        best = sweep_best(config, mask=mask, t_max=t_max).dof
        outer = z_total_outer(config, absent)
    return best, outer


def _parse_which(text: str) -> Tuple[str, ...]:
    if text.strip().lower() == "all":
        return ROMANS
    out = []
    for token in text.split(","):
        token = token.strip().upper()
        if token not in ROMANS:
            raise InvalidInputError(
                f"unknown catalog id {token!r}; use I..XVII or 'all'")
        if token not in out:
            out.append(token)
    if not out:
        raise InvalidInputError("no catalog ids requested")
    return tuple(out)


def cmd_tables(which: Sequence[str], m_range: Tuple[int, int],
               n_range: Tuple[int, int], t_max: int = 6, jobs: int = 1,
               ) -> Tuple[List[tuple], bool]:
    """Catalog rows against the allocator and the outer bound.

    For every configuration in range that one of the requested pages
    serves, the page's row is printed next to the sweep optimum and the
    outer bound, with an equality flag for CI gating.  Rows attained on
    the reversed network report side "reciprocal".
    """
    wanted = set(which)
    m_lo, m_hi = m_range
    n_lo, n_hi = n_range
    if m_lo < 1 or m_lo > m_hi or n_lo < 1 or n_lo > n_hi:
        raise InvalidInputError("antenna ranges must satisfy 1 <= lo <= hi")
    entries = []
    if wanted & _X_PAGES:
        for cfg in _config_grid(m_lo, m_hi, n_lo, n_hi):
            try:
                res = closed_form_X(AntennaConfig(*cfg))
            except UnsupportedShapeError:
                continue
            if res.catalog in wanted:
                entries.append((res.catalog, "x", cfg, res))
    if "VIII" in wanted:
        for m in range(m_lo, m_hi + 1):
            for n in range(n_lo, n_hi + 1):
                if m < n:
                    continue
                res = closed_form_X21(m, n)
                entries.append(("VIII", "x21", (m, m, n, n), res))
    if wanted & _Z_PAGES:
        for cfg in _config_grid(m_lo, m_hi, n_lo, n_hi):
            for variant in ("x21", "x12"):
                res = closed_form_Z_appendix(AntennaConfig(*cfg), variant)
                if res.catalog in wanted:
                    entries.append((res.catalog, variant, cfg, res))
    entries.sort(key=lambda e: (ROMANS.index(e[0]), e[1], e[2]))
    payloads = [("x" if variant == "x" else "z", cfg, variant, t_max)
                for _, variant, cfg, _ in entries]
    referee = _parallel_map(_tables_referee, payloads, jobs)
    rows = []
    all_equal = True
    for (catalog, variant, cfg, res), (best, outer) in zip(entries, referee):
        equal = res.dof_total == best == outer
        all_equal = all_equal and equal
        side = "reciprocal" if res.via_reciprocal else "original"
        rows.append((catalog, variant, *cfg, res.regime_label, res.row_t,
                     *res.row_streams, format_rational(res.dof_total), side,
                     format_rational(best), format_rational(outer), _b(equal)))
    return rows, all_equal


def _config_grid(m_lo, m_hi, n_lo, n_hi):
    out = []
    for m1 in range(m_lo, m_hi + 1):
        for m2 in range(m_lo, m_hi + 1):
            for n1 in range(n_lo, n_hi + 1):
                for n2 in range(n_lo, n_hi + 1):
                    out.append((m1, m2, n1, n2))
    return out


FIGURE5_HEADER = ("r_d", "r_c", "dof_bc", "dof_ic", "dof_coop_bc", "dof_x")


def cmd_figure5(m: int, rd_values: Sequence[int], rc_values: Sequence[int],
                ) -> List[tuple]:
    """Curve data comparing the rank-deficient families at equal antennas."""
    rows = []
    for rd in rd_values:
        for rc in rc_values:
            rows.append((
                rd, rc,
                closed_form_rank_deficient("bc", m, rc, rd),
                closed_form_rank_deficient("ic", m, rc, rd),
                cooperative_bound(m, rc, rd),
                closed_form_rank_deficient("x", m, rc, rd)))
    return rows


def _probe_worker(payload):
    cfg, samples, t_max, seed = payload
    report = conjecture_probe(AntennaConfig(*cfg), weight_samples=samples,
                              t_max=t_max, seed=seed)
    max_gap = max((s.gap for s in report.samples), default=Fraction(0))
    return max_gap, report.max_relative_gap


PROBE_HEADER = ("m1", "m2", "n1", "n2", "samples", "t_max",
                "max_gap", "max_relative_gap")


def cmd_probe(grid: Tuple[int, int], weight_samples: int, seed: int,
              t_max: int = 6, jobs: int = 1) -> List[tuple]:
    """Weighted outer-vs-inner gap per configuration on a grid."""
    lo, hi = grid
    if lo < 1 or lo > hi:
        raise InvalidInputError("grid must satisfy 1 <= lo <= hi")
    configs = _config_grid(lo, hi, lo, hi)
    payloads = [(cfg, weight_samples, t_max, seed) for cfg in configs]
    results = _parallel_map(_probe_worker, payloads, jobs)
    return [(*cfg, weight_samples, t_max, format_rational(gap),
             format_rational(rel))
            for cfg, (gap, rel) in zip(configs, results)]


# ---------------------------------------------------------------------------
# plumbing


def _parallel_map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _b(flag: bool) -> str:
    return "true" if flag else "false"


def _e(x: float) -> str:
    return f"{x:.6e}"


def _csv_text(header: Sequence[str], rows: Sequence[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_bundle(path: str, command: str, inputs: dict, payload: str,
                  started: float) -> None:
    bundle = {
        "command": command,
        "inputs": inputs,
        "outputs": {"payload": payload},
        "versions": {
            "mimox": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
        "timing_s": round(time.perf_counter() - started, 6),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bundle, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_range(text: str, flag: str) -> Tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise InvalidInputError(f"{flag} must be LO,HI")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise InvalidInputError(f"{flag} must be LO,HI integers")
    return lo, hi


def _parse_int_list(text: str, flag: str) -> Tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InvalidInputError(f"{flag} must be a comma list of integers")
    if not values:
        raise InvalidInputError(f"{flag} must not be empty")
    return values


def _parse_alloc(args: argparse.Namespace) -> Optional[StreamAllocation]:
    if args.alloc is None:
        return None
    counts = _parse_int_list(args.alloc, "--alloc")
    if len(counts) != 8:
        raise InvalidInputError(
            "--alloc needs 8 counts: d11_ia,d12_ia,d21_ia,d22_ia,"
            "d11_ns,d12_ns,d21_ns,d22_ns")
    return StreamAllocation(*counts, t=args.alloc_t, side=args.alloc_side)


# ---------------------------------------------------------------------------
# handlers


def _run_bound(args) -> int:
    started = time.perf_counter()
    scenario = _scenario_from_args(args)
    text = _json_text(cmd_bound(scenario))
    _emit(text, args.output)
    if args.bundle:
        _write_bundle(args.bundle, "bound", scenario.to_dict(), text, started)
    return EXIT_OK


def _run_allocate(args) -> int:
    started = time.perf_counter()
    scenario = _scenario_from_args(args)
    text = _json_text(cmd_allocate(scenario))
    _emit(text, args.output)
    if args.bundle:
        _write_bundle(args.bundle, "allocate", scenario.to_dict(), text,
                      started)
    return EXIT_OK


def _run_verify(args) -> int:
    started = time.perf_counter()
    scenario = _scenario_from_args(args)
    allocation = _parse_alloc(args)
    rows, ok = cmd_verify(scenario, args.trials, allocation,
                          args.resample_singular, args.jobs)
    text = _csv_text(VERIFY_HEADER, rows)
    _emit(text, args.output)
    if args.bundle:
        inputs = scenario.to_dict()
        inputs["trials"] = args.trials
        if args.alloc is not None:
            inputs["alloc"] = args.alloc
            inputs["alloc_t"] = args.alloc_t
            inputs["alloc_side"] = args.alloc_side
        _write_bundle(args.bundle, "verify", inputs, text, started)
    return EXIT_OK if ok else EXIT_VERIFY


def _run_tables(args) -> int:
    started = time.perf_counter()
    which = _parse_which(args.which)
    both = _parse_range(args.range, "--range")
    m_range = _parse_range(args.m_range, "--m-range") if args.m_range else both
    n_range = _parse_range(args.n_range, "--n-range") if args.n_range else both
    rows, all_equal = cmd_tables(which, m_range, n_range, args.tmax,
                                 args.jobs)
    text = _csv_text(TABLES_HEADER, rows)
    _emit(text, args.output)
    if args.bundle:
        inputs = {"which": list(which), "m_range": list(m_range),
                  "n_range": list(n_range), "t_max": args.tmax}
        _write_bundle(args.bundle, "tables", inputs, text, started)
    return EXIT_OK if all_equal else EXIT_TABLES


def _run_figure5(args) -> int:
    started = time.perf_counter()
    if args.m < 1:
        raise InvalidInputError("--m must be >= 1")
    rd_values = (_parse_int_list(args.rd, "--rd") if args.rd
                 else tuple(range(1, args.m + 1)))
    rc_values = (_parse_int_list(args.rc, "--rc") if args.rc
                 else tuple(range(0, args.m + 1)))
    rows = cmd_figure5(args.m, rd_values, rc_values)
    printable = [(rd, rc, *(format_rational(v) for v in vals))
                 for rd, rc, *vals in rows]
    text = _csv_text(FIGURE5_HEADER, printable)
    _emit(text, args.output)
    plot_path = args.plot
    if plot_path is None and args.output:
        plot_path = os.path.splitext(args.output)[0] + ".png"
    if plot_path:
        from .figures import render_rank_deficient_curves

        render_rank_deficient_curves(rows, plot_path)
    if args.bundle:
        inputs = {"m": args.m, "rd": list(rd_values), "rc": list(rc_values)}
        _write_bundle(args.bundle, "figure5", inputs, text, started)
    return EXIT_OK


def _run_probe(args) -> int:
    started = time.perf_counter()
    grid = _parse_range(args.grid, "--grid")
    if args.samples < 0:
        raise InvalidInputError("--samples must be non-negative")
    rows = cmd_probe(grid, args.samples, args.seed, args.tmax, args.jobs)
    text = _csv_text(PROBE_HEADER, rows)
    _emit(text, args.output)
    if args.bundle:
        inputs = {"grid": list(grid), "samples": args.samples,
                  "seed": args.seed, "t_max": args.tmax}
        _write_bundle(args.bundle, "probe", inputs, text, started)
    return EXIT_OK


def _add_scenario_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--scenario", metavar="FILE",
                    help="JSON scenario file; explicit flags override it")
    sp.add_argument("--config", metavar="M1,M2,N1,N2",
                    help="antenna counts, transmitters first")
    sp.add_argument("--ranks", metavar="R11,R12,R21,R22|full",
                    help="per-link rank profile (default full)")
    sp.add_argument("--mask", choices=("x", "ic", "bc", "mac",
                                       "z11", "z12", "z21", "z22"),
                    help="which messages carry data (default x)")
    sp.add_argument("--tmax", type=int, help="largest extension length")
    sp.add_argument("--weights", metavar="W11,W12,W21,W22",
                    help="per-message rational weights (default 1,1,1,1)")
    sp.add_argument("--seed", type=int, help="base RNG seed")
    sp.add_argument("--tol-rank", type=float, dest="tol_rank",
                    help="relative rank-decision tolerance")
    sp.add_argument("--tol-res", type=float, dest="tol_res",
                    help="residual pass tolerance")
    sp.add_argument("--time-varying", action="store_true", default=None,
                    help="draw an independent channel per symbol period")


def _add_output_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--output", metavar="FILE",
                    help="write the payload here instead of stdout")
    sp.add_argument("--bundle", metavar="FILE",
                    help="also write a replayable report bundle")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mimox",
        description="DoF bounds, stream allocation, and aligned precoder "
                    "synthesis for two-user MIMO X channels")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="outer bounds for one configuration")
    _add_scenario_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_run_bound)

    p = sub.add_parser("allocate", help="best stream allocation")
    _add_scenario_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_run_allocate)

    p = sub.add_parser("verify", help="Monte Carlo feasibility batch")
    _add_scenario_flags(p)
    _add_output_flags(p)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--alloc", metavar="8 COUNTS",
                   help="explicit stream counts instead of the sweep optimum")
    p.add_argument("--alloc-t", type=int, default=1, dest="alloc_t")
    p.add_argument("--alloc-side", choices=("original", "reciprocal"),
                   default="original", dest="alloc_side")
    p.add_argument("--resample-singular", action="store_true",
                   help="retry degenerate draws on derived seeds")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_run_verify)

    p = sub.add_parser("tables", help="catalog reproduction with referee")
    p.add_argument("--which", default="all",
                   help="comma list of catalog ids I..XVII, or 'all'")
    p.add_argument("--range", default="1,4", metavar="LO,HI",
                   help="antenna range for both sides")
    p.add_argument("--m-range", dest="m_range", metavar="LO,HI",
                   help="transmit antenna range (overrides --range)")
    p.add_argument("--n-range", dest="n_range", metavar="LO,HI",
                   help="receive antenna range (overrides --range)")
    p.add_argument("--tmax", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)
    _add_output_flags(p)
    p.set_defaults(func=_run_tables)

    p = sub.add_parser("figure5", help="rank-deficient family curves")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--rd", metavar="LIST", help="direct ranks (default 1..M)")
    p.add_argument("--rc", metavar="LIST", help="cross ranks (default 0..M)")
    p.add_argument("--plot", metavar="FILE.png",
                   help="figure path (default: next to --output)")
    _add_output_flags(p)
    p.set_defaults(func=_run_figure5)

    p = sub.add_parser("probe", help="outer-vs-inner weighted gap scan")
    p.add_argument("--grid", default="1,2", metavar="LO,HI")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tmax", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)
    _add_output_flags(p)
    p.set_defaults(func=_run_probe)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
