"""File-based rendering of the rank-deficient family comparison curves."""

from __future__ import annotations

from typing import Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .numerics import Rational

# (r_d, r_c, dof_bc, dof_ic, dof_coop_bc, dof_x)
CurveRow = Tuple[int, int, Rational, Rational, Rational, Rational]

_SERIES = (
    ("dof_bc", 2, "BC", "tab:blue", "o"),
    ("dof_ic", 3, "IC", "tab:orange", "s"),
    ("dof_coop_bc", 4, "cooperative BC", "tab:green", "^"),
    ("dof_x", 5, "X", "tab:red", "d"),
)


def render_rank_deficient_curves(rows: Sequence[CurveRow], path: str) -> str:
    """Draw one panel per direct-link rank, four curves per panel.

    Rows must already be sorted by (r_d, r_c); the panels appear in that
    order.  Returns the path written.
    """
    groups = []
    for row in rows:
        if not groups or groups[-1][0] != row[0]:
            groups.append((row[0], []))
        groups[-1][1].append(row)
    ncols = min(2, len(groups)) or 1
    nrows = (len(groups) + ncols - 1) // ncols or 1
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(5.0 * ncols, 3.6 * nrows), squeeze=False
    )
    flat = [ax for line in axes for ax in line]
    for ax in flat[len(groups):]:
        ax.set_visible(False)
    for ax, (r_d, group) in zip(flat, groups):
        xs = [row[1] for row in group]
        for _, idx, label, color, marker in _SERIES:
            ys = [float(row[idx]) for row in group]
            ax.plot(xs, ys, label=label, color=color, marker=marker,
                    markersize=4, linewidth=1.4)
        ax.set_title(f"direct-link rank {r_d}")
        ax.set_xlabel("cross-link rank")
        ax.set_ylabel("sum DoF")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
