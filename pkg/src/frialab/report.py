"""Figure rendering for the comparison reports.

Renders matplotlib figures next to the delimited output when the CLI is
invoked with --plot.  The CSV remains the canonical artifact; figures are
a convenience view and are not covered by the byte-determinism contract.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Sequence


def _import_pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_comparison(rows: Sequence, path: str) -> str:
    """Two panels: the statistic against its predictions, and the scaled error."""
    plt = _import_pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.0))
    v = [r.v for r in rows]
    ax1.plot(v, [r.phi_v for r in rows], "-", color="0.4", label="gaussian tail")
    ax1.plot(v, [r.thm2_pred for r in rows], "--", color="tab:orange", label="corrected")
    ax1.plot(v, [r.prop1_pred for r in rows], ":", color="tab:green", label="exact exponent")
    ax1.plot(v, [r.d_exact for r in rows], "o", color="tab:blue", label="exact D")
    ax1.set_xlabel("v")
    ax1.set_ylabel("probability")
    ax1.set_title(f"x={rows[0].x:g}, y={rows[0].y:g}")
    ax1.legend()
    ax2.plot(v, [r.normalized_err for r in rows], "s-", color="tab:red")
    ax2.set_xlabel("v")
    ax2.set_ylabel("|D - phi| * u_bar / (1 + v^4)")
    ax2.set_title("scaled deviation")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_sweep(rows: Iterable, path: str) -> str:
    """Scaled deviation against v, one curve per (x, y) pair."""
    plt = _import_pyplot()
    groups: dict[tuple[float, float], list] = defaultdict(list)
    for r in rows:
        groups[(r.x, r.y)].append(r)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for (x, y), grp in sorted(groups.items()):
        grp = sorted(grp, key=lambda r: r.v)
        ax.plot(
            [r.v for r in grp],
            [r.normalized_err for r in grp],
            "o-",
            label=f"x={x:g}, y={y:g}",
        )
    ax.set_xlabel("v")
    ax.set_ylabel("|D - phi| * u_bar / (1 + v^4)")
    ax.set_title("scaled deviation across the grid")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
