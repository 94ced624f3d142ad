"""Deterministic SVG rendering of rejection-frequency grids.

One panel per (n, p) pair, empirical curves dashed with markers, asymptotic
reference curves solid.  The SVG bytes are reproducible for identical inputs:
the hash salt is pinned and the creation date is stripped.
"""

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .errors import IncompleteGrid  # noqa: E402
from .montecarlo import CellResult  # noqa: E402

_COLORS = {
    "specified_theta": "#c23b22",
    "rayleigh_highdim": "#1b7837",
    "rayleigh_signs": "#1b7837",
    "john": "#c23b22",
    "sign_sphericity": "#e08214",
}


def emit_plot(results: list[CellResult], path: str, title: str = "") -> str:
    """Render a full (n, p) grid of per-ell rejection frequencies to SVG."""
    if not results:
        raise IncompleteGrid("no results to plot")
    ns = sorted({r.cell.n for r in results})
    ps = sorted({r.cell.p for r in results})
    ells = sorted({r.cell.ell for r in results})
    panels = defaultdict(list)
    for r in results:
        panels[(r.cell.n, r.cell.p)].append(r)
    for n in ns:
        for p in ps:
            got = sorted({r.cell.ell for r in panels.get((n, p), [])})
            if got != ells:
                raise IncompleteGrid(f"panel (n={n}, p={p}) does not cover ell grid {ells}")

    plt.rcParams["svg.hashsalt"] = "hdunif"
    fig, axes = plt.subplots(len(ns), len(ps), squeeze=False,
                             figsize=(3.2 * len(ps), 2.6 * len(ns)), sharey=True)
    for i, n in enumerate(ns):
        for k, p in enumerate(ps):
            ax = axes[i][k]
            series = defaultdict(dict)   # (test, j) -> ell -> (freq, asym)
            for r in sorted(panels[(n, p)], key=lambda r: r.cell.ell):
                for test_id, tf in r.per_test.items():
                    series[(test_id, r.cell.j)][r.cell.ell] = (tf.frequency, tf.asymptotic)
            for (test_id, j), by_ell in sorted(series.items(), key=lambda kv: str(kv[0])):
                xs = sorted(by_ell)
                freqs = [by_ell[x][0] for x in xs]
                asys = [by_ell[x][1] for x in xs]
                color = _COLORS.get(test_id, "#555555")
                label = test_id if j is None else f"{test_id} (j={j})"
                ax.plot(xs, freqs, linestyle="--", marker="o", markersize=3,
                        color=color, alpha=1.0 if j != 1 else 0.45, label=label)
                if not any(a != a for a in asys):  # skip when any reference is nan
                    ax.plot(xs, asys, linestyle="-", color=color,
                            alpha=1.0 if j != 1 else 0.45)
            ax.set_ylim(-0.02, 1.02)
            ax.set_title(f"n={n}, p={p}", fontsize=9)
            ax.set_xlabel("ell", fontsize=8)
            if k == 0:
                ax.set_ylabel("rejection frequency", fontsize=8)
            ax.tick_params(labelsize=7)
    handles, labels = axes[0][0].get_legend_handles_labels()
    if handles:
        fig.legend(handles, labels, loc="lower center", ncol=max(1, len(labels) // 2),
                   fontsize=7, frameon=False)
    if title:
        fig.suptitle(title, fontsize=11)
    fig.tight_layout(rect=(0, 0.06, 1, 0.97 if title else 1))
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
