"""Matplotlib rendering of a knitted AR quiver."""
from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Dict, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def ar_layout(Q) -> Dict[int, Tuple[float, float]]:
    """Rows by length; within a row, order by the mean position of already placed neighbours."""
    rows = defaultdict(list)
    for k, v in enumerate(Q.vertices):
        rows[v.length].append(k)
    nbrs = defaultdict(set)
    for s, t in Q.arrows:
        nbrs[s].add(t)
        nbrs[t].add(s)
    width = max((len(r) for r in rows.values()), default=1)
    pos: Dict[int, Tuple[float, float]] = {}
    for ln in sorted(rows):
        ks = rows[ln]

        def key(k):
            placed = [pos[j][0] for j in nbrs[k] if j in pos]
            bary = sum(placed) / len(placed) if placed else float("inf")
            return (bary, tuple(-d for d in Q.vertices[k].dim_vector))

        ks = sorted(ks, key=key)
        off = (width - len(ks)) / 2.0
        for i, k in enumerate(ks):
            pos[k] = (off + i, float(ln))
    return pos


def plot_ar_quiver(Q, path: Union[str, Path], title: str = "", dpi: int = 120) -> Path:
    pos = ar_layout(Q)
    n = len(Q.vertices)
    w = max(4.0, 1.1 * max((x for x, _ in pos.values()), default=1) + 2)
    h = max(3.0, 0.9 * max((y for _, y in pos.values()), default=1) + 1.5)
    fig, ax = plt.subplots(figsize=(w, h))
    for (s, t), m in sorted(Q.arrows.items()):
        (x0, y0), (x1, y1) = pos[s], pos[t]
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="-|>", color="k", lw=1.0, shrinkA=14, shrinkB=14))
        if m > 1:
            ax.text((x0 + x1) / 2, (y0 + y1) / 2, str(m), fontsize=7, color="k")
    for z, x in sorted(Q.tau.items()):
        (x0, y0), (x1, y1) = pos[z], pos[x]
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="-|>", color="tab:gray", lw=0.8, ls="--",
                                    shrinkA=14, shrinkB=14, connectionstyle="arc3,rad=0.25"))
    for k, v in enumerate(Q.vertices):
        x, y = pos[k]
        face = "#dbe8f5" if v.projective else ("#f5e3db" if v.injective else "white")
        ax.text(x, y, "".join(str(d) for d in v.dim_vector), ha="center", va="center", fontsize=8,
                family="monospace", bbox=dict(boxstyle="round,pad=0.3", fc=face, ec="k", lw=0.6))
    ax.set_xlim(-1, max((x for x, _ in pos.values()), default=0) + 1)
    ax.set_ylim(0, max((y for _, y in pos.values()), default=0) + 1)
    ax.set_ylabel("length")
    ax.set_xticks([])
    ax.set_title(title or f"AR quiver ({n} vertices)", fontsize=10)
    for side in ("top", "right", "bottom"):
        ax.spines[side].set_visible(False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path
