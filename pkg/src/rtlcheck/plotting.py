"""Scatter of hierarchy coordinates: request criterion against granting criterion."""

from __future__ import annotations

from typing import Dict, Mapping, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

LEVELS = ["pr", "j", "wf", "sf", "none"]


def hierarchy_figure(points: Mapping[str, Dict[str, Optional[str]]], path: str) -> None:
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    seen: Dict[tuple, int] = {}
    for name, coords in sorted(points.items()):
        x = LEVELS.index(coords.get("request") or "none")
        y = LEVELS.index(coords.get("granting") or "none")
        k = seen.get((x, y), 0)
        seen[(x, y)] = k + 1
        ax.scatter([x], [y], color="k", s=18, zorder=3)
        ax.annotate(name, (x, y), xytext=(5, 5 + 10 * k), textcoords="offset points", fontsize=8)
    ticks = [lv.upper() if lv != "none" else "none" for lv in LEVELS]
    ax.set_xticks(range(len(LEVELS)), ticks)
    ax.set_yticks(range(len(LEVELS)), ticks)
    ax.set_xlim(-0.5, len(LEVELS) - 0.5)
    ax.set_ylim(-0.5, len(LEVELS) - 0.5)
    ax.set_xlabel("request")
    ax.set_ylabel("granting")
    ax.grid(True, linewidth=0.4, alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
