"""
app/services/render.py
Static SVG rendering of a scenario and, optionally, its schedule.
Each time step is its own SVG group (id "frame-<t>") so viewers can toggle frames.
"""

import logging
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from core.grid import Instance, Schedule  # noqa: E402

logger = logging.getLogger(__name__)

CELL_INCHES = 0.4
START_COLOR = "#008000"
TARGET_COLOR = "#c8102e"


def render_svg(inst: Instance, schedule: Optional[Schedule], out_path: Path) -> Path:
    w, h = inst.dims.width, inst.dims.height
    fig, ax = plt.subplots(figsize=(max(2.0, w * CELL_INCHES), max(2.0, h * CELL_INCHES)))
    ax.set_xlim(-0.5, w - 0.5)
    ax.set_ylim(-0.5, h - 0.5)
    ax.set_xticks([x - 0.5 for x in range(w + 1)], minor=True)
    ax.set_yticks([y - 0.5 for y in range(h + 1)], minor=True)
    ax.grid(which="minor", color="#cccccc", linewidth=0.5)
    ax.tick_params(which="both", length=0, labelbottom=False, labelleft=False)
    ax.set_aspect("equal")

    starts = ax.scatter([p.x for p in inst.starts], [p.y for p in inst.starts], c=START_COLOR, marker="s", s=30)
    starts.set_gid("starts")
    targets = ax.scatter([p.x for p in inst.targets], [p.y for p in inst.targets], c=TARGET_COLOR, marker="x", s=30)
    targets.set_gid("targets")

    if schedule is not None:
        colors = plt.get_cmap("tab20")
        paths = [r.positions() for r in schedule.routes]
        for i, pts in enumerate(paths):
            (line,) = ax.plot([p.x for p in pts], [p.y for p in pts], color=colors(i % 20), linewidth=1.2, alpha=0.6)
            line.set_gid(f"route-{i}")
        for t in range(schedule.horizon + 1):
            frame = ax.scatter(
                [pts[t].x for pts in paths], [pts[t].y for pts in paths],
                c=[colors(i % 20) for i in range(len(paths))], s=60, edgecolors="black", linewidths=0.5,
            )
            frame.set_gid(f"frame-{t}")

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, format="svg", bbox_inches="tight")
    plt.close(fig)
    logger.info("render_svg: %s (%d frame(s))", out_path, schedule.horizon + 1 if schedule else 0)
    return out_path
