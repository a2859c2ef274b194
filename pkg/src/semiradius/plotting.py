"""Static figures for numerical range profiles.

Renders the boundary polygon with the radius and Crawford circles to a
file (format chosen by extension, SVG/PNG/PDF).  Uses the object-model
matplotlib API so no global pyplot state is touched.
"""

from __future__ import annotations

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from matplotlib.patches import Circle

from .gauges import RangeProfile


def render_profile(profile: RangeProfile, path: str, title: str | None = None) -> None:
    """Draw the sampled range boundary and gauge circles to ``path``."""
    fig = Figure(figsize=(5.2, 5.2))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)

    pts = np.concatenate([profile.polygon, profile.polygon[:1]])
    ax.fill(pts.real, pts.imag, alpha=0.15, color="tab:blue")
    ax.plot(pts.real, pts.imag, color="tab:blue", lw=1.2, label="range boundary")

    ax.add_patch(
        Circle((0, 0), profile.omega, fill=False, ls="--", color="tab:red", lw=0.9,
               label=f"radius {profile.omega:.6g}")
    )
    if profile.crawford > 0:
        ax.add_patch(
            Circle((0, 0), profile.crawford, fill=False, ls=":", color="tab:green",
                   lw=0.9, label=f"crawford {profile.crawford:.6g}")
        )
    ax.plot([0], [0], "k+", ms=8)

    lim = 1.15 * max(profile.omega, 1e-12)
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.grid(alpha=0.3)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.legend(loc="upper right", fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
