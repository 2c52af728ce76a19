"""Single-diagram SVG rendering.

Essential points have no finite death, so they are drawn on a separate band
above the finite region, labelled ``inf``. Output is byte-stable: the SVG id
salt is fixed and no date metadata is written.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .persistence import TED  # noqa: E402

_STYLE = {
    "svg.hashsalt": "tedgraph",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
}


def _axis_top(ted: TED) -> float:
    finite = [float(p.death) for p in ted.ph0 + ted.ph1 if not p.essential]
    finite += [float(p.birth) for p in ted.ph0 + ted.ph1]
    top = max(finite, default=0.0)
    return top * 1.1 if top > 0 else 0.5


def render_diagram_svg(ted: TED, title: str | None = None) -> str:
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4, 4))
        top = _axis_top(ted)
        band = top * 1.12
        ax.plot([0, top], [0, top], color="0.6", linewidth=0.8)
        ax.axhline(band, color="0.3", linestyle="--", linewidth=0.8)
        for dim, pts, marker in ((0, ted.ph0, "o"), (1, ted.ph1, "^")):
            xs = [float(p.birth) for p in pts]
            ys = [band if p.essential else float(p.death) for p in pts]
            ax.scatter(xs, ys, marker=marker, s=28, label=f"dim {dim} ({len(pts)})")
        ax.set_xlim(-0.02 * top, top)
        ax.set_ylim(-0.02 * top, band * 1.06)
        ticks = [t for t in ax.get_yticks() if 0 <= t <= top]
        ax.set_yticks(ticks + [band])
        ax.set_yticklabels([f"{t:g}" for t in ticks] + ["inf"])
        ax.set_xlabel("birth")
        ax.set_ylabel("death")
        if title:
            ax.set_title(title)
        ax.legend(loc="lower right", fontsize=8)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()
