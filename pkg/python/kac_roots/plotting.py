"""
SVG line charts drawn with matplotlib.

Figures are rendered on a private Agg canvas, so importing this module never
changes the pyplot backend. Identical input gives byte-identical output: the
SVG hash salt is fixed and the ``Date`` metadata is dropped.
"""

import io
import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import matplotlib
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .errors import OutputError

logger = logging.getLogger(__name__)

FIGSIZE = (8.0, 5.0)
SERIES_GID = "series-{}"
SVG_RC = {
    "svg.hashsalt": "kac-roots",
    "svg.fonttype": "none",
    "font.size": 11,
}


@dataclass(frozen=True)
class Series:
    label: str
    points: Tuple[Tuple[float, float], ...]

    def __post_init__(self) -> None:
        pts = tuple((float(x), float(y)) for x, y in self.points)
        if not pts:
            raise ValueError(f"series {self.label!r} has no points")
        if not all(math.isfinite(x) and math.isfinite(y) for x, y in pts):
            raise ValueError(f"series {self.label!r} has non-finite points")
        object.__setattr__(self, "points", pts)


def _figure(series: Sequence[Series], title: str, x_label: str, y_label: str) -> Figure:
    fig = Figure(figsize=FIGSIZE)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot()
    for i, s in enumerate(series):
        xs, ys = zip(*s.points)
        # one group per series, addressable as <g id="series-i">
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.5, label=s.label, gid=SERIES_GID.format(i))
    if title:
        ax.set_title(title)
    if x_label:
        ax.set_xlabel(x_label)
    if y_label:
        ax.set_ylabel(y_label)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="upper left", bbox_to_anchor=(1.02, 1.0), frameon=False)
    fig.tight_layout()
    return fig


def render_svg(series: Sequence[Series], title: str = "", x_label: str = "", y_label: str = "") -> str:
    """SVG document text for ``series`` drawn on shared axes."""
    if not series:
        raise ValueError("need at least one series")
    with matplotlib.rc_context(SVG_RC):
        fig = _figure(series, title, x_label, y_label)
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue().decode("utf-8")


def emit_svg(series: Sequence[Series], path: str, title: str = "", x_label: str = "", y_label: str = "") -> None:
    """Write :func:`render_svg` output to ``path``; IO failures raise :class:`OutputError`."""
    text = render_svg(series, title, x_label, y_label)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise OutputError(path, e.strerror or str(e)) from None
    logger.info("wrote chart with %d series to %s", len(series), path)
