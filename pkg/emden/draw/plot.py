"""Static SVG line plot of radial profiles."""

from typing import (
    Any,
    List,
    Sequence,
    Tuple,
)

import numpy as np

from shapely.geometry import LineString  # type: ignore

from ..debug import Debug

from ..util import log_info

######################################################################

# Size of the plot in points.
WIDTH = 480.0
HEIGHT = 320.0

# Margin around the plot area.
MARGIN = 40.0

# Simplification tolerance of the polylines, in points.
SIMPLIFY_TOLERANCE = 0.25

# A curve: its label, its values and its RGB color.
Curve = Tuple[str, Any, Tuple[float, float, float]]

DEFAULT_COLORS = [
    (0.12, 0.37, 0.70),
    (0.80, 0.25, 0.15),
    (0.20, 0.55, 0.25),
]

def polyline(r: Any, values: Any, ymax: float) -> List[Tuple[float, float]]:
    """Map a profile to plot coordinates and drop redundant vertices."""
    r = np.asarray(r, dtype=float)
    values = np.asarray(values, dtype=float)
    span = float(r[-1] - r[0]) or 1.0
    xs = MARGIN + (r - r[0]) / span * (WIDTH - 2 * MARGIN)
    ys = HEIGHT - MARGIN - values / ymax * (HEIGHT - 2 * MARGIN)
    line = LineString(list(zip(xs.tolist(), ys.tolist())))
    simple = line.simplify(SIMPLIFY_TOLERANCE, preserve_topology=False)
    return list(simple.coords)

def write_svg(path: str, r: Any, curves: Sequence[Curve], title: str = "") -> None:
    """Plot the curves against r into an SVG file."""
    # Imported here so that the other outputs work without cairo.
    import cairo
    ymax = max(float(np.max(values)) for _, values, _ in curves)
    if not ymax > 0.0:
        ymax = 1.0
    with cairo.SVGSurface(path, WIDTH, HEIGHT) as surface:
        ctx = cairo.Context(surface)
        ctx.set_source_rgb(1.0, 1.0, 1.0)
        ctx.paint()
        _draw_axes(ctx, float(r[0]), float(r[-1]), ymax)
        for index, (label, values, color) in enumerate(curves):
            points = polyline(r, values, ymax)
            ctx.set_source_rgb(*color)
            ctx.set_line_width(1.5)
            ctx.move_to(*points[0])
            for point in points[1:]:
                ctx.line_to(*point)
            ctx.stroke()
            ctx.move_to(WIDTH - MARGIN - 60, MARGIN + 14 * index)
            ctx.show_text(label)
        if title:
            ctx.set_source_rgb(0.0, 0.0, 0.0)
            ctx.move_to(MARGIN, MARGIN / 2)
            ctx.show_text(title)
    if Debug.is_enabled():
        log_info(f"Wrote '{path}'")

def _draw_axes(ctx: Any, rmin: float, rmax: float, ymax: float) -> None:
    """Draw the two axes with their end labels."""
    ctx.set_source_rgb(0.0, 0.0, 0.0)
    ctx.set_line_width(0.75)
    ctx.move_to(MARGIN, MARGIN)
    ctx.line_to(MARGIN, HEIGHT - MARGIN)
    ctx.line_to(WIDTH - MARGIN, HEIGHT - MARGIN)
    ctx.stroke()
    ctx.set_font_size(9.0)
    ctx.move_to(MARGIN, HEIGHT - MARGIN + 14)
    ctx.show_text(f"{rmin:g}")
    ctx.move_to(WIDTH - MARGIN - 20, HEIGHT - MARGIN + 14)
    ctx.show_text(f"r = {rmax:g}")
    ctx.move_to(4, MARGIN + 4)
    ctx.show_text(f"{ymax:.3g}")
