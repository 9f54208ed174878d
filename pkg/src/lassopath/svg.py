"""Bare-bones SVG line charts for curve inspection."""
import math
from xml.sax.saxutils import escape

WIDTH, PANEL_H, PAD = 640, 180, 40


def _polyline(xs, ys, x0, y0, w, h):
    finite = [(x, y) for x, y in zip(xs, ys) if math.isfinite(y)]
    if len(finite) < 2:
        return ""
    lo = min(y for _, y in finite)
    hi = max(y for _, y in finite)
    span = hi - lo or 1.0
    xlo, xhi = xs[0], xs[-1]
    xspan = xhi - xlo or 1.0
    pts = " ".join(
        f"{x0 + w * (x - xlo) / xspan:.2f},{y0 + h - h * (y - lo) / span:.2f}" for x, y in finite
    )
    return f'<polyline fill="none" stroke="black" stroke-width="1.2" points="{pts}"/>'


def curves_svg(lams, series, log_x=True):
    """series: list of (label, values). One stacked panel per series."""
    xs = [math.log10(v) for v in lams] if log_x else list(lams)
    w = WIDTH - 2 * PAD
    h = PANEL_H - 2 * PAD
    total_h = PANEL_H * len(series)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{total_h}">']
    for k, (label, ys) in enumerate(series):
        y0 = k * PANEL_H + PAD
        parts.append(f'<rect x="{PAD}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="gray"/>')
        parts.append(f'<text x="{PAD}" y="{y0 - 8}" font-size="12">{escape(label)}</text>')
        parts.append(_polyline(xs, ys, PAD, y0, w, h))
        xlabel = "log10(lambda)" if log_x else "lambda"
        parts.append(f'<text x="{PAD + w}" y="{y0 + h + 14}" font-size="10" '
                     f'text-anchor="end">{xlabel}</text>')
    parts.append("</svg>")
    return "\n".join(p for p in parts if p) + "\n"
