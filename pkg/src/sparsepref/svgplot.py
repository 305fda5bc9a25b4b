"""Hand-rolled SVG emission for line plots and heat maps.

No plotting dependency: the outputs are deterministic byte-for-byte for a
given table, and every marker/cell carries its source value in data-*
attributes with 17 significant digits so plots can be cross-checked against
the CSV they came from.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 720, 520
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 130, 50, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")
FONT = 'font-family="DejaVu Sans, sans-serif"'

# dark-to-light stops; luminance increases with t so the scale is monotone
_STOPS = ((0.0, (13, 8, 135)), (0.5, (204, 71, 120)), (1.0, (240, 249, 33)))


def _fmt(x) -> str:
    return format(float(x), ".17g")


def color_at(t: float) -> str:
    """Monotone colormap: linear interpolation through the stop list."""
    t = min(max(float(t), 0.0), 1.0)
    for (t0, c0), (t1, c1) in zip(_STOPS, _STOPS[1:]):
        if t <= t1:
            w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            rgb = tuple(round(a + w * (b - a)) for a, b in zip(c0, c1))
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*_STOPS[-1][1])


def _pad_range(lo: float, hi: float):
    if hi < lo:
        lo, hi = hi, lo
    if hi == lo:
        pad = max(0.5, abs(lo) * 0.05)
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _lin_ticks(lo: float, hi: float, count: int = 5):
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def _log_ticks(lo: float, hi: float):
    ticks = [k for k in range(math.ceil(lo), math.floor(hi) + 1)]
    return ticks if ticks else [lo, hi]


def _tick_label(v: float, log: bool) -> str:
    if log:
        return f"1e{int(v)}" if float(v).is_integer() else f"1e{v:g}"
    return f"{v:.4g}"


def line_plot(path, series, xlabel="", ylabel="", title="", logx=False, logy=False):
    """series: list of (name, xs, ys); log axes transform to log10 internally."""
    if not series or all(len(s[1]) == 0 for s in series):
        raise ValueError("nothing to plot")

    def tx(v):
        return math.log10(v) if logx else v

    def ty(v):
        return math.log10(v) if logy else v

    xs_all = [tx(x) for _, xs, _ in series for x in xs]
    ys_all = [ty(y) for _, _, ys in series for y in ys]
    xlo, xhi = _pad_range(min(xs_all), max(xs_all))
    ylo, yhi = _pad_range(min(ys_all), max(ys_all))
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(v):
        return MARGIN_L + (tx(v) - xlo) / (xhi - xlo) * pw

    def sy(v):
        return MARGIN_T + ph - (ty(v) - ylo) / (yhi - ylo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" {FONT} '
        f'font-size="15">{escape(title)}</text>',
    ]
    axis_y = MARGIN_T + ph
    out.append(
        f'<line x1="{MARGIN_L}" y1="{axis_y}" x2="{MARGIN_L + pw}" y2="{axis_y}" '
        f'stroke="black"/>'
    )
    out.append(
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" y2="{axis_y}" '
        f'stroke="black"/>'
    )
    xticks = _log_ticks(xlo, xhi) if logx else _lin_ticks(xlo, xhi)
    for v in xticks:
        px = MARGIN_L + (v - xlo) / (xhi - xlo) * pw
        out.append(f'<line x1="{px:.1f}" y1="{axis_y}" x2="{px:.1f}" y2="{axis_y + 5}" stroke="black"/>')
        out.append(
            f'<text x="{px:.1f}" y="{axis_y + 20}" text-anchor="middle" {FONT} '
            f'font-size="11">{_tick_label(v, logx)}</text>'
        )
    yticks = _log_ticks(ylo, yhi) if logy else _lin_ticks(ylo, yhi)
    for v in yticks:
        py = MARGIN_T + ph - (v - ylo) / (yhi - ylo) * ph
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{py:.1f}" x2="{MARGIN_L}" y2="{py:.1f}" stroke="black"/>')
        out.append(
            f'<text x="{MARGIN_L - 9}" y="{py + 4:.1f}" text-anchor="end" {FONT} '
            f'font-size="11">{_tick_label(v, logy)}</text>'
        )
    out.append(
        f'<text x="{MARGIN_L + pw / 2:.1f}" y="{HEIGHT - 14}" text-anchor="middle" '
        f'{FONT} font-size="13">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN_T + ph / 2:.1f}" text-anchor="middle" {FONT} '
        f'font-size="13" transform="rotate(-90 20 {MARGIN_T + ph / 2:.1f})">'
        f"{escape(ylabel)}</text>"
    )
    for si, (name, xs, ys) in enumerate(series):
        color = PALETTE[si % len(PALETTE)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        if len(xs) > 1:
            out.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>'
            )
        for x, y in zip(xs, ys):
            out.append(
                f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3.5" fill="{color}" '
                f'data-series="{escape(str(name))}" data-x="{_fmt(x)}" data-y="{_fmt(y)}"/>'
            )
        ly = MARGIN_T + 16 + 18 * si
        lx = MARGIN_L + pw + 12
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{lx + 28}" y="{ly}" {FONT} font-size="12">{escape(str(name))}</text>'
        )
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
    return path


def heatmap(
    path,
    x_values,
    y_values,
    matrix,
    xlabel="",
    ylabel="",
    title="",
    cell_attrs=None,
    overlay_points=None,
    overlay_line=None,
    log_color=True,
):
    """matrix[i][j] is the cell at y_values[i], x_values[j] (None for missing).

    Cells are laid out on the index grid; overlays give coordinates in value
    space and are mapped through the (uniformly spaced) axis values.
    """
    nx, ny = len(x_values), len(y_values)
    if nx == 0 or ny == 0:
        raise ValueError("nothing to plot")
    finite = [v for row in matrix for v in row if v is not None]
    if not finite:
        raise ValueError("no finite cells to plot")
    use_log = log_color and all(v > 0 for v in finite)
    scale = (lambda v: math.log10(v)) if use_log else (lambda v: v)
    smin = min(scale(v) for v in finite)
    smax = max(scale(v) for v in finite)

    def t_of(v):
        return 0.5 if smax == smin else (scale(v) - smin) / (smax - smin)

    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B
    cw, chh = pw / nx, ph / ny

    def cx(xv):  # value-space -> pixel, using the uniform axis spacing
        if nx == 1:
            return MARGIN_L + 0.5 * pw
        frac = (xv - x_values[0]) / (x_values[-1] - x_values[0])
        return MARGIN_L + (frac * (nx - 1) + 0.5) * cw

    def cy(yv):
        if ny == 1:
            return MARGIN_T + 0.5 * ph
        frac = (yv - y_values[0]) / (y_values[-1] - y_values[0])
        return MARGIN_T + ph - (frac * (ny - 1) + 0.5) * chh

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" {FONT} '
        f'font-size="15">{escape(title)}</text>',
    ]
    for i in range(ny):
        for j in range(nx):
            v = matrix[i][j]
            x = MARGIN_L + j * cw
            y = MARGIN_T + ph - (i + 1) * chh
            if v is None:
                fill = "#cccccc"
                attrs = ""
            else:
                fill = color_at(t_of(v))
                attrs = f' data-value="{_fmt(v)}"'
            if cell_attrs is not None and cell_attrs[i][j]:
                attrs += "".join(
                    f' data-{k}="{escape(str(val))}"'
                    for k, val in sorted(cell_attrs[i][j].items())
                )
            out.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{cw + 0.5:.2f}" '
                f'height="{chh + 0.5:.2f}" fill="{fill}"{attrs}/>'
            )
    step_x = max(1, nx // 8)
    for j in range(0, nx, step_x):
        px = MARGIN_L + (j + 0.5) * cw
        out.append(
            f'<text x="{px:.1f}" y="{MARGIN_T + ph + 18}" text-anchor="middle" {FONT} '
            f'font-size="11">{x_values[j]:.4g}</text>'
        )
    step_y = max(1, ny // 8)
    for i in range(0, ny, step_y):
        py = MARGIN_T + ph - (i + 0.5) * chh
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{py + 4:.1f}" text-anchor="end" {FONT} '
            f'font-size="11">{y_values[i]:.4g}</text>'
        )
    out.append(
        f'<text x="{MARGIN_L + pw / 2:.1f}" y="{HEIGHT - 14}" text-anchor="middle" '
        f'{FONT} font-size="13">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN_T + ph / 2:.1f}" text-anchor="middle" {FONT} '
        f'font-size="13" transform="rotate(-90 20 {MARGIN_T + ph / 2:.1f})">'
        f"{escape(ylabel)}</text>"
    )
    if overlay_line is not None:
        (x0, y0), (x1, y1) = overlay_line
        out.append(
            f'<line x1="{cx(x0):.2f}" y1="{cy(y0):.2f}" x2="{cx(x1):.2f}" '
            f'y2="{cy(y1):.2f}" stroke="white" stroke-width="2" stroke-dasharray="6 4"/>'
        )
    for xv, yv in overlay_points or ():
        out.append(
            f'<circle cx="{cx(xv):.2f}" cy="{cy(yv):.2f}" r="4" fill="none" '
            f'stroke="white" stroke-width="2"/>'
        )
    bar_x = MARGIN_L + pw + 24
    bar_h = ph * 0.6
    steps = 24
    for s in range(steps):
        t = s / (steps - 1)
        y = MARGIN_T + bar_h - (s + 1) * bar_h / steps
        out.append(
            f'<rect x="{bar_x}" y="{y:.2f}" width="16" height="{bar_h / steps + 0.5:.2f}" '
            f'fill="{color_at(t)}"/>'
        )
    lo_txt = f"{10 ** smin:.3g}" if use_log else f"{smin:.3g}"
    hi_txt = f"{10 ** smax:.3g}" if use_log else f"{smax:.3g}"
    out.append(
        f'<text x="{bar_x + 20}" y="{MARGIN_T + 10}" {FONT} font-size="11">{hi_txt}</text>'
    )
    out.append(
        f'<text x="{bar_x + 20}" y="{MARGIN_T + bar_h:.1f}" {FONT} font-size="11">{lo_txt}</text>'
    )
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
    return path
