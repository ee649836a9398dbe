"""Minimal static SVG line charts for benchmark medians.

Output is a pure function of the input records: fixed canvas, fixed
palette, coordinates printed with fixed precision.
"""

import math

from .bench import medians

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 150, 40, 50
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2")


def _esc(text):
    return str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _nice_ticks(lo, hi, count=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=raw)
    first = math.ceil(lo / step) * step
    ticks, t = [], first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def line_chart(series, title, xlabel, ylabel, logy=False):
    """Render ``{name: [(x, y), ...]}`` as an SVG document string.

    On a log axis, nonpositive values are clamped to the smallest positive
    value present.
    """
    points = [(x, y) for pts in series.values() for x, y in pts]
    if not points:
        points = [(0.0, 1.0)]
    xs = [float(x) for x, _ in points]
    ys = [float(y) for _, y in points if math.isfinite(y)] or [1.0]
    positive = [y for y in ys if y > 0] or [1.0]
    floor = min(positive)

    def ty(y):
        return math.log10(max(y, floor)) if logy else y

    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1, x_hi + 1
    if logy:
        y_lo, y_hi = math.floor(ty(min(positive))), math.ceil(ty(max(positive)))
        if y_hi == y_lo:
            y_hi += 1
    else:
        y_lo, y_hi = min(0.0, min(ys)), max(ys)
        if y_hi == y_lo:
            y_hi = y_lo + 1

    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(x):
        return LEFT + (x - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return TOP + ph - (v - y_lo) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{_esc(title)}</text>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for x in _nice_ticks(x_lo, x_hi):
        out.append(f'<line x1="{px(x):.2f}" y1="{TOP + ph}" x2="{px(x):.2f}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px(x):.2f}" y="{TOP + ph + 18}" text-anchor="middle">{x:g}</text>')
    y_ticks = range(int(y_lo), int(y_hi) + 1) if logy else _nice_ticks(y_lo, y_hi)
    for v in y_ticks:
        label = f"1e{v}" if logy else f"{v:g}"
        out.append(f'<line x1="{LEFT - 5}" y1="{py(v):.2f}" x2="{LEFT}" y2="{py(v):.2f}" stroke="black"/>')
        out.append(f'<line x1="{LEFT}" y1="{py(v):.2f}" x2="{LEFT + pw}" y2="{py(v):.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{LEFT - 8}" y="{py(v) + 4:.2f}" text-anchor="end">{label}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{_esc(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {TOP + ph / 2:.1f})">{_esc(ylabel)}</text>'
    )
    for i, (name, pts) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{px(float(x)):.2f},{py(ty(float(y))):.2f}" for x, y in pts if math.isfinite(y))
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y in pts:
            if math.isfinite(y):
                out.append(f'<circle cx="{px(float(x)):.2f}" cy="{py(ty(float(y))):.2f}" r="2.5" fill="{color}"/>')
        ly = TOP + 10 + 18 * i
        out.append(f'<line x1="{LEFT + pw + 12}" y1="{ly}" x2="{LEFT + pw + 32}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{LEFT + pw + 38}" y="{ly + 4}">{_esc(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _series(records, attr):
    table = medians(records, attr)
    methods = list(dict.fromkeys(r.method for r in records))
    return {m: sorted(table[m].items()) for m in methods}


def write_error_plot(path, records):
    """Median relative spectral error against k, log y axis."""
    svg = line_chart(_series(records, "rel_spectral"), "median relative spectral error", "k", "||A - A_k||_2 / ||A||_2", logy=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)


def write_time_plot(path, records):
    """Median elapsed milliseconds against k, log y axis."""
    svg = line_chart(_series(records, "elapsed_ms"), "median factorization time", "k", "elapsed (ms)", logy=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
