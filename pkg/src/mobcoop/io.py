"""Record serialization (CSV, JSON) and a minimal SVG line chart."""
from __future__ import annotations

import csv
import io
import json
import math
from xml.sax.saxutils import escape

from .exceptions import EmptyResultError

SIG_DIGITS = 12
ROUND_TRIP_TOL = 1e-12

THRESHOLD_FIELDS = ("n", "rho", "alpha", "alpha0", "alpha1", "beta", "m", "delta_min", "sustainable")
NORM_FIELDS = ("n", "rho", "m", "alpha", "beta_star", "delta_min_at_star")
TAX_FIELDS = ("n", "rho", "s", "delta", "m", "beta", "alpha", "tau_star", "tau_dagger",
              "tau_a", "regime", "welfare")


def format_float(x):
    """Shortest ``%g`` text with at least 12 significant digits that parses back within 1e-12."""
    for k in range(SIG_DIGITS, 18):
        text = format(x, f".{k}g")
        if abs(float(text) - x) <= ROUND_TRIP_TOL:
            return text
    return repr(x)


def format_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return format_float(v)
    if hasattr(v, "value"):  # enums
        return str(v.value)
    if hasattr(v, "item"):  # numpy scalars
        return format_value(v.item())
    return str(v)


def to_csv(records, fields):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in records:
        writer.writerow([format_value(r.get(f)) for f in fields])
    return buf.getvalue()


def _parse_cell(s):
    if s == "":
        return None
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def from_csv(text):
    """Parse CSV text back into a list of dicts with numbers converted."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return []
    header, body = rows[0], rows[1:]
    return [{k: _parse_cell(v) for k, v in zip(header, row)} for row in body]


def _json_ready(v):
    if isinstance(v, float) or hasattr(v, "item") and isinstance(v.item(), float):
        v = float(v)
        return None if math.isnan(v) else float(format_float(v))
    if isinstance(v, bool):
        return int(v)
    if hasattr(v, "value"):
        return v.value
    if hasattr(v, "item"):
        return v.item()
    return v


def to_json(records, fields):
    rows = [{f: _json_ready(r.get(f)) for f in fields} for r in records]
    return json.dumps(rows, indent=1) + "\n"


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _ticks(lo, hi, k=5):
    return [lo + (hi - lo) * j / (k - 1) for j in range(k)]


def render_chart(records, x, y, group=None, title=None, width=640, height=400):
    """One polyline per group value on linear axes, with a legend.

    Points whose ``x`` or ``y`` is missing or NaN are skipped. A group with
    a single point is drawn as a one-point polyline plus a circle marker.
    """
    pts = []
    for r in records:
        for f in (x, y) + ((group,) if group else ()):
            if f not in r:
                raise KeyError(f"field {f!r} not present in records")
        xv, yv = r[x], r[y]
        if xv is None or yv is None or isinstance(xv, str) or isinstance(yv, str):
            continue
        xv, yv = float(xv), float(yv)
        if math.isnan(xv) or math.isnan(yv):
            continue
        pts.append((r[group] if group else "", xv, yv))
    if not pts:
        raise EmptyResultError("no plottable points")

    groups = []
    for g, _, _ in pts:
        if g not in groups:
            groups.append(g)
    xs = [p[1] for p in pts]
    ys = [p[2] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    left, right, top, bottom = 70, 150, 40, 50
    pw, ph = width - left - right, height - top - bottom

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.2f}" y="20" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="14">{escape(str(title))}</text>')
    for v in _ticks(x0, x1):
        out.append(f'<text x="{sx(v):.2f}" y="{top + ph + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{v:.3g}</text>')
    for v in _ticks(y0, y1):
        out.append(f'<text x="{left - 6}" y="{sy(v) + 4:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{v:.3g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 12}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">{escape(x)}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.2f}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="12" transform="rotate(-90 16 {top + ph / 2:.2f})">{escape(y)}</text>')

    for k, g in enumerate(groups):
        color = PALETTE[k % len(PALETTE)]
        coords = [(sx(px), sy(py)) for gg, px, py in pts if gg == g]
        joined = " ".join(f"{a:.2f},{b:.2f}" for a, b in coords)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{joined}"/>')
        if len(coords) == 1:
            a, b = coords[0]
            out.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3" fill="{color}"/>')
        ly = top + 14 + 18 * k
        label = f"{group}={format_value(g)}" if group else y
        out.append(f'<line x1="{left + pw + 10}" y1="{ly}" x2="{left + pw + 30}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 35}" y="{ly + 4}" font-family="sans-serif" '
                   f'font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
