"""Static log-log SVG charts of sweep results."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from collections import OrderedDict

from .errors import InsufficientData
from .experiments import SweepResult, fit_rate, theoretical_curve

WIDTH, HEIGHT = 720, 480
MARGIN = dict(left=80, right=210, top=30, bottom=60)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f")


def _series(result: SweepResult) -> "OrderedDict[tuple, list]":
    groups: OrderedDict = OrderedDict()
    for r in result.rows:
        if r.failed or not math.isfinite(r.mean_loss):
            continue
        groups.setdefault((r.scheme, r.mode, r.p_or_s), []).append(r)
    for rows in groups.values():
        rows.sort(key=lambda r: r.N)
    return groups


def _label(key) -> str:
    scheme, mode, value = key
    return f"{scheme} {'p' if mode == 'p' else 'S'}={value}"


def _overlay(scheme: str, rows: list, mode: str, value, delta: float, floor: float) -> list[tuple[float, float]]:
    """Bound shape anchored at the series' first positive point (only the slope is meaningful)."""
    if mode == "p" and 0 < value < 1 and all((1 - value) * r.N >= 1 for r in rows):
        curve = [theoretical_curve(scheme, r.N, value, delta) for r in rows]
    else:
        b = 3 if scheme == "LeTCC" else 2
        curve = [float(r.N) ** -b for r in rows]
    anchor = next(((r.mean_loss, c) for r, c in zip(rows, curve) if r.mean_loss > 0), (floor, curve[0]))
    scale = anchor[0] / anchor[1]
    return [(r.N, max(c * scale, floor)) for r, c in zip(rows, curve)]


def render_svg(result: SweepResult, overlay: bool = False, delta: float = 0.05) -> str:
    """One polyline per (scheme, mode, value) series; dashed bound paths per scheme.

    Zero losses cannot sit on a log axis; they are pinned to the bottom
    edge. Series with fewer than 3 positive rows are drawn without a slope.
    Raises InsufficientData when there is no finite, non-failed row.
    """
    groups = _series(result)
    if not groups:
        raise InsufficientData("no plottable rows")
    fits = {}
    for key, rows in groups.items():
        if sum(r.mean_loss > 0 for r in rows) >= 3:
            fits[key] = fit_rate(rows)

    positive = [r.mean_loss for rows in groups.values() for r in rows if r.mean_loss > 0]
    if positive:
        ly0, ly1 = math.floor(math.log10(min(positive))), math.ceil(math.log10(max(positive)))
    else:
        ly0, ly1 = -3, 0
    floor = 10.0**ly0

    overlays = OrderedDict()
    if overlay:
        for key, rows in groups.items():
            scheme, mode, value = key
            if scheme not in overlays:
                overlays[scheme] = _overlay(scheme, rows, mode, value, delta, floor)
    ys = [y for pts in overlays.values() for _, y in pts]
    if ys:
        ly1 = max(ly1, math.ceil(math.log10(max(ys))))

    xs = [r.N for rows in groups.values() for r in rows]
    lx0, lx1 = math.log10(min(xs)), math.log10(max(xs))
    if lx1 == lx0:
        lx0, lx1 = lx0 - 0.5, lx1 + 0.5
    if ly1 == ly0:
        ly1 += 1
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(n):
        return MARGIN["left"] + (math.log10(n) - lx0) / (lx1 - lx0) * pw

    def py(v):
        v = max(v, floor)
        return MARGIN["top"] + (ly1 - math.log10(v)) / (ly1 - ly0) * ph

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(WIDTH),
                     height=str(HEIGHT), viewBox=f"0 0 {WIDTH} {HEIGHT}")
    ET.SubElement(svg, "rect", x="0", y="0", width=str(WIDTH), height=str(HEIGHT), fill="white")
    axes = ET.SubElement(svg, "g", {"class": "axes", "stroke": "black", "fill": "none"})
    ET.SubElement(axes, "rect", x=str(MARGIN["left"]), y=str(MARGIN["top"]),
                  width=str(pw), height=str(ph))
    text = ET.SubElement(svg, "g", {"class": "labels", "font-family": "sans-serif", "font-size": "12"})
    for e in range(ly0, ly1 + 1):
        y = py(10.0**e)
        ET.SubElement(axes, "line", x1=str(MARGIN["left"] - 5), y1=f"{y:.2f}",
                      x2=str(MARGIN["left"]), y2=f"{y:.2f}")
        t = ET.SubElement(text, "text", {"text-anchor": "end"}, x=str(MARGIN["left"] - 8), y=f"{y + 4:.2f}")
        t.text = f"1e{e}"
    for n in sorted(set(xs)):
        x = px(n)
        ET.SubElement(axes, "line", x1=f"{x:.2f}", y1=str(HEIGHT - MARGIN["bottom"]),
                      x2=f"{x:.2f}", y2=str(HEIGHT - MARGIN["bottom"] + 5))
        t = ET.SubElement(text, "text", x=f"{x:.2f}", y=str(HEIGHT - MARGIN["bottom"] + 18),
                          **{"text-anchor": "middle"})
        t.text = str(n)
    t = ET.SubElement(text, "text", x=str(MARGIN["left"] + pw / 2), y=str(HEIGHT - 15),
                      **{"text-anchor": "middle"})
    t.text = "N (servers)"
    t = ET.SubElement(text, "text", x="18", y=str(MARGIN["top"] + ph / 2),
                      transform=f"rotate(-90 18 {MARGIN['top'] + ph / 2})", **{"text-anchor": "middle"})
    t.text = "mean approximation error"

    data = ET.SubElement(svg, "g", {"class": "series"})
    legend = ET.SubElement(svg, "g", {"class": "legend", "font-family": "sans-serif", "font-size": "12"})
    colours = {}
    for i, (key, rows) in enumerate(groups.items()):
        colour = PALETTE[i % len(PALETTE)]
        colours.setdefault(key[0], colour)
        pts = " ".join(f"{px(r.N):.2f},{py(r.mean_loss):.2f}" for r in rows)
        ET.SubElement(data, "polyline", points=pts, fill="none", stroke=colour,
                      **{"stroke-width": "2", "data-series": _label(key)})
        ly = MARGIN["top"] + 10 + 18 * i
        lx = WIDTH - MARGIN["right"] + 12
        ET.SubElement(legend, "line", x1=str(lx), y1=str(ly), x2=str(lx + 20), y2=str(ly),
                      stroke=colour, **{"stroke-width": "2"})
        t = ET.SubElement(legend, "text", x=str(lx + 26), y=str(ly + 4))
        slope = f"{fits[key].slope:.2f}" if key in fits else "n/a"
        zeros = " zero losses at floor" if any(r.mean_loss <= 0 for r in rows) else ""
        t.text = f"{_label(key)} (slope {slope}){zeros}"

    if overlays:
        bounds = ET.SubElement(svg, "g", {"class": "bounds"})
        for scheme, pts in overlays.items():
            d = "M " + " L ".join(f"{px(n):.2f} {py(v):.2f}" for n, v in pts)
            ET.SubElement(bounds, "path", d=d, fill="none", stroke=colours[scheme],
                          **{"stroke-dasharray": "6 4", "stroke-width": "1.5",
                             "data-bound": scheme})
    return ET.tostring(svg, encoding="unicode")
