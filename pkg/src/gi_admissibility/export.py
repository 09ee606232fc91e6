"""CSV and SVG output for contours, region maps and branch cuts.

The SVG uses mathematical orientation (Im k grows upwards) in a square
viewport. D1 cells are shaded, cuts are dotted and branch points are filled dots.
"""
from __future__ import annotations

import csv
from xml.sax.saxutils import escape

import numpy as np

from .contour import ContourSet
from .omega_surface import BranchCutSet
from .regions import D1, RegionMap

_SIZE = 600.0


def contour_csv(contour: ContourSet, path) -> None:
    """One row per vertex: ``polyline, tag, re, im``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["polyline", "tag", "re", "im"])
        for i, (pl, tag) in enumerate(zip(contour.polylines, contour.classification)):
            for z in pl:
                w.writerow([i, tag, repr(float(z.real)), repr(float(z.imag))])


def cuts_csv(cuts: BranchCutSet, path) -> None:
    """Cut vertices (``kind = cut``) followed by branch points (``kind = branch_point``)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "index", "re", "im"])
        for i, cut in enumerate(cuts.cuts):
            for z in np.asarray(cut):
                w.writerow(["cut", i, repr(float(z.real)), repr(float(z.imag))])
        for i, z in enumerate(cuts.branch_points):
            w.writerow(["branch_point", i, repr(float(z.real)), repr(float(z.imag))])


def regions_csv(rm: RegionMap, path) -> None:
    """Cell centres with their region label."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["re", "im", "label"])
        for i, y in enumerate(rm.ys):
            for j, x in enumerate(rm.xs):
                w.writerow([repr(float(x)), repr(float(y)), int(rm.labels[i, j])])


class _Frame:
    def __init__(self, bounds):
        self.x0, self.x1, self.y0, self.y1 = (float(b) for b in bounds)
        self.s = _SIZE / max(self.x1 - self.x0, self.y1 - self.y0)

    def __call__(self, z: complex) -> tuple[float, float]:
        return (z.real - self.x0) * self.s, (self.y1 - z.imag) * self.s

    def path(self, pts) -> str:
        xy = [self(complex(z)) for z in pts]
        return "M" + " L".join(f"{x:.2f},{y:.2f}" for x, y in xy)


def _d1_rects(rm: RegionMap, frame: _Frame) -> list[str]:
    """Horizontal runs of D1 cells, one rectangle per run."""
    h = rm.cell_size
    out = []
    for i, y in enumerate(rm.ys):
        row = rm.labels[i] == D1
        if not row.any():
            continue
        edges = np.flatnonzero(np.diff(np.concatenate([[0], row.astype(np.int8), [0]])))
        for a, b in zip(edges[::2], edges[1::2]):
            px, py = frame(complex(rm.xs[a] - h / 2, y + h / 2))
            out.append(f'<rect x="{px:.2f}" y="{py:.2f}" width="{(b - a) * h * frame.s:.2f}" '
                       f'height="{h * frame.s:.2f}"/>')
    return out


def render_svg(bounds, contour: ContourSet | None = None, cuts: BranchCutSet | None = None,
               region_map: RegionMap | None = None, title: str = "") -> str:
    frame = _Frame(bounds)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE:.0f}" height="{_SIZE:.0f}" '
             f'viewBox="0 0 {_SIZE:.0f} {_SIZE:.0f}">',
             f'<rect width="{_SIZE:.0f}" height="{_SIZE:.0f}" fill="white"/>']
    if region_map is not None:
        parts.append('<g id="D1" fill="#c8d8f0" stroke="none">')
        parts += _d1_rects(region_map, frame)
        parts.append("</g>")
    ax, ay = frame(0j)
    parts.append(f'<g id="axes" stroke="#999" stroke-width="0.5">'
                 f'<line x1="0" y1="{ay:.2f}" x2="{_SIZE:.0f}" y2="{ay:.2f}"/>'
                 f'<line x1="{ax:.2f}" y1="0" x2="{ax:.2f}" y2="{_SIZE:.0f}"/></g>')
    if contour is not None:
        parts.append('<g id="contour" fill="none" stroke="black" stroke-width="1.2">')
        parts += [f'<path d="{frame.path(pl)}"/>' for pl in contour.polylines]
        parts.append("</g>")
    if cuts is not None:
        parts.append('<g id="cuts" fill="none" stroke="#c03030" stroke-width="1.5" '
                     'stroke-dasharray="2,3">')
        parts += [f'<path d="{frame.path(c)}"/>' for c in cuts.cuts]
        parts.append('</g><g id="branch_points" fill="#c03030">')
        for z in cuts.branch_points:
            x, y = frame(complex(z))
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.5"/>')
        parts.append("</g>")
    legend = [title, "shaded: D1", "solid: Im Omega = 0", "dotted: cuts", "dots: branch points"]
    parts.append('<g id="legend" font-family="sans-serif" font-size="11" fill="black">')
    parts += [f'<text x="8" y="{16 + 14 * i}">{escape(t)}</text>' for i, t in enumerate(legend) if t]
    parts.append("</g></svg>")
    return "\n".join(parts)


def write_svg(path, bounds, contour=None, cuts=None, region_map=None, title: str = "") -> None:
    with open(path, "w") as fh:
        fh.write(render_svg(bounds, contour, cuts, region_map, title))
