"""Small vectorised planar-geometry kernels on complex coordinates."""
from __future__ import annotations

import numpy as np


def segment_distance(points: np.ndarray, a: complex, b: complex) -> np.ndarray:
    """Euclidean distance from each point to the closed segment ``[a, b]``."""
    d = b - a
    den = (d * d.conjugate()).real
    if den == 0:
        return np.abs(points - a)
    t = ((points - a) * d.conjugate()).real / den
    t = np.clip(t, 0.0, 1.0)
    return np.abs(points - (a + t * d))


def polyline_distance(points, vertices: np.ndarray) -> np.ndarray:
    """Distance from each point to a polyline given by its ordered vertices."""
    pts = np.asarray(points, dtype=complex)
    out = np.full(pts.shape, np.inf)
    for a, b in zip(vertices[:-1], vertices[1:]):
        np.minimum(out, segment_distance(pts, a, b), out=out)
    return out


def inside_even_odd(points, polygon: np.ndarray) -> np.ndarray:
    """Even-odd point-in-polygon test (polygon closed implicitly).

    Self-intersecting polygons are fine: the result is the parity of the
    winding number, which is what a square-root sheet flip needs.
    """
    pts = np.asarray(points, dtype=complex)
    flat = pts.ravel()
    # with points sorted by height, each edge only touches the slice it straddles
    order = np.argsort(flat.imag, kind="stable")
    px, py = flat.real[order], flat.imag[order]
    inside = np.zeros(flat.shape, dtype=bool)
    verts = np.asarray(polygon, dtype=complex)
    for a, b in zip(verts, np.roll(verts, -1)):
        ax, ay, bx, by = a.real, a.imag, b.real, b.imag
        if ay == by:
            continue
        # (ay > y) != (by > y)  <=>  min(ay, by) <= y < max(ay, by)
        lo, hi = np.searchsorted(py, [min(ay, by), max(ay, by)], side="left")
        if lo == hi:
            continue
        ys = py[lo:hi]
        x_int = ax + (ys - ay) * (bx - ax) / (by - ay)
        inside[lo:hi] ^= px[lo:hi] < x_int
    out = np.empty_like(inside)
    out[order] = inside
    return out.reshape(pts.shape)


def segments_intersect(p1: complex, p2: complex, q1: complex, q2: complex) -> bool:
    """Proper or touching intersection of two closed segments."""
    def orient(a, b, c):
        return ((b - a).conjugate() * (c - a)).imag

    def on_seg(a, b, c):
        return (min(a.real, b.real) - 1e-15 <= c.real <= max(a.real, b.real) + 1e-15
                and min(a.imag, b.imag) - 1e-15 <= c.imag <= max(a.imag, b.imag) + 1e-15)

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    return ((d1 == 0 and on_seg(q1, q2, p1)) or (d2 == 0 and on_seg(q1, q2, p2))
            or (d3 == 0 and on_seg(p1, p2, q1)) or (d4 == 0 and on_seg(p1, p2, q2)))


def path_crosses_polyline(path: np.ndarray, vertices: np.ndarray) -> bool:
    """Whether any segment of ``path`` meets any segment of ``vertices``.

    Bounding boxes are compared for all segment pairs at once; only the
    surviving pairs go through the exact orientation test.
    """
    path = np.asarray(path, dtype=complex)
    vertices = np.asarray(vertices, dtype=complex)
    a, b = path[:-1, None], path[1:, None]
    c, d = vertices[None, :-1], vertices[None, 1:]
    near = ~((np.maximum(c.real, d.real) < np.minimum(a.real, b.real))
             | (np.minimum(c.real, d.real) > np.maximum(a.real, b.real))
             | (np.maximum(c.imag, d.imag) < np.minimum(a.imag, b.imag))
             | (np.minimum(c.imag, d.imag) > np.maximum(a.imag, b.imag)))
    for i, j in zip(*np.nonzero(near)):
        if segments_intersect(path[i], path[i + 1], vertices[j], vertices[j + 1]):
            return True
    return False


def arc(radius_from: float, radius_to: float, theta_from: float, theta_to: float,
        n: int) -> np.ndarray:
    """Points interpolating radius and angle linearly (endpoints included)."""
    s = np.linspace(0.0, 1.0, n)
    r = radius_from + (radius_to - radius_from) * s
    th = theta_from + (theta_to - theta_from) * s
    return r * np.exp(1j * th)


def line(a: complex, b: complex, n: int) -> np.ndarray:
    return a + (b - a) * np.linspace(0.0, 1.0, n)


def simplify_polyline(vertices: np.ndarray, tol: float) -> np.ndarray:
    """Douglas-Peucker simplification; endpoints are always kept."""
    v = np.asarray(vertices, dtype=complex)
    if len(v) < 3:
        return v
    keep = np.zeros(len(v), dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, len(v) - 1)]
    while stack:
        i, j = stack.pop()
        if j <= i + 1:
            continue
        d = segment_distance(v[i + 1:j], v[i], v[j])
        m = int(np.argmax(d))
        if d[m] > tol:
            keep[i + 1 + m] = True
            stack += [(i, i + 1 + m), (i + 1 + m, j)]
    return v[keep]


def grid_near_polyline(xs: np.ndarray, ys: np.ndarray, vertices: np.ndarray,
                       thr: float, out: np.ndarray | None = None) -> np.ndarray:
    """Mask of grid centres ``xs[j] + i ys[i]`` within ``thr`` of a polyline.

    Exact, and only touches the cells inside each segment's padded bounding
    box, so the cost scales with the cut length rather than the grid size.
    """
    if out is None:
        out = np.zeros((len(ys), len(xs)), dtype=bool)
    for a, b in zip(vertices[:-1], vertices[1:]):
        j0 = np.searchsorted(xs, min(a.real, b.real) - thr, "left")
        j1 = np.searchsorted(xs, max(a.real, b.real) + thr, "right")
        i0 = np.searchsorted(ys, min(a.imag, b.imag) - thr, "left")
        i1 = np.searchsorted(ys, max(a.imag, b.imag) + thr, "right")
        if j0 >= j1 or i0 >= i1:
            continue
        sub = xs[None, j0:j1] + 1j * ys[i0:i1, None]
        out[i0:i1, j0:j1] |= segment_distance(sub, a, b) <= thr
    return out
