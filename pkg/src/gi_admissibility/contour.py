"""Marching-squares extraction of the curves where Omega is real.

``Im Omega = 0`` exactly where ``Omega^2`` is real and non-negative, so the
extraction runs on ``Im Omega^2`` (a polynomial, independent of the cut
choice) and keeps the pieces with ``Re Omega^2 >= 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .omega_surface import OmegaEvaluator, omega_squared
from .regions import _normalize_bounds, check_resolution

RAY, LOOP, ARC = "RAY", "LOOP", "ARC"

# Node offsets (in cells) keep grid nodes off the symmetry lines x=0, y=0, y=+-x,
# where Im Omega^2 vanishes identically and rounding would scatter its sign.
_DX, _DY = 0.1234, 0.3779
_BISECT = 48


@dataclass
class ContourSet:
    polylines: list
    classification: list
    bounds: tuple
    resolution: int

    def vertices(self) -> np.ndarray:
        if not self.polylines:
            return np.empty(0, dtype=complex)
        return np.concatenate(self.polylines)

    def crossings_circle(self, radius: float) -> np.ndarray:
        """Arguments (in ``[0, 2pi)``) where the polylines cross the circle ``|k| = radius``."""
        out = []
        for pl in self.polylines:
            r = np.abs(pl)
            s = r - radius
            idx = np.nonzero(np.sign(s[:-1]) * np.sign(s[1:]) < 0)[0]
            for i in idx:
                t = s[i] / (s[i] - s[i + 1])
                z = pl[i] + t * (pl[i + 1] - pl[i])
                out.append(math.atan2(z.imag, z.real) % (2 * math.pi))
        return np.sort(np.array(out))

    def crossings_vertical(self, x: float, ymin: float = -np.inf, ymax: float = np.inf) -> np.ndarray:
        """Imaginary parts where the polylines cross the line ``Re k = x``."""
        out = []
        for pl in self.polylines:
            s = pl.real - x
            idx = np.nonzero(np.sign(s[:-1]) * np.sign(s[1:]) < 0)[0]
            for i in idx:
                t = s[i] / (s[i] - s[i + 1])
                y = (pl[i] + t * (pl[i + 1] - pl[i])).imag
                if ymin <= y <= ymax:
                    out.append(y)
        return np.sort(np.array(out))

    def as_dict(self) -> dict:
        return {
            "bounds": list(self.bounds),
            "resolution": self.resolution,
            "polylines": [{"tag": tag, "vertices": [[float(z.real), float(z.imag)] for z in pl]}
                          for pl, tag in zip(self.polylines, self.classification)],
        }


def _bisect(inv, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Refine zeros of Im Omega^2 on the segments ``[a, b]`` (opposite signs at the ends)."""
    fa = omega_squared(inv, a).imag
    for _ in range(_BISECT):
        m = 0.5 * (a + b)
        fm = omega_squared(inv, m).imag
        left = np.sign(fm) == np.sign(fa)
        a = np.where(left, m, a)
        fa = np.where(left, fm, fa)
        b = np.where(left, b, m)
    return 0.5 * (a + b)


def _link(segments: list[tuple]) -> list[tuple[list, bool]]:
    """Chain segments ``(edge_a, edge_b)`` into vertex-id paths; flags closed loops."""
    adj: dict = {}
    for s_id, (ea, eb) in enumerate(segments):
        adj.setdefault(ea, []).append(s_id)
        adj.setdefault(eb, []).append(s_id)
    used = np.zeros(len(segments), dtype=bool)
    chains = []

    def walk(start_edge, s_id):
        path = [start_edge]
        edge = start_edge
        while True:
            used[s_id] = True
            ea, eb = segments[s_id]
            edge = eb if ea == edge else ea
            path.append(edge)
            nxt = [t for t in adj[edge] if not used[t]]
            if not nxt:
                return path
            s_id = nxt[0]

    # open chains first: start at edges with a single incident segment
    for edge, segs in adj.items():
        if len(segs) == 1 and not used[segs[0]]:
            chains.append((walk(edge, segs[0]), False))
    for s_id in range(len(segments)):
        if not used[s_id]:
            path = walk(segments[s_id][0], s_id)
            chains.append((path, path[0] == path[-1]))
    return chains


def extract_contour(ev: OmegaEvaluator, bounds=None, resolution: int = 512) -> ContourSet:
    """Polylines of ``{Im Omega = 0}`` inside the square of half-width ``bounds``."""
    inv = ev.invariants
    w = _normalize_bounds(bounds, ev)
    h = 2 * w / resolution
    check_resolution(ev.cuts, h)
    n = resolution + 1
    xs = -w + (np.arange(n) - 0.5 + _DX) * h
    ys = -w + (np.arange(n) - 0.5 + _DY) * h
    xs = xs[(xs >= -w) & (xs <= w)]
    ys = ys[(ys >= -w) & (ys <= w)]
    k = xs[None, :] + 1j * ys[:, None]
    f = omega_squared(inv, k).imag
    pos = f > 0

    pts: dict = {}
    # horizontal edges (i, j)-(i, j+1) and vertical edges (i, j)-(i+1, j)
    hi, hj = np.nonzero(pos[:, :-1] != pos[:, 1:])
    vi, vj = np.nonzero(pos[:-1, :] != pos[1:, :])
    if hi.size:
        z = _bisect(inv, k[hi, hj], k[hi, hj + 1])
        pts.update({("h", a, b): c for a, b, c in zip(hi.tolist(), hj.tolist(), z)})
    if vi.size:
        z = _bisect(inv, k[vi, vj], k[vi + 1, vj])
        pts.update({("v", a, b): c for a, b, c in zip(vi.tolist(), vj.tolist(), z)})

    # squares with at least one crossing on their boundary
    hch = pos[:, :-1] != pos[:, 1:]
    vch = pos[:-1, :] != pos[1:, :]
    touched = hch[:-1, :] | hch[1:, :] | vch[:, :-1] | vch[:, 1:]
    segments = []
    for i, j in zip(*np.nonzero(touched)):
        i, j = int(i), int(j)
        e = [("h", i, j), ("v", i, j + 1), ("h", i + 1, j), ("v", i, j)]  # bottom right top left
        hit = [x for x in e if x in pts]
        if len(hit) == 2:
            segments.append((hit[0], hit[1]))
        elif len(hit) == 4:
            centre = 0.25 * (k[i, j] + k[i, j + 1] + k[i + 1, j] + k[i + 1, j + 1])
            same_as_bl = (omega_squared(inv, centre).imag > 0) == pos[i, j]
            if same_as_bl:
                segments += [(e[0], e[1]), (e[2], e[3])]
            else:
                segments += [(e[0], e[3]), (e[1], e[2])]
    # keep only the pieces where Omega^2 is non-negative
    kept = []
    for a, b in segments:
        mid = 0.5 * (pts[a] + pts[b])
        if omega_squared(inv, mid).real >= 0:
            kept.append((a, b))
    roots = list(ev.cuts.branch_points) + [z for z, _ in ev.cuts.even_roots]
    # clip endpoints that poke into Re Omega^2 < 0 back to Re Omega^2 = 0
    for a, b in kept:
        for end, other in ((a, b), (b, a)):
            za, zb = pts[end], pts[other]
            if omega_squared(inv, za).real < 0 <= omega_squared(inv, zb).real:
                lo, hi = zb, za
                for _ in range(_BISECT):
                    m = 0.5 * (lo + hi)
                    if omega_squared(inv, m).real >= 0:
                        lo = m
                    else:
                        hi = m
                # a real-Omega curve can only end where Omega^2 vanishes
                near = [z for z in roots if abs(z - lo) <= 3 * h]
                pts[end] = min(near, key=lambda z: abs(z - lo)) if near else lo
    polylines, tags = [], []
    for path, closed in _link(kept):
        pl = np.array([pts[e] for e in path])
        if len(pl) < 2:
            continue
        ends = (pl[0], pl[-1])
        at_edge = [max(abs(z.real), abs(z.imag)) >= w - 1.5 * h for z in ends]
        tag = LOOP if closed else (RAY if any(at_edge) else ARC)
        polylines.append(pl)
        tags.append(tag)
    return ContourSet(polylines, tags, (-w, w, -w, w), resolution)

