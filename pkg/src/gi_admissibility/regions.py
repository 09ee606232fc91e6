"""Sign regions D1-D4 of the spectral plane and the cut-contact obstruction test.

A region map labels grid cells by the signs of ``Im k^2`` and ``Im Omega``.
The obstruction test asks whether some interior point of a branch cut has a
neighbourhood lying in the closure of a single unbounded D1 component, which
is the situation in which the global relation forces a contradiction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import InconclusiveError, ResolutionError
from .geometry import grid_near_polyline
from .omega_surface import BranchCutSet, OmegaEvaluator

UNDEFINED, D1, D2, D3, D4, CUT = 0, 1, 2, 3, 4, 5
LABEL_NAMES = {UNDEFINED: "UNDEFINED", D1: "D1", D2: "D2", D3: "D3", D4: "D4", CUT: "CUT"}

_Q = math.pi / 4
# Large-|k| sectors where each label lives: sign Im k^2 ~ sin 2θ, sign Im Omega ~ sin 4θ.
ASYMPTOTIC_SECTORS = {
    D1: [(0.0, _Q), (4 * _Q, 5 * _Q)],
    D2: [(_Q, 2 * _Q), (5 * _Q, 6 * _Q)],
    D3: [(2 * _Q, 3 * _Q), (6 * _Q, 7 * _Q)],
    D4: [(3 * _Q, 4 * _Q), (7 * _Q, 8 * _Q)],
}
SECTOR_PAD = 0.05
UNDEFINED_TOL = 1e-12


@dataclass
class Component:
    label: int
    cells: np.ndarray  # (n, 2) array of (row, col) indices
    touches_boundary: bool
    asymptotic_sectors: list = field(default_factory=list)

    @property
    def unbounded(self) -> bool:
        return bool(self.asymptotic_sectors)


@dataclass
class RegionMap:
    """Cell labels on a rectangle; row index is Im k, column index is Re k."""

    bounds: tuple  # (xmin, xmax, ymin, ymax)
    resolution: int
    labels: np.ndarray
    components: list
    xs: np.ndarray
    ys: np.ndarray
    component_index: np.ndarray = None

    @property
    def cell_size(self) -> float:
        return float(self.xs[1] - self.xs[0])

    def centers(self) -> np.ndarray:
        return self.xs[None, :] + 1j * self.ys[:, None]

    def label_at(self, k: complex) -> int:
        j = int(np.clip(np.searchsorted(self.xs, k.real), 0, len(self.xs) - 1))
        i = int(np.clip(np.searchsorted(self.ys, k.imag), 0, len(self.ys) - 1))
        # nearest centre
        j = min((j, max(j - 1, 0)), key=lambda t: abs(self.xs[t] - k.real))
        i = min((i, max(i - 1, 0)), key=lambda t: abs(self.ys[t] - k.imag))
        return int(self.labels[i, j])

    def counts(self) -> dict:
        return {LABEL_NAMES[v]: int(np.count_nonzero(self.labels == v)) for v in LABEL_NAMES}


def default_half_width(ev: OmegaEvaluator) -> float:
    return 3.0 * (1.0 + ev.max_root_modulus)


def _normalize_bounds(bounds, ev) -> float:
    if bounds is None:
        return default_half_width(ev)
    if np.isscalar(bounds):
        return float(bounds)
    return float(max(abs(b) for b in bounds))


def _all_roots(cuts: BranchCutSet) -> list[complex]:
    return list(cuts.branch_points) + [z for z, _ in cuts.even_roots]


def check_resolution(cuts: BranchCutSet, h: float) -> None:
    pts = _all_roots(cuts)
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            if abs(a - b) < 2 * h:
                raise ResolutionError(
                    f"zeros {a:.4g} and {b:.4g} are closer than two cells (h={h:.3g})")


def _label_cells(ev: OmegaEvaluator, xs: np.ndarray, ys: np.ndarray, h: float) -> np.ndarray:
    """Label cells; a cell is CUT when a cut passes within half a cell of its centre.

    Half a cell (not the evaluator's tiny on-cut tolerance) guarantees that a
    cut separates 4-adjacent cells on its two sides.
    """
    k = xs[None, :] + 1j * ys[:, None]
    labels = np.full(k.shape, UNDEFINED, dtype=np.int8)
    cut_mask = np.zeros(k.shape, dtype=bool)
    for c in ev.cuts.cuts:
        grid_near_polyline(xs, ys, c, 0.5 * h * 1.0001, cut_mask)
    om = ev.omega_array(np.where(cut_mask, 0.0, k), check=False)
    imk2 = (k * k).imag
    imom = om.imag
    defined = np.abs(imom) > UNDEFINED_TOL * (1.0 + np.abs(om))
    defined &= np.abs(imk2) > UNDEFINED_TOL * (1.0 + np.abs(k) ** 2)
    up, pos = imk2 > 0, imom > 0
    labels[defined & up & pos] = D1
    labels[defined & up & ~pos] = D2
    labels[defined & ~up & pos] = D3
    labels[defined & ~up & ~pos] = D4
    labels[cut_mask] = CUT
    return labels


def _components(labels: np.ndarray, xs, ys, which=(D1, D2, D3, D4)):
    border = np.zeros(labels.shape, dtype=bool)
    border[0, :] = border[-1, :] = border[:, 0] = border[:, -1] = True
    ang = np.mod(np.angle(xs[None, :] + 1j * ys[:, None]), 2 * math.pi)
    comps = []
    index = np.full(labels.shape, -1, dtype=np.int32)
    for lab in which:
        lab_arr, n = ndimage.label(labels == lab)
        if n == 0:
            continue
        objs = ndimage.find_objects(lab_arr)
        for j in range(1, n + 1):
            sl = objs[j - 1]
            mask = lab_arr[sl] == j
            rows, cols = np.nonzero(mask)
            rows = rows + sl[0].start
            cols = cols + sl[1].start
            on_border = border[rows, cols]
            sectors = []
            if on_border.any():
                a = ang[rows[on_border], cols[on_border]]
                for lo, hi in ASYMPTOTIC_SECTORS[lab]:
                    if np.any((a > lo + SECTOR_PAD) & (a < hi - SECTOR_PAD)):
                        sectors.append((lo, hi))
            index[rows, cols] = len(comps)
            comps.append(Component(lab, np.stack([rows, cols], axis=1),
                                   bool(on_border.any()), sectors))
    return comps, index


def build_region_map(ev: OmegaEvaluator, bounds=None, resolution: int = 512) -> RegionMap:
    """Label the square ``[-W, W]^2`` on a ``resolution x resolution`` cell grid."""
    if resolution < 16:
        raise ValueError("resolution too small")
    w = _normalize_bounds(bounds, ev)
    h = 2 * w / resolution
    check_resolution(ev.cuts, h)
    xs = -w + (np.arange(resolution) + 0.5) * h
    ys = xs.copy()
    labels = _label_cells(ev, xs, ys, h)
    comps, index = _components(labels, xs, ys)
    return RegionMap((-w, w, -w, w), resolution, labels, comps, xs, ys, index)


def build_quadrant_map(ev: OmegaEvaluator, half_width: float, resolution: int) -> RegionMap:
    """First-quadrant part of the map with the same cell size as the full grid.

    ``Im k^2`` and ``Im Omega`` are even in ``k`` and D1 cannot cross the
    coordinate axes (``Im k^2 = 0`` there), so the first quadrant carries all
    D1 information up to the symmetry ``k -> -k``.
    """
    n = resolution // 2
    h = half_width / n
    check_resolution(ev.cuts, h)
    xs = (np.arange(n) + 0.5) * h
    ys = xs.copy()
    labels = _label_cells(ev, xs, ys, h)
    comps, index = _components(labels, xs, ys, which=(D1,))
    # only the outer edges (right, top) of the quadrant are at "infinity"
    for c in comps:
        rows, cols = c.cells[:, 0], c.cells[:, 1]
        outer = (rows == n - 1) | (cols == n - 1)
        c.touches_boundary = bool(outer.any())
        ang = np.angle(xs[cols[outer]] + 1j * ys[rows[outer]])
        lo, hi = ASYMPTOTIC_SECTORS[D1][0]
        c.asymptotic_sectors = ([(lo, hi)] if np.any((ang > lo + SECTOR_PAD) & (ang < hi - SECTOR_PAD))
                                else [])
    return RegionMap((0.0, half_width, 0.0, half_width), resolution, labels, comps, xs, ys, index)


def _cut_samples(cut: np.ndarray, spacing: float) -> np.ndarray:
    """Points along one cut, folded into the first quadrant by ``k -> -k``."""
    pts = []
    for a, b in zip(cut[:-1], cut[1:]):
        n = max(1, int(math.ceil(abs(b - a) / spacing)))
        pts.append(a + (b - a) * np.arange(n) / n)
    pts.append(np.array([cut[-1]]))
    p = np.concatenate(pts)
    # D1 lives in the first and third quadrants only
    p = np.where(p.real < 0, -p, p)
    return p[(p.real > 0) & (p.imag > 0)]


def _min_root_gap(cuts: BranchCutSet) -> float:
    pts = _all_roots(cuts)
    gaps = [abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:] if abs(a - b) > 0]
    return min(gaps) if gaps else math.inf


_WINDOW_CELLS = 400
_LOCAL_DIVS = 32


def _global_component(rm: RegionMap, k: np.ndarray) -> np.ndarray:
    """Global component index at points ``k`` (``-1`` off the grid or off D1)."""
    h = rm.cell_size
    j = np.floor((k.real - rm.bounds[0]) / h).astype(int)
    i = np.floor((k.imag - rm.bounds[2]) / h).astype(int)
    n = len(rm.xs)
    ok = (i >= 0) & (i < n) & (j >= 0) & (j < n)
    out = np.full(k.shape, -1, dtype=np.int64)
    out[ok] = rm.component_index[i[ok], j[ok]]
    return out


def _obstruction_at(ev: OmegaEvaluator, rm: RegionMap, cuts: BranchCutSet):
    """Disk test on a refined window around each cut.

    Component identity and unboundedness come from the global map ``rm``;
    each local D1 component is linked to the global components it meets on
    the window border, which is kept at least three global cells from the cut.
    """
    h = rm.cell_size
    unbounded = {i for i, c in enumerate(rm.components) if c.unbounded}
    gap = _min_root_gap(cuts)
    for cut in cuts.cuts:
        raw = _cut_samples(cut, 0.25 * h)
        if raw.size < 2:
            continue
        length = float(np.sum(np.abs(np.diff(raw))))
        h_loc = min(h, length / _LOCAL_DIVS, gap / _LOCAL_DIVS)
        pad = max(4 * h_loc, 3 * h)
        x0, x1 = max(raw.real.min() - pad, 0.0), raw.real.max() + pad
        y0, y1 = max(raw.imag.min() - pad, 0.0), raw.imag.max() + pad
        h_loc = max(h_loc, (x1 - x0) / _WINDOW_CELLS, (y1 - y0) / _WINDOW_CELLS)
        xs = x0 + (np.arange(int(math.ceil((x1 - x0) / h_loc))) + 0.5) * h_loc
        ys = y0 + (np.arange(int(math.ceil((y1 - y0) / h_loc))) + 0.5) * h_loc
        grid = xs[None, :] + 1j * ys[:, None]
        labels = _label_cells(ev, xs, ys, h_loc)
        local, n_local = ndimage.label(labels == D1)
        if n_local == 0:
            continue
        border = np.zeros(labels.shape, dtype=bool)
        border[0, :] = border[-1, :] = border[:, 0] = border[:, -1] = True
        gidx = _global_component(rm, grid[border])
        lidx = local[border]
        linked = {}
        for li, gi in zip(lidx.tolist(), gidx.tolist()):
            if li > 0 and gi >= 0:
                linked.setdefault(li, set()).add(gi)
        radius = 2 * h_loc
        pts = _cut_samples(cut, 0.5 * h_loc)
        for z in _all_roots(cuts):
            pts = pts[np.abs(pts - z) > 3 * h_loc]
        for p in pts:
            if p.real <= radius or p.imag <= radius:
                continue
            jc = int((p.real - x0) / h_loc)
            ic = int((p.imag - y0) / h_loc)
            i0, i1 = ic - 3, ic + 4
            j0, j1 = jc - 3, jc + 4
            if i0 < 0 or j0 < 0 or i1 > len(ys) or j1 > len(xs):
                continue
            disk = np.abs(grid[i0:i1, j0:j1] - p) <= radius
            lab = labels[i0:i1, j0:j1][disk]
            free = lab != CUT
            if not free.any() or not np.all((lab[free] == D1) | (lab[free] == UNDEFINED)):
                continue
            ids = set(local[i0:i1, j0:j1][disk & (labels[i0:i1, j0:j1] == D1)].tolist())
            if len(ids) != 1:
                continue
            glob = linked.get(ids.pop(), set())
            if len(glob) == 1 and glob <= unbounded:
                return True, complex(p)
    return False, None


def lemma_obstruction_test(triple, ev: OmegaEvaluator, cuts: BranchCutSet | None = None,
                           bounds=None, resolution: int = 512, confirm: bool = True):
    """``(obstructed, witness)`` for the cut-contact obstruction.

    The test runs at ``resolution`` and, when ``confirm`` is set, again at
    twice that; disagreement raises :class:`InconclusiveError`.
    """
    if cuts is not None and cuts is not ev.cuts:
        ev = OmegaEvaluator(ev.triple, ev.invariants, cuts, ev.anchor_radius)
    cuts = ev.cuts
    if not cuts.cuts:
        return False, None
    w = _normalize_bounds(bounds, ev)
    results = []
    for res in ((resolution, 2 * resolution) if confirm else (resolution,)):
        rm = build_quadrant_map(ev, w, res)
        results.append(_obstruction_at(ev, rm, cuts))
    verdicts = {r[0] for r in results}
    if len(verdicts) > 1:
        raise InconclusiveError(
            f"obstruction verdict differs between resolutions {resolution} and {2 * resolution}")
    return results[-1]
