"""Automated sector counting for the qualitative contour pictures of each case.

Each check compares a countable feature of the extracted contour (how many
times it crosses a circle or a vertical line, and where) or of the branch-point
set against the value predicted by the case analysis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contour import ContourSet
from .omega_surface import OmegaEvaluator
from .params import CaseLabel, ParameterTriple, plane_wave_triple, soliton_constraint_triple

_Q = math.pi / 4

# Representative triples for the cases that come with a picture.
REPRESENTATIVES = {
    CaseLabel.SOLITON_DISC_NEG_X1_POS: ParameterTriple(1.0, 3.99, 2 - 0.3j),
    CaseLabel.SOLITON_DISC_POS_X1_POS: soliton_constraint_triple(1.0, 1.5 + 0.6j),
    CaseLabel.SOLITON_DISC_NEG_X1_NEG: soliton_constraint_triple(1.0, -0.33 - 0.96j),
    CaseLabel.SOLITON_DISC_NEG_X1_ZERO: soliton_constraint_triple(1.0, (-1 + 2**-0.5) * 1j),
    CaseLabel.PW_B_MID: plane_wave_triple(1.0, 1.0),
    CaseLabel.PW_B_HIGH: plane_wave_triple(1.0, 6.0),
}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _angle_gap(a: np.ndarray, targets: np.ndarray) -> float:
    if a.size == 0:
        return math.inf
    d = np.abs((a[:, None] - targets[None, :] + math.pi) % (2 * math.pi) - math.pi)
    return float(np.max(np.min(d, axis=1)))


def _count(name, observed, expected) -> Check:
    return Check(name, observed == expected, f"observed {observed}, expected {expected}")


def _per_sector(points, n_sectors: int, offset: float = 0.0) -> list[int]:
    counts = [0] * n_sectors
    width = 2 * math.pi / n_sectors
    for z in points:
        a = (math.atan2(z.imag, z.real) - offset) % (2 * math.pi)
        counts[int(a // width) % n_sectors] += 1
    return counts


def figure_checks(ev: OmegaEvaluator, contour: ContourSet, case_label) -> list[Check]:
    """Feature checks for ``case_label``; an empty list means the case has no picture."""
    case = CaseLabel(case_label)
    inv = ev.invariants
    bps = list(ev.cuts.branch_points)
    w = contour.bounds[1]
    h = 2 * w / contour.resolution
    checks: list[Check] = []
    rays = np.arange(8) * _Q
    outer = contour.crossings_circle(0.95 * w)
    checks.append(_count("outer circle crossings", len(outer), 8))
    gap = _angle_gap(outer, rays)
    checks.append(Check("outer crossings along the rays arg = n*pi/4", gap < 0.05,
                        f"max angular offset {gap:.3g}"))
    radii = sorted(abs(z) for z in bps)

    if case is CaseLabel.SOLITON_DISC_NEG_X1_POS:
        checks.append(_count("one zero per octant", _per_sector(bps, 8), [1] * 8))
        r_c = (inv.x1 / 8) ** 0.25
        r_mid = 0.5 * (r_c + radii[0])
        checks.append(_count("crossings between saddle and zero radius",
                             len(contour.crossings_circle(r_mid)), 16))
    elif case is CaseLabel.SOLITON_DISC_POS_X1_POS:
        diag = _angle_gap(np.array([math.atan2(z.imag, z.real) for z in bps]),
                          np.arange(4) * 2 * _Q + _Q)
        checks.append(Check("zeros on the diagonals", diag < 1e-8, f"max offset {diag:.2g}"))
        r_in, r_out = radii[0], radii[-1]
        checks.append(_count("crossings inside the diagonal gap",
                             len(contour.crossings_circle(0.5 * (r_in + r_out))), 4))
        checks.append(_count("crossings inside the inner zero radius",
                             len(contour.crossings_circle(0.5 * r_in)), 8))
    elif case is CaseLabel.SOLITON_DISC_NEG_X1_NEG:
        checks.append(_count("one zero per octant", _per_sector(bps, 8), [1] * 8))
        near_axis = all(min(a % (2 * _Q), 2 * _Q - a % (2 * _Q)) < _Q / 2
                        for a in (math.atan2(z.imag, z.real) for z in bps))
        checks.append(Check("zeros closer to the axes than to the diagonals", near_axis, ""))
        r_c = (-inv.x1 / 8) ** 0.25
        checks.append(_count("crossings between saddle and zero radius",
                             len(contour.crossings_circle(0.5 * (r_c + radii[0]))), 16))
    elif case is CaseLabel.SOLITON_DISC_NEG_X1_ZERO:
        rho = (inv.x3 / 4) ** 0.125
        targets = np.arange(8) * 2 * _Q / 2 + _Q / 2
        args = np.array([math.atan2(z.imag, z.real) for z in bps])
        off = _angle_gap(args, targets)
        rad = max(abs(abs(z) - rho) for z in bps)
        checks.append(Check("zeros at rho e^{i(2n+1)pi/8}", off < 1e-8 and rad < 1e-8 * (1 + rho),
                            f"angle offset {off:.2g}, radius offset {rad:.2g}"))
        inner = contour.crossings_circle(0.5 * rho)
        checks.append(_count("crossings inside the zero radius", len(inner), 16))
        g = _angle_gap(inner, np.arange(16) * _Q / 2)
        checks.append(Check("inner crossings at arg = n*pi/8", g < 0.02, f"max offset {g:.3g}"))
    elif case is CaseLabel.PW_B_MID:
        checks.append(_count("one zero per quadrant", _per_sector(bps, 4), [1] * 4))
        checks.append(_count("crossings inside the zero radius",
                             len(contour.crossings_circle(0.5 * radii[0])), 4))
        ys = contour.crossings_vertical(2 * h, h, w)
        checks.append(_count("crossings of Re k = eps in the upper half plane", len(ys), 0))
    elif case is CaseLabel.PW_B_HIGH:
        checks.append(_count("one zero per quadrant", _per_sector(bps, 4), [1] * 4))
        a, b = ev.triple.alpha, inv.b
        root = math.sqrt(b * b - 4 * a * a * b - 2 * a**4)
        expect = sorted(0.5 * math.sqrt(b + s * root) for s in (-1, 1))
        ys = contour.crossings_vertical(2 * h, h, w)
        ok = len(ys) == 2 and all(abs(y - e) < 3 * h for y, e in zip(ys, expect))
        checks.append(Check("crossings of Re k = eps at y-, y+", ok,
                            f"observed {np.round(ys, 4).tolist()}, expected {np.round(expect, 4).tolist()}"))
    else:
        return []
    return checks
