"""The two-sheeted function Omega(k) = sqrt(4k^8 + X1 k^4 + X2 k^2 + X3) and its companions.

The branch is fixed by ``Omega ~ 2k^4 + omega/2`` at infinity.  Evaluation is
closed form rather than path-marching: every branch cut is a bounded polyline
joining two odd-order zeros ``p, q``, and the factor ``sqrt((k-p)(k-q))`` with
exactly that cut is built from a reference square root (whose cuts are two
parallel rays) times a parity sign.  The sign flips inside the polygon formed
by the cut, the two reference rays and a far closing segment, which cancels
the ray jumps and moves them onto the polyline.  A single Newton step against
``Omega^2`` then restores full precision.

Matrices are plain ``numpy`` arrays of shape ``(..., 2, 2)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OnCutError, PathError, PoleError, UnsupportedCase
from .geometry import inside_even_odd, path_crosses_polyline, polyline_distance
from .params import ParameterTriple, SpectralInvariants
from .polyroots import roots_with_multiplicity

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

# Direction parameter of the reference rays; any generic angle works.
_REF_PHASE = 0.7317
_REF_DIR = -cmath.exp(-1j * _REF_PHASE)


def omega_squared_roots(inv: SpectralInvariants, tol: float = 1e-9) -> list[tuple[complex, int]]:
    """Zeros of ``Omega^2`` in ``k`` with multiplicities, exactly symmetric.

    The quartic in ``m = k^2`` is solved first; each ``m``-root gives the pair
    ``+-sqrt(m)``.  Roots are snapped so the set is closed under ``k -> -k``
    and ``k -> conj(k)``.
    """
    m_roots = roots_with_multiplicity(inv.poly_m(), merge_tol=max(tol, 1e-7))
    big = max(1.0, max(abs(m) for m, _ in m_roots))
    snapped: list[tuple[complex, int]] = []
    seen_conj: list[complex] = []
    for m, mult in m_roots:
        if abs(m) <= 1e-12 * big:
            snapped.append((0j, mult))
            continue
        if abs(m.imag) <= 1e-10 * abs(m):
            snapped.append((complex(m.real, 0.0), mult))
            continue
        # keep the upper member of each conjugate pair and mirror it
        if m.imag < 0:
            continue
        snapped.append((m, mult))
        snapped.append((m.conjugate(), mult))
        seen_conj.append(m)
    # a lower-half root without an upper partner (should not happen) is kept as is
    for m, mult in m_roots:
        if m.imag < 0 and abs(m.imag) > 1e-10 * abs(m) and abs(m) > 1e-12 * big:
            if not any(abs(m.conjugate() - u) <= 1e-6 * (1 + abs(u)) for u in seen_conj):
                snapped.append((m, mult))
    out: list[tuple[complex, int]] = []
    for m, mult in snapped:
        if m == 0:
            out.append((0j, 2 * mult))
        elif m.imag == 0 and m.real > 0:
            s = math.sqrt(m.real)
            out += [(complex(s, 0), mult), (complex(-s, 0), mult)]
        elif m.imag == 0:
            s = math.sqrt(-m.real)
            out += [(complex(0, s), mult), (complex(0, -s), mult)]
        else:
            s = cmath.sqrt(m)
            out += [(s, mult), (-s, mult)]
    return out


def omega_squared(inv: SpectralInvariants, k):
    m = np.asarray(k, dtype=complex) ** 2
    return m * (m * (4.0 * m * m + inv.x1) + inv.x2) + inv.x3


@dataclass(frozen=True)
class BranchCutSet:
    """Odd-order zeros of ``Omega^2`` and the polylines joining them in pairs.

    ``pairs[j]`` gives the endpoints of ``cuts[j]`` (first and last vertex).
    ``even_roots`` carries the zeros that are not branch points, with their
    multiplicity; they enter ``Omega`` as polynomial factors.
    """

    branch_points: list
    cuts: list
    secondary_points: list = field(default_factory=list)
    even_roots: list = field(default_factory=list)
    branch_multiplicities: list = field(default_factory=list)
    case_label: object = None
    layout: str = "traced"

    @property
    def pairs(self) -> list[tuple[complex, complex]]:
        return [(complex(c[0]), complex(c[-1])) for c in self.cuts]

    def distance(self, k) -> np.ndarray:
        pts = np.asarray(k, dtype=complex)
        out = np.full(pts.shape, np.inf)
        for c in self.cuts:
            np.minimum(out, polyline_distance(pts, c), out=out)
        return out

    def as_dict(self) -> dict:
        def cx(z):
            return [float(np.real(z)), float(np.imag(z))]
        return {
            "branch_points": [cx(z) for z in self.branch_points],
            "cuts": [[cx(z) for z in c] for c in self.cuts],
            "secondary_points": [cx(z) for z in self.secondary_points],
            "case_label": getattr(self.case_label, "value", self.case_label),
            "layout": self.layout,
        }


def _pair_factor(k: np.ndarray, cut: np.ndarray, far: float) -> np.ndarray:
    """``sqrt((k-p)(k-q))`` with its only cut on the polyline ``cut`` (p first, q last)."""
    p, q = complex(cut[0]), complex(cut[-1])
    rot = cmath.exp(1j * _REF_PHASE)
    ref = np.conj(rot) * np.sqrt(rot * (k - p)) * np.sqrt(rot * (k - q))
    polygon = np.concatenate([np.asarray(cut, dtype=complex),
                              [q + far * _REF_DIR, p + far * _REF_DIR]])
    flip = inside_even_odd(k, polygon)
    return np.where(flip, -ref, ref)


class OmegaEvaluator:
    """Evaluates Omega, H, E and the background eigenfunction off the cuts.

    Immutable after construction and safe to share between threads (there is
    no memoisation cache).
    """

    def __init__(self, triple: ParameterTriple, invariants: SpectralInvariants,
                 cuts: BranchCutSet, anchor_radius: float | None = None,
                 eps_cut: float | None = None):
        self.triple = triple
        self.invariants = invariants
        self.cuts = cuts
        rmax = max([abs(z) for z in cuts.branch_points]
                   + [abs(z) for z, _ in cuts.even_roots] + [0.0])
        self.max_root_modulus = rmax
        self.anchor_radius = anchor_radius if anchor_radius else 4.0 * (1.0 + rmax)
        self.eps_cut = eps_cut if eps_cut is not None else 1e-8 * self.anchor_radius
        self._far = 1e6 * (1.0 + rmax)
        # odd-order zeros not matched by any cut would leave Omega two-valued
        ends = [z for c in cuts.cuts for z in (c[0], c[-1])]
        for z in cuts.branch_points:
            if not any(abs(z - e) <= 1e-9 * (1 + abs(z)) for e in ends):
                raise UnsupportedCase(f"branch point {z} has no cut")

    # ------------------------------------------------------------------ Omega
    def omega_array(self, k, check: bool = True) -> np.ndarray:
        """Vectorised Omega.

        With ``check`` set, points within ``eps_cut`` of a cut raise
        :class:`OnCutError`; without it no distance test is made and points on
        a cut get one of the two boundary values.
        """
        k = np.asarray(k, dtype=complex)
        on_cut = np.zeros(k.shape, dtype=bool)
        if check and self.cuts.cuts:
            on_cut = self.cuts.distance(k) <= self.eps_cut
            if on_cut.any():
                raise OnCutError(
                    f"{np.count_nonzero(on_cut)} point(s) within {self.eps_cut:g} of a cut")
        val = np.full(k.shape, 2.0 + 0j)
        for z, mult in self.cuts.even_roots:
            val = val * (k - z) ** (mult // 2)
        # odd multiplicities above one contribute a polynomial part
        for z, mult in zip(self.cuts.branch_points, self.cuts.branch_multiplicities):
            if mult > 1:
                val = val * (k - z) ** ((mult - 1) // 2)
        for c in self.cuts.cuts:
            val = val * _pair_factor(k, c, self._far)
        p = omega_squared(self.invariants, k)
        good = np.abs(val) > 1e-300
        val = np.where(good, 0.5 * (val + p / np.where(good, val, 1.0)), val)
        return val

    def omega(self, k: complex) -> complex:
        return complex(self.omega_array(np.array([k]))[0])

    # -------------------------------------------------------------- H and E
    def _t_part(self, k):
        a, c, w = self.triple.alpha, self.triple.c, self.triple.omega
        return 2 * k**4 - a * c.imag + a * a * k * k - a**4 / 4 + w / 2

    def h_array(self, k, check: bool = True):
        k = np.asarray(k, dtype=complex)
        return self.omega_array(k, check) - self._t_part(k)

    def H(self, k: complex) -> complex:
        return complex(self.h_array(np.array([k]))[0])

    def g_array(self, k, check: bool = True):
        """``(2 Omega - H) / (2 Omega)``; its principal root enters E."""
        k = np.asarray(k, dtype=complex)
        om = self.omega_array(k, check)
        return (om + self._t_part(k)) / (2 * om)

    def _e_offdiag(self, k, h):
        a, c = self.triple.alpha, self.triple.c
        d1 = k * (np.conj(c) + 2j * a * k * k)
        d2 = k * (c - 2j * a * k * k)
        return -h / d1, -h / d2

    def E_array(self, k, check: bool = True) -> np.ndarray:
        k = np.asarray(k, dtype=complex)
        om = self.omega_array(k, check)
        t = self._t_part(k)
        h = om - t
        g = (om + t) / (2 * om)
        on_x2 = (g.real < 0) & (np.abs(g.imag) <= 1e-12 * np.abs(g))
        if check and on_x2.any():
            raise OnCutError("point on a cut of sqrt((2 Omega - H)/(2 Omega))")
        sg = np.sqrt(g)
        e12, e21 = self._e_offdiag(k, h)
        out = np.empty(k.shape + (2, 2), dtype=complex)
        out[..., 0, 0] = sg
        out[..., 1, 1] = sg
        out[..., 0, 1] = sg * e12
        out[..., 1, 0] = sg * e21
        return out

    def E(self, k: complex) -> np.ndarray:
        a, c = self.triple.alpha, self.triple.c
        scale = max(abs(c), 2 * a * abs(k) ** 2, 1e-300)
        if abs(k) <= 1e-12 * (1 + self.max_root_modulus):
            # removable point: off-diagonal entries are odd in k and vanish
            d = 1e-6 * (1 + self.max_root_modulus)
            m = 0.5 * (self.E(d * cmath.exp(0.3j)) + self.E(-d * cmath.exp(0.3j)))
            m[0, 1] = m[1, 0] = 0.0
            return m
        if (abs(np.conj(c) + 2j * a * k * k) <= 1e-12 * scale
                or abs(c - 2j * a * k * k) <= 1e-12 * scale):
            raise PoleError(f"E has a pole at k={k}")
        om = self.omega(k)
        if abs(om) <= 1e-12 * (1 + abs(k) ** 4):
            raise PoleError(f"Omega vanishes at k={k}")
        return self.E_array(np.array([k]))[0]

    def background_phi(self, t: float, k: complex) -> np.ndarray:
        """``e^{i omega t sigma3/2} E(k) e^{-i Omega t sigma3}``."""
        w = self.triple.omega
        om = self.omega(k)
        left = np.diag([cmath.exp(0.5j * w * t), cmath.exp(-0.5j * w * t)])
        right = np.diag([cmath.exp(-1j * om * t), cmath.exp(1j * om * t)])
        return left @ self.E(k) @ right

    def secondary_points(self) -> list[complex]:
        """Zeros and poles of ``(2 Omega - H)/(2 Omega)``.

        Poles sit at the zeros of ``Omega``.  Zeros satisfy ``Omega = -T`` and
        so are among the zeros of ``Omega^2 - T^2``, which factors as
        ``-k^2 (2 a k^2 - i conj c)(2 a k^2 + i c)``; candidates are filtered
        by evaluating on the right sheet.
        """
        a, c = self.triple.alpha, self.triple.c
        pts = [z for z in self.cuts.branch_points] + [z for z, _ in self.cuts.even_roots]
        cands = [0j]
        for r in (cmath.sqrt(1j * np.conj(c) / (2 * a)), cmath.sqrt(-1j * c / (2 * a))):
            cands += [r, -r]
        for z in cands:
            try:
                om = self.omega(z)
            except OnCutError:
                pts.append(z)
                continue
            t = self._t_part(z)
            if abs(om + t) <= 1e-8 * (1 + abs(om) + abs(t)):
                pts.append(z)
        uniq: list[complex] = []
        for z in pts:
            if not any(abs(z - u) <= 1e-9 * (1 + abs(u)) for u in uniq):
                uniq.append(complex(z))
        return uniq

    # ----------------------------------------------------- anchor diagnostics
    def anchor_constant(self, n: int = 64) -> float:
        """Fitted ``C`` with ``|Omega - 2k^4 - omega/2| <= C/|k|^2`` on the anchor circle."""
        r = self.anchor_radius
        k = r * np.exp(1j * (np.arange(n) + 0.5) * 2 * np.pi / n)
        om = self.omega_array(k, check=False)
        return float(np.nanmax(np.abs(om - 2 * k**4 - self.triple.omega / 2)) * r * r)


def eval_omega(ev: OmegaEvaluator, k: complex) -> complex:
    return ev.omega(k)


def eval_H(ev: OmegaEvaluator, triple: ParameterTriple, k: complex) -> complex:
    return ev.H(k)


def eval_E(ev: OmegaEvaluator, triple: ParameterTriple, k: complex) -> np.ndarray:
    return ev.E(k)


def eval_background_phi(ev: OmegaEvaluator, triple: ParameterTriple, t: float,
                        k: complex) -> np.ndarray:
    return ev.background_phi(t, k)


# ------------------------------------------------------------------------
# Independent check: analytic continuation of sqrt(Omega^2) along a path.

def continuation_path(anchor_radius: float, theta0: float, k: complex,
                      radial_first: bool, n: int = 4000) -> np.ndarray:
    """Path from ``anchor_radius*e^{i theta0}`` to ``k`` made of an arc and a radial leg."""
    r_k, th_k = abs(k), cmath.phase(k)
    dth = (th_k - theta0 + math.pi) % (2 * math.pi) - math.pi
    s = np.linspace(0.0, 1.0, n)
    if radial_first:
        leg1 = (anchor_radius + (r_k - anchor_radius) * s) * np.exp(1j * theta0)
        leg2 = r_k * np.exp(1j * (theta0 + dth * s))
    else:
        leg1 = anchor_radius * np.exp(1j * (theta0 + dth * s))
        leg2 = (anchor_radius + (r_k - anchor_radius) * s) * np.exp(1j * th_k)
    return np.concatenate([leg1, leg2[1:]])


def continue_sqrt(inv: SpectralInvariants, path: np.ndarray, omega: float) -> complex:
    """Follow ``sqrt(Omega^2)`` along ``path`` by nearest-sheet selection."""
    k0 = path[0]
    val = np.sqrt(complex(omega_squared(inv, k0)))
    target = 2 * k0**4 + omega / 2
    if abs(val - target) > abs(-val - target):
        val = -val
    for k in path[1:]:
        s = np.sqrt(complex(omega_squared(inv, k)))
        val = s if abs(s - val) <= abs(-s - val) else -s
    return complex(val)


def find_cut_free_path(cuts: BranchCutSet, anchor_radius: float, k: complex,
                       thetas=None, avoid: float = 0.0) -> np.ndarray:
    """A continuation path from the anchor circle to ``k`` that crosses no cut."""
    if thetas is None:
        thetas = [math.pi / 16 + j * math.pi / 8 for j in range(16)]
    for radial_first in (False, True):
        for th in thetas:
            path = continuation_path(anchor_radius, th, k, radial_first)
            coarse = path[::20] if len(path) > 40 else path
            coarse = np.concatenate([coarse, [path[-1]]])
            if not any(path_crosses_polyline(coarse, c) for c in cuts.cuts):
                if avoid > 0 and cuts.cuts and np.min(cuts.distance(path)) < avoid:
                    continue
                return path
    raise PathError(f"no cut-avoiding path to k={k}")
