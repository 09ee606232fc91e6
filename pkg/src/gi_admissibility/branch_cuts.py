"""Per-case branch-cut layouts for Omega.

Each layout builds one generator polyline in (or next to) the first quadrant
and produces the rest by the symmetries ``k -> -k`` and ``k -> conj(k)`` (and,
where the case has it, ``k -> i k``).  Curved pieces follow the level set
``Im Omega^2 = 0, Re Omega^2 > 0``, on which ``Omega`` is real; they are traced
by steepest ascent of ``Omega^2`` with a Newton corrector back onto the level
set.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import ConvergenceError, UnsupportedCase
from .geometry import arc, line, simplify_polyline
from .omega_surface import BranchCutSet, OmegaEvaluator, omega_squared, omega_squared_roots
from .params import CaseLabel, ParameterTriple, SpectralInvariants, classify, derive_invariants

LAYOUTS = ("traced", "straight")
_DIAG = cmath.exp(0.25j * math.pi)


def _dp(inv: SpectralInvariants, k: complex) -> complex:
    return 32 * k**7 + 4 * inv.x1 * k**3 + 2 * inv.x2 * k


def _p(inv, k) -> complex:
    return complex(omega_squared(inv, k))


def trace_level_curve(inv: SpectralInvariants, start: complex, step: float, signed, stop,
                      max_steps: int = 200000) -> np.ndarray:
    """Follow ``Im Omega^2 = 0`` uphill in ``Omega^2`` from the zero ``start``.

    ``signed(k)`` is a scalar that decreases to 0 at the target; tracing stops
    once ``signed(k) <= step/2`` and the final vertex is ``stop(k)`` (usually a
    projection onto a symmetry line).
    """
    k = complex(start)
    g = _dp(inv, k)
    if g == 0:
        raise ConvergenceError(f"tracing starts at a critical point {k}")
    d = g.conjugate() / abs(g)
    pts = [k]
    for _ in range(max_steps):
        kn = k + step * d
        for _ in range(4):
            g = _dp(inv, kn)
            if g == 0:
                break
            # Newton step on Im P orthogonal to the level set
            kn -= 1j * _p(inv, kn).imag / g
        g = _dp(inv, kn)
        dn = g.conjugate() / abs(g) if g != 0 else d
        if (dn * d.conjugate()).real < 0:
            dn = -dn
        k, d = kn, dn
        pts.append(k)
        if signed(k) <= 0.5 * step:
            pts[-1] = stop(k)
            return np.array(pts)
    raise ConvergenceError("level-curve tracing did not reach its target")


def _reflect_join(half: np.ndarray, mirror) -> np.ndarray:
    return np.concatenate([half, mirror(half[::-1])[1:]])


def _images(gen: np.ndarray, ops) -> list[np.ndarray]:
    return [np.asarray(op(gen), dtype=complex) for op in ops]


_NEG = lambda z: -z  # noqa: E731
_CONJ = np.conj
_NEGCONJ = lambda z: -np.conj(z)  # noqa: E731
_ID = lambda z: z  # noqa: E731


def _split_roots(roots):
    odd = [(z, m) for z, m in roots if m % 2 == 1]
    even = [(z, m) for z, m in roots if m % 2 == 0]
    return odd, even


def _q1(points, lo=0.0, hi=0.5 * math.pi):
    """Points with argument in ``(lo, hi)`` strictly inside the first quadrant."""
    out = []
    for z in points:
        a = cmath.phase(z)
        if z.real > 0 and z.imag > 0 and lo < a < hi:
            out.append(z)
    return out


def _layout_neg_x1_pos(inv, odd, straight):
    z = min(_q1([p for p, _ in odd], 0, math.pi / 4), key=lambda v: cmath.phase(v))
    if straight:
        gen = line(z, 1j * z.conjugate(), 41)
    else:
        step = 2e-3 * abs(z)
        half = trace_level_curve(
            inv, z, step,
            signed=lambda k: -(k * _DIAG.conjugate()).imag,
            stop=lambda k: (k * _DIAG.conjugate()).real * _DIAG)
        gen = _reflect_join(half, lambda h: 1j * np.conj(h))
    return _images(gen, [_ID, _NEG, _CONJ, _NEGCONJ])


def _layout_pos_x1_pos(inv, odd, straight):
    diag = sorted(_q1([p for p, _ in odd]), key=abs)
    if len(diag) == 1:
        # X3 = 0: one odd zero per diagonal ray, join neighbours by an arc
        z = diag[0]
        gen = arc(abs(z), abs(z), cmath.phase(z), cmath.phase(z) + 0.5 * math.pi, 41)
        return _images(gen, [_ID, _NEG])
    z_in, z_out = diag[0], diag[-1]
    if straight:
        gen = line(z_in, z_out, 41)
    else:
        r_in, r_out = abs(z_in), abs(z_out)
        r1, r2 = 0.5 * r_in, r_out + 0.35 * r_out
        th, dth = math.pi / 4, math.pi / 8
        gen = np.concatenate([
            line(z_in, r1 * _DIAG, 20),
            arc(r1, r1, th, th + dth, 20)[1:],
            arc(r1, r2, th + dth, th + dth, 40)[1:],
            arc(r2, r2, th + dth, th, 20)[1:],
            line(r2 * _DIAG, z_out, 20)[1:],
        ])
    return _images(gen, [_ID, _NEG, _CONJ, _NEGCONJ])


def _layout_axes(inv, odd, straight):
    """Zeros on the coordinate axes: join the inner and outer zero on each half-axis."""
    radii = sorted({round(abs(z), 12) for z, _ in odd})
    if len(radii) != 2:
        raise UnsupportedCase("expected two zero radii on the axes")
    gen = line(complex(radii[0]), complex(radii[1]), 41)
    return _images(gen, [_ID, _NEG, lambda g: 1j * g, lambda g: -1j * g])


def _layout_neg_x1_neg(inv, odd, straight):
    z = min(_q1([p for p, _ in odd]), key=lambda v: cmath.phase(v))
    if straight:
        gen = line(z, z.conjugate(), 41)
    else:
        step = 2e-3 * abs(z)
        half = trace_level_curve(inv, z, step, signed=lambda k: k.imag,
                                 stop=lambda k: complex(k.real, 0.0))
        gen = _reflect_join(half, np.conj)
    return _images(gen, [_ID, _NEG, lambda g: 1j * g, lambda g: -1j * g])


def _layout_neg_x1_zero(inv, odd, straight):
    z = min(_q1([p for p, _ in odd]), key=lambda v: cmath.phase(v))
    if straight:
        gen = line(z, z.conjugate(), 41)
    else:
        rho, th = abs(z), cmath.phase(z)
        half = np.concatenate([line(z, 0.55 * z, 20),
                               arc(0.55 * rho, 0.36 * rho, th, 0.0, 30)[1:]])
        gen = _reflect_join(half, np.conj)
    return _images(gen, [_ID, _NEG, lambda g: 1j * g, lambda g: -1j * g])


def _layout_pw_low(inv, odd, straight):
    reals = sorted(p.real for p, _ in odd)
    if any(abs(p.imag) > 1e-9 * (1 + abs(p)) for p, _ in odd) or len(reals) % 2:
        raise UnsupportedCase("expected an even number of real branch points")
    return [line(complex(a), complex(b), 41) for a, b in zip(reals[0::2], reals[1::2])]


def _layout_pw_mid(inv, odd, even, straight):
    p = _q1([z for z, _ in odd])[0]
    if straight:
        return [line(p, p.conjugate(), 41), line(-p, -p.conjugate(), 41)]
    r_out = 1.6 * abs(p)
    step = 2e-3 * abs(p)
    half = trace_level_curve(inv, p, step, signed=lambda k: r_out - abs(k), stop=lambda k: k)
    end = half[-1]
    th_end = cmath.phase(end)
    th_max = max(float(np.max(np.angle(half))), cmath.phase(p))
    th_m = 0.5 * (th_max + 0.5 * math.pi)
    r_min = float(np.min(np.abs(half)))
    rho_m = 0.5 * r_min
    for z, _ in even:
        if abs(z.imag) < 1e-12 and abs(abs(z) - rho_m) < 0.15 * rho_m:
            rho_m = 0.5 * min(r_min, abs(z))
    r_big = 1.15 * abs(end)
    loop = np.concatenate([
        arc(abs(end), r_big, th_end, th_end, 10)[1:],
        arc(r_big, r_big, th_end, th_m, 40)[1:],
        arc(r_big, rho_m, th_m, th_m, 40)[1:],
        arc(rho_m, rho_m, th_m, 0.0, 40)[1:],
    ])
    half = np.concatenate([half, loop])
    half[-1] = complex(half[-1].real, 0.0)
    gen = _reflect_join(half, np.conj)
    return _images(gen, [_ID, _NEG])


def _layout_pw_high(inv, odd, straight):
    p = _q1([z for z, _ in odd])[0]
    if straight:
        gen = line(p, -p.conjugate(), 41)
    else:
        step = 2e-3 * abs(p)
        half = trace_level_curve(inv, p, step, signed=lambda k: k.real,
                                 stop=lambda k: complex(0.0, k.imag))
        gen = _reflect_join(half, _NEGCONJ)
    return _images(gen, [_ID, _CONJ])


def build_branch_cuts(inv: SpectralInvariants, case_label, layout: str = "traced",
                      tol: float = 1e-9) -> BranchCutSet:
    """Cut set for ``case_label`` with the qualitative layout expected for that case.

    The default ``"traced"`` cuts follow ``Im Omega = 0``. ``layout="straight"``
    joins the same pairs by straight segments; the obstruction verdict does
    change under that swap, which is why both are available.
    """
    case_label = CaseLabel(case_label)
    if layout not in LAYOUTS:
        raise ValueError(f"layout must be one of {LAYOUTS}")
    if case_label is CaseLabel.OUTSIDE_SCOPE:
        raise UnsupportedCase("no cut layout outside the soliton and plane-wave families")
    roots = omega_squared_roots(inv, tol)
    odd, even = _split_roots(roots)
    straight = layout == "straight"
    C = CaseLabel
    if not odd:
        cuts = []
    elif case_label is C.SOLITON_DISC_NEG_X1_POS:
        cuts = _layout_neg_x1_pos(inv, odd, straight)
    elif case_label is C.SOLITON_DISC_POS_X1_POS:
        cuts = _layout_pos_x1_pos(inv, odd, straight)
    elif case_label is C.SOLITON_DISC_POS_X1_NONPOS:
        cuts = _layout_axes(inv, odd, straight)
    elif case_label is C.SOLITON_DISC_NEG_X1_NEG:
        cuts = _layout_neg_x1_neg(inv, odd, straight)
    elif case_label is C.SOLITON_DISC_NEG_X1_ZERO:
        cuts = _layout_neg_x1_zero(inv, odd, straight)
    elif case_label is C.PW_B_LOW:
        cuts = _layout_pw_low(inv, odd, straight)
    elif case_label is C.PW_B_MID:
        cuts = _layout_pw_mid(inv, odd, even, straight)
    elif case_label is C.PW_B_HIGH:
        cuts = _layout_pw_high(inv, odd, straight)
    else:
        raise UnsupportedCase(f"no cut layout for {case_label.value} with odd zeros")
    scale = 1.0 + max(abs(z) for z, _ in roots)
    cuts = [simplify_polyline(c, 1e-5 * scale) for c in cuts]
    return BranchCutSet(
        branch_points=[z for z, _ in odd],
        cuts=cuts,
        even_roots=even,
        branch_multiplicities=[m for _, m in odd],
        case_label=case_label,
        layout=layout,
    )


def make_evaluator(triple: ParameterTriple, layout: str = "traced", tol: float = 1e-9,
                   case_label=None, anchor_radius: float | None = None) -> OmegaEvaluator:
    """Classify, build cuts and return a ready evaluator (with secondary points filled in)."""
    inv = derive_invariants(triple, tol)
    if case_label is None:
        case_label = classify(triple, tol).case_label
    cuts = build_branch_cuts(inv, case_label, layout, tol)
    ev = OmegaEvaluator(triple, inv, cuts, anchor_radius)
    full = BranchCutSet(cuts.branch_points, cuts.cuts, ev.secondary_points(),
                        cuts.even_roots, cuts.branch_multiplicities,
                        cuts.case_label, cuts.layout)
    return OmegaEvaluator(triple, inv, full, ev.anchor_radius)
