"""Algebraic identities of Omega, H and E, checked pointwise at random off-cut points."""
from __future__ import annotations

import numpy as np

from .omega_surface import SIGMA1, OmegaEvaluator

IDENTITY_NAMES = ("det_E", "sigma1_symmetry", "omega_even", "omega_schwarz", "h_product")


def random_off_cut_points(ev: OmegaEvaluator, rng: np.random.Generator, n: int,
                          radius: float | None = None, clearance: float = 1e-3) -> np.ndarray:
    """``n`` points of the disc ``|k| <= radius`` kept ``clearance`` (relative) away from cuts and poles."""
    radius = 2.0 * (1.0 + ev.max_root_modulus) if radius is None else radius
    out = np.empty(0, dtype=complex)
    while out.size < n:
        m = 2 * n
        k = radius * np.sqrt(rng.uniform(size=m)) * np.exp(2j * np.pi * rng.uniform(size=m))
        k = k[np.abs(k) > clearance * radius]
        if ev.cuts.cuts:
            k = k[ev.cuts.distance(k) > clearance * radius]
        e = ev.E_array(k, check=False)
        g = ev.g_array(k, check=False)
        # stay off the cut of the square root in E and away from its poles
        ok = (np.max(np.abs(e), axis=(-2, -1)) < 1e4) & ~(
            (g.real < 0) & (np.abs(g.imag) < clearance * np.abs(g)))
        out = np.concatenate([out, k[ok]])
    return out[:n]


def identity_errors(ev: OmegaEvaluator, ks) -> dict[str, float]:
    """Largest relative violation of each identity over the points ``ks``."""
    tr = ev.triple
    a, c = tr.alpha, tr.c
    k = np.asarray(ks, dtype=complex)
    om = ev.omega_array(k)
    h = ev.h_array(k)
    e = ev.E_array(k)
    e_bar = ev.E_array(np.conj(k))
    rhs = -k * k * (2 * a * k * k - 1j * np.conj(c)) * (2 * a * k * k + 1j * c)
    lhs = (2 * om - h) * h
    one = np.ones(k.shape)
    e_scale = np.maximum(1.0, np.max(np.abs(e), axis=(-2, -1)))
    om_scale = np.maximum(one, np.abs(om))
    errs = {
        "det_E": np.abs(np.linalg.det(e) - 1.0),
        "sigma1_symmetry": np.max(np.abs(SIGMA1 @ np.conj(e_bar) @ SIGMA1 - e), axis=(-2, -1)) / e_scale,
        "omega_even": np.abs(ev.omega_array(-k) - om) / om_scale,
        "omega_schwarz": np.abs(ev.omega_array(np.conj(k)) - np.conj(om)) / om_scale,
        "h_product": np.abs(lhs - rhs) / np.maximum.reduce([one, np.abs(rhs),
                                                            np.abs(2 * om - h) * np.abs(h)]),
    }
    return {name: float(np.max(v)) if v.size else 0.0 for name, v in errs.items()}
