"""Simultaneous-iteration polynomial root finder (Aberth-Ehrlich) with Newton polishing.

Only tiny degrees occur here (the quartic in ``m = k^2``), so the solver favours
robustness over speed: a Cauchy-bound initial circle, plain Aberth sweeps and
a cluster-aware polish that refines repeated roots on the derivative.
"""
from __future__ import annotations

import numpy as np

from .errors import ConvergenceError


def _horner(coeffs: np.ndarray, z):
    p = np.zeros_like(z, dtype=complex) + coeffs[0]
    dp = np.zeros_like(z, dtype=complex)
    for a in coeffs[1:]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def aberth_roots(coeffs, tol: float = 1e-14, max_iter: int = 500) -> np.ndarray:
    """All roots of the polynomial with ``coeffs`` (highest degree first)."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), "f")
    n = len(coeffs) - 1
    if n < 1:
        return np.empty(0, dtype=complex)
    coeffs = coeffs / coeffs[0]
    # trailing zeros are exact roots at the origin
    nz = 0
    while n - nz > 0 and coeffs[n - nz] == 0:
        nz += 1
    work = coeffs[: n + 1 - nz]
    m = len(work) - 1
    roots = np.zeros(nz, dtype=complex)
    if m == 0:
        return roots
    radius = 1.0 + np.max(np.abs(work[1:]))
    radius = min(radius, 2.0 * np.max(np.abs(work[1:]) ** (1.0 / np.arange(1, m + 1))))
    angles = 2 * np.pi * np.arange(m) / m + 0.4
    z = radius * np.exp(1j * angles)
    for _ in range(max_iter):
        p, dp = _horner(work, z)
        ratio = np.where(dp != 0, p / np.where(dp == 0, 1, dp), 0)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        step = ratio / (1.0 - ratio * s)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
            break
    return np.concatenate([roots, z])


def _newton(coeffs: np.ndarray, z: complex, iters: int = 8) -> complex:
    for _ in range(iters):
        p, dp = _horner(coeffs, np.array([z]))
        if dp[0] == 0:
            break
        dz = p[0] / dp[0]
        z = z - dz
        if abs(dz) <= 1e-16 * max(1.0, abs(z)):
            break
    return complex(z)


def roots_with_multiplicity(coeffs, merge_tol: float = 1e-6,
                            residual_tol: float = 1e-9) -> list[tuple[complex, int]]:
    """Roots grouped into clusters, each refined and tagged with its multiplicity.

    Roots closer than ``merge_tol * (1 + |z|)`` are merged; a cluster of size
    ``r`` is refined as a simple root of the ``(r-1)``-th derivative, which is
    well conditioned for an exact repeated root.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "f")
    raw = aberth_roots(c)
    clusters: list[list[complex]] = []
    for z in sorted(raw, key=lambda v: (round(v.real, 6), round(v.imag, 6))):
        for cl in clusters:
            centre = np.mean(cl)
            if abs(z - centre) <= merge_tol * (1.0 + abs(centre)):
                cl.append(z)
                break
        else:
            clusters.append([z])
    out = []
    scale = np.max(np.abs(c))
    for cl in clusters:
        mult = len(cl)
        d = c.copy()
        for _ in range(mult - 1):
            d = np.polyder(d)
        z = _newton(d, complex(np.mean(cl)))
        res = abs(np.polyval(c, z)) / (scale * max(1.0, abs(z)) ** (len(c) - 1))
        if not np.isfinite(res) or res > residual_tol:
            raise ConvergenceError(f"root {z} has relative residual {res:.2e}")
        out.append((z, mult))
    return out
