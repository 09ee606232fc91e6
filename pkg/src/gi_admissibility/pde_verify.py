"""Finite-difference residual checks for candidate solutions.

Derivatives of ``q`` are always differenced here, never taken from closed
forms, so a wrong closed form cannot hide its own error. The one exception is
the t-part matrix ``V``, which is assembled from the profile's ``q_x``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .closed_forms import SolutionProfile
from .lax import background_V, lax_U, lax_V
from .omega_surface import SIGMA3, OmegaEvaluator
from .params import ParameterTriple

ORDER = 4
_OFFSETS = np.arange(-2, 3)


@dataclass(frozen=True)
class ResidualReport:
    max_abs: float
    mean_abs: float
    grid: dict
    step: float
    order: int = ORDER

    def as_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


def _d1(f, h):
    """Fourth-order first derivative; ``f(offset)`` samples at ``offset*h``. Exact on constants."""
    return (8.0 * (f(1) - f(-1)) - (f(2) - f(-2))) / (12.0 * h)


def _d2(f, h):
    f0 = f(0)
    return (16.0 * ((f(1) - f0) + (f(-1) - f0)) - ((f(2) - f0) + (f(-2) - f0))) / (12.0 * h * h)


def gi_pointwise_residual(q: SolutionProfile, x, t, h: float) -> np.ndarray:
    """``i q_t + q_xx + i q^2 conj(q)_x + |q|^4 q / 2`` with differenced derivatives."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    vals = {o: q.evaluate(x + o * h, t) for o in _OFFSETS}
    q0 = vals[0]
    q_t = _d1(lambda o: q.evaluate(x, t + o * h), h)
    q_xx = _d2(lambda o: vals[o], h)
    qbar_x = _d1(lambda o: np.conj(vals[o]), h)
    return 1j * q_t + q_xx + 1j * q0**2 * qbar_x + 0.5 * np.abs(q0) ** 4 * q0


def gi_residual(q: SolutionProfile, region, h: float = 1e-3, n: int = 50) -> ResidualReport:
    """Residual of the GI equation over an ``n x n`` grid spanning ``region = (x0, x1, t0, t1)``."""
    if not h > 0:
        raise ValueError("step must be positive")
    x0, x1, t0, t1 = (float(v) for v in region)
    xs = np.linspace(x0, x1, n)
    ts = np.linspace(t0, t1, n)
    X, T = np.meshgrid(xs, ts)
    r = np.abs(gi_pointwise_residual(q, X, T, h))
    return ResidualReport(float(r.max()), float(r.mean()),
                          {"x": [x0, x1], "t": [t0, t1], "n": n}, h)


def convergence_factors(q: SolutionProfile, region, h0: float = 0.1, halvings: int = 3,
                        n: int = 20) -> list[float]:
    """Ratios of successive ``gi_residual`` maxima as ``h`` is halved from ``h0``."""
    res = [gi_residual(q, region, h0 / 2**i, n).max_abs for i in range(halvings + 1)]
    return [a / b if b > 0 else math.inf for a, b in zip(res, res[1:])]


def _A(q, x, t, k):
    return -1j * k**2 * SIGMA3 + lax_U(q.evaluate(x, t), k)


def _B(q, x, t, k):
    return -2j * k**4 * SIGMA3 + lax_V(q.evaluate(x, t), q.evaluate_x(x, t), k)


def zero_curvature_residual(q: SolutionProfile, x: float, t: float, k: complex,
                            h: float = 1e-3) -> float:
    """Max-entry norm of ``A_t - B_x + [A, B]`` for the Lax pair built from ``q``."""
    a_t = _d1(lambda o: _A(q, x, t + o * h, k), h)
    b_x = _d1(lambda o: _B(q, x + o * h, t, k), h)
    a, b = _A(q, x, t, k), _B(q, x, t, k)
    return float(np.max(np.abs(a_t - b_x + a @ b - b @ a)))


def background_tpart_residual(triple: ParameterTriple, ev: OmegaEvaluator, t: float, k: complex,
                              h: float = 1e-4) -> float:
    """Max-entry norm of ``phi_t + 2ik^4 sigma3 phi - V^b phi`` for the background eigenfunction.

    The step is capped at ``0.01/|Omega(k)|`` so the stencil still resolves
    ``e^{-i Omega t}`` when ``|k|`` is large.
    """
    h = min(h, 0.01 / max(abs(ev.omega(k)), 1e-300))
    phi_t = _d1(lambda o: ev.background_phi(t + o * h, k), h)
    phi = ev.background_phi(t, k)
    vb = background_V(triple.alpha, triple.omega, triple.c, t, k)
    return float(np.max(np.abs(phi_t + 2j * k**4 * SIGMA3 @ phi - vb @ phi)))
