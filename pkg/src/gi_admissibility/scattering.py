"""Spectral functions at t = 0: ``s(k)`` by ODE integration and ``S(k) = E(k)`` for exact backgrounds.

``s(k)`` is the value at ``x = 0`` of the eigenfunction normalised to the
identity as ``x -> infinity``. Column ``j`` of ``mu`` solves a linear system
whose homogeneous part is ``diag(0, 2ik^2)`` (column 1) or ``diag(-2ik^2, 0)``
(column 2), so integrating from ``x_max`` down to ``0`` is stable for column 1
when ``Im k^2 <= 0`` and for column 2 when ``Im k^2 >= 0``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .closed_forms import SolutionProfile
from .branch_cuts import make_evaluator
from .errors import (DomainError, GIAdmissibilityError, NotExactBackground, RegionError,
                     StiffnessError, ValidityError)
from .lax import lax_U
from .omega_surface import OmegaEvaluator
from .params import ParameterTriple
from .regions import D1, RegionMap

# both columns are integrated together only while the unstable one can grow by at most e^{2*30}
FULL_MATRIX_GUARD = 30.0
BOUNDARY_TOL = 1e-10
_MAX_NFEV = 2_000_000


@dataclass(frozen=True)
class ScatteringData:
    k: complex
    s: np.ndarray
    S: np.ndarray
    residual_global: float

    @property
    def a(self) -> complex:
        return complex(self.s[1, 1])

    @property
    def b(self) -> complex:
        return complex(self.s[0, 1])

    @property
    def A(self) -> complex:
        return complex(self.S[1, 1])

    @property
    def B(self) -> complex:
        return complex(self.S[0, 1])

    def as_dict(self) -> dict:
        def m(x):
            return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(x)]
        return {"k": [self.k.real, self.k.imag], "s": m(self.s), "S": m(self.S),
                "residual_global": self.residual_global}


def export_json(data: list[ScatteringData], path) -> None:
    with open(path, "w") as fh:
        json.dump([d.as_dict() for d in data], fh, indent=1)


def default_x_max(q0: SolutionProfile) -> float:
    if not q0.schwartz or not q0.decay_rate:
        raise DomainError("scattering data need a decaying profile")
    # |q|^2 ~ e^{-rate x}; 80/rate puts |q| near e^{-40}
    return 80.0 / q0.decay_rate


def _integrate_column(q0: SolutionProfile, k: complex, col: int, x_max: float,
                      rtol: float, atol: float) -> np.ndarray:
    shift = np.diag([0.0, 2j * k * k]) if col == 0 else np.diag([-2j * k * k, 0.0])

    def rhs(x, y):
        return (lax_U(q0.evaluate(x, 0.0), k) + shift) @ y

    y0 = np.zeros(2, dtype=complex)
    y0[col] = 1.0
    sol = solve_ivp(rhs, (x_max, 0.0), y0, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success or sol.nfev > _MAX_NFEV:
        raise StiffnessError(f"integration failed at k={k}: {sol.message}")
    return sol.y[:, -1]


def valid_columns(k: complex, x_max: float) -> tuple[int, ...]:
    """Columns (1-based) that can be integrated at ``k`` without overflow."""
    im2 = (k * k).imag
    if abs(im2) * x_max < FULL_MATRIX_GUARD:
        return (1, 2)
    return (2,) if im2 > 0 else (1,)


def compute_s(q0: SolutionProfile, k: complex, x_max: float | None = None, columns=None,
              rtol: float = 1e-12, atol: float = 1e-14) -> np.ndarray:
    """``mu_3(0, 0, k)`` for the profile ``q0`` at ``t = 0``.

    Columns outside their validity region come back as NaN unless explicitly
    requested, in which case ``ValidityError`` is raised.
    """
    k = complex(k)
    x_max = default_x_max(q0) if x_max is None else float(x_max)
    tail = abs(complex(q0.evaluate(x_max, 0.0)))
    if tail >= 1e-12:
        raise DomainError(f"|q0(x_max)| = {tail:.2e} is not negligible; increase x_max")
    allowed = valid_columns(k, x_max)
    if columns is None:
        columns = allowed
    bad = [c for c in columns if c not in allowed]
    if bad:
        raise ValidityError(f"column {bad[0]} grows like exp(2|Im k^2| x) at k={k}")
    s = np.full((2, 2), np.nan, dtype=complex)
    for c in columns:
        s[:, c - 1] = _integrate_column(q0, k, c - 1, x_max, rtol, atol)
    return s


def check_exact_background(triple: ParameterTriple, profile: SolutionProfile,
                           times=None, tol: float = BOUNDARY_TOL) -> float:
    """Largest deviation of ``q(0,t), q_x(0,t)`` from ``alpha e^{i omega t}, c e^{i omega t}``."""
    ts = np.linspace(0.0, 10.0, 41) if times is None else np.asarray(times, dtype=float)
    ph = np.exp(1j * triple.omega * ts)
    dev = max(np.max(np.abs(profile.evaluate(0.0 * ts, ts) - triple.alpha * ph)),
              np.max(np.abs(profile.evaluate_x(0.0 * ts, ts) - triple.c * ph)))
    if dev > tol:
        raise NotExactBackground(f"boundary values deviate from the background by {dev:.2e}")
    return float(dev)


def compute_S_exact_background(triple: ParameterTriple, ev: OmegaEvaluator, k: complex,
                               profile: SolutionProfile | None = None) -> np.ndarray:
    """``S(k) = E(k)``, valid when the boundary values are exactly the background."""
    if profile is not None:
        check_exact_background(triple, profile)
    return ev.E(complex(k))


def in_closed_d1(ev: OmegaEvaluator, k: complex, region_map: RegionMap | None = None,
                 tol: float = 1e-12) -> bool:
    """Whether ``k`` lies in the closure of an unbounded part of ``D1``."""
    k = complex(k)
    im_k2 = (k * k).imag
    om = ev.omega(k)
    scale_k, scale_o = max(abs(k) ** 2, 1.0), max(abs(om), 1.0)
    if im_k2 < -tol * scale_k or om.imag < -tol * scale_o:
        return False
    interior = im_k2 > tol * scale_k and om.imag > tol * scale_o
    if not interior or region_map is None:
        return True
    x0, x1, y0, y1 = region_map.bounds
    if not (x0 <= k.real <= x1 and y0 <= k.imag <= y1):
        return True  # beyond the map every D1 piece is one of the unbounded sectors
    idx = region_map.component_index
    i = int(np.clip((k.imag - y0) / region_map.cell_size, 0, idx.shape[0] - 1))
    j = int(np.clip((k.real - x0) / region_map.cell_size, 0, idx.shape[1] - 1))
    c = idx[i, j]
    if c < 0:
        return True  # cut or undefined cell: no component information at this scale
    comp = region_map.components[c]
    return comp.label == D1 and comp.unbounded


def scattering_data(triple: ParameterTriple, q0: SolutionProfile, k: complex,
                    ev: OmegaEvaluator | None = None, region_map: RegionMap | None = None,
                    x_max: float | None = None) -> ScatteringData:
    """``s``, ``S`` and the global-relation defect ``|A b - a B|`` at a point of the closed ``D1``."""
    ev = make_evaluator(triple) if ev is None else ev
    k = complex(k)
    if not in_closed_d1(ev, k, region_map):
        raise RegionError(f"k={k} is not in the closure of D1")
    S = compute_S_exact_background(triple, ev, k)
    s = compute_s(q0, k, x_max, columns=(2,))
    res = abs(S[1, 1] * s[0, 1] - s[1, 1] * S[0, 1])
    return ScatteringData(k, s, S, float(res))


def global_relation_residual(triple: ParameterTriple, q0: SolutionProfile, k: complex,
                             ev: OmegaEvaluator | None = None,
                             region_map: RegionMap | None = None,
                             x_max: float | None = None) -> float:
    """``|A(k) b(k) - a(k) B(k)|`` with ``A, B`` from ``E(k)`` and ``a, b`` from ``compute_s``."""
    return scattering_data(triple, q0, k, ev, region_map, x_max).residual_global


def sample_closed_d1(ev: OmegaEvaluator, rng: np.random.Generator, n: int, radius: float = 3.0,
                     region_map: RegionMap | None = None, real_share: float = 0.1) -> list[complex]:
    """``n`` points of the closed ``D1`` with ``|k| <= radius``; a share of them on the real axis."""
    out: list[complex] = []
    n_real = int(round(real_share * n))
    while len(out) < n_real:
        out.append(complex(rng.uniform(-radius, radius), 0.0))
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > 1000 * n:
            raise RegionError("could not sample points in D1")
        r = radius * math.sqrt(rng.uniform(0.0, 1.0))
        k = r * complex(math.cos(th := rng.uniform(0, 2 * math.pi)), math.sin(th))
        try:
            if in_closed_d1(ev, k, region_map) and ((k * k).imag > 0):
                out.append(k)
        except GIAdmissibilityError:  # on a cut or at a pole of E
            continue
    return out
