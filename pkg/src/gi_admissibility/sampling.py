"""Random triples on the soliton constraint surface and on the plane-wave curve.

Plain uniform sampling almost never lands on the measure-zero admissible
families, so a fixed share of each batch is drawn from the families directly.
"""
from __future__ import annotations

import math

import numpy as np

from .params import ParameterTriple, plane_wave_thresholds, plane_wave_triple, soliton_constraint_triple


def random_soliton_triples(rng: np.random.Generator, n: int,
                           family_share: float = 0.25) -> list[ParameterTriple]:
    """Triples with ``X2 = 0``; about ``family_share`` of them on the surviving family."""
    out = []
    for _ in range(n):
        alpha = float(rng.uniform(0.5, 2.0))
        if rng.random() < family_share:
            if rng.random() < 0.1:
                out.append(ParameterTriple(alpha, -alpha**4 / 4, -0.5j * alpha**3))
                continue
            omega = alpha**4 / 16 + float(rng.uniform(0.0, 4.0)) * alpha**4
            sign = 1.0 if rng.random() < 0.5 else -1.0
            c = complex(sign * alpha * math.sqrt(omega - alpha**4 / 16), -alpha**3 / 4)
            out.append(ParameterTriple(alpha, omega, c))
        else:
            c = complex(rng.normal(0.0, 1.5), rng.normal(0.0, 1.5)) * alpha**3
            out.append(soliton_constraint_triple(alpha, c))
    return out


def random_plane_wave_triples(rng: np.random.Generator, n: int,
                              margin: float = 0.05) -> list[ParameterTriple]:
    """Plane-wave triples spread over the three bands of ``b``, away from band edges."""
    out = []
    for i in range(n):
        alpha = float(rng.uniform(0.5, 2.0))
        lo, hi = plane_wave_thresholds(alpha)
        band = i % 3
        if band == 0:
            b = lo - float(rng.uniform(margin, 3.0)) * alpha**2
        elif band == 1:
            b = lo + (hi - lo) * float(rng.uniform(margin, 1.0 - margin))
        else:
            b = hi + float(rng.uniform(margin, 3.0)) * alpha**2
        out.append(plane_wave_triple(alpha, b))
    return out
