import json
import math

import numpy as np
import pytest

from gi_admissibility.branch_cuts import make_evaluator
from gi_admissibility.closed_forms import (dnls_soliton, gauge_transform, gi_soliton, plane_wave,
                                           rotate, zero_profile)
from gi_admissibility.lax import background_V
from gi_admissibility.params import ParameterTriple
from gi_admissibility.pde_verify import (ResidualReport, background_tpart_residual,
                                         convergence_factors, gi_pointwise_residual, gi_residual,
                                         zero_curvature_residual)

REGION = (0.1, 5.0, 0.0, 5.0)


def test_soliton_residual_small():
    r = gi_residual(gi_soliton(1.0), REGION, h=1e-3)
    assert r.max_abs < 1e-6
    assert r.order == 4 and r.grid["n"] == 50


def test_plane_wave_residual_small():
    assert gi_residual(plane_wave(1.0, -1.0), REGION, h=1e-3).max_abs < 1e-8


def test_zero_solution_residual_is_exactly_zero():
    assert gi_residual(zero_profile(), REGION).max_abs == 0.0


def test_gauge_image_solves_gi():
    q = rotate(gauge_transform(dnls_soliton(1.0)), -math.pi / 4)
    assert gi_residual(q, REGION, h=1e-3, n=6).max_abs < 1e-6


def test_moving_dnls_gauge_image_solves_gi():
    q = gauge_transform(dnls_soliton(1.0, 0.6))
    assert gi_residual(q, (0.1, 3.0, 0.0, 1.0), h=2e-3, n=4).max_abs < 1e-6


def test_convergence_factor_is_fourth_order():
    f = convergence_factors(gi_soliton(1.0), REGION)
    assert all(12 <= v <= 20 for v in f), f


def test_wrong_amplitude_is_detected():
    good = gi_residual(gi_soliton(1.0), REGION).max_abs
    bad = gi_residual(gi_soliton(1.0).scaled(1.1), REGION).max_abs
    assert bad > 1e3 * good


def test_pointwise_residual_vectorises():
    x = np.linspace(0.5, 2.0, 4)
    r = gi_pointwise_residual(gi_soliton(1.0), x, 0.3 * np.ones(4), 1e-3)
    assert r.shape == (4,)


def test_rejects_nonpositive_step():
    with pytest.raises(ValueError):
        gi_residual(gi_soliton(1.0), REGION, h=0.0)


def test_report_json_round_trip():
    r = gi_residual(plane_wave(1.0, -1.0), REGION, n=5)
    d = json.loads(r.to_json())
    assert ResidualReport(**d) == r


def test_zero_curvature_soliton_and_perturbation():
    rng = np.random.default_rng(7)
    q, bad = gi_soliton(1.0), gi_soliton(1.0).scaled(1.1)
    for _ in range(20):
        x, t = rng.uniform(0.1, 5.0), rng.uniform(0.0, 5.0)
        k = 2 * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
        good = zero_curvature_residual(q, x, t, k)
        assert good < 1e-5
        assert zero_curvature_residual(bad, x, t, k) > 1e3 * good


def test_zero_curvature_zero_solution_exact():
    assert zero_curvature_residual(zero_profile(), 1.0, 0.5, 1 + 0.5j) == 0.0


@pytest.mark.parametrize("triple, t, k", [
    (ParameterTriple(2.0, 1.0, -2j), 0.7, 1 + 0.3j),
    (ParameterTriple(2.0, 1.0, -2j), 0.0, 1.5 - 0.4j),
    (ParameterTriple(1.0, -1.5, -1j), 1.3, 0.5 + 0.5j),
    (ParameterTriple(1.0, 3.99, 2 - 0.3j), 0.4, 0.8 + 0.9j),
])
def test_background_eigenfunction_solves_t_part(triple, t, k):
    ev = make_evaluator(triple)
    assert background_tpart_residual(triple, ev, t, k) < 1e-7


def test_background_t_part_large_k_relative():
    tr = ParameterTriple(2.0, 1.0, -2j)
    ev = make_evaluator(tr)
    k = 20 * np.exp(0.3j)
    scale = np.max(np.abs(background_V(tr.alpha, tr.omega, tr.c, 0.0, k)))
    assert background_tpart_residual(tr, ev, 0.0, k) < 1e-8 * scale


def test_background_t_part_detects_wrong_omega():
    tr = ParameterTriple(2.0, 1.0, -2j)
    wrong = ParameterTriple(2.0, 1.1, -2j)
    assert background_tpart_residual(wrong, make_evaluator(tr), 0.7, 1 + 0.3j) > 1e-3
