import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gi_admissibility.closed_forms import (
    GaugeDirection, ProfileKind, dnls_soliton, export_profile_csv, gauge_transform, gi_soliton,
    plane_wave, rotate, soliton_phase_integral, zero_profile)
from gi_admissibility.errors import DomainError, TailError
from gi_admissibility.params import (classify, derive_invariants, plane_wave_constraint_residuals,
                                     soliton_parameters)
from gi_admissibility.closed_forms import SolutionProfile

TS = np.linspace(0.0, 10.0, 201)


@pytest.mark.parametrize("omega", [1 / 16, 1.0, 16.0])
def test_soliton_boundary_values_match_triple(omega):
    q = gi_soliton(omega)
    t = soliton_parameters(omega)
    ph = np.exp(1j * omega * TS)
    assert np.max(np.abs(q.evaluate(0.0, TS) - t.alpha * ph)) < 1e-10
    assert np.max(np.abs(q.evaluate_x(0.0, TS) - t.c * ph)) < 1e-10
    inv = derive_invariants(q.boundary_triple())
    assert abs(inv.x2) < 1e-12 * t.scale and abs(inv.disc) < 1e-12 * t.scale**2


def test_soliton_domain():
    with pytest.raises(DomainError):
        gi_soliton(0.0)
    with pytest.raises(DomainError):
        dnls_soliton(1.0, 2.0)


def test_soliton_decay_bound():
    q = gi_soliton(1.0)
    x = np.linspace(1.0, 30.0, 300)
    # phi = 2/sqrt(cosh 2x) <= 2 sqrt(2) e^{-x}
    assert np.all(np.abs(q.evaluate(x, 0.7)) <= 2 * math.sqrt(2) * np.exp(-x) * (1 + 1e-12))


def test_soliton_schwartz_moments():
    q = gi_soliton(1.0)
    x = np.linspace(10.0, 20.0, 501)
    for f in (q.evaluate, q.evaluate_x):
        a = np.abs(f(x, 0.3))
        for n in range(4):
            w = x**n * a
            assert np.max(w) < 1.0
            assert w[-1] < 1e-3 * w[0]


def test_derivative_matches_difference():
    h = 1e-5
    for q in (gi_soliton(2.0), dnls_soliton(1.0, 0.7), plane_wave(1.0, -1.0)):
        x = np.array([0.3, 1.1, 2.5])
        fd = (q.evaluate(x + h, 0.4) - q.evaluate(x - h, 0.4)) / (2 * h)
        assert np.max(np.abs(fd - q.evaluate_x(x, 0.4))) < 1e-8


def test_phase_integral_closed_form_against_quadrature():
    from scipy.integrate import quad
    for x in (0.0, 0.5, 2.0):
        ref = quad(lambda y: 4 / math.cosh(2 * y), x, 60)[0]
        assert soliton_phase_integral(1.0, x) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("omega", [1 / 16, 1.0, 16.0])
def test_gauge_image_of_dnls_soliton_is_gi_soliton(omega):
    x = np.linspace(0.0, 5.0, 101)
    q = rotate(gauge_transform(dnls_soliton(omega, 0.0)), -math.pi / 4)
    ref = gi_soliton(omega)
    for t in (0.0, 1.3):
        assert np.max(np.abs(q.evaluate(x, t) - ref.evaluate(x, t))) < 1e-9
        assert np.max(np.abs(q.evaluate_x(x, t) - ref.evaluate_x(x, t))) < 1e-9
    assert q.kind is ProfileKind.GAUGE_IMAGE


def test_gauge_round_trip_and_modulus():
    u = dnls_soliton(1.0, 0.6)
    q = gauge_transform(u, GaugeDirection.DNLS_TO_GI)
    back = gauge_transform(q, GaugeDirection.GI_TO_DNLS)
    x = np.linspace(0.0, 4.0, 41)
    assert np.allclose(np.abs(q.evaluate(x, 0.5)), np.abs(u.evaluate(x, 0.5)), atol=1e-14)
    assert np.max(np.abs(back.evaluate(x, 0.5) - u.evaluate(x, 0.5))) < 1e-10


def test_dnls_quadrature_matches_closed_form_at_d_zero():
    u0 = dnls_soliton(1.0, 0.0)
    u_small = dnls_soliton(1.0, 1e-9)
    x = np.linspace(0.0, 5.0, 21)
    assert np.max(np.abs(u0.evaluate(x, 0.0) - u_small.evaluate(x, 0.0))) < 1e-8


def test_dnls_soliton_solves_dnls():
    # i u_t + u_xx - i (|u|^2 u)_x = 0, differenced with a fourth-order stencil
    u = dnls_soliton(1.0, 0.5)
    h = 2e-3
    x, t = np.linspace(-2.0, 3.0, 11), 0.4

    def d1(f):
        return (8 * (f(1) - f(-1)) - (f(2) - f(-2))) / (12 * h)

    u_t = d1(lambda o: u.evaluate(x, t + o * h))
    u_xx = d1(lambda o: u.evaluate_x(x + o * h, t))
    flux = d1(lambda o: np.abs(u.evaluate(x + o * h, t)) ** 2 * u.evaluate(x + o * h, t))
    assert np.max(np.abs(1j * u_t + u_xx - 1j * flux)) < 1e-7


def test_gauge_rejects_non_decaying_input():
    with pytest.raises(TailError):
        gauge_transform(plane_wave(1.0, 0.5), window=10.0).evaluate(np.array([0.0]), 0.0)


def test_plane_wave_examples():
    q = plane_wave(1.0, -1.0)
    assert q.omega == -1.5
    assert q.evaluate(0.0, TS) == pytest.approx(np.exp(-1.5j * TS))
    assert q.evaluate_x(0.0, TS) == pytest.approx(-1j * np.exp(-1.5j * TS))
    assert plane_wave(1.0, 0.0).evaluate(0.0, 2.0) == pytest.approx(np.exp(1j))
    assert not q.schwartz


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(-10.0, 10.0))
def test_plane_wave_modulus_and_constraint(alpha, b):
    q = plane_wave(alpha, b)
    x = np.linspace(0, 5, 7)
    assert np.allclose(np.abs(q.evaluate(x, 1.7)), alpha, rtol=1e-13)
    t = q.boundary_triple()
    assert max(plane_wave_constraint_residuals(t)) <= 1e-12 * t.scale


def test_boundary_triple_classifies():
    assert classify(gi_soliton(1.0).boundary_triple()).admissible_candidate


def test_zero_profile_and_scaling():
    z = zero_profile()
    assert np.all(z.evaluate(np.ones(3), 0.0) == 0)
    s = gi_soliton(1.0).scaled(1.1)
    assert s.evaluate(0.0, 0.0) == pytest.approx(2.2)


def test_csv_export(tmp_path):
    path = tmp_path / "q.csv"
    export_profile_csv(gi_soliton(1.0), np.linspace(0, 1, 3), [0.0, 0.5], path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["x", "t", "re_q", "im_q"]
    assert len(rows) == 7
    assert complex(float(rows[1][2]), float(rows[1][3])) == pytest.approx(2.0)


def test_profile_is_frozen():
    q = gi_soliton(1.0)
    with pytest.raises(Exception):
        q.omega = 2.0
    assert isinstance(q, SolutionProfile)
