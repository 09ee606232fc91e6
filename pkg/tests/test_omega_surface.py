import cmath
import math

import numpy as np
import pytest

from gi_admissibility.branch_cuts import LAYOUTS, build_branch_cuts, make_evaluator
from gi_admissibility.errors import OnCutError, PathError, PoleError, UnsupportedCase
from gi_admissibility.figures import REPRESENTATIVES
from gi_admissibility.identities import identity_errors, random_off_cut_points
from gi_admissibility.omega_surface import (
    SIGMA1, continue_sqrt, eval_background_phi, eval_E, eval_H, eval_omega, find_cut_free_path,
    omega_squared, omega_squared_roots)
from gi_admissibility.params import (CaseLabel, ParameterTriple, SpectralInvariants, classify,
                                     derive_invariants, plane_wave_triple, soliton_parameters)
from gi_admissibility.polyroots import aberth_roots, roots_with_multiplicity

SOLITON = ParameterTriple(2.0, 1.0, -2j)
PW_LOW = ParameterTriple(1.0, -1.5, -1j)
CASES = dict(REPRESENTATIVES)
CASES[CaseLabel.SOLITON_DISC_ZERO] = SOLITON
CASES[CaseLabel.PW_B_LOW] = PW_LOW


def _inv(x1, x2, x3):
    return SpectralInvariants(x1, x2, x3, x1 * x1 - 16 * x3, 0j, 0j, x1 / 2)


def _roots(inv):
    return sorted(omega_squared_roots(inv), key=lambda p: (round(p[0].real, 8), round(p[0].imag, 8)))


# ----------------------------------------------------------------- roots
def test_aberth_matches_numpy_roots():
    rng = np.random.default_rng(5)
    for _ in range(20):
        coeffs = rng.normal(size=6) + 1j * rng.normal(size=6)
        ours = aberth_roots(coeffs)
        ref = np.roots(coeffs)
        for z in ref:
            assert np.min(np.abs(ours - z)) < 1e-9 * (1 + abs(z))


def test_multiplicity_merge():
    # (m + 1/4)^2 (m - 2)
    coeffs = np.polymul(np.polymul([1, 0.25], [1, 0.25]), [1, -2])
    got = sorted(roots_with_multiplicity(coeffs), key=lambda p: p[0].real)
    assert [m for _, m in got] == [2, 1]
    assert got[0][0] == pytest.approx(-0.25)
    assert got[1][0] == pytest.approx(2.0)


def test_soliton_roots_are_double_on_diagonals():
    roots = omega_squared_roots(derive_invariants(SOLITON))
    assert len(roots) == 4 and all(m == 2 for _, m in roots)
    for z, _ in roots:
        assert abs(z) == pytest.approx(2**-0.5)
        assert (cmath.phase(z) / (math.pi / 4)) % 2 == pytest.approx(1.0)


def test_plane_wave_low_roots():
    got = {(round(z.real, 9), round(z.imag, 9)): m for z, m in omega_squared_roots(derive_invariants(PW_LOW))}
    s = round(2**-0.5, 9)
    assert got == {(0.0, 0.0): 2, (1.0, 0.0): 1, (-1.0, 0.0): 1, (0.0, s): 2, (0.0, -s): 2}


def test_disc_neg_x1_zero_roots():
    roots = omega_squared_roots(_inv(0.0, 0.0, 4.0))
    assert len(roots) == 8
    targets = [cmath.exp(1j * (2 * n + 1) * math.pi / 8) for n in range(8)]
    for t in targets:
        assert min(abs(z - t) for z, _ in roots) < 1e-10


@pytest.mark.parametrize("label", list(CASES))
def test_root_set_symmetric_and_reproduces_quartic(label):
    inv = derive_invariants(CASES[label])
    roots = omega_squared_roots(inv)
    pts = [z for z, m in roots for _ in range(m)]
    assert len(pts) == 8
    for z in pts:
        assert min(abs(-z - w) for w in pts) < 1e-10 * (1 + abs(z))
        assert min(abs(z.conjugate() - w) for w in pts) < 1e-10 * (1 + abs(z))
    # monic quartic in m = k^2 from the squared roots
    ms = [z * z for z in pts if (z.real, z.imag) > (0.0, -1e300) and z.real > 0 or
          (z.real == 0 and z.imag > 0)]
    if len(ms) == 4:
        poly = np.poly(ms)
        want = np.array([1.0, 0.0, inv.x1 / 4, inv.x2 / 4, inv.x3 / 4])
        assert np.max(np.abs(poly - want)) <= 1e-9 * np.max(np.abs(want))


# ------------------------------------------------------------ branch cuts
def test_soliton_has_no_cuts():
    assert make_evaluator(SOLITON).cuts.cuts == []


def test_outside_scope_unsupported():
    with pytest.raises(UnsupportedCase):
        build_branch_cuts(derive_invariants(ParameterTriple(1.0, 0.0, 0j)), CaseLabel.OUTSIDE_SCOPE)


def test_pw_low_cuts_are_real():
    ev = make_evaluator(PW_LOW)
    pts = np.concatenate(ev.cuts.cuts)
    assert np.max(np.abs(pts.imag)) == 0.0
    ends = sorted({round(z.real, 9) for c in ev.cuts.cuts for z in (c[0], c[-1])})
    assert set(ends) <= {-1.0, 0.0, 1.0}


def test_disc_neg_x1_pos_cut_crosses_each_diagonal():
    ev = make_evaluator(CASES[CaseLabel.SOLITON_DISC_NEG_X1_POS])
    assert len(ev.cuts.cuts) == 4
    for n in range(4):
        ray = np.array([0, 100 * cmath.exp(1j * (2 * n + 1) * math.pi / 4)])
        hits = 0
        for c in ev.cuts.cuts:
            arg = np.angle(c * cmath.exp(-1j * (2 * n + 1) * math.pi / 4))
            hits += int(np.any(np.diff(np.sign(arg)) != 0) and np.max(np.abs(arg)) < math.pi / 2)
        assert hits == 1, ray


@pytest.mark.parametrize("label", list(CASES))
@pytest.mark.parametrize("layout", LAYOUTS)
def test_cut_union_symmetric(label, layout):
    ev = make_evaluator(CASES[label], layout=layout)
    if not ev.cuts.cuts:
        return
    pts = np.concatenate(ev.cuts.cuts)
    scale = 1e-6 * (1 + ev.max_root_modulus)
    assert np.max(ev.cuts.distance(-pts)) < scale
    assert np.max(ev.cuts.distance(np.conj(pts))) < scale
    ends = [z for c in ev.cuts.cuts for z in (c[0], c[-1])]
    for z in ends:
        assert min(abs(z - b) for b in ev.cuts.branch_points) < 1e-9 * (1 + abs(z))


# ------------------------------------------------------------------ Omega
def test_soliton_omega_is_perfect_square_branch():
    ev = make_evaluator(SOLITON)
    assert eval_omega(ev, 1.0) == pytest.approx(2.5, abs=1e-14)
    k = np.array([0.3 + 0.2j, -1.1 + 0.7j, 2j, 0.05])
    assert np.allclose(ev.omega_array(k), 2 * k**4 + 0.5, rtol=1e-13)
    inv = derive_invariants(SOLITON)
    assert np.allclose(ev.omega_array(k), (8 * k**4 + inv.x1) / 4, rtol=1e-13)


@pytest.mark.parametrize("label", list(CASES))
@pytest.mark.parametrize("layout", LAYOUTS)
def test_omega_matches_continuation_oracle(label, layout):
    triple = CASES[label]
    ev = make_evaluator(triple, layout=layout)
    rng = np.random.default_rng(11)
    ks = random_off_cut_points(ev, rng, 25, clearance=1e-2)
    checked = 0
    for k in ks:
        try:
            p1 = find_cut_free_path(ev.cuts, ev.anchor_radius, k, avoid=1e-3)
            p2 = find_cut_free_path(ev.cuts, ev.anchor_radius, k, avoid=1e-3,
                                    thetas=[math.pi / 16 + j * math.pi / 8 for j in range(15, -1, -1)])
        except PathError:
            continue
        ref1 = continue_sqrt(ev.invariants, p1, triple.omega)
        ref2 = continue_sqrt(ev.invariants, p2, triple.omega)
        assert abs(ref1 - ref2) <= 1e-9 * max(1.0, abs(ref1))
        assert abs(ev.omega(k) - ref1) <= 1e-9 * max(1.0, abs(ref1))
        checked += 1
    assert checked >= 10


@pytest.mark.parametrize("label", list(CASES))
def test_asymptotic_normalisation(label):
    triple = CASES[label]
    ev = make_evaluator(triple)
    k = 10 * cmath.exp(1j * math.pi / 8)
    om = ev.omega(k)
    c_fit = ev.anchor_constant()
    assert abs(om - 2 * k**4 - triple.omega / 2) <= 1.05 * c_fit / abs(k) ** 2
    assert abs(om - 2 * k**4) / abs(2 * k**4) < 1e-2


def test_on_cut_raises():
    ev = make_evaluator(PW_LOW)
    with pytest.raises(OnCutError):
        ev.omega(0.5)


@pytest.mark.parametrize("label", list(CASES))
def test_identities_at_random_points(label):
    ev = make_evaluator(CASES[label])
    ks = random_off_cut_points(ev, np.random.default_rng(2), 300)
    errs = identity_errors(ev, ks)
    assert max(errs.values()) < 1e-10, errs


# -------------------------------------------------------------- H and E
def test_soliton_h_closed_form():
    ev = make_evaluator(SOLITON)
    for k in (0.3 + 0.1j, 1.2 - 0.5j, 2.0):
        assert eval_H(ev, SOLITON, k) == pytest.approx(-4 * k * k, rel=1e-12)
        assert 2 * ev.omega(k) - ev.H(k) == pytest.approx((2 * k * k + 1) ** 2, rel=1e-12)


def test_h_identity_at_zero_and_two():
    ev = make_evaluator(PW_LOW)
    k = 2.0 + 0j
    a, c = PW_LOW.alpha, PW_LOW.c
    lhs = (2 * ev.omega(k) - ev.H(k)) * ev.H(k)
    rhs = -k * k * (2 * a * k * k - 1j * np.conj(c)) * (2 * a * k * k + 1j * c)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)
    ev0 = make_evaluator(CASES[CaseLabel.SOLITON_DISC_NEG_X1_POS])
    assert abs((2 * ev0.omega(0j) - ev0.H(0j)) * ev0.H(0j)) < 1e-12


def test_det_e_and_limit():
    ev = make_evaluator(SOLITON)
    assert np.linalg.det(eval_E(ev, SOLITON, 1 + 0.5j)) == pytest.approx(1.0, abs=1e-10)
    for triple in CASES.values():
        ev = make_evaluator(triple)
        d50 = np.max(np.abs(ev.E(50.0) - np.eye(2)))
        d100 = np.max(np.abs(ev.E(100.0) - np.eye(2)))
        # the off-diagonal entries decay like alpha / (2|k|)
        assert d100 < d50
        assert d100 == pytest.approx(triple.alpha / 200, rel=0.1)


def test_e_sigma1_symmetry_plane_wave():
    ev = make_evaluator(PW_LOW)
    for k in random_off_cut_points(ev, np.random.default_rng(9), 100):
        e = ev.E(k)
        assert np.max(np.abs(SIGMA1 @ np.conj(ev.E(np.conj(k))) @ SIGMA1 - e)) < 1e-12 * max(1, np.max(np.abs(e)))


def test_e_pole_raises():
    ev = make_evaluator(PW_LOW)
    a, c = PW_LOW.alpha, PW_LOW.c
    k = cmath.sqrt(c / (2j * a))
    with pytest.raises(PoleError):
        ev.E(k)


def test_background_phi_basics():
    ev = make_evaluator(SOLITON)
    k = 1 + 0.3j
    assert np.allclose(eval_background_phi(ev, SOLITON, 0.0, k), ev.E(k), atol=1e-15)
    for t in (0.3, 2.0, 7.5):
        assert np.linalg.det(ev.background_phi(t, k)) == pytest.approx(1.0, abs=1e-10)


def test_evaluator_is_thread_safe():
    from concurrent.futures import ThreadPoolExecutor
    ev = make_evaluator(CASES[CaseLabel.PW_B_MID])
    ks = random_off_cut_points(ev, np.random.default_rng(4), 64)
    serial = [ev.omega(k) for k in ks]
    with ThreadPoolExecutor(4) as pool:
        parallel = list(pool.map(ev.omega, ks))
    assert serial == parallel


def test_case_labels_of_representatives():
    for label, triple in CASES.items():
        assert classify(triple).case_label is label


def test_omega_squared_polynomial():
    inv = derive_invariants(plane_wave_triple(1.0, 1.0))
    k = 0.4 - 0.9j
    assert omega_squared(inv, k) == pytest.approx(4 * k**8 + inv.x1 * k**4 + inv.x2 * k**2 + inv.x3)
