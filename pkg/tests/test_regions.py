import math

import numpy as np
import pytest

from gi_admissibility.branch_cuts import make_evaluator
from gi_admissibility.contour import ARC, LOOP, RAY, extract_contour
from gi_admissibility.errors import ResolutionError
from gi_admissibility.figures import REPRESENTATIVES, figure_checks
from gi_admissibility.geometry import grid_near_polyline, inside_even_odd, polyline_distance, simplify_polyline
from gi_admissibility.params import CaseLabel, ParameterTriple, soliton_constraint_triple
from gi_admissibility.regions import (CUT, D1, D2, D3, D4, UNDEFINED, build_region_map,
                                      lemma_obstruction_test)

SOLITON = ParameterTriple(2.0, 1.0, -2j)
PW_LOW = ParameterTriple(1.0, -1.5, -1j)


@pytest.fixture(scope="module")
def soliton_map():
    return build_region_map(make_evaluator(SOLITON), resolution=256)


def test_soliton_unbounded_d1_components(soliton_map):
    unbounded = [c for c in soliton_map.components if c.label == D1 and c.unbounded]
    assert len(unbounded) == 2
    quads = set()
    for comp in unbounded:
        z = soliton_map.xs[comp.cells[:, 1]] + 1j * soliton_map.ys[comp.cells[:, 0]]
        quads.add((bool(np.all(z.real > 0)), bool(np.all(z.imag > 0))))
    assert quads == {(True, True), (False, False)}


def test_ring_cell_at_pi_over_8_is_d1(soliton_map):
    w = soliton_map.bounds[1]
    assert soliton_map.label_at(0.95 * w * complex(math.cos(math.pi / 8), math.sin(math.pi / 8))) == D1


def test_labels_match_recomputed_signs():
    ev = make_evaluator(REPRESENTATIVES[CaseLabel.PW_B_MID])
    rm = build_region_map(ev, resolution=128)
    k = rm.centers()
    free = (rm.labels != CUT) & (rm.labels != UNDEFINED)
    om = ev.omega_array(k[free], check=False)
    up, pos = (k[free] ** 2).imag > 0, om.imag > 0
    want = np.where(up, np.where(pos, D1, D2), np.where(pos, D3, D4))
    assert np.array_equal(rm.labels[free], want)


@pytest.mark.parametrize("label", list(REPRESENTATIVES))
def test_region_symmetries(label):
    rm = build_region_map(make_evaluator(REPRESENTATIVES[label]), resolution=256)
    lab = rm.labels
    free = (lab != CUT) & (lab != UNDEFINED)
    rot = lab[::-1, ::-1]
    both = free & (rot != CUT) & (rot != UNDEFINED)
    assert np.mean(lab[both] == rot[both]) > 0.995
    swap = {D1: D4, D4: D1, D2: D3, D3: D2}
    flipped = np.vectorize(lambda v: swap.get(v, v))(lab[::-1, :])
    both = free & (flipped != CUT) & (flipped != UNDEFINED)
    assert np.mean(lab[both] == flipped[both]) > 0.995


def test_plane_wave_low_cut_cells_on_real_axis():
    rm = build_region_map(make_evaluator(PW_LOW), resolution=256)
    k = rm.centers()
    cut = rm.labels == CUT
    assert cut.any()
    assert np.max(np.abs(k[cut].imag)) <= rm.cell_size


def test_resolution_error_for_coarse_grid():
    ev = make_evaluator(soliton_constraint_triple(1.0, 0.02 - 0.27j))
    with pytest.raises(ResolutionError):
        build_region_map(ev, bounds=1e4, resolution=16)


# --------------------------------------------------------------- obstruction
def test_obstruction_examples():
    t = REPRESENTATIVES[CaseLabel.SOLITON_DISC_NEG_X1_POS]
    obstructed, witness = lemma_obstruction_test(t, make_evaluator(t), resolution=256)
    assert obstructed and witness.real > 0 and witness.imag > 0
    assert lemma_obstruction_test(SOLITON, make_evaluator(SOLITON)) == (False, None)
    assert lemma_obstruction_test(PW_LOW, make_evaluator(PW_LOW), resolution=256) == (False, None)


@pytest.mark.parametrize("label", list(REPRESENTATIVES))
def test_obstruction_for_representatives(label):
    t = REPRESENTATIVES[label]
    obstructed, _ = lemma_obstruction_test(t, make_evaluator(t), resolution=256)
    assert obstructed is (label is not CaseLabel.PW_B_HIGH)


@pytest.mark.parametrize("label", list(REPRESENTATIVES))
def test_obstruction_is_a_property_of_the_cut_choice(label):
    # Straight chords leave the curve Im Omega = 0, so they only meet the
    # interior of closure(D1) where the two zeros straddle a D1 sector.
    t = REPRESENTATIVES[label]
    straight = lemma_obstruction_test(t, make_evaluator(t, layout="straight"), resolution=256)[0]
    assert straight is (label is CaseLabel.SOLITON_DISC_NEG_X1_POS)


# ------------------------------------------------------------------ contour
def test_soliton_contour_is_eight_rays():
    c = extract_contour(make_evaluator(SOLITON), resolution=256)
    assert c.classification == [RAY] * 8
    for pl in c.polylines:
        args = np.angle(pl[np.abs(pl) > 1e-9]) / (math.pi / 4)
        assert np.max(np.abs(args - np.round(args))) < 1e-6


def test_disc_neg_x1_zero_radial_segments():
    ev = make_evaluator(REPRESENTATIVES[CaseLabel.SOLITON_DISC_NEG_X1_ZERO])
    c = extract_contour(ev, resolution=512)
    rho = min(abs(z) for z in ev.cuts.branch_points)
    inner = c.crossings_circle(0.5 * rho)
    assert len(inner) == 16
    outer = c.crossings_circle(0.9 * c.bounds[1])
    assert np.max(np.abs(outer / (math.pi / 4) - np.round(outer / (math.pi / 4)))) < 0.05


def test_disc_pos_x1_pos_gap_on_diagonals():
    ev = make_evaluator(REPRESENTATIVES[CaseLabel.SOLITON_DISC_POS_X1_POS])
    c = extract_contour(ev, resolution=512)
    radii = sorted(abs(z) for z in ev.cuts.branch_points)
    gap = c.crossings_circle(0.5 * (radii[0] + radii[-1]))
    # only the coordinate axes survive inside the gap
    assert np.max(np.abs(gap / (math.pi / 2) - np.round(gap / (math.pi / 2)))) < 1e-6


@pytest.mark.parametrize("label", list(REPRESENTATIVES))
def test_contour_vertex_residual_and_symmetry(label):
    ev = make_evaluator(REPRESENTATIVES[label])
    c = extract_contour(ev, resolution=256)
    v = c.vertices()
    om = ev.omega_array(v, check=False)
    assert np.max(np.abs(om.imag) / (1 + np.abs(v) ** 4)) < 1e-6
    tol = 2 * 2 * c.bounds[1] / c.resolution
    assert np.max(polyline_distance(-v, v)) < tol
    assert np.max(polyline_distance(np.conj(v), v)) < tol
    assert set(c.classification) <= {RAY, LOOP, ARC}


@pytest.mark.parametrize("label", list(REPRESENTATIVES))
def test_figure_checks_pass(label):
    ev = make_evaluator(REPRESENTATIVES[label])
    checks = figure_checks(ev, extract_contour(ev, resolution=512), label)
    assert checks and all(ch.passed for ch in checks), [ch for ch in checks if not ch.passed]


def test_no_figure_for_admissible_soliton():
    ev = make_evaluator(SOLITON)
    assert figure_checks(ev, extract_contour(ev, resolution=128), CaseLabel.SOLITON_DISC_ZERO) == []


# ----------------------------------------------------------------- geometry
def test_inside_even_odd_square():
    sq = np.array([0, 1, 1 + 1j, 1j])
    got = inside_even_odd(np.array([0.5 + 0.5j, 1.5 + 0.5j, -0.1j]), sq)
    assert got.tolist() == [True, False, False]


def test_grid_mask_matches_brute_force():
    rng = np.random.default_rng(1)
    poly = np.cumsum(rng.normal(size=12) + 1j * rng.normal(size=12)) * 0.3
    xs = np.linspace(-3, 3, 61)
    ys = np.linspace(-3, 3, 57)
    mask = np.zeros((len(ys), len(xs)), dtype=bool)
    grid_near_polyline(xs, ys, poly, 0.2, mask)
    k = xs[None, :] + 1j * ys[:, None]
    assert np.array_equal(mask, polyline_distance(k, poly) <= 0.2)


def test_simplify_keeps_endpoints_and_tolerance():
    t = np.linspace(0, 1, 500)
    curve = t + 1j * np.sin(3 * t)
    s = simplify_polyline(curve, 1e-4)
    assert s[0] == curve[0] and s[-1] == curve[-1] and len(s) < 100
    assert np.max(polyline_distance(curve, s)) <= 1e-4 * 1.0001
