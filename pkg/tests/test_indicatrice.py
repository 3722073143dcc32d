"""Directional growth rates: four routes, closed forms, invariants."""

import math

import numpy as np
import pytest

from multigrowth.automaton import catalog_automaton
from multigrowth.indicatrice import (Direction, NEG_INF, amoeba_slice,
                                     maximize_psi_2d, psi_boundary,
                                     psi_closed_form, psi_empirical, psi_tmap)
from multigrowth.polyalg import MultiPoly
from multigrowth.registry import get_language
from multigrowth.series import coefficients_dp

PHI = (1 + math.sqrt(5)) / 2

H_MONOID = MultiPoly(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1})
H_F2 = MultiPoly(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): -3})
H_FIB = MultiPoly(2, {(0, 0): 1, (1, 0): -1, (1, 1): -1})


def closed_fib(p):
    return psi_closed_form("fibonacci", Direction((p, 1 - p))).value


def closed_f2(p):
    return psi_closed_form("f2_delta", Direction((p, 1 - p))).value


# ---------------------------------------------------------------------------
# direction type

def test_direction_validation():
    with pytest.raises(ValueError, match="non-negative"):
        Direction((-0.1, 1.1))
    with pytest.raises(ValueError, match="sum to 1"):
        Direction((0.5, 0.6))
    assert Direction((0.5, 0.5)).interior
    assert not Direction((1.0, 0.0)).interior


# ---------------------------------------------------------------------------
# boundary route

def test_boundary_free_monoid_is_entropy():
    v = psi_boundary(H_MONOID, Direction((0.5, 0.5)))
    assert abs(v.value - math.log(2)) < 1e-10
    assert v.minimizer is not None


def test_boundary_rank2_symmetric():
    v = psi_boundary(H_F2, Direction((0.5, 0.5)))
    assert abs(v.value - math.log(3)) < 1e-10


def test_boundary_fibonacci_neg_inf():
    v = psi_boundary(H_FIB, Direction((0.3, 0.7)))
    assert v.value == NEG_INF and v.minimizer is None


def test_boundary_rejects_wrong_sign_class():
    bad = MultiPoly(2, {(0, 0): 1, (1, 0): 1})
    with pytest.raises(ValueError, match="positive non-constant"):
        psi_boundary(bad, Direction((0.5, 0.5)))


def test_boundary_minimizer_is_on_the_surface():
    for h, p in ((H_F2, 0.37), (H_FIB, 0.81), (H_MONOID, 0.25)):
        v = psi_boundary(h, Direction((p, 1 - p)))
        point = v.boundary_point()
        assert abs(h.eval(point)) < 1e-10
        # gradient of H parallel to the direction (first-order condition)
        g = np.array(h.gradient(point)) * np.array(point)
        r = np.array([p, 1 - p])
        cross = abs(g[0] * r[1] - g[1] * r[0]) / (np.linalg.norm(g) * np.linalg.norm(r))
        assert cross < 1e-6


def test_boundary_face_directions():
    assert psi_boundary(H_FIB, Direction((1.0, 0.0))).value == pytest.approx(0.0, abs=1e-12)
    assert psi_boundary(H_FIB, Direction((0.0, 1.0))).value == NEG_INF
    assert psi_boundary(H_MONOID, Direction((1.0, 0.0))).value == pytest.approx(0.0, abs=1e-12)


# ---------------------------------------------------------------------------
# stochastic-map route

def test_tmap_fibonacci_at_stationary_frequencies():
    a = catalog_automaton("fibonacci")
    v = psi_tmap(a, Direction((0.7236, 0.2764)))
    assert abs(v.value - math.log(PHI)) < 1e-8


def test_tmap_matches_boundary_off_center():
    a = catalog_automaton("fibonacci")
    t = psi_tmap(a, Direction((0.9, 0.1)))
    b = psi_boundary(H_FIB, Direction((0.9, 0.1)))
    assert abs(t.value - b.value) < 1e-8
    # the image point lies on the singular surface
    assert abs(H_FIB.eval(t.boundary_point())) < 1e-9


def test_tmap_symmetric_rank2():
    a = catalog_automaton("free_group_ergodic", 2)
    v = psi_tmap(a, Direction((0.25, 0.25, 0.25, 0.25)))
    assert abs(v.value - math.log(3)) < 1e-9


def test_tmap_requires_vertex_labels():
    with pytest.raises(ValueError, match="vertex-labeled"):
        psi_tmap(catalog_automaton("free_monoid", 2), Direction((0.5, 0.5)))


def test_tmap_neg_inf_region():
    a = catalog_automaton("fibonacci")
    assert psi_tmap(a, Direction((0.3, 0.7))).value == NEG_INF


# ---------------------------------------------------------------------------
# empirical route

@pytest.fixture(scope="module")
def fib_table_60():
    return coefficients_dp(catalog_automaton("fibonacci"), 60)


def test_empirical_fibonacci(fib_table_60):
    est = psi_empirical(fib_table_60, Direction((2 / 3, 1 / 3)), cone_eps=0.05)
    assert abs(est - (2 / 3) * math.log(2)) < 0.1


def test_empirical_fibonacci_dead_direction(fib_table_60):
    assert psi_empirical(fib_table_60, Direction((0.4, 0.6)), cone_eps=0.05) == NEG_INF


def test_empirical_free_monoid():
    t = coefficients_dp(catalog_automaton("free_monoid", 2), 60)
    est = psi_empirical(t, Direction((0.5, 0.5)), cone_eps=0.05)
    assert abs(est - math.log(2)) < 0.05


def test_empirical_requires_table_depth(fib_table_60):
    small = coefficients_dp(catalog_automaton("fibonacci"), 4)
    with pytest.raises(ValueError, match="only reaches"):
        psi_empirical(small, Direction((0.5, 0.5)))


# ---------------------------------------------------------------------------
# closed forms

def test_closed_form_rank2_symmetric():
    assert abs(closed_f2(0.5) - math.log(3)) < 1e-12


def test_closed_form_fibonacci_limit_and_cut():
    assert closed_fib(0.5) == 0.0
    assert closed_fib(1 / 3) == NEG_INF
    assert abs(closed_fib(2 / 3) - (2 / 3) * math.log(2)) < 1e-12


def test_closed_form_free_monoid_entropy():
    v = psi_closed_form("free_monoid", Direction((0.2, 0.3, 0.5)))
    assert abs(v.value + (0.2 * math.log(0.2) + 0.3 * math.log(0.3) + 0.5 * math.log(0.5))) < 1e-12


def test_closed_form_has_no_minimizer():
    assert psi_closed_form("f2_delta", Direction((0.5, 0.5))).minimizer is None


# ---------------------------------------------------------------------------
# amoeba slice

def test_amoeba_rank2_passes_symmetric_point():
    pts = np.array(amoeba_slice(H_F2, grid=401))
    gap = np.abs(pts - np.array([math.log(3), math.log(3)])).sum(axis=1).min()
    assert gap < 0.05


def test_amoeba_fibonacci_passes_corner():
    pts = np.array(amoeba_slice(H_FIB, grid=401))
    gap = np.abs(pts - np.array([math.log(2), 0.0])).sum(axis=1).min()
    assert gap < 0.05


def test_amoeba_degenerate_vertical_line():
    h = MultiPoly(2, {(0, 0): 1, (1, 0): -1})
    pts = amoeba_slice(h, grid=9)
    assert pts and all(s == 0.0 for s, _ in pts)
    assert len({t for _, t in pts}) == 9


# ---------------------------------------------------------------------------
# cross-method invariants (scaled-down versions of the acceptance grids)

def test_method_agreement_fibonacci():
    lang = get_language("fibonacci")
    for p in np.linspace(0.55, 0.95, 7):
        b = lang.psi((p, 1 - p), "boundary").value
        t = lang.psi((p, 1 - p), "tmap").value
        c = closed_fib(p)
        assert abs(b - t) < 1e-6
        assert abs(b - c) < 1e-8


def test_method_agreement_rank2():
    lang = get_language("f2_delta")
    for p in np.linspace(0.1, 0.9, 7):
        b = lang.psi((p, 1 - p), "boundary").value
        t = lang.psi((p, 1 - p), "tmap").value
        c = closed_f2(p)
        assert abs(b - t) < 1e-6
        assert abs(b - c) < 1e-8


def test_superadditivity_of_homogeneous_extension():
    pts = [(s * p, s * (1 - p)) for p in (0.55, 0.7, 0.9) for s in (1.0, 2.5)]
    for x in pts:
        for y in pts:
            zvec = (x[0] + y[0], x[1] + y[1])
            vals = []
            for vec in (x, y, zvec):
                norm = vec[0] + vec[1]
                vals.append(norm * closed_fib(vec[0] / norm))
            assert vals[2] >= vals[0] + vals[1] - 1e-7


def test_maximum_is_topological_entropy():
    val, arg = maximize_psi_2d(closed_fib, lo=0.52, hi=0.98)
    assert abs(val - math.log(PHI)) < 1e-9
    assert abs(arg - (5 + math.sqrt(5)) / 10) < 1e-6
    val2, arg2 = maximize_psi_2d(closed_f2)
    assert abs(val2 - math.log(3)) < 1e-9
    assert abs(arg2 - 0.5) < 1e-6


def test_empirical_tracks_closed_forms():
    lang = get_language("f2_delta")
    table = lang.table(60)
    for p in (0.25, 0.5, 0.75):
        est = psi_empirical(table, Direction((p, 1 - p)))
        assert abs(est - closed_f2(p)) < 0.1
