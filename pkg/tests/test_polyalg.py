"""Exact polynomial arithmetic, determinants, minors, evaluation."""

import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multigrowth.automaton import catalog_automaton, free_group_pairing
from multigrowth.polyalg import (MultiPoly, PolyMatrix, RationalSeries,
                                 SizeBoundError, eval_poly, eval_poly_gradient,
                                 poly_arith)
from multigrowth.series import transfer_matrix


def P(nvars, terms):
    return MultiPoly(nvars, terms)


def z(i, d=2):
    return MultiPoly.variable(d, i)


def one(d=2):
    return MultiPoly.one(d)


# ---------------------------------------------------------------------------
# arithmetic

def test_mul_expands_product():
    assert (one() + z(0)) * (one() + z(1)) == P(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})


def test_add_cancels_to_one():
    p = P(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): -3})
    q = P(2, {(1, 0): 1, (0, 1): 1, (1, 1): 3})
    assert poly_arith("add", p, q) == one()


def test_rank_two_numerator_factors():
    prod = poly_arith("mul", one() + z(0), one() + z(1))
    assert prod == P(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})


def test_variable_count_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        poly_arith("add", one(2), one(3))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-4, 4)),
                max_size=5),
       st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-4, 4)),
                max_size=5))
def test_ring_laws(ts, us):
    p = P(2, {(a, b): c for a, b, c in ts})
    q = P(2, {(a, b): c for a, b, c in us})
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * p == p * p + q * p


# ---------------------------------------------------------------------------
# determinants and minors

def _det_permutation(m: PolyMatrix) -> MultiPoly:
    # independent oracle: expansion by permutations
    n = m.n
    acc = MultiPoly.zero(m.nvars)
    for perm in permutations(range(n)):
        sign = 1
        seen = [False] * n
        for start in range(n):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        term = MultiPoly.one(m.nvars)
        for i in range(n):
            term = term * m[i, perm[i]]
        acc = acc + term * sign
    return acc


def test_det_fibonacci_denominator():
    a = catalog_automaton("fibonacci")
    az = transfer_matrix(a)
    m = PolyMatrix.identity(2, 2) - az
    assert m.det() == P(2, {(0, 0): 1, (1, 0): -1, (1, 1): -1})


def test_det_1x1():
    m = PolyMatrix([[P(1, {(0,): 1, (1,): -2})]])
    assert m.det() == P(1, {(0,): 1, (1,): -2})


def test_det_unambiguous_rank2_factors():
    a = catalog_automaton("free_group_unambiguous", 2)
    az = transfer_matrix(a, free_group_pairing(2))
    m = PolyMatrix.identity(5, 2) - az
    expected = (one() - z(0)) * (one() - z(1)) * P(2, {(0, 0): 1, (1, 0): -1,
                                                       (0, 1): -1, (1, 1): -3})
    assert m.det() == expected


def test_minor_identity_2x2():
    m = PolyMatrix.identity(2, 2)
    assert m.minor(0, 0) == one()
    assert m.minor(1, 1) == one()


def test_minor_unambiguous_rank2():
    # deleting the second row and first column (0-indexed (1, 0)); the plain
    # submatrix determinant carries the cofactor parity, so the letter minors
    # alternate sign and the signed sum below telescopes
    a = catalog_automaton("free_group_unambiguous", 2)
    az = transfer_matrix(a, free_group_pairing(2))
    m = PolyMatrix.identity(5, 2) - az
    base = z(0) * (one() - z(0)) * (one() - z(1) * z(1))
    assert m.minor(1, 0) == -base
    assert m.minor(3, 0) == -base
    other = z(1) * (one() - z(1)) * (one() - z(0) * z(0))
    assert m.minor(2, 0) == other
    assert m.minor(4, 0) == other


def test_minor_sum_rank2():
    a = catalog_automaton("free_group_unambiguous", 2)
    az = transfer_matrix(a, free_group_pairing(2))
    m = PolyMatrix.identity(5, 2) - az
    total = MultiPoly.zero(2)
    for j in range(5):
        term = m.minor(j, 0)
        if j % 2:
            term = -term
        total = total + term
    assert total == (one() - z(0) * z(0)) * (one() - z(1) * z(1))


def test_det_matches_permutation_oracle():
    rng = np.random.default_rng(7)
    for n in (2, 3, 4):
        for _ in range(4):
            rows = [[P(2, {(rng.integers(0, 2), rng.integers(0, 2)): int(rng.integers(-3, 4))})
                     for _ in range(n)] for _ in range(n)]
            m = PolyMatrix(rows)
            assert m.det() == _det_permutation(m)


def test_det_multiplicative():
    rng = np.random.default_rng(11)
    for _ in range(3):
        def rand():
            return P(2, {(int(rng.integers(0, 2)), int(rng.integers(0, 2))): int(rng.integers(-2, 3))})
        m = PolyMatrix([[rand() for _ in range(3)] for _ in range(3)])
        n = PolyMatrix([[rand() for _ in range(3)] for _ in range(3)])
        assert (m * n).det() == m.det() * n.det()


def test_det_size_bound():
    big = PolyMatrix.identity(13, 1)
    with pytest.raises(SizeBoundError):
        big.det()


def test_det_at_zero_is_one_for_catalogs():
    for name, m in (("fibonacci", None), ("free_monoid", 1), ("free_monoid", 2),
                    ("free_group_unambiguous", 2), ("free_group_ergodic", 2)):
        a = catalog_automaton(name, m)
        az = transfer_matrix(a)
        d = len(a.alphabet)
        det = (PolyMatrix.identity(len(a.states), d) - az).det()
        assert det.constant_term == 1


# ---------------------------------------------------------------------------
# evaluation

def test_eval_rank2_denominator_root():
    h = P(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): -3})
    assert abs(eval_poly(h, (1 / 3, 1 / 3))) < 1e-15


def test_eval_gradient():
    p = z(0) * z(1)
    assert eval_poly_gradient(p, (1.0, 1.0)) == (1.0, 1.0)


def test_eval_fibonacci_boundary_point():
    h = P(2, {(0, 0): 1, (1, 0): -1, (1, 1): -1})
    assert eval_poly(h, (0.5, 1.0)) == 0.0


# ---------------------------------------------------------------------------
# division / series container

def test_exact_division_roundtrip():
    f = (one() - z(0)) * P(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): -3})
    q = f.divide_exact(one() - z(0))
    assert q == P(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): -3})
    assert f.divide_exact(one() + z(0)) is None


def test_rational_series_normalization():
    s = RationalSeries(MultiPoly.const(2, 2), P(2, {(0, 0): -2, (1, 0): 2}))
    # joint content and sign normalization
    assert s.denom.constant_term == 1
    assert s.numer == MultiPoly.const(2, -1)


def test_rational_series_rejects_zero_constant():
    with pytest.raises(ValueError):
        RationalSeries(one(), z(0))


def test_serialization_roundtrip():
    h = P(2, {(0, 0): 1, (1, 0): -1, (1, 1): -1})
    doc = h.to_doc()
    assert doc == {"0,0": "1", "1,0": "-1", "1,1": "-1"}
    assert MultiPoly.from_doc(2, doc) == h


def test_format_matches_expected_layout():
    h = P(2, {(0, 0): 1, (1, 0): -1, (1, 1): -1})
    assert h.format() == "1 - z1 - z1*z2"
    g = P(2, {(0, 0): 1, (0, 1): 1})
    assert g.format() == "1 + z2"
