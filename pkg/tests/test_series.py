"""Growth series, coefficient tables, oracle equivalence, concave growth."""

import math
from fractions import Fraction
from itertools import product

import pytest

from multigrowth.automaton import catalog_automaton, free_group_pairing
from multigrowth.polyalg import MultiPoly, PolyMatrix, RationalSeries
from multigrowth.series import (EXACT, LOG_DOMAIN, check_cg, coefficients_dp,
                                growth_series, series_coefficients,
                                transfer_matrix)


def P(nvars, terms):
    return MultiPoly(nvars, terms)


# ---------------------------------------------------------------------------
# enumeration oracles

def fibonacci_words(n):
    return ["".join(w) for w in product("ab", repeat=n) if "bb" not in "".join(w)]


def reduced_words(n):
    inverse = {"a": "A", "A": "a", "b": "B", "B": "b"}
    out = []
    for w in product("aAbB", repeat=n):
        if all(w[i + 1] != inverse[w[i]] for i in range(n - 1)):
            out.append(w)
    return out


# ---------------------------------------------------------------------------
# transfer matrix

def test_transfer_matrix_fibonacci():
    az = transfer_matrix(catalog_automaton("fibonacci"))
    assert az[0, 0] == MultiPoly.variable(2, 0)
    assert az[0, 1] == MultiPoly.variable(2, 1)
    assert az[1, 0] == MultiPoly.variable(2, 0)
    assert az[1, 1].is_zero


def test_transfer_matrix_free_monoid():
    az = transfer_matrix(catalog_automaton("free_monoid", 2))
    assert az[0, 0] == MultiPoly.variable(2, 0) + MultiPoly.variable(2, 1)


def test_transfer_matrix_ergodic_columns_carry_target_label():
    a = catalog_automaton("free_group_ergodic", 2)
    az = transfer_matrix(a)
    labels = a.state_labels()
    sym_idx = a.symbol_index()
    from multigrowth.automaton import adjacency
    m = adjacency(a).counts
    for i in range(4):
        for j in range(4):
            if m[i][j]:
                var = sym_idx[labels[a.states[j]]]
                assert az[i, j] == MultiPoly.variable(4, var)
            else:
                assert az[i, j].is_zero


# ---------------------------------------------------------------------------
# growth series

def test_growth_series_fibonacci():
    s = growth_series(catalog_automaton("fibonacci"))
    assert s.numer == P(2, {(0, 0): 1, (0, 1): 1})
    assert s.denom == P(2, {(0, 0): 1, (1, 0): -1, (1, 1): -1})


def test_growth_series_free_monoid():
    s = growth_series(catalog_automaton("free_monoid", 2))
    assert s.numer == MultiPoly.one(2)
    assert s.denom == P(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1})


def test_growth_series_rank2_paired_cancels():
    a = catalog_automaton("free_group_unambiguous", 2)
    s = growth_series(a, free_group_pairing(2))
    assert s.numer == P(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})
    assert s.denom == P(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): -3})


def test_growth_series_warns_on_several_initial_states():
    with pytest.warns(UserWarning, match="several initial states"):
        growth_series(catalog_automaton("free_group_ergodic", 2))


# ---------------------------------------------------------------------------
# dynamic-programming table

def test_dp_fibonacci_values():
    t = coefficients_dp(catalog_automaton("fibonacci"), 6)
    assert t.entries[(3, 2)] == 6
    assert (0, 2) not in t.entries  # the factor bb is forbidden
    # full cross-check against enumeration
    for n in range(7):
        seen = {}
        for w in fibonacci_words(n):
            vec = (w.count("a"), w.count("b"))
            seen[vec] = seen.get(vec, 0) + 1
        for vec, cnt in seen.items():
            assert t.entries.get(vec, 0) == cnt


def test_dp_paired_free_group():
    a = catalog_automaton("free_group_unambiguous", 2)
    t = coefficients_dp(a, 4, var_map=free_group_pairing(2))
    assert t.entries[(1, 1)] == 8
    for n in range(5):
        seen = {}
        for w in reduced_words(n):
            vec = (sum(c in "aA" for c in w), sum(c in "bB" for c in w))
            seen[vec] = seen.get(vec, 0) + 1
        for vec, cnt in seen.items():
            assert t.entries.get(vec, 0) == cnt


def test_dp_log_mode_agrees_with_exact():
    a = catalog_automaton("fibonacci")
    exact = coefficients_dp(a, 40)
    logt = coefficients_dp(a, 40, LOG_DOMAIN)
    assert set(exact.entries) == set(logt.entries)
    for vec, c in exact.entries.items():
        assert abs(logt.entries[vec] - math.log(c)) <= 1e-10 * max(1.0, abs(math.log(c)))


def test_dp_empty_word_counts_initial_final_runs():
    erg = catalog_automaton("free_group_ergodic", 2)
    t = coefficients_dp(erg, 2)
    assert t.entries[(0, 0, 0, 0)] == 4  # one empty run per initial-final state


# ---------------------------------------------------------------------------
# series expansion

def test_series_coefficients_fibonacci_binomials():
    s = growth_series(catalog_automaton("fibonacci"))
    t = series_coefficients(s, 20)
    for i in range(21):
        for j in range(21 - i):
            assert t.entries.get((i, j), 0) == math.comb(i + 1, j)


def test_series_coefficients_trinomial():
    s = growth_series(catalog_automaton("free_monoid", 2))
    t = series_coefficients(s, 10)
    assert t.entries[(2, 1)] == 3
    for i in range(8):
        for j in range(8 - i):
            assert t.entries.get((i, j), 0) == math.comb(i + j, j)


def test_series_constant_term_is_numerator_constant():
    s = RationalSeries(P(2, {(0, 0): 3, (1, 0): 1}), P(2, {(0, 0): 1, (1, 0): -1}))
    t = series_coefficients(s, 3)
    assert t.entries[(0, 0)] == 3


def test_series_coefficients_rejects_non_unit_constant():
    s = RationalSeries(MultiPoly.one(1), P(1, {(0,): 2, (1,): -2}))
    with pytest.raises(ValueError, match="constant term"):
        series_coefficients(s, 3)


def test_oracle_equivalence_all_catalogs():
    jobs = [
        ("fibonacci", None, None),
        ("free_monoid", 2, None),
        ("free_group_unambiguous", 2, None),
        ("free_group_unambiguous", 2, free_group_pairing(2)),
        ("free_group_ergodic", 2, None),
    ]
    import warnings
    for name, m, vm in jobs:
        a = catalog_automaton(name, m)
        dp = coefficients_dp(a, 25, var_map=vm)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # run counting on the ambiguous acceptor
            s = growth_series(a, vm)
        exp = series_coefficients(s, 25)
        assert dp.entries == exp.entries, name


def test_shell_sums_fibonacci_numbers():
    t = coefficients_dp(catalog_automaton("fibonacci"), 20)
    fib = [1, 1]
    while len(fib) < 25:
        fib.append(fib[-1] + fib[-2])
    for n in range(21):
        assert t.shell_total(n) == fib[n + 1]  # the (n+2)-th value, 1-indexed


def test_shell_sums_free_group():
    a = catalog_automaton("free_group_unambiguous", 2)
    t = coefficients_dp(a, 12, var_map=free_group_pairing(2))
    assert t.shell_total(0) == 1
    for n in range(1, 13):
        assert t.shell_total(n) == 4 * 3 ** (n - 1)


# ---------------------------------------------------------------------------
# concave growth

def test_cg_free_monoid_exact_constant_one():
    t = coefficients_dp(catalog_automaton("free_monoid", 2), 16)
    rep = check_cg(t, 0, 0, 8)
    assert rep.passed
    assert rep.c == Fraction(1)


def test_cg_fibonacci_passes_with_matching_radii():
    # radius a = 2b + N with connector length N = 1
    t = coefficients_dp(catalog_automaton("fibonacci"), 19)
    rep = check_cg(t, 3, 1, 8)
    assert rep.passed and rep.c > 0


def test_cg_fibonacci_tight_radii_fail_honestly():
    # with a = b = 1 the pair x = y = (0, 2) has positive factor masses but
    # an empty target ball, so the scan must report failure
    t = coefficients_dp(catalog_automaton("fibonacci"), 19)
    rep = check_cg(t, 1, 1, 8)
    assert not rep.passed and rep.c == 0


def test_cg_single_entry_table():
    t = coefficients_dp(catalog_automaton("free_monoid", 1), 0)
    rep = check_cg(t, 0, 0, 0)
    assert rep.passed and rep.pairs_tested == 1 and rep.c == 1


def test_cg_requires_enough_range():
    t = coefficients_dp(catalog_automaton("fibonacci"), 5)
    with pytest.raises(ValueError, match="complete to 5"):
        check_cg(t, 1, 1, 8)


def test_table_export_format():
    t = coefficients_dp(catalog_automaton("fibonacci"), 2)
    assert t.to_text().splitlines() == [
        "0,0,1", "1,0,1", "0,1,1", "2,0,1", "1,1,2",
    ]
