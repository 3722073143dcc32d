"""Automaton construction, validation, catalog shapes, condition (E)."""

import json

import numpy as np
import pytest

from multigrowth.automaton import (Automaton, AutomatonError, adjacency,
                                   build_sft_automaton, catalog_automaton,
                                   dump_automaton, find_e_witness, is_ergodic,
                                   load_automaton)

FIBONACCI_DOC = json.dumps({
    "alphabet": ["a", "b"],
    "states": ["s1", "s2"],
    "initial": ["s1"],
    "final": ["s1", "s2"],
    "transitions": [
        {"from": "s1", "symbol": "a", "to": "s1"},
        {"from": "s1", "symbol": "b", "to": "s2"},
        {"from": "s2", "symbol": "a", "to": "s1"},
    ],
})


# ---------------------------------------------------------------------------
# loading

def test_load_fibonacci_document():
    a = load_automaton(FIBONACCI_DOC)
    assert len(a.states) == 2 and len(a.transitions) == 3
    assert a.deterministic and a.vertex_labeled


def test_load_rejects_unknown_state():
    doc = json.loads(FIBONACCI_DOC)
    doc["transitions"].append({"from": "s1", "symbol": "a", "to": "s9"})
    with pytest.raises(AutomatonError, match=r"transitions\[3\].to: unknown state"):
        load_automaton(json.dumps(doc))


def test_load_rejects_unknown_symbol():
    doc = json.loads(FIBONACCI_DOC)
    doc["transitions"][0]["symbol"] = "c"
    with pytest.raises(AutomatonError, match="unknown symbol 'c'"):
        load_automaton(json.dumps(doc))


def test_load_rejects_unknown_key():
    doc = json.loads(FIBONACCI_DOC)
    doc["color"] = "blue"
    with pytest.raises(AutomatonError, match="unknown key 'color'"):
        load_automaton(json.dumps(doc))


def test_load_rejects_empty_alphabet():
    doc = json.loads(FIBONACCI_DOC)
    doc["alphabet"] = []
    doc["transitions"] = []
    with pytest.raises(AutomatonError, match="alphabet"):
        load_automaton(json.dumps(doc))


def test_load_rejects_empty_initial_and_final():
    for key in ("initial", "final"):
        doc = json.loads(FIBONACCI_DOC)
        doc[key] = []
        with pytest.raises(AutomatonError, match=key):
            load_automaton(json.dumps(doc))


def test_load_rejects_bad_json():
    with pytest.raises(AutomatonError, match="invalid JSON"):
        load_automaton("{nope")


def test_load_ergodic_rank2_document():
    a = catalog_automaton("free_group_ergodic", 2)
    text = dump_automaton(a)
    b = load_automaton(text)
    assert len(b.states) == 4 and len(b.transitions) == 12
    assert len(b.initial) == 4
    assert b.deterministic  # per-state determinism holds despite ambiguity
    assert b.vertex_labeled


# ---------------------------------------------------------------------------
# forbidden-factor construction

def test_sft_golden_mean_matches_fibonacci():
    a = build_sft_automaton(["0", "1"], ["11"])
    assert len(a.states) == 2
    assert adjacency(a).counts == ((1, 1), (1, 0))
    assert a.deterministic
    assert set(a.final) == set(a.states)


def test_sft_reduced_words_rank2():
    a = build_sft_automaton(["a", "A", "b", "B"], ["aA", "Aa", "bB", "Bb"])
    assert len(a.states) == 5
    # same language as the one-initial-state acceptor: spot-check words
    assert a.accepts("abab")
    assert a.accepts("")
    assert not a.accepts("abBa")
    assert not a.accepts("aA")


def test_sft_rejects_empty_word():
    with pytest.raises(AutomatonError, match="empty forbidden word"):
        build_sft_automaton(["0", "1"], [""])


def test_sft_rejects_unknown_symbol():
    with pytest.raises(AutomatonError, match="unknown symbol"):
        build_sft_automaton(["0", "1"], ["12"])


# ---------------------------------------------------------------------------
# catalog

def test_catalog_unambiguous_shape():
    a = catalog_automaton("free_group_unambiguous", 2)
    assert len(a.states) == 5
    assert a.initial == ("s0",)
    assert set(a.final) == set(a.states)
    assert a.deterministic
    assert not is_ergodic(a)  # the start state has no incoming edge
    assert not a.vertex_labeled


def test_catalog_ergodic_shape():
    a = catalog_automaton("free_group_ergodic", 2)
    assert len(a.states) == 4
    assert set(a.initial) == set(a.states)
    assert is_ergodic(a)
    assert a.vertex_labeled


def test_catalog_free_monoid():
    a = catalog_automaton("free_monoid", 2)
    assert len(a.states) == 1 and len(a.transitions) == 2
    assert adjacency(a).counts == ((2,),)


def test_catalog_rejects_small_rank():
    with pytest.raises(AutomatonError):
        catalog_automaton("free_group_ergodic", 1)


# ---------------------------------------------------------------------------
# adjacency

def test_adjacency_fibonacci():
    assert adjacency(catalog_automaton("fibonacci")).counts == ((1, 1), (1, 0))


def test_adjacency_ergodic_block_structure():
    a = adjacency(catalog_automaton("free_group_ergodic", 2))
    m = np.array(a.counts)
    jj = np.ones((2, 2), dtype=int)
    kk = jj - np.eye(2, dtype=int)
    assert (m == np.block([[jj, kk], [kk, jj]])).all()


def test_adjacency_free_monoid_1():
    assert adjacency(catalog_automaton("free_monoid", 1)).counts == ((1,),)


def test_adjacency_row_sums_are_out_degrees():
    for name, m in (("fibonacci", None), ("free_group_unambiguous", 2),
                    ("free_group_ergodic", 2), ("free_monoid", 3)):
        a = catalog_automaton(name, m)
        adj = adjacency(a)
        out = {s: 0 for s in a.states}
        for src, _, _ in a.transitions:
            out[src] += 1
        assert adj.row_sums() == tuple(out[s] for s in a.states)


def test_complete_deterministic_rows_sum_to_alphabet_size():
    a = catalog_automaton("free_monoid", 3)
    assert set(adjacency(a).row_sums()) == {3}


# ---------------------------------------------------------------------------
# ergodicity

def _ergodic_bruteforce(a: Automaton) -> bool:
    m = np.array(adjacency(a).counts)
    n = m.shape[0]
    acc = np.zeros_like(m)
    power = np.eye(n, dtype=int)
    for _ in range(n):
        power = power @ m
        acc = acc + power
    return bool((acc > 0).all())


def test_is_ergodic_examples():
    assert is_ergodic(catalog_automaton("free_group_ergodic", 2))
    assert not is_ergodic(catalog_automaton("free_group_unambiguous", 2))
    assert is_ergodic(catalog_automaton("free_monoid", 1))


def test_is_ergodic_matches_reachability_matrix():
    for name, m in (("fibonacci", None), ("free_monoid", 1), ("free_monoid", 2),
                    ("free_group_unambiguous", 2), ("free_group_ergodic", 2),
                    ("free_group_ergodic", 3)):
        a = catalog_automaton(name, m)
        assert is_ergodic(a) == _ergodic_bruteforce(a)


# ---------------------------------------------------------------------------
# condition (E) witness

def test_e_witness_fibonacci():
    assert find_e_witness(catalog_automaton("fibonacci"), 2) == 1


def test_e_witness_free_monoid():
    assert find_e_witness(catalog_automaton("free_monoid", 2), 0) == 0


def test_e_witness_unambiguous_rank2():
    n = find_e_witness(catalog_automaton("free_group_unambiguous", 2), 2)
    assert n is not None and n <= 2


def test_e_witness_semantic_crosscheck():
    # every pair of short accepted words admits a connector of the found length
    a = catalog_automaton("fibonacci")
    n = find_e_witness(a, 2)
    from itertools import product
    words = [w for k in range(5) for w in product("ab", repeat=k)
             if a.accepts(w)]
    connectors = [w for k in range(n + 1) for w in product("ab", repeat=k)]
    for u in words:
        for v in words:
            assert any(a.accepts(u + w + v) for w in connectors)


def test_trim_drops_dead_states():
    a = Automaton(
        alphabet=("a",),
        states=("s", "dead"),
        transitions=(("s", "a", "s"), ("s", "a", "dead")),
        initial=("s",),
        final=("s",),
    )
    assert not a.deterministic  # two a-transitions out of s
    t = a.trimmed()
    assert t.states == ("s",)
    assert len(t.transitions) == 1
