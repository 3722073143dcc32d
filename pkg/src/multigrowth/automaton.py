"""Finite automata over a finite alphabet.

An automaton here is a labeled directed multigraph with initial and final
state sets.  It is the combinatorial source of everything else in the
package: its transfer matrix yields the exact multivariate growth series,
its adjacency matrix feeds the spectral machinery, and the built-in catalog
provides the worked examples (golden-mean shift, free monoids, and the two
standard acceptors for freely reduced words of a free group).

Conventions:

* States and symbols are strings; declaration order is significant (it fixes
  matrix row/column order and variable order).  The initial state comes
  first in catalog constructions.
* ``deterministic`` means per-state determinism: no state has two outgoing
  transitions with the same symbol.  An automaton with several initial
  states can be per-state deterministic yet still recognize a word along
  several runs.
* ``vertex_labeled`` means every state has at least one incoming transition
  and all its incoming transitions carry one common symbol.  This is the
  gate for the state<->symbol identification used by the stochastic-map
  route in :mod:`multigrowth.spectral`.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class AutomatonError(ValueError):
    """Validation failure; the message carries the offending location."""


Transition = tuple[str, str, str]  # (source state, symbol, target state)


@dataclass(frozen=True)
class Automaton:
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    initial: tuple[str, ...]
    final: tuple[str, ...]
    deterministic: bool = field(init=False)
    vertex_labeled: bool = field(init=False)

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        states = tuple(self.states)
        transitions = tuple((str(a), str(b), str(c)) for a, b, c in self.transitions)
        initial = tuple(dict.fromkeys(self.initial))
        final = tuple(dict.fromkeys(self.final))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "final", final)

        if not alphabet:
            raise AutomatonError("alphabet: must be non-empty")
        if len(set(alphabet)) != len(alphabet):
            raise AutomatonError("alphabet: duplicate symbol")
        if not states:
            raise AutomatonError("states: must be non-empty")
        if len(set(states)) != len(states):
            raise AutomatonError("states: duplicate state")
        if not initial:
            raise AutomatonError("initial: must be non-empty")
        if not final:
            raise AutomatonError("final: must be non-empty")
        state_set = set(states)
        symbol_set = set(alphabet)
        for kind, names in (("initial", initial), ("final", final)):
            for s in names:
                if s not in state_set:
                    raise AutomatonError(f"{kind}: unknown state {s!r}")
        for k, (src, sym, dst) in enumerate(transitions):
            if src not in state_set:
                raise AutomatonError(f"transitions[{k}].from: unknown state {src!r}")
            if dst not in state_set:
                raise AutomatonError(f"transitions[{k}].to: unknown state {dst!r}")
            if sym not in symbol_set:
                raise AutomatonError(f"transitions[{k}].symbol: unknown symbol {sym!r}")

        seen: set[tuple[str, str]] = set()
        det = True
        for src, sym, _ in transitions:
            if (src, sym) in seen:
                det = False
                break
            seen.add((src, sym))
        object.__setattr__(self, "deterministic", det)

        incoming: dict[str, set[str]] = {s: set() for s in states}
        for _, sym, dst in transitions:
            incoming[dst].add(sym)
        vl = all(len(syms) == 1 for syms in incoming.values())
        object.__setattr__(self, "vertex_labeled", vl)

    # -- helpers -------------------------------------------------------------

    def state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    def symbol_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    def state_labels(self) -> dict[str, str]:
        """For a vertex-labeled automaton, the common incoming symbol per state."""
        if not self.vertex_labeled:
            raise AutomatonError("automaton is not vertex-labeled")
        lab: dict[str, str] = {}
        for _, sym, dst in self.transitions:
            lab[dst] = sym
        return lab

    def successors(self) -> dict[str, set[str]]:
        succ: dict[str, set[str]] = {s: set() for s in self.states}
        for src, _, dst in self.transitions:
            succ[src].add(dst)
        return succ

    def step(self) -> dict[tuple[str, str], str]:
        """Deterministic transition map (state, symbol) -> state."""
        if not self.deterministic:
            raise AutomatonError("automaton is not per-state deterministic")
        return {(src, sym): dst for src, sym, dst in self.transitions}

    def accepts(self, word: Sequence[str]) -> bool:
        current = set(self.initial)
        for sym in word:
            nxt = set()
            for src, s, dst in self.transitions:
                if s == sym and src in current:
                    nxt.add(dst)
            current = nxt
            if not current:
                return False
        return any(s in current for s in self.final)

    def trimmed(self) -> "Automaton":
        """Drop states that are unreachable from the initial set or dead
        (no final state reachable).  The accepted language is unchanged."""
        succ = self.successors()
        pred: dict[str, set[str]] = {s: set() for s in self.states}
        for src, _, dst in self.transitions:
            pred[dst].add(src)
        reach = _closure(self.initial, succ)
        coreach = _closure(self.final, pred)
        keep = [s for s in self.states if s in reach and s in coreach]
        if set(keep) == set(self.states):
            return self
        keep_set = set(keep)
        if not keep_set:
            raise AutomatonError("automaton accepts the empty language after trimming")
        return Automaton(
            alphabet=self.alphabet,
            states=tuple(keep),
            transitions=tuple(t for t in self.transitions
                              if t[0] in keep_set and t[2] in keep_set),
            initial=tuple(s for s in self.initial if s in keep_set),
            final=tuple(s for s in self.final if s in keep_set),
        )


def _closure(start: Iterable[str], edges: dict[str, set[str]]) -> set[str]:
    seen = set(start)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for t in edges[s]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Edge-multiplicity matrix of the transition digraph."""

    counts: tuple[tuple[int, ...], ...]
    states: tuple[str, ...]

    def __post_init__(self):
        n = len(self.states)
        if len(self.counts) != n or any(len(r) != n for r in self.counts):
            raise ValueError("adjacency dimensions must equal the number of states")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("adjacency entries must be non-negative")

    @property
    def n(self) -> int:
        return len(self.states)

    def to_numpy(self):
        import numpy as np
        return np.array(self.counts, dtype=float)

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(r) for r in self.counts)

    def is_zero_one(self) -> bool:
        return all(c in (0, 1) for row in self.counts for c in row)


# ---------------------------------------------------------------------------
# document loading

_DOCUMENT_KEYS = {"alphabet", "states", "initial", "final", "transitions"}
_TRANSITION_KEYS = {"from", "symbol", "to"}


def load_automaton(text: str) -> Automaton:
    """Parse and validate the JSON automaton document.

    Schema: object with exactly the keys "alphabet", "states", "initial",
    "final" (lists of strings) and "transitions" (list of objects with
    exactly the keys "from", "symbol", "to").  Unknown keys are rejected.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AutomatonError(f"document: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise AutomatonError("document: top level must be an object")
    unknown = set(doc) - _DOCUMENT_KEYS
    if unknown:
        raise AutomatonError(f"document: unknown key {sorted(unknown)[0]!r}")
    missing = _DOCUMENT_KEYS - set(doc)
    if missing:
        raise AutomatonError(f"document: missing key {sorted(missing)[0]!r}")
    for key in ("alphabet", "states", "initial", "final"):
        val = doc[key]
        if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
            raise AutomatonError(f"{key}: must be a list of strings")
    if not isinstance(doc["transitions"], list):
        raise AutomatonError("transitions: must be a list")
    transitions = []
    for k, t in enumerate(doc["transitions"]):
        if not isinstance(t, dict):
            raise AutomatonError(f"transitions[{k}]: must be an object")
        unknown = set(t) - _TRANSITION_KEYS
        if unknown:
            raise AutomatonError(f"transitions[{k}]: unknown key {sorted(unknown)[0]!r}")
        missing = _TRANSITION_KEYS - set(t)
        if missing:
            raise AutomatonError(f"transitions[{k}]: missing key {sorted(missing)[0]!r}")
        if not all(isinstance(t[f], str) for f in _TRANSITION_KEYS):
            raise AutomatonError(f"transitions[{k}]: fields must be strings")
        transitions.append((t["from"], t["symbol"], t["to"]))
    return Automaton(
        alphabet=tuple(doc["alphabet"]),
        states=tuple(doc["states"]),
        transitions=tuple(transitions),
        initial=tuple(doc["initial"]),
        final=tuple(doc["final"]),
    )


def dump_automaton(a: Automaton) -> str:
    doc = {
        "alphabet": list(a.alphabet),
        "states": list(a.states),
        "initial": list(a.initial),
        "final": list(a.final),
        "transitions": [{"from": s, "symbol": sym, "to": t} for s, sym, t in a.transitions],
    }
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# subshift-of-finite-type construction

def build_sft_automaton(alphabet: Sequence[str], forbidden: Iterable) -> Automaton:
    """Deterministic acceptor of all words containing no forbidden factor.

    States are the proper prefixes of the forbidden words that are reachable
    as longest suffixes (the classical factor-avoidance construction); every
    surviving state is final and the empty prefix is the single initial
    state.  A transition that would complete a forbidden word is simply
    absent, so the automaton is partial but has no dead state.
    """
    alphabet = tuple(alphabet)
    if not alphabet:
        raise AutomatonError("alphabet: must be non-empty")
    symbol_set = set(alphabet)
    words: list[tuple[str, ...]] = []
    for k, w in enumerate(forbidden):
        if isinstance(w, str):
            if all(len(s) == 1 for s in alphabet):
                parts = tuple(w)
            else:
                raise AutomatonError(
                    f"forbidden[{k}]: pass a sequence of symbols when symbols are not single characters")
        else:
            parts = tuple(str(s) for s in w)
        if not parts:
            raise AutomatonError(f"forbidden[{k}]: empty forbidden word")
        for s in parts:
            if s not in symbol_set:
                raise AutomatonError(f"forbidden[{k}]: unknown symbol {s!r}")
        words.append(parts)
    if not words:
        raise AutomatonError("forbidden: must be non-empty")

    prefixes = {()}
    for w in words:
        for i in range(1, len(w)):
            prefixes.add(w[:i])
    forbidden_set = set(words)

    def longest_suffix_state(seq: tuple[str, ...]) -> tuple[str, ...] | None:
        # None marks "a forbidden word just completed"
        for i in range(len(seq)):
            if seq[i:] in forbidden_set:
                return None
        for i in range(len(seq)):
            if seq[i:] in prefixes:
                return seq[i:]
        return ()

    def name(p: tuple[str, ...]) -> str:
        return "".join(p) if p else "_"

    reachable: list[tuple[str, ...]] = [()]
    seen = {()}
    transitions: list[Transition] = []
    i = 0
    while i < len(reachable):
        p = reachable[i]
        i += 1
        for s in alphabet:
            nxt = longest_suffix_state(p + (s,))
            if nxt is None:
                continue
            transitions.append((name(p), s, name(nxt)))
            if nxt not in seen:
                seen.add(nxt)
                reachable.append(nxt)

    states = tuple(name(p) for p in reachable)
    return Automaton(
        alphabet=alphabet,
        states=states,
        transitions=tuple(transitions),
        initial=(name(()),),
        final=states,
    )


# ---------------------------------------------------------------------------
# catalog

def catalog_automaton(name: str, m: int | None = None) -> Automaton:
    """The named example automaton.

    * ``fibonacci``: two states, golden-mean shift acceptor over {a, b}.
    * ``free_monoid``: one state with d loops (pass d as ``m``).
    * ``free_group_unambiguous``: 2m+1 states, single initial state, all
      final; accepts freely reduced words with a unique run per word.
    * ``free_group_ergodic``: 2m states, all initial and final, strongly
      connected; recognizes the same language but a word of length n >= 1
      has 2m-1 accepting runs.
    """
    if name == "fibonacci":
        return Automaton(
            alphabet=("a", "b"),
            states=("s1", "s2"),
            transitions=(("s1", "a", "s1"), ("s1", "b", "s2"), ("s2", "a", "s1")),
            initial=("s1",),
            final=("s1", "s2"),
        )
    if name == "free_monoid":
        d = 1 if m is None else int(m)
        if d < 1:
            raise AutomatonError("free_monoid: need d >= 1")
        symbols = tuple(f"a{i + 1}" for i in range(d))
        return Automaton(
            alphabet=symbols,
            states=("q0",),
            transitions=tuple(("q0", s, "q0") for s in symbols),
            initial=("q0",),
            final=("q0",),
        )
    if name in ("free_group_unambiguous", "free_group_ergodic"):
        if m is None or int(m) < 2:
            raise AutomatonError(f"{name}: need rank m >= 2")
        m = int(m)
        gens = [f"a{i + 1}" for i in range(m)]
        invs = [f"A{i + 1}" for i in range(m)]
        symbols = tuple(gens + invs)
        inverse = {**{g: v for g, v in zip(gens, invs)},
                   **{v: g for g, v in zip(gens, invs)}}
        # letter-state per symbol; allowed step x -> y unless y is the inverse of x
        letter_states = list(symbols)
        transitions = []
        for x in letter_states:
            for y in symbols:
                if y != inverse[x]:
                    transitions.append((x, y, y))
        if name == "free_group_ergodic":
            return Automaton(
                alphabet=symbols,
                states=tuple(letter_states),
                transitions=tuple(transitions),
                initial=tuple(letter_states),
                final=tuple(letter_states),
            )
        start = "s0"
        transitions = [(start, y, y) for y in symbols] + transitions
        return Automaton(
            alphabet=symbols,
            states=(start, *letter_states),
            transitions=tuple(transitions),
            initial=(start,),
            final=(start, *letter_states),
        )
    raise AutomatonError(f"unknown catalog automaton {name!r}")


def free_group_pairing(m: int) -> dict[str, int]:
    """Symbol -> variable map identifying each generator with its inverse."""
    pairing = {}
    for i in range(m):
        pairing[f"a{i + 1}"] = i
        pairing[f"A{i + 1}"] = i
    return pairing


# ---------------------------------------------------------------------------
# analysis

def adjacency(a: Automaton) -> AdjacencyMatrix:
    idx = a.state_index()
    n = len(a.states)
    counts = [[0] * n for _ in range(n)]
    for src, _, dst in a.transitions:
        counts[idx[src]][idx[dst]] += 1
    return AdjacencyMatrix(tuple(tuple(r) for r in counts), a.states)


def is_ergodic(a: Automaton) -> bool:
    """True iff the transition digraph is strongly connected."""
    succ = a.successors()
    pred: dict[str, set[str]] = {s: set() for s in a.states}
    for src, _, dst in a.transitions:
        pred[dst].add(src)
    root = a.states[0]
    return (_closure([root], succ) == set(a.states)
            and _closure([root], pred) == set(a.states))


def find_e_witness(a: Automaton, max_n: int, sample_len: int = 8) -> int | None:
    """Bounded search for a connector-length certificate.

    For every final state s reachable along an accepting run and every set
    of states that can accept some continuation word V of length at most
    ``sample_len`` (with V itself in the language), the search measures the
    shortest word leading from s into that acceptance set.  The returned N
    is the worst such distance; ``None`` when some pair needs more than
    ``max_n`` letters.  This certifies quasi-concatenability for languages
    of unambiguous automata at desk scale; it is not a decision procedure.
    """
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    step = a.step()
    states = list(a.states)

    # acceptance sets of continuation words of length <= sample_len
    acc = frozenset(a.final)
    acc_sets = {acc}
    frontier = [acc]
    for _ in range(sample_len):
        new = []
        for S in frontier:
            for sym in a.alphabet:
                pre = frozenset(q for q in states if step.get((q, sym)) in S)
                if pre and pre not in acc_sets:
                    acc_sets.add(pre)
                    new.append(pre)
        if not new:
            break
        frontier = new
    initial_set = set(a.initial)
    targets = [S for S in acc_sets if S & initial_set]
    if not targets:
        return 0

    succ = a.successors()
    reach = _closure(a.initial, succ)
    sources = [s for s in a.final if s in reach]

    worst = 0
    for s in sources:
        dist = {s: 0}
        queue = [s]
        while queue:
            nxt = []
            for q in queue:
                for t in succ[q]:
                    if t not in dist:
                        dist[t] = dist[q] + 1
                        nxt.append(t)
            queue = nxt
        for S in targets:
            best = min((dist[q] for q in S if q in dist), default=None)
            if best is None or best > max_n:
                return None
            worst = max(worst, best)
    return worst


def warn_if_ambiguous_counting(a: Automaton) -> None:
    """Series coefficients count accepting runs; warn when that may exceed
    the word count (several initial states without a known-unambiguous
    structure)."""
    if len(a.initial) > 1:
        warnings.warn(
            "automaton has several initial states; series coefficients count "
            "accepting runs, which can exceed the number of distinct words",
            stacklevel=3,
        )
