"""Multivariate growth series of an automaton and its coefficient tables.

Two independent routes to the same numbers:

* ``growth_series`` runs the transfer-matrix method: replace each edge by
  the variable of its label, invert ``I - A(z)`` by Cramer's rule, and read
  off an exact rational function.  ``series_coefficients`` then expands it
  by the linear recurrence its denominator induces.
* ``coefficients_dp`` never touches polynomials: it counts accepting runs
  by frequency vector with a layered dynamic program, either in exact
  big-integer arithmetic or in the log domain.

Counting semantics: coefficients count accepting *runs*.  For a per-state
deterministic automaton with a single initial state this equals the number
of accepted words; with several initial states it can overcount (a warning
is emitted).  The empty word contributes iff an initial state is final.

A point where this artifact deliberately diverges from the usual
rational-direction convention: lattice points the language never realizes
are simply absent from the table (count 0) rather than being assigned a
placeholder count of 1, and the empirical growth estimator skips them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from .automaton import Automaton, warn_if_ambiguous_counting
from .polyalg import MultiPoly, PolyMatrix, RationalSeries

EXACT = "exact"
LOG_DOMAIN = "log_domain"


def _variable_map(a: Automaton, var_map: Mapping[str, int] | None) -> tuple[dict[str, int], int]:
    if var_map is None:
        return a.symbol_index(), len(a.alphabet)
    vm = dict(var_map)
    missing = [s for s in a.alphabet if s not in vm]
    if missing:
        raise ValueError(f"variable map misses symbol {missing[0]!r}")
    d = max(vm.values()) + 1
    if set(vm.values()) != set(range(d)):
        raise ValueError("variable map images must be 0..d-1 without gaps")
    return vm, d


def transfer_matrix(a: Automaton, var_map: Mapping[str, int] | None = None) -> PolyMatrix:
    """Entry (s, t) is the sum of the variables of the labels of edges s->t."""
    vm, d = _variable_map(a, var_map)
    idx = a.state_index()
    n = len(a.states)
    rows = [[MultiPoly.zero(d) for _ in range(n)] for _ in range(n)]
    for src, sym, dst in a.transitions:
        i, j = idx[src], idx[dst]
        rows[i][j] = rows[i][j] + MultiPoly.variable(d, vm[sym])
    return PolyMatrix(rows)


def growth_series(a: Automaton, var_map: Mapping[str, int] | None = None,
                  cancel: bool = True) -> RationalSeries:
    """Exact rational growth series of the accepting runs of ``a``.

    Dead and unreachable states are pruned first (they change the matrix but
    not the language).  The numerator is the signed-minor sum of Cramer's
    rule over initial/final pairs, the denominator is det(I - A(z)); common
    binomial factors 1 +- z_i are divided out when ``cancel`` is set.
    """
    warn_if_ambiguous_counting(a)
    a = a.trimmed()
    vm, d = _variable_map(a, var_map)
    az = transfer_matrix(a, vm)
    m = PolyMatrix.identity(len(a.states), d) - az
    denom = m.det()
    idx = a.state_index()
    numer = MultiPoly.zero(d)
    for s in a.initial:
        for f in a.final:
            i, j = idx[s], idx[f]
            term = m.minor(j, i)
            if (i + j) % 2:
                term = -term
            numer = numer + term
    series = RationalSeries(numer, denom)
    if cancel:
        series = series.cancel_binomial_factors()
    return series


# ---------------------------------------------------------------------------
# coefficient tables

@dataclass
class CoefficientTable:
    """Counts per frequency vector, complete up to total degree ``max_total``.

    ``entries`` stores only realized vectors: big integers in exact mode,
    natural-log counts in log-domain mode (absent always means count 0).
    """

    d: int
    mode: str
    entries: dict[tuple, object]
    max_total: int

    def __post_init__(self):
        if self.mode not in (EXACT, LOG_DOMAIN):
            raise ValueError(f"unknown mode {self.mode!r}")

    def count(self, vec: Sequence[int]):
        """Count at a vector: integer (exact mode) or log count (-inf if absent)."""
        v = self.entries.get(tuple(vec))
        if self.mode == EXACT:
            return v if v is not None else 0
        return v if v is not None else float("-inf")

    def shell(self, n: int) -> Iterator[tuple[tuple, object]]:
        for vec, c in self.entries.items():
            if sum(vec) == n:
                yield vec, c

    def shell_total(self, n: int):
        """Sum of counts on the shell of total degree n (exact mode only)."""
        if self.mode != EXACT:
            raise ValueError("shell_total needs an exact table")
        return sum(c for _, c in self.shell(n))

    def to_log(self) -> "CoefficientTable":
        if self.mode == LOG_DOMAIN:
            return self
        return CoefficientTable(
            self.d, LOG_DOMAIN,
            {vec: _log_of_int(c) for vec, c in self.entries.items() if c > 0},
            self.max_total,
        )

    def to_text(self) -> str:
        key = lambda item: (sum(item[0]), tuple(-x for x in item[0]))
        lines = []
        for vec, c in sorted(self.entries.items(), key=key):
            val = str(c) if self.mode == EXACT else f"{c:.12g}"
            lines.append(",".join(str(x) for x in vec) + f",{val}")
        return "\n".join(lines) + ("\n" if lines else "")


def _log_of_int(n: int) -> float:
    # math.log accepts arbitrarily large ints
    return math.log(n)


def coefficients_dp(a: Automaton, max_total: int, mode: str = EXACT,
                    var_map: Mapping[str, int] | None = None) -> CoefficientTable:
    """Count accepting runs by frequency vector with a layered forward DP.

    The DP state is (automaton state, frequency vector); layers are indexed
    by total degree and only two layers are alive at a time, so log-domain
    tables to total degree ~500 stay cheap.
    """
    if max_total < 0:
        raise ValueError("max_total must be >= 0")
    if mode not in (EXACT, LOG_DOMAIN):
        raise ValueError(f"unknown mode {mode!r}")
    a = a.trimmed()
    vm, d = _variable_map(a, var_map)
    idx = a.state_index()
    nstates = len(a.states)
    out_edges: list[list[tuple[int, int]]] = [[] for _ in range(nstates)]  # (var, target)
    for src, sym, dst in a.transitions:
        out_edges[idx[src]].append((vm[sym], idx[dst]))
    final_idx = [idx[s] for s in a.final]

    exact = mode == EXACT
    zero_vec = (0,) * d
    init_val = 1 if exact else 0.0
    layer: dict[tuple, list] = {zero_vec: [None] * nstates}
    for s in a.initial:
        j = idx[s]
        cur = layer[zero_vec][j]
        layer[zero_vec][j] = init_val if cur is None else _acc(cur, init_val, exact)

    entries: dict[tuple, object] = {}

    def flush(layer_now: dict[tuple, list]) -> None:
        for vec, per_state in layer_now.items():
            vals = [per_state[j] for j in final_idx if per_state[j] is not None]
            if not vals:
                continue
            total = vals[0]
            for v in vals[1:]:
                total = _acc(total, v, exact)
            entries[vec] = total

    flush(layer)
    for _ in range(max_total):
        nxt: dict[tuple, list] = {}
        for vec, per_state in layer.items():
            for j, val in enumerate(per_state):
                if val is None:
                    continue
                for var, tgt in out_edges[j]:
                    nvec = list(vec)
                    nvec[var] += 1
                    nvec = tuple(nvec)
                    row = nxt.get(nvec)
                    if row is None:
                        row = [None] * nstates
                        nxt[nvec] = row
                    cur = row[tgt]
                    row[tgt] = val if cur is None else _acc(cur, val, exact)
        layer = nxt
        flush(layer)
        if not layer:
            break
    return CoefficientTable(d, mode, entries, max_total)


def _acc(x, y, exact: bool):
    if exact:
        return x + y
    return np.logaddexp(x, y)


def _vectors_of_total(d: int, n: int) -> Iterator[tuple]:
    if d == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _vectors_of_total(d - 1, n - first):
            yield (first,) + rest


def series_coefficients(series: RationalSeries, max_total: int) -> CoefficientTable:
    """Expand G/H as a power series by the recurrence the denominator induces.

    Requires H(0) = 1 after normalization, so the recurrence
    ``gamma_i = g_i - sum_{k != 0} h_k gamma_{i-k}`` stays in the integers.
    """
    if max_total < 0:
        raise ValueError("max_total must be >= 0")
    h0 = series.denom.constant_term
    if h0 == 0:
        raise ValueError("denominator vanishes at 0; no power-series expansion")
    if h0 != 1:
        raise ValueError("denominator constant term must normalize to 1 for integer expansion")
    d = series.nvars
    g = series.numer.terms
    h_rest = [(e, c) for e, c in series.denom.terms.items() if any(e)]
    gamma: dict[tuple, int] = {}
    for n in range(max_total + 1):
        for vec in _vectors_of_total(d, n):
            val = g.get(vec, 0)
            for e, c in h_rest:
                prev = tuple(a - b for a, b in zip(vec, e))
                if any(x < 0 for x in prev):
                    continue
                pv = gamma.get(prev)
                if pv:
                    val -= c * pv
            if val:
                gamma[vec] = val
    return CoefficientTable(d, EXACT, gamma, max_total)


# ---------------------------------------------------------------------------
# concave-growth check

@dataclass
class CGReport:
    """Outcome of the brute-force concave-growth inequality scan."""

    a: int
    b: int
    c: Fraction
    pairs_tested: int
    worst_ratio: Fraction
    passed: bool


def _ball_offsets(d: int, radius: int) -> list[tuple]:
    out = []

    def rec(prefix: list[int], left: int, i: int):
        if i == d:
            out.append(tuple(prefix))
            return
        for v in range(-left, left + 1):
            prefix.append(v)
            rec(prefix, left - abs(v), i + 1)
            prefix.pop()

    rec([], radius, 0)
    return out


def check_cg(table: CoefficientTable, a: int, b: int, search_range: int) -> CGReport:
    """Scan nu(B_{x+y}(a)) >= c nu(B_x(b)) nu(B_y(b)) over a lattice window.

    Balls use the l1 norm.  Centers x, y run over the non-negative lattice
    with total degree at most ``search_range``; pairs where either factor
    ball is empty are skipped.  The report's c is the worst observed ratio,
    exact as a Fraction.
    """
    if table.mode != EXACT:
        raise ValueError("check_cg needs an exact table")
    if 2 * search_range + a > table.max_total:
        raise ValueError(
            f"table complete to {table.max_total} but the scan needs {2 * search_range + a}")
    d = table.d
    off_a = _ball_offsets(d, a)
    off_b = _ball_offsets(d, b)

    def ball(center: tuple, offsets: list[tuple]) -> int:
        total = 0
        for delta in offsets:
            pt = tuple(c + x for c, x in zip(center, delta))
            if all(v >= 0 for v in pt):
                total += table.entries.get(pt, 0)
        return total

    centers = [v for n in range(search_range + 1) for v in _vectors_of_total(d, n)]
    mass_b = {x: ball(x, off_b) for x in centers}
    worst: Fraction | None = None
    pairs = 0
    for x in centers:
        mx = mass_b[x]
        if mx == 0:
            continue
        for y in centers:
            my = mass_b[y]
            if my == 0:
                continue
            pairs += 1
            top = ball(tuple(p + q for p, q in zip(x, y)), off_a)
            ratio = Fraction(top, mx * my)
            if worst is None or ratio < worst:
                worst = ratio
    if worst is None:
        worst = Fraction(0)
    return CGReport(a=a, b=b, c=worst, pairs_tested=pairs,
                    worst_ratio=worst, passed=pairs > 0 and worst > 0)
