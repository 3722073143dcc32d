"""Wiring between language names and the routes that compute their data.

A ``Language`` bundles everything the command-line tool and the test suites
need for one named language: the counting automaton (with its symbol ->
variable map when letters are graded in pairs), the rational series and its
denominator when the boundary route applies, the closed form when one
exists, and the vertex-labeled automaton plus direction pull-back for the
stochastic-map route.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from . import catalog as _catalog
from ._variety import check_boundary_poly
from .automaton import Automaton, catalog_automaton, free_group_pairing, load_automaton
from .indicatrice import (Direction, ExtendedValue, as_direction, psi_boundary,
                          psi_closed_form, psi_empirical, psi_tmap)
from .polyalg import MultiPoly, RationalSeries
from .series import EXACT, CoefficientTable, coefficients_dp, growth_series

METHODS = ("boundary", "tmap", "empirical", "closed_form")


class MethodUnavailable(ValueError):
    """The requested psi route does not apply to this language."""


@dataclass
class Language:
    name: str
    d: int
    automaton: Automaton | None = None
    var_map: Mapping[str, int] | None = None
    series: RationalSeries | None = None
    closed_name: str | None = None
    closed_eval: Callable[[Direction], ExtendedValue] | None = None
    tmap_automaton: Automaton | None = None
    tmap_pull: Callable[[tuple], tuple] | None = None

    @property
    def denominator(self) -> MultiPoly | None:
        return self.series.denom if self.series is not None else None

    def _boundary_ready(self) -> bool:
        if self.series is None:
            return False
        try:
            check_boundary_poly(self.series.denom)
        except ValueError:
            return False
        return True

    def methods(self) -> list[str]:
        out = []
        if self._boundary_ready():
            out.append("boundary")
        if self.tmap_automaton is not None:
            out.append("tmap")
        if self.automaton is not None:
            out.append("empirical")
        if self.closed_name or self.closed_eval:
            out.append("closed_form")
        return out

    def table(self, max_total: int, mode: str = EXACT) -> CoefficientTable:
        if self.automaton is None:
            raise MethodUnavailable(f"{self.name}: no counting automaton")
        return coefficients_dp(self.automaton, max_total, mode, self.var_map)

    def psi(self, r, method: str, table: CoefficientTable | None = None,
            cone_eps: float = 0.05, tol: float = 1e-10) -> ExtendedValue | float:
        r = as_direction(r)
        if method == "boundary":
            if not self._boundary_ready():
                raise MethodUnavailable(f"{self.name}: no denominator for the boundary route")
            return psi_boundary(self.series.denom, r, tol)
        if method == "tmap":
            if self.tmap_automaton is None:
                raise MethodUnavailable(f"{self.name}: no vertex-labeled chain for the "
                                        "stochastic-map route")
            pulled = self.tmap_pull(r.r) if self.tmap_pull else r.r
            return psi_tmap(self.tmap_automaton, Direction(tuple(pulled)), tol)
        if method == "empirical":
            if table is None:
                raise ValueError("empirical route needs a coefficient table")
            return psi_empirical(table, r, cone_eps)
        if method == "closed_form":
            if self.closed_eval is not None:
                return self.closed_eval(r)
            if self.closed_name is not None:
                return psi_closed_form(self.closed_name, r)
            raise MethodUnavailable(f"{self.name}: no closed form")
        raise ValueError(f"unknown method {method!r}")


def _halved(r: tuple) -> tuple:
    return tuple(x / 2 for x in r) + tuple(x / 2 for x in r)


def get_language(name: str, m: int | None = None, paired: bool = False) -> Language:
    if name == "fibonacci":
        a = catalog_automaton("fibonacci")
        return Language(
            name=name, d=2, automaton=a, series=growth_series(a),
            closed_name="fibonacci", tmap_automaton=a,
        )
    if name == "free_monoid":
        d = 2 if m is None else int(m)
        a = catalog_automaton("free_monoid", d)
        lang = Language(
            name=name, d=d, automaton=a, series=growth_series(a),
            closed_name="free_monoid",
        )
        if d == 1:
            lang.tmap_automaton = a
        return lang
    if name == "free_group_unambiguous":
        rank = 2 if m is None else int(m)
        a = catalog_automaton("free_group_unambiguous", rank)
        if paired:
            vm = free_group_pairing(rank)
            lang = Language(name=name, d=rank, automaton=a, var_map=vm,
                            series=growth_series(a, vm))
            if rank == 2:
                lang.closed_name = "f2_delta"
            if rank == 3:
                lang.closed_eval = _catalog.psi_f3
            lang.tmap_automaton = catalog_automaton("free_group_ergodic", rank)
            lang.tmap_pull = _halved
            return lang
        return Language(name=name, d=2 * rank, automaton=a, series=growth_series(a))
    if name == "free_group_ergodic":
        rank = 2 if m is None else int(m)
        a = catalog_automaton("free_group_ergodic", rank)
        return Language(name=name, d=2 * rank, automaton=a, tmap_automaton=a)
    if name == "f2_delta":
        lang = get_language("free_group_unambiguous", 2, paired=True)
        lang.name = "f2_delta"
        lang.series = _catalog.delta_free_group(2)
        return lang
    if name == "f3_delta":
        lang = get_language("free_group_unambiguous", 3, paired=True)
        lang.name = "f3_delta"
        lang.series = _catalog.delta_free_group(3)
        return lang
    raise ValueError(f"unknown language {name!r}")


def language_from_file(path: str) -> Language:
    with open(path, "r", encoding="utf-8") as fh:
        a = load_automaton(fh.read())
    lang = Language(name=path, d=len(a.alphabet), automaton=a,
                    series=growth_series(a))
    if a.vertex_labeled:
        from .automaton import adjacency, is_ergodic
        if is_ergodic(a) and adjacency(a).is_zero_one():
            labels = a.state_labels()
            if sorted(labels[s] for s in a.states) == sorted(a.alphabet):
                lang.tmap_automaton = a
    return lang
