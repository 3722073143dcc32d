"""Directional growth rate psi(r) of a coefficient array, four ways.

For a direction r in the probability simplex, psi(r) is the exponential
growth rate of the coefficients along r.  The module computes it by

* ``psi_boundary``   -- minimizing the linear height <r, theta> over the
  positive boundary surface {H(e^{-theta}) = 0} of the series' convergence
  domain (Lagrange system solved by damped Newton on top of a monotone
  graph parameterization);
* ``psi_tmap``       -- minimizing -sum r_j log s_j over the image of the
  interior simplex under the stochastic map s = T(q) attached to a
  vertex-labeled ergodic {0,1} automaton;
* ``psi_empirical``  -- reading shell sums of an actual coefficient table
  inside a narrow cone around r;
* ``psi_closed_form``-- the catalog closed forms (Shannon entropy for the
  full shift, the golden-mean piecewise form with its -infinity region, and
  the rank-two free-group form).

Values live in R union {-infinity}; -infinity is only ever reported after a
certified divergence (see :mod:`multigrowth._variety`), never on a hunch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import _variety
from .automaton import Automaton, adjacency, is_ergodic
from .polyalg import MultiPoly
from .series import CoefficientTable, EXACT
from .spectral import perron

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Direction:
    """A point of the probability simplex."""

    r: tuple[float, ...]

    def __post_init__(self):
        r = tuple(float(x) for x in self.r)
        object.__setattr__(self, "r", r)
        if not r:
            raise ValueError("direction must be non-empty")
        if any(x < 0 for x in r):
            raise ValueError("direction entries must be non-negative")
        if abs(math.fsum(r) - 1.0) > 1e-12:
            raise ValueError("direction entries must sum to 1")

    @property
    def d(self) -> int:
        return len(self.r)

    @property
    def interior(self) -> bool:
        return all(x > 0 for x in self.r)

    def __iter__(self):
        return iter(self.r)

    def __getitem__(self, i):
        return self.r[i]


def as_direction(r) -> Direction:
    return r if isinstance(r, Direction) else Direction(tuple(r))


@dataclass(frozen=True)
class ExtendedValue:
    """A psi value with the boundary point that achieves it, when one does.

    ``minimizer`` is the theta coordinates (-log of the boundary point) and
    is present exactly when the value is finite and the method actually
    located a boundary point (boundary and tmap routes).
    """

    value: float
    minimizer: tuple[float, ...] | None
    method: str

    @property
    def is_neg_inf(self) -> bool:
        return self.value == NEG_INF

    def boundary_point(self) -> tuple[float, ...] | None:
        if self.minimizer is None:
            return None
        return tuple(math.exp(-t) for t in self.minimizer)


# ---------------------------------------------------------------------------
# boundary route

def psi_boundary(h: MultiPoly, r, tol: float = 1e-12) -> ExtendedValue:
    """Height minimization over the positive part of {H = 0}.

    Directions with zero entries are treated as limits along the matching
    face of the simplex: the corresponding variables are set to zero in H
    and dropped.  A face on which H never vanishes certifies -infinity.
    """
    r = as_direction(r)
    if r.d != h.nvars:
        raise ValueError(f"direction has length {r.d}, denominator has {h.nvars} variables")
    _variety.check_boundary_poly(h)

    zero = [i for i, x in enumerate(r.r) if x == 0.0]
    if zero:
        face = h.restrict_zero(zero)
        if face.total_degree() == 0:
            return ExtendedValue(NEG_INF, None, "boundary")
        keep = [i for i in range(h.nvars) if i not in zero]
        sub = psi_boundary(face, Direction(tuple(r.r[i] for i in keep)), tol)
        if sub.minimizer is None:
            return ExtendedValue(sub.value, None, "boundary")
        theta = [math.inf] * h.nvars
        for slot, i in enumerate(keep):
            theta[i] = sub.minimizer[slot]
        return ExtendedValue(sub.value, tuple(theta), "boundary")

    if h.nvars == 1:
        root = _variety.pivot_root(h, [0.0], 0)
        if root is None:
            return ExtendedValue(NEG_INF, None, "boundary")
        return ExtendedValue(-math.log(root), (-math.log(root),), "boundary")

    status, sol = _variety.solve_boundary(h, np.array(r.r))
    if status == "neg_inf":
        return ExtendedValue(NEG_INF, None, "boundary")
    if status == "failed":
        raise RuntimeError("boundary optimization did not converge and no divergence "
                           "could be certified")
    theta = tuple(-math.log(z) for z in sol.z)
    return ExtendedValue(float(np.dot(r.r, theta)) + 0.0, theta, "boundary")


# ---------------------------------------------------------------------------
# stochastic-map route

def _tmap_context(a: Automaton):
    if not is_ergodic(a):
        raise ValueError("the stochastic-map route needs a strongly connected automaton")
    if not a.vertex_labeled:
        raise ValueError("the stochastic-map route needs a vertex-labeled automaton")
    adj = adjacency(a)
    if not adj.is_zero_one():
        raise ValueError("the stochastic-map route needs a {0,1} adjacency matrix")
    labels = a.state_labels()
    label_list = [labels[s] for s in a.states]
    if sorted(label_list) != sorted(a.alphabet):
        raise ValueError("states and symbols must correspond one to one")
    return adj.to_numpy(), label_list


def psi_tmap(a: Automaton, r, tol: float = 1e-10) -> ExtendedValue:
    """Minimize -sum_j r_j log T(q)_j over the open simplex.

    The direction r is indexed by the alphabet and is pulled back to states
    through the vertex labels.  Quasi-Newton in softmax coordinates from the
    barycenter; escape toward the simplex boundary with certified linear
    descent yields -infinity.
    """
    r = as_direction(r)
    m, label_list = _tmap_context(a)
    if r.d != len(a.alphabet):
        raise ValueError("direction length must equal the alphabet size")
    pos = {sym: i for i, sym in enumerate(a.alphabet)}
    r_state = np.array([r.r[pos[lab]] for lab in label_list])
    v = perron(m).v
    d = len(r_state)

    def s_of(q: np.ndarray) -> np.ndarray:
        return q / (v * ((q / v) @ m))

    def objective(xi: np.ndarray):
        if np.max(np.abs(xi)) > 600.0:
            return _variety.BIG, np.zeros(d - 1)
        e = np.exp(np.concatenate(([0.0], xi)))
        q = e / e.sum()
        w = (q / v) @ m
        s = q / (v * w)
        val = -float(np.sum(r_state * np.log(s)))
        grad_q = -r_state / q + (m @ (r_state / w)) / v
        grad_eta = q * (grad_q - float(grad_q @ q))
        return val, grad_eta[1:]

    res = minimize(objective, np.zeros(d - 1), jac=True, method="L-BFGS-B",
                   options={"maxiter": 2000, "ftol": 1e-18, "gtol": 1e-12})
    xi = res.x
    diverged = (not np.all(np.isfinite(xi))) or np.max(np.abs(xi)) > 35.0
    if not diverged:
        val, grad = objective(xi)
        if float(np.max(np.abs(grad))) < math.sqrt(tol):
            e = np.exp(np.concatenate(([0.0], xi)))
            q = e / e.sum()
            s = s_of(q)
            theta = tuple(-math.log(x) for x in s)
            return ExtendedValue(val, theta, "tmap")

    def value_only(pt: np.ndarray) -> float:
        if np.max(np.abs(pt)) > 700:
            return _variety.BIG
        return objective(pt)[0]

    start = np.zeros(d - 1)
    hint = xi - start if np.all(np.isfinite(xi)) else None
    candidates = []
    if hint is not None and np.linalg.norm(hint) > 0:
        candidates.append(hint)
    for i in range(d - 1):
        e = np.zeros(d - 1)
        e[i] = 1.0
        candidates.append(e.copy())
        candidates.append(-e)
    for c in candidates:
        if _variety.certify_ray(value_only, start, c):
            return ExtendedValue(NEG_INF, None, "tmap")
    raise RuntimeError("stochastic-map optimization did not converge")


# ---------------------------------------------------------------------------
# empirical route

def psi_empirical(table: CoefficientTable, r, cone_eps: float = 0.05,
                  shell_window: int = 5) -> float:
    """Cone-and-shell estimate of psi read off a coefficient table.

    Uses the cone C = {x : || x/||x|| - r ||_1 < cone_eps} and returns the
    best over the last ``shell_window`` complete shells R of
    (1/R) log (sum of counts on shell R inside C); -infinity when every
    shell misses the cone.  Lattice points the language never realizes are
    absent from the table and are skipped (no placeholder counts).
    """
    r = as_direction(r)
    if cone_eps <= 0:
        raise ValueError("cone_eps must be positive")
    if table.d != r.d:
        raise ValueError("direction length must match the table dimension")
    if table.max_total < shell_window + 2:
        raise ValueError(f"table only reaches {table.max_total}; "
                         f"need at least {shell_window + 2}")
    shells = range(table.max_total - shell_window, table.max_total)
    r_vec = np.array(r.r)
    best = NEG_INF
    for big_r in shells:
        if big_r <= 0:
            continue
        picked = []
        for vec, c in table.shell(big_r):
            direction = np.array(vec, float) / big_r
            if np.abs(direction - r_vec).sum() < cone_eps:
                picked.append(c)
        if not picked:
            continue
        if table.mode == EXACT:
            log_sum = math.log(sum(picked))
        else:
            log_sum = float(np.logaddexp.reduce(np.array(picked, float)))
        best = max(best, log_sum / big_r)
    return best


# ---------------------------------------------------------------------------
# closed forms

def _xlogy(x: float, y: float) -> float:
    if x == 0.0:
        return 0.0
    return x * math.log(y)


def psi_closed_form(name: str, r, d: int | None = None) -> ExtendedValue:
    """Catalog closed forms evaluated exactly as written.

    * ``free_monoid``: Shannon entropy -sum r_i log r_i (any dimension).
    * ``fibonacci``: p log(p/(2p-1)) + q log((2p-1)/q) for p >= 1/2 (value 0
      at p = 1/2 as the continuous limit), -infinity for p < 1/2.
    * ``f2_delta``: H(r) + p log(2q-p+2w) + q log(2p-q+2w) with
      w = sqrt(p^2 - pq + q^2).
    """
    r = as_direction(r)
    if name == "free_monoid":
        if d is not None and r.d != d:
            raise ValueError(f"direction has length {r.d}, expected {d}")
        val = -math.fsum(_xlogy(x, x) for x in r.r)
        return ExtendedValue(val, None, "closed_form")
    if name == "fibonacci":
        if r.d != 2:
            raise ValueError("fibonacci closed form needs a two-entry direction")
        p, q = r.r
        if p < 0.5:
            return ExtendedValue(NEG_INF, None, "closed_form")
        if p == 0.5:
            return ExtendedValue(0.0, None, "closed_form")
        val = _xlogy(p, p / (2 * p - 1)) + _xlogy(q, (2 * p - 1) / q) if q > 0 else _xlogy(p, p / (2 * p - 1))
        return ExtendedValue(val, None, "closed_form")
    if name == "f2_delta":
        if r.d != 2:
            raise ValueError("rank-two free-group closed form needs a two-entry direction")
        p, q = r.r
        w = math.sqrt(p * p - p * q + q * q)
        entropy = -(_xlogy(p, p) + _xlogy(q, q))
        val = entropy + _xlogy(p, 2 * q - p + 2 * w) + _xlogy(q, 2 * p - q + 2 * w)
        return ExtendedValue(val, None, "closed_form")
    raise ValueError(f"unknown closed form {name!r}")


# ---------------------------------------------------------------------------
# amoeba slice

def amoeba_slice(h: MultiPoly, grid: int = 200,
                 s_range: tuple[float, float] = (-6.0, 6.0),
                 t_range: tuple[float, float] = (-12.0, 12.0)) -> list[tuple[float, float]]:
    """Sample the real positive slice {(s, t) : H(e^{-s}, e^{-t}) = 0}.

    Sweeps s and solves for t by sign-change bracketing plus Brent
    refinement; sweep lines with no real solution are skipped.  When H
    ignores one of the two variables the slice degenerates to vertical or
    horizontal lines at the roots of the univariate part.
    """
    from scipy.optimize import brentq

    if h.nvars != 2:
        raise ValueError("amoeba slice is implemented for two variables")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    s_lo, s_hi = s_range
    t_lo, t_hi = t_range
    points: list[tuple[float, float]] = []

    if not h.involves(1) or not h.involves(0):
        fixed_var = 0 if not h.involves(1) else 1
        other_range = t_range if fixed_var == 0 else s_range
        coeffs = h.univariate_coeffs(fixed_var, [0.0, 0.0])
        roots = np.roots(list(reversed(coeffs))) if len(coeffs) > 1 else []
        lines = sorted(-math.log(float(z.real)) for z in roots
                       if abs(z.imag) < 1e-12 and z.real > 0)
        sweep = np.linspace(other_range[0], other_range[1], grid)
        for fixed_value in lines:
            for w in sweep:
                points.append((fixed_value, float(w)) if fixed_var == 0
                              else (float(w), fixed_value))
        points.sort()
        return points

    scan = 512
    t_grid = np.linspace(t_lo, t_hi, scan + 1)
    for s in np.linspace(s_lo, s_hi, grid):
        z1 = math.exp(-s)

        def g(t: float) -> float:
            return h.eval([z1, math.exp(-t)])

        vals = [g(t) for t in t_grid]
        for i in range(scan):
            a, b = vals[i], vals[i + 1]
            if a == 0.0:
                points.append((float(s), float(t_grid[i])))
            elif a * b < 0:
                t_root = brentq(g, t_grid[i], t_grid[i + 1], xtol=1e-14)
                points.append((float(s), float(t_root)))
        if vals[-1] == 0.0:
            points.append((float(s), float(t_grid[-1])))
    points.sort()
    return points


# ---------------------------------------------------------------------------
# grids and maxima

def direction_grid_2d(n: int, endpoints: bool = True) -> list[Direction]:
    if n < 2:
        raise ValueError("grid must have at least 2 points")
    ps = np.linspace(0.0, 1.0, n) if endpoints else np.linspace(0.0, 1.0, n + 2)[1:-1]
    return [Direction((float(p), float(1.0 - p))) for p in ps]


def direction_grid_3d(n: int) -> list[Direction]:
    """Barycentric triangular grid with n points per edge."""
    if n < 2:
        raise ValueError("grid must have at least 2 points")
    out = []
    for i in range(n):
        for j in range(n - i):
            p = i / (n - 1)
            q = j / (n - 1)
            out.append(Direction((p, q, max(0.0, 1.0 - p - q))))
    return out


def maximize_psi_2d(psi_of_p: Callable[[float], float],
                    lo: float = 1e-4, hi: float = 1.0 - 1e-4,
                    coarse: int = 201) -> tuple[float, float]:
    """Grid scan plus bounded scalar refinement of p -> psi((p, 1-p)).

    Returns (max value, argmax p).  Points where psi is -infinity are
    ignored during the scan.
    """
    ps = np.linspace(lo, hi, coarse)
    vals = np.array([psi_of_p(float(p)) for p in ps])
    finite = np.isfinite(vals)
    if not finite.any():
        raise ValueError("psi is -infinity on the whole grid")
    k = int(np.argmax(np.where(finite, vals, -np.inf)))
    left = ps[max(k - 1, 0)]
    right = ps[min(k + 1, coarse - 1)]

    def neg(p: float) -> float:
        v = psi_of_p(float(p))
        return -v if math.isfinite(v) else _variety.BIG

    res = minimize_scalar(neg, bounds=(left, right), method="bounded",
                          options={"xatol": 1e-12})
    return -float(res.fun), float(res.x)
