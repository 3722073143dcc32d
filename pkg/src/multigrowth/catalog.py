"""Closed-form free-group quantities: series identities and walk spectra.

The reduced-word counts of a rank-m free group, graded by generator pair,
form the rational series prod(1+z_i) / R(z) where

    R(z) = 1 - sum_l (2l-1) e_l(z),        e_l = elementary symmetric,

and the same data arrives through the transfer matrix of the (2m+1)-state
acceptor: its determinant factors as prod(1-z_i) R(z) and its signed minor
sum collapses to prod(1-z_i^2).  ``verify_fm_identities`` checks all of this
by exact polynomial arithmetic.

The walk-spectrum side: the spectral radius of the symmetric random walk
with step law p is  chi(p) = 2 min_{t>=0} [ sum_i sqrt(t^2 + p_i^2) - (m-1) t ],
reducing for m = 2 to a quartic in t^2 and for uniform p to the classical
sqrt(2m-1)/m; the piecewise map alpha -> chi links the growth rate of a
subgroup's elements to the walk on the corresponding coset graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from . import _variety
from .automaton import catalog_automaton, free_group_pairing
from .indicatrice import ExtendedValue, as_direction, psi_boundary
from .polyalg import MultiPoly, PolyMatrix, RationalSeries, elementary_symmetric
from .series import growth_series, transfer_matrix


@dataclass(frozen=True)
class GroupParams:
    """Rank m >= 2 and an optional step law p with 2 sum p_i = 1."""

    m: int
    p: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("rank must be at least 2")
        if self.p is not None:
            p = tuple(float(x) for x in self.p)
            object.__setattr__(self, "p", p)
            if len(p) != self.m:
                raise ValueError("step law must have one entry per generator")
            if any(x <= 0 for x in p):
                raise ValueError("step-law entries must be positive")
            if abs(2 * math.fsum(p) - 1.0) > 1e-12:
                raise ValueError("step law must satisfy 2 sum p_i = 1")


def free_group_denominator(m: int) -> MultiPoly:
    """R(z) = 1 - sum_{l=1}^m (2l-1) e_l(z)."""
    if m < 1:
        raise ValueError("need m >= 1")
    acc = MultiPoly.one(m)
    for l in range(1, m + 1):
        acc = acc - (2 * l - 1) * elementary_symmetric(m, l)
    return acc


def delta_free_group(m: int) -> RationalSeries:
    """Reduced-word series graded by generator pair: prod(1+z_i) / R(z)."""
    if m < 2:
        raise ValueError("need rank m >= 2")
    numer = MultiPoly.one(m)
    for i in range(m):
        numer = numer * (MultiPoly.one(m) + MultiPoly.variable(m, i))
    return RationalSeries(numer, free_group_denominator(m))


@dataclass(frozen=True)
class FmIdentityReport:
    m: int
    det_identity: bool        # det(I - A(z)) = prod(1 - z_i) R(z)
    minor_identity: bool      # signed minor sum = prod(1 - z_i^2)
    series_identity: bool     # cancellation yields prod(1 + z_i) / R(z)


def verify_fm_identities(m: int) -> FmIdentityReport:
    """Exact polynomial check of the determinant and minor-sum identities."""
    if not 2 <= m <= 4:
        raise ValueError("identity check supported for 2 <= m <= 4")
    a = catalog_automaton("free_group_unambiguous", m)
    pairing = free_group_pairing(m)
    az = transfer_matrix(a, pairing)
    n = len(a.states)
    iminus = PolyMatrix.identity(n, m) - az
    det = iminus.det()

    prod_1mz = MultiPoly.one(m)
    prod_1mz2 = MultiPoly.one(m)
    prod_1pz = MultiPoly.one(m)
    for i in range(m):
        zi = MultiPoly.variable(m, i)
        prod_1mz = prod_1mz * (MultiPoly.one(m) - zi)
        prod_1pz = prod_1pz * (MultiPoly.one(m) + zi)
        prod_1mz2 = prod_1mz2 * (MultiPoly.one(m) - zi * zi)
    r_poly = free_group_denominator(m)

    det_ok = det == prod_1mz * r_poly

    minor_sum = MultiPoly.zero(m)
    for j, state in enumerate(a.states):
        if state in a.final:
            term = iminus.minor(j, 0)
            if j % 2:
                term = -term
            minor_sum = minor_sum + term
    minor_ok = minor_sum == prod_1mz2

    series = growth_series(a, pairing)
    series_ok = (series.numer == prod_1pz and series.denom == r_poly)
    return FmIdentityReport(m=m, det_identity=det_ok, minor_identity=minor_ok,
                            series_identity=series_ok)


# ---------------------------------------------------------------------------
# rank-three indicatrix through the explicit quartic

def _f3_quartic_coeffs(p: float, q: float) -> list[float]:
    """Coefficients (degree 4 down to 0) of the quartic in exp(s)."""
    return [
        3 * p * p,
        4 * p * (7 * p - 2),
        2 * (33 * p * p - 32 * p * q - 8 * p - 32 * q * q + 32 * q - 8),
        12 * p * (5 * p - 6),
        -45 * p * p,
    ]


def psi_f3(r, tol: float = 1e-10) -> ExtendedValue:
    """Rank-three indicatrix from the explicit quartic in exp(s).

    Solves the quartic by companion-matrix roots plus one Newton polish,
    keeps the positive real branch, reconstructs the other two coordinates
    of the boundary point from the first-order conditions, and cross-checks
    the value against the generic boundary optimization.
    """
    r = as_direction(r)
    if r.d != 3:
        raise ValueError("need a three-entry direction")
    if not r.interior:
        raise ValueError("direction must be interior")
    p, q, w = r.r
    coeffs = _f3_quartic_coeffs(p, q)
    roots = np.roots(coeffs)
    candidates = sorted(float(z.real) for z in roots
                        if abs(z.imag) < 1e-9 and z.real > 0)
    if not candidates:
        raise RuntimeError("quartic has no positive real root")

    h = free_group_denominator(3)
    partials = [h.partial(i) for i in range(3)]
    valid: list[tuple[float, tuple[float, float, float]]] = []
    for root in candidates:
        root = _polish_poly_root(coeffs, root)
        z1 = 1.0 / root  # the quartic variable is exp(s) = 1/z1
        tail = _solve_f3_tail(h, partials, z1, q, w)
        if tail is None:
            continue
        z2, z3 = tail
        z = (z1, z2, z3)
        grad = np.array([pp.eval(z) for pp in partials])
        lam = np.array(r.r) / (np.array(z) * grad)
        if np.max(np.abs(lam - lam.mean())) > 1e-6 * max(1.0, abs(lam.mean())):
            continue
        height = -(p * math.log(z1) + q * math.log(z2) + w * math.log(z3))
        valid.append((height, z))
    if not valid:
        raise RuntimeError("no quartic root leads to a positive boundary point")
    if len(valid) > 1:
        valid.sort()
    height, z = valid[0]

    check = psi_boundary(h, r)
    if abs(check.value - height) > 1e-6:
        raise RuntimeError(
            f"quartic route ({height}) disagrees with boundary optimization ({check.value})")
    theta = tuple(-math.log(x) for x in z)
    return ExtendedValue(height, theta, "closed_form")


def _polish_poly_root(coeffs: Sequence[float], x: float) -> float:
    for _ in range(3):
        val = 0.0
        der = 0.0
        for c in coeffs:
            der = der * x + val
            val = val * x + c
        if der == 0:
            break
        x -= val / der
    return x


def _solve_f3_tail(h, partials, z1: float, q: float, w: float):
    """Given the first coordinate, Newton for (z2, z3) on the surface with
    the remaining proportionality condition q z3 H_3 = w z2 H_2."""
    c = _symmetric_tail_seed(h, z1)
    if c is None:
        return None
    z2, z3 = c, c
    for _ in range(80):
        z = (z1, z2, z3)
        h2 = partials[1].eval(z)
        h3 = partials[2].eval(z)
        f = np.array([h.eval(z), q * z3 * h3 - w * z2 * h2])
        if np.max(np.abs(f)) < 1e-13:
            return z2, z3
        h22 = partials[1].partial(1).eval(z)
        h23 = partials[1].partial(2).eval(z)
        h32 = partials[2].partial(1).eval(z)
        h33 = partials[2].partial(2).eval(z)
        jac = np.array([
            [h2, h3],
            [q * z3 * h32 - w * (h2 + z2 * h22), q * (h3 + z3 * h33) - w * z2 * h23],
        ])
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        while t > 1e-6:
            n2, n3 = z2 + t * step[0], z3 + t * step[1]
            if n2 > 0 and n3 > 0:
                z2, z3 = n2, n3
                break
            t *= 0.5
        else:
            return None
    return None


def _symmetric_tail_seed(h, z1: float) -> float | None:
    """c > 0 with H(z1, c, c) = 0."""
    def f(c: float) -> float:
        return h.eval([z1, c, c])

    if f(0.0) <= 0:
        return None
    hi = 1.0
    for _ in range(200):
        if f(hi) < 0:
            break
        hi *= 2
    else:
        return None
    return brentq(f, 0.0, hi, xtol=1e-300, rtol=8.9e-16)


# ---------------------------------------------------------------------------
# walk spectra

def _akemann_objective(p: Sequence[float]):
    m = len(p)

    def g(t: float) -> float:
        return math.fsum(math.sqrt(t * t + pi * pi) for pi in p) - (m - 1) * t

    def dg(t: float) -> float:
        return math.fsum(t / math.sqrt(t * t + pi * pi) for pi in p) - (m - 1)

    return g, dg


def chi_akemann(params) -> float:
    """chi(p) = 2 min_{t >= 0} [sum_i sqrt(t^2 + p_i^2) - (m-1) t].

    The bracketed function is strictly convex with negative slope at 0, so
    the minimum is the unique zero of its derivative.
    """
    p = _step_law(params)
    g, dg = _akemann_objective(p)
    hi = 1.0
    while dg(hi) <= 0:
        hi *= 2
    t_star = brentq(dg, 0.0, hi, xtol=1e-300, rtol=8.9e-16)
    return 2.0 * g(t_star)


def _step_law(params) -> tuple[float, ...]:
    if isinstance(params, GroupParams):
        if params.p is None:
            raise ValueError("a step law is required")
        return params.p
    gp = GroupParams(m=len(tuple(params)), p=tuple(params))
    return gp.p


def chi_kesten(m: int) -> float:
    """Spectral radius sqrt(2m-1)/m of the simple random walk on rank m."""
    if m < 2:
        raise ValueError("rank must be at least 2")
    return math.sqrt(2 * m - 1) / m


def chi_of_alpha(alpha: float, m: int, normal: bool = False) -> float:
    """Walk spectral radius as a function of the subgroup growth rate alpha.

    Coset-graph (default) semantics: constant sqrt(2m-1)/m below the
    threshold sqrt(2m-1), then
    (sqrt(2m-1)/(2m)) (sqrt(2m-1)/alpha + alpha/sqrt(2m-1)) up to 2m-1; the
    two branches agree at the threshold.  With ``normal=True`` only the
    range (sqrt(2m-1), 2m-1] is meaningful and the second branch applies.
    """
    if m < 2:
        raise ValueError("rank must be at least 2")
    root = math.sqrt(2 * m - 1)
    top = 2 * m - 1
    if normal:
        if not root < alpha <= top:
            raise ValueError(f"alpha must lie in ({root}, {top}] for a normal subgroup")
    else:
        if not 1.0 <= alpha <= top:
            raise ValueError(f"alpha must lie in [1, {top}]")
        if alpha <= root:
            return root / m
    if alpha == top:
        return 1.0  # amenable endpoint, exact
    return (root / (2 * m)) * (root / alpha + alpha / root)


def deg8_check(p1: float, p2: float) -> float:
    """chi for rank two recovered through the quartic in x = t^2.

    3x^4 + 4(p1^2+p2^2)x^3 + 6p1^2p2^2x^2 - p1^4p2^4 = 0 has a unique
    positive root that is the squared minimizer of the convex objective;
    the returned chi must match ``chi_akemann`` to full precision.
    """
    gp = GroupParams(2, (p1, p2))
    p = gp.p
    coeffs = [
        3.0,
        4 * (p1 ** 2 + p2 ** 2),
        6 * p1 ** 2 * p2 ** 2,
        0.0,
        -(p1 ** 4) * (p2 ** 4),
    ]
    roots = np.roots(coeffs)
    g, dg = _akemann_objective(p)
    best = None
    for z in roots:
        if abs(z.imag) > 1e-10 or z.real <= 0:
            continue
        x = _polish_poly_root(coeffs, float(z.real))
        t = math.sqrt(x)
        if abs(dg(t)) < 1e-8:
            best = t if best is None else best
    if best is None:
        raise RuntimeError("quartic produced no stationary positive root")
    return 2.0 * g(best)
