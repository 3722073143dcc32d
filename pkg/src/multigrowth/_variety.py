"""Optimization of linear height functions on the positive zero set of H.

Shared core for the boundary route of the growth indicatrix and for the
critical-point extraction of the asymptotics module.  Everything here works
on "combinatorially positive" denominators: constant term 1 and only
non-positive coefficients elsewhere.  On the open positive orthant such an
H is strictly decreasing in every variable it involves, so its zero set is
the graph of a function of any one pivot variable, which gives both a
robust global parameterization for quasi-Newton descent and a natural
barrier (the pivot coordinate collapses to 0, blowing the height up) at the
domain boundary.

Divergence toward "-infinity" values is certified, never guessed: a ray is
followed with doubling step lengths, and only when ten successive doublings
each drop the objective by more than a fixed amount is the height declared
unbounded below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize

BIG = 1e18
RAY_DOUBLINGS = 10
RAY_STEP0 = 0.25
RAY_MIN_DROP = 1e-3


def check_boundary_poly(h) -> None:
    """Accept constant term 1 and non-positive non-constant coefficients."""
    if h.constant_term != 1:
        raise ValueError("denominator must have constant term 1")
    for e, c in h.terms.items():
        if any(e) and c > 0:
            raise ValueError(
                "denominator has a positive non-constant coefficient; the "
                "boundary route only handles combinatorially positive denominators")


def _decreasing_root(coeffs) -> float | None:
    """Unique positive root of c_0 + sum c_j x^j with c_0 > 0, c_j <= 0.

    Uses the closed-form bracket hi = min_j (c_0 / -c_j)^{1/j}, at which the
    polynomial is already non-positive, so no bracket search can run away.
    """
    if not coeffs or coeffs[0] <= 0:
        return None
    c0 = coeffs[0]
    hi = math.inf
    for j, c in enumerate(coeffs[1:], 1):
        if c < 0:
            try:
                hi = min(hi, (c0 / -c) ** (1.0 / j))
            except OverflowError:
                continue
    if not math.isfinite(hi):
        return None
    hi *= 1.0 + 1e-9  # the bound can land exactly on the root; push past it

    def p(x: float) -> float:
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    if p(hi) > 0.0:
        return None
    return brentq(p, 0.0, hi, xtol=1e-300, rtol=8.9e-16, maxiter=200)


def pivot_root(h, values, k: int) -> float | None:
    """Positive root of H in variable k, other coordinates fixed.

    Returns None when no positive root exists (the fixed coordinates are
    outside the graph domain, or H does not involve variable k).
    """
    try:
        coeffs = h.univariate_coeffs(k, values)
    except OverflowError:
        return None
    if len(coeffs) == 1:
        return None
    return _decreasing_root(coeffs)


def symmetric_point(h) -> float:
    """The c > 0 with H(c, ..., c) = 0; seeds every solver."""
    # univariate in c: sum coefficients by total degree
    deg = h.total_degree()
    coeffs = [0.0] * (deg + 1)
    for e, c in h.terms.items():
        coeffs[sum(e)] += c
    root = _decreasing_root(coeffs)
    if root is None:
        raise ValueError("no symmetric boundary point; H never vanishes on the diagonal")
    return root


@dataclass
class GraphObjective:
    """Height as a function of the non-pivot coordinates, in log space."""

    h: object
    partials: list
    r: np.ndarray
    pivot: int
    free: list

    def point(self, xi: np.ndarray) -> np.ndarray | None:
        z = np.empty(len(self.r))
        for slot, i in enumerate(self.free):
            if abs(xi[slot]) > 700.0:
                return None
            z[i] = math.exp(xi[slot])
        z[self.pivot] = 0.0
        root = pivot_root(self.h, z, self.pivot)
        if root is None or root <= 0.0:
            return None
        z[self.pivot] = root
        return z

    def value(self, xi: np.ndarray) -> float:
        z = self.point(xi)
        if z is None:
            return BIG
        return -float(np.dot(self.r, np.log(z)))

    def value_grad(self, xi: np.ndarray):
        z = self.point(xi)
        if z is None:
            return BIG, np.zeros(len(self.free))
        val = -float(np.dot(self.r, np.log(z)))
        try:
            hp = np.array([p.eval(z) for p in self.partials])
        except OverflowError:
            return BIG, np.zeros(len(self.free))
        zk, hk = z[self.pivot], hp[self.pivot]
        if hk == 0.0:
            return BIG, np.zeros(len(self.free))
        rk = self.r[self.pivot]
        grad = np.array([
            rk * z[i] * hp[i] / (zk * hk) - self.r[i]
            for i in self.free
        ])
        return val, grad


def make_graph_objective(h, r: np.ndarray) -> GraphObjective:
    involved = [i for i in range(h.nvars) if h.involves(i)]
    if not involved:
        raise ValueError("denominator involves no variable")
    pivot = max(involved, key=lambda i: r[i])
    free = [i for i in range(h.nvars) if i != pivot]
    partials = [h.partial(i) for i in range(h.nvars)]
    return GraphObjective(h=h, partials=partials, r=np.asarray(r, float),
                          pivot=pivot, free=free)


def certify_ray(value, xi0: np.ndarray, direction: np.ndarray,
                doublings: int = RAY_DOUBLINGS, min_drop: float = RAY_MIN_DROP) -> bool:
    """True when the objective keeps dropping along doubling steps.

    Each of ``doublings`` successive step doublings must decrease the value
    by more than ``min_drop``; this is linear divergence along a recession
    direction of the boundary set, i.e. a certified -infinity.
    """
    norm = float(np.linalg.norm(direction))
    if norm == 0.0:
        return False
    e = direction / norm
    prev = value(xi0)
    if prev >= BIG:
        return False
    step = RAY_STEP0
    for _ in range(doublings):
        cur = value(xi0 + step * e)
        if not (cur < prev - min_drop):
            return False
        prev = cur
        step *= 2.0
    return True


def divergence_scan(obj: GraphObjective, xi0: np.ndarray, hint: np.ndarray | None = None) -> bool:
    dim = len(obj.free)
    candidates = []
    if hint is not None and np.linalg.norm(hint) > 0:
        candidates.append(hint)
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = 1.0
        candidates.append(e.copy())
        candidates.append(-e)
    return any(certify_ray(obj.value, xi0, c) for c in candidates)


@dataclass
class CriticalSolution:
    z: np.ndarray
    lam: float
    height: float
    residual: float


def lagrange_newton(h, partials, second, r: np.ndarray, z0: np.ndarray,
                    lam0: float | None = None, tol: float = 1e-13,
                    max_iter: int = 80) -> CriticalSolution | None:
    """Damped Newton on the first-order system r_i = lam * z_i H_i, H = 0."""
    d = len(r)
    z = np.array(z0, float)
    if np.any(z <= 0):
        return None
    if lam0 is None:
        hp = np.array([p.eval(z) for p in partials])
        denom = z * hp
        good = np.abs(denom) > 1e-300
        if not good.any():
            return None
        lam = float(np.mean(r[good] / denom[good]))
    else:
        lam = float(lam0)

    def residual(z, lam):
        hp = np.array([p.eval(z) for p in partials])
        f = np.empty(d + 1)
        f[:d] = r - lam * z * hp
        f[d] = h.eval(z)
        return f, hp

    f, hp = residual(z, lam)
    for _ in range(max_iter):
        norm = float(np.max(np.abs(f)))
        if norm < tol:
            height = -float(np.dot(r, np.log(z)))
            return CriticalSolution(z=z, lam=lam, height=height, residual=norm)
        jac = np.zeros((d + 1, d + 1))
        for i in range(d):
            for j in range(d):
                hij = second[i][j].eval(z)
                jac[i, j] = -lam * ((1.0 if i == j else 0.0) * hp[i] + z[i] * hij)
            jac[i, d] = -z[i] * hp[i]
        jac[d, :d] = hp
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        for _ in range(30):
            zn = z + t * step[:d]
            ln = lam + t * step[d]
            if np.all(zn > 0):
                fn, hpn = residual(zn, ln)
                if float(np.max(np.abs(fn))) < norm:
                    z, lam, f, hp = zn, ln, fn, hpn
                    break
            t *= 0.5
        else:
            return None
    return None


def solve_boundary(h, r: np.ndarray):
    """Minimize the height on the positive zero set of H.

    Returns ``("finite", CriticalSolution)``, ``("neg_inf", None)`` for a
    certified unbounded descent, or ``("failed", None)``.
    """
    check_boundary_poly(h)
    obj = make_graph_objective(h, r)
    c = symmetric_point(h)
    xi0 = np.full(len(obj.free), math.log(c))

    res = minimize(obj.value_grad, xi0, jac=True, method="L-BFGS-B",
                   options={"maxiter": 500, "ftol": 1e-18, "gtol": 1e-12})
    xi = res.x
    val = obj.value(xi)

    diverged = (not np.all(np.isfinite(xi))) or np.max(np.abs(xi)) > 35.0 or val >= BIG
    if not diverged:
        z = obj.point(xi)
        partials = [h.partial(i) for i in range(h.nvars)]
        second = [[partials[i].partial(j) for j in range(h.nvars)] for i in range(h.nvars)]
        sol = lagrange_newton(h, partials, second, r, z)
        if sol is not None:
            return "finite", sol
    hint = xi - xi0
    if divergence_scan(obj, xi if np.all(np.isfinite(xi)) else xi0, hint):
        return "neg_inf", None
    # fall back to a certified scan from the seed
    if divergence_scan(obj, xi0, None):
        return "neg_inf", None
    return "failed", None


def find_critical_points(h, r: np.ndarray, extra_seeds=()) -> list[CriticalSolution]:
    """Multi-start Newton for all positive critical points of the height."""
    check_boundary_poly(h)
    d = h.nvars
    r = np.asarray(r, float)
    partials = [h.partial(i) for i in range(d)]
    second = [[partials[i].partial(j) for j in range(d)] for i in range(d)]
    c = symmetric_point(h)
    seeds: list[np.ndarray] = [np.full(d, c)]
    obj = make_graph_objective(h, r)
    res = minimize(obj.value_grad, np.full(len(obj.free), math.log(c)), jac=True,
                   method="L-BFGS-B", options={"maxiter": 500, "ftol": 1e-18, "gtol": 1e-12})
    z_graph = obj.point(res.x) if np.all(np.isfinite(res.x)) else None
    if z_graph is not None:
        seeds.append(np.array(z_graph))
    scale = d * r
    for power in (1.0, -1.0):
        cand = c * np.maximum(scale, 1e-3) ** power
        z = cand.copy()
        z[obj.pivot] = 0.0
        root = pivot_root(h, z, obj.pivot)
        if root is not None and root > 0:
            z[obj.pivot] = root
            seeds.append(z)

    seeds.extend(np.asarray(z, float) for z in extra_seeds)
    found: list[CriticalSolution] = []
    for z0 in seeds:
        sol = lagrange_newton(h, partials, second, r, z0)
        if sol is None:
            continue
        if any(np.allclose(sol.z, other.z, rtol=1e-8, atol=1e-10) for other in found):
            continue
        found.append(sol)
    return found
