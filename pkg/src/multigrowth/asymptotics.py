"""Critical points of the height function and the polynomial correction.

Coefficient asymptotics along a rational direction r are governed by the
minimal positive critical point of the height h_r(z) = -sum r_i log z_i on
the singular set {H = 0}: the exponential order is e^{n psi(r)} and, in the
smooth two-variable cases treated here, the correction is n^{-1/2}.  This
module extracts critical points by multi-start Newton, carries the rank-two
free-group closed forms (the explicit minimal singularity and the scalar
Hessian-type quantity attached to it), and fits the correction exponent on
actual coefficient tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _variety
from .indicatrice import Direction, as_direction
from .polyalg import MultiPoly
from .series import LOG_DOMAIN, CoefficientTable


@dataclass(frozen=True)
class CriticalPoint:
    """A positive solution of r_i = lam * z_i H_i(z), H(z) = 0."""

    z_star: tuple[float, ...]
    lam: float
    direction: tuple[float, ...]
    height: float
    minimal: bool


def critical_points(h: MultiPoly, r, tol: float = 1e-12) -> list[CriticalPoint]:
    """All positive critical points found by multi-start damped Newton.

    Minimality is decided by pairwise coordinatewise comparison among the
    points found (complex critical points are not searched).
    """
    r = as_direction(r)
    if not r.interior:
        raise ValueError("direction must be interior")
    if r.d != h.nvars:
        raise ValueError("direction length must match the variable count")
    sols = _variety.find_critical_points(h, np.array(r.r))
    if not sols:
        raise RuntimeError("no Newton start converged to a critical point")
    out = []
    for s in sols:
        minimal = not any(
            other is not s and np.all(np.asarray(other.z) < np.asarray(s.z) - 1e-12)
            for other in sols
        )
        out.append(CriticalPoint(
            z_star=tuple(float(x) for x in s.z),
            lam=float(s.lam),
            direction=r.r,
            height=float(s.height),
            minimal=minimal,
        ))
    out.sort(key=lambda cp: cp.height)
    return out


def _f2_denominator() -> MultiPoly:
    return MultiPoly(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): -3})


def f2_critical_closed(p: float) -> CriticalPoint:
    """Closed-form minimal singularity for the rank-two free group.

    z' = ((3p - 2 + 2w) / (3p), (1 - 3p + 2w) / (3(1-p))) with
    w = sqrt(3p^2 - 3p + 1); the point satisfies H(z') = 0 exactly.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    w = math.sqrt(3 * p * p - 3 * p + 1)
    x = (3 * p - 2 + 2 * w) / (3 * p)
    y = (1 - 3 * p + 2 * w) / (3 * (1 - p))
    h = _f2_denominator()
    value = h.eval([x, y])
    if abs(value) > 1e-12:
        raise AssertionError(f"closed form left the singular set: H(z') = {value}")
    q = 1.0 - p
    # lam from the first-order condition r1 = lam * x * H_x
    hx = -1.0 - 3.0 * y
    lam = p / (x * hx)
    height = -(p * math.log(x) + q * math.log(y))
    return CriticalPoint(z_star=(x, y), lam=lam, direction=(p, q),
                         height=height, minimal=True)


def hessian_scalar_f2(z: Sequence[float]) -> float:
    """The positive scalar (xy + 3x^2 y + 3x y^2 + x^2) / (y^2 (1+3x)^2).

    Defined for points on the rank-two free-group singular set with positive
    coordinates; it controls the width of the saddle in the n^{-1/2} law.
    """
    x, y = float(z[0]), float(z[1])
    if y <= 0 or x <= 0:
        raise ValueError("point must have positive coordinates")
    h = _f2_denominator()
    if abs(h.eval([x, y])) > 1e-8:
        raise ValueError("point is not on the singular set")
    num = x * y + 3 * x * x * y + 3 * x * y * y + x * x
    den = y * y * (1 + 3 * x) ** 2
    return num / den


@dataclass(frozen=True)
class FitReport:
    slope: float
    intercept: float
    residual: float
    n_used: int
    n_min: int
    n_max: int


def _rational_direction(r: Direction, max_den: int = 512) -> list[Fraction]:
    fracs = [Fraction(x).limit_denominator(max_den) for x in r.r]
    for x, f in zip(r.r, fracs):
        if abs(float(f) - x) > 1e-9:
            raise ValueError("direction must be rational with a small denominator")
    return fracs


def fit_correction(table: CoefficientTable, r, psi: float,
                   n_min: int, n_max: int) -> FitReport:
    """Regress log gamma_{n r} - n psi against log n.

    Only n with n*r integral and realized in the table participate.  For a
    smooth minimal singularity in two variables the expected slope is -1/2;
    the intercept estimates log of the constant in front.  Raises when fewer
    than 5 admissible n exist.
    """
    r = as_direction(r)
    if table.d != r.d:
        raise ValueError("direction length must match the table dimension")
    fracs = _rational_direction(r)
    denominators = [f.denominator for f in fracs]
    step = 1
    for q in denominators:
        step = step * q // math.gcd(step, q)
    xs, ys = [], []
    for n in range(n_min, n_max + 1):
        if n % step:
            continue
        vec = tuple(int(f * n) for f in fracs)
        if sum(vec) != n:
            continue
        if table.mode == LOG_DOMAIN:
            log_gamma = table.entries.get(vec)
            if log_gamma is None:
                continue
        else:
            count = table.entries.get(vec)
            if not count:
                continue
            log_gamma = math.log(count)
        xs.append(math.log(n))
        ys.append(log_gamma - n * psi)
    if len(xs) < 5:
        raise ValueError(f"only {len(xs)} admissible n in [{n_min}, {n_max}]; need 5")
    xs_arr = np.array(xs)
    ys_arr = np.array(ys)
    slope, intercept = np.polyfit(xs_arr, ys_arr, 1)
    fitted = slope * xs_arr + intercept
    residual = float(np.sqrt(np.mean((ys_arr - fitted) ** 2)))
    return FitReport(slope=float(slope), intercept=float(intercept),
                     residual=residual, n_used=len(xs), n_min=n_min, n_max=n_max)
