"""Invariant suites behind the ``verify`` subcommand.

Each suite returns a list of named pass/fail checks with a one-line detail;
the command exits nonzero when any check fails.  The checks mirror the
cross-method identities the package is built around: exact polynomial
identities of the free-group series, agreement of the four psi routes,
spectral/rate-function consistency, and the n^{-1/2} correction fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import catalog as cat
from .automaton import adjacency, catalog_automaton, free_group_pairing
from .asymptotics import critical_points, f2_critical_closed, fit_correction, hessian_scalar_f2
from .indicatrice import Direction, maximize_psi_2d, psi_boundary
from .polyalg import MultiPoly, PolyMatrix, elementary_symmetric
from .registry import get_language
from .series import LOG_DOMAIN, coefficients_dp
from .spectral import parry, perron, rate_function, sanov_rate, simulate_ldp, verify_t_identities
from .series import transfer_matrix

PHI = (1 + math.sqrt(5)) / 2


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def _check(name: str, passed: bool, detail: str) -> Check:
    return Check(name=name, passed=bool(passed), detail=detail)


ALL_CATALOG = (
    ("fibonacci", None),
    ("free_monoid", 1),
    ("free_monoid", 2),
    ("free_group_unambiguous", 2),
    ("free_group_ergodic", 2),
)


def suite_identities() -> list[Check]:
    checks: list[Check] = []
    for m in (2, 3, 4):
        rep = cat.verify_fm_identities(m)
        checks.append(_check(
            f"determinant/minor identities (rank {m})",
            rep.det_identity and rep.minor_identity and rep.series_identity,
            f"det={rep.det_identity} minors={rep.minor_identity} series={rep.series_identity}",
        ))
    for m in (2, 3, 4):
        lhs = MultiPoly.one(m)
        for i in range(m):
            lhs = lhs * (MultiPoly.one(m) + MultiPoly.variable(m, i))
        for i in range(m):
            prod = MultiPoly(m, {tuple(1 if k == i else 0 for k in range(m)): 2})
            for j in range(m):
                if j != i:
                    prod = prod * (MultiPoly.one(m) + MultiPoly.variable(m, j))
            lhs = lhs - prod
        checks.append(_check(
            f"cleared-denominator identity (rank {m})",
            lhs == cat.free_group_denominator(m),
            "prod(1+z) - 2 sum z_i prod_{j!=i}(1+z_j) equals the denominator",
        ))
    rng = np.random.default_rng(20240601)
    for name, m in (("fibonacci", None), ("free_group_ergodic", 2), ("free_group_ergodic", 3)):
        a = adjacency(catalog_automaton(name, m))
        worst_vec = worst_det = 0.0
        for _ in range(100):
            q = rng.dirichlet(np.ones(a.n)) * 0.98 + 0.01 / a.n
            q = q / q.sum()
            rep = verify_t_identities(a, q)
            worst_vec = max(worst_vec, rep.fixed_vector_residual)
            worst_det = max(worst_det, rep.det_residual)
        checks.append(_check(
            f"singular-point identities on 100 random q ({name}{'' if m is None else f' rank {m}'})",
            worst_vec < 1e-12 and worst_det < 1e-10,
            f"max |tA(s)-t|={worst_vec:.2e} max |det(I-A(s))|={worst_det:.2e}",
        ))
    for name, m in ALL_CATALOG:
        a = catalog_automaton(name, m)
        az = transfer_matrix(a)
        n = len(a.states)
        det0 = (PolyMatrix.identity(n, len(a.alphabet)) - az).det().eval([0.0] * len(a.alphabet))
        checks.append(_check(
            f"det(I - A(0)) = 1 ({name}{'' if m is None else f'({m})'})",
            abs(det0 - 1.0) == 0.0, f"value {det0}",
        ))
    return checks


def _psi_grid(lang, points) -> list[Check]:
    checks = []
    worst_bt = worst_bc = 0.0
    for r in points:
        b = lang.psi(r, "boundary").value
        t = lang.psi(r, "tmap").value
        c = lang.psi(r, "closed_form").value
        worst_bt = max(worst_bt, abs(b - t))
        worst_bc = max(worst_bc, abs(b - c))
    checks.append(_check(
        f"boundary vs stochastic-map agreement ({lang.name})",
        worst_bt < 1e-6, f"max gap {worst_bt:.2e} over {len(points)} directions",
    ))
    checks.append(_check(
        f"boundary vs closed form agreement ({lang.name})",
        worst_bc < 1e-8, f"max gap {worst_bc:.2e} over {len(points)} directions",
    ))
    return checks


def suite_agreement() -> list[Check]:
    checks: list[Check] = []
    fib = get_language("fibonacci")
    f2 = get_language("f2_delta")
    fib_points = [Direction((p, 1 - p)) for p in np.linspace(0.52, 0.98, 21)]
    f2_points = [Direction((p, 1 - p)) for p in np.linspace(0.05, 0.95, 21)]
    checks += _psi_grid(fib, fib_points)
    checks += _psi_grid(f2, f2_points)

    # empirical within 0.1 of the closed form at table size 60
    worst = 0.0
    for lang, r in ((fib, Direction((2 / 3, 1 / 3))), (fib, Direction((0.75, 0.25))),
                    (f2, Direction((0.5, 0.5))), (f2, Direction((1 / 3, 2 / 3))),
                    (get_language("free_monoid", 2), Direction((0.5, 0.5)))):
        table = lang.table(60)
        emp = lang.psi(r, "empirical", table=table)
        closed = lang.psi(r, "closed_form").value
        worst = max(worst, abs(emp - closed))
    checks.append(_check("empirical within 0.1 of closed forms (table size 60)",
                         worst < 0.1, f"max gap {worst:.3f}"))

    # concavity of the positively homogeneous extension
    worst_gap = math.inf
    for lang, lo in ((fib, 0.51), (f2, 0.05)):
        ps = np.linspace(lo, 0.95, 7)
        scales = (1.0, 2.0, 3.5)
        pts = [(s * p, s * (1 - p)) for p in ps for s in scales]
        for x in pts:
            for y in pts:
                z = (x[0] + y[0], x[1] + y[1])
                vals = []
                for vec in (x, y, z):
                    norm = vec[0] + vec[1]
                    v = lang.psi(Direction((vec[0] / norm, vec[1] / norm)), "closed_form").value
                    vals.append(norm * v if math.isfinite(v) else -math.inf)
                if all(math.isfinite(v) for v in vals):
                    worst_gap = min(worst_gap, vals[2] - vals[0] - vals[1])
    checks.append(_check("superadditivity of the homogeneous extension",
                         worst_gap > -1e-7, f"min surplus {worst_gap:.2e}"))

    # maxima equal the entropies
    val, arg = maximize_psi_2d(lambda p: fib.psi(Direction((p, 1 - p)), "boundary").value,
                               lo=0.52, hi=0.98)
    checks.append(_check("maximum equals log((1+sqrt 5)/2) (golden mean)",
                         abs(val - math.log(PHI)) < 1e-6
                         and abs(arg - (5 + math.sqrt(5)) / 10) < 1e-4,
                         f"max {val:.12f} at p = {arg:.6f}"))
    val2, _ = maximize_psi_2d(lambda p: f2.psi(Direction((p, 1 - p)), "boundary").value)
    checks.append(_check("maximum equals log 3 (rank-two free group)",
                         abs(val2 - math.log(3)) < 1e-6, f"max {val2:.12f}"))
    mono = get_language("free_monoid", 2)
    val3, _ = maximize_psi_2d(lambda p: mono.psi(Direction((p, 1 - p)), "boundary").value)
    checks.append(_check("maximum equals log 2 (free monoid)",
                         abs(val3 - math.log(2)) < 1e-6, f"max {val3:.12f}"))
    return checks


def suite_spectral() -> list[Check]:
    checks: list[Check] = []
    fib_adj = adjacency(catalog_automaton("fibonacci"))
    data = perron(fib_adj)
    checks.append(_check("dominant eigenvalue of the golden-mean matrix",
                         abs(data.rho - PHI) < 1e-10, f"rho = {data.rho!r}"))
    erg = adjacency(catalog_automaton("free_group_ergodic", 2))
    rho2 = perron(erg).rho
    checks.append(_check("dominant eigenvalue of the rank-two chain",
                         abs(rho2 - 3.0) < 1e-10, f"rho = {rho2!r}"))
    for name, m in (("fibonacci", None), ("free_group_ergodic", 2)):
        a = adjacency(catalog_automaton(name, m))
        d = perron(a)
        mat = a.to_numpy()
        res = abs(np.linalg.det(d.rho * np.eye(a.n) - mat)) / d.rho ** a.n
        checks.append(_check(f"characteristic residual ({name})", res < 1e-8,
                             f"|det(rho I - A)| scaled = {res:.2e}"))
    chain = parry(fib_adj)
    rows = np.abs(chain.P.sum(axis=1) - 1.0).max()
    checks.append(_check("stochastic rows", rows < 1e-12, f"max row defect {rows:.2e}"))
    stat = np.array([(5 + math.sqrt(5)) / 10, (5 - math.sqrt(5)) / 10])
    checks.append(_check("stationary vector of the golden-mean chain",
                         np.abs(chain.stationary - stat).max() < 1e-12,
                         f"defect {np.abs(chain.stationary - stat).max():.2e}"))

    fib = get_language("fibonacci")
    worst = 0.0
    min_rate = math.inf
    for p in np.linspace(0.52, 0.98, 13):
        r = Direction((p, 1 - p))
        psi = fib.psi(r, "boundary")
        analytic = rate_function(fib_adj, r, psi)
        sanov = sanov_rate(chain.P, r.r)
        worst = max(worst, abs(analytic - sanov))
        min_rate = min(min_rate, analytic)
    checks.append(_check("rate function matches its variational form",
                         worst < 1e-6, f"max gap {worst:.2e}"))
    checks.append(_check("rate function non-negative", min_rate > -1e-9,
                         f"min {min_rate:.2e}"))
    i_stat = rate_function(fib_adj, Direction(tuple(stat)),
                           fib.psi(Direction(tuple(stat)), "boundary"))
    checks.append(_check("rate vanishes at the stationary frequencies",
                         abs(i_stat) < 1e-8, f"I = {i_stat:.2e}"))

    est = simulate_ldp(chain.P, chain.stationary, (0.66, 0.34),
                       n=200, trials=10_000, window=0.04, seed=20240229)
    analytic = rate_function(fib_adj, Direction((0.66, 0.34)),
                             fib.psi(Direction((0.66, 0.34)), "boundary"))
    checks.append(_check("Monte-Carlo rate within 0.15 of analytic",
                         est.rate is not None and abs(est.rate - analytic) < 0.15,
                         f"estimate {est.rate} vs analytic {analytic:.4f} "
                         f"({est.hits} hits)"))
    return checks


def suite_asymptotics() -> list[Check]:
    checks: list[Check] = []
    jobs = (
        (get_language("free_monoid", 2), Direction((0.5, 0.5)), 40, 400),
        (get_language("fibonacci"), Direction((2 / 3, 1 / 3)), 30, 300),
        (get_language("f2_delta"), Direction((0.5, 0.5)), 40, 400),
    )
    for lang, r, n_min, n_max in jobs:
        table = coefficients_dp(lang.automaton, n_max, LOG_DOMAIN, lang.var_map)
        psi = lang.psi(r, "closed_form").value
        rep = fit_correction(table, r, psi, n_min, n_max)
        checks.append(_check(
            f"correction exponent -1/2 ({lang.name})",
            abs(rep.slope + 0.5) < 0.05,
            f"slope {rep.slope:.4f} over {rep.n_used} points",
        ))
    h = hessian_scalar_f2((1 / 3, 1 / 3))
    checks.append(_check("saddle scalar equals 1 at the symmetric point",
                         abs(h - 1.0) < 1e-12, f"value {h!r}"))
    min_h = min(hessian_scalar_f2(f2_critical_closed(p).z_star)
                for p in np.linspace(0.01, 0.99, 99))
    checks.append(_check("saddle scalar positive across directions",
                         min_h > 0, f"min {min_h:.4f}"))

    f2 = get_language("f2_delta")
    fib = get_language("fibonacci")
    worst = 0.0
    for lang, lo in ((f2, 0.08), (fib, 0.55)):
        for p in np.linspace(lo, 0.92, 9):
            r = Direction((p, 1 - p))
            pts = critical_points(lang.series.denom, r)
            best = min(cp.height for cp in pts if cp.minimal)
            worst = max(worst, abs(best - lang.psi(r, "boundary").value))
    checks.append(_check("minimal critical height equals the boundary value",
                         worst < 1e-8, f"max gap {worst:.2e}"))
    return checks


SUITES = {
    "identities": suite_identities,
    "agreement": suite_agreement,
    "spectral": suite_spectral,
    "asymptotics": suite_asymptotics,
}


def run_suites(names) -> list[Check]:
    out: list[Check] = []
    for name in names:
        out.extend(SUITES[name]())
    return out
