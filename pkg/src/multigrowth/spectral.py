"""Perron eigendata, the maximal-entropy Markov chain, and rate functions.

For an irreducible non-negative integer matrix A this module computes the
dominant eigentriple (rho, u, v) by two-sided power iteration, builds the
row-stochastic matrix p_ij = a_ij v_j / (rho v_i) together with its
stationary vector, and exposes the large-deviations side of the story:

* the rate function I(r) = log rho - psi(r) of empirical letter
  frequencies,
* its variational form  I(r) = sup_{u >> 0} sum_j r_j log(u_j / (uP)_j),
* the map T carrying an interior probability vector q to a point of the
  singular set of the transfer matrix,  s_j = q_j / (v_j sum_i q_i a_ij / v_i),
  with the identities t A(s) = t and det(I - A(s)) = 0 it satisfies,
* seeded Monte-Carlo estimation of I on frequency windows.

The stationary vector is normalized as a probability vector; cylinder
masses p_i v_j / rho^n are therefore reported up to the constant that a
<p, v> = 1 normalization would fix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .automaton import AdjacencyMatrix


def _as_matrix(a) -> np.ndarray:
    if isinstance(a, AdjacencyMatrix):
        return a.to_numpy()
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("adjacency must be square")
    return m


def _is_irreducible(m: np.ndarray) -> bool:
    n = m.shape[0]
    adj = m > 0

    def reach(transpose: bool) -> np.ndarray:
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            i = stack.pop()
            row = adj[:, i] if transpose else adj[i]
            for j in np.nonzero(row)[0]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        return seen

    return bool(reach(False).all() and reach(True).all())


@dataclass
class SpectralData:
    """Perron triple plus (optionally) the maximal-entropy chain."""

    rho: float
    u: np.ndarray  # left eigenvector, <u, v> = 1
    v: np.ndarray  # right eigenvector, sum(v) = 1
    P: np.ndarray | None = None
    stationary: np.ndarray | None = None

    def cylinder_measure(self, i: int, j: int, n: int) -> float:
        """Mass of the length-n cylinder from state i to state j, up to the
        normalization constant discussed in the module docstring."""
        if self.P is None or self.stationary is None:
            raise ValueError("cylinder measure needs the full chain; call parry()")
        return float(self.stationary[i] * self.v[j] / self.rho ** n)


def perron(a, tol: float = 1e-15, max_iter: int = 200000) -> SpectralData:
    """Dominant eigentriple by two-sided power iteration.

    Iterates v <- Av and u <- A^T u with l1 renormalization; stops when the
    one-sided eigenvalue estimates settle to within ``tol`` and the
    eigenvector residuals are at noise level (the estimate and the vectors
    converge at the same geometric rate, so a tight delta pins both).  The
    reported rho is the final two-sided Rayleigh quotient.
    """
    m = _as_matrix(a)
    n = m.shape[0]
    if not _is_irreducible(m):
        raise ValueError("matrix is reducible; the dominant eigendata are not unique")
    v = np.full(n, 1.0 / n)
    u = np.full(n, 1.0 / n)
    rho = 0.0
    res_tol = max(20 * tol, 1e-13)
    for _ in range(max_iter):
        av = m @ v
        au = m.T @ u
        rho_new = float(av.sum())  # v is l1-normalized
        v = av / av.sum()
        u = au / au.sum()
        if abs(rho_new - rho) < tol:
            res = max(float(np.max(np.abs(m @ v - rho_new * v))),
                      float(np.max(np.abs(m.T @ u - rho_new * u))))
            rho = rho_new
            if res < res_tol * max(rho_new, 1.0):
                break
        else:
            rho = rho_new
    else:
        raise RuntimeError("power iteration did not converge")
    if np.any(v <= 0) or np.any(u <= 0):
        raise RuntimeError("eigenvectors failed to stay positive")
    rho = float(u @ m @ v) / float(u @ v)
    u = u / float(u @ v)
    return SpectralData(rho=rho, u=u, v=v)


def parry(a, tol: float = 1e-14) -> SpectralData:
    """Maximal-entropy chain of a {0,1} irreducible adjacency matrix."""
    m = _as_matrix(a)
    if not np.all((m == 0) | (m == 1)):
        raise ValueError("chain construction requires entries in {0, 1}")
    data = perron(a, tol)
    v = data.v
    p_matrix = m * v[None, :] / (data.rho * v[:, None])
    n = m.shape[0]
    pi = np.full(n, 1.0 / n)
    for _ in range(200000):
        nxt = pi @ p_matrix
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - pi)) < 1e-16:
            pi = nxt
            break
        pi = nxt
    return SpectralData(rho=data.rho, u=data.u, v=v, P=p_matrix, stationary=pi)


def rate_function(a, r, psi) -> float:
    """I(r) = log rho - psi(r); +infinity on the unreachable side."""
    value = getattr(psi, "value", psi)
    rho = perron(a).rho
    if value == float("-inf"):
        return float("inf")
    return math.log(rho) - float(value)


def sanov_rate(p_matrix, r, tol: float = 1e-12) -> float:
    """sup over positive u of sum_j r_j log(u_j / (uP)_j).

    The functional is scale invariant, so the gauge u_1 = 1 is fixed and the
    optimization runs in log coordinates to preserve positivity.
    """
    p_matrix = np.asarray(p_matrix, float)
    r = np.asarray(r, float)
    d = len(r)
    if p_matrix.shape != (d, d):
        raise ValueError("direction length must match the matrix size")
    if not _is_irreducible(p_matrix):
        raise ValueError("stochastic matrix must be irreducible")
    if np.any(r <= 0):
        raise ValueError("direction must be interior")

    def neg(xi):
        u = np.exp(np.concatenate(([0.0], xi)))
        up = u @ p_matrix
        val = float(np.sum(r * (np.log(u) - np.log(up))))
        # d/dlog u_k of the objective
        grad_full = r - (u * (p_matrix @ (r / up)))
        return -val, -grad_full[1:]

    res = minimize(neg, np.zeros(d - 1), jac=True, method="L-BFGS-B",
                   options={"maxiter": 2000, "ftol": 1e-18, "gtol": 1e-13})
    if not np.all(np.isfinite(res.x)):
        raise RuntimeError("rate optimization diverged")
    val, grad = neg(res.x)
    if float(np.max(np.abs(grad))) > math.sqrt(tol):
        raise RuntimeError("rate optimization did not reach a stationary point")
    return -val


def t_map(a, q):
    """Image s = T(q) on the singular set, plus the auxiliary vector t = q/v."""
    m = _as_matrix(a)
    if not np.all((m == 0) | (m == 1)):
        raise ValueError("the map requires entries in {0, 1}")
    if not _is_irreducible(m):
        raise ValueError("matrix must be irreducible")
    q = np.asarray(q, float)
    if np.any(q <= 0) or abs(q.sum() - 1.0) > 1e-9:
        raise ValueError("q must be an interior probability vector")
    v = perron(a).v
    t = q / v
    s = q / (v * (t @ m))
    return s, t


@dataclass
class TReport:
    fixed_vector_residual: float
    det_residual: float
    passed: bool


def verify_t_identities(a, q, vec_tol: float = 1e-12, det_tol: float = 1e-10) -> TReport:
    """Check t A(s) = t and det(I - A(s)) = 0 at s = T(q)."""
    m = _as_matrix(a)
    s, t = t_map(a, q)
    a_s = m * s[None, :]
    vec_res = float(np.max(np.abs(t @ a_s - t)))
    det_res = float(abs(np.linalg.det(np.eye(m.shape[0]) - a_s)))
    return TReport(fixed_vector_residual=vec_res, det_residual=det_res,
                   passed=vec_res < vec_tol and det_res < det_tol)


@dataclass
class LdpEstimate:
    """Monte-Carlo estimate of the decay rate of a frequency window."""

    n: int
    trials: int
    window: float
    seed: int
    hits: int
    fraction: float
    rate: float | None          # -(1/n) log fraction; None when no hits
    rate_ci: tuple[float, float]
    no_hits: bool


def simulate_ldp(p_matrix, stationary, r, n: int, trials: int,
                 window: float, seed: int) -> LdpEstimate:
    """Sample the chain and measure how rare the frequency window around r is.

    Trajectories of length n start from the stationary law; the estimate is
    -(1/n) log of the fraction of trajectories whose empirical state
    frequency lies within l1 distance ``window`` of r.  A Wilson interval on
    the fraction is transported through the same transform.  Reproducible
    for a fixed (seed, trials) pair.
    """
    if window <= 0:
        raise ValueError("window must be positive")
    if n <= 0 or trials <= 0:
        raise ValueError("n and trials must be positive")
    p_matrix = np.asarray(p_matrix, float)
    stationary = np.asarray(stationary, float)
    r = np.asarray(r, float)
    d = p_matrix.shape[0]
    rng = np.random.default_rng(seed)
    cum = np.cumsum(p_matrix, axis=1)
    cum_init = np.cumsum(stationary)

    state = np.searchsorted(cum_init, rng.random(trials), side="right").clip(0, d - 1)
    freq = np.zeros((trials, d))
    freq[np.arange(trials), state] += 1.0
    for _ in range(n - 1):
        u = rng.random(trials)
        state = (u[:, None] > cum[state]).sum(axis=1).clip(0, d - 1)
        freq[np.arange(trials), state] += 1.0
    freq /= n
    dist = np.abs(freq - r[None, :]).sum(axis=1)
    hits = int((dist <= window).sum())
    fraction = hits / trials

    z = 1.959963984540054  # 95% normal quantile
    denom = 1.0 + z * z / trials
    center = (fraction + z * z / (2 * trials)) / denom
    half = z * math.sqrt(fraction * (1 - fraction) / trials + z * z / (4 * trials * trials)) / denom
    lo, hi = max(center - half, 0.0), min(center + half, 1.0)
    rate_hi = float("inf") if lo == 0.0 else -math.log(lo) / n
    rate_lo = float("inf") if hi == 0.0 else -math.log(hi) / n
    return LdpEstimate(
        n=n, trials=trials, window=window, seed=seed, hits=hits, fraction=fraction,
        rate=None if hits == 0 else -math.log(fraction) / n,
        rate_ci=(rate_lo, rate_hi),
        no_hits=hits == 0,
    )
