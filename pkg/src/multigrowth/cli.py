"""Command-line front end.

Subcommands wrap the library one-to-one and emit plot-ready delimited
files (comma separated, header row, UTF-8, floats through %.12g, minus
infinity as the literal ``-inf``):

* ``series``    exact growth series; human-readable normal form on stdout,
                JSON document (variables, G, H) to ``--out``.
* ``coeffs``    coefficient table export.
* ``psi``       directional growth-rate curves by any subset of the four
                routes.
* ``amoeba``    the real positive slice of the singular surface (d = 2).
* ``rate``      analytic vs variational rate-function curves.
* ``critical``  critical points of the height function for one direction.
* ``simulate``  seeded Monte-Carlo rate estimate.
* ``chi``       walk spectral radius against subgroup growth rate.
* ``verify``    invariant suites; exit 1 on any failure.

Exit codes: 0 success, 1 failed verification, 2 invalid input, 3 size
bound exceeded, 4 method not applicable to the chosen language.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .automaton import AutomatonError
from .indicatrice import (ExtendedValue, amoeba_slice, direction_grid_2d,
                          direction_grid_3d)
from .polyalg import SizeBoundError
from .registry import METHODS, Language, MethodUnavailable, get_language, language_from_file
from .series import EXACT, LOG_DOMAIN
from .spectral import parry, rate_function, sanov_rate, simulate_ldp
from .verify import SUITES, run_suites

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_SIZE_BOUND = 3
EXIT_METHOD = 4


@dataclass
class RunConfig:
    subcommand: str
    language: str | None = None
    automaton: str | None = None
    m: int | None = None
    paired: bool = False
    method: str = "all"
    grid: int = 101
    r: tuple[float, ...] | None = None
    max_total: int = 60
    mode: str = EXACT
    seed: int = 0
    out: str | None = None
    suite: str = "all"
    tol: float = 1e-10
    cone_eps: float = 0.05
    extra: dict = field(default_factory=dict)


def _fmt(x: float) -> str:
    return f"{float(x) + 0.0:.12g}"


def _psi_value(v) -> float:
    return v.value if isinstance(v, ExtendedValue) else float(v)


def _write(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_language(cfg: RunConfig) -> Language:
    if (cfg.language is None) == (cfg.automaton is None):
        raise AutomatonError("specify exactly one of --language and --automaton")
    if cfg.automaton is not None:
        try:
            return language_from_file(cfg.automaton)
        except OSError as exc:
            raise AutomatonError(f"cannot read {cfg.automaton}: {exc}") from exc
    return get_language(cfg.language, cfg.m, cfg.paired)


def _parse_direction(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise AutomatonError(f"--r: cannot parse {text!r}") from exc
    return vals


# ---------------------------------------------------------------------------
# subcommands

def cmd_series(cfg: RunConfig) -> int:
    lang = _load_language(cfg)
    if lang.series is None:
        raise MethodUnavailable(f"{lang.name}: no rational series")
    doc = json.dumps(lang.series.to_doc(), indent=2) + "\n"
    if cfg.out == "-":
        sys.stdout.write(doc)
    else:
        if cfg.out is not None:
            _write(cfg.out, doc)
        print(lang.series.format())
    return EXIT_OK


def cmd_coeffs(cfg: RunConfig) -> int:
    lang = _load_language(cfg)
    table = lang.table(cfg.max_total, cfg.mode)
    header = ",".join(f"i{k + 1}" for k in range(table.d))
    header += ",count" if table.mode == EXACT else ",logcount"
    _write(cfg.out, header + "\n" + table.to_text())
    return EXIT_OK


def cmd_psi(cfg: RunConfig) -> int:
    lang = _load_language(cfg)
    available = lang.methods()
    if cfg.method == "all":
        methods = [m for m in METHODS if m in available]
        if not methods:
            raise MethodUnavailable(f"{lang.name}: no psi route available")
    else:
        if cfg.method not in METHODS:
            raise AutomatonError(f"--method: unknown method {cfg.method!r}")
        if cfg.method not in available:
            raise MethodUnavailable(f"{lang.name}: method {cfg.method!r} not applicable")
        methods = [cfg.method]

    table = lang.table(cfg.max_total) if "empirical" in methods else None
    if cfg.r is not None:
        directions = [cfg.r]
    elif lang.d == 2:
        directions = [d.r for d in direction_grid_2d(cfg.grid)]
    elif lang.d == 3:
        grid = max(2, int(round(cfg.grid ** 0.5)))
        directions = [d.r for d in direction_grid_3d(grid)]
    else:
        raise MethodUnavailable(
            f"{lang.name}: curves need 2 or 3 variables (have {lang.d}); pass --r instead")

    coord_names = ["p", "q", "s"][: max(lang.d - 1, 1)]
    lines = [",".join(coord_names) + ",psi,method"]
    for r in directions:
        interior = all(x > 0 for x in r)
        for method in methods:
            if method == "tmap" and not interior:
                continue
            try:
                value = _psi_value(lang.psi(r, method, table=table,
                                            cone_eps=cfg.cone_eps, tol=cfg.tol))
            except RuntimeError:
                # a route may fail to settle exactly at a transition
                # direction (infimum approached but not attained); omit the row
                continue
            coords = ",".join(_fmt(x) for x in r[:-1]) if len(r) > 1 else _fmt(r[0])
            lines.append(f"{coords},{_fmt(value)},{method}")
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_amoeba(cfg: RunConfig) -> int:
    lang = _load_language(cfg)
    if lang.series is None or lang.series.nvars != 2:
        raise MethodUnavailable(f"{lang.name}: amoeba slice needs a two-variable denominator")
    pts = amoeba_slice(lang.series.denom, cfg.grid)
    lines = ["s,t"] + [f"{_fmt(s)},{_fmt(t)}" for s, t in pts]
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_rate(cfg: RunConfig) -> int:
    lang = _load_language(cfg)
    if lang.tmap_automaton is None or lang.d != 2:
        raise MethodUnavailable(f"{lang.name}: rate curves need a two-letter "
                                "vertex-labeled chain")
    from .automaton import adjacency
    adj = adjacency(lang.tmap_automaton)
    chain = parry(adj)
    lines = ["p,I_analytic,I_sanov"]
    for d in direction_grid_2d(cfg.grid, endpoints=False):
        try:
            psi = lang.psi(d, "boundary" if lang._boundary_ready() else "tmap", tol=cfg.tol)
        except RuntimeError:
            continue  # transition direction; see cmd_psi
        analytic = rate_function(adj, d, psi)
        sanov = sanov_rate(chain.P, d.r) if analytic != float("inf") else float("inf")
        lines.append(f"{_fmt(d.r[0])},{_fmt(analytic)},{_fmt(sanov)}")
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_critical(cfg: RunConfig) -> int:
    from .asymptotics import critical_points
    lang = _load_language(cfg)
    if cfg.r is None:
        raise AutomatonError("critical: pass a direction with --r")
    if not lang._boundary_ready():
        raise MethodUnavailable(f"{lang.name}: no combinatorially positive denominator")
    pts = critical_points(lang.series.denom, cfg.r, tol=cfg.tol)
    lines = []
    for cp in pts:
        z = " ".join(_fmt(x) for x in cp.z_star)
        lines.append(f"z=({z}) lambda={_fmt(cp.lam)} height={_fmt(cp.height)} "
                     f"minimal={'yes' if cp.minimal else 'no'}")
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    from .automaton import adjacency
    lang = _load_language(cfg)
    if lang.tmap_automaton is None:
        raise MethodUnavailable(f"{lang.name}: simulation needs a vertex-labeled chain")
    if cfg.r is None:
        raise AutomatonError("simulate: pass a direction with --r")
    adj = adjacency(lang.tmap_automaton)
    chain = parry(adj)
    n = cfg.extra.get("n", 200)
    trials = cfg.extra.get("trials", 10_000)
    window = cfg.extra.get("window", 0.05)
    est = simulate_ldp(chain.P, chain.stationary, cfg.r, n=n, trials=trials,
                       window=window, seed=cfg.seed)
    lines = [
        f"seed={est.seed}",
        f"n={est.n}",
        f"trials={est.trials}",
        f"window={_fmt(est.window)}",
        f"direction={','.join(_fmt(x) for x in cfg.r)}",
        f"hits={est.hits}",
        f"fraction={_fmt(est.fraction)}",
        f"rate_estimate={'no hits' if est.no_hits else _fmt(est.rate)}",
        f"rate_ci={_fmt(est.rate_ci[0])},{_fmt(est.rate_ci[1])}",
    ]
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_chi(cfg: RunConfig) -> int:
    from .catalog import chi_of_alpha
    m = cfg.m or 2
    import numpy as np
    top = 2 * m - 1
    lines = ["alpha,chi"]
    normal = bool(cfg.extra.get("normal"))
    lo = (top ** 0.5) * (1 + 1e-12) if normal else 1.0
    for alpha in np.linspace(lo, top, cfg.grid):
        lines.append(f"{_fmt(alpha)},{_fmt(chi_of_alpha(float(alpha), m, normal=normal))}")
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise AutomatonError(f"--suite: unknown suite {unknown[0]!r}")
    checks = run_suites(names)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name} ({c.detail})")
    if cfg.out:
        doc = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]
        _write(cfg.out, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# argument parsing

def _add_language_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--language", help="catalog language name")
    p.add_argument("--automaton", help="path to an automaton document")
    p.add_argument("--m", type=int, help="rank / alphabet-size parameter")
    p.add_argument("--paired", action="store_true",
                   help="grade each generator together with its inverse")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path; '-' for standard output")
    p.add_argument("--tol", type=float, default=1e-10)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multigrowth", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("series", help="exact growth series")
    _add_language_opts(p)
    _add_common(p)

    p = sub.add_parser("coeffs", help="coefficient table")
    _add_language_opts(p)
    _add_common(p)
    p.add_argument("--max-total", type=int, default=60)
    p.add_argument("--mode", choices=[EXACT, "log"], default=EXACT)

    p = sub.add_parser("psi", help="directional growth-rate curves")
    _add_language_opts(p)
    _add_common(p)
    p.add_argument("--method", default="all", help="boundary|tmap|empirical|closed_form|all")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--r", help="single direction p,q[,s]")
    p.add_argument("--max-total", type=int, default=60, help="table size for the empirical route")
    p.add_argument("--cone-eps", type=float, default=0.05)

    p = sub.add_parser("amoeba", help="real positive slice of the singular surface")
    _add_language_opts(p)
    _add_common(p)
    p.add_argument("--grid", type=int, default=200)

    p = sub.add_parser("rate", help="rate-function curves")
    _add_language_opts(p)
    _add_common(p)
    p.add_argument("--grid", type=int, default=51)

    p = sub.add_parser("critical", help="critical points for one direction")
    _add_language_opts(p)
    _add_common(p)
    p.add_argument("--r", required=True, help="direction p,q[,s]")

    p = sub.add_parser("simulate", help="Monte-Carlo rate estimate")
    _add_language_opts(p)
    _add_common(p)
    p.add_argument("--r", required=True, help="direction over the alphabet")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--window", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("chi", help="walk spectral radius against growth rate")
    _add_common(p)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--normal", action="store_true",
                   help="restrict to the normal-subgroup range")

    p = sub.add_parser("verify", help="invariant suites")
    _add_common(p)
    p.add_argument("--suite", default="all",
                   help="identities|agreement|spectral|asymptotics|all")
    return parser


_COMMANDS = {
    "series": cmd_series,
    "coeffs": cmd_coeffs,
    "psi": cmd_psi,
    "amoeba": cmd_amoeba,
    "rate": cmd_rate,
    "critical": cmd_critical,
    "simulate": cmd_simulate,
    "chi": cmd_chi,
    "verify": cmd_verify,
}


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    for name in ("language", "automaton", "m", "paired", "method", "grid",
                 "out", "suite", "tol"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "max_total", None) is not None:
        cfg.max_total = args.max_total
    if getattr(args, "cone_eps", None) is not None:
        cfg.cone_eps = args.cone_eps
    if getattr(args, "mode", None):
        cfg.mode = LOG_DOMAIN if args.mode == "log" else EXACT
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "r", None):
        cfg.r = _parse_direction(args.r)
    for name in ("n", "trials", "window", "normal"):
        if hasattr(args, name) and getattr(args, name) is not None:
            cfg.extra[name] = getattr(args, name)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config_from_args(args)
    try:
        return _COMMANDS[cfg.subcommand](cfg)
    except SizeBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE_BOUND
    except MethodUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_METHOD
    except (AutomatonError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
