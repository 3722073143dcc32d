"""Exact multivariate polynomial arithmetic over the integers.

Everything downstream (transfer matrices, determinants, rational growth
series) is built on :class:`MultiPoly`, a sparse exponent-vector -> integer
map with arbitrary-precision coefficients.  There is deliberately no
polynomial GCD engine here: the rational series produced by the
transfer-matrix method arise essentially reduced, and the only cancellation
ever needed is by binomial factors ``1 - z_i`` / ``1 + z_i``, which exact
long division handles.

Monomial conventions
--------------------
* Exponent vectors are tuples of length ``nvars``.
* Canonical printing order is graded lexicographic in the declared variable
  order, ascending total degree ("1 - z1 - z1*z2").
* Serialization maps exponent-vector strings ``"i1,i2,...,id"`` to integer
  strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Sequence


class SizeBoundError(ValueError):
    """Raised when a determinant exceeds the configured size bound."""


DET_SIZE_BOUND = 12  # cofactor expansion is exponential; keep desk scale


def _grlex_leading_key(e: tuple) -> tuple:
    # admissible term order used for long division (max = leading term)
    return (sum(e), e)


def _print_key(e: tuple) -> tuple:
    # ascending total degree, ties broken by the declared variable order
    return (sum(e), tuple(-x for x in e))


class MultiPoly:
    """Sparse integer-coefficient polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, int] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be >= 0")
        self.nvars = nvars
        clean: dict[tuple, int] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nvars:
                    raise ValueError(f"exponent vector {e} has length {len(e)}, expected {nvars}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                c = int(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if clean[e] == 0:
                        del clean[e]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars: int, c: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls.const(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    # -- ring structure ----------------------------------------------------

    def _check_compat(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(self.nvars, other)
        self._check_compat(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        out = MultiPoly.__new__(MultiPoly)
        out.nvars, out.terms = self.nvars, t
        return out

    __radd__ = __add__

    def __neg__(self):
        out = MultiPoly.__new__(MultiPoly)
        out.nvars = self.nvars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return MultiPoly.zero(self.nvars)
            out = MultiPoly.__new__(MultiPoly)
            out.nvars = self.nvars
            out.terms = {e: c * other for e, c in self.terms.items()}
            return out
        self._check_compat(other)
        t: dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    del t[e]
        out = MultiPoly.__new__(MultiPoly)
        out.nvars, out.terms = self.nvars, t
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(self.nvars, other)
        return isinstance(other, MultiPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)

    def involves(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, abs(c))
        return g

    # -- calculus / evaluation ---------------------------------------------

    def partial(self, i: int) -> "MultiPoly":
        t: dict[tuple, int] = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return MultiPoly(self.nvars, t)

    def eval(self, x: Sequence[float]) -> float:
        """Floating evaluation with exactly-rounded (compensated) summation."""
        if len(x) != self.nvars:
            raise ValueError(f"point has length {len(x)}, expected {self.nvars}")
        parts = []
        for e, c in self.terms.items():
            m = float(c)
            for xi, ei in zip(x, e):
                if ei:
                    m *= xi ** ei
            parts.append(m)
        return math.fsum(parts)

    def gradient(self, x: Sequence[float]) -> tuple:
        return tuple(self.partial(i).eval(x) for i in range(self.nvars))

    def eval_exact(self, x: Sequence) -> object:
        """Evaluation in exact arithmetic (ints / Fractions)."""
        acc = 0
        for e, c in self.terms.items():
            m = c
            for xi, ei in zip(x, e):
                if ei:
                    m *= xi ** ei
            acc += m
        return acc

    # -- substitution ------------------------------------------------------

    def restrict_zero(self, drop: Iterable[int]) -> "MultiPoly":
        """Set the listed variables to 0 and remove them from the ring."""
        drop = sorted(set(drop))
        keep = [i for i in range(self.nvars) if i not in drop]
        t: dict[tuple, int] = {}
        for e, c in self.terms.items():
            if any(e[i] for i in drop):
                continue
            ne = tuple(e[i] for i in keep)
            t[ne] = t.get(ne, 0) + c
        return MultiPoly(len(keep), t)

    def univariate_coeffs(self, k: int, values: Sequence[float]) -> list:
        """Coefficients of this polynomial viewed as univariate in variable k.

        ``values`` supplies numbers for the other variables (entry k ignored).
        Returns ``[c_0, c_1, ...]`` with float entries.
        """
        deg = self.degree_in(k)
        parts: list[list[float]] = [[] for _ in range(deg + 1)]
        for e, c in self.terms.items():
            m = float(c)
            for i, ei in enumerate(e):
                if i != k and ei:
                    m *= values[i] ** ei
            parts[e[k]].append(m)
        return [math.fsum(p) for p in parts]

    # -- exact division ----------------------------------------------------

    def divide_exact(self, d: "MultiPoly") -> "MultiPoly | None":
        """Quotient self / d when division is exact over the integers, else None."""
        self._check_compat(d)
        if d.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero:
            return MultiPoly.zero(self.nvars)
        rem = dict(self.terms)
        quot: dict[tuple, int] = {}
        dlead = max(d.terms, key=_grlex_leading_key)
        dc = d.terms[dlead]
        while rem:
            rlead = max(rem, key=_grlex_leading_key)
            rc = rem[rlead]
            e = tuple(a - b for a, b in zip(rlead, dlead))
            if any(x < 0 for x in e) or rc % dc:
                return None
            c = rc // dc
            quot[e] = quot.get(e, 0) + c
            for de, dcf in d.terms.items():
                ne = tuple(a + b for a, b in zip(e, de))
                v = rem.get(ne, 0) - c * dcf
                if v:
                    rem[ne] = v
                else:
                    rem.pop(ne, None)
        return MultiPoly(self.nvars, quot)

    # -- serialization / printing ------------------------------------------

    def to_doc(self) -> dict:
        return {",".join(str(x) for x in e): str(c)
                for e, c in sorted(self.terms.items(), key=lambda kv: _print_key(kv[0]))}

    @classmethod
    def from_doc(cls, nvars: int, doc: Mapping[str, str]) -> "MultiPoly":
        terms = {}
        for key, val in doc.items():
            e = tuple(int(x) for x in key.split(","))
            terms[e] = int(val)
        return cls(nvars, terms)

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"z{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        pieces = []
        for e, c in sorted(self.terms.items(), key=lambda kv: _print_key(kv[0])):
            mono = "*".join(
                f"{names[i]}^{ei}" if ei > 1 else names[i]
                for i, ei in enumerate(e) if ei
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.format()})"


def poly_arith(op: str, p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Exact add/sub/mul with matching variable counts."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def eval_poly(p: MultiPoly, x: Sequence[float]) -> float:
    return p.eval(x)


def eval_poly_gradient(p: MultiPoly, x: Sequence[float]) -> tuple:
    return p.gradient(x)


class PolyMatrix:
    """Square matrix of :class:`MultiPoly` sharing one variable count."""

    __slots__ = ("n", "nvars", "rows")

    def __init__(self, rows: Sequence[Sequence[MultiPoly]]):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if n == 0:
            raise ValueError("empty matrix")
        nv = rows[0][0].nvars
        for r in rows:
            for p in r:
                if p.nvars != nv:
                    raise ValueError("entries disagree on variable count")
        self.n = n
        self.nvars = nv
        self.rows = [list(r) for r in rows]

    @classmethod
    def identity(cls, n: int, nvars: int) -> "PolyMatrix":
        one = MultiPoly.one(nvars)
        zero = MultiPoly.zero(nvars)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.n != other.n:
            raise ValueError("size mismatch")
        return PolyMatrix([[self.rows[i][j] - other.rows[i][j] for j in range(self.n)]
                           for i in range(self.n)])

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.n != other.n:
            raise ValueError("size mismatch")
        z = MultiPoly.zero(self.nvars)
        out = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                acc = z
                for k in range(self.n):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if not (a.is_zero or b.is_zero):
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def det(self, size_bound: int = DET_SIZE_BOUND) -> MultiPoly:
        """Exact determinant by cofactor expansion memoized over column subsets."""
        n = self.n
        if n > size_bound:
            raise SizeBoundError(f"matrix size {n} exceeds determinant bound {size_bound}")
        one = MultiPoly.one(self.nvars)
        # memo keyed by the set of unused columns; the row it pairs with is
        # determined by the popcount, so one mask never means two submatrices
        memo: dict[int, MultiPoly] = {0: one}

        def rec(mask: int) -> MultiPoly:
            got = memo.get(mask)
            if got is not None:
                return got
            row = n - bin(mask).count("1")
            acc = MultiPoly.zero(self.nvars)
            sign = 1
            m = mask
            while m:
                j = (m & -m).bit_length() - 1
                entry = self.rows[row][j]
                if not entry.is_zero:
                    acc = acc + entry * rec(mask & ~(1 << j)) * sign
                sign = -sign
                m &= m - 1
            memo[mask] = acc
            return acc

        return rec((1 << n) - 1)

    def minor(self, i: int, j: int, size_bound: int = DET_SIZE_BOUND) -> MultiPoly:
        """Determinant after deleting row i and column j (0-indexed)."""
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"minor index ({i},{j}) out of range for size {self.n}")
        if self.n == 1:
            return MultiPoly.one(self.nvars)
        sub = [[self.rows[r][c] for c in range(self.n) if c != j]
               for r in range(self.n) if r != i]
        return PolyMatrix(sub).det(size_bound)

    def eval(self, x: Sequence[float]):
        import numpy as np
        return np.array([[p.eval(x) for p in row] for row in self.rows])


def det_poly_matrix(m: PolyMatrix, size_bound: int = DET_SIZE_BOUND) -> MultiPoly:
    return m.det(size_bound)


def minor(m: PolyMatrix, i: int, j: int) -> MultiPoly:
    return m.minor(i, j)


@dataclass(frozen=True)
class RationalSeries:
    """A pair numerator/denominator with a power-series expansion at 0.

    Both parts are jointly reduced by integer content and the sign is
    normalized so the denominator has positive constant term.
    """

    numer: MultiPoly
    denom: MultiPoly

    def __post_init__(self):
        self.numer._check_compat(self.denom)
        if self.denom.constant_term == 0:
            raise ValueError("denominator must have nonzero constant term")
        g = gcd(self.numer.content(), self.denom.content())
        numer, denom = self.numer, self.denom
        if g > 1:
            numer = MultiPoly(numer.nvars, {e: c // g for e, c in numer.terms.items()})
            denom = MultiPoly(denom.nvars, {e: c // g for e, c in denom.terms.items()})
        if denom.constant_term < 0:
            numer, denom = -numer, -denom
        object.__setattr__(self, "numer", numer)
        object.__setattr__(self, "denom", denom)

    @property
    def nvars(self) -> int:
        return self.numer.nvars

    def cancel_binomial_factors(self) -> "RationalSeries":
        """Divide out common factors of the form 1 - z_i or 1 + z_i.

        This is the only reduction the artifact performs; a full multivariate
        GCD is out of scope and unnecessary for transfer-matrix output.
        """
        numer, denom = self.numer, self.denom
        changed = True
        while changed:
            changed = False
            for i in range(numer.nvars):
                for sign in (-1, 1):
                    f = MultiPoly(numer.nvars, {(0,) * numer.nvars: 1,
                                                tuple(1 if k == i else 0 for k in range(numer.nvars)): sign})
                    qn = numer.divide_exact(f)
                    if qn is None:
                        continue
                    qd = denom.divide_exact(f)
                    if qd is None:
                        continue
                    numer, denom, changed = qn, qd, True
        return RationalSeries(numer, denom)

    def format(self, names: Sequence[str] | None = None) -> str:
        return f"({self.numer.format(names)}) / ({self.denom.format(names)})"

    def __str__(self):
        return self.format()

    def to_doc(self) -> dict:
        return {"variables": self.nvars, "G": self.numer.to_doc(), "H": self.denom.to_doc()}

    @classmethod
    def from_doc(cls, doc: Mapping) -> "RationalSeries":
        nv = int(doc["variables"])
        return cls(MultiPoly.from_doc(nv, doc["G"]), MultiPoly.from_doc(nv, doc["H"]))


def elementary_symmetric(nvars: int, l: int) -> MultiPoly:
    """Sum of all squarefree degree-l monomials in nvars variables."""
    from itertools import combinations
    t = {}
    for idx in combinations(range(nvars), l):
        e = [0] * nvars
        for i in idx:
            e[i] = 1
        t[tuple(e)] = 1
    return MultiPoly(nvars, t)
