"""Bar-complex cochains with values in Q/Z.

A cochain is a dense numpy table of numerators over one common denominator,
so equality, hashing and serialization are exact.  Two solvers live here:
:func:`h3_generators` (generators of H^3(G; Z/m)) and
:func:`strongly_normalize` (a cohomologous representative vanishing on every
triple with the identity among ``x, y, z, xy, yz``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd, lcm
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .coeff import CoeffValue
from .errors import DWError, NoSolution, TooLarge
from .groups import FiniteGroup, construct_group, GroupSpec
from .linalg import eliminate_mod, smith, solve_mod

# normalized cochain spaces are indexed by tuples of non-identity elements;
# (order-1)^4 rows are needed for H^3, so keep that bounded
MAX_H3_ROWS = 200_000
MAX_DENOMINATOR = 10**6


class _Cochain:
    """Shared storage: ``num`` (int64 array) over ``den``, entries in ``[0, den)``."""

    degree = 0
    __slots__ = ("group", "num", "den", "_hash")

    def __init__(self, group: FiniteGroup, num, den: int = 1):
        if den <= 0:
            raise DWError("cochain denominator must be positive")
        arr = np.array(num, dtype=np.int64) % den
        if arr.shape != (group.order,) * self.degree:
            raise DWError(f"cochain table must have shape {(group.order,) * self.degree}")
        g = gcd(den, *map(int, np.unique(arr)))
        if g > 1:
            arr //= g
            den //= g
        arr.setflags(write=False)
        self.group = group
        self.num = arr
        self.den = den
        self._hash = None

    @classmethod
    def zero(cls, group: FiniteGroup):
        return cls(group, np.zeros((group.order,) * cls.degree, dtype=np.int64), 1)

    @classmethod
    def from_values(cls, group: FiniteGroup, values):
        """Build from a nested table of anything :meth:`CoeffValue.from_fraction` accepts."""
        flat = [CoeffValue.from_fraction(v) for v in np.array(values, dtype=object).reshape(-1)]
        den = lcm(1, *(v.den for v in flat))
        num = np.array([v.num * (den // v.den) for v in flat], dtype=np.int64)
        return cls(group, num.reshape((group.order,) * cls.degree), den)

    def __call__(self, *args: int) -> CoeffValue:
        return CoeffValue(int(self.num[args]), self.den)

    def scaled_to(self, den: int) -> np.ndarray:
        """Numerators over ``den`` (which must be a multiple of ``self.den``)."""
        if den % self.den:
            raise DWError(f"{den} is not a multiple of {self.den}")
        return self.num * (den // self.den)

    def _combine(self, other, sign: int):
        if other.group != self.group or other.degree != self.degree:
            raise DWError("cochains live on different groups or degrees")
        den = lcm(self.den, other.den)
        return type(self)(self.group, self.scaled_to(den) + sign * other.scaled_to(den), den)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return type(self)(self.group, -self.num, self.den)

    def scale(self, k: int):
        return type(self)(self.group, self.num * k, self.den)

    def is_zero(self) -> bool:
        return not self.num.any()

    def __eq__(self, other):
        return (type(other) is type(self) and other.group == self.group
                and other.den == self.den and np.array_equal(other.num, self.num))

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.group, self.den, self.num.tobytes())))
        return self._hash

    def values(self) -> list:
        """Nested lists of ``"num/den"`` strings (index order as stored)."""
        def fmt(a):
            if a.ndim == 0:
                return str(CoeffValue(int(a), self.den))
            return [fmt(b) for b in a]
        return fmt(self.num)

    def __repr__(self):
        return f"{type(self).__name__}({self.group.name}, den={self.den}, support={int(np.count_nonzero(self.num))})"


class Cochain2(_Cochain):
    degree = 2
    __slots__ = ()


class Cochain3(_Cochain):
    degree = 3
    __slots__ = ()


@dataclass
class FormalChain3:
    """Signed formal sum of bar simplices ``[x|y|z]``."""

    terms: list[tuple[int, tuple[int, int, int]]] = field(default_factory=list)

    def add(self, coef: int, x: int, y: int, z: int) -> "FormalChain3":
        self.terms.append((coef, (x, y, z)))
        return self

    def __add__(self, other: "FormalChain3") -> "FormalChain3":
        return FormalChain3(self.terms + other.terms)

    def __neg__(self) -> "FormalChain3":
        return FormalChain3([(-c, t) for c, t in self.terms])


def evaluate(alpha: Cochain3, chain: FormalChain3 | Iterable[tuple[int, tuple[int, int, int]]]) -> CoeffValue:
    terms = chain.terms if isinstance(chain, FormalChain3) else chain
    total = 0
    for coef, (x, y, z) in terms:
        total += coef * int(alpha.num[x, y, z])
    return CoeffValue(total, alpha.den)


def cocycle_chain(x: int, y: int, z: int, w: int, group: FiniteGroup) -> FormalChain3:
    """The five-term chain whose value on any cocycle is zero."""
    m = group.m
    return FormalChain3([(1, (y, z, w)), (-1, (m(x, y), z, w)), (1, (x, m(y, z), w)),
                         (-1, (x, y, m(z, w))), (1, (x, y, z))])


# ---------------------------------------------------------------------------
# coboundaries and predicates
# ---------------------------------------------------------------------------

def coboundary_2(beta: Cochain2) -> Cochain3:
    """``d beta (x,y,z) = beta(y,z) - beta(xy,z) + beta(x,yz) - beta(x,y)``."""
    G = beta.group
    mul, b = G.mul, beta.num
    n = G.order
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    out = b[y, z] - b[mul[x, y], z] + b[x, mul[y, z]] - b[x, y]
    return Cochain3(G, out, beta.den)


def cocycle_defect(alpha: Cochain3, x: int) -> np.ndarray:
    """Numerators of the five-term identity for fixed ``x``, indexed ``[y, z, w]``."""
    G = alpha.group
    mul, a = G.mul, alpha.num
    n = G.order
    y = np.arange(n)[:, None, None]
    z = np.arange(n)[None, :, None]
    w = np.arange(n)[None, None, :]
    d = (a[y, z, w] - a[mul[x, y], z, w] + a[x, mul[y, z], w]
         - a[x, y, mul[z, w]] + a[x, y, z])
    return d % alpha.den


def is_cocycle(alpha: Cochain3) -> bool:
    return all(not cocycle_defect(alpha, x).any() for x in range(alpha.group.order))


def bad_triple_mask(group: FiniteGroup) -> np.ndarray:
    """Boolean ``[x,y,z]`` mask: the identity is among ``x, y, z, xy, yz``."""
    n, e, mul = group.order, group.identity, group.mul
    r = np.arange(n)
    x, y, z = r[:, None, None], r[None, :, None], r[None, None, :]
    return ((x == e) | (y == e) | (z == e) | (mul[x, y] == e) | (mul[y, z] == e))


def is_strongly_normalized(alpha: Cochain3) -> bool:
    return not alpha.num[bad_triple_mask(alpha.group)].any()


def allowed_support(group: FiniteGroup) -> list[tuple[int, int, int]]:
    """Triples on which a strongly normalized cochain may be nonzero."""
    return [tuple(map(int, t)) for t in np.argwhere(~bad_triple_mask(group))]


# ---------------------------------------------------------------------------
# explicit cyclic cocycles
# ---------------------------------------------------------------------------

def cyclic_standard(n: int, k: int, group: FiniteGroup | None = None) -> Cochain3:
    """``alpha_k(a,b,c) = k*a*carry(b,c)/n`` on Z/n, carry = ``(b + c - (b+c) mod n)/n``."""
    G = group if group is not None else construct_group(GroupSpec("cyclic", n=n))
    if G.order != n:
        raise DWError("group order does not match n")
    r = np.arange(n)
    a, b, c = r[:, None, None], r[None, :, None], r[None, None, :]
    carry = (b + c) // n
    return Cochain3(G, k * a * carry, n)


# ---------------------------------------------------------------------------
# normalized bar complex (identity-free indices)
# ---------------------------------------------------------------------------

class _Normalized:
    """Index maps for cochains vanishing whenever an argument is the identity."""

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.elems = [g for g in group.elements() if g != group.identity]
        self.pos = {g: i for i, g in enumerate(self.elems)}
        self.k = len(self.elems)

    def idx(self, *gs: int) -> int | None:
        out = 0
        for g in gs:
            p = self.pos.get(g)
            if p is None:
                return None
            out = out * self.k + p
        return out

    def unidx(self, i: int, degree: int) -> tuple[int, ...]:
        out = []
        for _ in range(degree):
            i, r = divmod(i, self.k)
            out.append(self.elems[r])
        return tuple(reversed(out))

    def d3_rows(self) -> list[dict[int, int]]:
        """Rows of d: C^3 -> C^4, one per identity-free quadruple."""
        m, idx = self.group.m, self.idx
        rows = []
        for x in self.elems:
            for y in self.elems:
                xy = m(x, y)
                for z in self.elems:
                    yz = m(y, z)
                    for w in self.elems:
                        row: dict[int, int] = {}
                        for coef, t in ((1, (y, z, w)), (-1, (xy, z, w)), (1, (x, yz, w)),
                                        (-1, (x, y, m(z, w))), (1, (x, y, z))):
                            j = idx(*t)
                            if j is not None:
                                row[j] = row.get(j, 0) + coef
                        rows.append(row)
        return rows

    def d2_columns(self) -> list[dict[int, int]]:
        """Images d(e_(g,h)) in C^3 for each identity-free basis 2-cochain."""
        m, idx = self.group.m, self.idx
        cols: list[dict[int, int]] = [dict() for _ in range(self.k ** 2)]
        for x in self.elems:
            for y in self.elems:
                for z in self.elems:
                    t = idx(x, y, z)
                    for coef, pair in ((1, (y, z)), (-1, (m(x, y), z)), (1, (x, m(y, z))), (-1, (x, y))):
                        j = idx(*pair)
                        if j is not None:
                            col = cols[j]
                            col[t] = col.get(t, 0) + coef
        return cols

    def to_cochain3(self, vec: Sequence[int], den: int) -> Cochain3:
        n = self.group.order
        arr = np.zeros((n, n, n), dtype=np.int64)
        for i, v in enumerate(vec):
            if v:
                arr[self.unidx(i, 3)] = v
        return Cochain3(self.group, arr, den)


@dataclass(frozen=True)
class CohomologyGenerator:
    cocycle: Cochain3
    order: int


def h3_generators(group: FiniteGroup, m: int, max_rows: int = MAX_H3_ROWS) -> list[CohomologyGenerator]:
    """Cocycles generating ``H^3(group; (1/m)Z/Z)`` with their invariant-factor orders.

    Works in the normalized complex: first the kernel of ``d3`` modulo ``m`` is
    parametrized (unit-pivot elimination plus a Smith form of what is left),
    then the image of ``d2`` is expressed in those coordinates and a second
    Smith form reads off the quotient.
    """
    if m < 1:
        raise DWError("m must be positive")
    if m * group.order > MAX_DENOMINATOR:
        raise TooLarge(f"denominator {m * group.order} exceeds cap {MAX_DENOMINATOR}")
    nb = _Normalized(group)
    k = nb.k
    if k ** 4 > max_rows:
        raise TooLarge(f"{k ** 4} coboundary rows exceed cap {max_rows}")
    if k == 0 or m == 1:
        return []
    ncols = k ** 3
    el = eliminate_mod(nb.d3_rows(), ncols, m)
    free = el.free
    nf = len(free)
    fidx = {j: i for i, j in enumerate(free)}
    R = [[0] * nf for _ in el.residual]
    for i, row in enumerate(el.residual):
        for j, a in row.items():
            R[i][fidx[j]] = a
    if R:
        sf = smith(R, nf)
        V, Vinv = sf.V, sf.Vinv
        diag = sf.diag + [0] * (nf - len(sf.diag))
    else:
        V = Vinv = [[int(i == j) for j in range(nf)] for i in range(nf)]
        diag = [0] * nf
    # kernel: x_F = V y with y_i in t_i Z (mod m); coordinate u_i = y_i / t_i in Z/(m/t_i)
    t = [m // gcd(s, m) for s in diag]
    rows = []
    for col in nb.d2_columns():
        if not col:
            continue
        y = [sum(Vinv[i][fidx[j]] * a for j, a in col.items() if j in fidx) % m for i in range(nf)]
        u = []
        for i in range(nf):
            if y[i] % t[i]:
                raise DWError("coboundary is not a cocycle; inconsistent elimination")
            u.append(y[i] // t[i])
        rows.append(u)
    for i in range(nf):
        rows.append([(m // t[i]) * int(i == j) for j in range(nf)])
    sq = smith(rows, nf)
    out = []
    for j, d in enumerate(sq.diag):
        if d == 1 or d == 0:
            continue
        u = sq.Vinv[j]
        y = [t[i] * u[i] for i in range(nf)]
        xf = [sum(V[a][b] * y[b] for b in range(nf)) % m for a in range(nf)]
        vec = el.back_substitute({free[a]: xf[a] for a in range(nf)}, homogeneous=True)
        out.append(CohomologyGenerator(nb.to_cochain3(vec, m), d))
    return out


# ---------------------------------------------------------------------------
# strong normalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Normalization:
    alpha: Cochain3
    beta: Cochain2


def strongly_normalize(alpha: Cochain3) -> Normalization:
    """Find ``beta`` with ``alpha + d beta`` strongly normalized.

    Denominators are restricted to divisors of ``|G| * den(alpha)``; among all
    solutions the lexicographically smallest numerator table of ``beta`` is
    returned.  Raises :class:`NoSolution` when the system is infeasible.
    """
    G = alpha.group
    n = G.order
    N = n * alpha.den
    if N > MAX_DENOMINATOR:
        raise TooLarge(f"denominator {N} exceeds cap {MAX_DENOMINATOR}")
    a = alpha.scaled_to(N)
    mul = G.mul
    rows, rhs = [], []
    for (x, y, z) in np.argwhere(bad_triple_mask(G)):
        x, y, z = int(x), int(y), int(z)
        row: dict[int, int] = {}
        for coef, (p, q) in ((1, (y, z)), (-1, (int(mul[x, y]), z)), (1, (x, int(mul[y, z]))), (-1, (x, y))):
            j = p * n + q
            row[j] = row.get(j, 0) + coef
        rows.append(row)
        rhs.append(-int(a[x, y, z]))
    sol = solve_mod(rows, n * n, N, rhs)
    if sol is None:
        raise NoSolution(f"no strongly normalized representative with denominator dividing {N}")
    b = sol.lexmin()
    beta = Cochain2(G, np.array(b, dtype=np.int64).reshape(n, n), N)
    out = alpha + coboundary_2(beta)
    if not is_strongly_normalized(out):
        raise DWError("strong normalization produced an invalid representative")
    return Normalization(out, beta)


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

def cocycle_to_json(alpha: Cochain3, group_spec: dict | None = None) -> dict:
    d = {"kind": "table", "values": alpha.values()}
    if group_spec is not None:
        d["group"] = group_spec
    return d


def cocycle_from_json(data: dict, group: FiniteGroup) -> Cochain3:
    """Parse a cocycle document and check the cocycle identity."""
    kind = data.get("kind")
    if kind == "table":
        values = data.get("values")
        n = group.order
        try:
            alpha = Cochain3.from_values(group, values)
        except (ValueError, TypeError) as exc:
            raise DWError(f"bad cocycle table: {exc}") from exc
        if alpha.num.shape != (n, n, n):
            raise DWError("cocycle table has the wrong shape")
    elif kind == "cyclic_standard":
        n, k = data.get("n"), data.get("k")
        if not isinstance(n, int) or not isinstance(k, int):
            raise DWError("cyclic_standard needs integers n and k")
        alpha = cyclic_standard(n, k, group)
    elif kind == "zero":
        alpha = Cochain3.zero(group)
    else:
        raise DWError(f"unknown cocycle kind {kind!r}")
    if not is_cocycle(alpha):
        raise DWError("cochain fails the cocycle identity")
    return alpha


def load_cocycle(path: str | Path, group: FiniteGroup) -> Cochain3:
    with open(path) as fh:
        return cocycle_from_json(json.load(fh), group)
