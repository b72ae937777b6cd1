"""Solid-torus corrections.

Pulling a 3-cocycle back along ``Z -> G, a -> z^a`` gives a cocycle on the
integers, which is always a coboundary: there is ``f_z`` with

    alpha(z^a, z^b, z^c) = f(b,c) - f(a+b,c) + f(a,b+c) - f(a,b).

``f_z`` lives on Z (not on Z/ord(z)).  Its skew part
``epsilon(z; a, b) = f(a,b) - f(b,a)`` does not depend on the choice of f.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from math import gcd

import numpy as np

from .coeff import CoeffValue
from .cochains import Cochain3
from .errors import NoTrivialization, NotCoprime
from .groups import group_power
from .linalg import solve_mod


@dataclass(frozen=True)
class SlTwoMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


def complete_framing(p: int, q: int) -> SlTwoMatrix:
    """Return ``[[p, p'], [q, q']]`` in SL(2,Z).

    ``p'`` is the least non-negative solution modulo ``|p|`` (``p' = -q`` and
    ``q' = 0`` when ``p == 0``).
    """
    if gcd(p, q) != 1:
        raise NotCoprime(f"{p}/{q} is not a coprime pair")
    if p == 0:
        return SlTwoMatrix(0, -q, q, 0)
    # p q' - q p' = 1  =>  -q p' = 1 (mod |p|)
    m = abs(p)
    pp = (-pow(q, -1, m)) % m if m > 1 else 0
    qq, r = divmod(1 + q * pp, p)
    assert r == 0
    return SlTwoMatrix(p, pp, q, qq)


@dataclass(frozen=True)
class FzTable:
    """``f_z(a, b)`` for ``a, b`` in ``[-R, R]``, numerators over ``den``."""

    z: int
    R: int
    den: int
    values: np.ndarray

    def num(self, a: int, b: int) -> int:
        return int(self.values[a + self.R, b + self.R])

    def __call__(self, a: int, b: int) -> CoeffValue:
        return CoeffValue(self.num(a, b), self.den)

    def epsilon_num(self, a: int, b: int) -> int:
        return self.num(a, b) - self.num(b, a)


def _powers(alpha: Cochain3, z: int, R: int) -> dict[int, int]:
    G = alpha.group
    return {a: group_power(G, z, a) for a in range(-2 * R - 1, 2 * R + 2)}


def _recursion_table(alpha: Cochain3, z: int, R: int, pw: dict[int, int]) -> np.ndarray:
    den, A = alpha.den, alpha.num
    size = 2 * R + 1
    f = np.zeros((size, size), dtype=np.int64)
    zb = np.array([pw[b] for b in range(-R, R + 1)])
    # f(1, .) = 0; f(a+1, b) = f(a, b) - alpha(z, z^a, z^b)
    for a in range(1, R):
        f[a + 1 + R] = (f[a + R] - A[z, pw[a], zb]) % den
    for a in range(0, -R - 1, -1):
        f[a + R] = (f[a + 1 + R] + A[z, pw[a], zb]) % den
    return f


def fz_residual(alpha: Cochain3, table: FzTable) -> list[tuple[int, int, int]]:
    """Triples ``(a,b,c)`` in range where the trivialization identity fails."""
    R, den, A = table.R, table.den, alpha.num
    if den % alpha.den:
        return [(0, 0, 0)]
    scale = den // alpha.den
    pw = _powers(alpha, table.z, R)
    f = table.values
    bad = []
    rng = range(-R, R + 1)
    for a in rng:
        for b in rng:
            if not -R <= a + b <= R:
                continue
            for c in rng:
                if not -R <= b + c <= R:
                    continue
                lhs = scale * int(A[pw[a], pw[b], pw[c]])
                rhs = (f[b + R, c + R] - f[a + b + R, c + R] + f[a + R, b + c + R] - f[a + R, b + R])
                if (lhs - int(rhs)) % den:
                    bad.append((a, b, c))
    return bad


def _linear_table(alpha: Cochain3, z: int, R: int, pw: dict[int, int]) -> np.ndarray | None:
    den, A = alpha.den, alpha.num
    size = 2 * R + 1

    def col(a, b):
        return (a + R) * size + (b + R)

    rows, rhs = [], []
    rng = range(-R, R + 1)
    for a in rng:
        for b in rng:
            if not -R <= a + b <= R:
                continue
            for c in rng:
                if not -R <= b + c <= R:
                    continue
                row: dict[int, int] = {}
                for coef, (u, v) in ((1, (b, c)), (-1, (a + b, c)), (1, (a, b + c)), (-1, (a, b))):
                    j = col(u, v)
                    row[j] = row.get(j, 0) + coef
                rows.append(row)
                rhs.append(int(A[pw[a], pw[b], pw[c]]))
    sol = solve_mod(rows, size * size, den, rhs)
    if sol is None:
        return None
    return np.array(sol.particular, dtype=np.int64).reshape(size, size)


def build_fz(alpha: Cochain3, z: int, R: int, method: str = "recursion") -> FzTable:
    """Trivialize ``alpha`` along ``a -> z^a`` on the grid ``[-R, R]^2``.

    The result is always checked against the trivialization identity; if the
    recursion fails the check, an exact linear solve over the grid is tried.
    ``method="linear"`` skips the recursion.
    """
    R = max(int(R), 1)
    pw = _powers(alpha, z, R)
    if method == "recursion":
        table = FzTable(z, R, alpha.den, _recursion_table(alpha, z, R, pw))
        if not fz_residual(alpha, table):
            return table
    elif method != "linear":
        raise ValueError(f"unknown method {method!r}")
    values = _linear_table(alpha, z, R, pw)
    if values is not None:
        table = FzTable(z, R, alpha.den, values)
        if not fz_residual(alpha, table):
            return table
    raise NoTrivialization(f"no trivialization found for z={z} on [-{R},{R}]")


DEFAULT_RANGE = 6

_cache: dict[tuple[Cochain3, int], FzTable] = {}
_cache_lock = threading.Lock()


def fz_table(alpha: Cochain3, z: int, R: int) -> FzTable:
    """Memoized :func:`build_fz`; tables only ever grow."""
    key = (alpha, z)
    table = _cache.get(key)
    if table is not None and table.R >= R:
        return table
    table = build_fz(alpha, z, max(R, DEFAULT_RANGE, 2 * (table.R if table else 0)))
    with _cache_lock:
        old = _cache.get(key)
        if old is None or old.R < table.R:
            _cache[key] = table
    return table


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def epsilon(alpha: Cochain3, z: int, a: int, b: int) -> CoeffValue:
    """``f_z(a,b) - f_z(b,a)``, with the grid grown as needed."""
    R = max(abs(a), abs(b), abs(a + b)) + 1
    table = fz_table(alpha, z, R)
    return CoeffValue(table.epsilon_num(a, b), table.den)
