"""Finite groups given by multiplication tables.

Elements are the integers ``0 .. order-1``.  A :class:`FiniteGroup` is only
ever produced by :func:`construct_group` (or :meth:`FiniteGroup.from_table`),
both of which check the group axioms exhaustively.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import InvalidGroup, TooLarge

DEFAULT_MAX_ORDER = 64


class FiniteGroup:
    """An immutable, verified finite group.

    ``mul[a, b]`` is the index of ``a*b``; products are read left to right,
    so a path ``a`` followed by a path ``b`` has holonomy ``mul[a, b]``.
    """

    __slots__ = ("order", "mul", "identity", "inv", "name", "labels", "_key")

    def __init__(self, mul: np.ndarray, identity: int, inv: np.ndarray, name: str,
                 labels: Sequence[str] | None = None):
        self.order = int(mul.shape[0])
        self.mul = mul
        self.identity = int(identity)
        self.inv = inv
        self.name = name
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(self.order))
        self._key = (self.order, mul.tobytes())
        mul.setflags(write=False)
        inv.setflags(write=False)

    @classmethod
    def from_table(cls, table, name: str = "table", labels=None,
                   max_order: int = DEFAULT_MAX_ORDER) -> "FiniteGroup":
        mul = np.array(table, dtype=np.int64)
        n = mul.shape[0] if mul.ndim == 2 else 0
        if mul.ndim != 2 or mul.shape != (n, n) or n == 0:
            raise InvalidGroup("multiplication table must be a non-empty square table")
        if n > max_order:
            raise TooLarge(f"group order {n} exceeds cap {max_order}")
        if mul.min() < 0 or mul.max() >= n:
            raise InvalidGroup("table entries out of range")
        rng = np.arange(n)
        ids = [e for e in range(n) if (mul[e] == rng).all() and (mul[:, e] == rng).all()]
        if not ids:
            raise InvalidGroup("no two-sided identity")
        e = ids[0]
        inv = np.full(n, -1, dtype=np.int64)
        for g in range(n):
            hits = np.nonzero((mul[g] == e) & (mul[:, g] == e))[0]
            if len(hits) == 0:
                raise InvalidGroup(f"element {g} has no two-sided inverse")
            inv[g] = hits[0]
        # (ab)c == a(bc) for all triples
        left = mul[mul[:, :, None], rng[None, None, :]]
        right = mul[rng[:, None, None], mul[None, :, :]]
        if not np.array_equal(left, right):
            a, b, c = (int(v[0]) for v in np.nonzero(left != right))
            raise InvalidGroup(f"table is not associative at ({a},{b},{c})")
        return cls(mul, e, inv, name, labels)

    # -- basic arithmetic -------------------------------------------------
    def elements(self) -> range:
        return range(self.order)

    def m(self, *gs: int) -> int:
        """Product of the arguments, left to right."""
        r = self.identity
        for g in gs:
            r = int(self.mul[r, g])
        return r

    def i(self, g: int) -> int:
        return int(self.inv[g])

    def conj(self, g: int, x: int) -> int:
        """``g^-1 x g``."""
        return int(self.mul[self.mul[self.inv[g], x], g])

    def power(self, g: int, k: int) -> int:
        return group_power(self, g, k)

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = int(self.mul[x, g])
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


def group_power(group: FiniteGroup, g: int, k: int) -> int:
    """``g**k`` by repeated squaring; negative ``k`` goes through the inverse."""
    if k < 0:
        g, k = group.i(g), -k
    result, base = group.identity, g
    while k:
        if k & 1:
            result = int(group.mul[result, base])
        base = int(group.mul[base, base])
        k >>= 1
    return result


# -- specs ----------------------------------------------------------------

@dataclass(frozen=True)
class GroupSpec:
    """Declarative description of a group; see :func:`construct_group`.

    ``kind`` is one of ``cyclic``, ``dihedral``, ``symmetric`` (parameter
    ``n``), ``product`` (``factors``) or ``table`` (``mul``).
    """

    kind: str
    n: int | None = None
    factors: tuple["GroupSpec", ...] = ()
    mul: tuple[tuple[int, ...], ...] | None = None
    name: str | None = None

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GroupSpec":
        kind = d.get("kind")
        if kind in ("cyclic", "dihedral", "symmetric"):
            n = d.get("n")
            if not isinstance(n, int) or n < 1:
                raise InvalidGroup(f"{kind} spec needs a positive integer n")
            return cls(kind, n=n, name=d.get("name"))
        if kind == "product":
            factors = d.get("factors")
            if not factors:
                raise InvalidGroup("product spec needs a non-empty factor list")
            return cls(kind, factors=tuple(cls.from_dict(f) for f in factors), name=d.get("name"))
        if kind == "table":
            mul = d.get("mul")
            if not isinstance(mul, list) or not mul or any(len(r) != len(mul) for r in mul):
                raise InvalidGroup("table spec needs a full square table")
            return cls(kind, mul=tuple(tuple(int(v) for v in r) for r in mul), name=d.get("name"))
        raise InvalidGroup(f"unknown group kind {kind!r}")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind}
        if self.n is not None:
            d["n"] = self.n
        if self.factors:
            d["factors"] = [f.to_dict() for f in self.factors]
        if self.mul is not None:
            d["mul"] = [list(r) for r in self.mul]
        if self.name:
            d["name"] = self.name
        return d

    def estimated_order(self) -> int:
        if self.kind == "cyclic":
            return self.n
        if self.kind == "dihedral":
            return 2 * self.n
        if self.kind == "symmetric":
            o = 1
            for k in range(2, self.n + 1):
                o *= k
                if o > 10**9:
                    break
            return o
        if self.kind == "product":
            o = 1
            for f in self.factors:
                o *= f.estimated_order()
            return o
        return len(self.mul)


def _cyclic_table(n: int) -> np.ndarray:
    r = np.arange(n)
    return (r[:, None] + r[None, :]) % n


def _dihedral_table(n: int) -> np.ndarray:
    # element r^i s^j has index i + n*j; s r = r^-1 s
    t = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for a in range(2 * n):
        i, j = a % n, a // n
        for b in range(2 * n):
            k, l = b % n, b // n
            kk = -k if j else k
            t[a, b] = (i + kk) % n + n * ((j + l) % 2)
    return t


def _symmetric_table(n: int) -> tuple[np.ndarray, list[str]]:
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    t = np.zeros((len(perms), len(perms)), dtype=np.int64)
    for a, p in enumerate(perms):
        for b, q in enumerate(perms):
            # apply p first, then q
            t[a, b] = index[tuple(q[p[i]] for i in range(n))]
    return t, ["".join(map(str, p)) for p in perms]


def _product_table(tables: list[np.ndarray]) -> np.ndarray:
    t = tables[0]
    for u in tables[1:]:
        m = u.shape[0]
        t = (t[:, None, :, None] * m + u[None, :, None, :]).reshape(t.shape[0] * m, t.shape[0] * m)
    return t


def _raw_table(spec: GroupSpec, max_order: int) -> tuple[np.ndarray, list[str] | None]:
    if spec.estimated_order() > max_order:
        raise TooLarge(f"group order {spec.estimated_order()} exceeds cap {max_order}")
    if spec.kind == "cyclic":
        return _cyclic_table(spec.n), None
    if spec.kind == "dihedral":
        n = spec.n
        return _dihedral_table(n), [f"r{i}" if j == 0 else f"r{i}s" for j in range(2) for i in range(n)]
    if spec.kind == "symmetric":
        return _symmetric_table(spec.n)
    if spec.kind == "product":
        return _product_table([_raw_table(f, max_order)[0] for f in spec.factors]), None
    if spec.kind == "table":
        return np.array(spec.mul, dtype=np.int64), None
    raise InvalidGroup(f"unknown group kind {spec.kind!r}")


def _default_name(spec: GroupSpec) -> str:
    if spec.name:
        return spec.name
    if spec.kind == "cyclic":
        return f"Z{spec.n}"
    if spec.kind == "dihedral":
        return f"D{spec.n}"
    if spec.kind == "symmetric":
        return f"S{spec.n}"
    if spec.kind == "product":
        return "x".join(_default_name(f) for f in spec.factors)
    return "table"


def construct_group(spec: GroupSpec | dict, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Build and exhaustively verify the group described by ``spec``."""
    if isinstance(spec, dict):
        spec = GroupSpec.from_dict(spec)
    table, labels = _raw_table(spec, max_order)
    return FiniteGroup.from_table(table, name=_default_name(spec), labels=labels, max_order=max_order)


def load_group(path: str | Path, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    with open(path) as fh:
        return construct_group(GroupSpec.from_dict(json.load(fh)), max_order=max_order)


# -- a few named groups used throughout the tests --------------------------

def cyclic(n: int) -> FiniteGroup:
    return construct_group(GroupSpec("cyclic", n=n))


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n``."""
    return construct_group(GroupSpec("dihedral", n=n))


def symmetric(n: int) -> FiniteGroup:
    return construct_group(GroupSpec("symmetric", n=n))


def quaternion_spec() -> GroupSpec:
    """Q8 as a table spec: index ``2*k + s`` stands for ``(-1)^s * u_k`` with u = 1, i, j, k."""
    # unit products u_a u_b = sign * u_c
    unit = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    rows = []
    for a in range(8):
        ka, sa = divmod(a, 2)
        row = []
        for b in range(8):
            kb, sb = divmod(b, 2)
            sign, c = unit[(ka, kb)]
            s = (sa + sb + (0 if sign == 1 else 1)) % 2
            row.append(2 * c + s)
        rows.append(tuple(row))
    return GroupSpec("table", mul=tuple(rows), name="Q8")


def quaternion() -> FiniteGroup:
    return construct_group(quaternion_spec())
