"""Exterior and closed-manifold values.

The exterior value of a colored link diagram is the sum of two kinds of
terms:

* per component, the boundary torus is assembled from one small cylinder per
  undercrossing (labels ``(x_in, g, x_out)`` with ``g = over^sign`` and
  ``x_out = g^-1 x_in g``); gluing two cylinders ``(x, g1, x')`` and
  ``(x', g2, x'')`` costs ``a(g1,x',g2) - a(g1,g2,x'') - a(x,g1,g2)``;
* per interface between consecutive rows, the two rows induce different
  bracketings of the hole sequence; re-bracketing ``(XY)Z -> X(YZ)`` costs
  ``a(X,Y,Z)`` (products of the hole labels under each subtree);
* per ``x+`` row, a twist term ``a(u, u^-1 v, u)`` where ``(v, u)`` are the
  hole labels at ``(p, p+1)`` just above the crossing.  Without it the
  cylinder gluing is not invariant under the second Reidemeister move.

Cups, caps and strands passing straight through contribute nothing.
"""
from __future__ import annotations

import cmath
import math
import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence, Union

from .cochains import Cochain3
from .coeff import CoeffValue
from .diagram import MorseDiagram, WirtingerPresentation, wirtinger
from .errors import LabelMismatch
from .groups import FiniteGroup, group_power
from .reps import Survivor, conjugacy_representatives, enumerate_colorings, surgery_filter
from .torus import epsilon, fz_table


@dataclass
class TermLedger:
    """Signed alpha-terms; ``total`` evaluates them on a cocycle."""

    terms: list[tuple[int, tuple[int, int, int]]] = field(default_factory=list)

    def emit(self, sign: int, x: int, y: int, z: int) -> None:
        self.terms.append((sign, (x, y, z)))

    def extend(self, other: "TermLedger") -> None:
        self.terms.extend(other.terms)

    def total(self, alpha: Cochain3) -> CoeffValue:
        A = alpha.num
        return CoeffValue(sum(s * int(A[t]) for s, t in self.terms), alpha.den)

    def __len__(self):
        return len(self.terms)


# ---------------------------------------------------------------------------
# crossing cylinders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossingBlock:
    """Cylinder ``(under_in, g, under_out)`` with ``g = over^sign``."""

    sign: int
    over: int
    under_in: int
    under_out: int
    g: int


@dataclass
class TorusAssembly:
    component: int
    meridian: int
    blocks: list[CrossingBlock]


def torus_assembly(pres: WirtingerPresentation, coloring: Sequence[int], group: FiniteGroup,
                   component: int) -> TorusAssembly:
    """Cylinders met along the component from its basepoint, plus the
    writhe correction ``|w|`` cylinders with ``g = m^(-sign w)``."""
    blocks = []
    for r in pres.traversal[component]:
        o = coloring[r.over_arc]
        g = o if r.sign > 0 else group.i(o)
        blocks.append(CrossingBlock(r.sign, o, coloring[r.in_arc], coloring[r.out_arc], g))
    m = coloring[pres.meridian[component]]
    w = pres.writhe[component]
    if w:
        g = group_power(group, m, -1 if w > 0 else 1)
        blocks.extend(CrossingBlock(0, m, m, m, g) for _ in range(abs(w)))
    return TorusAssembly(component, m, blocks)


def component_delta(assembly: TorusAssembly, group: FiniteGroup) -> TermLedger:
    """Glue the cylinders left to right."""
    ledger = TermLedger()
    if not assembly.blocks:
        return ledger
    b0 = assembly.blocks[0]
    x, g1, x1 = b0.under_in, b0.g, b0.under_out
    for b in assembly.blocks[1:]:
        g2, x2 = b.g, b.under_out
        ledger.emit(1, g1, x1, g2)
        ledger.emit(-1, g1, g2, x2)
        ledger.emit(-1, x, g1, g2)
        g1, x1 = group.m(g1, g2), x2
    return ledger


# ---------------------------------------------------------------------------
# interface associators
# ---------------------------------------------------------------------------

Tree = Union[int, tuple["Tree", "Tree"]]


@dataclass(frozen=True)
class InterfaceState:
    labels: tuple[int, ...]
    tree: Tree | None


def left_comb(units: Sequence[Tree]) -> Tree | None:
    if not units:
        return None
    t = units[0]
    for u in units[1:]:
        t = (t, u)
    return t


def grouped_comb(width: int, pair: int | None) -> Tree | None:
    """Left comb over the holes with ``(pair, pair+1)`` bracketed first."""
    units: list[Tree] = []
    i = 0
    while i < width:
        if i == pair:
            units.append((i, i + 1))
            i += 2
        else:
            units.append(i)
            i += 1
    return left_comb(units)


def _leaves(t: Tree) -> list[int]:
    return [t] if isinstance(t, int) else _leaves(t[0]) + _leaves(t[1])


def _product(group: FiniteGroup, labels: Sequence[int], t: Tree) -> int:
    return group.m(*(labels[i] for i in _leaves(t)))


def _rotatable(t: Tree, want_right: bool, path=()) -> list[tuple]:
    """Paths to nodes ``X(YZ)`` (or ``(XY)Z`` when ``want_right``)."""
    if isinstance(t, int):
        return []
    out = []
    inner = t[0] if want_right else t[1]
    if not isinstance(inner, int):
        out.append(path)
    return out + _rotatable(t[0], want_right, path + (0,)) + _rotatable(t[1], want_right, path + (1,))


def _get(t: Tree, path) -> Tree:
    for k in path:
        t = t[k]
    return t


def _put(t: Tree, path, new: Tree) -> Tree:
    if not path:
        return new
    k = path[0]
    return (_put(t[0], path[1:], new), t[1]) if k == 0 else (t[0], _put(t[1], path[1:], new))


def _normalize(t: Tree, labels, group: FiniteGroup, ledger: TermLedger, sign: int,
               to_right: bool, rng: random.Random | None) -> Tree:
    """Rotate to a comb, emitting ``sign * (value of the moves taken)``.

    Toward the left comb every move is ``X(YZ) -> (XY)Z`` (value ``-a(X,Y,Z)``);
    toward the right comb every move is ``(XY)Z -> X(YZ)`` (value ``+a``).
    """
    while True:
        spots = _rotatable(t, to_right)
        if not spots:
            return t
        path = rng.choice(spots) if rng else spots[0]
        node = _get(t, path)
        if to_right:
            (X, Y), Z = node
            new, move = (X, (Y, Z)), 1
        else:
            X, (Y, Z) = node
            new, move = ((X, Y), Z), -1
        p = [_product(group, labels, s) for s in (X, Y, Z)]
        ledger.emit(sign * move, *p)
        t = _put(t, path, new)


def interface_theta(earlier: InterfaceState, later: InterfaceState, group: FiniteGroup,
                    rng: random.Random | None = None) -> TermLedger:
    """Value of re-bracketing ``earlier`` into ``later``.

    The canonical path runs through the left comb.  With ``rng`` a random
    intermediate bracketing is visited instead, reached through the right
    comb, and rotations are applied in random order.
    """
    if earlier.labels != later.labels:
        raise LabelMismatch("interface states carry different hole labels")
    ledger = TermLedger()
    if earlier.tree is None or later.tree is None or earlier.tree == later.tree:
        return ledger
    labels = earlier.labels
    if rng is None:
        _normalize(earlier.tree, labels, group, ledger, 1, False, None)
        _normalize(later.tree, labels, group, ledger, -1, False, None)
        return ledger
    mid = _random_tree(list(range(len(labels))), rng)
    _normalize(earlier.tree, labels, group, ledger, 1, False, rng)
    _normalize(mid, labels, group, ledger, -1, False, rng)
    _normalize(mid, labels, group, ledger, 1, True, rng)
    _normalize(later.tree, labels, group, ledger, -1, True, rng)
    return ledger


def _random_tree(leaves: list[int], rng: random.Random) -> Tree:
    if len(leaves) == 1:
        return leaves[0]
    k = rng.randint(1, len(leaves) - 1)
    return (_random_tree(leaves[:k], rng), _random_tree(leaves[k:], rng))


def hole_labels(pres: WirtingerPresentation, coloring: Sequence[int], group: FiniteGroup,
                interface: int) -> tuple[int, ...]:
    d = pres.diagram
    out = []
    for p, direction in enumerate(d.dirs[interface]):
        x = coloring[pres.arc_of[(interface, p)]]
        out.append(x if direction > 0 else group.i(x))
    return tuple(out)


def interface_states(pres: WirtingerPresentation, coloring: Sequence[int], group: FiniteGroup,
                     interface: int) -> tuple[InterfaceState, InterfaceState]:
    """States induced on an interface by the row above and the row below."""
    d = pres.diagram
    labels = hole_labels(pres, coloring, group, interface)
    w = len(labels)
    above = d.rows[interface - 1] if interface > 0 else None
    below = d.rows[interface] if interface < len(d.rows) else None
    pa = above.pos if above is not None and above.kind != "cap" else None
    pb = below.pos if below is not None and below.kind != "cup" else None
    return (InterfaceState(labels, grouped_comb(w, pa)), InterfaceState(labels, grouped_comb(w, pb)))


def theta_ledger(pres: WirtingerPresentation, coloring: Sequence[int], group: FiniteGroup,
                 rng: random.Random | None = None) -> TermLedger:
    ledger = TermLedger()
    for k in range(1, len(pres.diagram.rows)):
        earlier, later = interface_states(pres, coloring, group, k)
        ledger.extend(interface_theta(earlier, later, group, rng))
    return ledger


def delta_ledger(pres: WirtingerPresentation, coloring: Sequence[int], group: FiniteGroup) -> TermLedger:
    ledger = TermLedger()
    for i in range(pres.n_components):
        ledger.extend(component_delta(torus_assembly(pres, coloring, group, i), group))
    return ledger


def twist_ledger(pres: WirtingerPresentation, coloring: Sequence[int], group: FiniteGroup) -> TermLedger:
    ledger = TermLedger()
    for r, ev in enumerate(pres.diagram.rows):
        if ev.kind != "x+":
            continue
        labels = hole_labels(pres, coloring, group, r)
        v, u = labels[ev.pos], labels[ev.pos + 1]
        ledger.emit(1, u, group.m(group.i(u), v), u)
    return ledger


def exterior_ledger(pres: WirtingerPresentation, coloring: Sequence[int], group: FiniteGroup) -> TermLedger:
    ledger = delta_ledger(pres, coloring, group)
    ledger.extend(theta_ledger(pres, coloring, group))
    ledger.extend(twist_ledger(pres, coloring, group))
    return ledger


def exterior_value(pres: WirtingerPresentation | MorseDiagram, coloring: Sequence[int],
                   alpha: Cochain3) -> CoeffValue:
    if isinstance(pres, MorseDiagram):
        pres = wirtinger(pres)
    return exterior_ledger(pres, coloring, alpha.group).total(alpha)


# ---------------------------------------------------------------------------
# closed manifolds
# ---------------------------------------------------------------------------

@dataclass
class SurgeryPresentation:
    diagram: MorseDiagram
    coefficients: list[tuple[int, int]]

    def __post_init__(self):
        if len(self.coefficients) != self.diagram.n_components:
            raise ValueError(f"{len(self.coefficients)} coefficients for "
                             f"{self.diagram.n_components} components")


def closed_value(pres: WirtingerPresentation, survivor: Survivor, coefficients: Sequence[tuple[int, int]],
                 alpha: Cochain3) -> CoeffValue:
    """Exterior value plus the solid-torus terms ``epsilon(z_i; -q_i, p_i)``."""
    total = exterior_value(pres, survivor.coloring, alpha)
    for P, (p, q) in zip(survivor.peripheral, coefficients):
        total = total + epsilon(alpha, P.z, -q, p)
    return total


WORKERS_ENV = "DWINV_WORKERS"


def default_range(coefficients: Sequence[tuple[int, int]]) -> int:
    return 2 * max((max(abs(p), abs(q)) for p, q in coefficients), default=0) + 4


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1



def _closed_values(args) -> list[CoeffValue]:
    pres, chunk, coefficients, alpha = args
    return [closed_value(pres, s, coefficients, alpha) for s in chunk]


@dataclass
class DWResult:
    order: int
    values: Counter  # CoeffValue -> multiplicity
    per_rep: list[tuple[Survivor, CoeffValue]]

    @property
    def count(self) -> int:
        return sum(self.values.values())

    @property
    def total(self) -> complex:
        s = 0j
        for v in sorted(self.values):
            s += self.values[v] * cmath.exp(2j * math.pi * v.num / v.den)
        return s / self.order

    def multiset(self) -> list[tuple[str, int]]:
        return [(str(v), self.values[v]) for v in sorted(self.values)]


def survivors(surgery: SurgeryPresentation, group: FiniteGroup, dedup: bool = False) -> tuple[WirtingerPresentation, list[Survivor]]:
    pres = wirtinger(surgery.diagram)
    cols = enumerate_colorings(pres, group)
    items = conjugacy_representatives(group, cols) if dedup else cols
    return pres, surgery_filter(items, pres, group, surgery.coefficients)


def dw_invariant(surgery: SurgeryPresentation, group: FiniteGroup, alpha: Cochain3,
                 dedup: bool = False, fz_range: int | None = None,
                 workers: int | None = None) -> DWResult:
    """``(1/|G|) * sum over representations of exp(2 pi i F)``.

    ``workers`` (default: the ``DWINV_WORKERS`` environment variable) splits
    the survivors across processes; results are merged in survivor order.
    """
    pres, surv = survivors(surgery, group, dedup)
    R = fz_range if fz_range is not None else default_range(surgery.coefficients)
    for s in surv:
        for P in s.peripheral:
            fz_table(alpha, P.z, R)
    workers = worker_count() if workers is None else max(1, workers)
    if workers > 1 and len(surv) > workers:
        size = -(-len(surv) // workers)
        chunks = [surv[k:k + size] for k in range(0, len(surv), size)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = ex.map(_closed_values, [(pres, c, surgery.coefficients, alpha) for c in chunks])
            Fs = [F for part in parts for F in part]
    else:
        Fs = _closed_values((pres, surv, surgery.coefficients, alpha))
    values: Counter = Counter()
    per_rep = []
    for s, F in zip(surv, Fs):
        values[F] += s.weight
        per_rep.append((s, F))
    return DWResult(group.order, values, per_rep)
