"""Representations of link groups as arc colorings, and the surgery filter."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .diagram import WirtingerPresentation
from .errors import CharacterizationFailure, InternalError
from .groups import FiniteGroup, group_power
from .torus import complete_framing

Coloring = tuple[int, ...]


def relation_holds(group: FiniteGroup, coloring: Sequence[int], rel) -> bool:
    o = coloring[rel.over_arc]
    g = o if rel.sign > 0 else group.i(o)
    return coloring[rel.out_arc] == group.conj(g, coloring[rel.in_arc])


def is_coloring(pres: WirtingerPresentation, group: FiniteGroup, coloring: Sequence[int]) -> bool:
    return all(relation_holds(group, coloring, r) for r in pres.relations)


def enumerate_colorings(pres: WirtingerPresentation, group: FiniteGroup) -> list[Coloring]:
    """All colorings, in lexicographic order.

    Arcs are assigned in numbering order (which follows the traversal); after
    every choice the crossing relations are propagated in both directions, so
    only arcs not forced by earlier ones are ever branched on.
    """
    n = pres.n_arcs
    mul, inv = group.mul, group.inv
    rels = [(r.out_arc, r.over_arc, r.in_arc, r.sign) for r in pres.relations]
    touching: list[list[int]] = [[] for _ in range(n)]
    for k, (a, b, c, _) in enumerate(rels):
        for arc in {a, b, c}:
            touching[arc].append(k)
    out: list[Coloring] = []
    col = [-1] * n

    def propagate(start: list[int], trail: list[int]) -> bool:
        queue = list(start)
        while queue:
            arc = queue.pop()
            for k in touching[arc]:
                o_, v, i_, s = rels[k]
                if col[v] < 0:
                    continue
                g = col[v] if s > 0 else int(inv[col[v]])
                gi = int(inv[g])
                if col[i_] >= 0:
                    want = int(mul[mul[gi, col[i_]], g])
                    if col[o_] < 0:
                        col[o_] = want
                        trail.append(o_)
                        queue.append(o_)
                    elif col[o_] != want:
                        return False
                elif col[o_] >= 0:
                    col[i_] = int(mul[mul[g, col[o_]], gi])
                    trail.append(i_)
                    queue.append(i_)
        return True

    def search(arc: int):
        while arc < n and col[arc] >= 0:
            arc += 1
        if arc == n:
            out.append(tuple(col))
            return
        for x in range(group.order):
            col[arc] = x
            trail = [arc]
            if propagate([arc], trail):
                search(arc + 1)
            for a in trail:
                col[a] = -1

    search(0)
    out.sort()
    return out


def brute_force_colorings(pres: WirtingerPresentation, group: FiniteGroup) -> list[Coloring]:
    """Check every assignment; only for cross-checking small cases."""
    return [c for c in itertools.product(range(group.order), repeat=pres.n_arcs)
            if is_coloring(pres, group, c)]


def conjugate_coloring(group: FiniteGroup, coloring: Coloring, g: int) -> Coloring:
    return tuple(group.conj(g, x) for x in coloring)


def conjugacy_representatives(group: FiniteGroup, colorings: list[Coloring]) -> list[tuple[Coloring, int]]:
    """One coloring per orbit of simultaneous conjugation, with the orbit size."""
    seen: set[Coloring] = set()
    reps = []
    for c in colorings:
        if c in seen:
            continue
        orbit = {conjugate_coloring(group, c, g) for g in group.elements()}
        seen |= orbit
        reps.append((c, len(orbit)))
    return reps


@dataclass(frozen=True)
class Peripheral:
    m: int
    l: int
    z: int | None = None


def evaluate_word(group: FiniteGroup, coloring: Sequence[int], word) -> int:
    out = group.identity
    for arc, e in word:
        out = int(group.mul[out, group_power(group, coloring[arc], e)])
    return out


def peripheral_images(coloring: Sequence[int], pres: WirtingerPresentation, group: FiniteGroup) -> list[Peripheral]:
    out = []
    for i in range(pres.n_components):
        m = coloring[pres.meridian[i]]
        l = evaluate_word(group, coloring, pres.longitude[i])
        if group.m(m, l) != group.m(l, m):
            raise InternalError(f"meridian and longitude of component {i} do not commute")
        out.append(Peripheral(m, l))
    return out


@dataclass(frozen=True)
class Survivor:
    coloring: Coloring
    peripheral: tuple[Peripheral, ...]
    weight: int = 1


def surgery_filter(colorings, pres: WirtingerPresentation, group: FiniteGroup,
                   coefficients: Sequence[tuple[int, int]]) -> list[Survivor]:
    """Keep colorings killing every ``p m + q l``; attach ``z = m^p' l^q'``.

    ``colorings`` may hold plain colorings or ``(coloring, weight)`` pairs.
    """
    if len(coefficients) != pres.n_components:
        raise ValueError("one surgery coefficient per component is required")
    frames = [complete_framing(p, q) for p, q in coefficients]
    out = []
    for item in colorings:
        c, w = item if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], tuple) else (item, 1)
        per = peripheral_images(c, pres, group)
        keep = []
        for P, fr in zip(per, frames):
            p, q, pp, qq = fr.a, fr.c, fr.b, fr.d
            if group.m(group_power(group, P.m, p), group_power(group, P.l, q)) != group.identity:
                break
            z = group.m(group_power(group, P.m, pp), group_power(group, P.l, qq))
            if group_power(group, z, p) != P.l or group_power(group, z, -q) != P.m:
                raise CharacterizationFailure(f"z={z} fails z^p = l, z^-q = m for {p}/{q}")
            keep.append(Peripheral(P.m, P.l, z))
        else:
            out.append(Survivor(tuple(c), tuple(keep), w))
    return out
