"""Layered link diagrams and their Wirtinger presentations.

A diagram is a list of rows read top to bottom.  Between consecutive rows
sits an *interface*: the ordered list of strands cut by a horizontal line.
Each row changes the interface locally at positions ``p, p+1``::

    cup ccw|cw p   two strands are born; ccw: the left one runs down the page
    cap p          two strands die (they must run in opposite directions)
    x+ p           the strand at p+1 moves to p, passing over
    x- p           the strand at p moves to p+1, passing over
    base p         not a row: the strand at p on the current interface
                   carries the basepoint of its component

``#`` starts a comment; ``/`` may separate rows on one line.

A strand "runs down" (direction +1) when it flows toward later rows.  Hole
labels on an interface are ``x`` for such strands and ``x^-1`` otherwise.
Crossing signs follow the right-hand rule in page coordinates.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import ParseError, TopologyError


@dataclass(frozen=True)
class Event:
    kind: str  # "cup" | "cap" | "x+" | "x-"
    pos: int
    orient: str | None = None  # "ccw" | "cw" for cups

    def __str__(self):
        return f"{self.kind} {self.orient} {self.pos}" if self.kind == "cup" else f"{self.kind} {self.pos}"


# a segment is a strand piece on one interface: (interface index, position)
Seg = tuple[int, int]


@dataclass(frozen=True)
class Crossing:
    row: int
    pos: int
    sign: int
    over_in: Seg
    over_out: Seg
    under_in: Seg
    under_out: Seg


@dataclass
class MorseDiagram:
    """A validated diagram.

    ``widths[k]`` and ``dirs[k]`` describe interface ``k`` (between rows
    ``k-1`` and ``k``); ``crossings`` is indexed by row (None for cups/caps).
    """

    rows: list[Event]
    widths: list[int]
    dirs: list[list[int]]
    crossings: dict[int, Crossing]
    bases: list[Seg]
    components: list["Component"] = field(default_factory=list)
    text: str = ""

    @property
    def n_components(self) -> int:
        return len(self.components)

    def next_seg(self, seg: Seg) -> tuple[Seg, int | None]:
        """Follow the orientation one step; returns the next segment and the
        crossing row passed under (or None)."""
        k, p = seg
        d = self.dirs[k][p]
        if d > 0:
            row = self.rows[k]
            q = row.pos
            if row.kind == "cap":
                if p in (q, q + 1):
                    return (k, q + (p == q)), None
                return (k + 1, p - 2 if p > q + 1 else p), None
            if row.kind == "cup":
                return (k + 1, p + 2 if p >= q else p), None
            return self._through_crossing(k, p, k + 1)
        row = self.rows[k - 1]
        q = row.pos
        if row.kind == "cup":
            if p in (q, q + 1):
                return (k, q + (p == q)), None
            return (k - 1, p - 2 if p > q + 1 else p), None
        if row.kind == "cap":
            return (k - 1, p + 2 if p >= q else p), None
        return self._through_crossing(k - 1, p, k - 1)

    def _through_crossing(self, row_idx: int, p: int, target: int) -> tuple[Seg, int | None]:
        c = self.crossings[row_idx]
        if p not in (c.pos, c.pos + 1):
            return (target, p), None
        here = target - 1 if target > row_idx else target + 1
        seg = (here, p)
        for a, b, under in ((c.over_in, c.over_out, False), (c.under_in, c.under_out, True)):
            if seg == a:
                return b, (row_idx if under else None)
            if seg == b:
                return a, (row_idx if under else None)
        raise TopologyError("inconsistent crossing bookkeeping")


@dataclass
class Component:
    """Traversal of one component from its basepoint segment."""

    index: int
    segments: list[Seg]
    under: list[int]  # crossing rows passed under, in traversal order
    under_at: list[int]  # index into ``segments`` of the segment after each undercrossing


def _tokenize(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        for chunk in line.split("/"):
            toks = chunk.split()
            if toks:
                out.append((lineno, toks))
    return out


def _int(tok: str, lineno: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: expected a position, got {tok!r}") from None
    if v < 0:
        raise ParseError(f"line {lineno}: negative position {v}")
    return v


def parse_diagram(text: str) -> MorseDiagram:
    rows: list[Event] = []
    base_marks: list[tuple[int, int, int]] = []  # (interface, pos, lineno)
    for lineno, toks in _tokenize(text):
        head = toks[0].lower()
        if head == "cup":
            if len(toks) != 3 or toks[1].lower() not in ("ccw", "cw"):
                raise ParseError(f"line {lineno}: expected 'cup ccw|cw <pos>'")
            rows.append(Event("cup", _int(toks[2], lineno), toks[1].lower()))
        elif head in ("cap", "x+", "x-"):
            if len(toks) != 2:
                raise ParseError(f"line {lineno}: expected '{head} <pos>'")
            rows.append(Event(head, _int(toks[1], lineno)))
        elif head == "base":
            if len(toks) != 2:
                raise ParseError(f"line {lineno}: expected 'base <pos>'")
            base_marks.append((len(rows), _int(toks[1], lineno), lineno))
        else:
            raise ParseError(f"line {lineno}: unknown token {toks[0]!r}")

    widths = [0]
    dirs: list[list[int]] = [[]]
    crossings: dict[int, Crossing] = {}
    for r, ev in enumerate(rows):
        cur = dirs[-1]
        w = len(cur)
        p = ev.pos
        if ev.kind == "cup":
            if p > w:
                raise TopologyError(f"row {r}: cup at {p} beyond width {w}")
            new = [1, -1] if ev.orient == "ccw" else [-1, 1]
            nxt = cur[:p] + new + cur[p:]
        elif ev.kind == "cap":
            if p + 1 >= w:
                raise TopologyError(f"row {r}: cap at {p} beyond width {w}")
            if cur[p] == cur[p + 1]:
                raise TopologyError(f"row {r}: cap joins two strands running the same way")
            nxt = cur[:p] + cur[p + 2:]
        else:
            if p + 1 >= w:
                raise TopologyError(f"row {r}: crossing at {p} beyond width {w}")
            nxt = list(cur)
            nxt[p], nxt[p + 1] = cur[p + 1], cur[p]
            k = r
            if ev.kind == "x+":
                over_in, over_out = (k, p + 1), (k + 1, p)
                under_in, under_out = (k, p), (k + 1, p + 1)
            else:
                over_in, over_out = (k, p), (k + 1, p + 1)
                under_in, under_out = (k, p + 1), (k + 1, p)
            sign = _crossing_sign(ev.kind, cur[over_in[1]], cur[under_in[1]])
            # store ends in flow order
            if cur[over_in[1]] < 0:
                over_in, over_out = over_out, over_in
            if cur[under_in[1]] < 0:
                under_in, under_out = under_out, under_in
            crossings[r] = Crossing(r, p, sign, over_in, over_out, under_in, under_out)
        widths.append(len(nxt))
        dirs.append(nxt)
    if widths[-1] != 0:
        raise TopologyError(f"{widths[-1]} strands left open after the last row")

    bases = []
    for k, p, lineno in base_marks:
        if p >= widths[k]:
            raise TopologyError(f"line {lineno}: basepoint position {p} beyond width {widths[k]}")
        bases.append((k, p))
    d = MorseDiagram(rows, widths, dirs, crossings, bases, text=text)
    d.components = _components(d)
    return d


def _crossing_sign(kind: str, over_dir: int, under_dir: int) -> int:
    # page coordinates: x to the right, y up; rows advance downward.
    # x+: the over strand moves from p+1 to p while going down the page.
    if kind == "x+":
        over = (-over_dir, -over_dir)
        under = (under_dir, -under_dir)
    else:
        over = (over_dir, -over_dir)
        under = (-under_dir, -under_dir)
    cross = over[0] * under[1] - over[1] * under[0]
    return 1 if cross > 0 else -1


def _components(d: MorseDiagram) -> list[Component]:
    owner: dict[Seg, int] = {}
    comps: list[Component] = []
    starts: list[Seg] = []
    # one component per cup, in row order; start at the downward new strand
    for r, ev in enumerate(d.rows):
        if ev.kind != "cup":
            continue
        k = r + 1
        start = (k, ev.pos) if d.dirs[k][ev.pos] > 0 else (k, ev.pos + 1)
        if start in owner:
            continue
        idx = len(starts)
        starts.append(start)
        seg = start
        while True:
            owner[seg] = idx
            seg, _ = d.next_seg(seg)
            if seg == start:
                break
            if seg in owner:
                raise TopologyError("strand traversal does not close up")
    for b in d.bases:
        i = owner[b]
        if starts[i] in d.bases and starts[i] != b:
            raise TopologyError(f"component {i} has more than one basepoint")
        starts[i] = b
    for i, start in enumerate(starts):
        segs, under, under_at = [start], [], []
        seg = start
        while True:
            seg, row = d.next_seg(seg)
            if row is not None:
                under.append(row)
                under_at.append(0 if seg == start else len(segs))
            if seg == start:
                break
            segs.append(seg)
        comps.append(Component(i, segs, under, under_at))
    return comps


# ---------------------------------------------------------------------------
# Wirtinger presentation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """``out = over^(-sign) * in * over^(sign)`` at crossing ``row``."""

    row: int
    out_arc: int
    over_arc: int
    in_arc: int
    sign: int


@dataclass
class WirtingerPresentation:
    diagram: MorseDiagram
    n_arcs: int
    arc_of: dict[Seg, int]
    arc_component: list[int]
    relations: list[Relation]
    meridian: list[int]
    longitude: list[list[tuple[int, int]]]
    writhe: list[int]
    # per component, relations met as an under-strand, in traversal order
    traversal: list[list[Relation]]

    @property
    def n_components(self) -> int:
        return len(self.meridian)

    def relation_at(self, row: int) -> Relation:
        return self._by_row[row]

    def __post_init__(self):
        self._by_row = {r.row: r for r in self.relations}


def wirtinger(d: MorseDiagram) -> WirtingerPresentation:
    arc_of: dict[Seg, int] = {}
    arc_component: list[int] = []
    meridian = []
    for comp in d.components:
        cur = len(arc_component)
        meridian.append(cur)
        arc_component.append(comp.index)
        breaks = set(comp.under_at)
        # segments after the last break wrap around onto the basepoint arc
        tail = max(breaks) if breaks and 0 not in breaks else len(comp.segments)
        for j, seg in enumerate(comp.segments):
            if j >= tail:
                arc_of[seg] = meridian[-1]
                continue
            if j in breaks and j != 0:
                cur = len(arc_component)
                arc_component.append(comp.index)
            arc_of[seg] = cur
    relations = []
    for row in sorted(d.crossings):
        c = d.crossings[row]
        relations.append(Relation(row, arc_of[c.under_out], arc_of[c.over_in], arc_of[c.under_in], c.sign))
    by_row = {r.row: r for r in relations}
    seg_owner = {seg: comp.index for comp in d.components for seg in comp.segments}
    writhe = [0] * len(d.components)
    for c in d.crossings.values():
        i, j = seg_owner[c.over_in], seg_owner[c.under_in]
        if i == j:
            writhe[i] += c.sign
    traversal = [[by_row[r] for r in comp.under] for comp in d.components]
    longitude = []
    for i, rels in enumerate(traversal):
        word = [(r.over_arc, r.sign) for r in rels]
        if writhe[i]:
            word.append((meridian[i], -writhe[i]))
        longitude.append(word)
    return WirtingerPresentation(d, len(arc_component), arc_of, arc_component, relations,
                                 meridian, longitude, writhe, traversal)


def longitude_word(pres: WirtingerPresentation, component: int) -> list[tuple[int, int]]:
    """0-framed longitude as ``(arc, exponent)`` letters, read left to right."""
    return list(pres.longitude[component])


def linking_matrix(pres: WirtingerPresentation) -> list[list[int]]:
    """Linking numbers from crossing signs (diagonal: writhe)."""
    n = pres.n_components
    twice = [[0] * n for _ in range(n)]
    for r in pres.relations:
        i, j = pres.arc_component[r.over_arc], pres.arc_component[r.in_arc]
        twice[i][j] += r.sign
        if i != j:
            twice[j][i] += r.sign
    return [[twice[i][j] if i == j else twice[i][j] // 2 for j in range(n)] for i in range(n)]


def abelianized_longitude(pres: WirtingerPresentation, component: int) -> Counter:
    """Exponent sum of the longitude per component meridian class."""
    out: Counter = Counter()
    for arc, e in pres.longitude[component]:
        out[pres.arc_component[arc]] += e
    return out


def load_diagram(path) -> MorseDiagram:
    with open(path) as fh:
        return parse_diagram(fh.read())
