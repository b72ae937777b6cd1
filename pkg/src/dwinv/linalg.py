"""Exact integer linear algebra: Smith normal form and linear systems over Z/N.

Everything works on Python integers.  Systems modulo a composite ``N`` are
handled in two stages: a sparse elimination that only ever pivots on units
of Z/N (cheap, and the bar-complex matrices are mostly +-1), followed by an
integer Smith normal form of whatever is left.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass
class SmithForm:
    """``U @ A @ V == diag(d) (padded)``, with ``d[0] | d[1] | ...``.

    ``U``/``V``/``Vinv`` are only populated when requested.  ``rhs`` is
    ``U @ b`` for the optional right-hand side handed to :func:`smith`.
    """

    diag: list[int]
    shape: tuple[int, int]
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None
    Vinv: list[list[int]] | None = None
    rhs: list[int] | None = None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith(A: Sequence[Sequence[int]], ncols: int | None = None, *, rhs: Sequence[int] | None = None,
          left: bool = False, right: bool = True) -> SmithForm:
    """Smith normal form of an integer matrix given as a list of rows.

    Row operations are mirrored on ``rhs`` (and on ``U`` when ``left``);
    column operations on ``V`` and, inversely, on ``Vinv`` (when ``right``).
    """
    M = [list(map(int, row)) for row in A]
    r = len(M)
    c = ncols if ncols is not None else (len(M[0]) if M else 0)
    U = _identity(r) if left else None
    V = _identity(c) if right else None
    Vi = _identity(c) if right else None
    b = list(map(int, rhs)) if rhs is not None else None

    def swap_rows(i, j):
        if i == j:
            return
        M[i], M[j] = M[j], M[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]
        if b is not None:
            b[i], b[j] = b[j], b[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in M:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_combine(i, j, a, bb, cc, d):
        # (row_i, row_j) <- (a*row_i + bb*row_j, cc*row_i + d*row_j), det = 1
        Ri, Rj = M[i], M[j]
        M[i] = [a * x + bb * y for x, y in zip(Ri, Rj)]
        M[j] = [cc * x + d * y for x, y in zip(Ri, Rj)]
        if U is not None:
            Ui, Uj = U[i], U[j]
            U[i] = [a * x + bb * y for x, y in zip(Ui, Uj)]
            U[j] = [cc * x + d * y for x, y in zip(Ui, Uj)]
        if b is not None:
            bi, bj = b[i], b[j]
            b[i], b[j] = a * bi + bb * bj, cc * bi + d * bj

    def col_combine(i, j, a, bb, cc, d):
        # (col_i, col_j) <- (a*col_i + bb*col_j, cc*col_i + d*col_j), det = 1
        for row in M:
            x, y = row[i], row[j]
            row[i], row[j] = a * x + bb * y, cc * x + d * y
        if V is not None:
            for row in V:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + bb * y, cc * x + d * y
            # inverse acts on rows of Vinv: new rows = [[d, -cc], [-bb, a]] applied
            Xi, Xj = Vi[i], Vi[j]
            Vi[i] = [d * x - cc * y for x, y in zip(Xi, Xj)]
            Vi[j] = [-bb * x + a * y for x, y in zip(Xi, Xj)]

    t = 0
    while t < min(r, c):
        # pick the smallest nonzero entry in the trailing block
        best = None
        for i in range(t, r):
            row = M[i]
            for j in range(t, c):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = M[t][t]
            # clear column t
            for i in range(t + 1, r):
                v = M[i][t]
                if v == 0:
                    continue
                if v % p == 0:
                    q = v // p
                    row_combine(i, t, 1, -q, 0, 1)
                else:
                    g, x, y = xgcd(p, v)
                    # row_t <- x*row_t + y*row_i ; row_i <- -(v/g)*row_t + (p/g)*row_i
                    row_combine(t, i, x, y, -(v // g), p // g)
                    p = M[t][t]
            # clear row t
            for j in range(t + 1, c):
                v = M[t][j]
                if v == 0:
                    continue
                if v % p == 0:
                    q = v // p
                    col_combine(j, t, 1, -q, 0, 1)
                else:
                    g, x, y = xgcd(p, v)
                    col_combine(t, j, x, y, -(v // g), p // g)
                    p = M[t][t]
            if any(M[i][t] for i in range(t + 1, r)):
                continue
            # divisibility: pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, r):
                row = M[i]
                for j in range(t + 1, c):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_combine(t, bad, 1, 1, 0, 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
            if b is not None:
                b[t] = -b[t]
        t += 1
    diag = [M[i][i] for i in range(min(r, c))]
    return SmithForm(diag=diag, shape=(r, c), U=U, V=V, Vinv=Vi, rhs=b)


# ---------------------------------------------------------------------------
# Lattices containing N*Z^n (Hermite-style echelon basis)
# ---------------------------------------------------------------------------

class ModLattice:
    """Echelon basis of a lattice ``L`` with ``N*Z^n <= L <= Z^n``.

    Rows are kept upper triangular with pivots dividing ``N``; entries are
    stored mod ``N``.  :meth:`reduce` returns the
    lexicographically smallest representative of ``v + L`` with entries in
    ``[0, N)``.
    """

    def __init__(self, n: int, N: int):
        self.n = n
        self.N = N
        self.rows: dict[int, list[int]] = {}
        for j in range(n):
            self.rows[j] = [0] * n
            self.rows[j][j] = N

    def add(self, vec: Sequence[int]) -> None:
        N, n = self.N, self.n
        v = [x % N for x in vec]
        for j in range(n):
            a = v[j]
            if a == 0:
                continue
            row = self.rows[j]
            p = row[j]
            if a % p == 0:
                q = a // p
                v = [(x - q * y) % N if k >= j else x for k, (x, y) in enumerate(zip(v, row))]
                continue
            g, x, y = xgcd(p, a)
            new_row = [(x * s + y * t) % N if k >= j else 0 for k, (s, t) in enumerate(zip(row, v))]
            new_row[j] = g
            rest = [(-(a // g) * s + (p // g) * t) % N if k >= j else 0 for k, (s, t) in enumerate(zip(row, v))]
            self.rows[j] = new_row
            v = rest
            v[j] = 0

    def reduce(self, vec: Sequence[int]) -> list[int]:
        N, n = self.N, self.n
        v = [x % N for x in vec]
        for j in range(n):
            row = self.rows[j]
            q = v[j] // row[j]
            if q:
                for k in range(j, n):
                    v[k] = (v[k] - q * row[k]) % N if k > j else v[k] - q * row[k]
        return v

    def pivots(self) -> list[int]:
        return [self.rows[j][j] for j in range(self.n)]

    def index(self) -> int:
        """``[Z^n : L]``."""
        out = 1
        for p in self.pivots():
            out *= p
        return out


# ---------------------------------------------------------------------------
# Sparse elimination over Z/N
# ---------------------------------------------------------------------------

@dataclass
class ModElimination:
    """Result of :func:`eliminate_mod` for ``A x = b (mod N)``.

    ``pivots`` are ``(col, row, rhs)`` triples in pivot order, each row scaled
    so its pivot coefficient is 1; ``free`` are the remaining columns and
    ``residual``/``residual_rhs`` the leftover constraints on them (no unit
    coefficients).
    """

    N: int
    ncols: int
    pivots: list[tuple[int, dict[int, int], int]]
    free: list[int]
    residual: list[dict[int, int]]
    residual_rhs: list[int]

    def back_substitute(self, free_values: dict[int, int], homogeneous: bool = False) -> list[int]:
        N = self.N
        x = [0] * self.ncols
        for j, v in free_values.items():
            x[j] = v % N
        for col, row, rhs in reversed(self.pivots):
            s = 0 if homogeneous else rhs
            for j, a in row.items():
                if j != col:
                    s -= a * x[j]
            x[col] = s % N
        return x


def eliminate_mod(rows: Iterable[dict[int, int]], ncols: int, N: int,
                  rhs: Sequence[int] | None = None) -> ModElimination:
    """Gaussian elimination mod ``N`` pivoting only on units, sparsest rows first."""
    work: dict[int, dict[int, int]] = {}
    b: dict[int, int] = {}
    for k, row in enumerate(rows):
        clean = {j: a % N for j, a in row.items() if a % N}
        bk = (rhs[k] % N) if rhs is not None else 0
        if not clean:
            if bk:
                work[k] = clean
                b[k] = bk
            continue
        work[k] = clean
        b[k] = bk
    col_rows: dict[int, set[int]] = {}
    for k, row in work.items():
        for j in row:
            col_rows.setdefault(j, set()).add(k)

    pivots: list[tuple[int, dict[int, int], int]] = []
    done_cols: set[int] = set()
    # rows ordered by length; lazily refreshed
    while True:
        best = None
        for k, row in work.items():
            if not row:
                continue
            if best is not None and len(row) >= best[0]:
                continue
            cand = None
            for j, a in row.items():
                if gcd(a, N) == 1:
                    cnt = len(col_rows[j])
                    if cand is None or cnt < cand[0]:
                        cand = (cnt, j)
            if cand is not None:
                best = (len(row), k, cand[1])
                if best[0] <= 2:
                    break
        if best is None:
            break
        _, k, c = best
        row = work.pop(k)
        bk = b.pop(k)
        inv = pow(row[c], -1, N)
        if inv != 1:
            row = {j: (a * inv) % N for j, a in row.items()}
            bk = (bk * inv) % N
        for j in row:
            col_rows[j].discard(k)
        for k2 in list(col_rows[c]):
            r2 = work[k2]
            f = r2[c]
            for j, a in row.items():
                v = (r2.get(j, 0) - f * a) % N
                if v:
                    if j not in r2:
                        col_rows[j].add(k2)
                    r2[j] = v
                elif j in r2:
                    del r2[j]
                    col_rows[j].discard(k2)
            b[k2] = (b[k2] - f * bk) % N
        pivots.append((c, row, bk))
        done_cols.add(c)
    residual = []
    residual_rhs = []
    for k, row in work.items():
        if row or b[k]:
            residual.append(row)
            residual_rhs.append(b[k])
    free = [j for j in range(ncols) if j not in done_cols]
    return ModElimination(N, ncols, pivots, free, residual, residual_rhs)


@dataclass
class ModSolution:
    """Solutions of ``A x = b (mod N)``: ``particular + span(generators) + N Z^n``."""

    N: int
    particular: list[int]
    generators: list[list[int]] = field(default_factory=list)

    def lattice(self) -> ModLattice:
        lat = ModLattice(len(self.particular), self.N)
        for g in self.generators:
            lat.add(g)
        return lat

    def lexmin(self) -> list[int]:
        return self.lattice().reduce(self.particular)


def solve_mod(rows: Sequence[dict[int, int]], ncols: int, N: int, rhs: Sequence[int]) -> ModSolution | None:
    """Solve a sparse system modulo ``N``; ``None`` when inconsistent."""
    el = eliminate_mod(rows, ncols, N, rhs)
    free = el.free
    fidx = {j: i for i, j in enumerate(free)}
    R = [[0] * len(free) for _ in el.residual]
    for i, row in enumerate(el.residual):
        for j, a in row.items():
            R[i][fidx[j]] = a
    nf = len(free)
    if R:
        sf = smith(R, nf, rhs=el.residual_rhs)
        c = sf.rhs
        w = [0] * nf
        for i in range(len(R)):
            s = sf.diag[i] if i < len(sf.diag) else 0
            g = gcd(s, N)
            if c[i] % g:
                return None
            if i < nf and s:
                # s*w = c (mod N)  ->  w = (c/g) * (s/g)^-1 (mod N/g)
                Ng = N // g
                w[i] = ((c[i] // g) * pow(s // g, -1, Ng)) % Ng if Ng > 1 else 0
        V = sf.V
        xf = [sum(V[a][k] * w[k] for k in range(nf)) % N for a in range(nf)]
        steps = []
        for k in range(nf):
            s = sf.diag[k] if k < len(sf.diag) else 0
            steps.append(N // gcd(s, N))
        hom_free = [[(V[a][k] * steps[k]) % N for a in range(nf)] for k in range(nf)]
    else:
        xf = [0] * nf
        hom_free = [[int(a == k) for a in range(nf)] for k in range(nf)]
    particular = el.back_substitute({free[a]: xf[a] for a in range(nf)})
    gens = []
    for vec in hom_free:
        if not any(vec):
            continue
        gens.append(el.back_substitute({free[a]: vec[a] for a in range(nf)}, homogeneous=True))
    return ModSolution(N, particular, gens)


def kernel_mod(rows: Sequence[dict[int, int]], ncols: int, N: int) -> ModSolution:
    sol = solve_mod(rows, ncols, N, [0] * len(rows))
    assert sol is not None
    return sol


def matvec_mod(rows: Sequence[dict[int, int]], x: Sequence[int], N: int) -> list[int]:
    return [sum(a * x[j] for j, a in row.items()) % N for row in rows]
