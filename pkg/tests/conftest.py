from __future__ import annotations

import functools
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from dwinv.cochains import Cochain2, coboundary_2, h3_generators, strongly_normalize
from dwinv.diagram import load_diagram, parse_diagram, wirtinger
from dwinv.errors import NoSolution
from dwinv.groups import cyclic, dihedral

settings.register_profile("default", deadline=None)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@functools.lru_cache(maxsize=None)
def sn_classes(group_key: str, limit: int = 8):
    """Strongly normalized representatives of every H^3 class that has one
    (nonzero classes only), built from multiples of single generators."""
    G = named_group(group_key)
    out = []
    for gen in h3_generators(G, G.order):
        for k in range(1, gen.order):
            try:
                out.append(strongly_normalize(gen.cocycle.scale(k)).alpha)
            except NoSolution:
                pass
    return tuple(out[:limit])


@functools.lru_cache(maxsize=None)
def sn_coboundaries(group_key: str, count: int = 2, seed: int = 0):
    """Strongly normalized cocycles in the zero class: normalized random coboundaries."""
    G = named_group(group_key)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        beta = Cochain2(G, rng.integers(0, 12, size=(G.order, G.order)), 12)
        out.append(strongly_normalize(coboundary_2(beta)).alpha)
    return tuple(out)


def cocycle_pool(group_key: str):
    return sn_classes(group_key) + sn_coboundaries(group_key)


@functools.lru_cache(maxsize=None)
def named_group(key: str):
    kind, n = key[0], int(key[1:])
    return {"Z": cyclic, "D": dihedral}[kind](n)


@functools.lru_cache(maxsize=None)
def fixture_presentation(name: str):
    return wirtinger(load_diagram(FIXTURES / f"{name}.morse"))


def presentation(text: str):
    return wirtinger(parse_diagram(text))


# -- reference expressions for the two worked fixtures ----------------------
# Colorings of figure8.morse are (x2, x3, x4, x1) in arc order;
# colorings of chain3.morse are (x1, y1, x2, y2, x3, y3).

def figure8_delta(G, A, c):
    x2, x3, x4, x1 = c
    m, i = G.m, G.i
    return (A(i(x4), x3, x1) - A(i(x4), x1, x4) - A(x2, i(x4), x1)
            + A(i(x2), x1, x3) - A(i(x2), x3, x2) - A(x4, i(x2), x3)
            + A(m(i(x4), x1), x4, m(i(x2), x3)) - A(m(i(x4), x1), m(i(x2), x3), x2)
            - A(x2, m(i(x4), x1), m(i(x2), x3)))


def figure8_theta(G, A, c):
    x2, x3, x4, x1 = c
    m, i = G.m, G.i
    return A(m(i(x4), i(x1)), x1, x3) - A(m(i(x1), i(x3)), x3, x2)


def chain3_delta(G, A, c):
    x1, y1, x2, y2, x3, y3 = c
    i = G.i
    return (A(x2, y1, y3) - A(x2, y3, x1) - A(x1, x2, y3)
            + A(y1, y2, i(x3)) - A(y1, i(x3), x2) - A(x2, y1, i(x3))
            + A(i(y2), y3, x1) - A(i(y2), x1, x3) - A(x3, i(y2), x1))


def chain3_theta(G, A, c):
    x1, y1, x2, y2, x3, y3 = c
    m, i = G.m, G.i
    return A(m(y1, y2), i(y2), y3) - A(m(x1, x2), i(x2), x3)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


# -- acceptance summary -----------------------------------------------------

ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> str:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
