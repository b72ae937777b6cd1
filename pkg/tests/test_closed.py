from fractions import Fraction
from math import gcd

import pytest

from conftest import cocycle_pool, fixture_presentation, named_group
from dwinv.coeff import CoeffValue
from dwinv.cochains import Cochain3
from dwinv.diagram import parse_diagram
from dwinv.engine import SurgeryPresentation, dw_invariant
from dwinv.groups import cyclic

UNKNOT = parse_diagram("cup ccw 0\ncap 0")
FIG8 = fixture_presentation("figure8").diagram
FIG8_TEXT = "\n".join(str(e) for e in FIG8.rows)


def dw(diagram, slopes, G, alpha):
    return dw_invariant(SurgeryPresentation(diagram, slopes), G, alpha)


def negated(multiset):
    out = {}
    for F, k in multiset:
        key = str(CoeffValue.from_fraction(-Fraction(F)))
        out[key] = out.get(key, 0) + k
    return sorted(out.items(), key=lambda kv: CoeffValue.from_fraction(kv[0]))


def with_split_unknots(text, n):
    return parse_diagram(text + "\n" + "\n".join(["cup ccw 0", "cap 0"] * n))


@pytest.mark.parametrize("key", ["Z5", "Z6", "D4", "D5"])
def test_three_sphere(key):
    G = named_group(key)
    for alpha in cocycle_pool(key)[:3] + (Cochain3.zero(G),):
        for d, slopes in [(parse_diagram(""), []), (UNKNOT, [(1, 0)]), (UNKNOT, [(1, 1)]), (UNKNOT, [(-1, 1)]),
                          (FIG8, [(1, 0)])]:
            r = dw(d, slopes, G, alpha)
            assert r.multiset() == [("0/1", 1)]
            assert r.total == pytest.approx(1 / G.order, abs=1e-15)


@pytest.mark.parametrize("key", ["Z5", "D5"])
def test_s1_times_s2(key):
    G = named_group(key)
    for alpha in cocycle_pool(key):
        r = dw(UNKNOT, [(0, 1)], G, alpha)
        assert r.multiset() == [("0/1", G.order)]
        assert r.total == 1


@pytest.mark.parametrize("n", range(1, 9))
def test_lens_space_zero_cocycle(n):
    G = cyclic(n)
    for p in range(1, 8):
        for q in range(-2 * p, 2 * p + 1):
            if gcd(p, q) != 1:
                continue
            r = dw(UNKNOT, [(p, q)], G, Cochain3.zero(G))
            assert r.multiset() == [("0/1", gcd(p, n))]
            assert Fraction(r.count, n) == Fraction(gcd(p, n), n)


def _lens_cases():
    for p in range(2, 8):
        for q in range(1, p):
            if gcd(p, q) == 1:
                yield p, q


@pytest.mark.parametrize("key", ["Z5", "D5"])
def test_lens_space_presentations_agree(key):
    G = named_group(key)
    for alpha in cocycle_pool(key)[:3]:
        for p, q in _lens_cases():
            ref = dw(UNKNOT, [(p, q)], G, alpha)
            qinv = pow(q, -1, p)
            for q2 in (q + p, q - p, qinv, qinv + p):
                other = dw(UNKNOT, [(p, q2)], G, alpha)
                assert other.multiset() == ref.multiset()
                assert abs(other.total - ref.total) < 1e-12
            mirror = dw(UNKNOT, [(p, -q)], G, alpha)
            assert mirror.multiset() == negated(ref.multiset())
            assert abs(mirror.total - ref.total.conjugate()) < 1e-12


@pytest.mark.parametrize("key", ["Z5", "D5"])
def test_blow_up(key):
    G = named_group(key)
    for alpha in cocycle_pool(key)[:2]:
        for slope in [(2, 1), (5, 1), (0, 1), (3, 2)]:
            ref = dw(FIG8, [slope], G, alpha)
            for extra in ([(1, 1)], [(-1, 1)], [(1, 1), (-1, 1)]):
                d = with_split_unknots(FIG8_TEXT, len(extra))
                r = dw(d, [slope] + extra, G, alpha)
                assert r.multiset() == ref.multiset()
                assert abs(r.total - ref.total) < 1e-12
        for p, q in [(5, 2), (7, 3)]:
            ref = dw(UNKNOT, [(p, q)], G, alpha)
            r = dw(with_split_unknots("cup ccw 0\ncap 0", 1), [(p, q), (1, 1)], G, alpha)
            assert r.multiset() == ref.multiset()


@pytest.mark.parametrize("key", ["Z5", "D5"])
def test_amphichiral_knot_mirror(key):
    G = named_group(key)
    for alpha in cocycle_pool(key)[:3]:
        for p, q in [(1, 1), (2, 1), (5, 1), (5, 2), (10, 1), (0, 1), (3, 4)]:
            ref = dw(FIG8, [(p, q)], G, alpha)
            mirror = dw(FIG8, [(p, -q)], G, alpha)
            assert mirror.multiset() == negated(ref.multiset())
            assert abs(mirror.total - ref.total.conjugate()) < 1e-12


def test_lens_space_values_nontrivial():
    # with a nonzero class the lens space values are not all zero: the solid-torus term carries them
    G = cyclic(5)
    alpha = cocycle_pool("Z5")[0]
    r = dw(UNKNOT, [(5, 1)], G, alpha)
    assert r.count == 5 and len(r.values) > 1
