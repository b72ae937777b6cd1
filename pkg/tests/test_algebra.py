import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwinv.coeff import CoeffValue, add, from_fraction, negate, scale_by_int
from dwinv.errors import InvalidGroup, TooLarge, ZeroDenominator
from dwinv.groups import (GroupSpec, construct_group, cyclic, dihedral, group_power, load_group,
                          quaternion, symmetric)
from dwinv.linalg import kernel_mod, matvec_mod, smith, solve_mod

SMALL = [cyclic(1), cyclic(2), cyclic(6), dihedral(4), dihedral(5), symmetric(3), quaternion(),
         construct_group({"kind": "product", "factors": [{"kind": "cyclic", "n": 2}] * 2})]


def test_trivial_group():
    G = cyclic(1)
    assert G.order == 1 and G.identity == 0


def test_dihedral_order_and_associativity():
    G = dihedral(5)
    assert G.order == 10
    for a, b, c in itertools.product(G.elements(), repeat=3):
        assert G.m(G.m(a, b), c) == G.m(a, G.m(b, c))


def test_non_associative_table_rejected():
    # a Latin square with identity 0 that is not associative
    table = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(InvalidGroup):
        construct_group({"kind": "table", "mul": table})


def test_missing_identity_rejected():
    with pytest.raises(InvalidGroup):
        construct_group({"kind": "table", "mul": [[1, 0], [0, 0]]})


def test_order_cap():
    with pytest.raises(TooLarge):
        construct_group({"kind": "cyclic", "n": 65})
    assert construct_group({"kind": "cyclic", "n": 65}, max_order=100).order == 65


def test_bad_spec():
    with pytest.raises(InvalidGroup):
        GroupSpec.from_dict({"kind": "cyclic", "n": 0})
    with pytest.raises(InvalidGroup):
        GroupSpec.from_dict({"kind": "free"})


def test_load_group(fixtures_dir):
    assert load_group(fixtures_dir / "groups" / "d5.json").order == 10


def test_group_power_examples():
    G = cyclic(5)
    assert group_power(G, 2, -3) == 4
    for g in G.elements():
        assert group_power(G, g, 0) == G.identity
    D = dihedral(5)
    rot = next(g for g in D.elements() if D.element_order(g) == 5)
    assert min(k for k in range(1, 11) if group_power(D, rot, k) == D.identity) == 5


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_inverse_of_product(G):
    for g, h in itertools.product(G.elements(), repeat=2):
        assert G.i(G.m(g, h)) == G.m(G.i(h), G.i(g))


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_power_additivity(G):
    for g in G.elements():
        for a, b in itertools.product(range(-20, 21, 3), repeat=2):
            assert group_power(G, g, a + b) == G.m(group_power(G, g, a), group_power(G, g, b))


def test_named_group_sizes():
    assert quaternion().order == 8 and not quaternion().is_abelian()
    assert symmetric(3).order == 6


# -- coefficients ---------------------------------------------------------

def test_coeff_examples():
    assert CoeffValue(1, 2) + CoeffValue(1, 2) == CoeffValue(0)
    assert CoeffValue(2, 3) + CoeffValue(2, 3) == CoeffValue(1, 3)
    assert negate(CoeffValue(1, 4)) == CoeffValue(3, 4)
    assert str(from_fraction(6, 4)) == "1/2"
    assert CoeffValue.from_fraction("-1/3") == CoeffValue(2, 3)
    assert CoeffValue.from_fraction(Fraction(5, 3)) == CoeffValue(2, 3)
    with pytest.raises(ZeroDenominator):
        from_fraction(1, 0)


fracs = st.builds(CoeffValue, st.integers(-1000, 1000), st.integers(1, 60))


@given(fracs, fracs, fracs)
def test_coeff_group_laws(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))
    assert add(a, b) == add(b, a)
    assert add(a, CoeffValue(0)) == a
    assert add(a, negate(a)) == CoeffValue(0)
    assert 0 <= a.num < a.den


@given(st.integers(1, 500), st.integers(-50, 50))
def test_coeff_torsion(n, k):
    assert scale_by_int(CoeffValue(k, n), n) == CoeffValue(0)


# -- exact linear algebra -------------------------------------------------

mats = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(mats)
@settings(max_examples=60)
def test_smith_form_factorization(A):
    n = len(A[0])
    sf = smith(A, n, left=True)
    U, V = np.array(sf.U, dtype=object), np.array(sf.V, dtype=object)
    D = U.dot(np.array(A, dtype=object)).dot(V)
    for i in range(D.shape[0]):
        for j in range(D.shape[1]):
            want = sf.diag[i] if i == j and i < len(sf.diag) else 0
            assert D[i, j] == want
    nz = [d for d in sf.diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert np.array_equal(np.array(sf.Vinv, dtype=object).dot(V), np.eye(n, dtype=int).astype(object))


@given(mats, st.sampled_from([2, 4, 6, 12, 30]), st.data())
@settings(max_examples=60)
def test_solve_mod_against_brute_force(A, N, data):
    n = len(A[0])
    rows = [{j: v for j, v in enumerate(r) if v} for r in A]
    x0 = data.draw(st.lists(st.integers(0, N - 1), min_size=n, max_size=n))
    rhs = matvec_mod(rows, x0, N)
    sol = solve_mod(rows, n, N, rhs)
    assert sol is not None
    assert matvec_mod(rows, sol.particular, N) == [r % N for r in rhs]
    for k in kernel_mod(rows, n, N).generators:
        assert not any(matvec_mod(rows, k, N))
    if N ** n <= 5000:
        brute = min(x for x in itertools.product(range(N), repeat=n)
                    if matvec_mod(rows, x, N) == [r % N for r in rhs])
        assert tuple(sol.lexmin()) == brute


def test_solve_mod_infeasible():
    assert solve_mod([{0: 2}], 1, 4, [1]) is None
