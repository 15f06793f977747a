from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradealg import linalg
from gradealg.field import FieldError, ModP, PrimeField, get_field

small = st.integers(-50, 50)


def test_rational_is_default():
    Q = get_field("rational")
    assert Q.one == Fraction(1) and Q.zero == 0
    assert get_field(None) is Q


def test_bad_field_specs():
    for spec in ["fp:x", "complex", "fp:4"]:
        with pytest.raises(FieldError):
            get_field(spec)


@given(small, small, st.integers(1, 50))
def test_modp_arithmetic_matches_integers(a, b, c):
    F = get_field("fp:7")
    x, y = F(a), F(b)
    assert x + y == F(a + b)
    assert x * y == F(a * b)
    assert x - y == F(a - b)
    z = F(c)
    if z:
        assert (x / z) * z == x


def test_modp_inverse_of_zero_fails():
    F = PrimeField(5)
    with pytest.raises((FieldError, ZeroDivisionError)):
        F(1) / F(0)


def test_modp_values_are_reduced():
    assert ModP(12, 5) == ModP(2, 5)
    assert not ModP(10, 5)


vectors = st.lists(st.dictionaries(st.integers(0, 4), st.integers(-3, 3).map(Fraction), max_size=5), max_size=6)


@given(vectors)
def test_rank_plus_nullity(rows):
    rows = [linalg.clean(r) for r in rows]
    r = linalg.rank(rows)
    # transpose: columns of the 'rows' matrix are indices 0..4
    cols = [{k: row.get(c, 0) for k, row in enumerate(rows)} for c in range(5)]
    ns = linalg.nullspace([linalg.clean(c) for c in cols], len(rows))
    assert r + len(ns) == len(rows)
    for v in ns:
        for c in range(5):
            assert sum(rows[k].get(c, 0) * x for k, x in v.items()) == 0


@given(vectors, st.dictionaries(st.integers(0, 5), st.integers(-3, 3).map(Fraction), max_size=6))
def test_solve_finds_combinations(cols, coeffs):
    cols = [linalg.clean(c) for c in cols]
    target: dict = {}
    for k, c in coeffs.items():
        if k < len(cols):
            linalg.axpy(target, c, cols[k])
    sol = linalg.solve(cols, linalg.clean(target))
    assert sol is not None
    back: dict = {}
    for k, c in sol.items():
        linalg.axpy(back, c, cols[k])
    assert linalg.clean(back) == linalg.clean(target)


def test_echelon_express():
    ech = linalg.Echelon(track=True)
    assert ech.add({0: Fraction(1), 1: Fraction(1)}, "a")
    assert ech.add({1: Fraction(1)}, "b")
    assert not ech.add({0: Fraction(2), 1: Fraction(3)}, "c")
    assert ech.express({0: Fraction(2), 1: Fraction(3)}) == {"a": 2, "b": 1}


def test_nullspace_over_prime_field_stays_exact():
    F = PrimeField(5)
    rows = [{0: F(1), 1: F(2)}]
    ns = linalg.nullspace(rows, 2)
    basis = linalg.rref(ns)
    assert all(isinstance(c, (ModP, int, Fraction)) for _, r in basis for c in r.values())
