from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradealg.finalg import (
    AlgebraError,
    FinGradedAlgebra,
    block_count,
    center,
    check_iso,
    corner,
    field_algebra,
    fullness_witness,
    graded_iso_search,
    homogeneous_component,
    is_full,
    is_idempotent,
    is_semisimple,
    is_strongly_graded,
    matrix_algebra,
    matrix_unit,
    zero_component,
    zero_component_sub,
)
from gradealg.graph import Graph
from gradealg.lpa import LpaAlgebra, as_fin_algebra

deltas = st.lists(st.integers(-2, 2), min_size=1, max_size=3)


def _dense(M, n, x):
    return [[x.coeffs.get(((i * n) + j), Fraction(0)) for j in range(n)] for i in range(n)]


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


@st.composite
def matrix_elements(draw, n):
    entries = draw(st.dictionaries(st.integers(0, n * n - 1), st.integers(-3, 3), max_size=n * n))
    return {k: Fraction(v) for k, v in entries.items() if v}


@given(deltas, st.data())
def test_matrix_product_matches_dense_oracle(delta, data):
    n = len(delta)
    M = matrix_algebra(field_algebra(), n, [(d,) for d in delta])
    x = M.element(data.draw(matrix_elements(n)))
    y = M.element(data.draw(matrix_elements(n)))
    assert _dense(M, n, x * y) == _matmul(_dense(M, n, x), _dense(M, n, y))


@given(deltas)
def test_suspension_degrees(delta):
    n = len(delta)
    M = matrix_algebra(field_algebra(), n, [(d,) for d in delta])
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            assert matrix_unit(M, n, i, j).grade() == (delta[i - 1] - delta[j - 1],)


@given(deltas)
def test_zero_component_dimension_and_blocks(delta):
    n = len(delta)
    M = matrix_algebra(field_algebra(), n, [(d,) for d in delta])
    sizes = [delta.count(v) for v in set(delta)]
    Z = zero_component(M)
    assert Z.dim == sum(s * s for s in sizes)
    assert is_semisimple(Z)
    assert block_count(Z) == len(sizes) == len(center(Z))


@given(deltas, st.data())
def test_homogeneous_parts_sum_back(delta, data):
    n = len(delta)
    M = matrix_algebra(field_algebra(), n, [(d,) for d in delta])
    x = M.element(data.draw(matrix_elements(n)))
    total = M.zero()
    for g in x.homogeneous_parts():
        total = total + homogeneous_component(M, x, g)
    assert total == x


def test_shifted_m2_corner_fullness():
    M = matrix_algebra(field_algebra(), 2, [(1,), (0,)])
    e = matrix_unit(M, 2, 1, 1)
    assert is_idempotent(M, e)
    assert is_full(M, e)
    Z = zero_component_sub(M)
    assert not is_full(Z.alg, Z.restrict(e))
    assert fullness_witness(M, e).verify()


def test_shifted_m2_is_path_algebra_of_edge():
    M = matrix_algebra(field_algebra(), 2, [(1,), (0,)])
    B = as_fin_algebra(LpaAlgebra(Graph(["u", "w"], [("f", "u", "w")])))
    res = graded_iso_search(M, B)
    assert res.status == "found"
    assert check_iso(M, B, res.images)


def test_iso_search_certified_negative():
    M = matrix_algebra(field_algebra(), 2)
    K2 = matrix_algebra(field_algebra(), 2, [(1,), (0,)])
    assert graded_iso_search(M, K2).status == "certified_negative"


def test_corner_of_matrix_unit_is_field():
    M = matrix_algebra(field_algebra(), 3)
    C = corner(M, matrix_unit(M, 3, 2, 2))
    assert C.dim == 1


def test_non_idempotent_corner_rejected():
    M = matrix_algebra(field_algebra(), 2)
    with pytest.raises(AlgebraError):
        corner(M, matrix_unit(M, 2, 1, 2))


def test_strongly_graded():
    # A_1 A_{-1} = span{e11} misses e22
    assert not is_strongly_graded(matrix_algebra(field_algebra(), 2, [(1,), (0,)]))
    assert is_strongly_graded(matrix_algebra(field_algebra(), 2))


def test_structure_constants_must_be_graded():
    with pytest.raises(AlgebraError):
        FinGradedAlgebra(["a", "b"], [(0,), (1,)], {(0, 0): {1: 1}})


def test_json_round_trip():
    M = matrix_algebra(field_algebra(), 2, [(1,), (0,)])
    back = FinGradedAlgebra.from_json(M.to_json())
    assert back.degrees == M.degrees and back.table == M.table


def test_modp_backend():
    from gradealg.field import get_field

    F = get_field("fp:3")
    M = matrix_algebra(field_algebra(F), 2)
    e = matrix_unit(M, 2, 1, 1)
    assert is_full(M, e)
    assert block_count(M) == 1


@given(deltas, st.data())
def test_full_in_zero_component_implies_full(delta, data):
    n = len(delta)
    M = matrix_algebra(field_algebra(), n, [(d,) for d in delta])
    subset = data.draw(st.sets(st.integers(1, n), min_size=1))
    e = M.zero()
    for i in sorted(subset):
        e = e + matrix_unit(M, n, i, i)
    Z = zero_component_sub(M)
    if is_full(Z.alg, Z.restrict(e)):
        assert is_full(M, e)
        assert fullness_witness(M, e).verify()


def test_small_prime_field_block_count_is_not_guessed():
    from gradealg.field import get_field

    # the trace form of M2 vanishes in characteristic 2
    with pytest.raises(AlgebraError):
        block_count(matrix_algebra(field_algebra(get_field("fp:2")), 2))
