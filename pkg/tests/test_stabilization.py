import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from gradealg.finalg import field_algebra, fullness_witness, matrix_algebra, matrix_unit
from gradealg.graph import Graph
from gradealg.lpa import LpaAlgebra, fullness_certificate_primitive, reduced_monomials
from gradealg.matinf import FiniteIndexSet, GradedMatrix, ModularIndexSet, degree_of
from gradealg.stabilization import (
    InsufficientDepth,
    StabilizationError,
    StabIso,
    brown_sequence,
    check_brown,
    check_wz,
    make_equiv_pair,
    unit_corner_pair,
    verify_stabilization,
)

E3 = Graph(["1", "2"], [("a", "1", "2"), ("b", "2", "1"), ("c", "2", "2")])
L = LpaAlgebra(E3)
P = L.vertex("1")
WITNESS = fullness_certificate_primitive(L, "1").witness()
DATA = brown_sequence(L, P, WITNESS, 3)
ISO = StabIso(DATA)
MONOS = reduced_monomials(L, 2)


@st.composite
def lpa_elements(draw):
    terms = draw(st.lists(st.tuples(st.sampled_from(MONOS), st.sampled_from([-1, 1, 2])), min_size=1, max_size=2))
    x = L.zero()
    for (lam, mu), c in terms:
        x = x + L.monomial(lam, mu, c)
    return x


# indices whose block is at most the depth, so forward is defined
COVERED = [i for i in range(1, 13) if DATA.block_of(i) <= DATA.depth]


@st.composite
def covered_matrices(draw):
    ents = draw(st.dictionaries(st.tuples(st.sampled_from(COVERED), st.sampled_from(COVERED)), lpa_elements(), min_size=1, max_size=2))
    return GradedMatrix(L, ents)


def test_brown_relations_on_lpa():
    assert all(c.status == "pass" for c in check_brown(DATA, 16))


def test_wz_relations_on_lpa():
    assert all(c.status == "pass" for c in check_wz(DATA, 16))


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_brown_relations_on_matrices(depth):
    M = matrix_algebra(field_algebra(), 2)
    e = matrix_unit(M, 2, 1, 1)
    data = brown_sequence(M, e, fullness_witness(M, e).pairs, depth)
    assert data.m == 2
    assert all(c.status == "pass" for c in check_brown(data, 12) + check_wz(data, 12))


@given(covered_matrices(), covered_matrices())
def test_forward_is_multiplicative_and_additive(x, y):
    fx, fy = ISO.forward(x), ISO.forward(y)
    assert ISO.forward(x + y) == fx + fy
    xy = x * y
    assert ISO.forward(xy) == fx * fy


@given(covered_matrices())
def test_forward_lands_in_corner_and_preserves_degree(x):
    fx = ISO.forward(x)
    for a in fx.entries.values():
        assert P * a * P == a
    for g, part in x.homogeneous_parts().items():
        img = ISO.forward(part)
        assert not img or degree_of(img) == g


@given(covered_matrices())
def test_backward_undoes_forward(x):
    fx = ISO.forward(x)
    try:
        assert ISO.backward(fx) == x
    except InsufficientDepth:
        assume(False)


def test_insufficient_depth_is_reported():
    x = GradedMatrix(L, {(DATA.K * 10 + DATA.depth + 1, 1): L.one()})
    with pytest.raises(InsufficientDepth, match="need n = "):
        ISO.forward(x)


def test_backward_rejects_entries_outside_corner():
    with pytest.raises(StabilizationError):
        ISO.backward(GradedMatrix(L, {(1, 1): L.vertex("2")}))


def test_make_equiv_pair_finite_and_lazy():
    pair = make_equiv_pair(L, P, FiniteIndexSet([1, 2]), FiniteIndexSet([5, 7]))
    assert pair.check(10) == []
    assert (pair.u * pair.v).entries == {(1, 1): P, (2, 2): P}
    lazy = make_equiv_pair(L, P, ModularIndexSet(3, 1), ModularIndexSet(3, 2))
    assert lazy.check(12) == []
    with pytest.raises(StabilizationError):
        make_equiv_pair(L, P, FiniteIndexSet([1]), FiniteIndexSet([1, 2]))


def test_unit_corner_pair_needs_a_real_witness():
    with pytest.raises(StabilizationError):
        unit_corner_pair(L, P, WITNESS[:1])
    m, pair = unit_corner_pair(L, P, WITNESS)
    assert m == len(WITNESS)
    assert (pair.u * pair.v).entries == {(1, 1): L.one()}


def test_corrupt_mode_fails_orthogonality():
    report = verify_stabilization(L, P, WITNESS, 2, 12, 0, corrupt=True)
    failed = [c.identity for c in report if c.status == "fail"]
    assert failed
    assert all(c.counterexample for c in report if c.status == "fail")


def test_field_case_is_trivial():
    K = field_algebra()
    data = brown_sequence(K, K.one(), [(K.one(), K.one())], 2)
    assert data.m == 1
    assert all(c.status == "pass" for c in check_brown(data, 10))
