from collections import defaultdict

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradealg.graph import Graph
from gradealg.lpa import LpaAlgebra
from gradealg.matinf import (
    GradedMatrix,
    GradingSpec,
    IndexPermutation,
    InfMatrixRing,
    LazyMatrix,
    MatrixError,
    ModularIndexSet,
    ModularPartition,
    corner_e11_iso,
    degree_of,
    double_stab_reindex,
    double_stab_unreindex,
    hg4_star_transport,
    permutation_iso,
    window,
    window_diff,
)

# L(loop) is the Laurent polynomial ring K[x, 1/x] with e -> x, e* -> 1/x
L = LpaAlgebra(Graph(["v"], [("e", "v", "v")]))


def laurent(k: int, c: int = 1):
    path = L.graph.path(["e"] * abs(k), start="v")
    triv = L.graph.path([], start="v")
    return L.monomial(path, triv, c) if k >= 0 else L.monomial(triv, path, c)


def to_poly(a) -> dict:
    out = defaultdict(int)
    for (lam, mu), c in a.terms.items():
        out[lam.length - mu.length] += c
    return {k: v for k, v in out.items() if v}


def poly_mul(p, q):
    out = defaultdict(int)
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] += x * y
    return {k: v for k, v in out.items() if v}


def dense_product(x, y, N):
    """Oracle: product over Laurent polynomials, entry by entry."""
    out = {}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            acc = defaultdict(int)
            for k in range(1, N + 1):
                a, b = x.entries.get((i, k)), y.entries.get((k, j))
                if a is not None and b is not None:
                    for d, c in poly_mul(to_poly(a), to_poly(b)).items():
                        acc[d] += c
            acc = {d: c for d, c in acc.items() if c}
            if acc:
                out[(i, j)] = acc
    return out


idx = st.integers(1, 6)
entries = st.tuples(st.integers(-2, 2), st.sampled_from([-2, -1, 1, 3]))
specs = st.one_of(
    st.just(GradingSpec.zero()),
    st.lists(st.integers(-2, 2), min_size=1, max_size=3).map(lambda v: GradingSpec.periodic([(d,) for d in v])),
    st.lists(st.integers(-2, 2), min_size=1, max_size=5).map(lambda v: GradingSpec.from_list([(d,) for d in v], tail=(0,))),
)


@st.composite
def matrices(draw, spec=None, support=6):
    spec = spec if spec is not None else draw(specs)
    ents = draw(st.dictionaries(st.tuples(st.integers(1, support), st.integers(1, support)), entries, max_size=4))
    return GradedMatrix(L, {k: laurent(d, c) for k, (d, c) in ents.items()}, spec)


@given(st.data())
def test_product_matches_laurent_oracle(data):
    spec = data.draw(specs)
    x, y = data.draw(matrices(spec)), data.draw(matrices(spec))
    got = {k: to_poly(v) for k, v in (x * y).entries.items()}
    assert got == dense_product(x, y, 6)


@given(specs, idx, idx, st.integers(-3, 3))
def test_embedded_degree(spec, i, j, k):
    m = GradedMatrix(L, {(i, j): laurent(k)}, spec)
    assert degree_of(m) == (k + spec(i)[0] - spec(j)[0],)


@given(st.data())
def test_homogeneous_parts_multiply_additively(data):
    spec = data.draw(specs)
    x, y = data.draw(matrices(spec)), data.draw(matrices(spec))
    for gx, px in x.homogeneous_parts().items():
        for gy, py in y.homogeneous_parts().items():
            p = px * py
            assert not p or degree_of(p) == (gx[0] + gy[0],)


permutations = st.one_of(
    st.permutations(range(1, 5)).map(lambda s: IndexPermutation(sigma=list(s))),
    st.permutations(range(1, 7)).map(lambda s: IndexPermutation(mapping=dict(zip(range(1, 7), s)))),
)


@given(st.data(), permutations)
def test_permutation_iso_is_graded_ring_map(data, pi):
    spec = data.draw(specs)
    x, y = data.draw(matrices(spec)), data.draw(matrices(spec))
    px, py = permutation_iso(x, pi), permutation_iso(y, pi)
    assert permutation_iso(x + y, pi) == px + py
    assert permutation_iso(x * y, pi) == px * py
    for g, part in x.homogeneous_parts().items():
        assert degree_of(permutation_iso(part, pi)) == g
    assert permutation_iso(px, pi.inverse()) == x


@given(st.data(), st.integers(1, 4))
def test_double_stab_round_trip_and_hom(data, K):
    inner = InfMatrixRing(L)
    delta = GradingSpec.periodic([(d,) for d in data.draw(st.lists(st.integers(-2, 2), min_size=K, max_size=K))])
    part = ModularPartition(K)

    def outer():
        blocks = data.draw(st.dictionaries(st.tuples(st.integers(1, K), st.integers(1, K)), matrices(inner.spec, 4), max_size=3))
        return GradedMatrix(inner, blocks, delta)

    X, Y = outer(), outer()
    rX = double_stab_reindex(X, part)
    assert double_stab_unreindex(rX, part, delta) == X
    assert double_stab_reindex(X * Y, part) == rX * double_stab_reindex(Y, part)
    for g, part_x in X.homogeneous_parts().items():
        assert degree_of(double_stab_reindex(part_x, part)) == g


def test_partition_rejects_outer_index_beyond_blocks():
    part = ModularPartition(2)
    inner = InfMatrixRing(L)
    X = GradedMatrix(inner, {(3, 1): inner.embed(laurent(0), 1, 1)})
    with pytest.raises(MatrixError):
        double_stab_reindex(X, part)


def test_corner_iso_round_trip():
    a = laurent(2, 3)
    m = corner_e11_iso(a, L)
    assert m.entries == {(1, 1): a}
    assert corner_e11_iso(m) == a


def test_lazy_diag_acts_as_projection():
    S = ModularIndexSet(3, 2)
    P = LazyMatrix.diag(L, L.one(), S)
    x = GradedMatrix(L, {(2, 1): laurent(1), (3, 3): laurent(0), (5, 2): laurent(-1)})
    assert P * x == GradedMatrix(L, {(2, 1): laurent(1), (5, 2): laurent(-1)})
    assert window_diff(P * x, P * (P * x), 10) is None
    assert window(x, 2) == GradedMatrix(L, {(2, 1): laurent(1)})


def test_window_diff_reports_first_mismatch():
    x = GradedMatrix(L, {(1, 2): laurent(1)})
    y = GradedMatrix(L, {(1, 2): laurent(2)})
    i, j, expected, got = window_diff(x, y, 4)
    assert (i, j) == (1, 2) and expected == laurent(2) and got == laurent(1)


@given(specs)
def test_spec_json_round_trip(spec):
    assert GradingSpec.from_json(spec.to_json()) == spec


@given(specs, permutations)
def test_spec_compose(spec, pi):
    c = spec.compose(pi)
    for n in range(1, 25):
        assert c(n) == spec(pi(n))


def test_hg4_rejects_non_recurring_spec():
    x = GradedMatrix(L, {(1, 1): laurent(0)}, GradingSpec.from_list([(1,)], tail=(0,)))
    with pytest.raises(MatrixError):
        hg4_star_transport(x, lambda m: m, L)


@given(st.data())
def test_hg4_with_identity_iso_is_identity(data):
    spec = GradingSpec.periodic([(0,), (1,)])
    x = data.draw(matrices(spec))
    assert hg4_star_transport(x, lambda m: m, L) == x
