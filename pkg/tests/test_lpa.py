import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import coefficients, graphs
from gradealg.graph import Graph, all_paths, line_graph, sinks
from gradealg.lpa import (
    LpaAlgebra,
    LpaError,
    ambient_dimension_truncated,
    as_fin_algebra,
    component_dimension_truncated,
    corner_degree_nonzero,
    corner_lpa,
    degree_nonzero,
    fullness_certificate_primitive,
    quotient_dimension_oracle,
    reduced_monomials,
    zero_component_truncation,
)

LOOP = Graph(["v"], [("e", "v", "v")])
TWO_CYCLE = Graph(["v", "w"], [("e", "v", "w"), ("f", "w", "v")])
E3 = Graph(["1", "2"], [("a", "1", "2"), ("b", "2", "1"), ("c", "2", "2")])


@st.composite
def algebra_and_elements(draw, count=3, max_len=2):
    g = draw(graphs(max_vertices=3, max_edges=5))
    L = LpaAlgebra(g)
    monos = reduced_monomials(L, max_len)
    out = []
    for _ in range(count):
        terms = draw(st.lists(st.tuples(st.sampled_from(monos), coefficients), min_size=1, max_size=3))
        x = L.zero()
        for (lam, mu), c in terms:
            x = x + L.monomial(lam, mu, c)
        out.append(x)
    return L, out


@given(algebra_and_elements())
def test_associative(data):
    L, (x, y, z) = data
    assert (x * y) * z == x * (y * z)


@given(algebra_and_elements(count=2))
def test_involution(data):
    L, (x, y) = data
    assert L.star(L.star(x)) == x
    assert L.star(x * y) == L.star(y) * L.star(x)


@given(algebra_and_elements(count=2))
def test_grading_is_additive(data):
    L, (x, y) = data
    for (a,), xa in x.homogeneous_parts().items():
        for (b,), yb in y.homogeneous_parts().items():
            p = xa * yb
            assert not p or L.degree(p) == a + b


@given(algebra_and_elements(count=1))
def test_text_round_trip(data):
    L, (x,) = data
    assert L.parse(L.format(x)) == x


@given(graphs(max_vertices=3, max_edges=5))
def test_ck_relations(g):
    L = LpaAlgebra(g)
    for e in g.edges:
        for f in g.edges:
            want = L.vertex(e.tgt) if e == f else L.zero()
            assert L.ghost(e.name) * L.edge(f.name) == want
    one = L.zero()
    for v in g.vertices:
        one = one + L.vertex(v)
        if g.out_edges(v):
            s = L.zero()
            for e in g.out_edges(v):
                s = s + L.edge(e) * L.ghost(e)
            assert s == L.vertex(v)
    assert one == L.one()


@given(graphs(max_vertices=3, max_edges=4, acyclic=True))
def test_acyclic_dimension_matches_quotient_oracle(g):
    L = LpaAlgebra(g)
    assert as_fin_algebra(L).dim == quotient_dimension_oracle(L)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_line_graph_is_matrix_algebra(n):
    # one sink, n + 1 paths into it, so L ≅ M_{n+1}(K)
    g = line_graph(n)
    A = as_fin_algebra(LpaAlgebra(g))
    paths_to_sink = sum(1 for p in all_paths(g, n) if p.end == sinks(g)[0])
    assert paths_to_sink == n + 1
    assert A.dim == (n + 1) ** 2


def test_zero_component_of_line_graph():
    # L(G_m)_0 is the diagonal: m + 1 copies of K
    for m in (1, 2, 3):
        Z = zero_component_truncation(LpaAlgebra(line_graph(m)), m)
        assert Z.dim == m + 1


def test_parse_examples():
    L = LpaAlgebra(LOOP)
    assert L.parse("e'.e") == L.vertex("v")
    assert L.parse("e.e'") == L.vertex("v")
    assert L.parse("2*e - e") == L.edge("e")
    with pytest.raises(LpaError):
        L.parse("nope")


def test_numeric_vertex_names():
    L = LpaAlgebra(E3)
    assert L.parse("1") == L.vertex("1")
    assert L.parse("2*a") == 2 * L.edge("a")


def test_two_cycle_corner_has_no_degree_one():
    L = LpaAlgebra(TWO_CYCLE)
    C = corner_lpa(L, "v")
    for n in range(1, 9):
        assert component_dimension_truncated(C, 1, n) == 0
    assert ambient_dimension_truncated(L, 1, 8) > 0
    assert not corner_degree_nonzero(L, "v", 1)
    assert corner_degree_nonzero(L, "v", 2)
    assert degree_nonzero(L, 1)


@given(graphs(max_vertices=3, max_edges=4), st.integers(-3, 3))
def test_exact_degree_test_agrees_with_truncation(g, k):
    L = LpaAlgebra(g)
    for v in g.vertices:
        seen = component_dimension_truncated(corner_lpa(L, v), k, 5) > 0
        if seen:
            assert corner_degree_nonzero(L, v, k)


@pytest.mark.parametrize("graph,v", [(LOOP, "v"), (E3, "1"), (E3, "2")])
def test_primitive_fullness_certificate(graph, v):
    cert = fullness_certificate_primitive(LpaAlgebra(graph), v)
    assert cert.verify()
    L = cert.lpa
    total = L.zero()
    for x, y in cert.witness():
        total = total + x * L.vertex(v) * y
    assert total == L.one()


def test_certificate_needs_primitive_graph():
    with pytest.raises(LpaError):
        fullness_certificate_primitive(LpaAlgebra(TWO_CYCLE), "v")
