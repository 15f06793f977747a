import pytest
from hypothesis import given

from conftest import graphs
from gradealg.finalg import field_algebra, matrix_algebra, matrix_unit
from gradealg.graph import Graph, line_graph, sinks
from gradealg.morita import (
    EquivalenceVerdict,
    MoritaError,
    PreconditionError,
    compose_contexts,
    corner_context,
    decide_hge,
    decide_hge_acyclic_single_sink,
    degree_support_obstruction,
    hge_obstruction_corner_degree,
    hge_obstruction_zero_component,
    identity_context,
    morita_ring,
    zero_component_blocks,
)

K = field_algebra()
POINT = Graph(["v"], [])
EDGE = Graph(["u", "w"], [("f", "u", "w")])
LOOP = Graph(["v"], [("e", "v", "v")])
TWO_CYCLE = Graph(["v", "w"], [("e", "v", "w"), ("f", "w", "v")])
G_GRAPH = line_graph(2)
H_GRAPH = Graph(
    ["a", "b", "c", "d", "e", "f"],
    [("ab", "a", "b"), ("bc", "b", "c"), ("db", "d", "b"), ("de", "d", "e"), ("ec", "e", "c"), ("fe", "f", "e")],
)


def test_full_corner_morita_ring():
    M = matrix_algebra(K, 2)
    C = corner_context(M, matrix_unit(M, 2, 1, 1))
    assert C.check_axioms() == []
    assert C.is_surjective() and C.is_homogeneous() and C.is_graded()
    R = morita_ring(C)
    assert R.p_full and R.q_full and R.associative


def test_non_full_corner_in_degree_zero():
    M = matrix_algebra(K, 2, [(1,), (0,)])
    C = corner_context(M, matrix_unit(M, 2, 1, 1))
    flags = C.flags()
    assert flags["psi_surjective"] and flags["phi_surjective"]
    assert not flags["phi0_surjective"]
    R = morita_ring(C)
    assert not R.p_full and R.q_full and R.associative


def test_identity_and_composite_contexts():
    M3 = matrix_algebra(K, 3)
    f = matrix_unit(M3, 3, 1, 1) + matrix_unit(M3, 3, 2, 2)
    C2 = corner_context(M3, f)
    C1 = corner_context(C2.A, C2.corner_map.restrict(matrix_unit(M3, 3, 1, 1)))
    CC = compose_contexts(C1, C2)
    assert CC.check_axioms() == []
    assert all(CC.flags().values())
    I = identity_context(M3)
    assert I.check_axioms() == [] and I.is_surjective()


def test_compose_rejects_mismatched_algebras():
    M2, M3 = matrix_algebra(K, 2), matrix_algebra(K, 3)
    C1 = corner_context(M2, matrix_unit(M2, 2, 1, 1))
    C2 = corner_context(M3, matrix_unit(M3, 3, 1, 1))
    with pytest.raises(MoritaError):
        compose_contexts(C1, C2)


def test_acyclic_single_sink_decisions():
    assert decide_hge_acyclic_single_sink(POINT, EDGE).status == "not_equivalent"
    v = decide_hge_acyclic_single_sink(G_GRAPH, H_GRAPH)
    assert v.status == "equivalent" and v.verify()
    assert v.values["E"]["max_path_length"] == v.values["F"]["max_path_length"] == 2


def test_single_sink_precondition():
    with pytest.raises(PreconditionError):
        decide_hge_acyclic_single_sink(LOOP, POINT)
    with pytest.raises(PreconditionError):
        decide_hge_acyclic_single_sink(Graph(["a", "b"], []), POINT)


@given(graphs(max_vertices=4, max_edges=5, acyclic=True), graphs(max_vertices=4, max_edges=5, acyclic=True))
def test_single_sink_verdict_is_symmetric_and_rechecks(g, h):
    if len(sinks(g)) != 1 or len(sinks(h)) != 1:
        return
    v = decide_hge_acyclic_single_sink(g, h)
    assert v.status == decide_hge_acyclic_single_sink(h, g).status
    assert v.verify()


def test_zero_component_blocks_examples():
    assert zero_component_blocks(LOOP, 4) == 1
    assert zero_component_blocks(TWO_CYCLE, 4) == 2
    assert zero_component_blocks(line_graph(1), 1) == 2
    assert zero_component_blocks(line_graph(2), 2) == 3


def test_zero_component_obstruction_loop_vs_two_cycle():
    ob = hge_obstruction_zero_component(LOOP, TWO_CYCLE, 4)
    assert ob is not None
    assert hge_obstruction_zero_component(LOOP, LOOP, 4) is None


def test_corner_degree_obstruction():
    rep = hge_obstruction_corner_degree(TWO_CYCLE, "v", 1, 8)
    assert rep.corner_dim == 0 and rep.ambient_dim > 0
    assert rep.corner_zero and rep.ambient_nonzero and rep.obstruction


def test_degree_support_obstruction():
    assert degree_support_obstruction(LOOP, LOOP) is None
    # L(point) = K lives in degree 0 only; the loop algebra has every degree
    ob = degree_support_obstruction(POINT, LOOP)
    assert ob is not None and abs(ob.values["degree"]) == 1


def test_decide_hge_examples():
    assert decide_hge(POINT, EDGE).status == "not_equivalent"
    assert decide_hge(G_GRAPH, H_GRAPH).status == "equivalent"
    assert decide_hge(LOOP, TWO_CYCLE).status == "not_equivalent"
    assert decide_hge(LOOP, LOOP).status == "equivalent"
    for v in (decide_hge(POINT, EDGE), decide_hge(LOOP, TWO_CYCLE), decide_hge(G_GRAPH, H_GRAPH)):
        assert v.verify()


def test_decide_hge_falls_back_to_undetermined(graph_path):
    from gradealg.graph import load_graph

    a = load_graph(open(graph_path("cyclic3_a")).read())
    b = load_graph(open(graph_path("cyclic3_b")).read())
    v = decide_hge(a, b)
    assert v.status == "undetermined" and v.criterion == "none"


def test_verdict_status_is_validated():
    with pytest.raises(MoritaError):
        EquivalenceVerdict("maybe", "none")


def test_identity_context_ring_is_two_by_two_matrices():
    A = matrix_algebra(K, 2, [(1,), (0,)])
    R = morita_ring(identity_context(A))
    assert R.L.dim == 4 * A.dim
    assert R.p_full and R.q_full and R.associative
