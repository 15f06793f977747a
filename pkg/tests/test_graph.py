import json

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from gradealg.graph import (
    Graph,
    GraphError,
    adjacency_counts,
    all_paths,
    is_acyclic,
    is_isomorphic,
    is_primitive,
    line_graph,
    load_graph,
    max_path_length_to,
    paths_of_length,
    sinks,
    sources,
)


def _matpow_positive(a, n):
    """Brute-force oracle: entries of a^n via repeated integer products."""
    size = len(a)
    m = [[int(i == j) for j in range(size)] for i in range(size)]
    for _ in range(n):
        m = [[sum(m[i][k] * a[k][j] for k in range(size)) for j in range(size)] for i in range(size)]
    return all(x > 0 for row in m for x in row)


def _nx(g):
    m = nx.MultiDiGraph()
    m.add_nodes_from(g.vertices)
    m.add_edges_from((e.src, e.tgt) for e in g.edges)
    return m


def test_line_graph_g2():
    g = line_graph(2)
    assert sinks(g) == ["z0"] and sources(g) == ["z2"]
    assert is_acyclic(g) and is_primitive(g) is None
    assert max_path_length_to(g, "z0") == 2


def test_loop_primitive_in_one_step():
    assert is_primitive(Graph(["v"], [("e", "v", "v")])) == 1


def test_two_cycle_not_primitive():
    assert is_primitive(Graph(["v", "w"], [("e", "v", "w"), ("f", "w", "v")])) is None


def test_e3_exponent():
    g = Graph(["1", "2"], [("a", "1", "2"), ("b", "2", "1"), ("c", "2", "2")])
    assert is_primitive(g) == 2


@pytest.mark.parametrize(
    "doc",
    [
        '{"vertices": ["a"], "edges": [{"name": "e", "src": "a", "tgt": "b"}]}',
        '{"vertices": ["a", "a"]}',
        '{"vertices": ["a"], "edges": [{"name": "a", "src": "a", "tgt": "a"}]}',
        '{"vertices": []}',
        '{"vertices": ["a"], "edges": [{"src": "a"}]}',
        "{not json",
    ],
)
def test_invalid_graphs_rejected(doc):
    with pytest.raises(GraphError):
        load_graph(doc)


def test_json_error_has_line():
    with pytest.raises(GraphError, match="line 2"):
        load_graph('{"vertices": ["a"],\n oops}')


@given(graphs())
def test_json_round_trip(g):
    assert load_graph(json.dumps(g.to_json())) == g


@given(graphs(max_vertices=4, max_edges=7))
def test_primitivity_matches_matrix_powers(g):
    a = adjacency_counts(g)
    n = len(g.vertices)
    exp = is_primitive(g)
    bound = (n - 1) ** 2 + 1
    first = next((k for k in range(1, bound + 1) if _matpow_positive(a, k)), None)
    assert exp == first


@given(graphs(max_vertices=4, max_edges=6))
def test_acyclicity_and_isomorphism_match_networkx(g):
    assert is_acyclic(g) == nx.is_directed_acyclic_graph(_nx(g))
    assert is_isomorphic(g, g)


@given(graphs(max_vertices=5, max_edges=7, acyclic=True))
def test_longest_path_matches_networkx(g):
    ref = _nx(g)
    for v in g.vertices:
        sub = ref.subgraph(nx.ancestors(ref, v) | {v})
        assert max_path_length_to(g, v) == nx.dag_longest_path_length(sub)


@given(graphs(max_vertices=3, max_edges=4))
def test_path_counts_match_adjacency_powers(g):
    a = adjacency_counts(g)
    size = len(a)
    m = [[int(i == j) for j in range(size)] for i in range(size)]
    for n in range(0, 4):
        assert len(paths_of_length(g, n)) == sum(map(sum, m))
        m = [[sum(m[i][k] * a[k][j] for k in range(size)) for j in range(size)] for i in range(size)]
    for p in all_paths(g, 3):
        assert p.length <= 3


@given(graphs(max_vertices=5, max_edges=7, acyclic=True), st.data())
def test_max_path_length_monotone_under_edge_deletion(g, data):
    if not g.edges:
        return
    drop = data.draw(st.sampled_from([e.name for e in g.edges]))
    h = Graph(g.vertices, [tuple(e) for e in g.edges if e.name != drop])
    for v in g.vertices:
        assert max_path_length_to(h, v) <= max_path_length_to(g, v)
