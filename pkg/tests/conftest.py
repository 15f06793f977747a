import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gradealg.graph import Graph

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = Path(__file__).resolve().parents[1]
GRAPHS = ROOT / "data" / "graphs"


@pytest.fixture
def graph_path():
    def _path(name: str) -> str:
        return str(GRAPHS / f"{name}.json")

    return _path


@st.composite
def graphs(draw, max_vertices: int = 4, max_edges: int = 6, acyclic: bool = False, min_vertices: int = 1):
    n = draw(st.integers(min_vertices, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=max_edges))
    edges = []
    for k, (a, b) in enumerate(pairs):
        if acyclic:
            if a == b:
                continue
            a, b = min(a, b), max(a, b)
        edges.append((f"e{k}", vs[a], vs[b]))
    return Graph(vs, edges)


coefficients = st.sampled_from([-3, -2, -1, 1, 2, 5])
