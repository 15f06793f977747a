"""Finite directed multigraphs and the path predicates used downstream.

Vertex and edge declaration order is part of the contract: it fixes
matrix-unit indexing and which edge CK2 eliminates at each vertex.
"""

from __future__ import annotations

import json
from typing import Iterable, NamedTuple


class GraphError(ValueError):
    pass


class Edge(NamedTuple):
    name: str
    src: str
    tgt: str


class Path(NamedTuple):
    """A path given by its edge sequence; length-0 paths are vertices."""

    start: str
    end: str
    edges: tuple = ()

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def source(self) -> str:
        return self.start

    @property
    def range(self) -> str:
        return self.end

    def __str__(self):
        return ".".join(self.edges) if self.edges else self.start


class Graph:
    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]):
        self.vertices = tuple(vertices)
        if not self.vertices:
            raise GraphError("graph has no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        self.edges = tuple(Edge(*e) for e in edges)
        names = [e.name for e in self.edges]
        if len(set(names)) != len(names):
            raise GraphError("duplicate edge id")
        vset = set(self.vertices)
        if vset & set(names):
            raise GraphError("edge id clashes with a vertex id")
        for e in self.edges:
            for end in (e.src, e.tgt):
                if end not in vset:
                    raise GraphError(f"edge {e.name!r} has undeclared endpoint {end!r}")
        self._edge = {e.name: e for e in self.edges}
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for e in self.edges:
            self._out[e.src].append(e.name)
            self._in[e.tgt].append(e.name)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}

    def __repr__(self):
        return f"Graph({list(self.vertices)!r}, {[tuple(e) for e in self.edges]!r})"

    def __eq__(self, other):
        return isinstance(other, Graph) and (self.vertices, self.edges) == (other.vertices, other.edges)

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def edge(self, name: str) -> Edge:
        try:
            return self._edge[name]
        except KeyError:
            raise GraphError(f"unknown edge {name!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self._out

    def check_vertex(self, v: str) -> None:
        if v not in self._out:
            raise GraphError(f"unknown vertex {v!r}")

    def out_edges(self, v: str) -> list[str]:
        self.check_vertex(v)
        return self._out[v]

    def in_edges(self, v: str) -> list[str]:
        self.check_vertex(v)
        return self._in[v]

    def src(self, e: str) -> str:
        return self.edge(e).src

    def tgt(self, e: str) -> str:
        return self.edge(e).tgt

    def vertex_index(self, v: str) -> int:
        return self._vindex[v]

    def path(self, edges: Iterable[str], start: str | None = None) -> Path:
        """Build a checked Path from edge names (or the vertex ``start``)."""
        edges = tuple(edges)
        if not edges:
            if start is None:
                raise GraphError("empty path needs an anchor vertex")
            self.check_vertex(start)
            return Path(start, start, ())
        for a, b in zip(edges, edges[1:]):
            if self.tgt(a) != self.src(b):
                raise GraphError(f"edges {a!r}, {b!r} do not compose")
        s = self.src(edges[0])
        if start is not None and start != s:
            raise GraphError("path does not start at the anchor")
        return Path(s, self.tgt(edges[-1]), edges)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"name": e.name, "src": e.src, "tgt": e.tgt} for e in self.edges],
        }


def load_graph(document) -> Graph:
    """Parse a graph from JSON text (or an already-decoded dict)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(document, dict) or "vertices" not in document:
        raise GraphError("graph document must be an object with 'vertices'")
    vertices = document["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise GraphError("'vertices' must be a list of strings")
    edges = []
    for k, e in enumerate(document.get("edges", [])):
        try:
            edges.append((e["name"], e["src"], e["tgt"]))
        except (KeyError, TypeError):
            raise GraphError(f"edge #{k} must have 'name', 'src' and 'tgt'") from None
        if not all(isinstance(x, str) for x in edges[-1]):
            raise GraphError(f"edge #{k} fields must be strings")
    return Graph(vertices, edges)


def paths_of_length(g: Graph, n: int, source: str | None = None, target: str | None = None) -> list[Path]:
    if n < 0:
        raise GraphError("path length must be non-negative")
    for v in (source, target):
        if v is not None:
            g.check_vertex(v)
    starts = [source] if source is not None else list(g.vertices)
    frontier = [Path(v, v, ()) for v in starts]
    for _ in range(n):
        frontier = [Path(p.start, g.tgt(e), p.edges + (e,)) for p in frontier for e in g.out_edges(p.end)]
    if target is not None:
        frontier = [p for p in frontier if p.end == target]
    return frontier


def all_paths(g: Graph, max_len: int, source: str | None = None) -> list[Path]:
    """All paths of length <= max_len, by length then declaration order."""
    out = []
    for k in range(max_len + 1):
        out.extend(paths_of_length(g, k, source=source))
    return out


def adjacency_counts(g: Graph) -> list[list[int]]:
    n = len(g.vertices)
    a = [[0] * n for _ in range(n)]
    for e in g.edges:
        a[g.vertex_index(e.src)][g.vertex_index(e.tgt)] += 1
    return a


def _reach_step(g: Graph, sets: list[set]) -> list[set]:
    return [{g.tgt(e) for u in s for e in g.out_edges(u)} for s in sets]


def is_primitive(g: Graph) -> int | None:
    """Least n such that every ordered vertex pair is joined by a length-n path.

    The search stops at the Wielandt bound (|V|-1)^2 + 1; None means the graph
    is not primitive.
    """
    nv = len(g.vertices)
    bound = (nv - 1) ** 2 + 1
    full = set(g.vertices)
    cur = [{v} for v in g.vertices]
    for n in range(bound):
        cur = _reach_step(g, cur)
        if all(s == full for s in cur):
            return n + 1
    return None


def sinks(g: Graph) -> list[str]:
    return [v for v in g.vertices if not g.out_edges(v)]


def sources(g: Graph) -> list[str]:
    return [v for v in g.vertices if not g.in_edges(v)]


def has_no_sinks(g: Graph) -> bool:
    return not sinks(g)


def _topological_order(g: Graph, vertices: Iterable[str] | None = None) -> list[str] | None:
    vs = list(g.vertices if vertices is None else vertices)
    vset = set(vs)
    indeg = {v: sum(1 for e in g.in_edges(v) if g.src(e) in vset) for v in vs}
    ready = [v for v in vs if indeg[v] == 0]
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for e in g.out_edges(v):
            t = g.tgt(e)
            if t in vset:
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
    return order if len(order) == len(vs) else None


def is_acyclic(g: Graph) -> bool:
    return _topological_order(g) is not None


def line_graph(n: int) -> Graph:
    """The graph z_n -> z_{n-1} -> ... -> z_0."""
    if n < 1:
        raise GraphError("line graph needs n >= 1")
    vertices = [f"z{i}" for i in range(n + 1)]
    edges = [(f"a{i}", f"z{i}", f"z{i - 1}") for i in range(n + 1) if i >= 1]
    return Graph(vertices, edges)


def ancestors(g: Graph, v: str) -> set[str]:
    g.check_vertex(v)
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for e in g.in_edges(u):
            s = g.src(e)
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


def max_path_length_to(g: Graph, v: str) -> int:
    """Length of the longest path ending at v (0 if only the trivial one)."""
    anc = ancestors(g, v)
    order = _topological_order(g, [u for u in g.vertices if u in anc])
    if order is None:
        raise GraphError(f"a cycle reaches {v!r}; path lengths are unbounded")
    into = {u: 0 for u in order}
    for u in order:
        for e in g.out_edges(u):
            t = g.tgt(e)
            if t in into:
                into[t] = max(into[t], into[u] + 1)
    return into[v]


def longest_path_length(g: Graph) -> int:
    if not is_acyclic(g):
        raise GraphError("graph has a cycle")
    return max(max_path_length_to(g, v) for v in g.vertices)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    """Multigraph isomorphism (edge multiplicities respected)."""
    import networkx as nx

    def nxg(x: Graph):
        m = nx.MultiDiGraph()
        m.add_nodes_from(x.vertices)
        m.add_edges_from((e.src, e.tgt) for e in x.edges)
        return m

    return nx.is_isomorphic(nxg(g), nxg(h))
