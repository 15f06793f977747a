"""Seeded property suites at desk scale.

Each suite returns a ``SuiteResult``; the CLI's ``verify-suite`` runs them all
and the acceptance tests call them with the sizes they need.  All randomness
comes from a ``random.Random`` seeded by the caller.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .finalg import (
    FinGradedAlgebra,
    block_count,
    field_algebra,
    fullness_witness,
    graded_iso_search,
    is_full,
    matrix_algebra,
    matrix_unit,
    zero_component,
    zero_component_sub,
)
from .graph import Graph, sinks
from .lpa import (
    LpaAlgebra,
    as_fin_algebra,
    fullness_certificate_primitive,
    quotient_dimension_oracle,
    reduced_monomials,
    zero_component_truncation,
    zero_component_truncation_map,
)
from .matinf import (
    GradedMatrix,
    GradingSpec,
    IndexPermutation,
    InfMatrixRing,
    ModularPartition,
    degree_of,
    double_stab_reindex,
    hg4_star_transport,
    permutation_iso,
)
from .morita import (
    compose_contexts,
    corner_context,
    decide_hge_acyclic_single_sink,
    hge_obstruction_zero_component,
    morita_ring,
)
from .stabilization import StabIso, brown_sequence, check_brown, check_round_trips, check_wz


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def to_json(self) -> dict:
        # seconds are left out so that reports are byte-identical across runs
        return {"suite": self.name, "cases": self.cases, "passed": self.passed, "failures": self.failures[:20]}


def _timed(fn: Callable) -> Callable:
    def run(*args, **kwargs) -> SuiteResult:
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# ---------------------------------------------------------------------------
# named graphs

LOOP = Graph(["v"], [("e", "v", "v")])
TWO_CYCLE = Graph(["v", "w"], [("e", "v", "w"), ("f", "w", "v")])
E3 = Graph(["1", "2"], [("a", "1", "2"), ("b", "2", "1"), ("c", "2", "2")])
H_GRAPH = Graph(
    ["a", "b", "c", "d", "e", "f"],
    [("ab", "a", "b"), ("bc", "b", "c"), ("db", "d", "b"), ("de", "d", "e"), ("ec", "e", "c"), ("fe", "f", "e")],
)


def random_graph(rng: random.Random, max_vertices: int = 4, max_edges: int = 6, acyclic: bool = False) -> Graph:
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    edges = []
    for k in range(rng.randint(0, max_edges)):
        a, b = rng.randrange(n), rng.randrange(n)
        if acyclic:
            if a == b:
                continue
            a, b = min(a, b), max(a, b)
        edges.append((f"e{k}", vs[a], vs[b]))
    return Graph(vs, edges)


def acyclic_graphs(n: int, multiplicity: int = 1):
    """Every graph on v0..v{n-1} with edges only from lower to higher index.

    Up to isomorphism this is every acyclic graph on n vertices with at most
    ``multiplicity`` parallel edges.
    """
    vs = [f"v{i}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for mult in itertools.product(range(multiplicity + 1), repeat=len(pairs)):
        edges = []
        for (i, j), m in zip(pairs, mult):
            for t in range(m):
                edges.append((f"e{i}{j}_{t}", vs[i], vs[j]))
        yield Graph(vs, edges)


def random_lpa_element(rng: random.Random, L: LpaAlgebra, max_len: int = 2, terms: int = 3, monos=None):
    monos = monos if monos is not None else reduced_monomials(L, max_len)
    x = L.zero()
    for _ in range(rng.randint(1, terms)):
        lam, mu = rng.choice(monos)
        x = x + L.monomial(lam, mu, rng.choice([-2, -1, 1, 1, 2, 3]))
    return x


def random_fin_element(rng: random.Random, A: FinGradedAlgebra, terms: int = 3):
    return A.element({rng.randrange(A.dim): rng.choice([-2, -1, 1, 2]) for _ in range(rng.randint(1, terms))})


# ---------------------------------------------------------------------------
# suites


@_timed
def suite_lpa_kernel(seed: int = 0, cases: int = 500, oracle_vertices: int = 3) -> SuiteResult:
    """Confluence, involution, grading and CK relations; quotient oracle."""
    res = SuiteResult("lpa_kernel")
    rng = random.Random(seed)
    for c in range(cases):
        g = random_graph(rng, 4, 6)
        L = LpaAlgebra(g)
        monos = reduced_monomials(L, 2)
        x, y, z = (random_lpa_element(rng, L, monos=monos) for _ in range(3))
        res.cases += 1
        # confluence: every bracketing and every route to a monomial agrees
        if (x * y) * z != x * (y * z):
            res.fail(f"case {c}: associativity on {g!r}")
        lam, mu = rng.choice(monos)
        if L.monomial(lam, mu) != L.path_element(lam) * L.star(L.path_element(mu)):
            res.fail(f"case {c}: monomial {lam}.{mu}* disagrees with its product")
        if L.parse(L.format(x)) != x:
            res.fail(f"case {c}: text round trip of {L.format(x)}")
        # involution
        if L.star(L.star(x)) != x or L.star(x * y) != L.star(y) * L.star(x):
            res.fail(f"case {c}: involution")
        # grading
        for d1, xh in x.homogeneous_parts().items():
            for d2, yh in y.homogeneous_parts().items():
                prod = xh * yh
                if prod and L.degree(prod) != d1[0] + d2[0]:
                    res.fail(f"case {c}: degree of product")
        # CK relations
        for e in g.edges:
            for f in g.edges:
                want = L.vertex(e.tgt) if e.name == f.name else L.zero()
                if L.ghost(e.name) * L.edge(f.name) != want:
                    res.fail(f"case {c}: CK1 for {e.name}*{f.name}")
        for v in g.vertices:
            outs = g.out_edges(v)
            if outs:
                s = L.zero()
                for e in outs:
                    s = s + L.edge(e) * L.ghost(e)
                if s != L.vertex(v):
                    res.fail(f"case {c}: CK2 at {v}")
    for n in range(1, oracle_vertices + 1):
        for g in acyclic_graphs(n, multiplicity=2):
            res.cases += 1
            L = LpaAlgebra(g)
            a, b = as_fin_algebra(L).dim, quotient_dimension_oracle(L)
            if a != b:
                res.fail(f"oracle: dim {a} vs {b} on {g!r}")
    return res


@_timed
def suite_fin_algebra(seed: int = 0, cases: int = 40) -> SuiteResult:
    """Corners, fullness witnesses, zero components and matrix gradings."""
    res = SuiteResult("fin_algebra")
    rng = random.Random(seed)
    K = field_algebra()
    A = matrix_algebra(K, 2, [(1,), (0,)])
    e = matrix_unit(A, 2, 1, 1)
    Z = zero_component_sub(A)
    res.cases += 1
    if not is_full(A, e) or is_full(Z.alg, Z.restrict(e)):
        res.fail("e11 should be full in A but not in A_0")
    iso = graded_iso_search(A, as_fin_algebra(LpaAlgebra(Graph(["u", "w"], [("f", "u", "w")]))))
    if iso.status != "found":
        res.fail(f"no graded iso to L(•→•): {iso.status}")
    for c in range(cases):
        n = rng.randint(1, 3)
        delta = [(rng.randint(-2, 2),) for _ in range(n)]
        M = matrix_algebra(K, n, delta)
        res.cases += 1
        i = rng.randint(1, n)
        ei = matrix_unit(M, n, i, i)
        if not is_full(M, ei):
            res.fail(f"case {c}: e_ii not full in M_{n}")
        M0 = zero_component_sub(M)
        full0 = is_full(M0.alg, M0.restrict(ei))
        want0 = all(d == delta[i - 1] for d in delta)
        if full0 != want0:
            res.fail(f"case {c}: fullness of e_ii in M_0 for δ={delta}")
        if full0:
            w = fullness_witness(M0.alg, M0.restrict(ei))
            if not w.verify():
                res.fail(f"case {c}: witness failed")
        blocks = block_count(zero_component(M))
        if blocks != len(set(delta)):
            res.fail(f"case {c}: {blocks} blocks for δ={delta}")
    return res


def _brown_cases(trunc_for_lpa: int = 2):
    K = field_algebra()
    yield "Q", K, K.one(), [(K.one(), K.one())]
    M = matrix_algebra(K, 2)
    e = matrix_unit(M, 2, 1, 1)
    yield "M2(Q)", M, e, fullness_witness(M, e).pairs
    L = LpaAlgebra(E3)
    Zm = zero_component_truncation_map(L, trunc_for_lpa)
    p = Zm.to_alg(L.vertex("1"))
    yield f"L(E3)_0[<={trunc_for_lpa}]", Zm.alg, p, fullness_witness(Zm.alg, p).pairs


@_timed
def suite_brown(seed: int = 0, window: int = 24, max_depth: int = 3) -> SuiteResult:
    """The four sum/order relations and mutual orthogonality."""
    res = SuiteResult("brown")
    for name, A, p, wit in _brown_cases():
        for depth in range(1, max_depth + 1):
            data = brown_sequence(A, p, wit, depth)
            for chk in check_brown(data, window):
                res.cases += 1
                if chk.status != "pass":
                    res.fail(f"{name} depth {depth}: {chk.identity} at {chk.counterexample}")
    return res


def _lpa_sampler(L: LpaAlgebra, max_len: int = 2) -> Callable:
    monos = reduced_monomials(L, max_len)
    return lambda r: random_lpa_element(r, L, monos=monos, terms=2)


def _fin_sampler(A: FinGradedAlgebra) -> Callable:
    return lambda r: random_fin_element(r, A)


@_timed
def suite_stabilization(seed: int = 0, samples: int = 100, window: int = 24, depth: int = 3) -> SuiteResult:
    """The ten w/z relations, round trips and grade preservation."""
    res = SuiteResult("stabilization")
    K = field_algebra()
    M = matrix_algebra(K, 2)
    e = matrix_unit(M, 2, 1, 1)
    L = LpaAlgebra(E3)
    cases = [
        ("M2(Q)", M, e, fullness_witness(M, e).pairs, _fin_sampler(M)),
        ("L(E3)", L, L.vertex("1"), fullness_certificate_primitive(L, "1").witness(), _lpa_sampler(L)),
    ]
    for name, A, p, wit, sampler in cases:
        data = brown_sequence(A, p, wit, depth)
        for chk in check_wz(data, window) + check_round_trips(data, sampler, samples, seed, window):
            res.cases += 1
            if chk.status != "pass":
                res.fail(f"{name}: {chk.identity} at {chk.counterexample}")
    return res


def _random_matrix(rng: random.Random, ring, sampler: Callable, spec: GradingSpec, support: int = 12, entries: int = 3) -> GradedMatrix:
    return GradedMatrix(ring, {(rng.randint(1, support), rng.randint(1, support)): sampler(rng) for _ in range(rng.randint(1, entries))}, spec)


def _random_spec(rng: random.Random) -> GradingSpec:
    kind = rng.choice(["zero", "periodic", "list"])
    if kind == "zero":
        return GradingSpec.zero()
    if kind == "periodic":
        return GradingSpec.periodic([(rng.randint(-2, 2),) for _ in range(rng.randint(1, 3))])
    return GradingSpec.from_list([(rng.randint(-2, 2),) for _ in range(rng.randint(1, 6))], tail=(0,))


def _random_permutation(rng: random.Random, support: int = 12) -> IndexPermutation:
    if rng.random() < 0.5:
        P = rng.randint(1, 4)
        sigma = list(range(1, P + 1))
        rng.shuffle(sigma)
        return IndexPermutation(sigma=sigma)
    pts = list(range(1, support + 1))
    img = pts[:]
    rng.shuffle(img)
    return IndexPermutation(mapping=dict(zip(pts, img)))


def _homogeneous(x: GradedMatrix, rng: random.Random) -> GradedMatrix:
    parts = x.homogeneous_parts()
    keys = sorted(parts)
    return parts[keys[rng.randrange(len(keys))]] if keys else x


@_timed
def suite_reindex(seed: int = 0, cases: int = 200) -> SuiteResult:
    """permutation_iso, double_stab_reindex and hg4_star_transport."""
    res = SuiteResult("reindex")
    rng = random.Random(seed)
    L = LpaAlgebra(LOOP)
    sample = _lpa_sampler(L, 2)
    for c in range(cases):
        res.cases += 1
        # permutation iso
        spec = _random_spec(rng)
        pi = _random_permutation(rng)
        x, y = (_random_matrix(rng, L, sample, spec) for _ in range(2))
        px, py = permutation_iso(x, pi), permutation_iso(y, pi)
        if permutation_iso(x + y, pi) != px + py:
            res.fail(f"case {c}: permutation_iso not additive")
        if permutation_iso(x * y, pi) != px * py:
            res.fail(f"case {c}: permutation_iso not multiplicative")
        h = _homogeneous(x, rng)
        ph = permutation_iso(h, pi)
        if h and degree_of(ph) != degree_of(h):
            res.fail(f"case {c}: permutation_iso moved degree {degree_of(h)}")
        # double stabilization
        K = rng.randint(1, 4)
        part = ModularPartition(K)
        inner = InfMatrixRing(L)
        outer_spec = GradingSpec.periodic([(rng.randint(-2, 2),) for _ in range(K)])

        def inner_sample(r):
            return _random_matrix(r, L, sample, inner.spec, support=4, entries=2)

        X = _random_matrix(rng, inner, inner_sample, outer_spec, support=K, entries=2)
        Y = _random_matrix(rng, inner, inner_sample, outer_spec, support=K, entries=2)
        rX, rY = double_stab_reindex(X, part), double_stab_reindex(Y, part)
        if double_stab_reindex(X + Y, part) != rX + rY:
            res.fail(f"case {c}: double_stab_reindex not additive")
        if double_stab_reindex(X * Y, part) != rX * rY:
            res.fail(f"case {c}: double_stab_reindex not multiplicative")
        hX = _homogeneous(X, rng)
        if hX and degree_of(double_stab_reindex(hX, part)) != degree_of(hX):
            res.fail(f"case {c}: double_stab_reindex moved degree")
    # hg4 with δ ≡ 0 equals the input iso; periodic δ stays multiplicative and graded
    La = LpaAlgebra(E3)
    data = brown_sequence(La, La.vertex("1"), fullness_certificate_primitive(La, "1").witness(), 4)
    iso = StabIso(data)
    samp = _lpa_sampler(La, 1)
    covered = [i for i in range(1, 13) if data.block_of(i) <= 4]
    for c in range(cases // 4):
        res.cases += 1
        x = GradedMatrix(La, {(rng.choice(covered), rng.choice(covered)): samp(rng) for _ in range(rng.randint(1, 2))})
        if hg4_star_transport(x, iso.forward, La) != iso.forward(x):
            res.fail(f"case {c}: hg4 with δ = 0 differs from the iso")
        # with period 2 the inner indices are halved, so 1..8 stays within depth 4
        delta = GradingSpec.periodic([(0,), (1,)])
        small = range(1, 9)
        xd = GradedMatrix(La, {(rng.choice(small), rng.choice(small)): samp(rng) for _ in range(2)}, delta)
        yd = GradedMatrix(La, {(rng.choice(small), rng.choice(small)): samp(rng)}, delta)
        t = hg4_star_transport(xd * yd, iso.forward, La)
        if t != hg4_star_transport(xd, iso.forward, La) * hg4_star_transport(yd, iso.forward, La):
            res.fail(f"case {c}: hg4 transport not multiplicative")
        h = _homogeneous(xd, rng)
        th = hg4_star_transport(h, iso.forward, La)
        if th and degree_of(th) != degree_of(h):
            res.fail(f"case {c}: hg4 transport moved degree")
    return res


def _sink_graphs(max_vertices: int):
    for n in range(1, max_vertices + 1):
        for g in acyclic_graphs(n):
            if len(sinks(g)) == 1:
                yield g


@_timed
def suite_morita(seed: int = 0, max_vertices: int = 4) -> SuiteResult:
    """Context axioms, Morita ring fullness, verdict consistency."""
    res = SuiteResult("morita")
    K = field_algebra()
    M = matrix_algebra(K, 2)
    C = corner_context(M, matrix_unit(M, 2, 1, 1))
    res.cases += 1
    if C.check_axioms():
        res.fail("corner context axioms")
    R = morita_ring(C)
    if not (R.p_full and R.q_full and R.associative):
        res.fail(f"Morita ring of the full corner: {R.to_json()}")
    # a chain e <= f in M_3
    M3 = matrix_algebra(K, 3)
    f = matrix_unit(M3, 3, 1, 1) + matrix_unit(M3, 3, 2, 2)
    C2 = corner_context(M3, f)
    C1 = corner_context(C2.A, C2.corner_map.restrict(matrix_unit(M3, 3, 1, 1)))
    CC = compose_contexts(C1, C2)
    res.cases += 1
    if not (CC.is_surjective() and CC.is_homogeneous()) or CC.check_axioms():
        res.fail(f"composite context flags {CC.flags()}")
    # non-full corner: φ_0 fails, so p (the eAe corner) is not full in L_0
    G = matrix_algebra(K, 2, [(1,), (0,)])
    Cg = corner_context(G, matrix_unit(G, 2, 1, 1))
    Rg = morita_ring(Cg)
    res.cases += 1
    if Cg.flags()["phi0_surjective"] or Rg.p_full or not Rg.q_full:
        res.fail(f"non-full corner: {Cg.flags()} {Rg.to_json()}")
    # verdict consistency over small acyclic single-sink graphs
    graphs = list(_sink_graphs(max_vertices))
    blocks = {}
    for g in graphs:
        blocks[id(g)] = block_count(zero_component_truncation(LpaAlgebra(g), len(g.vertices)))
    for g in graphs:
        for h in graphs:
            res.cases += 1
            v = decide_hge_acyclic_single_sink(g, h)
            if v.status != decide_hge_acyclic_single_sink(h, g).status:
                res.fail(f"asymmetric verdict {g!r} / {h!r}")
            if g is h and v.status != "equivalent":
                res.fail(f"not reflexive on {g!r}")
            if blocks[id(g)] != blocks[id(h)] and v.status == "equivalent":
                res.fail(f"obstruction contradicts verdict on {g!r} / {h!r}")
    # the obstruction itself on a few pairs
    g0 = graphs[0]
    res.cases += 1
    if hge_obstruction_zero_component(g0, g0, 3) is not None:
        res.fail("obstruction fired on identical graphs")
    return res


SUITES = {
    "lpa_kernel": suite_lpa_kernel,
    "fin_algebra": suite_fin_algebra,
    "brown": suite_brown,
    "stabilization": suite_stabilization,
    "reindex": suite_reindex,
    "morita": suite_morita,
}


def run_suites(names=None, seed: int = 0) -> list[SuiteResult]:
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    return [SUITES[n](seed=seed) for n in names]
