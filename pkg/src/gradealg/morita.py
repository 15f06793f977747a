"""Graded Morita contexts, the Morita ring, and equivalence verdicts for LPAs.

Bimodules are finite-dimensional with a homogeneous basis; actions and pairings
are stored as coordinate dicts on basis pairs.  Corner contexts sit inside an
ambient algebra; composed contexts use tensor quotients computed by RREF.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from . import linalg
from .finalg import (
    AlgebraError,
    AlgElement,
    FinGradedAlgebra,
    NotSemisimple,
    block_count,
    corner_sub,
    deg_add,
    is_full,
    is_idempotent,
    zero_component_sub,
)
from .graph import (
    Graph,
    is_acyclic,
    is_isomorphic,
    longest_path_length,
    max_path_length_to,
    sinks,
)
from .lpa import (
    LpaAlgebra,
    component_dimension_truncated,
    corner_degree_nonzero,
    corner_lpa,
    ambient_dimension_truncated,
    degree_nonzero,
    degree_support_period,
    zero_component_truncation,
)


class MoritaError(ValueError):
    pass


class PreconditionError(MoritaError):
    pass


# ---------------------------------------------------------------------------
# bimodules and contexts


@dataclass
class Bimodule:
    """A graded (left, right) bimodule with a homogeneous basis."""

    left: FinGradedAlgebra
    right: FinGradedAlgebra
    names: list
    degrees: list
    lact: dict  # (a, m) -> coords of b_a · m_m
    ract: dict  # (m, b) -> coords of m_m · b_b

    @property
    def dim(self) -> int:
        return len(self.names)

    def act_left(self, a: dict, m: dict) -> dict:
        acc: dict = {}
        for i, c in a.items():
            for k, d in m.items():
                v = self.lact.get((i, k))
                if v:
                    linalg.axpy(acc, c * d, v)
        return acc

    def act_right(self, m: dict, b: dict) -> dict:
        acc: dict = {}
        for k, d in m.items():
            for j, c in b.items():
                v = self.ract.get((k, j))
                if v:
                    linalg.axpy(acc, d * c, v)
        return acc

    def indices_of_degree(self, deg) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == deg]


def _bilinear(table: dict, x: dict, y: dict) -> dict:
    acc: dict = {}
    for i, c in x.items():
        for j, d in y.items():
            v = table.get((i, j))
            if v:
                linalg.axpy(acc, c * d, v)
    return acc


@dataclass
class MoritaContext:
    """(A, B, M, N, ψ, φ) with ψ: M ⊗_B N → A and φ: N ⊗_A M → B."""

    A: FinGradedAlgebra
    B: FinGradedAlgebra
    M: Bimodule
    N: Bimodule
    psi: dict  # (m, n) -> coords in A
    phi: dict  # (n, m) -> coords in B
    name: str = "context"
    corner_map: object = field(default=None, repr=False)  # eAe ⊂ A for corner contexts
    _flags: dict = field(default_factory=dict, repr=False)

    def psi_of(self, m: dict, n: dict) -> dict:
        return _bilinear(self.psi, m, n)

    def phi_of(self, n: dict, m: dict) -> dict:
        return _bilinear(self.phi, n, m)

    # surjectivity and homogeneity

    def _span_is_full(self, table: dict, X: Bimodule, Y: Bimodule, target: FinGradedAlgebra, zero_only: bool) -> bool:
        if zero_only:
            z = target.zero_degree()
            xs, ys = X.indices_of_degree(z), Y.indices_of_degree(z)
            want = len(target.indices_of_degree(z))
        else:
            xs, ys = range(X.dim), range(Y.dim)
            want = target.dim
        vecs = (table[(i, j)] for i in xs for j in ys if (i, j) in table)
        return linalg.rank(vecs) == want

    def flags(self) -> dict:
        if not self._flags:
            self._flags = {
                "psi_surjective": self._span_is_full(self.psi, self.M, self.N, self.A, False),
                "phi_surjective": self._span_is_full(self.phi, self.N, self.M, self.B, False),
                "psi0_surjective": self._span_is_full(self.psi, self.M, self.N, self.A, True),
                "phi0_surjective": self._span_is_full(self.phi, self.N, self.M, self.B, True),
                "graded": self.is_graded(),
            }
        return dict(self._flags)

    def is_surjective(self) -> bool:
        f = self.flags()
        return f["psi_surjective"] and f["phi_surjective"]

    def is_homogeneous(self) -> bool:
        """The degree-0 restriction is itself a surjective context."""
        f = self.flags()
        return f["graded"] and f["psi0_surjective"] and f["phi0_surjective"]

    def is_graded(self) -> bool:
        for (i, j), v in self.psi.items():
            want = deg_add(self.M.degrees[i], self.N.degrees[j])
            if any(self.A.degrees[k] != want for k in v):
                return False
        for (j, i), v in self.phi.items():
            want = deg_add(self.N.degrees[j], self.M.degrees[i])
            if any(self.B.degrees[k] != want for k in v):
                return False
        return True

    def check_axioms(self, samples: int | None = None, seed: int = 0) -> list[str]:
        """φ(n⊗m)n' = nψ(m⊗n') and m'φ(n⊗m) = ψ(m'⊗n)m on basis elements.

        With ``samples`` set, that many random basis quadruples are checked
        instead of all of them.
        """
        M, N = self.M, self.N
        quads = itertools.product(range(N.dim), range(M.dim), range(N.dim))
        quads2 = itertools.product(range(M.dim), range(N.dim), range(M.dim))
        if samples is not None:
            rng = random.Random(seed)
            quads = [(rng.randrange(N.dim), rng.randrange(M.dim), rng.randrange(N.dim)) for _ in range(samples)] if N.dim and M.dim else []
            quads2 = [(rng.randrange(M.dim), rng.randrange(N.dim), rng.randrange(M.dim)) for _ in range(samples)] if N.dim and M.dim else []
        bad = []
        one = self.A.field.one
        for n, m, n2 in quads:
            lhs = N.act_left(self.phi_of({n: one}, {m: one}), {n2: one})
            rhs = N.act_right({n: one}, self.psi_of({m: one}, {n2: one}))
            if lhs != rhs:
                bad.append(f"φ(n{n}⊗m{m})n{n2} ≠ n{n}ψ(m{m}⊗n{n2})")
        for m2, n, m in quads2:
            lhs = M.act_right({m2: one}, self.phi_of({n: one}, {m: one}))
            rhs = M.act_left(self.psi_of({m2: one}, {n: one}), {m: one})
            if lhs != rhs:
                bad.append(f"m{m2}φ(n{n}⊗m{m}) ≠ ψ(m{m2}⊗n{n})m{m}")
        return bad


def _span_by_degree(A: FinGradedAlgebra, vectors: list[dict]):
    """Homogeneous reduced basis of a graded subspace given by homogeneous vectors."""
    by_deg: dict = {}
    for v in vectors:
        if v:
            d = A.degrees[next(iter(v))]
            by_deg.setdefault(d, []).append(v)
    basis, degrees, pivots = [], [], []
    for d in sorted(by_deg):
        for p, row in linalg.rref(by_deg[d]):
            basis.append(row)
            degrees.append(d)
            pivots.append(p)
    return basis, degrees, pivots


def _coords(basis: list, pivots: list, v: dict, what: str) -> dict:
    out = {k: v[p] for k, p in enumerate(pivots) if v.get(p)}
    back: dict = {}
    for k, c in out.items():
        linalg.axpy(back, c, basis[k])
    if back != v:
        raise MoritaError(f"{what}: element lies outside the subspace")
    return out


def _homogeneous_split(A: FinGradedAlgebra, v: dict) -> list[dict]:
    parts: dict = {}
    for k, c in v.items():
        parts.setdefault(A.degrees[k], {})[k] = c
    return list(parts.values())


def corner_context(A: FinGradedAlgebra, e: AlgElement) -> MoritaContext:
    """(eAe, A, eA, Ae, ψ, φ) with ψ(x⊗y) = xy and φ(y⊗x) = yx.

    The flags of the result say whether ψ₀ and φ₀ are surjective; φ₀ is
    surjective exactly when e is full in A₀.
    """
    if not is_idempotent(A, e):
        raise MoritaError("e is not an idempotent")
    if any(A.degrees[k] != A.zero_degree() for k in e.coeffs):
        raise MoritaError("e is not homogeneous of degree 0")
    C = corner_sub(A, e)
    eA = [v for j in range(A.dim) for v in _homogeneous_split(A, A.mul(e, A.basis(j)).coeffs)]
    Ae = [v for j in range(A.dim) for v in _homogeneous_split(A, A.mul(A.basis(j), e).coeffs)]
    mb, mdeg, mpiv = _span_by_degree(A, eA)
    nb, ndeg, npiv = _span_by_degree(A, Ae)
    Mel = [AlgElement(A, v) for v in mb]
    Nel = [AlgElement(A, v) for v in nb]
    Cel = [C.lift(C.alg.basis(k)) for k in range(C.alg.dim)]

    def table(lefts, rights, basis, piv, what, restrict=None):
        out = {}
        for i, x in enumerate(lefts):
            for j, y in enumerate(rights):
                p = A.mul(x, y)
                if p:
                    out[(i, j)] = restrict(p) if restrict else _coords(basis, piv, p.coeffs, what)
        return out

    Abasis = [A.basis(j) for j in range(A.dim)]
    M = Bimodule(C.alg, A, [f"eA[{k}]" for k in range(len(mb))], mdeg,
                 table(Cel, Mel, mb, mpiv, "eAe·eA"), table(Mel, Abasis, mb, mpiv, "eA·A"))
    N = Bimodule(A, C.alg, [f"Ae[{k}]" for k in range(len(nb))], ndeg,
                 table(Abasis, Nel, nb, npiv, "A·Ae"), table(Nel, Cel, nb, npiv, "Ae·eAe"))
    psi = table(Mel, Nel, None, None, "", restrict=lambda p: C.restrict(p).coeffs)
    phi = table(Nel, Mel, None, None, "", restrict=lambda p: dict(p.coeffs))
    return MoritaContext(C.alg, A, M, N, psi, phi, name=f"corner({A.name})", corner_map=C)


def identity_context(A: FinGradedAlgebra) -> MoritaContext:
    """(A, A, A, A, mult, mult)."""
    lact = {(i, j): dict(v) for (i, j), v in A.table.items()}
    M = Bimodule(A, A, list(A.names), list(A.degrees), lact, dict(lact))
    N = Bimodule(A, A, list(A.names), list(A.degrees), dict(lact), dict(lact))
    return MoritaContext(A, A, M, N, dict(lact), dict(lact), name=f"id({A.name})")


def same_algebra(A: FinGradedAlgebra, B: FinGradedAlgebra) -> bool:
    if A is B:
        return True
    return (
        A.dim == B.dim
        and A.degrees == B.degrees
        and A.table == B.table
        and (A.unit.coeffs if A.unit else None) == (B.unit.coeffs if B.unit else None)
    )


@dataclass
class _Tensor:
    """X ⊗_R Y as the quotient of the pair span by the balancing relations."""

    X: Bimodule
    Y: Bimodule
    rows: list  # RREF (pivot, row) of the relation span
    basis: list  # pair indices not among the pivots
    index: dict  # pair index -> quotient basis index

    def pair(self, i: int, j: int) -> int:
        return i * self.Y.dim + j

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for p, row in self.rows:
            c = v.get(p)
            if c:
                linalg.axpy(v, -c, row)
        return {self.index[k]: c for k, c in v.items()}

    def of(self, x: dict, y: dict) -> dict:
        """Class of x ⊗ y."""
        v: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                linalg.axpy(v, a * b, {self.pair(i, j): 1})
        return self.reduce(v)

    def factors(self, k: int) -> tuple[int, int]:
        return divmod(self.basis[k], self.Y.dim)


def _tensor(X: Bimodule, Y: Bimodule) -> _Tensor:
    if not same_algebra(X.right, Y.left):
        raise MoritaError("tensor factors do not share the middle algebra")
    R = X.right
    one = R.field.one
    rels = []
    for i in range(X.dim):
        for r in range(R.dim):
            xr = X.act_right({i: one}, {r: one})
            for j in range(Y.dim):
                ry = Y.act_left({r: one}, {j: one})
                v: dict = {}
                for k, c in xr.items():
                    linalg.axpy(v, c, {k * Y.dim + j: one})
                for k, c in ry.items():
                    linalg.axpy(v, -c, {i * Y.dim + k: one})
                if v:
                    rels.append(v)
    rows = linalg.rref(rels)
    piv = {p for p, _ in rows}
    basis = [k for k in range(X.dim * Y.dim) if k not in piv]
    return _Tensor(X, Y, rows, basis, {k: t for t, k in enumerate(basis)})


def _tensor_bimodule(T: _Tensor, name: str) -> Bimodule:
    X, Y = T.X, T.Y
    one = X.left.field.one
    degrees = []
    for k in range(len(T.basis)):
        i, j = T.factors(k)
        degrees.append(deg_add(X.degrees[i], Y.degrees[j]))
    lact, ract = {}, {}
    for k in range(len(T.basis)):
        i, j = T.factors(k)
        for a in range(X.left.dim):
            v = T.of(X.act_left({a: one}, {i: one}), {j: one})
            if v:
                lact[(a, k)] = v
        for b in range(Y.right.dim):
            v = T.of({i: one}, Y.act_right({j: one}, {b: one}))
            if v:
                ract[(k, b)] = v
    return Bimodule(X.left, Y.right, [f"{name}[{k}]" for k in range(len(T.basis))], degrees, lact, ract)


def compose_contexts(C1: MoritaContext, C2: MoritaContext) -> MoritaContext:
    """(A, C, M⊗X, Y⊗N, μ, ν) from C1 = (A, B, M, N, ψ, φ) and C2 = (B, C, X, Y, β, α).

    μ((m⊗x)⊗(y⊗n)) = ψ(m ⊗ β(x⊗y)n) and ν((y⊗n)⊗(m⊗x)) = α(y ⊗ φ(n⊗m)x).
    """
    if not same_algebra(C1.B, C2.A):
        raise MoritaError("middle algebras do not match")
    one = C1.A.field.one
    MX = _tensor(C1.M, C2.M)
    YN = _tensor(C2.N, C1.N)
    P = _tensor_bimodule(MX, "M⊗X")
    Q = _tensor_bimodule(YN, "Y⊗N")
    mu, nu = {}, {}
    for s in range(P.dim):
        m, x = MX.factors(s)
        for t in range(Q.dim):
            y, n = YN.factors(t)
            b = C2.psi_of({x: one}, {y: one})
            v = C1.psi_of({m: one}, C1.N.act_left(b, {n: one}))
            if v:
                mu[(s, t)] = v
            b2 = C1.phi_of({n: one}, {m: one})
            w = C2.phi_of({y: one}, C2.M.act_left(b2, {x: one}))
            if w:
                nu[(t, s)] = w
    return MoritaContext(C1.A, C2.B, P, Q, mu, nu, name=f"{C1.name}∘{C2.name}")


# ---------------------------------------------------------------------------
# the Morita ring


@dataclass
class MoritaRing:
    L: FinGradedAlgebra
    p: AlgElement
    q: AlgElement
    context: MoritaContext
    p_full: bool
    q_full: bool
    associative: bool

    def to_json(self) -> dict:
        return {
            "dim": self.L.dim,
            "p_full_in_L0": self.p_full,
            "q_full_in_L0": self.q_full,
            "associative": self.associative,
        }


def morita_ring(C: MoritaContext) -> MoritaRing:
    """L = [[A, M], [N, B]] with the 2×2 product and ψ, φ cross terms."""
    A, B, M, N = C.A, C.B, C.M, C.N
    oA, oM, oN, oB = 0, A.dim, A.dim + M.dim, A.dim + M.dim + N.dim
    names = [f"A:{x}" for x in A.names] + [f"M:{x}" for x in M.names] + [f"N:{x}" for x in N.names] + [f"B:{x}" for x in B.names]
    degrees = list(A.degrees) + list(M.degrees) + list(N.degrees) + list(B.degrees)

    def shift(v: dict, off: int) -> dict:
        return {k + off: c for k, c in v.items()}

    table: dict = {}

    def put(i, j, v):
        if v:
            table[(i, j)] = v

    for (i, j), v in A.table.items():
        put(oA + i, oA + j, shift(v, oA))
    for (i, j), v in B.table.items():
        put(oB + i, oB + j, shift(v, oB))
    for (a, m), v in M.lact.items():
        put(oA + a, oM + m, shift(v, oM))
    for (m, b), v in M.ract.items():
        put(oM + m, oB + b, shift(v, oM))
    for (b, n), v in N.lact.items():
        put(oB + b, oN + n, shift(v, oN))
    for (n, a), v in N.ract.items():
        put(oN + n, oA + a, shift(v, oN))
    for (m, n), v in C.psi.items():
        put(oM + m, oN + n, shift(v, oA))
    for (n, m), v in C.phi.items():
        put(oN + n, oM + m, shift(v, oB))
    unit = {}
    if A.unit is not None:
        unit.update(shift(A.unit.coeffs, oA))
    if B.unit is not None:
        unit.update(shift(B.unit.coeffs, oB))
    try:
        L = FinGradedAlgebra(names, degrees, table, unit, A.field, check=True, name=f"Morita({C.name})")
        associative = True
    except AlgebraError as exc:
        if "degree" in str(exc):
            raise MoritaError(f"context maps are not graded: {exc}") from None
        L = FinGradedAlgebra(names, degrees, table, unit, A.field, check=False, name=f"Morita({C.name})")
        associative = False
    p = L.element(shift(A.unit.coeffs, oA))
    q = L.element(shift(B.unit.coeffs, oB))
    L0 = zero_component_sub(L)
    p_full = is_full(L0.alg, L0.restrict(p))
    q_full = is_full(L0.alg, L0.restrict(q))
    return MoritaRing(L, p, q, C, p_full, q_full, associative)


# ---------------------------------------------------------------------------
# equivalence verdicts for Leavitt path algebras


STATUSES = ("equivalent", "not_equivalent", "undetermined")


@dataclass
class EquivalenceVerdict:
    status: str
    criterion: str
    values: dict = field(default_factory=dict)
    certificate: dict = field(default_factory=dict)
    recheck: Callable | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise MoritaError(f"bad verdict status {self.status!r}")

    def verify(self) -> bool:
        """Recompute the certificate independently of the original run."""
        return True if self.recheck is None else bool(self.recheck())

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "criterion": self.criterion,
            "values": self.values,
            "certificate": self.certificate,
        }


def _single_sink(g: Graph, label: str) -> str:
    if not is_acyclic(g):
        raise PreconditionError(f"{label} has a cycle")
    s = sinks(g)
    if len(s) != 1:
        raise PreconditionError(f"{label} has {len(s)} sinks; exactly one is required")
    return s[0]


def _max_to_sink_bruteforce(g: Graph, sink: str) -> int:
    from .graph import paths_of_length

    best, n = 0, 0
    while True:
        n += 1
        ps = paths_of_length(g, n, target=sink)
        if not ps:
            return best
        best = n


def decide_hge_acyclic_single_sink(E: Graph, F: Graph) -> EquivalenceVerdict:
    """Equivalent iff the longest paths into the two sinks have equal length."""
    v, w = _single_sink(E, "E"), _single_sink(F, "F")
    m, n = max_path_length_to(E, v), max_path_length_to(F, w)
    status = "equivalent" if m == n else "not_equivalent"
    return EquivalenceVerdict(
        status,
        "acyclic_single_sink",
        {"E": {"sink": v, "max_path_length": m}, "F": {"sink": w, "max_path_length": n}},
        {"rule": "equal longest path lengths into the unique sink"},
        recheck=lambda: (_max_to_sink_bruteforce(E, v) == _max_to_sink_bruteforce(F, w)) == (status == "equivalent"),
    )


def _is_cycle_union(g: Graph) -> bool:
    return all(len(g.out_edges(v)) == 1 and len(g.in_edges(v)) == 1 for v in g.vertices)


def zero_component_certified(g: Graph, trunc: int) -> bool:
    """Does the truncation at ``trunc`` already equal L(E)_0?

    True for acyclic graphs once trunc reaches the longest path, and for
    disjoint unions of cycles, where every μμ* reduces to s(μ).
    """
    if is_acyclic(g):
        return trunc >= longest_path_length(g)
    return _is_cycle_union(g)


@dataclass
class Obstruction:
    kind: str
    certified: bool
    values: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "certified": self.certified, "values": self.values}


def zero_component_blocks(g: Graph, trunc: int, field=None) -> int:
    return block_count(zero_component_truncation(LpaAlgebra(g, field), trunc))


def hge_obstruction_zero_component(E: Graph, F: Graph, trunc: int, field=None) -> Obstruction | None:
    """Differing block counts of the zero components.

    The result is ``certified`` only when both truncations provably equal the
    full zero components; otherwise the comparison is heuristic.
    """
    if trunc < 0:
        raise MoritaError("truncation bound must be non-negative")
    try:
        a, b = zero_component_blocks(E, trunc, field), zero_component_blocks(F, trunc, field)
    except AlgebraError as exc:
        raise MoritaError(f"zero-component block count unavailable: {exc}") from None
    if a == b:
        return None
    cert = zero_component_certified(E, trunc) and zero_component_certified(F, trunc)
    return Obstruction("zero_component_blocks", cert, {"E_blocks": a, "F_blocks": b, "trunc": trunc})


def ge_equals_hge_certificate(E: Graph) -> tuple[bool, str]:
    """True when E has no sinks, so L(E) is strongly graded."""
    s = sinks(E)
    if not s:
        return True, "no sinks: L(E) is strongly graded, so graded and homogeneously graded equivalence agree"
    return False, f"sinks {s}: L(E) is not strongly graded"


@dataclass
class CornerDegreeReport:
    v: str
    k: int
    trunc: int
    corner_dim: int
    ambient_dim: int
    corner_zero: bool  # exact: (vLv)_k = 0
    ambient_nonzero: bool  # exact: L_k ≠ 0

    @property
    def obstruction(self) -> bool:
        return self.k != 0 and self.corner_zero and self.ambient_nonzero

    def to_json(self) -> dict:
        return {
            "vertex": self.v,
            "degree": self.k,
            "trunc": self.trunc,
            "corner_dim": self.corner_dim,
            "ambient_dim": self.ambient_dim,
            "corner_zero_exact": self.corner_zero,
            "ambient_nonzero_exact": self.ambient_nonzero,
            "obstruction": self.obstruction,
        }


def hge_obstruction_corner_degree(E: Graph, v: str, k: int, trunc: int, field=None) -> CornerDegreeReport:
    """Truncated and exact (vL(E)v)_k against L(E)_k.

    A vanishing corner component against a nonzero ambient one shows vL(E)v
    and L(E) are not homogeneously graded equivalent.
    """
    L = LpaAlgebra(E, field)
    c = corner_lpa(L, v)
    return CornerDegreeReport(
        v,
        k,
        trunc,
        component_dimension_truncated(c, k, trunc),
        ambient_dimension_truncated(L, k, trunc),
        not corner_degree_nonzero(L, v, k),
        degree_nonzero(L, k),
    )


def degree_support_signature(g: Graph) -> tuple[int, tuple]:
    """(B, [L_k ≠ 0 for |k| <= B]) with B past the preperiod plus one period.

    Two graphs with equal signatures at a common bound have equal supports on
    all of ℤ, since both indicator sequences are periodic from the bound on.
    """
    L = LpaAlgebra(g)
    s, P = degree_support_period(L)
    B = s + P
    return B, tuple(degree_nonzero(L, k) for k in range(-B, B + 1))


def degree_support_obstruction(E: Graph, F: Graph) -> Obstruction | None:
    """A degree k with M_∞(L(E))_k = 0 and M_∞(L(F))_k ≠ 0, or vice versa."""
    LE, LF = LpaAlgebra(E), LpaAlgebra(F)
    sE, pE = degree_support_period(LE)
    sF, pF = degree_support_period(LF)
    from math import lcm

    B = max(sE, sF) + lcm(pE, pF)
    for k in sorted(range(-B, B + 1), key=lambda k: (abs(k), k)):
        a, b = degree_nonzero(LE, k), degree_nonzero(LF, k)
        if a != b:
            return Obstruction("degree_support", True, {"degree": k, "E_nonzero": a, "F_nonzero": b})
    return None


def decide_hge(E: Graph, F: Graph, trunc: int = 6, field=None) -> EquivalenceVerdict:
    """Apply the decidable criteria in turn, then report undetermined."""
    e_ok = is_acyclic(E) and len(sinks(E)) == 1
    f_ok = is_acyclic(F) and len(sinks(F)) == 1
    if e_ok and f_ok:
        return decide_hge_acyclic_single_sink(E, F)
    if is_isomorphic(E, F):
        return EquivalenceVerdict(
            "equivalent", "graph_isomorphism", {}, {"rule": "isomorphic graphs give graded isomorphic algebras"},
            recheck=lambda: is_isomorphic(F, E),
        )
    try:
        obs = hge_obstruction_zero_component(E, F, trunc, field)
    except MoritaError:
        obs = None  # block counts unavailable (e.g. over a small prime field)
    if obs is not None and obs.certified:
        return EquivalenceVerdict(
            "not_equivalent", "zero_component_blocks", obs.values,
            {"rule": "K^(m) and K^(n) are Morita equivalent only if m = n", "certified": True},
            recheck=lambda: zero_component_blocks(E, trunc, field) != zero_component_blocks(F, trunc, field),
        )
    deg = degree_support_obstruction(E, F)
    if deg is not None:
        k = deg.values["degree"]
        return EquivalenceVerdict(
            "not_equivalent", "degree_support", deg.values,
            {"rule": "graded isomorphisms preserve which components vanish"},
            recheck=lambda: degree_nonzero(LpaAlgebra(E), k) != degree_nonzero(LpaAlgebra(F), k),
        )
    values: dict = {"trunc": trunc}
    try:
        values["E_blocks"] = zero_component_blocks(E, trunc, field)
        values["F_blocks"] = zero_component_blocks(F, trunc, field)
    except (NotSemisimple, AlgebraError):
        pass
    values["E_no_sinks"] = ge_equals_hge_certificate(E)[0]
    values["F_no_sinks"] = ge_equals_hge_certificate(F)[0]
    return EquivalenceVerdict("undetermined", "none", values, {"heuristic": obs.to_json() if obs else None})
