"""Finite-dimensional Γ-graded algebras given by structure constants.

Γ is ℤ^d; degrees are int tuples of a fixed length per algebra.  Basis
elements are homogeneous.  Elements are sparse coordinate dicts over the basis.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg
from .field import default_field, get_field


class AlgebraError(ValueError):
    pass


def as_degree(d, dim: int | None = None) -> tuple:
    if isinstance(d, int):
        d = (d,)
    d = tuple(int(x) for x in d)
    if dim is not None and len(d) != dim:
        raise AlgebraError(f"degree {d} does not have rank {dim}")
    return d


def deg_add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def deg_sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def deg_neg(a: tuple) -> tuple:
    return tuple(-x for x in a)


class AlgElement:
    """Sparse coordinate vector over the basis of a FinGradedAlgebra."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: "FinGradedAlgebra", coeffs: dict | None = None):
        self.alg = alg
        self.coeffs = {k: c for k, c in (coeffs or {}).items() if c}

    def _check(self, other):
        if not isinstance(other, AlgElement):
            return False
        if other.alg is not self.alg:
            raise AlgebraError("elements belong to different algebras")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        acc = dict(self.coeffs)
        linalg.axpy(acc, 1, other.coeffs)
        return AlgElement(self.alg, acc)

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        acc = dict(self.coeffs)
        linalg.axpy(acc, -1, other.coeffs)
        return AlgElement(self.alg, acc)

    def __neg__(self):
        return AlgElement(self.alg, {k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            self._check(other)
            return self.alg.mul(self, other)
        return AlgElement(self.alg, linalg.scale(self.alg.field(other), self.coeffs))

    def __rmul__(self, other):
        if isinstance(other, AlgElement):
            return NotImplemented
        return AlgElement(self.alg, linalg.scale(self.alg.field(other), self.coeffs))

    def __eq__(self, other):
        if isinstance(other, AlgElement):
            return other.alg is self.alg and other.coeffs == self.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0])))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"AlgElement({self.alg.format(self)})"

    def __str__(self):
        return self.alg.format(self)

    def homogeneous_parts(self) -> dict:
        out: dict = {}
        for k, c in self.coeffs.items():
            out.setdefault(self.alg.degrees[k], {})[k] = c
        return {d: AlgElement(self.alg, v) for d, v in out.items()}

    def grade(self) -> tuple | None:
        degs = {self.alg.degrees[k] for k in self.coeffs}
        return degs.pop() if len(degs) == 1 else None


class FinGradedAlgebra:
    """A graded algebra with homogeneous basis and sparse structure constants.

    ``table[(i, j)]`` is the coordinate dict of ``b_i * b_j``; missing pairs
    multiply to zero.  Construction checks graded multiplicativity and, when
    ``check`` is set, associativity on all basis triples and the unit laws.
    """

    def __init__(
        self,
        names: Sequence[str],
        degrees: Sequence,
        table: dict,
        unit: dict | None = None,
        field=None,
        check: bool = True,
        name: str = "A",
    ):
        self.field = field or default_field()
        self.names = tuple(names)
        if len(degrees) != len(self.names):
            raise AlgebraError("one degree per basis element required")
        rank = len(as_degree(degrees[0])) if degrees else 1
        self.rank = rank
        self.degrees = tuple(as_degree(d, rank) for d in degrees)
        self.name = name
        f = self.field
        self.table = {}
        n = len(self.names)
        for (i, j), prod in table.items():
            if not (0 <= i < n and 0 <= j < n):
                raise AlgebraError(f"structure constant index out of range: {(i, j)}")
            prod = {k: f(c) for k, c in prod.items() if c}
            want = deg_add(self.degrees[i], self.degrees[j])
            for k in prod:
                if self.degrees[k] != want:
                    raise AlgebraError(
                        f"b{i}*b{j} has a term of degree {self.degrees[k]}, expected {want}"
                    )
            if prod:
                self.table[(i, j)] = prod
        self._right = {}
        for (i, j), prod in self.table.items():
            self._right.setdefault(i, []).append((j, prod))
        self.unit = None if unit is None else AlgElement(self, {k: f(c) for k, c in unit.items()})
        if check:
            self.validate()

    # -- basic structure

    @property
    def dim(self) -> int:
        return len(self.names)

    def __repr__(self):
        return f"FinGradedAlgebra({self.name}, dim={self.dim})"

    def basis(self, i: int) -> AlgElement:
        return AlgElement(self, {i: self.field.one})

    def element(self, coeffs: dict) -> AlgElement:
        return AlgElement(self, {k: self.field(c) for k, c in coeffs.items()})

    def zero(self) -> AlgElement:
        return AlgElement(self, {})

    def one(self) -> AlgElement:
        if self.unit is None:
            raise AlgebraError(f"{self.name} has no declared unit")
        return self.unit

    def mul(self, x: AlgElement, y: AlgElement) -> AlgElement:
        acc: dict = {}
        for i, a in x.coeffs.items():
            for j, prod in self._right.get(i, ()):
                b = y.coeffs.get(j)
                if b:
                    linalg.axpy(acc, a * b, prod)
        return AlgElement(self, acc)

    def degree_set(self) -> list[tuple]:
        return sorted(set(self.degrees))

    def graded_dims(self) -> dict:
        out: dict = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def indices_of_degree(self, d) -> list[int]:
        d = as_degree(d, self.rank)
        return [i for i, e in enumerate(self.degrees) if e == d]

    def format(self, x: AlgElement) -> str:
        if not x.coeffs:
            return "0"
        return " + ".join(f"{self.field.fmt(c)}*{self.names[k]}" for k, c in sorted(x.coeffs.items()))

    def validate(self) -> None:
        n = self.dim
        basis = [self.basis(i) for i in range(n)]
        for i in range(n):
            for j in range(n):
                bij = self.mul(basis[i], basis[j])
                if not bij:
                    # (b_i b_j) b_k = 0, so b_i (b_j b_k) must vanish too
                    for k in range(n):
                        if self.mul(basis[i], self.mul(basis[j], basis[k])):
                            raise AlgebraError(f"associativity fails on basis triple {(i, j, k)}")
                    continue
                for k in range(n):
                    if self.mul(bij, basis[k]) != self.mul(basis[i], self.mul(basis[j], basis[k])):
                        raise AlgebraError(f"associativity fails on basis triple {(i, j, k)}")
        if self.unit is not None:
            if self.unit.grade() not in (None, self.zero_degree()) and self.unit:
                raise AlgebraError("unit is not of degree 0")
            for b in basis:
                if self.unit * b != b or b * self.unit != b:
                    raise AlgebraError("declared unit is not a two-sided identity")

    def zero_degree(self) -> tuple:
        return (0,) * self.rank

    # -- serialization

    def to_json(self) -> dict:
        entries = []
        for (i, j), prod in sorted(self.table.items()):
            for k, c in sorted(prod.items()):
                num, den = self.field.to_pair(c)
                entries.append([i, j, k, num, den])
        doc = {
            "name": self.name,
            "field": self.field.name,
            "basis": list(self.names),
            "degrees": [list(d) for d in self.degrees],
            "structure": entries,
        }
        if self.unit is not None:
            doc["unit"] = [[k, *self.field.to_pair(c)] for k, c in sorted(self.unit.coeffs.items())]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc, check: bool = True) -> "FinGradedAlgebra":
        if isinstance(doc, str):
            doc = json.loads(doc)
        f = get_field(doc.get("field"))
        table: dict = {}
        for i, j, k, num, den in doc["structure"]:
            table.setdefault((i, j), {})[k] = f(num) / f(den)
        unit = None
        if "unit" in doc:
            unit = {k: f(num) / f(den) for k, num, den in doc["unit"]}
        return cls(doc["basis"], doc["degrees"], table, unit, field=f, check=check, name=doc.get("name", "A"))


@dataclass
class SubAlgebra:
    """A subalgebra B of A together with its basis embedding into A."""

    alg: FinGradedAlgebra
    ambient: FinGradedAlgebra
    embedding: list  # basis vector i of B as an ambient coordinate dict
    pivots: list = field(default_factory=list)

    def lift(self, x: AlgElement) -> AlgElement:
        acc: dict = {}
        for k, c in x.coeffs.items():
            linalg.axpy(acc, c, self.embedding[k])
        return AlgElement(self.ambient, acc)

    def restrict(self, y: AlgElement) -> AlgElement:
        """Coordinates of an ambient element lying in the subalgebra."""
        coords = {k: y.coeffs.get(p) for k, p in enumerate(self.pivots)}
        x = AlgElement(self.alg, {k: c for k, c in coords.items() if c})
        if self.lift(x) != y:
            raise AlgebraError("element is not in the subalgebra")
        return x


def _subalgebra(
    A: FinGradedAlgebra,
    vectors_by_degree: dict,
    unit: AlgElement | None,
    name: str,
    check: bool,
) -> SubAlgebra:
    """Build a subalgebra from homogeneous spanning vectors (closure assumed)."""
    embedding, degrees, pivots = [], [], []
    for d in sorted(vectors_by_degree):
        for p, row in linalg.rref(vectors_by_degree[d]):
            embedding.append(row)
            degrees.append(d)
            pivots.append(p)
    names = [f"{name}[{k}]" for k in range(len(embedding))]
    table = {}
    elems = [AlgElement(A, v) for v in embedding]
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            prod = A.mul(x, y)
            if not prod:
                continue
            coords = {k: prod.coeffs.get(p) for k, p in enumerate(pivots)}
            coords = {k: c for k, c in coords.items() if c}
            back: dict = {}
            for k, c in coords.items():
                linalg.axpy(back, c, embedding[k])
            if back != prod.coeffs:
                raise AlgebraError(f"{name}: span is not closed under multiplication")
            table[(i, j)] = coords
    if not embedding:
        return SubAlgebra(FinGradedAlgebra([], [], {}, None, A.field, False, name), A, [], [])
    sub_unit = None
    if unit is not None:
        sub_unit = {k: unit.coeffs.get(p) for k, p in enumerate(pivots)}
        sub_unit = {k: c for k, c in sub_unit.items() if c}
    B = FinGradedAlgebra(names, degrees, table, sub_unit, A.field, check=check, name=name)
    return SubAlgebra(B, A, embedding, pivots)


# ---------------------------------------------------------------------------
# operations


def multiply(A: FinGradedAlgebra, x: AlgElement, y: AlgElement) -> AlgElement:
    if x.alg is not A or y.alg is not A:
        raise AlgebraError("elements are not over this algebra")
    return A.mul(x, y)


def add(A: FinGradedAlgebra, x: AlgElement, y: AlgElement) -> AlgElement:
    if x.alg is not A or y.alg is not A:
        raise AlgebraError("elements are not over this algebra")
    return x + y


def scalar_mul(A: FinGradedAlgebra, c, x: AlgElement) -> AlgElement:
    return A.field(c) * x


def homogeneous_component(A: FinGradedAlgebra, x: AlgElement, gamma) -> AlgElement:
    g = as_degree(gamma, A.rank)
    return AlgElement(A, {k: c for k, c in x.coeffs.items() if A.degrees[k] == g})


def is_homogeneous(A: FinGradedAlgebra, x: AlgElement) -> tuple | None:
    return x.grade()


def is_idempotent(A: FinGradedAlgebra, e: AlgElement) -> bool:
    return A.mul(e, e) == e


def _check_degree0_idempotent(A: FinGradedAlgebra, e: AlgElement) -> None:
    if not is_idempotent(A, e):
        raise AlgebraError("element is not idempotent")
    if e and e.grade() != A.zero_degree():
        raise AlgebraError("idempotent is not homogeneous of degree 0")


def corner_sub(A: FinGradedAlgebra, e: AlgElement, check: bool = True) -> SubAlgebra:
    _check_degree0_idempotent(A, e)
    by_degree: dict = {}
    for i in range(A.dim):
        v = A.mul(A.mul(e, A.basis(i)), e)
        if v:
            by_degree.setdefault(A.degrees[i], []).append(v.coeffs)
    return _subalgebra(A, by_degree, e if e else None, f"e{A.name}e", check)


def corner(A: FinGradedAlgebra, e: AlgElement, check: bool = True) -> FinGradedAlgebra:
    """The corner eAe with its inherited grading and unit e."""
    return corner_sub(A, e, check).alg


def zero_component_sub(A: FinGradedAlgebra) -> SubAlgebra:
    idx = A.indices_of_degree(A.zero_degree())
    vectors = {A.zero_degree(): [{i: A.field.one} for i in idx]} if idx else {}
    return _subalgebra(A, vectors, A.unit, f"{A.name}_0", check=False)


def zero_component(A: FinGradedAlgebra) -> FinGradedAlgebra:
    return zero_component_sub(A).alg


def two_sided_ideal(A: FinGradedAlgebra, e: AlgElement) -> list[dict]:
    """Reduced echelon basis of AeA (the span of all b_i e b_j)."""
    vecs = []
    for i in range(A.dim):
        be = A.mul(A.basis(i), e)
        if not be:
            continue
        for j in range(A.dim):
            v = A.mul(be, A.basis(j))
            if v:
                vecs.append(v.coeffs)
    return [row for _, row in linalg.rref(vecs)]


def is_full(A: FinGradedAlgebra, e: AlgElement) -> bool:
    return len(two_sided_ideal(A, e)) == A.dim


@dataclass
class FullnessWitness:
    """Pairs (x_i, y_i) with sum x_i e y_i = 1."""

    alg: FinGradedAlgebra
    e: AlgElement
    pairs: list

    @property
    def m(self) -> int:
        return len(self.pairs)

    def total(self) -> AlgElement:
        acc = self.alg.zero()
        for x, y in self.pairs:
            acc = acc + x * self.e * y
        return acc

    def verify(self) -> bool:
        return self.total() == self.alg.one()


def fullness_witness(A: FinGradedAlgebra, e: AlgElement) -> FullnessWitness:
    """Solve 1 = sum c_ij b_i e b_j greedily and group the terms by b_i."""
    one = A.one()
    if e == one:
        return FullnessWitness(A, e, [(one, one)])
    ech = linalg.Echelon(track=True)
    for i in range(A.dim):
        be = A.mul(A.basis(i), e)
        if not be:
            continue
        for j in range(A.dim):
            v = A.mul(be, A.basis(j))
            if v:
                ech.add(v.coeffs, (i, j))
    combo = ech.express(one.coeffs)
    if combo is None:
        raise AlgebraError("idempotent is not full")
    grouped: dict = {}
    for (i, j), c in sorted(combo.items()):
        grouped.setdefault(i, {})[j] = c
    pairs = [(A.basis(i), A.element(ys)) for i, ys in sorted(grouped.items())]
    w = FullnessWitness(A, e, pairs)
    if not w.verify():
        raise AlgebraError("fullness witness failed verification")
    return w


def matrix_algebra(A: FinGradedAlgebra, n: int, delta: Sequence | None = None, check: bool = False) -> FinGradedAlgebra:
    """M_n(A) with the suspension grading: deg(b ⊗ e_ij) = deg b + δ_i − δ_j."""
    if n < 1:
        raise AlgebraError("matrix size must be positive")
    if delta is None:
        delta = [A.zero_degree()] * n
    if len(delta) != n:
        raise AlgebraError(f"need {n} shift degrees, got {len(delta)}")
    delta = [as_degree(d, A.rank) for d in delta]
    d = A.dim

    def idx(b, i, j):
        return (i * n + j) * d + b

    names, degrees = [], []
    for i in range(n):
        for j in range(n):
            for b in range(d):
                names.append(f"{A.names[b]}@e{i + 1},{j + 1}")
                degrees.append(deg_sub(deg_add(A.degrees[b], delta[i]), delta[j]))
    table = {}
    for (b1, b2), prod in A.table.items():
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    table[(idx(b1, i, j), idx(b2, j, l))] = {idx(k, i, l): c for k, c in prod.items()}
    unit = None
    if A.unit is not None:
        unit = {idx(k, i, i): c for i in range(n) for k, c in A.unit.coeffs.items()}
    return FinGradedAlgebra(names, degrees, table, unit, A.field, check=check, name=f"M{n}({A.name})")


def field_algebra(field=None, rank: int = 1, name: str = "K") -> FinGradedAlgebra:
    f = field or default_field()
    return FinGradedAlgebra(["1"], [(0,) * rank], {(0, 0): {0: f.one}}, {0: f.one}, f, name=name)


def matrix_unit(M: FinGradedAlgebra, n: int, i: int, j: int, base_index: int = 0) -> AlgElement:
    """The basis element b ⊗ e_ij of a matrix_algebra (1-based i, j)."""
    d = M.dim // (n * n)
    return M.basis(((i - 1) * n + (j - 1)) * d + base_index)


def direct_sum(algebras: Sequence[FinGradedAlgebra], name: str = "sum") -> FinGradedAlgebra:
    names, degrees, table, unit = [], [], {}, {}
    off = 0
    f = algebras[0].field
    for A in algebras:
        names += [f"{A.name}.{x}" for x in A.names]
        degrees += list(A.degrees)
        for (i, j), prod in A.table.items():
            table[(i + off, j + off)] = {k + off: c for k, c in prod.items()}
        if A.unit is not None:
            unit.update({k + off: c for k, c in A.unit.coeffs.items()})
        off += A.dim
    return FinGradedAlgebra(names, degrees, table, unit or None, f, check=False, name=name)


# ---------------------------------------------------------------------------
# semisimplicity and block counting


class NotSemisimple(AlgebraError):
    pass


def _basis_traces(A: FinGradedAlgebra) -> dict:
    """tr(L_{b_m}) for every basis element, read off the structure constants."""
    out: dict = {}
    for (m, j), prod in A.table.items():
        c = prod.get(j)
        if c:
            out[m] = out.get(m, A.field.zero) + c
    return {m: t for m, t in out.items() if t}


def trace_radical(A: FinGradedAlgebra) -> list[dict]:
    """Kernel of the trace form (x, y) ↦ tr(L_{xy}).

    tr(L_x) is linear in x, so tr(L_{b_i b_j}) = Σ_m (b_i b_j)_m tr(L_{b_m}).
    """
    n = A.dim
    traces = _basis_traces(A)
    rows = [dict() for _ in range(n)]
    for (i, j), prod in A.table.items():
        t = A.field.zero
        for m, c in prod.items():
            tm = traces.get(m)
            if tm:
                t = t + c * tm
        if t:
            rows[i][j] = t
    return linalg.nullspace(rows, n)


def _is_nilpotent_ideal(A: FinGradedAlgebra, span: list[dict]) -> bool:
    basis = [row for _, row in linalg.rref(span)]
    ech = linalg.Echelon()
    for v in basis:
        ech.add(v)
    elems = [AlgElement(A, v) for v in basis]
    for x in elems:
        for i in range(A.dim):
            for y in (A.mul(x, A.basis(i)), A.mul(A.basis(i), x)):
                if not ech.contains(y.coeffs):
                    return False
    power = elems
    for _ in range(A.dim + 1):
        if not power:
            return True
        nxt = [row for _, row in linalg.rref(A.mul(a, b).coeffs for a in power for b in elems)]
        power = [AlgElement(A, v) for v in nxt]
    return not power


def is_semisimple(A: FinGradedAlgebra) -> bool:
    """Exact semisimplicity test.

    In characteristic 0 the trace-form radical is the Jacobson radical.  Over
    F_p a zero trace radical still proves semisimplicity and a nonzero
    nilpotent one proves the opposite; other cases are reported as errors.
    """
    rad = trace_radical(A)
    if not rad:
        return True
    if A.field.characteristic == 0:
        return False
    if _is_nilpotent_ideal(A, rad):
        return False
    raise AlgebraError("semisimplicity is undecided by the trace form over this prime field")


def center(A: FinGradedAlgebra) -> list[dict]:
    """Basis of the center {x : x b = b x for all basis b}.

    Coordinate k of x b_b − b_b x is a linear form in x; the forms are read
    straight off the structure constants.
    """
    eqs: dict = {}
    for (i, b), prod in A.table.items():
        for k, c in prod.items():
            row = eqs.setdefault((b, k), {})
            row[i] = row.get(i, 0) + c
    for (b, i), prod in A.table.items():
        for k, c in prod.items():
            row = eqs.setdefault((b, k), {})
            row[i] = row.get(i, 0) - c
    return linalg.nullspace([linalg.clean(r) for r in eqs.values()], A.dim)


def block_count(A: FinGradedAlgebra) -> int:
    """Number of simple summands of a split semisimple algebra (dim of center)."""
    if A.dim == 0:
        raise AlgebraError("zero algebra has no blocks")
    if not is_semisimple(A):
        raise NotSemisimple(f"{A.name} has a nonzero radical")
    return len(center(A))


# ---------------------------------------------------------------------------
# strongly graded test


def is_strongly_graded(A: FinGradedAlgebra) -> bool:
    """A_γ A_δ = A_{γ+δ} for all γ, δ, γ+δ in the box hull of occupied degrees.

    The hull [-M, M]^d (M the largest absolute coordinate of an occupied
    degree) includes empty components, so a vanishing A_γ with nonzero A_{-γ}
    is detected.
    """
    occupied = set(A.degrees)
    if not occupied:
        return True
    M = max((abs(c) for d in occupied for c in d), default=0)
    box = list(itertools.product(range(-M, M + 1), repeat=A.rank))
    box_set = set(box)
    by_deg = {d: [A.basis(i) for i in A.indices_of_degree(d)] for d in box}
    for g in box:
        for h in box:
            s = deg_add(g, h)
            if s not in box_set:
                continue
            target = len(by_deg[s])
            prods = [A.mul(x, y).coeffs for x in by_deg[g] for y in by_deg[h]]
            if linalg.rank(prods) != target:
                return False
    return True


# ---------------------------------------------------------------------------
# bounded graded isomorphism search


@dataclass
class IsoSearchResult:
    status: str  # "found" | "not_found" | "certified_negative"
    images: list | None = None  # images[i] = coordinate dict in B of phi(a_i)
    reason: str = ""
    nodes: int = 0

    def __bool__(self):
        return self.status == "found"

    def apply(self, A: FinGradedAlgebra, B: FinGradedAlgebra, x: AlgElement) -> AlgElement:
        acc: dict = {}
        for k, c in x.coeffs.items():
            linalg.axpy(acc, c, self.images[k])
        return AlgElement(B, acc)


def graded_iso_search(
    A: FinGradedAlgebra,
    B: FinGradedAlgebra,
    max_dim: int = 16,
    coeffs: Iterable = (1, -1),
    node_budget: int = 200_000,
) -> IsoSearchResult:
    """Bounded backtracking search for a degree-preserving unital isomorphism.

    Images of basis elements range over combinations of same-degree B basis
    elements with coefficients in {0} ∪ coeffs.  Only a per-degree dimension
    mismatch is a certified negative; an exhausted search is "not_found".
    """
    if A.rank != B.rank or A.graded_dims() != B.graded_dims():
        return IsoSearchResult("certified_negative", reason="per-degree dimensions differ")
    if A.dim > max_dim:
        raise AlgebraError(f"dimension {A.dim} exceeds the search budget {max_dim}")
    f = B.field
    cset = [f(c) for c in coeffs]
    cand: dict = {}
    for d in A.degree_set():
        idx = B.indices_of_degree(d)
        opts = []
        for support_size in range(1, len(idx) + 1):
            for support in itertools.combinations(idx, support_size):
                for cs in itertools.product(cset, repeat=support_size):
                    opts.append(dict(zip(support, cs)))
        cand[d] = opts
    zero = A.zero_degree()
    order = sorted(range(A.dim), key=lambda i: (A.degrees[i] != zero, A.degrees[i], i))
    images: dict = {}
    nodes = 0

    def img(x: AlgElement) -> dict | None:
        acc: dict = {}
        for k, c in x.coeffs.items():
            if k not in images:
                return None
            linalg.axpy(acc, c, images[k])
        return acc

    def consistent(a: int) -> bool:
        for b in images:
            for (s, t) in ((a, b), (b, a)):
                prod = A.mul(A.basis(s), A.basis(t))
                want = img(prod)
                if want is None:
                    continue
                got = B.mul(AlgElement(B, images[s]), AlgElement(B, images[t])).coeffs
                if got != want:
                    return False
        # products whose support has just become fully assigned
        for s in images:
            for t in images:
                if a in (s, t):
                    continue
                prod = A.mul(A.basis(s), A.basis(t))
                if a in prod.coeffs:
                    want = img(prod)
                    if want is not None:
                        got = B.mul(AlgElement(B, images[s]), AlgElement(B, images[t])).coeffs
                        if got != want:
                            return False
        return True

    def rec(k: int, ech: linalg.Echelon) -> bool:
        nonlocal nodes
        if k == len(order):
            if A.unit is not None and B.unit is not None:
                return img(A.unit) == B.unit.coeffs
            return True
        a = order[k]
        for opt in cand[A.degrees[a]]:
            nodes += 1
            if nodes > node_budget:
                raise _Budget()
            if ech.contains(opt):
                continue
            images[a] = opt
            if consistent(a):
                e2 = linalg.Echelon()
                e2.rows = dict(ech.rows)
                e2.add(opt)
                if rec(k + 1, e2):
                    return True
            del images[a]
        return False

    try:
        ok = rec(0, linalg.Echelon())
    except _Budget:
        return IsoSearchResult("not_found", reason="node budget exhausted", nodes=nodes)
    if ok:
        return IsoSearchResult("found", [images[i] for i in range(A.dim)], nodes=nodes)
    return IsoSearchResult("not_found", reason="bounded search exhausted", nodes=nodes)


class _Budget(Exception):
    pass


def check_iso(A: FinGradedAlgebra, B: FinGradedAlgebra, images: list) -> bool:
    """Independent verification that basis images define a graded iso."""
    if len(images) != A.dim or linalg.rank(images) != B.dim:
        return False
    for i in range(A.dim):
        for k in images[i]:
            if B.degrees[k] != A.degrees[i]:
                return False
    res = IsoSearchResult("found", images)
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = res.apply(A, B, A.mul(A.basis(i), A.basis(j)))
            rhs = B.mul(AlgElement(B, images[i]), AlgElement(B, images[j]))
            if lhs != rhs:
                return False
    if A.unit is not None and B.unit is not None:
        return res.apply(A, B, A.unit) == B.unit
    return True
