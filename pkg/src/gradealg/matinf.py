"""Countably indexed matrices over a graded ring.

``GradedMatrix`` is a finite-support element of M_∞(R) carrying a suspension
grading spec (δ_n): an entry b at (i, j) of base degree d has grade
d + δ_i − δ_j.  ``LazyMatrix`` is a row- and column-finite matrix given by
memoized row/column oracles.  Indices are 1-based positive integers.

Base rings are duck-typed: elements support + - * == bool, ``grade()`` and
``homogeneous_parts()``; the ring object provides ``zero()``.
"""

from __future__ import annotations

import random
from math import lcm
from typing import Callable, Iterable, Sequence

from .finalg import as_degree, deg_add, deg_sub


class MatrixError(ValueError):
    pass


# ---------------------------------------------------------------------------
# grading specs


class GradingSpec:
    """δ: ℕ → ℤ^d given as a constant, an eventually constant list, or a period.

    Internally every spec is a finite prefix followed by a repeating cycle;
    a "list" spec may carry a cycle instead of a constant tail, which is what
    composing a periodic spec with a finite permutation produces.
    """

    def __init__(self, kind: str, values: Sequence = (), tail=None, rank: int = 1, cycle: Sequence | None = None):
        if kind not in ("constant", "list", "periodic"):
            raise MatrixError(f"unknown spec kind {kind!r}")
        values = tuple(as_degree(v) for v in values)
        ranks = {len(v) for v in values}
        if tail is not None:
            ranks.add(len(as_degree(tail)))
        if cycle:
            ranks |= {len(as_degree(c)) for c in cycle}
        if len(ranks) > 1:
            raise MatrixError("mixed degree ranks in spec")
        self.rank = ranks.pop() if ranks else rank
        zero = (0,) * self.rank
        self.kind = kind
        if kind == "constant":
            self.prefix, self.cycle = (), (as_degree(tail) if tail is not None else zero,)
        elif kind == "periodic":
            if not values:
                raise MatrixError("periodic spec needs at least one value")
            self.prefix, self.cycle = (), values
        else:
            self.prefix = values
            if cycle:
                self.cycle = tuple(as_degree(c) for c in cycle)
            else:
                self.cycle = (as_degree(tail) if tail is not None else zero,)

    @classmethod
    def zero(cls, rank: int = 1) -> "GradingSpec":
        return cls("constant", tail=(0,) * rank, rank=rank)

    @classmethod
    def constant(cls, d) -> "GradingSpec":
        return cls("constant", tail=d)

    @classmethod
    def from_list(cls, values: Sequence, tail=None) -> "GradingSpec":
        return cls("list", values, tail)

    @classmethod
    def periodic(cls, values: Sequence) -> "GradingSpec":
        return cls("periodic", values)

    def __call__(self, n: int) -> tuple:
        if n < 1:
            raise MatrixError(f"indices are positive integers, got {n}")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.cycle[(n - len(self.prefix) - 1) % len(self.cycle)]

    def horizon(self) -> int:
        """Number of leading values that determine the whole sequence."""
        return len(self.prefix) + len(self.cycle)

    def period(self) -> int | None:
        """Period of a purely periodic spec (constant counts as period 1)."""
        if self.kind == "constant":
            return 1
        if self.kind == "periodic":
            return len(self.cycle)
        return None

    def is_zero(self) -> bool:
        zero = (0,) * self.rank
        return all(v == zero for v in self.prefix + self.cycle)

    def recurs(self) -> bool:
        """Does every value occur infinitely often?"""
        return set(self.prefix) <= set(self.cycle)

    def __eq__(self, other):
        if not isinstance(other, GradingSpec):
            return NotImplemented
        h = max(len(self.prefix), len(other.prefix)) + lcm(len(self.cycle), len(other.cycle))
        return all(self(n) == other(n) for n in range(1, h + 1))

    def __hash__(self):
        return hash(self.rank)

    def __repr__(self):
        return f"GradingSpec({self.to_json()})"

    def to_json(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "value": list(self.cycle[0])}
        if self.kind == "periodic":
            return {"kind": "periodic", "values": [list(v) for v in self.cycle]}
        doc = {"kind": "list", "values": [list(v) for v in self.prefix]}
        if len(self.cycle) == 1:
            doc["tail"] = list(self.cycle[0])
        else:
            doc["cycle"] = [list(v) for v in self.cycle]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "GradingSpec":
        kind = doc.get("kind")
        try:
            if kind == "constant":
                return cls("constant", tail=doc["value"])
            if kind == "list":
                return cls("list", doc["values"], doc.get("tail"), cycle=doc.get("cycle"))
            if kind == "periodic":
                return cls("periodic", doc["values"])
        except (KeyError, TypeError) as exc:
            raise MatrixError(f"malformed spec: {exc}") from None
        raise MatrixError(f"unknown spec kind {kind!r}")

    def compose(self, pi: "IndexPermutation") -> "GradingSpec":
        """The grading n ↦ δ(π(n))."""
        if self.kind == "constant":
            return self
        Q = len(self.cycle)
        if pi.kind == "finite":
            start = max(max(pi.mapping, default=0), len(self.prefix))
            prefix = [self(pi(n)) for n in range(1, start + 1)]
            cycle = [self(n) for n in range(start + 1, start + Q + 1)]
        else:
            P = pi.period
            start = -(-len(self.prefix) // P) * P + (P if self.prefix else 0)
            prefix = [self(pi(n)) for n in range(1, start + 1)]
            cycle = [self(pi(n)) for n in range(start + 1, start + lcm(P, Q) + 1)]
        if not prefix and self.kind == "periodic":
            return GradingSpec.periodic(cycle)
        return GradingSpec("list", prefix, cycle=cycle, rank=self.rank)


# ---------------------------------------------------------------------------
# index sets and permutations


class FiniteIndexSet:
    def __init__(self, elements: Iterable[int]):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise MatrixError("repeated index")
        if any(n < 1 for n in self.elements):
            raise MatrixError("indices are positive integers")
        self._pos = {n: t + 1 for t, n in enumerate(self.elements)}

    size = property(lambda self: len(self.elements))
    infinite = False

    def element(self, t: int) -> int:
        return self.elements[t - 1]

    def position(self, n: int) -> int | None:
        return self._pos.get(n)

    def __contains__(self, n) -> bool:
        return n in self._pos

    def upto(self, N: int) -> list[int]:
        return [n for n in self.elements if n <= N]

    def __repr__(self):
        return f"FiniteIndexSet({list(self.elements)})"


class ModularIndexSet:
    """{n >= 1 : n ≡ r (mod K)} enumerated increasingly, with 1 <= r <= K."""

    infinite = True
    size = None

    def __init__(self, K: int, r: int):
        if K < 1 or not 1 <= r <= K:
            raise MatrixError(f"bad modular index set ({K}, {r})")
        self.K, self.r = K, r

    def element(self, t: int) -> int:
        return self.r + (t - 1) * self.K

    def position(self, n: int) -> int | None:
        if n >= 1 and (n - self.r) % self.K == 0:
            return (n - self.r) // self.K + 1
        return None

    def __contains__(self, n) -> bool:
        return self.position(n) is not None

    def upto(self, N: int) -> list[int]:
        return list(range(self.r, N + 1, self.K))

    def __repr__(self):
        return f"ModularIndexSet({self.K}, {self.r})"

    def __eq__(self, other):
        return isinstance(other, ModularIndexSet) and (self.K, self.r) == (other.K, other.r)

    def __hash__(self):
        return hash((self.K, self.r))


ALL_INDICES = ModularIndexSet(1, 1)


class IndexPermutation:
    """A bijection of ℕ: finite support, or a block rule π(qP+r) = qP+σ(r)."""

    def __init__(self, mapping: dict | None = None, sigma: Sequence[int] | None = None):
        if (mapping is None) == (sigma is None):
            raise MatrixError("give exactly one of mapping or sigma")
        if mapping is not None:
            mapping = {int(k): int(v) for k, v in mapping.items() if k != v}
            if set(mapping) != set(mapping.values()):
                raise MatrixError("finite permutation must map its support onto itself")
            self.kind, self.mapping, self.period = "finite", mapping, None
            self._inv = {v: k for k, v in mapping.items()}
        else:
            sigma = [int(s) for s in sigma]
            P = len(sigma)
            if sorted(sigma) != list(range(1, P + 1)):
                raise MatrixError("sigma must be a permutation of 1..P")
            self.kind, self.sigma, self.period = "periodic", sigma, P
            inv = [0] * P
            for r, s in enumerate(sigma, 1):
                inv[s - 1] = r
            self._inv_sigma = inv

    @classmethod
    def identity(cls) -> "IndexPermutation":
        return cls(mapping={})

    def __call__(self, n: int) -> int:
        if self.kind == "finite":
            return self.mapping.get(n, n)
        q, r = divmod(n - 1, self.period)
        return q * self.period + self.sigma[r]

    def inverse(self) -> "IndexPermutation":
        if self.kind == "finite":
            return IndexPermutation(mapping=self._inv)
        return IndexPermutation(sigma=self._inv_sigma)

    def __repr__(self):
        if self.kind == "finite":
            return f"IndexPermutation(mapping={self.mapping})"
        return f"IndexPermutation(sigma={self.sigma})"


# ---------------------------------------------------------------------------
# finite-support matrices


def _grade_of(x) -> tuple | None:
    return x.grade()


class GradedMatrix:
    """Finite-support element of M_∞(R)[(δ_n)]."""

    __slots__ = ("ring", "entries", "spec")

    def __init__(self, ring, entries: dict | None = None, spec: GradingSpec | None = None):
        self.ring = ring
        self.entries = {k: v for k, v in (entries or {}).items() if v}
        for i, j in self.entries:
            if i < 1 or j < 1:
                raise MatrixError("indices are positive integers")
        self.spec = spec if spec is not None else GradingSpec.zero(_ring_rank(ring))

    # ring element protocol
    def __add__(self, other):
        if isinstance(other, LazyMatrix):
            return NotImplemented
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        acc = dict(self.entries)
        for k, v in other.entries.items():
            s = acc.get(k)
            acc[k] = v if s is None else s + v
        return GradedMatrix(self.ring, acc, self.spec)

    def __neg__(self):
        return GradedMatrix(self.ring, {k: -v for k, v in self.entries.items()}, self.spec)

    def __sub__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GradedMatrix):
            return _mul_ff(self, other)
        if isinstance(other, LazyMatrix):
            return _mul_fl(self, other)
        return GradedMatrix(self.ring, {k: v * other for k, v in self.entries.items()}, self.spec)

    def __rmul__(self, other):
        return GradedMatrix(self.ring, {k: other * v for k, v in self.entries.items()}, self.spec)

    def __eq__(self, other):
        if isinstance(other, GradedMatrix):
            return self.entries == other.entries
        if other == 0:
            return not self.entries
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.entries))

    def __bool__(self):
        return bool(self.entries)

    def __repr__(self):
        body = ", ".join(f"({i},{j}): {v}" for (i, j), v in sorted(self.entries.items()))
        return f"GradedMatrix({{{body}}})"

    def entry(self, i: int, j: int):
        return self.entries.get((i, j), self.ring.zero())

    def support(self) -> set[int]:
        return {i for i, _ in self.entries} | {j for _, j in self.entries}

    def rows(self) -> dict:
        out: dict = {}
        for (i, j), v in self.entries.items():
            out.setdefault(i, {})[j] = v
        return out

    def cols(self) -> dict:
        out: dict = {}
        for (i, j), v in self.entries.items():
            out.setdefault(j, {})[i] = v
        return out

    def homogeneous_parts(self) -> dict:
        out: dict = {}
        for (i, j), v in self.entries.items():
            shift = deg_sub(self.spec(i), self.spec(j))
            for d, part in v.homogeneous_parts().items():
                out.setdefault(deg_add(d, shift), {})[(i, j)] = part
        return {g: GradedMatrix(self.ring, e, self.spec) for g, e in out.items()}

    def grade(self) -> tuple | None:
        parts = self.homogeneous_parts()
        return next(iter(parts)) if len(parts) == 1 else None

    def with_spec(self, spec: GradingSpec) -> "GradedMatrix":
        return GradedMatrix(self.ring, self.entries, spec)

    def to_json(self, fmt: Callable = str) -> dict:
        return {
            "entries": [[i, j, fmt(v)] for (i, j), v in sorted(self.entries.items())],
            "spec": self.spec.to_json(),
        }


def _ring_rank(ring) -> int:
    r = getattr(ring, "rank", None)
    return r if isinstance(r, int) else 1


class InfMatrixRing:
    """M_∞(R)[(δ)] as a ring object, usable as the base of another M_∞."""

    def __init__(self, base, spec: GradingSpec | None = None):
        self.base = base
        self.spec = spec if spec is not None else GradingSpec.zero(_ring_rank(base))
        self.rank = self.spec.rank

    def zero(self) -> GradedMatrix:
        return GradedMatrix(self.base, {}, self.spec)

    def embed(self, a, i: int, j: int) -> GradedMatrix:
        return GradedMatrix(self.base, {(i, j): a}, self.spec)

    def __repr__(self):
        return f"InfMatrixRing({self.base!r}, {self.spec!r})"


def _mul_ff(x: GradedMatrix, y: GradedMatrix) -> GradedMatrix:
    yrows = y.rows()
    acc: dict = {}
    for (i, k), a in x.entries.items():
        for j, b in yrows.get(k, {}).items():
            p = a * b
            if p:
                s = acc.get((i, j))
                acc[(i, j)] = p if s is None else s + p
    return GradedMatrix(x.ring, acc, x.spec)


def _mul_fl(x: GradedMatrix, y: "LazyMatrix") -> GradedMatrix:
    acc: dict = {}
    for (i, k), a in x.entries.items():
        for j, b in y.row(k).items():
            p = a * b
            if p:
                s = acc.get((i, j))
                acc[(i, j)] = p if s is None else s + p
    return GradedMatrix(x.ring, acc, x.spec)


def _mul_lf(x: "LazyMatrix", y: GradedMatrix) -> GradedMatrix:
    acc: dict = {}
    for (k, j), b in y.entries.items():
        for i, a in x.col(k).items():
            p = a * b
            if p:
                s = acc.get((i, j))
                acc[(i, j)] = p if s is None else s + p
    return GradedMatrix(y.ring, acc, y.spec)


# ---------------------------------------------------------------------------
# lazy row/column-finite matrices


def _combine(dicts: Iterable[tuple], scale_left: bool = True) -> dict:
    acc: dict = {}
    for coeff_elem, d in dicts:
        for j, b in d.items():
            p = coeff_elem * b if scale_left else b * coeff_elem
            if p:
                s = acc.get(j)
                acc[j] = p if s is None else s + p
    return {j: v for j, v in acc.items() if v}


class LazyMatrix:
    """A row- and column-finite matrix given by row and column oracles.

    ``row_fn(i)`` returns {j: entry} and ``col_fn(j)`` returns {i: entry},
    both listing only nonzero entries.  Results are memoized; oracles must be
    pure, so concurrent evaluation at worst repeats work.
    """

    def __init__(self, ring, row_fn: Callable, col_fn: Callable, spec: GradingSpec | None = None, name: str = ""):
        self.ring = ring
        self._row_fn = row_fn
        self._col_fn = col_fn
        self.spec = spec if spec is not None else GradingSpec.zero(_ring_rank(ring))
        self.name = name
        self._rows: dict = {}
        self._cols: dict = {}

    def __repr__(self):
        return f"LazyMatrix({self.name or '?'})"

    def row(self, i: int) -> dict:
        r = self._rows.get(i)
        if r is None:
            r = {j: v for j, v in self._row_fn(i).items() if v}
            self._rows[i] = r
        return r

    def col(self, j: int) -> dict:
        c = self._cols.get(j)
        if c is None:
            c = {i: v for i, v in self._col_fn(j).items() if v}
            self._cols[j] = c
        return c

    def entry(self, i: int, j: int):
        return self.row(i).get(j, self.ring.zero())

    # constructors

    @classmethod
    def from_finite(cls, x: GradedMatrix, name: str = "") -> "LazyMatrix":
        rows, cols = x.rows(), x.cols()
        return cls(x.ring, lambda i: rows.get(i, {}), lambda j: cols.get(j, {}), x.spec, name)

    @classmethod
    def diag(cls, ring, a, index_set, spec: GradingSpec | None = None, name: str = "") -> "LazyMatrix":
        """a ⊗ 1_S for an index set S."""

        def f(i):
            return {i: a} if i in index_set else {}

        return cls(ring, f, f, spec, name or f"diag({index_set})")

    @classmethod
    def from_oracle(
        cls,
        ring,
        entry: Callable,
        row_support: Callable,
        col_support: Callable,
        spec: GradingSpec | None = None,
        audit: int = 0,
        seed: int = 0,
        audit_range: int = 50,
        name: str = "",
    ) -> "LazyMatrix":
        """Wrap an entry oracle with caller-declared finite supports.

        With ``audit`` > 0, that many random positions outside the declared
        supports inside [1, audit_range]^2 are checked to be zero.
        """
        def row(i):
            return {j: entry(i, j) for j in row_support(i)}

        def col(j):
            return {i: entry(i, j) for i in col_support(j)}

        m = cls(ring, row, col, spec, name)
        rng = random.Random(seed)
        checked = 0
        tries = 0
        while checked < audit and tries < 50 * audit:
            tries += 1
            i, j = rng.randint(1, audit_range), rng.randint(1, audit_range)
            if j in set(row_support(i)) or i in set(col_support(j)):
                continue
            checked += 1
            if entry(i, j):
                raise MatrixError(f"oracle is nonzero at ({i},{j}) outside its declared support")
        for i in range(1, min(audit_range, 10) + 1) if audit else ():
            for j in row_support(i):
                if i not in set(col_support(j)) and entry(i, j):
                    raise MatrixError(f"row and column supports disagree at ({i},{j})")
        return m

    # arithmetic

    def __add__(self, other):
        if isinstance(other, GradedMatrix):
            other = LazyMatrix.from_finite(other)
        if not isinstance(other, LazyMatrix):
            return NotImplemented
        a, b = self, other
        return LazyMatrix(
            self.ring,
            lambda i: _combine([(1, a.row(i)), (1, b.row(i))], False),
            lambda j: _combine([(1, a.col(j)), (1, b.col(j))], False),
            self.spec,
            f"({a.name}+{b.name})",
        )

    __radd__ = __add__

    def __neg__(self):
        a = self
        return LazyMatrix(
            self.ring,
            lambda i: {j: -v for j, v in a.row(i).items()},
            lambda j: {i: -v for i, v in a.col(j).items()},
            self.spec,
            f"-{a.name}",
        )

    def __sub__(self, other):
        if isinstance(other, GradedMatrix):
            other = LazyMatrix.from_finite(other)
        if not isinstance(other, LazyMatrix):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if isinstance(other, GradedMatrix):
            return LazyMatrix.from_finite(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GradedMatrix):
            return _mul_lf(self, other)
        if not isinstance(other, LazyMatrix):
            return NotImplemented
        a, b = self, other

        def row(i):
            return _combine((v, b.row(k)) for k, v in a.row(i).items())

        def col(j):
            return _combine(((v, a.col(k)) for k, v in b.col(j).items()), scale_left=False)

        return LazyMatrix(self.ring, row, col, self.spec, f"{a.name}·{b.name}")

    def __rmul__(self, other):
        if isinstance(other, GradedMatrix):
            return _mul_fl(other, self)
        return NotImplemented


# ---------------------------------------------------------------------------
# module-level operations


def matmul(x, y):
    if not isinstance(x, (GradedMatrix, LazyMatrix)) or not isinstance(y, (GradedMatrix, LazyMatrix)):
        raise MatrixError("matmul needs matrices")
    if x.ring is not y.ring and x.ring != y.ring:
        raise MatrixError("matrices are over different rings")
    return x * y


def add(x, y):
    if x.ring is not y.ring and x.ring != y.ring:
        raise MatrixError("matrices are over different rings")
    return x + y


def embed(ring, a, i: int, j: int, spec: GradingSpec | None = None) -> GradedMatrix:
    """a ⊗ e_{i,j}."""
    return GradedMatrix(ring, {(i, j): a}, spec)


def degree_of(x: GradedMatrix) -> tuple | None:
    return x.grade()


def component(x: GradedMatrix, lam) -> GradedMatrix:
    lam = as_degree(lam)
    return x.homogeneous_parts().get(lam, GradedMatrix(x.ring, {}, x.spec))


def window(x, N: int) -> GradedMatrix:
    """Top-left N×N block as a finite matrix."""
    if N < 1:
        raise MatrixError("window size must be positive")
    if isinstance(x, GradedMatrix):
        return GradedMatrix(x.ring, {k: v for k, v in x.entries.items() if k[0] <= N and k[1] <= N}, x.spec)
    out = {}
    for i in range(1, N + 1):
        for j, v in x.row(i).items():
            if j <= N:
                out[(i, j)] = v
    return GradedMatrix(x.ring, out, x.spec)


def dense(x, N: int) -> list[list]:
    w = window(x, N)
    z = x.ring.zero()
    return [[w.entries.get((i, j), z) for j in range(1, N + 1)] for i in range(1, N + 1)]


def window_diff(x, y, N: int):
    """First (i, j, expected, got) where windows of y (expected) and x differ."""
    wx, wy = window(x, N), window(y, N)
    for k in sorted(set(wx.entries) | set(wy.entries)):
        a = wx.entries.get(k)
        b = wy.entries.get(k)
        if (a is None) != (b is None) or (a is not None and a != b):
            z = x.ring.zero()
            return (k[0], k[1], b if b is not None else z, a if a is not None else z)
    return None


# ---------------------------------------------------------------------------
# isomorphisms


def corner_e11_iso(x, ring=None, spec: GradingSpec | None = None):
    """a ↦ a ⊗ e_{1,1} and back."""
    if isinstance(x, GradedMatrix):
        if any(k != (1, 1) for k in x.entries):
            raise MatrixError("matrix has support outside (1,1)")
        return x.entries.get((1, 1), x.ring.zero())
    if ring is None:
        ring = getattr(x, "alg", None)
        if ring is None:
            raise MatrixError("cannot infer the base ring")
    return GradedMatrix(ring, {(1, 1): x}, spec)


def permutation_iso(x: GradedMatrix, pi: IndexPermutation) -> GradedMatrix:
    """(a_{i,j}) ↦ (a_{π(i),π(j)}), graded for the shifts δ∘π."""
    inv = pi.inverse()
    out = {}
    for (i, j), v in x.entries.items():
        key = (inv(i), inv(j))
        if key in out:
            raise MatrixError("permutation is not injective on the support")
        out[key] = v
    for n in x.support():
        if pi(inv(n)) != n:
            raise MatrixError("permutation rule is not a bijection on the support")
    return GradedMatrix(x.ring, out, x.spec.compose(pi))


class Partition:
    """ℕ as a disjoint union of modular blocks S_1..S_K, π_k enumerating S_k."""

    def __init__(self, blocks: Sequence[ModularIndexSet]):
        self.blocks = list(blocks)
        if not self.blocks:
            raise MatrixError("partition needs at least one block")
        L = 1
        for b in self.blocks:
            L = lcm(L, b.K)
        self.modulus = L
        for n in range(1, L + 1):
            hits = [k for k, b in enumerate(self.blocks, 1) if n in b]
            if len(hits) > 1:
                raise MatrixError(f"blocks {hits} overlap at {n}")
            if not hits:
                raise MatrixError(f"index {n} is not covered")
        self._block_of = {n: next(k for k, b in enumerate(self.blocks, 1) if n in b) for n in range(1, L + 1)}

    @property
    def K(self) -> int:
        return len(self.blocks)

    def pi(self, k: int, i: int) -> int:
        if not 1 <= k <= self.K:
            raise MatrixError(f"outer index {k} exceeds the {self.K} partition blocks")
        return self.blocks[k - 1].element(i)

    def locate(self, n: int) -> tuple[int, int]:
        k = self._block_of[(n - 1) % self.modulus + 1]
        return k, self.blocks[k - 1].position(n)

    def gamma(self, delta: GradingSpec) -> GradingSpec:
        """γ_n = δ_k for n ∈ S_k, as a periodic spec."""
        return GradingSpec.periodic([delta(self.locate(n)[0]) for n in range(1, self.modulus + 1)])


class ModularPartition(Partition):
    """S_k = {n ≡ k mod K}, π_k(i) = k + (i−1)K."""

    def __init__(self, K: int):
        super().__init__([ModularIndexSet(K, r) for r in range(1, K + 1)])


def double_stab_reindex(x: GradedMatrix, partition: Partition) -> GradedMatrix:
    """(a ⊗ e_ij) ⊗ e_kl ↦ a ⊗ e_{π_k(i), π_l(j)}."""
    inner = x.ring
    if not isinstance(inner, InfMatrixRing):
        raise MatrixError("double_stab_reindex needs a matrix over M_∞(A)")
    if not inner.spec.is_zero():
        raise MatrixError("inner matrices must carry the standard grading")
    out: dict = {}
    for (k, l), m in x.entries.items():
        for (i, j), a in m.entries.items():
            key = (partition.pi(k, i), partition.pi(l, j))
            s = out.get(key)
            out[key] = a if s is None else s + a
    return GradedMatrix(inner.base, out, partition.gamma(x.spec))


def double_stab_unreindex(y: GradedMatrix, partition: Partition, delta: GradingSpec) -> GradedMatrix:
    """Inverse of double_stab_reindex for the outer spec δ."""
    if not (y.spec == partition.gamma(delta)):
        raise MatrixError("matrix spec does not match the partition's γ for this δ")
    inner = InfMatrixRing(y.ring)
    blocks: dict = {}
    for (r, s), a in y.entries.items():
        k, i = partition.locate(r)
        l, j = partition.locate(s)
        blocks.setdefault((k, l), {})[(i, j)] = a
    out = {kl: GradedMatrix(y.ring, e, inner.spec) for kl, e in blocks.items()}
    return GradedMatrix(inner, out, delta)


def pure_period(delta: GradingSpec) -> int | None:
    """Least P with δ(n + P) = δ(n) for all n, if δ is purely periodic."""
    for P in range(1, delta.horizon() + 1):
        if delta == GradingSpec.periodic([delta(n) for n in range(1, P + 1)]):
            return P
    return None


def hg4_star_transport(x: GradedMatrix, iso: Callable, target_ring) -> GradedMatrix:
    """Transport an iso M_∞(A)[(0)] → M_∞(B)[(0)] to M_∞(A)[(δ)] → M_∞(B)[(δ)].

    δ must repeat each value infinitely often.  Blocks are taken modulo the
    period of δ, so γ = δ and no extra permutation is needed.
    """
    delta = x.spec
    if not delta.recurs():
        raise MatrixError("some value of δ occurs only finitely often")
    K = pure_period(delta)
    if K is None:
        raise MatrixError("δ recurs but is not purely periodic; only periodic specs are transported")
    part = ModularPartition(K)
    delta_eff = GradingSpec.periodic([delta(n) for n in range(1, K + 1)])
    outer = double_stab_unreindex(x.with_spec(delta_eff), part, delta_eff)
    target_inner = InfMatrixRing(target_ring)
    mapped = {}
    for kl, m in outer.entries.items():
        img = iso(m)
        if img:
            mapped[kl] = GradedMatrix(target_ring, img.entries, target_inner.spec)
    y = double_stab_reindex(GradedMatrix(target_inner, mapped, delta_eff), part)
    return y.with_spec(delta)
