"""Leavitt path algebras of finite graphs in reduced-monomial normal form.

Every element is a combination of monomials λμ* with r(λ) = r(μ).  At each
non-sink vertex the last emitted edge (declaration order) is the one CK2
eliminates, so λμ* is reduced unless λ and μ both end in that edge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import linalg
from .field import default_field
from .finalg import FinGradedAlgebra
from .graph import Graph, GraphError, Path, all_paths, is_acyclic, is_primitive, longest_path_length, paths_of_length


class LpaError(ValueError):
    pass


Monomial = tuple  # (λ: Path, μ: Path)


def _concat(p: Path, q: Path) -> Path:
    return Path(p.start, q.end, p.edges + q.edges)


def _suffix(p: Path, k: int, g: Graph) -> Path:
    """Path p with its first k edges removed."""
    rest = p.edges[k:]
    start = g.tgt(p.edges[k - 1]) if k else p.start
    return Path(start, p.end, rest)


class LpaElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: "LpaAlgebra", terms: dict | None = None):
        self.alg = alg
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    def _check(self, other) -> bool:
        if not isinstance(other, LpaElement):
            return False
        if other.alg is not self.alg and other.alg.graph != self.alg.graph:
            raise LpaError("elements belong to different Leavitt path algebras")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        acc = dict(self.terms)
        linalg.axpy(acc, 1, other.terms)
        return LpaElement(self.alg, acc)

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        acc = dict(self.terms)
        linalg.axpy(acc, -1, other.terms)
        return LpaElement(self.alg, acc)

    def __neg__(self):
        return LpaElement(self.alg, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, LpaElement):
            self._check(other)
            return self.alg.mul(self, other)
        return LpaElement(self.alg, linalg.scale(self.alg.field(other), self.terms))

    def __rmul__(self, other):
        if isinstance(other, LpaElement):
            return NotImplemented
        return LpaElement(self.alg, linalg.scale(self.alg.field(other), self.terms))

    def __eq__(self, other):
        if isinstance(other, LpaElement):
            return other.terms == self.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"LpaElement({self.alg.format(self)})"

    def __str__(self):
        return self.alg.format(self)

    def star(self) -> "LpaElement":
        return self.alg.star(self)

    def homogeneous_parts(self) -> dict:
        out: dict = {}
        for (lam, mu), c in self.terms.items():
            out.setdefault((lam.length - mu.length,), {})[(lam, mu)] = c
        return {d: LpaElement(self.alg, t) for d, t in out.items()}

    def grade(self) -> tuple | None:
        degs = {lam.length - mu.length for lam, mu in self.terms}
        return (degs.pop(),) if len(degs) == 1 else None


class LpaAlgebra:
    """L_K(E) for a finite graph E over an exact field."""

    def __init__(self, graph: Graph, field=None):
        self.graph = graph
        self.field = field or default_field()
        self.special = {v: graph.out_edges(v)[-1] for v in graph.vertices if graph.out_edges(v)}
        self._reduce_cache: dict = {}

    def __repr__(self):
        return f"LpaAlgebra({self.graph!r})"

    # -- constructors

    def zero(self) -> LpaElement:
        return LpaElement(self, {})

    def one(self) -> LpaElement:
        return LpaElement(self, {(Path(v, v), Path(v, v)): self.field.one for v in self.graph.vertices})

    def vertex(self, v: str) -> LpaElement:
        self.graph.check_vertex(v)
        return LpaElement(self, {(Path(v, v), Path(v, v)): self.field.one})

    def edge(self, e: str) -> LpaElement:
        g = self.graph
        t = g.tgt(e)
        return LpaElement(self, {(Path(g.src(e), t, (e,)), Path(t, t)): self.field.one})

    def ghost(self, e: str) -> LpaElement:
        return self.star(self.edge(e))

    def monomial(self, lam: Path, mu: Path, coeff=1) -> LpaElement:
        if lam.end != mu.end:
            raise LpaError("λμ* needs r(λ) = r(μ)")
        out: dict = {}
        linalg.axpy(out, self.field(coeff), self._reduce(lam, mu))
        return LpaElement(self, out)

    def path_element(self, p: Path) -> LpaElement:
        return self.monomial(p, Path(p.end, p.end))

    # -- normal form kernel

    def is_reduced(self, lam: Path, mu: Path) -> bool:
        if not lam.edges or not mu.edges:
            return True
        e = lam.edges[-1]
        return e != mu.edges[-1] or self.special.get(self.graph.src(e)) != e

    def _reduce(self, lam: Path, mu: Path) -> dict:
        """Normal form of the single monomial λμ* as a term dict."""
        key = (lam, mu)
        hit = self._reduce_cache.get(key)
        if hit is not None:
            return hit
        g = self.graph
        out: dict = {}
        one = self.field.one
        while not self.is_reduced(lam, mu):
            e = lam.edges[-1]
            v = g.src(e)
            lam = Path(lam.start, v, lam.edges[:-1])
            mu = Path(mu.start, v, mu.edges[:-1])
            # λ'e e*μ'* = λ'μ'* − Σ_{f ≠ e} λ'f f*μ'*
            for f in g.out_edges(v):
                if f == e:
                    continue
                t = g.tgt(f)
                k = (Path(lam.start, t, lam.edges + (f,)), Path(mu.start, t, mu.edges + (f,)))
                out[k] = out.get(k, 0) - one
        out[(lam, mu)] = out.get((lam, mu), 0) + one
        out = {k: c for k, c in out.items() if c}
        if len(self._reduce_cache) < 200_000:
            self._reduce_cache[key] = out
        return out

    def _mul_monomials(self, a: Monomial, b: Monomial) -> dict:
        lam, mu = a
        alpha, beta = b
        if mu.start != alpha.start:
            return {}
        g = self.graph
        m, n = mu.length, alpha.length
        if n >= m:
            if alpha.edges[:m] != mu.edges:
                return {}
            tau = _suffix(alpha, m, g)
            return self._reduce(_concat(lam, tau), beta)
        if mu.edges[:n] != alpha.edges:
            return {}
        tau = _suffix(mu, n, g)
        return self._reduce(lam, _concat(beta, tau))

    def mul(self, x: LpaElement, y: LpaElement) -> LpaElement:
        acc: dict = {}
        by_start: dict = {}
        for (alpha, beta), d in y.terms.items():
            by_start.setdefault(alpha.start, []).append(((alpha, beta), d))
        for a, c in x.terms.items():
            for b, d in by_start.get(a[1].start, ()):
                prod = self._mul_monomials(a, b)
                if prod:
                    linalg.axpy(acc, c * d, prod)
        return LpaElement(self, acc)

    def add(self, x: LpaElement, y: LpaElement) -> LpaElement:
        return x + y

    def star(self, x: LpaElement) -> LpaElement:
        return LpaElement(self, {(mu, lam): c for (lam, mu), c in x.terms.items()})

    # -- grading

    def degree(self, x: LpaElement) -> int | None:
        g = x.grade()
        return None if g is None else g[0]

    def component(self, x: LpaElement, n: int) -> LpaElement:
        return LpaElement(self, {k: c for k, c in x.terms.items() if k[0].length - k[1].length == n})

    # -- text format

    def format_monomial(self, lam: Path, mu: Path) -> str:
        if not lam.edges and not mu.edges:
            return lam.start
        parts = list(lam.edges) + [f"{e}'" for e in reversed(mu.edges)]
        return ".".join(parts)

    def sort_key(self, m: Monomial):
        lam, mu = m
        vi = self.graph.vertex_index
        return (lam.length + mu.length, vi(lam.start), vi(mu.start), lam.edges, mu.edges)

    def format(self, x: LpaElement) -> str:
        if not x.terms:
            return "0"
        parts = []
        for m in sorted(x.terms, key=self.sort_key):
            parts.append(f"{self.field.fmt(x.terms[m])}*{self.format_monomial(*m)}")
        return " + ".join(parts)

    def parse(self, text: str) -> LpaElement:
        """Parse ``3/2*e.f*g' + 1*v``; '.' and '*' both mean product."""
        total = self.zero()
        sign = 1
        seen = False
        for tok in re.split(r"([+-])", text):
            tok = tok.strip()
            if tok == "+" or not tok:
                continue
            if tok == "-":
                sign = -sign
                continue
            total = total + sign * self._parse_term(tok)
            sign = 1
            seen = True
        if not seen:
            raise LpaError(f"empty expression {text!r}")
        return total

    def _parse_term(self, term: str) -> LpaElement:
        # A leading numeral followed by more factors is the coefficient; any
        # other factor is looked up as a vertex, an edge, or a ghost ``e'``.
        factors = [f.strip() for f in re.split(r"[*.]", term) if f.strip()]
        if not factors:
            raise LpaError(f"empty term in {term!r}")
        g = self.graph
        coeff = self.field.one
        numeral = re.compile(r"\d+(/\d+)?")
        if len(factors) > 1 and numeral.fullmatch(factors[0]):
            coeff = self.field(_fraction(factors[0]))
            factors = factors[1:]
        word = None
        for fac in factors:
            if fac.endswith("'"):
                el = self.ghost(_edge_name(g, fac[:-1]))
            elif g.has_vertex(fac):
                el = self.vertex(fac)
            elif fac in g._edge:
                el = self.edge(fac)
            elif numeral.fullmatch(fac) and len(factors) == 1:
                return self.field(_fraction(fac)) * self.one()
            else:
                raise LpaError(f"unknown vertex or edge {fac!r}")
            word = el if word is None else word * el
        return coeff * word


def _fraction(s: str):
    from fractions import Fraction

    return Fraction(s)


def _edge_name(g: Graph, name: str) -> str:
    try:
        g.edge(name)
    except GraphError:
        raise LpaError(f"unknown vertex or edge {name!r}") from None
    return name


def normal_form(L: LpaAlgebra, expr) -> LpaElement:
    """Normal form of an expression given as text, an element, or (coeff, word) pairs.

    A word is a sequence of vertex names, edge names and ghost names ``e'``.
    """
    if isinstance(expr, LpaElement):
        return L.zero() + expr
    if isinstance(expr, str):
        return L.parse(expr)
    total = L.zero()
    for coeff, word in expr:
        total = total + L.field(coeff) * L.parse(".".join(word) if word else "1")
    return total


def multiply(L: LpaAlgebra, x: LpaElement, y: LpaElement) -> LpaElement:
    return L.mul(x, y)


def star(L: LpaAlgebra, x: LpaElement) -> LpaElement:
    return L.star(x)


def degree(L: LpaAlgebra, x: LpaElement) -> int | None:
    return L.degree(x)


def component(L: LpaAlgebra, x: LpaElement, n: int) -> LpaElement:
    return L.component(x, n)


# ---------------------------------------------------------------------------
# finite-dimensional views


def reduced_monomials(L: LpaAlgebra, max_len: int, *, equal_length: bool = False, source: str | None = None) -> list[Monomial]:
    """Reduced λμ* with |λ|, |μ| <= max_len (sources restricted to ``source``)."""
    g = L.graph
    paths = all_paths(g, max_len, source=source)
    by_end: dict = {}
    for p in paths:
        by_end.setdefault(p.end, []).append(p)
    out = []
    for v in g.vertices:
        ps = by_end.get(v, [])
        for lam in ps:
            for mu in ps:
                if equal_length and lam.length != mu.length:
                    continue
                if L.is_reduced(lam, mu):
                    out.append((lam, mu))
    out.sort(key=L.sort_key)
    return out


@dataclass
class MonomialAlgebra:
    """A FinGradedAlgebra whose basis is a list of reduced monomials of L."""

    lpa: LpaAlgebra
    alg: FinGradedAlgebra
    monomials: list

    def to_alg(self, x: LpaElement):
        index = self._index()
        coeffs = {}
        for m, c in x.terms.items():
            if m not in index:
                raise LpaError(f"monomial {self.lpa.format_monomial(*m)} is outside the basis")
            coeffs[index[m]] = c
        return self.alg.element(coeffs)

    def to_lpa(self, a) -> LpaElement:
        return LpaElement(self.lpa, {self.monomials[k]: c for k, c in a.coeffs.items()})

    def _index(self):
        if not hasattr(self, "_idx"):
            self._idx = {m: k for k, m in enumerate(self.monomials)}
        return self._idx


def _monomial_algebra(L: LpaAlgebra, monos: list, name: str, check: bool, zero_graded: bool) -> MonomialAlgebra:
    index = {m: k for k, m in enumerate(monos)}
    table = {}
    for i, a in enumerate(monos):
        for j, b in enumerate(monos):
            prod = L._mul_monomials(a, b)
            if not prod:
                continue
            row = {}
            for m, c in prod.items():
                if m not in index:
                    raise LpaError("monomial span is not closed under multiplication")
                row[index[m]] = c
            table[(i, j)] = row
    names = [L.format_monomial(*m) for m in monos]
    degrees = [(0,) if zero_graded else (m[0].length - m[1].length,) for m in monos]
    unit = {index[(Path(v, v), Path(v, v))]: 1 for v in L.graph.vertices}
    A = FinGradedAlgebra(names, degrees, table, unit, L.field, check=check, name=name)
    return MonomialAlgebra(L, A, monos)


def as_fin_algebra_map(L: LpaAlgebra, check: bool = False) -> MonomialAlgebra:
    if not is_acyclic(L.graph):
        raise LpaError("graph has a cycle; L(E) is infinite-dimensional")
    n = longest_path_length(L.graph)
    return _monomial_algebra(L, reduced_monomials(L, n), "L", check, False)


def as_fin_algebra(L: LpaAlgebra, check: bool = False) -> FinGradedAlgebra:
    """L(E) for acyclic E as structure constants over the reduced-monomial basis."""
    return as_fin_algebra_map(L, check).alg


def zero_component_truncation_map(L: LpaAlgebra, n: int, check: bool = False) -> MonomialAlgebra:
    if n < 0:
        raise LpaError("truncation bound must be non-negative")
    monos = reduced_monomials(L, n, equal_length=True)
    return _monomial_algebra(L, monos, f"L0[<={n}]", check, True)


def zero_component_truncation(L: LpaAlgebra, n: int, check: bool = False) -> FinGradedAlgebra:
    """Span of reduced λμ* with |λ| = |μ| <= n; a unital subalgebra of L_0."""
    return zero_component_truncation_map(L, n, check).alg


# ---------------------------------------------------------------------------
# corners


@dataclass
class LpaCorner:
    """The corner vL(E)v."""

    lpa: LpaAlgebra
    v: str

    def contains(self, x: LpaElement) -> bool:
        return all(lam.start == self.v and mu.start == self.v for lam, mu in x.terms)

    def project(self, x: LpaElement) -> LpaElement:
        p = self.lpa.vertex(self.v)
        return p * x * p

    def unit(self) -> LpaElement:
        return self.lpa.vertex(self.v)

    def mul(self, x: LpaElement, y: LpaElement) -> LpaElement:
        if not (self.contains(x) and self.contains(y)):
            raise LpaError("element is not in the corner")
        return self.lpa.mul(x, y)

    def degree(self, x: LpaElement) -> int | None:
        return self.lpa.degree(x)


def corner_lpa(L: LpaAlgebra, v: str) -> LpaCorner:
    L.graph.check_vertex(v)
    return LpaCorner(L, v)


def component_dimension_truncated(corner: LpaCorner, k: int, n: int) -> int:
    """Count reduced λμ* with s(λ) = s(μ) = v, |λ| − |μ| = k, |λ|, |μ| <= n."""
    L = corner.lpa
    return sum(1 for lam, mu in reduced_monomials(L, n, source=corner.v) if lam.length - mu.length == k)


def ambient_dimension_truncated(L: LpaAlgebra, k: int, n: int) -> int:
    return sum(1 for lam, mu in reduced_monomials(L, n) if lam.length - mu.length == k)


def _range_sets(g: Graph, v: str):
    """R_j = ranges of length-j paths from v; returns (sets, preperiod, period)."""
    seen: dict = {}
    seq = []
    cur = frozenset([v])
    while cur not in seen:
        seen[cur] = len(seq)
        seq.append(cur)
        cur = frozenset(g.tgt(e) for u in cur for e in g.out_edges(u))
    s = seen[cur]
    return seq, s, len(seq) - s


def _pair_degree_nonzero(g: Graph, u: str, w: str, k: int) -> bool:
    """Is there a monomial λμ* with s(λ)=u, s(μ)=w and |λ| − |μ| = k?

    Monomials λμ* are never zero, so this asks for paths of lengths j+k from u
    and j from w with a common range.  Both range-set sequences are eventually
    periodic, which bounds the scan.
    """
    from math import lcm

    if k < 0:
        u, w, k = w, u, -k
    su, pu = _range_sets(g, u)[1:]
    sw, pw = _range_sets(g, w)[1:]
    seq_u = _range_sets(g, u)[0]
    seq_w = _range_sets(g, w)[0]

    def at(seq, s, p, j):
        return seq[j] if j < len(seq) else seq[s + (j - s) % p]

    horizon = max(su, sw) + lcm(pu, pw)
    return any(at(seq_u, su, pu, j + k) & at(seq_w, sw, pw, j) for j in range(horizon + 1))


def corner_degree_nonzero(L: LpaAlgebra, v: str, k: int) -> bool:
    """Exact test for (vL(E)v)_k ≠ 0."""
    L.graph.check_vertex(v)
    return _pair_degree_nonzero(L.graph, v, v, k)


def degree_nonzero(L: LpaAlgebra, k: int) -> bool:
    """Exact test for L(E)_k ≠ 0 (equivalently M_∞(L(E))_k ≠ 0)."""
    vs = L.graph.vertices
    return any(_pair_degree_nonzero(L.graph, u, w, k) for u in vs for w in vs)


def degree_support_period(L: LpaAlgebra) -> tuple[int, int]:
    """(s, P) with [L_k ≠ 0] periodic of period P in k for |k| >= s."""
    from math import lcm

    pre, per = 0, 1
    for v in L.graph.vertices:
        _, s, p = _range_sets(L.graph, v)
        pre = max(pre, s)
        per = lcm(per, p)
    return pre, per


def degree_support(L: LpaAlgebra, bound: int) -> list[int]:
    return [k for k in range(-bound, bound + 1) if degree_nonzero(L, k)]


# ---------------------------------------------------------------------------
# fullness of a vertex in L_0 for primitive graphs


@dataclass
class PrimitiveCertificate:
    lpa: LpaAlgebra
    v: str
    n: int
    pairs: dict  # vertex w -> list of (μ, ν) with s(μ) = w, s(ν) = v, r(μ) = r(ν)

    def witness(self) -> list[tuple[LpaElement, LpaElement]]:
        """Pairs (x, y) = (μν*, νμ*) with Σ x v y = 1."""
        L = self.lpa
        out = []
        for w in L.graph.vertices:
            for mu, nu in self.pairs[w]:
                out.append((L.monomial(mu, nu), L.monomial(nu, mu)))
        return out

    @property
    def m(self) -> int:
        return sum(len(ps) for ps in self.pairs.values())

    def verify(self) -> bool:
        L = self.lpa
        p = L.vertex(self.v)
        for w in L.graph.vertices:
            acc = L.zero()
            for mu, nu in self.pairs[w]:
                if mu.length != self.n or nu.length != self.n:
                    return False
                if mu.start != w or nu.start != self.v or mu.end != nu.end:
                    return False
                x = L.monomial(mu, nu)
                if L.degree(x) != 0:
                    return False
                acc = acc + x * p * L.monomial(nu, mu)
            if acc != L.vertex(w):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "vertex": self.v,
            "n": self.n,
            "pairs": {w: [[str(mu), str(nu)] for mu, nu in ps] for w, ps in self.pairs.items()},
        }


def fullness_certificate_primitive(L: LpaAlgebra, v: str) -> PrimitiveCertificate:
    g = L.graph
    g.check_vertex(v)
    n = is_primitive(g)
    if n is None:
        raise LpaError("graph is not primitive")
    from_v: dict = {}
    for nu in paths_of_length(g, n, source=v):
        from_v.setdefault(nu.end, nu)
    pairs = {}
    for w in g.vertices:
        pairs[w] = [(mu, from_v[mu.end]) for mu in paths_of_length(g, n, source=w)]
    cert = PrimitiveCertificate(L, v, n, pairs)
    if not cert.verify():
        raise LpaError("primitive fullness certificate failed verification")
    return cert


# ---------------------------------------------------------------------------
# brute-force oracle


def quotient_dimension_oracle(L: LpaAlgebra) -> int:
    """dim L(E) for acyclic E by linear algebra on the free path-pair span.

    The free span has basis all pairs (λ, μ) with r(λ) = r(μ); relations are
    λ'μ'* = Σ_{s(e)=v} λ'e (μ'e)* for every pair ending at a non-sink v.
    The answer is the number of pairs minus the rank of the relations.  No
    normal-form machinery is used.
    """
    g = L.graph
    if not is_acyclic(g):
        raise LpaError("oracle needs an acyclic graph")
    n = longest_path_length(g)
    paths = all_paths(g, n)
    pairs = [(a, b) for a in paths for b in paths if a.end == b.end]
    index = {p: k for k, p in enumerate(pairs)}
    rels = []
    for lam, mu in pairs:
        v = lam.end
        outs = g.out_edges(v)
        if not outs:
            continue
        rel = {index[(lam, mu)]: 1}
        for e in outs:
            t = g.tgt(e)
            k = index[(Path(lam.start, t, lam.edges + (e,)), Path(mu.start, t, mu.edges + (e,)))]
            rel[k] = rel.get(k, 0) - 1
        rels.append(rel)
    return len(pairs) - linalg.rank(rels)
