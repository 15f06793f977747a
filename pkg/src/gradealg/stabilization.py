"""The Brown construction and the graded isomorphism M_∞(A) ≅ M_∞(pAp).

Given an idempotent p ∈ A_0 with 1 = Σ x_i p y_i (x_i, y_i ∈ A_0), this
module builds, exactly as in the inductive argument, row/column-finite
matrices u_i, v_i over A_0 and the evaluators

    φ_n(x) = z_{2n−1} x w_{2n−1},    ψ_n(y) = w_{2n} y z_{2n},

with w_n = Σ_{k≤n} u_k and z_n = Σ_{k≤n} v_k.  ℕ is split into the modular
blocks N_i = {n ≡ i mod K}, i = 1..K, with K = depth + 1.  Every identity of
the construction can be checked on finite windows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .matinf import (
    ALL_INDICES,
    FiniteIndexSet,
    GradedMatrix,
    LazyMatrix,
    ModularIndexSet,
    degree_of,
    window_diff,
)


class StabilizationError(ValueError):
    pass


class InsufficientDepth(StabilizationError):
    def __init__(self, required: int, available: int):
        super().__init__(f"insufficient depth: need n = {required}, have {available}")
        self.required = required
        self.available = available


Matrix = GradedMatrix | LazyMatrix


def _zero_lazy(ring) -> LazyMatrix:
    return LazyMatrix(ring, lambda i: {}, lambda j: {}, name="0")


def _as_lazy(x: Matrix) -> LazyMatrix:
    return LazyMatrix.from_finite(x) if isinstance(x, GradedMatrix) else x


def _mul(*factors: Matrix) -> Matrix:
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return out


def equal_on(x: Matrix, y: Matrix, N: int):
    """None if x and y agree on the N×N window, else (i, j, expected=y, got=x)."""
    return window_diff(x, y, N)


def leq_on(e: Matrix, f: Matrix, N: int):
    """Check e ≤ f (ef = fe = e) on the window."""
    return equal_on(_mul(e, f), e, N) or equal_on(_mul(f, e), e, N)


@dataclass
class IsoPair:
    """u, v with uvu = u and vuv = v."""

    u: Matrix
    v: Matrix

    def check(self, N: int) -> list[tuple[str, tuple]]:
        bad = []
        for name, lhs, rhs in (
            ("uvu = u", _mul(self.u, self.v, self.u), self.u),
            ("vuv = v", _mul(self.v, self.u, self.v), self.v),
        ):
            d = equal_on(lhs, rhs, N)
            if d:
                bad.append((name, d))
        return bad


# ---------------------------------------------------------------------------
# the lemmas


def make_equiv_pair(ring, p, S, T) -> IsoPair:
    """u = Σ p⊗e_{s_t,t_t}, v = Σ p⊗e_{t_t,s_t}; uv = p⊗1_S, vu = p⊗1_T."""
    if S.infinite != T.infinite or (not S.infinite and S.size != T.size):
        raise StabilizationError("index sets have different cardinalities")
    if not S.infinite:
        u = GradedMatrix(ring, {(S.element(t), T.element(t)): p for t in range(1, S.size + 1)})
        v = GradedMatrix(ring, {(T.element(t), S.element(t)): p for t in range(1, S.size + 1)})
        return IsoPair(u, v)

    def match(src, dst):
        def f(i):
            t = src.position(i)
            return {} if t is None else {dst.element(t): p}

        return f

    u = LazyMatrix(ring, match(S, T), match(T, S), name=f"eq({S}->{T})")
    v = LazyMatrix(ring, match(T, S), match(S, T), name=f"eq({T}->{S})")
    return IsoPair(u, v)


def reduce_pair(u: Matrix, v: Matrix, p: Matrix, e: Matrix, N: int = 16) -> IsoPair:
    """w = u, z = vuv, given uv = p, pu = u and vu ∈ eAe (checked on windows)."""
    uv = _mul(u, v)
    if equal_on(uv, p, N):
        raise StabilizationError("reduce_pair: uv ≠ p")
    if equal_on(_mul(p, u), u, N):
        raise StabilizationError("reduce_pair: pu ≠ u")
    vu = _mul(v, u)
    if equal_on(_mul(e, vu, e), vu, N):
        raise StabilizationError("reduce_pair: vu ∉ eAe")
    return IsoPair(u, _mul(v, u, v))


def _witness_total(ring, p, witness: Sequence[tuple]):
    acc = ring.zero()
    for x, y in witness:
        acc = acc + x * p * y
    return acc


def unit_corner_pair(ring, p, witness: Sequence[tuple]) -> tuple[int, IsoPair]:
    """(m, (w, z)) with wz = 1⊗e_11 and zw ≤ Σ_{i≤m} p⊗e_ii."""
    if _witness_total(ring, p, witness) != ring.one():
        raise StabilizationError("fullness witness does not sum to 1")
    m = len(witness)
    u = GradedMatrix(ring, {(1, i): x * p for i, (x, _) in enumerate(witness, 1)})
    v = GradedMatrix(ring, {(i, 1): p * y for i, (_, y) in enumerate(witness, 1)})
    e = GradedMatrix(ring, {(i, i): p for i in range(1, m + 1)})
    one11 = GradedMatrix(ring, {(1, 1): ring.one()})
    return m, reduce_pair(u, v, one11, e, N=m + 1)


def unit_corner_pair_at(ring, p, witness, j: int, S: FiniteIndexSet, base: tuple | None = None) -> IsoPair:
    """(w', z') with w'z' = 1⊗e_jj and z'w' ≤ p⊗1_S, |S| = m."""
    m, pair = base if base is not None else unit_corner_pair(ring, p, witness)
    if S.size != m:
        raise StabilizationError(f"|S| = {S.size} but the witness has m = {m}")
    u1v1 = make_equiv_pair(ring, ring.one(), FiniteIndexSet([j]), FiniteIndexSet([1]))
    u2v2 = make_equiv_pair(ring, p, FiniteIndexSet(range(1, m + 1)), S)
    return IsoPair(_mul(u1v1.u, pair.u, u2v2.u), _mul(u2v2.v, pair.v, u1v1.v))


def infinite_pair(ring, p, witness, S: ModularIndexSet, base: tuple | None = None) -> IsoPair:
    """(w, z) lazy with wz = 1⊗1_S and zw ≤ p⊗1_S.

    The t-th element s_t of S gets the block S_{s_t} = {(t−1)m+1, ..., tm}, so
    the blocks tile X = ℕ, and the pieces u_j, v_j are summed lazily.
    """
    base = base if base is not None else unit_corner_pair(ring, p, witness)
    m = base[0]
    pieces: dict = {}

    def piece(t: int) -> IsoPair:
        hit = pieces.get(t)
        if hit is None:
            j = S.element(t)
            block = FiniteIndexSet(range((t - 1) * m + 1, t * m + 1))
            hit = unit_corner_pair_at(ring, p, witness, j, block, base)
            for (a, b) in hit.u.entries:
                if a != j or b not in block:
                    raise StabilizationError("u_j escapes its block")
            for (a, b) in hit.v.entries:
                if b != j or a not in block:
                    raise StabilizationError("v_j escapes its block")
            pieces[t] = hit
        return hit

    def u_row(i):
        t = S.position(i)
        return {} if t is None else piece(t).u.rows().get(i, {})

    def u_col(c):
        t = (c - 1) // m + 1
        return piece(t).u.cols().get(c, {})

    def v_row(r):
        t = (r - 1) // m + 1
        return piece(t).v.rows().get(r, {})

    def v_col(c):
        t = S.position(c)
        return {} if t is None else piece(t).v.cols().get(c, {})

    u = LazyMatrix(ring, u_row, u_col, name=f"Σu_j[{S}]")
    v = LazyMatrix(ring, v_row, v_col, name=f"Σv_j[{S}]")
    prime = make_equiv_pair(ring, p, ALL_INDICES, S)
    return IsoPair(u * prime.u, prime.v * v)


def corner_transport(u: Matrix, v: Matrix, x: GradedMatrix, p: Matrix | None = None, N: int | None = None) -> Matrix:
    """φ(x) = v x u for x ∈ pAp."""
    if p is not None:
        pxp = _mul(p, x, p)
        if isinstance(pxp, GradedMatrix) and pxp != x:
            raise StabilizationError("x is not in pAp")
    return _mul(v, x, u)


# ---------------------------------------------------------------------------
# Brown data


class BlockUnion:
    """N_1 ∪ ... ∪ N_n for the modular blocks of modulus K."""

    def __init__(self, K: int, n: int):
        self.K, self.n = K, n

    def __contains__(self, i: int) -> bool:
        return i >= 1 and (i - 1) % self.K + 1 <= self.n

    def __repr__(self):
        return f"N_1..N_{self.n} (mod {self.K})"


@dataclass
class BrownData:
    ring: object
    p: object
    witness: list
    depth: int
    K: int
    blocks: list
    u: list  # u[1..2·depth], index 0 unused
    v: list
    m: int
    _cache: dict = field(default_factory=dict, repr=False)

    def block_of(self, i: int) -> int:
        return (i - 1) % self.K + 1

    def _memo(self, key, make):
        hit = self._cache.get(key)
        if hit is None:
            hit = make()
            self._cache[key] = hit
        return hit

    def Q(self, n: int) -> LazyMatrix:
        return self._memo(("Q", n), lambda: LazyMatrix.diag(self.ring, self.ring.one(), BlockUnion(self.K, n), name=f"Q{n}"))

    def P(self, n: int) -> LazyMatrix:
        return self._memo(("P", n), lambda: LazyMatrix.diag(self.ring, self.p, BlockUnion(self.K, n), name=f"P{n}"))

    def uv(self, i: int) -> LazyMatrix:
        return self._memo(("uv", i), lambda: self.u[i] * self.v[i])

    def vu(self, i: int) -> LazyMatrix:
        return self._memo(("vu", i), lambda: self.v[i] * self.u[i])

    def w(self, n: int) -> LazyMatrix:
        if n == 1:
            return self.u[1]
        return self._memo(("w", n), lambda: self.w(n - 1) + self.u[n])

    def z(self, n: int) -> LazyMatrix:
        if n == 1:
            return self.v[1]
        return self._memo(("z", n), lambda: self.z(n - 1) + self.v[n])

    def sum_uv(self, n: int) -> LazyMatrix:
        if n == 1:
            return self.uv(1)
        return self._memo(("suv", n), lambda: self.sum_uv(n - 1) + self.uv(n))

    def sum_vu(self, n: int) -> LazyMatrix:
        if n == 1:
            return self.vu(1)
        return self._memo(("svu", n), lambda: self.sum_vu(n - 1) + self.vu(n))

    def wz(self, n: int) -> LazyMatrix:
        return self._memo(("wz", n), lambda: self.w(n) * self.z(n))

    def zw(self, n: int) -> LazyMatrix:
        return self._memo(("zw", n), lambda: self.z(n) * self.w(n))

    # the evaluators

    def required_n(self, x: GradedMatrix) -> int:
        return max((self.block_of(i) for i in x.support()), default=1)

    def phi(self, n: int, x: GradedMatrix) -> GradedMatrix:
        if not 1 <= n <= self.depth:
            raise InsufficientDepth(n, self.depth)
        return self.z(2 * n - 1) * x * self.w(2 * n - 1)

    def psi(self, n: int, y: GradedMatrix) -> GradedMatrix:
        if not 1 <= n <= self.depth:
            raise InsufficientDepth(n, self.depth)
        return self.w(2 * n) * y * self.z(2 * n)


def brown_sequence(ring, p, witness: Sequence[tuple], depth: int, K: int | None = None, corrupt: bool = False) -> BrownData:
    """u_1..u_{2·depth}, v_1..v_{2·depth} built by the inductive construction.

    ``corrupt`` replaces (u_2, v_2) by (u_2 + u_1, v_2 + v_1), which breaks
    orthogonality of the u_i v_i; it exists only as a negative control.
    """
    if depth < 1:
        raise StabilizationError("depth must be at least 1")
    K = K if K is not None else depth + 1
    if K < depth + 1:
        raise StabilizationError("need K >= depth + 1 blocks")
    witness = list(witness)
    base = unit_corner_pair(ring, p, witness)
    blocks = [None] + [ModularIndexSet(K, i) for i in range(1, K + 1)]
    one = ring.one()
    u: list = [None]
    v: list = [None]
    prev_uv: LazyMatrix = _zero_lazy(ring)
    for n in range(1, depth + 1):
        pair = infinite_pair(ring, p, witness, blocks[n], base)
        D = LazyMatrix.diag(ring, one, blocks[n], name=f"1⊗1_N{n}") - prev_uv
        u.append(D * pair.u)
        v.append(pair.v * D)
        odd = len(u) - 1
        wz = make_equiv_pair(ring, p, blocks[n + 1], blocks[n])
        E = LazyMatrix.diag(ring, p, blocks[n], name=f"p⊗1_N{n}") - v[odd] * u[odd]
        u.append(wz.u * E)
        v.append(E * wz.v)
        if corrupt and n == 1:
            u[2], v[2] = u[2] + u[1], v[2] + v[1]
        prev_uv = u[-1] * v[-1]
    return BrownData(ring, p, witness, depth, K, blocks, u, v, base[0])


# ---------------------------------------------------------------------------
# the stabilization isomorphism


@dataclass
class StabIso:
    data: BrownData

    def forward(self, x: GradedMatrix) -> GradedMatrix:
        """x ∈ M_∞(A) ↦ φ_n(x) ∈ M_∞(pAp) for the least n with Q_n x Q_n = x."""
        n = self.data.required_n(x)
        if n > self.data.depth:
            raise InsufficientDepth(n, self.data.depth)
        return self.data.phi(n, x)

    def backward(self, y: GradedMatrix) -> GradedMatrix:
        """y ∈ M_∞(pAp) ↦ ψ_n(y) for the least n with P_n y P_n = y."""
        p = self.data.p
        for a in y.entries.values():
            if p * a * p != a:
                raise StabilizationError("entry is not in pAp")
        n = self.data.required_n(y)
        if n > self.data.depth:
            raise InsufficientDepth(n, self.data.depth)
        return self.data.psi(n, y)

    def required_depth(self, x: GradedMatrix) -> int:
        return self.data.required_n(x)


def stab_iso(ring, p, witness, depth: int) -> StabIso:
    return StabIso(brown_sequence(ring, p, witness, depth))


# ---------------------------------------------------------------------------
# verification


@dataclass
class Check:
    identity: str
    window: int
    status: str
    counterexample: tuple | None = None

    def to_json(self) -> dict:
        ce = None
        if self.counterexample is not None:
            i, j, want, got = self.counterexample
            ce = {"i": i, "j": j, "expected": str(want), "got": str(got)}
        return {"identity": self.identity, "window": self.window, "status": self.status, "counterexample": ce}


def _check(out: list, name: str, N: int, diff) -> None:
    out.append(Check(name, N, "fail" if diff else "pass", diff))


def check_brown(data: BrownData, N: int) -> list[Check]:
    """IsoPair laws, mutual orthogonality and the four sum/order relations."""
    out: list[Check] = []
    top = 2 * data.depth
    for i in range(1, top + 1):
        pair = IsoPair(data.u[i], data.v[i])
        d = pair.check(N)
        _check(out, f"u_{i} v_{i} u_{i} = u_{i}", N, next((c for nm, c in d if nm == "uvu = u"), None))
        _check(out, f"v_{i} u_{i} v_{i} = v_{i}", N, next((c for nm, c in d if nm == "vuv = v"), None))
    zero = _zero_lazy(data.ring)
    for i in range(1, top + 1):
        for j in range(1, top + 1):
            if i == j:
                continue
            _check(out, f"(u_{i}v_{i})(u_{j}v_{j}) = 0", N, equal_on(data.uv(i) * data.uv(j), zero, N))
            _check(out, f"(v_{i}u_{i})(v_{j}u_{j}) = 0", N, equal_on(data.vu(i) * data.vu(j), zero, N))
    for n in range(1, data.depth + 1):
        _check(out, f"Σ_(i≤{2*n-1}) u_i v_i = Q_{n}", N, equal_on(data.sum_uv(2 * n - 1), data.Q(n), N))
        _check(out, f"Σ_(i≤{2*n}) u_i v_i ≤ Q_{n+1}", N, leq_on(data.sum_uv(2 * n), data.Q(n + 1), N))
        _check(out, f"Σ_(i≤{2*n-1}) v_i u_i ≤ P_{n}", N, leq_on(data.sum_vu(2 * n - 1), data.P(n), N))
        _check(out, f"Σ_(i≤{2*n}) v_i u_i = P_{n}", N, equal_on(data.sum_vu(2 * n), data.P(n), N))
    return out


def check_wz(data: BrownData, N: int) -> list[Check]:
    """The ten w/z relations, plus Q_n ≤ Q_{n+1} and P_n ≤ P_{n+1}."""
    out: list[Check] = []
    top = 2 * data.depth
    w, z = data.w, data.z
    for n in range(1, top + 1):
        _check(out, f"w_{n} z_{n} w_{n} = w_{n}", N, equal_on(data.wz(n) * w(n), w(n), N))
        _check(out, f"z_{n} w_{n} z_{n} = z_{n}", N, equal_on(data.zw(n) * z(n), z(n), N))
    for n in range(1, top):
        _check(out, f"w_{n+1} z_{n} = w_{n} z_{n}", N, equal_on(w(n + 1) * z(n), data.wz(n), N))
        _check(out, f"w_{n} z_{n+1} = w_{n} z_{n}", N, equal_on(w(n) * z(n + 1), data.wz(n), N))
        _check(out, f"z_{n+1} w_{n} = z_{n} w_{n}", N, equal_on(z(n + 1) * w(n), data.zw(n), N))
        _check(out, f"z_{n} w_{n+1} = z_{n} w_{n}", N, equal_on(z(n) * w(n + 1), data.zw(n), N))
    for n in range(1, data.depth + 1):
        _check(out, f"w_{2*n-1} z_{2*n-1} = Q_{n}", N, equal_on(data.wz(2 * n - 1), data.Q(n), N))
        _check(out, f"z_{2*n} w_{2*n} = P_{n}", N, equal_on(data.zw(2 * n), data.P(n), N))
        _check(out, f"z_{2*n-1} w_{2*n-1} ≤ P_{n}", N, leq_on(data.zw(2 * n - 1), data.P(n), N))
        _check(out, f"w_{2*n} z_{2*n} ≤ Q_{n+1}", N, leq_on(data.wz(2 * n), data.Q(n + 1), N))
        _check(out, f"Q_{n} ≤ Q_{n+1}", N, leq_on(data.Q(n), data.Q(n + 1), N))
        _check(out, f"P_{n} ≤ P_{n+1}", N, leq_on(data.P(n), data.P(n + 1), N))
    return out


def random_sample(data: BrownData, rng: random.Random, sampler: Callable, n: int, N: int, corner: bool = False, entries: int = 3) -> GradedMatrix:
    """Random finite matrix supported on indices of N_1..N_n inside [1, N]."""
    idx = [i for i in range(1, N + 1) if data.block_of(i) <= n]
    out = {}
    for _ in range(rng.randint(1, entries)):
        i, j = rng.choice(idx), rng.choice(idx)
        a = sampler(rng)
        if corner:
            a = data.p * a * data.p
        if a:
            out[(i, j)] = a
    return GradedMatrix(data.ring, out)


def check_round_trips(data: BrownData, sampler: Callable, samples: int, seed: int, N: int) -> list[Check]:
    """ψ_n∘φ_n = i_n, φ_{n+1}∘ψ_n = j_n and grade preservation on samples."""
    rng = random.Random(seed)
    out: list[Check] = []
    iso = StabIso(data)
    fails = {"psi_phi": None, "phi_psi": None, "grade": None, "hom": None}
    counts = {k: 0 for k in fails}
    for s in range(samples):
        n = rng.randint(1, data.depth)
        x = random_sample(data, rng, sampler, n, N)
        got = data.psi(n, data.phi(n, x))
        counts["psi_phi"] += 1
        if got != x and fails["psi_phi"] is None:
            fails["psi_phi"] = _first_diff(got, x)
        if data.depth > 1:
            # φ_(n+1) must exist, so this check draws its own n < depth
            m = rng.randint(1, data.depth - 1)
            y = random_sample(data, rng, sampler, m, N, corner=True)
            got = data.phi(m + 1, data.psi(m, y))
            counts["phi_psi"] += 1
            if got != y and fails["phi_psi"] is None:
                fails["phi_psi"] = _first_diff(got, y)
        # homogeneous sample for grade preservation
        h = _homogeneous(x, rng)
        if h:
            counts["grade"] += 1
            img = iso.forward(h)
            if img and degree_of(img) != degree_of(h) and fails["grade"] is None:
                fails["grade"] = (0, 0, degree_of(h), degree_of(img))
        x2 = random_sample(data, rng, sampler, n, N)
        counts["hom"] += 1
        lhs = iso.forward(x * x2)
        rhs = iso.forward(x) * iso.forward(x2)
        if lhs != rhs and fails["hom"] is None:
            fails["hom"] = _first_diff(rhs, lhs)
    names = {
        "psi_phi": "ψ_n(φ_n(x)) = x",
        "phi_psi": "φ_(n+1)(ψ_n(y)) = y",
        "grade": "deg forward(x) = deg x",
        "hom": "forward(xy) = forward(x) forward(y)",
    }
    for k, name in names.items():
        out.append(Check(f"{name} [{counts[k]} samples]", N, "fail" if fails[k] else "pass", fails[k]))
    return out


def _homogeneous(x: GradedMatrix, rng: random.Random) -> GradedMatrix:
    parts = x.homogeneous_parts()
    if not parts:
        return x
    keys = sorted(parts)
    return parts[keys[rng.randrange(len(keys))]]


def _first_diff(got: GradedMatrix, want: GradedMatrix):
    for k in sorted(set(got.entries) | set(want.entries)):
        a, b = got.entries.get(k), want.entries.get(k)
        if a != b:
            z = got.ring.zero()
            return (k[0], k[1], b if b is not None else z, a if a is not None else z)
    return None


def verify_stabilization(
    ring,
    p,
    witness,
    depth: int,
    window: int,
    samples: int,
    seed: int = 0,
    sampler: Callable | None = None,
    corrupt: bool = False,
) -> list[Check]:
    data = brown_sequence(ring, p, witness, depth, corrupt=corrupt)
    report = check_brown(data, window) + check_wz(data, window)
    if samples and sampler is not None:
        report += check_round_trips(data, sampler, samples, seed, window)
    return report


def report_passed(report: list[Check]) -> bool:
    return all(c.status == "pass" for c in report)
