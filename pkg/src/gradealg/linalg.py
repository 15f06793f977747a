"""Sparse exact linear algebra on ``dict[int, scalar]`` vectors.

Pivoting is deterministic (the pivot of a row is its smallest index), so bases
produced here are reproducible.  Reduced echelon form is unique, which makes
the coordinates of a vector in a reduced basis simply its values at the pivot
positions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Vec = dict


def axpy(acc: dict, coeff, v: Mapping) -> None:
    """acc += coeff * v, dropping zeros."""
    for k, c in v.items():
        s = acc.get(k)
        s = coeff * c if s is None else s + coeff * c
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def scale(coeff, v: Mapping) -> dict:
    if not coeff:
        return {}
    return {k: coeff * c for k, c in v.items()}


def _inverse(c):
    # plain ints (e.g. the 1 seeded by nullspace) must not become floats
    return Fraction(1, c) if isinstance(c, int) else 1 / c


def clean(v: Mapping) -> dict:
    return {k: c for k, c in v.items() if c}


class Echelon:
    """Incrementally maintained echelon basis of a subspace.

    Rows are kept normalized (pivot coefficient 1).  With ``track=True`` every
    row also records its expression in terms of the labels of the vectors that
    were inserted, which is what solving ``target = sum c_i v_i`` needs.
    """

    def __init__(self, track: bool = False):
        self.rows: dict = {}
        self.combos: dict = {}
        self.track = track
        self._order: list = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Mapping, combo: dict | None = None) -> dict:
        v = dict(v)
        for piv in sorted(self.rows):
            c = v.get(piv)
            if c:
                axpy(v, -c, self.rows[piv])
                if combo is not None:
                    axpy(combo, -c, self.combos[piv])
        return v

    def add(self, v: Mapping, label: Hashable | None = None) -> bool:
        combo = {label: 1} if self.track else None
        r = self.reduce(v, combo)
        if not r:
            return False
        piv = min(r)
        inv = _inverse(r[piv])
        self.rows[piv] = scale(inv, r)
        if self.track:
            self.combos[piv] = scale(inv, combo)
        self._order.append(piv)
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def express(self, v: Mapping) -> dict | None:
        """Coefficients over inserted labels with sum = v, or None."""
        if not self.track:
            raise ValueError("express() needs track=True")
        combo: dict = {}
        r = self.reduce(v, combo)
        if r:
            return None
        return {k: -c for k, c in combo.items() if c}

    def pivots(self) -> list:
        return sorted(self.rows)


def rref(vectors: Iterable[Mapping]) -> list[tuple[Hashable, dict]]:
    """Fully reduced row echelon basis of span(vectors), sorted by pivot."""
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    pivots = sorted(ech.rows)
    rows = {p: dict(ech.rows[p]) for p in pivots}
    # back substitution: clear each pivot column from the other rows
    for p in reversed(pivots):
        for q in pivots:
            if q != p:
                c = rows[q].get(p)
                if c:
                    axpy(rows[q], -c, rows[p])
    return [(p, rows[p]) for p in pivots]


def rank(vectors: Iterable[Mapping]) -> int:
    ech = Echelon()
    n = 0
    for v in vectors:
        n += ech.add(v)
    return n


def nullspace(rows: Iterable[Mapping], ncols: int) -> list[dict]:
    """Basis of {x : r . x = 0 for all rows r}, x indexed by 0..ncols-1."""
    basis = rref(rows)
    pivots = [p for p, _ in basis]
    pivset = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = {free: 1}
        for p, r in basis:
            c = r.get(free)
            if c:
                x[p] = -c
        out.append(x)
    return out


def solve(columns: list[Mapping], target: Mapping) -> dict | None:
    """Find c with sum_i c[i] columns[i] = target, or None."""
    ech = Echelon(track=True)
    for i, col in enumerate(columns):
        ech.add(col, i)
    return ech.express(target)
