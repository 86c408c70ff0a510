"""Finitely generated subgroups of Q^d and canonical coset representatives.

A subgroup ``H`` given by generators is scaled by the common denominator of
its generators to an integer lattice, which is brought to row echelon
Hermite normal form.  Reducing a vector against the echelon rows gives a
representative of ``v + H`` that depends only on the coset, which decides
both coset equality and membership.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, lcm
from typing import Sequence

Vector = tuple


def hermite_rows(vectors: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Row echelon Hermite normal form of the lattice spanned by ``vectors``.

    Each returned row has a positive pivot strictly to the right of the
    previous row's pivot, and entries above a pivot are reduced into
    ``[0, pivot)``.  Zero rows are dropped.
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    out: list[list[int]] = []
    col = 0
    while rows and col < dim:
        live = [r for r in rows if r[col] != 0]
        if not live:
            col += 1
            continue
        dead = [r for r in rows if r[col] == 0]
        # Euclid on the column until one row carries the gcd.
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            rest = []
            for r in live[1:]:
                q = r[col] // pivot[col]
                r = [a - q * b for a, b in zip(r, pivot)]
                if r[col] != 0:
                    rest.append(r)
                elif any(r):
                    dead.append(r)
            live = [pivot] + rest
        pivot = live[0]
        if pivot[col] < 0:
            pivot = [-a for a in pivot]
        out.append(pivot)
        rows = dead
        col += 1
    for i, row in enumerate(out):
        c = _pivot_col(row)
        for j in range(i):
            q = out[j][c] // row[c]
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], row)]
    return out


def _pivot_col(row: Sequence[int]) -> int:
    for i, a in enumerate(row):
        if a != 0:
            return i
    raise ValueError("zero row has no pivot")


class SubgroupLattice:
    """A finitely generated subgroup of Q^d (or Z^d) with exact membership."""

    def __init__(self, generators: Sequence[Sequence], dim: int):
        self.dim = dim
        gens = [tuple(Fraction(c) for c in g) for g in generators]
        for g in gens:
            if len(g) != dim:
                raise ValueError(f"generator {g} does not have {dim} coordinates")
        self.generators = tuple(gens)
        self.scale = lcm(1, *(c.denominator for g in gens for c in g))
        scaled = [[int(c * self.scale) for c in g] for g in gens]
        self.rows = hermite_rows(scaled, dim)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence) -> tuple:
        """Canonical representative of ``v + H`` (exact rationals)."""
        w = [Fraction(c) * self.scale for c in v]
        for row in self.rows:
            c = _pivot_col(row)
            q = floor(w[c] / row[c])
            if q:
                w = [a - q * b for a, b in zip(w, row)]
        return tuple(a / self.scale for a in w)

    def contains(self, v: Sequence) -> bool:
        return all(c == 0 for c in self.reduce(v))

    def __repr__(self) -> str:
        return f"SubgroupLattice({[list(map(str, g)) for g in self.generators]}, dim={self.dim})"
