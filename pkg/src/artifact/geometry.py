"""Metric checks on finite samples: Gromov products, 0-hyperbolicity, directions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .lambda_values import HalfValue, from_lambda, half_value
from .ore import OreInstance

MAX_DEFECT_SAMPLE = 64


def gromov_product(ore: OreInstance, x, y, p=None) -> HalfValue:
    """``(x, y)_p = ½(d(x,p) + d(y,p) − d(x,y))``."""
    if p is None:
        p = ore.identity
    d = ore.distance
    return half_value(d(x, p) + d(y, p) - d(x, y), 2)


@dataclass
class DefectReport:
    size: int
    defect: HalfValue
    all_in_lambda: bool
    witness: Optional[tuple]  # indices (x, y, z) attaining the defect

    @property
    def certifies_tree(self) -> bool:
        return self.witness is None and self.all_in_lambda

    def as_dict(self) -> dict:
        return {"size": self.size, "defect": str(self.defect),
                "all_in_lambda": self.all_in_lambda,
                "witness": list(self.witness) if self.witness else None}


def hyperbolicity_defect(ore: OreInstance, sample: Sequence, p=None) -> DefectReport:
    """Largest ``min((x,z)_p, (y,z)_p) − (x,y)_p`` over all triples of the sample.

    A value ``≤ 0`` means the sample is 0-hyperbolic with respect to ``p``.
    The report also records whether every Gromov product is a whole value
    rather than a half.
    """
    pts = list(sample)
    if len(pts) > MAX_DEFECT_SAMPLE:
        raise ValueError(f"defect scans are capped at {MAX_DEFECT_SAMPLE} points, got {len(pts)}")
    if p is None:
        p = ore.identity
    zero = from_lambda(ore.length(ore.identity))
    k = len(pts)
    to_p = [ore.distance(x, p) for x in pts]
    gp = [[None] * k for _ in range(k)]
    all_in = True
    for i in range(k):
        for j in range(i, k):
            g = half_value(to_p[i] + to_p[j] - ore.distance(pts[i], pts[j]), 2)
            gp[i][j] = gp[j][i] = g
            if g.in_lambda() is None:
                all_in = False
    best, witness = zero, None
    for i in range(k):
        for j in range(k):
            xy = gp[i][j]
            for z in range(k):
                a, b = gp[i][z], gp[j][z]
                val = (a if a <= b else b) - xy
                if val > best:
                    best, witness = val, (i, j, z)
    return DefectReport(k, best, all_in, witness)


def direction_classes(ore: OreInstance, elements: Sequence) -> list:
    """Group elements by the transitive closure of ``f ∧ g ≠ id``.

    The number of classes is a lower bound for the valence at the identity.
    Classes are lists of indices into ``elements``, ordered by first index.
    """
    elems = list(elements)
    for i, f in enumerate(elems):
        if f == ore.identity:
            raise ValueError(f"element {i} is the identity, which has no direction")
    parent = list(range(len(elems)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if ore.meet(elems[i], elems[j]) != ore.identity:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict = {}
    for i in range(len(elems)):
        groups.setdefault(find(i), []).append(i)
    return [groups[r] for r in sorted(groups)]


def direction_graph_dot(ore: OreInstance, elements: Sequence) -> str:
    """DOT graph joining elements whose meet is not the identity."""
    elems = list(elements)
    classes = direction_classes(ore, elems)
    cls = {i: c for c, members in enumerate(classes) for i in members}
    lines = ["graph directions {"]
    for i, f in enumerate(elems):
        label = ore.format(f).replace('"', '\\"')
        lines.append(f'  e{i} [label="{label}", class={cls[i]}];')
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if ore.meet(elems[i], elems[j]) != ore.identity:
                lines.append(f"  e{i} -- e{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
