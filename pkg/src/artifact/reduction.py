"""Finite-stage reduction: excise reflective cancellations until admissible.

A raw block list is read as the concatenation of its constant blocks.
Reducing at a centre ``t`` with maximal half-width ``σ`` removes
``[t-σ, t+σ]``, which is a factor ``b □ b⁻¹``, and glues the two remaining
pieces with ``□``.  The end result does not depend on the order in which
centres are processed; :func:`fold_oracle` computes the same element by
multiplying the lifted blocks in the extracted group.
"""

from __future__ import annotations

from dataclasses import dataclass
from .lambda_values import LambdaValue, format_value
from .segments import (
    SegmentElement,
    positions,
    reducible_points,
    restrict,
    seg_concat,
    segment_ops,
)


class NotReducibleError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionStep:
    center: LambdaValue
    sigma: LambdaValue

    @property
    def interval(self) -> tuple:
        return (self.center - self.sigma, self.center + self.sigma)


def find_reducible_points(f: SegmentElement) -> list:
    """``(t, σ_max)`` for every centre of a reflective cancellation."""
    return reducible_points(f)


def _excise(f: SegmentElement, t: LambdaValue, sigma: LambdaValue) -> SegmentElement:
    head, rest = restrict(f, t - sigma)
    _, tail = restrict(rest, sigma + sigma)
    return seg_concat(head, tail)


def reduce_at(f: SegmentElement, t: LambdaValue) -> SegmentElement:
    for center, sigma in reducible_points(f):
        if center == t:
            return _excise(f, t, sigma)
    raise NotReducibleError(f"{f} is not reducible at {format_value(t)}")


def reduce_with_steps(f: SegmentElement, rng=None) -> tuple:
    """Reduce to an admissible element, returning it with the steps taken.

    Without ``rng`` the leftmost centre is always chosen; with a
    ``random.Random`` the centre is chosen at random at every step.
    """
    steps = []
    while True:
        points = reducible_points(f)
        if not points:
            return f, steps
        t, sigma = points[0] if rng is None else rng.choice(points)
        steps.append(ReductionStep(t, sigma))
        f = _excise(f, t, sigma)


def reduce(f: SegmentElement, rng=None) -> SegmentElement:
    return reduce_with_steps(f, rng)[0]


def lifted_blocks(f: SegmentElement) -> list:
    """The constant blocks of ``f`` as admissible elements, in order.

    A block starting at ``s`` with label ``x`` lifts to the constant element
    with label ``s·x``.  Blocks that are themselves reducible (only possible
    when ``x*`` is in the orbit of ``x``) are cut at their centres.
    """
    S = f.system
    pos = positions(f)
    out = []
    for (length, label), start in zip(f.blocks, pos):
        piece = SegmentElement(((length, S.act(start, label)),), S, length)
        cuts = S.reflection_centers(piece.blocks[0][1], S.lam.zero, length)
        prev = S.lam.zero
        for c in list(cuts) + [length]:
            head, _ = restrict(piece, c)
            _, part = restrict(head, prev)
            out.append(part)
            prev = c
    return out


def fold_oracle(f: SegmentElement) -> SegmentElement:
    """Multiply the lifted blocks of ``f`` left to right in the group."""
    ore = segment_ops(f.system)
    out = ore.identity
    for piece in lifted_blocks(f):
        out = ore.star(out, piece)
    return out
