"""Piecewise constant maps into a label system, as an ore.

An element is a canonical tuple of ``(length, label)`` blocks: no empty
blocks and no equal neighbours.  Concatenation shifts the labels of the
right factor by ``-ℓ(f)``; inversion reverses, stars and shifts by
``-ℓ(f)``.  Admissibility is decided by walking outward from every point
where a reflection could start.
"""

from __future__ import annotations

import enum
from typing import Iterable, Optional, Sequence

from .labels import CosetSystem, LabelSystem
from .lambda_values import (
    LambdaGroup,
    LambdaValue,
    format_value,
    is_positive,
    is_zero,
    parse_value,
)
from .ore import OreInstance


class SegmentError(ValueError):
    pass


class SegmentElement:
    """A canonical block list over a fixed label system."""

    __slots__ = ("blocks", "system", "_length", "_hash")

    def __init__(self, blocks: tuple, system: LabelSystem, length: Optional[LambdaValue] = None):
        self.blocks = blocks
        self.system = system
        if length is None:
            length = system.lam.zero
            for l, _ in blocks:
                length = length + l
        self._length = length
        self._hash = None

    @property
    def length(self) -> LambdaValue:
        return self._length

    def __eq__(self, other) -> bool:
        if not isinstance(other, SegmentElement):
            return NotImplemented
        return self.blocks == other.blocks and (self.system is other.system or self.system == other.system)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.blocks)
        return self._hash

    def __len__(self) -> int:
        return len(self.blocks)

    def __repr__(self) -> str:
        return f"SegmentElement({format_segment(self)})"

    def __str__(self) -> str:
        return format_segment(self)

    @property
    def is_identity(self) -> bool:
        return not self.blocks


def canonicalize(blocks: Iterable, system: LabelSystem) -> SegmentElement:
    """Drop zero blocks and merge equal neighbours."""
    out: list = []
    for length, label in blocks:
        if is_zero(length):
            continue
        if not is_positive(length):
            raise SegmentError(f"negative block length {format_value(length)}")
        if out and out[-1][1] == label:
            out[-1] = (out[-1][0] + length, label)
        else:
            out.append((length, label))
    return SegmentElement(tuple(out), system)


def _check_same(f: SegmentElement, g: SegmentElement) -> None:
    if f.system is not g.system and f.system != g.system:
        raise SegmentError(f"label systems differ: {f.system!r} vs {g.system!r}")


def seg_concat(f: SegmentElement, g: SegmentElement) -> SegmentElement:
    _check_same(f, g)
    if not g.blocks:
        return f
    if not f.blocks:
        return g
    shift = -f.length
    act = f.system.act
    moved = [(l, act(shift, x)) for l, x in g.blocks]
    blocks = list(f.blocks)
    if blocks[-1][1] == moved[0][1]:
        blocks[-1] = (blocks[-1][0] + moved[0][0], moved[0][1])
        moved = moved[1:]
    return SegmentElement(tuple(blocks + moved), f.system, f.length + g.length)


def seg_invert(f: SegmentElement) -> SegmentElement:
    if not f.blocks:
        return f
    shift = -f.length
    S = f.system
    return SegmentElement(tuple((l, S.act(shift, S.star(x))) for l, x in reversed(f.blocks)),
                          S, f.length)


def seg_meet(f: SegmentElement, g: SegmentElement) -> SegmentElement:
    """Longest common prefix."""
    _check_same(f, g)
    out = []
    for (lf, xf), (lg, xg) in zip(f.blocks, g.blocks):
        if xf != xg:
            break
        if lf == lg:
            out.append((lf, xf))
            continue
        out.append((min(lf, lg), xf))
        break
    return SegmentElement(tuple(out), f.system)


def restrict(f: SegmentElement, t: LambdaValue) -> tuple:
    """Split ``f = p □ s`` with ``ℓ(p) = t``; suffix labels shift by ``t``."""
    S = f.system
    if t < S.lam.zero or t > f.length:
        raise SegmentError(f"cut point {format_value(t)} outside [0, {format_value(f.length)}]")
    prefix, suffix = [], []
    pos = S.lam.zero
    for l, x in f.blocks:
        end = pos + l
        if end <= t:
            prefix.append((l, x))
        elif pos >= t:
            suffix.append((l, S.act(t, x)))
        else:
            prefix.append((t - pos, x))
            suffix.append((end - t, S.act(t, x)))
        pos = end
    return (SegmentElement(tuple(prefix), S, t),
            SegmentElement(tuple(suffix), S, f.length - t))


def strip_prefix(y: SegmentElement, x: SegmentElement) -> SegmentElement:
    return restrict(y, x.length)[1]


def _upper_bound(f: SegmentElement, g: SegmentElement) -> Optional[SegmentElement]:
    m = seg_meet(f, g)
    if m == f:
        return g
    if m == g:
        return f
    return None


# ---------------------------------------------------------------------------
# reflections


def positions(f: SegmentElement) -> list:
    """Block start positions followed by the total length."""
    out = [f.system.lam.zero]
    for l, _ in f.blocks:
        out.append(out[-1] + l)
    return out


def reflection_walk(blocks, left: int, left_rem, right: int, right_rem, match) -> LambdaValue:
    """Largest ``σ`` such that ``match(L, R)`` holds on the mirrored stretch.

    The walk starts with ``left_rem`` of block ``left`` to the left of the
    centre and ``right_rem`` of block ``right`` to its right, then moves
    outward one block at a time.
    """
    sigma = None
    n = len(blocks)
    while left >= 0 and right < n and match(blocks[left][1], blocks[right][1]):
        step = min(left_rem, right_rem)
        sigma = step if sigma is None else sigma + step
        left_rem = left_rem - step
        right_rem = right_rem - step
        if is_zero(left_rem):
            left -= 1
            if left >= 0:
                left_rem = blocks[left][0]
        if is_zero(right_rem):
            right += 1
            if right < n:
                right_rem = blocks[right][0]
    return sigma


def reducible_points(f: SegmentElement, first_only: bool = False) -> list:
    """All centres ``t`` of reflective cancellations with their maximal ``σ``.

    Under the anti twist a cancellation centred at ``t`` means
    ``f*(t-ε) = 2t·f(t+ε)`` for all small ``ε``.
    """
    S = f.system
    blocks = f.blocks
    pos = positions(f)
    out = []
    for i in range(len(blocks)):
        # interior centres of block i
        lo, hi = pos[i], pos[i + 1]
        for t in S.reflection_centers(blocks[i][1], lo, hi):
            two_t = t + t
            sigma = reflection_walk(blocks, i, t - lo, i, hi - t,
                                    lambda a, b, s=two_t: S.star(a) == S.act(s, b))
            if sigma is not None:
                out.append((t, sigma))
                if first_only:
                    return out
        # the breakpoint at the end of block i
        if i + 1 < len(blocks):
            t = pos[i + 1]
            two_t = t + t
            sigma = reflection_walk(blocks, i, blocks[i][0], i + 1, blocks[i + 1][0],
                                    lambda a, b, s=two_t: S.star(a) == S.act(s, b))
            if sigma is not None:
                out.append((t, sigma))
                if first_only:
                    return out
    return out


def seg_is_admissible(f: SegmentElement) -> bool:
    return not reducible_points(f, first_only=True)


# ---------------------------------------------------------------------------
# axes


class AxisStatus(enum.Enum):
    ON_AXIS_STABILIZING = "OnAxisStabilizing"
    ON_AXIS_NOT_STABILIZING = "OnAxisNotStabilizing"
    OFF_AXIS = "OffAxis"


def constant_image(f: SegmentElement):
    return f.blocks[0][1] if len(f.blocks) == 1 else None


def axis_stabilizer_check(f: SegmentElement, x) -> AxisStatus:
    """Where ``f`` sits relative to the standard axis through ``x``."""
    S = f.system
    if S.same_orbit_as_star(x):
        raise SegmentError("standard axes need x* outside the orbit of x")
    if f.is_identity:
        return AxisStatus.ON_AXIS_STABILIZING
    image = constant_image(f)
    if image not in (x, S.star(x)):
        return AxisStatus.OFF_AXIS
    if S.stab_contains(x, f.length):
        return AxisStatus.ON_AXIS_STABILIZING
    return AxisStatus.ON_AXIS_NOT_STABILIZING


def axis_coordinate(f: SegmentElement, x) -> LambdaValue:
    """Signed position on the axis through ``x``: ``+ℓ`` on the x side."""
    image = constant_image(f)
    if f.is_identity:
        return f.system.lam.zero
    if image == x:
        return f.length
    if image == f.system.star(x):
        return -f.length
    raise SegmentError("element is not on the axis")


# ---------------------------------------------------------------------------
# the ore


def segment_ops(system: LabelSystem) -> OreInstance:
    identity = SegmentElement((), system)
    return OreInstance(
        name=f"segment[{system!r}]",
        identity=identity,
        meet=seg_meet,
        concat=seg_concat,
        invert=seg_invert,
        is_admissible=seg_is_admissible,
        length=lambda f: f.length,
        strip_prefix=strip_prefix,
        upper_bound=_upper_bound,
        format=format_segment,
    )


def lambda_tree_instance(lam: LambdaGroup, H: Sequence = (), single_copy: bool = False) -> OreInstance:
    """The ore over ``Λ/H`` with a primed copy (or one self-starred copy)."""
    return segment_ops(CosetSystem(lam, H, primed=not single_copy))


def element(system: LabelSystem, blocks: Iterable) -> SegmentElement:
    """Build an element from ``(length, label)`` pairs, coercing lengths."""
    lam = system.lam
    return canonicalize(((lam.coerce(l), system.check_label(x)) for l, x in blocks), system)


# ---------------------------------------------------------------------------
# text form


def split_top_level(text: str, sep: str) -> list:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_segment(text: str, system: LabelSystem) -> SegmentElement:
    """Parse ``[len:label, len:label, ...]``; ``id`` and ``[]`` are the identity."""
    text = text.strip()
    if text == "id":
        return SegmentElement((), system)
    if not (text.startswith("[") and text.endswith("]")):
        raise SegmentError(f"segment literal must be bracketed: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return SegmentElement((), system)
    blocks = []
    for part in split_top_level(body, ","):
        pieces = split_top_level(part, ":")
        if len(pieces) < 2:
            raise SegmentError(f"block needs length:label, got {part.strip()!r}")
        length = system.lam.coerce(parse_value(pieces[0]))
        label = system.parse_label(":".join(pieces[1:]))
        blocks.append((length, label))
    return canonicalize(blocks, system)


def format_segment(f: SegmentElement) -> str:
    if not f.blocks:
        return "id"
    fmt = f.system.format_label
    return "[" + ", ".join(f"{format_value(l)}:{fmt(x)}" for l, x in f.blocks) + "]"
