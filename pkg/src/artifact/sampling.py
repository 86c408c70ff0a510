"""Seeded random elements for the property suites.

Every sampler draws from a ``random.Random`` passed in by the caller, so a
seed fixes the whole stream.  Roughly half of the draws extend a prefix of
an earlier draw, which keeps meets, joins and medians non-trivial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .labels import AtomSystem, CosetSystem, LabelSystem
from .lambda_values import QQ, ZZ, ZZ2, LambdaGroup
from .ore import OreInstance
from .products import (
    FactorSystem,
    ProductElement,
    ProductSystem,
    factor_is_admissible,
    irreducible_instance,
    prod_concat,
    prod_invert,
    product_ops,
    supported_on,
    zero_signed_extension,
)
from .segments import (
    SegmentElement,
    canonicalize,
    positions,
    reducible_points,
    restrict,
    seg_concat,
    seg_invert,
    seg_is_admissible,
    segment_ops,
)
from .words import word_ops

MAX_WORD_LENGTH = 8


def random_length(rng: random.Random, lam: LambdaGroup):
    if lam is ZZ or lam.name == "Z":
        return rng.randint(1, 3)
    if lam.name == "Q":
        return Fraction(rng.randint(1, 6), rng.choice((1, 2, 3)))
    scalar = (lambda lo, hi: rng.randint(lo, hi)) if lam.name == "Z2" else (
        lambda lo, hi: Fraction(rng.randint(2 * lo, 2 * hi), 2))
    if rng.random() < 0.6:
        first, second = 0, scalar(1, 3)
        if second == 0:
            second = 1
    else:
        first, second = 1, scalar(-2, 2)
    return lam.from_components((first, second))


# ---------------------------------------------------------------------------
# words


def random_word(rng: random.Random, generators: Sequence[str], max_len: int = MAX_WORD_LENGTH) -> tuple:
    return tuple((rng.choice(generators), rng.choice((1, -1))) for _ in range(rng.randint(0, max_len)))


def _extend_word(rng, generators, w: tuple, max_len: int = MAX_WORD_LENGTH) -> tuple:
    cut = rng.randint(0, len(w))
    tail = random_word(rng, generators, max_len - cut)
    return (w[:cut] + tail)[:max_len]


# ---------------------------------------------------------------------------
# segments


def random_segment(rng: random.Random, system: LabelSystem, max_blocks: int = 3) -> SegmentElement:
    blocks = [(random_length(rng, system.lam), system.random_label(rng))
              for _ in range(rng.randint(0, max_blocks))]
    return canonicalize(blocks, system)


def _cut_points(f: SegmentElement) -> list:
    pos = positions(f)
    pts = list(pos[1:])
    if f.system.lam.divisible and f.system.lam.dim == 1:
        pts += [pos[i] + l / 2 for i, (l, _) in enumerate(f.blocks)]
    return pts


def _extend_segment(rng, system, f: SegmentElement, max_blocks: int = 3) -> SegmentElement:
    pts = _cut_points(f)
    head = restrict(f, rng.choice(pts))[0] if pts else f
    return seg_concat(head, random_segment(rng, system, max_blocks))


def admissible_segment(rng, system, max_blocks: int = 3) -> SegmentElement:
    while True:
        f = random_segment(rng, system, max_blocks)
        if seg_is_admissible(f):
            return f


def inadmissible_segment(rng: random.Random, system: LabelSystem, max_blocks: int = 8) -> SegmentElement:
    """A block list with at least one reflective cancellation and ``≤ max_blocks`` blocks.

    Built as ``a □ b □ b⁻¹ □ c`` (sometimes nested twice) from admissible
    pieces, so the cancellation is guaranteed.
    """
    while True:
        a = admissible_segment(rng, system, 2)
        b = admissible_segment(rng, system, 2)
        if b.is_identity:
            continue
        c = admissible_segment(rng, system, 2)
        mid = seg_concat(b, seg_invert(b))
        if rng.random() < 0.3:
            d = admissible_segment(rng, system, 1)
            mid = seg_concat(seg_concat(d, mid), seg_invert(d))
        f = seg_concat(seg_concat(a, mid), c)
        if len(f.blocks) <= max_blocks and reducible_points(f, first_only=True):
            return f


# ---------------------------------------------------------------------------
# products


def random_factor(rng, fs: FactorSystem, max_blocks: int = 2) -> SegmentElement:
    blocks = [(Fraction(rng.randint(1, 4), rng.choice((1, 2))), fs.random_label(rng))
              for _ in range(rng.randint(0, max_blocks))]
    return canonicalize(blocks, fs)


def random_product(rng, system: ProductSystem, max_blocks: int = 2) -> ProductElement:
    return ProductElement(tuple(random_factor(rng, fs, max_blocks) for fs in system.factors), system)


def _factor_prefix(f: SegmentElement, t: Fraction) -> SegmentElement:
    out, pos = [], Fraction(0)
    for l, x in f.blocks:
        if pos >= t:
            break
        out.append((min(l, t - pos), x))
        pos += l
    return SegmentElement(tuple(out), f.system)


def _extend_product(rng, system, f: ProductElement, max_blocks: int = 2) -> ProductElement:
    head = []
    for fn in f.factors:
        pts = [Fraction(0)] + [p for p in positions(fn)[1:]] + [fn.length / 2]
        head.append(_factor_prefix(fn, rng.choice(pts)))
    return prod_concat(ProductElement(tuple(head), system), random_product(rng, system, max_blocks))


def admissible_product(rng, system: ProductSystem, ore: Optional[OreInstance] = None,
                       max_blocks: int = 2) -> ProductElement:
    ore = ore or product_ops(system)
    while True:
        f = random_product(rng, system, max_blocks)
        if ore.is_admissible(f):
            return f


def unit_on(system: ProductSystem, i: int, length: Fraction = Fraction(1), value=0,
            starred: bool = False) -> ProductElement:
    fs = system.factors[i]
    return supported_on(system, i, SegmentElement(((Fraction(length), fs.label(value, starred)),), fs))


def zero_signed_sample(rng, system: ProductSystem, i: int, ore: Optional[OreInstance] = None) -> ProductElement:
    """A random admissible ``h`` with ``τ(h)_i = 0``.

    Products under ``⋆`` of zero-signed extensions in factor ``i``, elements
    supported on other factors and their inverses; ``τ`` is additive, so the
    ``i``-th signed length stays zero.
    """
    ore = ore or product_ops(system)
    h = ore.identity
    for _ in range(rng.randint(1, 3)):
        kind = rng.random()
        if kind < 0.5:
            fs = system.factors[i]
            f = canonicalize([(Fraction(rng.randint(1, 2), rng.choice((1, 2))), fs.random_label(rng))
                              for _ in range(rng.randint(1, 2))], fs)
            if not factor_is_admissible(f):
                continue
            piece = zero_signed_extension(system, i, f)
        else:
            j = rng.choice([n for n in range(system.size) if n != i])
            piece = supported_on(system, j, random_factor(rng, system.factors[j], 1))
            if not ore.is_admissible(piece):
                continue
        if rng.random() < 0.5:
            piece = prod_invert(piece)
        h = ore.star(h, piece)
    return h


# ---------------------------------------------------------------------------
# named instances


@dataclass
class SampledInstance:
    """An ore with a random source of elements and a prefix-sharing extender."""

    name: str
    ore: OreInstance
    draw: Callable
    extend: Callable

    def samples(self, rng: random.Random, count: int, admissible: bool = False) -> list:
        out: list = []
        while len(out) < count:
            if out and rng.random() < 0.5:
                f = self.extend(rng, rng.choice(out))
            else:
                f = self.draw(rng)
            if admissible and not self.ore.is_admissible(f):
                continue
            out.append(f)
        return out


def word_instance(generators: Sequence[str]) -> SampledInstance:
    gens = tuple(generators)
    return SampledInstance(f"word-{len(gens)}", word_ops(gens),
                           lambda rng: random_word(rng, gens),
                           lambda rng, w: _extend_word(rng, gens, w))


def segment_instance(name: str, system: LabelSystem, max_blocks: int = 3) -> SampledInstance:
    return SampledInstance(name, segment_ops(system),
                           lambda rng: random_segment(rng, system, max_blocks),
                           lambda rng, f: _extend_segment(rng, system, f, max_blocks))


def product_instance(name: str, system: ProductSystem, max_blocks: int = 2) -> SampledInstance:
    return SampledInstance(name, product_ops(system),
                           lambda rng: random_product(rng, system, max_blocks),
                           lambda rng, f: _extend_product(rng, system, f, max_blocks))


def product_system_n2() -> ProductSystem:
    return ProductSystem([FactorSystem([1]), FactorSystem([Fraction(1, 2)])])


def product_system_n3() -> ProductSystem:
    return ProductSystem([FactorSystem([1]), FactorSystem([Fraction(1, 3)]), FactorSystem()],
                         [[1, 0, 1], [0, 1, 0], [2, 0, 1]])


def standard_instances() -> dict:
    """The instances exercised by the acceptance suites, by name."""
    out = [
        word_instance(["a"]),
        word_instance(["a", "b"]),
        word_instance(["a", "b", "c"]),
        segment_instance("coset-Q/Z", CosetSystem(QQ, [1])),
        segment_instance("atoms-4", AtomSystem.with_valence(4)),
        segment_instance("tree-Z", CosetSystem(ZZ)),
        segment_instance("tree-Z2lex", CosetSystem(ZZ2)),
        product_instance("product-2", product_system_n2()),
        product_instance("product-3", product_system_n3()),
        product_instance("product-crossed", irreducible_instance()),
    ]
    return {inst.name: inst for inst in out}
