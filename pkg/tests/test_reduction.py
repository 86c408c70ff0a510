import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.labels import AtomSystem, CosetSystem
from artifact.lambda_values import QQ, ZZ
from artifact.reduction import (
    NotReducibleError,
    find_reducible_points,
    fold_oracle,
    lifted_blocks,
    reduce,
    reduce_at,
    reduce_with_steps,
)
from artifact.sampling import admissible_segment, inadmissible_segment, random_segment
from artifact.segments import format_segment, parse_segment, seg_concat, seg_invert, seg_is_admissible, segment_ops

QZ = CosetSystem(QQ, [1])
SYSTEMS = {
    "Q/Z": QZ,
    "Q/<1/3>": CosetSystem(QQ, [Fraction(1, 3)]),
    "atoms-4": AtomSystem.with_valence(4),
    "Z": CosetSystem(ZZ),
    "Z single copy": CosetSystem(ZZ, [1], primed=False),
}
seeds = st.integers(0, 2**32 - 1)
system_names = st.sampled_from(sorted(SYSTEMS))


def s(text, system=QZ):
    return parse_segment(text, system)


@pytest.mark.parametrize(
    "f, points",
    [
        ("[3/2:1/3+H]", []),
        ("[1:0+H, 1:(0+H)']", [(1, 1)]),
        ("[1:0+H, 1/2:(0+H)', 1:1/2+H]", [(1, Fraction(1, 2))]),
    ],
)
def test_find_reducible_points(f, points):
    assert find_reducible_points(s(f)) == points


@pytest.mark.parametrize(
    "f, t, expected",
    [
        ("[1:0+H, 1:(0+H)']", 1, "id"),
        ("[1:0+H, 1/2:(0+H)', 1:1/2+H]", 1, "[1/2:0+H, 1:1/2+H]"),
    ],
)
def test_reduce_at(f, t, expected):
    assert format_segment(reduce_at(s(f), Fraction(t))) == expected


def test_reduce_at_rejects_admissible_points():
    with pytest.raises(NotReducibleError):
        reduce_at(s("[1:0+H, 1:1/2+H]"), Fraction(1))


@pytest.mark.parametrize(
    "f, expected",
    [
        ("[2:1/2+H]", "[2:1/2+H]"),
        ("[1:0+H, 1:(0+H)']", "id"),
        ("[1:0+H, 1/2:(0+H)', 1:1/2+H]", "[1/2:0+H, 1:1/2+H]"),
    ],
)
def test_reduce(f, expected):
    assert format_segment(reduce(s(f))) == expected
    assert fold_oracle(s(f)) == reduce(s(f))


def test_lifted_blocks_are_constants():
    pieces = lifted_blocks(s("[1:0+H, 1/2:(0+H)', 1:1/2+H]"))
    assert all(len(p.blocks) == 1 and seg_is_admissible(p) for p in pieces)
    assert len(pieces) == 3


def test_steps_record_the_excised_widths():
    red, steps = reduce_with_steps(s("[1:0+H, 1:(0+H)']"))
    assert red.is_identity
    assert [(st_.center, st_.sigma) for st_ in steps] == [(1, 1)]
    assert steps[0].interval == (0, 2)


@given(system_names, seeds)
def test_cancelling_a_suffix_returns_the_prefix(name, seed):
    rng, system = random.Random(seed), SYSTEMS[name]
    f, g = admissible_segment(rng, system), admissible_segment(rng, system)
    if g.is_identity:
        return
    raw = seg_concat(seg_concat(f, g), seg_invert(g))
    assert reduce(raw) == segment_ops(system).star(f, segment_ops(system).star(g, seg_invert(g)))
    assert reduce(raw) == f


@given(system_names, seeds)
def test_reduction_is_an_order_independent_retraction(name, seed):
    rng, system = random.Random(seed), SYSTEMS[name]
    f = inadmissible_segment(rng, system)
    red = reduce(f)
    assert seg_is_admissible(red)
    assert reduce(red) == red
    assert all(reduce(f, rng=random.Random(seed + k)) == red for k in range(5))
    assert fold_oracle(f) == red


@given(system_names, seeds)
def test_reduction_is_a_homomorphism_to_the_group(name, seed):
    rng, system = random.Random(seed), SYSTEMS[name]
    ore = segment_ops(system)
    f = inadmissible_segment(rng, system)
    g = random_segment(rng, system)
    assert reduce(seg_concat(f, g)) == ore.star(reduce(f), reduce(g))
    assert reduce(seg_invert(f)) == ore.invert(reduce(f))
