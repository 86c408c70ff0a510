import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.labels import AtomSystem, CosetSystem, LabelError, system_from_config
from artifact.lambda_values import QQ, ZZ, ZZ2, Lex
from artifact.ore import check_ore_axioms
from artifact.sampling import admissible_segment, random_length, random_segment, segment_instance
from artifact.segments import (
    AxisStatus,
    SegmentError,
    axis_coordinate,
    axis_stabilizer_check,
    canonicalize,
    format_segment,
    lambda_tree_instance,
    parse_segment,
    restrict,
    seg_concat,
    seg_invert,
    seg_is_admissible,
    seg_meet,
    segment_ops,
)

QZ = CosetSystem(QQ, [1])
Q3 = CosetSystem(QQ, [Fraction(1, 3)])
ATOMS = AtomSystem.with_valence(4)
SYSTEMS = {"Q/Z": QZ, "Q/<1/3>": Q3, "atoms-4": ATOMS, "atoms-6": AtomSystem.with_valence(6),
           "Z": CosetSystem(ZZ), "Z2lex": CosetSystem(ZZ2)}
seeds = st.integers(0, 2**32 - 1)
system_names = st.sampled_from(sorted(SYSTEMS))


def s(text, system=QZ):
    return parse_segment(text, system)


def label(text, system=QZ):
    return system.parse_label(text)


# -- block lists -----------------------------------------------------------


@pytest.mark.parametrize(
    "blocks, expected",
    [
        ([(1, "0+H"), (0, "1/2+H"), (2, "0+H")], "[3:0+H]"),
        ([], "id"),
        ([(1, "0+H"), (1, "1/2+H")], "[1:0+H, 1:1/2+H]"),
    ],
)
def test_canonicalize(blocks, expected):
    f = canonicalize([(Fraction(l), label(x)) for l, x in blocks], QZ)
    assert format_segment(f) == expected


def test_canonicalize_rejects_negative_length():
    with pytest.raises(SegmentError):
        canonicalize([(Fraction(-1), label("0+H"))], QZ)


@pytest.mark.parametrize(
    "f, g, expected",
    [
        ("[1:0+H]", "[1:1/2+H]", "[1:0+H, 1:1/2+H]"),
        ("[1:0+H, 1/2:1/3+H]", "id", "[1:0+H, 1/2:1/3+H]"),
        ("[1:0+H]", "[1:0+H]", "[2:0+H]"),
        ("[1/2:0+H]", "[1:0+H]", "[1/2:0+H, 1:1/2+H]"),
    ],
)
def test_concat(f, g, expected):
    assert format_segment(seg_concat(s(f), s(g))) == expected


@pytest.mark.parametrize(
    "f, expected",
    [("id", "id"), ("[1:0+H]", "[1:(0+H)']"), ("[1/2:0+H]", "[1/2:(1/2+H)']"),
     ("[1:0+H, 1/2:1/3+H]", "[1/2:(1/6+H)', 1:(1/2+H)']")],
)
def test_invert(f, expected):
    assert format_segment(seg_invert(s(f))) == expected


@pytest.mark.parametrize(
    "f, g, expected",
    [
        ("[1:0+H, 1:1/2+H]", "[1:0+H, 1:1/2+H]", "[1:0+H, 1:1/2+H]"),
        ("[1:0+H, 1:1/2+H]", "[1:0+H, 1:1/3+H]", "[1:0+H]"),
        ("[2:0+H]", "[1/2:0+H, 1:1/3+H]", "[1/2:0+H]"),
        ("[1:0+H]", "[1:(0+H)']", "id"),
    ],
)
def test_meet(f, g, expected):
    assert format_segment(seg_meet(s(f), s(g))) == expected


@pytest.mark.parametrize(
    "f, admissible",
    [
        ("[5/2:1/3+H]", True),
        ("[1:0+H, 1:(0+H)']", False),
        ("[1:0+H, 1:(1/3+H)']", True),
        ("[1/2:0+H, 1/2:(0+H)']", False),
    ],
)
def test_admissibility(f, admissible):
    assert seg_is_admissible(s(f)) is admissible


def test_inadmissible_example_is_b_times_b_inverse():
    b = s("[1:0+H]")
    assert seg_concat(b, seg_invert(b)) == s("[1:0+H, 1:(0+H)']")


@pytest.mark.parametrize(
    "f, t, prefix, suffix",
    [
        ("[2:0+H]", 0, "id", "[2:0+H]"),
        ("[2:0+H]", 2, "[2:0+H]", "id"),
        ("[2:0+H]", Fraction(1, 2), "[1/2:0+H]", "[3/2:1/2+H]"),
    ],
)
def test_restrict(f, t, prefix, suffix):
    p, q = restrict(s(f), Fraction(t))
    assert (format_segment(p), format_segment(q)) == (prefix, suffix)
    assert seg_concat(p, q) == s(f)


def test_restrict_out_of_range():
    with pytest.raises(SegmentError):
        restrict(s("[1:0+H]"), Fraction(2))


# -- axes ------------------------------------------------------------------


@pytest.mark.parametrize(
    "system, f, x, status",
    [
        (QZ, "[1:0+H]", "0+H", AxisStatus.ON_AXIS_STABILIZING),
        (QZ, "[1/2:0+H]", "0+H", AxisStatus.ON_AXIS_NOT_STABILIZING),
        (QZ, "[1:0+H, 1:1/3+H]", "0+H", AxisStatus.OFF_AXIS),
        (QZ, "[2:(0+H)']", "0+H", AxisStatus.ON_AXIS_STABILIZING),
        (Q3, "[2/3:1/3+H]", "0+H", AxisStatus.ON_AXIS_STABILIZING),
        (CosetSystem(QQ, [1]), "[3:0+H]", "0+H", AxisStatus.ON_AXIS_STABILIZING),
        (CosetSystem(ZZ2, [Lex(1, 0)]), "[(0,1):(0,0)+H]", "(0,0)+H", AxisStatus.ON_AXIS_NOT_STABILIZING),
    ],
)
def test_axis_status(system, f, x, status):
    assert axis_stabilizer_check(s(f, system), label(x, system)) is status


def test_axis_coordinate_is_signed_length():
    x = label("0+H")
    assert axis_coordinate(s("[3:0+H]"), x) == 3
    assert axis_coordinate(s("[3:(0+H)']"), x) == -3


def test_single_copy_integer_tree_has_an_inversion():
    ore = lambda_tree_instance(ZZ, [1], single_copy=True)
    f = s("[1:0+H]", ore.identity.system)
    assert ore.invert(f) == f
    assert ore.star(f, f) == ore.identity


def test_single_copy_needs_a_line():
    with pytest.raises(LabelError):
        CosetSystem(ZZ2, [], primed=False)


@pytest.mark.parametrize("config", [
    {"kind": "coset", "lambda": "Q", "H": ["1"], "twist": "anti"},
    {"kind": "atoms", "names": ["x1", "x2", "x3"], "twist": "anti"},
    {"kind": "coset", "lambda": "Z2", "H": ["(1, 0)"]},
])
def test_config_round_trip(config):
    system = system_from_config(config)
    assert system_from_config(system.describe()) == system


def test_config_rejects_commuting_twist():
    with pytest.raises(LabelError):
        system_from_config({"kind": "coset", "lambda": "Q", "H": [], "twist": "commuting"})


# -- properties ------------------------------------------------------------


@given(system_names, seeds)
def test_involution_and_anti_homomorphism(name, seed):
    rng, system = random.Random(seed), SYSTEMS[name]
    f, g = random_segment(rng, system), random_segment(rng, system)
    assert seg_invert(seg_invert(f)) == f
    assert seg_invert(seg_concat(f, g)) == seg_concat(seg_invert(g), seg_invert(f))
    assert seg_concat(f, g).length == f.length + g.length


@given(system_names, seeds)
def test_constants_are_admissible(name, seed):
    rng, system = random.Random(seed), SYSTEMS[name]
    x = system.random_label(rng)
    f = canonicalize([(random_length(rng, system.lam), x)], system)
    assert seg_is_admissible(f)


@given(system_names, seeds)
def test_b_times_b_inverse_is_never_admissible(name, seed):
    rng, system = random.Random(seed), SYSTEMS[name]
    a, b = admissible_segment(rng, system), admissible_segment(rng, system)
    if b.is_identity:
        return
    assert not seg_is_admissible(seg_concat(seg_concat(a, b), seg_invert(b)))


@given(st.sampled_from(["Q/Z", "Q/<1/3>"]), seeds)
def test_stabilizing_elements_keep_the_axis(name, seed):
    rng, system = random.Random(seed), SYSTEMS[name]
    ore = segment_ops(system)
    x = system.random_label(rng)
    on_axis = [canonicalize([(Fraction(rng.randint(1, 6), rng.choice((1, 2, 3))), y)], system)
               for y in (x, system.star(x)) for _ in range(3)]
    for f in on_axis:
        status = axis_stabilizer_check(f, x)
        stays = all(axis_stabilizer_check(ore.star(f, g), x) is not AxisStatus.OFF_AXIS
                    for g in on_axis if ore.star(f, g) != ore.identity)
        if status is AxisStatus.ON_AXIS_STABILIZING:
            assert stays
        # a non-stabilizing step moves the unit constant off the axis
        unit = canonicalize([(Fraction(1), x)], system)
        if status is AxisStatus.ON_AXIS_NOT_STABILIZING and ore.star(f, unit) != ore.identity:
            assert axis_stabilizer_check(ore.star(f, unit), x) is AxisStatus.OFF_AXIS


def test_rank_one_on_samples():
    inst = segment_instance("Q/Z", QZ)
    sample = [f for f in inst.samples(random.Random(4), 16, admissible=True) if not f.is_identity]
    sample = list(dict.fromkeys(sample))[:12]
    assert inst.ore.rank_of_family(sample) == 1


@pytest.mark.parametrize("name", sorted(SYSTEMS))
def test_segment_ores_pass_axioms(name):
    inst = segment_instance(name, SYSTEMS[name])
    rng = random.Random(name)
    report = check_ore_axioms(inst.ore, inst.samples(rng, 80), max_pairs=1000, max_triples=300, rng=rng)
    assert report.passed, report.as_dict()
