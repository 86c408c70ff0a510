import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.geometry import (
    MAX_DEFECT_SAMPLE,
    direction_classes,
    direction_graph_dot,
    gromov_product,
    hyperbolicity_defect,
)
from artifact.labels import AtomSystem
from artifact.lambda_values import half_value
from artifact.products import product_ops
from artifact.sampling import product_system_n2, segment_instance, standard_instances, unit_on
from artifact.segments import canonicalize, segment_ops
from artifact.words import parse_word, word_ops

W = word_ops(["a", "b", "c"])
w = parse_word
INSTANCES = standard_instances()
TREE_LIKE = [n for n in sorted(INSTANCES) if not n.startswith("product")]
N2 = product_system_n2()
P2 = product_ops(N2)
seeds = st.integers(0, 2**32 - 1)


def test_gromov_examples():
    f = w("a.b.c")
    assert gromov_product(W, f, f) == half_value(3, 1)
    assert gromov_product(W, w("a.b"), w("a.c")) == half_value(1, 1)
    assert gromov_product(W, w("a"), w("b.c"), w("a")) == half_value(0, 1)


def _square(length):
    u1, u2 = unit_on(N2, 0, length=length), unit_on(N2, 1, length=length)
    return [P2.identity, u1, u2, P2.star(u1, u2)]


@pytest.mark.parametrize("length, defect", [(Fraction(1), half_value(1, 1)), (Fraction(1, 2), half_value(Fraction(1, 2), 1))])
def test_square_corners_have_positive_defect(length, defect):
    report = hyperbolicity_defect(P2, _square(length))
    assert report.defect == defect
    assert report.witness is not None and not report.certifies_tree


def test_single_point_has_zero_defect():
    report = hyperbolicity_defect(W, [w("a")])
    assert report.size == 1 and report.defect == half_value(0, 1) and report.certifies_tree


def test_defect_sample_is_capped():
    with pytest.raises(ValueError):
        hyperbolicity_defect(W, [w("a")] * (MAX_DEFECT_SAMPLE + 1))


def test_direction_examples():
    atoms = AtomSystem.with_valence(4)
    units = [canonicalize([(Fraction(1), x)], atoms) for x in atoms.all_labels()]
    assert len(direction_classes(segment_ops(atoms), units)) == 4
    assert len(direction_classes(W, [w("a"), w("a.b")])) == 1
    assert direction_classes(W, [w("a"), w("a^-"), w("b")]) == [[0], [1], [2]]
    with pytest.raises(ValueError):
        direction_classes(W, [()])


def test_direction_dot_has_an_edge_per_shared_direction():
    dot = direction_graph_dot(W, [w("a"), w("a.b"), w("b")])
    assert "e0 -- e1;" in dot and "e1 -- e2" not in dot


@given(st.sampled_from(TREE_LIKE), seeds)
def test_rank_one_samples_are_trees(name, seed):
    inst = INSTANCES[name]
    sample = inst.samples(random.Random(seed), 10, admissible=True)
    report = hyperbolicity_defect(inst.ore, sample)
    assert report.certifies_tree


@given(st.sampled_from(sorted(INSTANCES)), seeds)
def test_gromov_product_symmetry(name, seed):
    inst = INSTANCES[name]
    x, y, p = inst.samples(random.Random(seed), 3, admissible=True)
    assert gromov_product(inst.ore, x, y, p) == gromov_product(inst.ore, y, x, p)
    assert gromov_product(inst.ore, x, y, x) == half_value(inst.ore.length(inst.ore.identity), 1)


def test_atoms_directions_on_a_random_sample():
    inst = segment_instance("atoms-6", AtomSystem.with_valence(6))
    sample = [f for f in inst.samples(random.Random(2), 40, admissible=True) if not f.is_identity]
    assert len(direction_classes(inst.ore, sample)) <= 6
