import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.labels import CosetSystem
from artifact.lambda_values import QQ
from artifact.ore import (
    FamilyTooLargeError,
    InadmissibleError,
    NotAFaceError,
    NotOrthogonalError,
    check_ore_axioms,
    cube_identities_hold,
)
from artifact.products import ProductElement, product_ops, shift_element
from artifact.sampling import product_system_n3, standard_instances, unit_on
from artifact.segments import canonicalize, element, segment_ops
from artifact.words import parse_word, word_ops

W = word_ops(["a", "b", "c"])
w = parse_word
QZ = CosetSystem(QQ, [1])
SEG = segment_ops(QZ)
N3 = product_system_n3()
P3 = product_ops(N3)
INSTANCES = standard_instances()
seeds = st.integers(0, 2**32 - 1)


def seg(*blocks):
    return element(QZ, [(Fraction(l), QZ.parse_label(x)) for l, x in blocks])


# -- worked examples -------------------------------------------------------


def test_join_examples():
    assert W.join(w("a.b"), ()) == w("a.b")
    assert W.join(w("a"), w("a.b")) == w("a.b")
    assert W.join(w("a"), w("b")) is None


def test_orthogonality_examples():
    assert W.is_orthogonal((), w("a"))
    assert not W.is_orthogonal(w("a"), w("b"))
    assert P3.is_orthogonal(unit_on(N3, 0), unit_on(N3, 1))


def test_transport_examples():
    assert W.transport(w("a"), ()) == ()
    assert W.transport((), w("a")) == w("a")
    with pytest.raises(NotOrthogonalError):
        W.transport(w("a"), w("b"))


def test_product_transport_is_the_negative_signed_shift():
    f, g = unit_on(N3, 0), unit_on(N3, 2)
    # τ(f) = (1, 0, 0) and M·τ(f) = (1, 0, 2)
    assert P3.transport(f, g) == shift_element(g, (-1, 0, 0))
    assert P3.format(P3.transport(f, g)) == "(id | id | [1:-2+H])"


def test_star_examples():
    assert W.star(w("a.b"), w("b^-.a")) == w("a.a")
    f = w("a.b^-.c")
    assert W.star(f, W.invert(f)) == ()
    assert SEG.star(seg((1, "0+H")), seg((1, "0+H"))) == seg((2, "0+H"))


def test_star_rejects_inadmissible():
    with pytest.raises(InadmissibleError):
        W.star(w("a.a^-"), w("b"))


def test_faces():
    assert W.face_left(w("a.b"), ()) == w("a.b")
    assert W.face_left(w("a.b"), w("a")) == w("b")
    assert W.face_right(w("a.b"), w("b")) == w("a")
    with pytest.raises(NotAFaceError):
        W.face_left(w("a.b"), w("b"))


def test_median_examples():
    assert W.median(w("a"), w("a"), w("b")) == w("a")
    assert W.median(w("a.b"), w("a.c"), w("a")) == w("a")
    assert W.median(w("a"), w("b"), ()) == ()


def test_distance_examples():
    f = w("a.b")
    assert W.distance(f, f) == 0
    assert W.distance(w("a.b"), w("a.c")) == 2
    assert SEG.distance(seg((1, "0+H")), seg((Fraction(1, 2), "0+H"))) == Fraction(1, 2)


def test_interval_examples():
    assert W.in_interval(w("a"), w("a"), w("b"))
    assert W.in_interval(w("a"), (), w("a.b"))
    assert not W.in_interval(w("b"), (), w("a.b"))


def test_rank_examples():
    assert W.rank_of_family([w("a")]) == 1
    assert W.rank_of_family([w("a"), w("b")]) == 1
    assert P3.rank_of_family([unit_on(N3, i) for i in range(3)]) == 3
    with pytest.raises(FamilyTooLargeError):
        W.rank_of_family([(("a", 1),) * k for k in range(1, 18)])


def test_cube_identity_on_unit_triple():
    a, b, c = (unit_on(N3, i, length=Fraction(i + 1, 2)) for i in range(3))
    assert cube_identities_hold(P3, a, b, c)


# -- mutation: an involution that forgets the star --------------------------


def test_dropping_the_star_breaks_the_involution():
    def invert_without_star(f):
        return canonicalize([(l, QZ.act(-f.length, x)) for l, x in reversed(f.blocks)], QZ)

    broken = dataclasses.replace(SEG, invert=invert_without_star)
    rng = random.Random(11)
    samples = INSTANCES["coset-Q/Z"].samples(rng, 60)
    assert check_ore_axioms(SEG, samples, max_pairs=500, max_triples=200, rng=random.Random(1)).passed
    report = check_ore_axioms(broken, samples, max_pairs=500, max_triples=200, rng=random.Random(1))
    assert "O2" in report.failed_axioms()


# -- properties over every shipped instance ---------------------------------


def _triple(name, seed):
    inst = INSTANCES[name]
    return inst.ore, inst.samples(random.Random(seed), 3, admissible=True)


names = st.sampled_from(sorted(INSTANCES))


@given(names, seeds)
def test_star_is_associative_with_inverses(name, seed):
    ore, (f, g, h) = _triple(name, seed)
    assert ore.star(ore.star(f, g), h) == ore.star(f, ore.star(g, h))
    assert ore.star(f, ore.identity) == f == ore.star(ore.identity, f)
    assert ore.star(f, ore.invert(f)) == ore.identity
    assert ore.is_admissible(ore.star(f, g))


@given(names, seeds)
def test_median_metric_and_equivariance(name, seed):
    ore, (a, b, c) = _triple(name, seed)
    m = ore.median(a, b, c)
    pts = (a, b, c)
    for i in range(3):
        for j in range(3):
            if i != j:
                assert ore.distance(pts[i], pts[j]) == ore.distance(pts[i], m) + ore.distance(m, pts[j])
    g = INSTANCES[name].samples(random.Random(seed + 1), 1, admissible=True)[0]
    assert ore.star(g, m) == ore.median(ore.star(g, a), ore.star(g, b), ore.star(g, c))


@given(names, seeds)
def test_interval_membership_matches_median(name, seed):
    ore, (a, b, c) = _triple(name, seed)
    assert ore.in_interval(c, a, b) == (ore.median(a, b, c) == c)
    assert ore.distance(a, b) == ore.distance(b, a)
    assert (ore.distance(a, b) == ore.length(ore.identity)) == (a == b)


@given(names, seeds)
def test_faces_of_admissible_elements_are_admissible(name, seed):
    ore, (f, g, _) = _triple(name, seed)
    face = ore.meet(f, g)
    assert ore.is_admissible(face)
    assert ore.concat(face, ore.face_left(f, face)) == f


@given(seeds)
def test_transport_round_trip_in_products(seed):
    inst = INSTANCES["product-3"]
    rng = random.Random(seed)
    f, g = inst.samples(rng, 2, admissible=True)
    x = ProductElement(tuple(fn if k == 0 else gn.__class__((), gn.system)
                             for k, (fn, gn) in enumerate(zip(f.factors, g.factors))), N3)
    y = ProductElement(tuple(gn if k == 1 else gn.__class__((), gn.system)
                             for k, gn in enumerate(g.factors)), N3)
    if not (P3.is_admissible(x) and P3.is_admissible(y)):
        return
    moved = P3.transport(y, x)
    assert P3.transport(P3.invert(y), moved) == x
