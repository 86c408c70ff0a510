import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.ore import check_ore_axioms
from artifact.sampling import random_word
from artifact.words import (
    common_prefix,
    format_word,
    free_reduce_oracle,
    invert_word,
    is_freely_reduced,
    parse_word,
    word_ops,
)

W = word_ops(["a", "b", "c"])
w = parse_word

letters = st.tuples(st.sampled_from("abc"), st.sampled_from((1, -1)))
words = st.lists(letters, max_size=8).map(tuple)
reduced = words.map(free_reduce_oracle)


def naive_reduce(word):
    """Cancel the first adjacent inverse pair until none is left."""
    word = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            (x, s), (y, t) = word[i], word[i + 1]
            if x == y and s == -t:
                del word[i:i + 2]
                changed = True
                break
    return tuple(word)


@pytest.mark.parametrize("text", ["a", "a.b^-.c", "id", "c^-.c^-"])
def test_parse_format_round_trip(text):
    assert format_word(w(text)) == text


@pytest.mark.parametrize("text", ["a..b", "1a", "a^+"])
def test_parse_rejects_garbage(text):
    with pytest.raises(ValueError):
        w(text)


def test_primitive_examples():
    assert invert_word(w("a.b")) == w("b^-.a^-")
    assert common_prefix(w("a.b"), w("a.c")) == w("a")
    assert W.length(w("a.b.c")) == 3


@pytest.mark.parametrize(
    "word, expected",
    [("a.b.b^-.c", "a.c"), ("a.a^-", "id"), ("a.b^-.b.a", "a.a"), ("a.b.c.c^-.b^-.a^-", "id")],
)
def test_free_reduce_oracle(word, expected):
    assert format_word(free_reduce_oracle(w(word))) == expected


def test_empty_generator_set_is_rejected():
    with pytest.raises(ValueError):
        word_ops([])


@given(words)
def test_oracle_agrees_with_naive_cancellation(u):
    assert free_reduce_oracle(u) == naive_reduce(u)
    assert is_freely_reduced(free_reduce_oracle(u))


@given(reduced, reduced)
def test_star_is_free_reduction(u, v):
    assert W.star(u, v) == free_reduce_oracle(u + v)


@given(reduced, reduced)
def test_length_of_product_subtracts_cancellation(u, v):
    cancelled = len(common_prefix(invert_word(u), v))
    assert W.length(W.star(u, v)) == len(u) + len(v) - 2 * cancelled


def test_word_ore_passes_axioms():
    rng = random.Random(3)
    samples = [random_word(rng, ("a", "b"), 6) for _ in range(200)]
    report = check_ore_axioms(W, samples, max_pairs=4000, max_triples=800, rng=rng)
    assert report.passed, report.failed_axioms()


def _upper_bounds_by_search(f, g, alphabet="ab", max_len=2):
    letters_ = [(x, s) for x in alphabet for s in (1, -1)]
    words_ = [()] + [tuple(p) for k in range(1, max_len + 1) for p in itertools.product(letters_, repeat=k)]
    return [u for u in words_ if u[:len(f)] == f and u[:len(g)] == g]


@pytest.mark.parametrize("f, g", [("a", "b"), ("a", "a.b"), ("id", "b^-"), ("a.b", "a.b^-")])
def test_join_matches_prefix_search(f, g):
    bounds = _upper_bounds_by_search(w(f), w(g))
    expected = min(bounds, key=len) if bounds else None
    assert W.join(w(f), w(g)) == expected
