import random

import pytest
from hypothesis import given, strategies as st

from treefree import words
from treefree.valued_field import ParseError

letters = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=20)


def test_parse_and_print():
    assert words.parse("abAB") == (1, 2, -1, -2)
    assert words.to_str((1, 2, -1, -2)) == "abAB"
    assert words.parse("a b A") == (1, 2, -1)
    with pytest.raises(ParseError):
        words.parse("abc")


@given(letters)
def test_reduce_is_idempotent_and_inverse_cancels(w):
    r = words.reduce(w)
    assert words.reduce(r) == r
    assert all(x != -y for x, y in zip(r, r[1:]))
    assert words.reduce(words.concat(w, words.inverse(w))) == ()


@given(letters, letters)
def test_substitute_is_a_homomorphism(u, v):
    img_a, img_b = words.parse("ab"), words.parse("Ab")
    lhs = words.substitute(words.concat(u, v), img_a, img_b)
    rhs = words.concat(words.substitute(u, img_a, img_b), words.substitute(v, img_a, img_b))
    assert words.reduce(lhs) == words.reduce(rhs)


def test_random_reduced():
    rng = random.Random(0)
    for n in range(12):
        w = words.random_reduced(n, rng)
        assert len(w) == n and words.reduce(w) == w
