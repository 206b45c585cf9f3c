"""Words in the free group on two letters ``a`` and ``b``.

A word is a tuple of nonzero ints: ``1 = a``, ``-1 = a^-1``, ``2 = b``,
``-2 = b^-1``.  The text form uses ``a b`` for the generators and ``A B``
for their inverses, e.g. ``"aaBa"``; whitespace is ignored.
"""

from __future__ import annotations

import random
from typing import Callable, Sequence, TypeVar

from .valued_field import ParseError

Word = tuple

T = TypeVar("T")

A, B = (1,), (2,)
_LETTERS = {"a": 1, "A": -1, "b": 2, "B": -2}
_NAMES = {v: k for k, v in _LETTERS.items()}


def reduce(word: Sequence[int]) -> Word:
    """Free reduction."""
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def concat(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        out.extend(w)
    return reduce(out)


def substitute(word: Sequence[int], image_a: Word, image_b: Word) -> Word:
    """Rewrite ``word`` by ``a -> image_a``, ``b -> image_b``."""
    images = {1: image_a, -1: inverse(image_a), 2: image_b, -2: inverse(image_b)}
    return concat(*(images[x] for x in word))


def evaluate(word: Sequence[int], gen_a: T, gen_b: T, mul: Callable[[T, T], T],
             inv: Callable[[T], T], identity: T) -> T:
    gens = {1: gen_a, -1: inv(gen_a), 2: gen_b, -2: inv(gen_b)}
    result = identity
    for x in word:
        result = mul(result, gens[x])
    return result


def to_str(word: Sequence[int]) -> str:
    return "".join(_NAMES[x] for x in word)


def parse(text: str) -> Word:
    try:
        return tuple(_LETTERS[ch] for ch in text if not ch.isspace() and ch != "1")
    except KeyError as exc:
        raise ParseError(f"bad letter {exc.args[0]!r} in word {text!r}") from None


def random_reduced(length: int, rng: random.Random) -> Word:
    """Uniform-ish freely reduced word of the given length."""
    out: list[int] = []
    while len(out) < length:
        x = rng.choice((1, -1, 2, -2))
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)
