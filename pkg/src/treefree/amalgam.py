"""Amalgamated free products ``H *_C K`` of finite groups as a length oracle.

Elements are kept in the normal form ``c x_1 ... x_n`` with ``c`` in ``C``
and the ``x_i`` alternating between nontrivial right-coset representatives
of ``C`` in ``H`` and in ``K``.  The translation length on the Bass-Serre
tree is the syllable count of a cyclically reduced conjugate (0 when that
count is at most one).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .reduction import Verdict, decide
from .valued_field import ParseError

H, K = "H", "K"
_OTHER = {H: K, K: H}


class AmalgamError(ValueError):
    """Invalid group tables, embeddings or transversals."""


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table; element 0 need not be the identity."""

    names: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.names)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise AmalgamError("multiplication table is not square")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise AmalgamError("table entry out of range")
        ids = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e]
                                          for x in range(n))]
        if len(ids) != 1:
            raise AmalgamError("table has no identity")
        object.__setattr__(self, "identity", ids[0])
        inverses = []
        for x in range(n):
            inv = [y for y in range(n) if self.table[x][y] == ids[0]]
            if len(inv) != 1:
                raise AmalgamError(f"element {self.names[x]!r} has no unique inverse")
            inverses.append(inv[0])
        object.__setattr__(self, "inverses", tuple(inverses))
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if self.table[self.table[x][y]][z] != self.table[x][self.table[y][z]]:
                        raise AmalgamError("table is not associative")

    @classmethod
    def cyclic(cls, n: int, prefix: str = "g") -> "FiniteGroup":
        names = tuple(f"{prefix}{i}" for i in range(n))
        return cls(names, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))

    def __len__(self):
        return len(self.names)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self.inverses[x]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ParseError(f"unknown element {name!r}") from None


@dataclass(frozen=True)
class NormalForm:
    """``c x_1 ... x_n``: ``c`` indexes ``C``; syllables are ``(factor, element index)``."""

    c: int
    syllables: tuple[tuple[str, int], ...]

    def __len__(self):
        return len(self.syllables)


class AmalgamSpec:
    """``H *_C K`` with embeddings ``C -> H``, ``C -> K`` and right transversals.

    Transversals default to the least element index of each coset of ``C``.
    """

    def __init__(self, h: FiniteGroup, k: FiniteGroup, c: FiniteGroup,
                 embed_h: Sequence[int], embed_k: Sequence[int],
                 transversal_h: Sequence[int] | None = None,
                 transversal_k: Sequence[int] | None = None):
        self.groups = {H: h, K: k}
        self.C = c
        self.embed = {H: tuple(embed_h), K: tuple(embed_k)}
        for f in (H, K):
            self._check_embedding(f)
        given = {H: transversal_h, K: transversal_k}
        self.transversal = {}
        self._split = {}
        for f in (H, K):
            self.transversal[f] = (tuple(given[f]) if given[f] is not None
                                   else self._default_transversal(f))
            self._split[f] = self._build_split(f)

    def _check_embedding(self, f: str) -> None:
        g, emb, C = self.groups[f], self.embed[f], self.C
        if len(emb) != len(C):
            raise AmalgamError(f"embedding into {f} has the wrong size")
        if len(set(emb)) != len(emb):
            raise AmalgamError(f"embedding into {f} is not injective")
        for x in range(len(C)):
            for y in range(len(C)):
                if emb[C.mul(x, y)] != g.mul(emb[x], emb[y]):
                    raise AmalgamError(f"embedding into {f} is not a homomorphism")

    def _default_transversal(self, f: str) -> tuple[int, ...]:
        g, emb = self.groups[f], self.embed[f]
        seen, reps = set(), []
        for x in range(len(g)):
            if x in seen:
                continue
            reps.append(x)
            seen.update(g.mul(e, x) for e in emb)
        # the identity represents C itself
        ident = g.identity
        coset_of_id = {g.mul(e, ident) for e in emb}
        reps = [ident if r in coset_of_id else r for r in reps]
        return tuple(reps)

    def _build_split(self, f: str) -> dict[int, tuple[int, int]]:
        g, emb, T = self.groups[f], self.embed[f], self.transversal[f]
        if g.identity not in T:
            raise AmalgamError(f"transversal of {f} must contain the identity")
        split = {}
        for t in T:
            for ci in range(len(self.C)):
                x = g.mul(emb[ci], t)
                if x in split:
                    raise AmalgamError(f"transversal of {f} repeats a coset")
                split[x] = (ci, t)
        if len(split) != len(g):
            raise AmalgamError(f"transversal of {f} misses a coset")
        return split

    # ---- normal forms

    @property
    def identity(self) -> NormalForm:
        return NormalForm(self.C.identity, ())

    def letter(self, factor: str, x: int) -> NormalForm:
        return self.left_mul(factor, x, self.identity)

    def left_mul(self, factor: str, x: int, g: NormalForm) -> NormalForm:
        """``x * g`` for a single letter ``x`` of ``factor``."""
        grp = self.groups[factor]
        y = grp.mul(x, self.embed[factor][g.c])
        rest = g.syllables
        if rest and rest[0][0] == factor:
            y = grp.mul(y, rest[0][1])
            rest = rest[1:]
        ci, t = self._split[factor][y]
        if t == grp.identity:
            if rest:
                # push c into the next syllable, which lies in the other factor
                other = _OTHER[factor]
                return self.left_mul(other, self.embed[other][ci],
                                     NormalForm(self.C.identity, rest))
            return NormalForm(ci, ())
        return NormalForm(ci, ((factor, t),) + rest)

    def normal_form(self, word: Sequence[tuple[str, int]]) -> NormalForm:
        g = self.identity
        for factor, x in reversed(word):
            if factor not in self.groups:
                raise ParseError(f"unknown factor {factor!r}")
            if not 0 <= x < len(self.groups[factor]):
                raise ParseError(f"letter {x} out of range for {factor}")
            g = self.left_mul(factor, x, g)
        return g

    def letters(self, g: NormalForm) -> list[tuple[str, int]]:
        """A word for ``g`` (``c`` written as an H-letter)."""
        out = [(H, self.embed[H][g.c])] if g.c != self.C.identity else []
        return out + list(g.syllables)

    def mul(self, g: NormalForm, h: NormalForm) -> NormalForm:
        out = h
        for factor, x in reversed(self.letters(g)):
            out = self.left_mul(factor, x, out)
        return out

    def inv(self, g: NormalForm) -> NormalForm:
        return self.normal_form([(f, self.groups[f].inv(x)) for f, x in reversed(self.letters(g))])

    def cyclically_reduce(self, g: NormalForm) -> NormalForm:
        """Conjugate until at most one syllable remains or the end syllables lie in different factors."""
        while len(g) >= 2 and g.syllables[0][0] == g.syllables[-1][0]:
            f, t = g.syllables[-1]
            # t g t^-1 = t c x_1 ... x_{n-1}: the first three letters merge
            g = self.left_mul(f, t, NormalForm(g.c, g.syllables[:-1]))
        return g

    def translation_length(self, g: NormalForm) -> int:
        n = len(self.cyclically_reduce(g))
        return n if n > 1 else 0

    # ---- parsing

    def parse_word(self, text: str) -> NormalForm:
        """Whitespace-separated ``H.name`` / ``K.name`` tokens."""
        word = []
        for tok in text.split():
            factor, sep, name = tok.partition(".")
            if not sep or factor not in self.groups:
                raise ParseError(f"bad amalgam letter {tok!r}; expected H.<name> or K.<name>")
            word.append((factor, self.groups[factor].index(name)))
        return self.normal_form(word)

    def format(self, g: NormalForm) -> str:
        toks = [f"{f}.{self.groups[f].names[x]}" for f, x in self.letters(g)]
        return " ".join(toks) or "1"

    @classmethod
    def from_json(cls, doc: dict | str) -> "AmalgamSpec":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            groups = {key: FiniteGroup(tuple(doc[key]["elements"]),
                                       tuple(tuple(r) for r in doc[key]["table"]))
                      for key in ("H", "K", "C")}

            def indices(key, f):
                val = doc.get(key)
                if val is None:
                    return None
                return [groups[f].index(x) if isinstance(x, str) else x for x in val]

            return cls(groups["H"], groups["K"], groups["C"],
                       indices("embed_H", "H"), indices("embed_K", "K"),
                       indices("transversal_H", "H"), indices("transversal_K", "K"))
        except (KeyError, TypeError) as exc:
            raise AmalgamError(f"malformed amalgam spec: {exc}") from None

    def to_json(self) -> dict:
        def grp(g):
            return {"elements": list(g.names), "table": [list(r) for r in g.table]}
        return {
            "H": grp(self.groups[H]), "K": grp(self.groups[K]), "C": grp(self.C),
            "embed_H": list(self.embed[H]), "embed_K": list(self.embed[K]),
            "transversal_H": list(self.transversal[H]),
            "transversal_K": list(self.transversal[K]),
        }


class AmalgamOracle:
    """Length oracle over normal forms of a fixed amalgam."""

    def __init__(self, spec: AmalgamSpec):
        self.spec = spec

    def length(self, g: NormalForm) -> int:
        return self.spec.translation_length(g)

    def mul(self, g: NormalForm, h: NormalForm) -> NormalForm:
        return self.spec.mul(g, h)

    def inv(self, g: NormalForm) -> NormalForm:
        return self.spec.inv(g)


def translation_length_amalgam(spec: AmalgamSpec, g: NormalForm) -> int:
    return spec.translation_length(g)


def decide_amalgam(spec: AmalgamSpec, A: NormalForm | str, B: NormalForm | str,
                   **kwargs) -> Verdict:
    if isinstance(A, str):
        A = spec.parse_word(A)
    if isinstance(B, str):
        B = spec.parse_word(B)
    return decide(A, B, AmalgamOracle(spec), **kwargs)


def z4_z2_z6() -> AmalgamSpec:
    """``Z/4 *_{Z/2} Z/6`` (isomorphic to SL2(Z)); ``C`` maps to 2 in Z/4 and 3 in Z/6."""
    h = FiniteGroup.cyclic(4, "s")
    k = FiniteGroup.cyclic(6, "u")
    c = FiniteGroup.cyclic(2, "c")
    return AmalgamSpec(h, k, c, [0, 2], [0, 3])
