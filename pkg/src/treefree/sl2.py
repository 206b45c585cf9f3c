"""Determinant-one 2x2 matrices over a valued field."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from .valued_field import Field, ParseError, QpField


class DeterminantError(ValueError):
    """Matrix entries do not have determinant one."""


@dataclass(frozen=True)
class Mat2:
    """``[[a, b], [c, d]]`` with ``ad - bc = 1``."""

    a: Any
    b: Any
    c: Any
    d: Any
    field: Field

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise DeterminantError(f"determinant of {self} is not 1")

    @classmethod
    def of(cls, field: Field, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(field(a), field(b), field(c), field(d), field)

    @classmethod
    def identity(cls, field: Field) -> "Mat2":
        return cls(field.one, field.zero, field.zero, field.one, field)

    @classmethod
    def _unchecked(cls, a, b, c, d, field) -> "Mat2":
        m = object.__new__(cls)
        object.__setattr__(m, "a", a)
        object.__setattr__(m, "b", b)
        object.__setattr__(m, "c", c)
        object.__setattr__(m, "d", d)
        object.__setattr__(m, "field", field)
        return m

    def __matmul__(self, other: "Mat2") -> "Mat2":
        if other.field != self.field:
            raise ValueError("matrices over different fields")
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        # det is multiplicative, so no recheck is needed
        return Mat2._unchecked(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h,
                               self.field)

    def inv(self) -> "Mat2":
        return Mat2._unchecked(self.d, -self.b, -self.c, self.a, self.field)

    def __neg__(self) -> "Mat2":
        return Mat2._unchecked(-self.a, -self.b, -self.c, -self.d, self.field)

    def __pow__(self, n: int) -> "Mat2":
        result = Mat2.identity(self.field)
        base = self if n >= 0 else self.inv()
        n = abs(n)
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def trace(self):
        return self.a + self.d

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def is_identity(self) -> bool:
        return self.a == 1 and self.d == 1 and not self.b and not self.c

    def min_valuation(self):
        return min(self.field.valuation(x) for x in self.entries())

    def __str__(self):
        f = self.field.format
        return f"[[{f(self.a)},{f(self.b)}],[{f(self.c)},{f(self.d)}]]"


def mat_mul(x: Mat2, y: Mat2) -> Mat2:
    return x @ y


def mat_inv(x: Mat2) -> Mat2:
    return x.inv()


def trace(x: Mat2):
    return x.trace()


def translation_length(A: Mat2) -> int:
    """``-2 min(0, v(tr A))``: the displacement of ``A`` on the Bruhat-Tits tree."""
    v = A.field.valuation(A.trace())
    return -2 * v if v < 0 else 0


def is_hyperbolic(A: Mat2) -> bool:
    return A.field.valuation(A.trace()) < 0


@dataclass(frozen=True)
class IsometryClass:
    kind: str  # "elliptic" | "hyperbolic"
    length: int


def classify(A: Mat2) -> IsometryClass:
    n = translation_length(A)
    return IsometryClass("hyperbolic" if n else "elliptic", n)


DEFAULT_MAX_TORSION_ORDER = 24


def finite_order(A: Mat2, k_max: int = DEFAULT_MAX_TORSION_ORDER) -> int | None:
    """Order of ``A`` if it is at most ``k_max``, else ``None``."""
    if is_hyperbolic(A):
        return None
    power = A
    for k in range(1, k_max + 1):
        if power.is_identity():
            return k
        power = power @ A
    return None


def cyclic_discrete(A: Mat2, k_max: int = DEFAULT_MAX_TORSION_ORDER) -> tuple[bool, str]:
    """Whether ``<A>`` is discrete, with the reason.

    Discrete exactly when ``v(tr A) < 0`` or ``A`` has finite order; torsion
    is detected by searching powers up to ``k_max``.
    """
    if is_hyperbolic(A):
        return True, "v(tr) < 0"
    order = finite_order(A, k_max)
    if order is not None:
        return True, f"finite order {order}"
    return False, "infinite order with v(tr) >= 0"


def normalize_psl(A: Mat2) -> Mat2:
    """Canonical representative of ``{A, -A}``.

    The first nonzero entry in the order a, b, c, d is made positive in the
    field's sign convention (positive rational in Q; leading digit at most
    p/2 in F_p(t)).
    """
    for x in A.entries():
        if x:
            return A if A.field.positive(x) else -A
    raise AssertionError("zero matrix")


# text format "[[a,b],[c,d]]"

_MATRIX = re.compile(r"^\s*\[\s*\[(.*)\]\s*,\s*\[(.*)\]\s*\]\s*$", re.S)


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_matrix(text: str, field: Field) -> Mat2:
    m = _MATRIX.match(text)
    if not m:
        raise ParseError(f"malformed matrix {text!r}")
    row1, row2 = _split_top(m.group(1)), _split_top(m.group(2))
    if len(row1) != 2 or len(row2) != 2:
        raise ParseError(f"matrix {text!r} is not 2x2")
    return Mat2.of(field, [[field.parse(x) for x in row1], [field.parse(x) for x in row2]])


def format_matrix(A: Mat2) -> str:
    return str(A)


def qp_matrix(p: int, rows) -> Mat2:
    """Convenience constructor over ``Q`` with the ``p``-adic valuation."""
    return Mat2.of(QpField(p), rows)
