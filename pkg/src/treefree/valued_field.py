"""Exact arithmetic in discretely valued fields.

Two backends are provided:

* :class:`QpField` -- the rationals with the ``p``-adic valuation (elements
  are :class:`fractions.Fraction`);
* :class:`FpTField` -- rational functions over ``F_p`` with the ``t``-adic
  valuation (elements are :class:`RatFunc`).

Both embed densely in a non-archimedean local field (``Q_p`` and
``F_p((t))``), so every algorithm that only needs valuations of rational
inputs can run exactly.  :class:`TruncatedElement` models the finite digit
expansion ``{pi; a_N, ..., a_M}`` used when exactness is not available.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

INF = math.inf


class ParseError(ValueError):
    """Malformed element or matrix text."""


class PrecisionLoss(ArithmeticError):
    """A truncated computation ran out of digits.

    ``required`` is a lower bound for the input precision that would have
    sufficed, when one can be inferred (otherwise ``None``).
    """

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# dense polynomials over F_p, coefficient tuples from low to high degree

Poly = tuple


def _strip(c: Sequence[int], p: int) -> Poly:
    c = [x % p for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return _strip([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                   for i in range(n)], p)


def poly_neg(f: Poly, p: int) -> Poly:
    return _strip([-x for x in f], p)


def poly_mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    return _strip(out, p)


def poly_divmod(f: Poly, g: Poly, p: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    inv_lead = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    for k in range(len(f) - len(g), -1, -1):
        coef = r[k + len(g) - 1] * inv_lead % p
        q[k] = coef
        if coef:
            for j, y in enumerate(g):
                r[k + j] = (r[k + j] - coef * y) % p
    return _strip(q, p), _strip(r[:len(g) - 1], p)


def poly_gcd(f: Poly, g: Poly, p: int) -> Poly:
    while g:
        f, g = g, poly_divmod(f, g, p)[1]
    return poly_monic(f, p)


def poly_monic(f: Poly, p: int) -> Poly:
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return _strip([x * inv for x in f], p)


def poly_ord(f: Poly) -> float:
    """Order of vanishing at t = 0."""
    for i, x in enumerate(f):
        if x:
            return i
    return INF


def series_inverse(f: Poly, k: int, p: int) -> Poly:
    """Inverse of ``f`` (with ``f(0) != 0``) modulo ``t**k``."""
    inv0 = pow(f[0], -1, p)
    out = [0] * k
    for n in range(k):
        acc = 1 if n == 0 else 0
        for i in range(1, min(n, len(f) - 1) + 1):
            acc -= f[i] * out[n - i]
        out[n] = acc * inv0 % p
    return _strip(out, p)


@dataclass(frozen=True)
class RatFunc:
    """Element of ``F_p(t)``: reduced fraction with a monic denominator."""

    num: Poly
    den: Poly
    p: int

    @classmethod
    def make(cls, num: Sequence[int], den: Sequence[int], p: int) -> "RatFunc":
        num, den = _strip(num, p), _strip(den, p)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls((), (1,), p)
        g = poly_gcd(num, den, p)
        num, den = poly_divmod(num, g, p)[0], poly_divmod(den, g, p)[0]
        lead = pow(den[-1], -1, p)
        return cls(_strip([x * lead for x in num], p), poly_monic(den, p), p)

    @classmethod
    def const(cls, c: int, p: int) -> "RatFunc":
        return cls.make((c,), (1,), p)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.p != self.p:
                raise ValueError("mixing characteristics")
            return other
        if isinstance(other, int):
            return RatFunc.const(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self.den == other.den:
            return RatFunc.make(poly_add(self.num, other.num, p), self.den, p)
        return RatFunc.make(
            poly_add(poly_mul(self.num, other.den, p), poly_mul(other.num, self.den, p), p),
            poly_mul(self.den, other.den, p), p)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(poly_neg(self.num, self.p), self.den, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        return RatFunc.make(poly_mul(self.num, other.num, p), poly_mul(self.den, other.den, p), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise ZeroDivisionError("division by zero in F_p(t)")
        p = self.p
        return RatFunc.make(poly_mul(self.num, other.den, p), poly_mul(self.den, other.num, p), p)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        result = RatFunc.const(1, self.p)
        base = self if n >= 0 else RatFunc.const(1, self.p) / self
        n = abs(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, int):
            other = RatFunc.const(other, self.p)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.num, self.den, self.p) == (other.num, other.den, other.p)

    def __hash__(self):
        return hash((self.num, self.den, self.p))

    def __str__(self):
        n, d = _poly_str(self.num), _poly_str(self.den)
        if self.den == (1,):
            return n
        return f"({n})/({d})"

    __repr__ = __str__


def _poly_str(f: Poly) -> str:
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = "t" if i == 1 else f"t^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms)


# ---------------------------------------------------------------------------
# the two field backends

Element = Union[Fraction, RatFunc]


class _ValuedField:
    """Shared behaviour; subclasses supply the arithmetic primitives."""

    kind: str
    p: int

    def __eq__(self, other):
        return type(self) is type(other) and self.p == other.p

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"{type(self).__name__}({self.p})"

    @property
    def descriptor(self) -> str:
        return f"{self.kind}:{self.p}"

    @property
    def zero(self) -> Element:
        return self(0)

    @property
    def one(self) -> Element:
        return self(1)

    def pi_power(self, n: int) -> Element:
        return self.uniformizer ** n

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return self.one / x

    def digits(self, x: Element, M: int) -> tuple[int, tuple[int, ...]]:
        """Digits ``a_N .. a_M`` of ``x = sum a_i pi^i`` with ``a_i`` in ``{0..p-1}``.

        Returns ``(N, digits)``; for ``v(x) > M`` the result is ``(M + 1, ())``.
        """
        N = self.valuation(x)
        if N > M:
            return M + 1, ()
        return N, self._unit_digits(x, N, M - N + 1)

    def from_digits(self, N: int, digits: Iterable[int]) -> Element:
        total = self.zero
        pi = self.uniformizer
        for i, a in enumerate(digits):
            if a:
                total = total + self(a) * pi ** (N + i)
        return total

    def reduce_mod(self, x: Element, n: int) -> Element:
        """Canonical representative ``sum_{i<n} a_i pi^i`` of ``x`` modulo ``pi^n O``."""
        N = self.valuation(x)
        if N >= n:
            return self.zero
        return self._reduce_unit(x, N, n - N)

    def positive(self, x: Element) -> bool:
        """Sign convention: exactly one of ``x``, ``-x`` is positive (when they differ)."""
        N, ds = self.digits(x, self.valuation(x))
        return 2 * ds[0] <= self.p

    def parse(self, text: str) -> Element:
        return _ExprParser(self, text).parse()

    def format(self, x: Element) -> str:
        return str(x)

    def sort_key(self, x: Element):
        return str(x)


class QpField(_ValuedField):
    """``Q`` with the ``p``-adic valuation; elements are ``Fraction``."""

    kind = "qp"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, RatFunc):
            raise TypeError("not an element of Q")
        return Fraction(x)

    @property
    def uniformizer(self) -> Fraction:
        return Fraction(self.p)

    def valuation(self, x) -> int | float:
        x = Fraction(x)
        if not x:
            return INF
        return _vp(x.numerator, self.p) - _vp(x.denominator, self.p)

    def _unit(self, x: Fraction, N: int) -> tuple[int, int]:
        p = self.p
        num, den = x.numerator, x.denominator
        if N >= 0:
            num //= p ** N
        else:
            den //= p ** (-N)
        return num, den

    def _unit_residue(self, x: Fraction, N: int, k: int) -> int:
        num, den = self._unit(x, N)
        mod = self.p ** k
        return num * pow(den, -1, mod) % mod

    def _unit_digits(self, x, N, k):
        r = self._unit_residue(x, N, k)
        out = []
        for _ in range(k):
            r, a = divmod(r, self.p)
            out.append(a)
        return tuple(out)

    def _reduce_unit(self, x, N, k):
        r = self._unit_residue(x, N, k)
        return Fraction(r) * Fraction(self.p) ** N

    def positive(self, x) -> bool:
        return x > 0

    def sort_key(self, x):
        return Fraction(x)


def _vp(n: int, p: int) -> int:
    if n % p:
        return 0
    # p^(2^i) ladder keeps the number of big-int divisions logarithmic in v
    ladder = [p]
    while n % (ladder[-1] * ladder[-1]) == 0:
        ladder.append(ladder[-1] * ladder[-1])
    v = 0
    for i in range(len(ladder) - 1, -1, -1):
        if n % ladder[i] == 0:
            n //= ladder[i]
            v += 1 << i
    return v


class FpTField(_ValuedField):
    """``F_p(t)`` with the ``t``-adic valuation; elements are :class:`RatFunc`."""

    kind = "fqt"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __call__(self, x) -> RatFunc:
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, RatFunc):
            if x.p != self.p:
                raise ValueError("mixing characteristics")
            return x
        if isinstance(x, Fraction):
            return RatFunc.const(x.numerator, self.p) / RatFunc.const(x.denominator, self.p)
        return RatFunc.const(int(x), self.p)

    @property
    def uniformizer(self) -> RatFunc:
        return RatFunc((0, 1), (1,), self.p)

    def valuation(self, x) -> int | float:
        x = self(x)
        if not x.num:
            return INF
        return poly_ord(x.num) - poly_ord(x.den)

    def _unit_series(self, x: RatFunc, N: int, k: int) -> Poly:
        p = self.p
        a, b = poly_ord(x.num), poly_ord(x.den)
        num, den = x.num[a:], x.den[b:]
        prod = poly_mul(num, series_inverse(den, k, p), p)
        return prod[:k]

    def _unit_digits(self, x, N, k):
        s = self._unit_series(x, N, k)
        return tuple(s) + (0,) * (k - len(s))

    def _reduce_unit(self, x, N, k):
        s = self._unit_series(x, N, k)
        if N >= 0:
            return RatFunc.make((0,) * N + s, (1,), self.p)
        return RatFunc.make(s, (0,) * (-N) + (1,), self.p)

    def sort_key(self, x):
        return (x.den, x.num)


Field = Union[QpField, FpTField]


def make_field(descriptor: str) -> Field:
    """Build a field from ``"qp:7"`` or ``"fqt:5"``."""
    try:
        kind, p = descriptor.split(":")
        p = int(p)
    except ValueError:
        raise ParseError(f"bad field descriptor {descriptor!r}") from None
    if not is_prime(p):
        raise ParseError(f"field descriptor {descriptor!r}: {p} is not prime")
    if kind == "qp":
        return QpField(p)
    if kind in ("fqt", "fpt"):
        return FpTField(p)
    raise ParseError(f"unknown field kind {kind!r}")


# ---------------------------------------------------------------------------
# text format: + - * / ^ and parentheses over integers (and t in F_p(t))

_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|([-+*/^()]))")


class _ExprParser:
    def __init__(self, field: Field, text: str):
        self.field = field
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text):
        out, i = [], 0
        text = text.strip()
        while i < len(text):
            m = _TOKEN.match(text, i)
            if not m or m.end() == i:
                raise ParseError(f"unexpected character in {text!r} at {i}")
            if m.group(1):
                out.append(("num", int(m.group(1))))
            elif m.group(2):
                if self.field.kind != "fqt":
                    raise ParseError(f"'t' is not allowed over {self.field!r}: {text!r}")
                out.append(("t", None))
            else:
                out.append(("op", m.group(3)))
            i = m.end()
        if not out:
            raise ParseError("empty element")
        return out

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def _take(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def parse(self):
        value = self._sum()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return value

    def _sum(self):
        value = self._product()
        while self._peek() in (("op", "+"), ("op", "-")):
            op = self._take()[1]
            rhs = self._product()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _product(self):
        value = self._unary()
        while self._peek() in (("op", "*"), ("op", "/")):
            op = self._take()[1]
            rhs = self._unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise ParseError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def _unary(self):
        if self._peek() == ("op", "-"):
            self._take()
            return -self._unary()
        if self._peek() == ("op", "+"):
            self._take()
            return self._unary()
        return self._power()

    def _power(self):
        base = self._atom()
        if self._peek() == ("op", "^"):
            self._take()
            neg = False
            if self._peek() == ("op", "-"):
                self._take()
                neg = True
            kind, n = self._take()
            if kind != "num":
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            if neg:
                if not base:
                    raise ParseError(f"zero to a negative power in {self.text!r}")
                return self.field.one / base ** n
            return base ** n
        return base

    def _atom(self):
        kind, val = self._take()
        if kind == "num":
            return self.field(val)
        if kind == "t":
            return self.field.uniformizer
        if (kind, val) == ("op", "("):
            value = self._sum()
            if self._take() != ("op", ")"):
                raise ParseError(f"unbalanced parentheses in {self.text!r}")
            return value
        raise ParseError(f"unexpected token in {self.text!r}")


# ---------------------------------------------------------------------------
# truncated digit expansions


@dataclass(frozen=True)
class TruncatedElement:
    """``sum_{i=N}^{M} a_i pi^i``, i.e. a field element known modulo ``pi^(M+1)``.

    ``digits`` is empty when the value is zero to this precision; ``N`` is
    then ``M + 1``.  Precision rules (``M`` is the last known exponent):

    * ``x + y``: ``M = min(Mx, My)``
    * ``x * y``: ``M = min(vx + My, vy + Mx)`` where ``v`` is the leading
      exponent (``M + 1`` for a zero-to-precision operand)
    * ``1 / x``: ``M = Mx - 2 * Nx``
    """

    field: Field
    N: int
    digits: tuple[int, ...]
    M: int

    def __post_init__(self):
        if self.digits and self.digits[0] == 0:
            raise ValueError("leading digit must be nonzero")
        if self.digits and self.N + len(self.digits) - 1 != self.M:
            raise ValueError("digits must cover exponents N..M")

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def is_zero(self) -> bool:
        return not self.digits

    def lower_valuation(self) -> int:
        return self.N if self.digits else self.M + 1

    def valuation(self) -> int:
        if not self.digits:
            raise PrecisionLoss(f"value is zero to precision {self.M}")
        return self.N

    def lift(self) -> Element:
        return self.field.from_digits(self.N, self.digits)

    def __add__(self, other: "TruncatedElement") -> "TruncatedElement":
        _check_compatible(self, other)
        return truncate(self.field, self.lift() + other.lift(), min(self.M, other.M))

    def __neg__(self):
        return truncate(self.field, -self.lift(), self.M)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TruncatedElement") -> "TruncatedElement":
        _check_compatible(self, other)
        M = min(self.lower_valuation() + other.M, other.lower_valuation() + self.M)
        return truncate(self.field, self.lift() * other.lift(), M)

    def inverse(self) -> "TruncatedElement":
        if not self.digits:
            raise PrecisionLoss("inverse of a value that is zero to precision",
                                required=None)
        return truncate(self.field, self.field.one / self.lift(), self.M - 2 * self.N)

    def __str__(self):
        ds = "".join(str(a) if a < 10 else f"[{a}]" for a in self.digits)
        return f"{{{self.p}; N={self.N}, {ds or '0'}, M={self.M}}}"


def _check_compatible(x: TruncatedElement, y: TruncatedElement) -> None:
    if x.field != y.field:
        raise ValueError("truncated operands from different fields")


def truncate(field: Field, x: Element, M: int) -> TruncatedElement:
    """Digit expansion of an exact element up to exponent ``M``."""
    N, ds = field.digits(x, M)
    return TruncatedElement(field, N, ds, M)


def truncated_add(x: TruncatedElement, y: TruncatedElement) -> TruncatedElement:
    return x + y


def truncated_mul(x: TruncatedElement, y: TruncatedElement) -> TruncatedElement:
    return x * y


def truncated_inv(x: TruncatedElement) -> TruncatedElement:
    return x.inverse()
