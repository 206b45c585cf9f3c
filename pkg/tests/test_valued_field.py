import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treefree.valued_field import (INF, FpTField, ParseError, PrecisionLoss, QpField, RatFunc,
                                   make_field, truncate)


def trial_division_vp(n: int, p: int) -> int:
    n, v = abs(n), 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def oracle_valuation(x: Fraction, p: int):
    if x == 0:
        return INF
    return trial_division_vp(x.numerator, p) - trial_division_vp(x.denominator, p)


def random_rational(rng, p):
    num = rng.randint(-10**6, 10**6)
    den = rng.randint(1, 10**6)
    return Fraction(num, den) * Fraction(p) ** rng.randint(-6, 6)


def random_ratfunc(rng, p):
    def poly():
        return [rng.randrange(p) for _ in range(rng.randint(1, 5))]
    den = poly()
    while not any(den):
        den = poly()
    shift = [0] * rng.randint(0, 3)
    if rng.random() < 0.5:
        return RatFunc.make(shift + poly(), den, p)
    return RatFunc.make(poly(), shift + den, p)


def test_valuation_examples():
    assert QpField(7).valuation(Fraction(2, 343)) == -3
    assert QpField(5).valuation(Fraction(50, 3)) == 2
    assert QpField(5).valuation(Fraction(50, 3)) == oracle_valuation(Fraction(50, 3), 5)
    assert QpField(3).valuation(Fraction(0)) == INF
    assert FpTField(5).valuation(FpTField(5).zero) == INF


def test_arithmetic_examples():
    F = QpField(7)
    s = F(7) + F(Fraction(1, 49))
    assert s == Fraction(344, 49) and F.valuation(s) == -2
    G = QpField(2)
    assert G(Fraction(1, 2)) + G(Fraction(1, 2)) == 1
    assert G.valuation(G(Fraction(1, 2)) + G(Fraction(1, 2))) == 0
    with pytest.raises(ZeroDivisionError):
        F.one / F.zero


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_qp_valuation_matches_trial_division(p):
    rng = random.Random(p)
    F = QpField(p)
    for _ in range(2000):
        x = random_rational(rng, p)
        assert F.valuation(x) == oracle_valuation(x, p)


@pytest.mark.parametrize("field", [QpField(3), FpTField(3)], ids=["qp", "fqt"])
def test_ultrametric_and_homomorphism(field):
    rng = random.Random(11)
    gen = (lambda: random_rational(rng, 3)) if isinstance(field, QpField) else \
        (lambda: random_ratfunc(rng, 3))
    v = field.valuation
    strict = 0
    for _ in range(10_000):
        x, y = gen(), gen()
        if x and y:
            assert v(x * y) == v(x) + v(y)
            assert v(x * (field.one / x)) == 0
        s = x + y
        assert v(s) >= min(v(x), v(y))
        if v(x) != v(y):
            assert v(s) == min(v(x), v(y))
            strict += 1
    assert strict > 1000


def test_ratfunc_against_sympy():
    sympy = pytest.importorskip("sympy")
    t = sympy.symbols("t")
    p = 5
    rng = random.Random(3)
    for _ in range(50):
        x, y = random_ratfunc(rng, p), random_ratfunc(rng, p)

        def as_sym(r):
            return sympy.Poly(list(reversed(r.num)) or [0], t, modulus=p), \
                sympy.Poly(list(reversed(r.den)), t, modulus=p)

        prod = x * y
        (xn, xd), (yn, yd), (pn, pd) = as_sym(x), as_sym(y), as_sym(prod)
        # cross-multiplied equality in F_p[t]
        assert (xn * yn * pd - pn * xd * yd).is_zero


def test_truncate_examples():
    F7, F5 = QpField(7), QpField(5)
    e = truncate(F7, Fraction(2, 343), 0)
    assert (e.N, e.digits, e.M) == (-3, (2, 0, 0, 0), 0)
    assert e.lift() == Fraction(2, 343)
    one = truncate(F5, Fraction(1), 3)
    assert (one.N, one.digits) == (0, (1, 0, 0, 0))
    m1 = truncate(F5, Fraction(-1), 3)
    assert (m1.N, m1.digits) == (0, (4, 4, 4, 4))
    assert F5.valuation(m1.lift() + 1) > 3
    z = truncate(F5, Fraction(5**6), 3)
    assert z.is_zero
    with pytest.raises(PrecisionLoss):
        z.valuation()


@pytest.mark.parametrize("field", [QpField(5), FpTField(3)], ids=["qp", "fqt"])
def test_truncated_ops_match_exact(field):
    rng = random.Random(5)
    gen = (lambda: random_rational(rng, 5)) if isinstance(field, QpField) else \
        (lambda: random_ratfunc(rng, 3))
    v = field.valuation
    for _ in range(300):
        x, y = gen(), gen()
        if not x or not y:
            continue
        M = rng.randint(-2, 8)
        tx, ty = truncate(field, x, M), truncate(field, y, M)
        s = tx + ty
        assert s.M == M
        assert s == truncate(field, x + y, M)
        prod = tx * ty
        if not tx.is_zero and not ty.is_zero:
            assert prod.M == min(v(x) + M, v(y) + M)
            assert prod == truncate(field, x * y, prod.M)
        if not tx.is_zero:
            inv = tx.inverse()
            assert inv.M == M - 2 * tx.N
            assert inv == truncate(field, field.one / x, inv.M)


def test_truncated_identity_and_inverse_example():
    F = QpField(3)
    x = truncate(F, Fraction(7, 9) + 3, 4)
    assert x.N == -2 and x.M == 4
    one = truncate(F, Fraction(1), 4)
    prod = x * one
    # precision drops to min(vx + 4, 0 + 4); digits agree up to it
    assert prod.M == 2 and prod.digits == x.digits[:len(prod.digits)]
    inv = x.inverse()
    assert inv.M == 4 - 2 * (-2)
    back = x * inv
    assert back == truncate(F, Fraction(1), back.M)


def test_parse_and_format_roundtrip():
    F = QpField(7)
    assert F.parse("2/343") == Fraction(2, 343)
    assert F.parse("7^-3 * 2") == Fraction(2, 343)
    G = FpTField(5)
    x = G.parse("(t^2+3)/(t)")
    assert G.valuation(x) == -1
    assert G.parse(G.format(x)) == x
    for bad in ["1/", "(2", "abc", "3//4", ""]:
        with pytest.raises(ParseError):
            F.parse(bad)
    with pytest.raises(ParseError):
        F.parse("1/0")


def test_make_field():
    assert make_field("qp:7") == QpField(7)
    assert make_field("fqt:5") == FpTField(5)
    for bad in ["qp:8", "zz:3", "qp", "fqt:-1"]:
        with pytest.raises(ParseError):
            make_field(bad)


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**9, 10**9).filter(bool), st.integers(1, 10**9), st.integers(-5, 12))
def test_digit_expansion_is_unique_and_exact(num, den, M):
    F = QpField(3)
    x = Fraction(num, den)
    e = truncate(F, x, M)
    if e.is_zero:
        assert F.valuation(x) > M
    else:
        assert e.N == F.valuation(x)
        assert all(0 <= a < 3 for a in e.digits)
        assert F.valuation(x - e.lift()) > M
