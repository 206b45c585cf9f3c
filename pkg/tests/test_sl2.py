import random
from fractions import Fraction

import pytest

from _support import counterexample_seeds, one_iteration_pair, qp_mat, random_hyperbolic, random_sl2
from treefree.reduction import decide
from treefree.sl2 import (DeterminantError, Mat2, classify, cyclic_discrete, finite_order,
                          normalize_psl, parse_matrix, translation_length)
from treefree.valued_field import FpTField, ParseError, QpField


def test_basic_examples():
    X, Y = counterexample_seeds(7)
    assert (X @ X.inv()).is_identity()
    assert QpField(7).valuation((X @ Y).trace()) == -4
    for alpha in (1, 2, Fraction(1, 3)):
        assert qp_mat(5, [[1, alpha], [0, 1]]).trace() == 2
        assert translation_length(qp_mat(5, [[1, alpha], [0, 1]])) == 0
        assert translation_length(qp_mat(5, [[1, 0], [alpha, 1]])) == 0


def test_counterexample_lengths():
    X, Y = counterexample_seeds(7)
    A, B = X @ Y, (X ** 3) @ (Y ** 3)
    assert translation_length(A) == 8
    assert translation_length(B) == 32


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_one_iteration_generator_length(p):
    A, _ = one_iteration_pair(p)
    assert translation_length(A) == 4
    assert cyclic_discrete(A) == (True, "v(tr) < 0")


def test_determinant_enforced():
    F = QpField(3)
    with pytest.raises(DeterminantError):
        Mat2.of(F, [[1, 1], [1, 1]])
    with pytest.raises(DeterminantError):
        parse_matrix("[[2,0],[0,1]]", F)


def test_parse_and_format():
    F = QpField(7)
    A = parse_matrix("[[7, 6], [-1/7, 1/49]]", F)
    assert A == one_iteration_pair(7)[0]
    assert parse_matrix(str(A), F) == A
    G = FpTField(3)
    B = parse_matrix("[[t, 0], [1, 1/t]]", G)
    assert translation_length(B) == 2
    assert parse_matrix(str(B), G) == B
    for bad in ["[[1,0],[0]]", "[1,0,0,1]", "[[1,0],[0,1]", "[[1,x],[0,1]]"]:
        with pytest.raises(ParseError):
            parse_matrix(bad, F)


def test_cyclic_discrete_examples():
    F = QpField(5)
    assert cyclic_discrete(-Mat2.identity(F))[0]
    assert finite_order(-Mat2.identity(F)) == 2
    ok, reason = cyclic_discrete(qp_mat(5, [[1, 1], [0, 1]]))
    assert not ok and "infinite order" in reason
    S = qp_mat(5, [[0, -1], [1, 0]])
    assert finite_order(S) == 4
    U = qp_mat(5, [[0, -1], [1, 1]])
    assert finite_order(U) == 6


def test_classify():
    A, _ = one_iteration_pair(3)
    assert classify(A).kind == "hyperbolic" and classify(A).length == 4
    assert classify(Mat2.identity(QpField(3))).kind == "elliptic"


@pytest.mark.parametrize("p", [2, 3, 5])
def test_length_invariants(p):
    rng = random.Random(p)
    for _ in range(60):
        A = random_sl2(rng, p)
        g = random_sl2(rng, p)
        n = translation_length(A)
        assert n % 2 == 0
        assert translation_length(A.inv()) == n
        assert translation_length(g @ A @ g.inv()) == n
    for _ in range(20):
        A = random_hyperbolic(rng, p)
        n = translation_length(A)
        for k in range(1, 6):
            assert translation_length(A ** k) == k * n


def _min_val(A):
    return A.min_valuation()


@pytest.mark.parametrize("p", [3, 5])
def test_growth_dichotomy(p):
    rng = random.Random(100 + p)
    for _ in range(8):
        A = random_hyperbolic(rng, p)
        vals = [_min_val(A ** n) for n in range(1, 31)]
        assert all(b < a for a, b in zip(vals[1:], vals[2:]))
    seen = 0
    while seen < 8:
        A = random_sl2(rng, p)
        if translation_length(A) or finite_order(A):
            continue
        seen += 1
        bound = min(0, _min_val(A), _min_val(A @ A))
        P = A
        for _ in range(50):
            assert _min_val(P) >= bound
            P = P @ A


def test_normalize_psl():
    F = QpField(5)
    I = Mat2.identity(F)
    assert normalize_psl(-I) == normalize_psl(I) == I
    rng = random.Random(1)
    for _ in range(100):
        A = random_sl2(rng, 5)
        assert normalize_psl(A) == normalize_psl(-A)
    G = FpTField(5)
    B = parse_matrix("[[t, 3], [1, (1+3)/t]]", G)
    assert normalize_psl(B) == normalize_psl(-B)


def test_sign_flip_verdict():
    A, B = one_iteration_pair(5)
    v1, v2 = decide(A, B), decide(-A, -B)
    assert v1.discrete_free == v2.discrete_free and v1.iterations == v2.iterations
