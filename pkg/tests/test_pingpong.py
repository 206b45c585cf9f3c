import random
from fractions import Fraction

import pytest

from _support import (counterexample_seeds, disjoint_pair, iteration_family_pair,
                      one_iteration_pair, qp_mat, random_sl2, word_matrix)
from treefree import words
from treefree.bt_tree import Disjoint, act, ball, distance, geodesic, neighbors
from treefree.pingpong import (CertificateError, Region, build_certificate, classify_vertex,
                               load_certificate, membership)
from treefree.reduction import decide
from treefree.sl2 import Mat2

FIRST_LETTER = {1: Region.U_PLUS, -1: Region.U_MINUS, 2: Region.V_PLUS, -2: Region.V_MINUS}


def certified_pairs():
    return {
        "one_iteration_p7": decide(*one_iteration_pair(7)),
        "family_p3_r1": decide(*iteration_family_pair(3, 1)),
        "disjoint_p3": decide(*disjoint_pair(3)),
        "one_iteration_p2": decide(*one_iteration_pair(2)),
    }


@pytest.fixture(scope="module")
def certs():
    return {name: build_certificate(v) for name, v in certified_pairs().items()}


def test_anchor_in_domain(certs):
    for cert in certs.values():
        assert classify_vertex(cert, cert.anchor) is Region.D
        z = cert.anchor
        assert classify_vertex(cert, act(cert.X, z)) is Region.U_PLUS
        assert classify_vertex(cert, act(cert.X.inv(), z)) is Region.U_MINUS
        assert classify_vertex(cert, act(cert.Y, z)) is Region.V_PLUS
        assert classify_vertex(cert, act(cert.Y.inv(), z)) is Region.V_MINUS


def test_disjoint_certificate_contains_bridge(certs):
    cert = certs["disjoint_p3"]
    assert isinstance(cert.relation, Disjoint) and cert.bridge is not None
    p_foot, q_foot = cert.bridge
    for v in geodesic(p_foot, q_foot):
        assert classify_vertex(cert, v) is Region.D


def test_overlap_interiors_contain_common_path(certs):
    cert = certs["one_iteration_p7"]
    rel = cert.relation
    assert not isinstance(rel, Disjoint)
    # common path [start, end] sits strictly inside (p, Xp), in doubled units
    assert cert.p2 < 2 * rel.start and 2 * rel.end < cert.p2 + 2 * cert.lx


def test_first_letter_regions(certs):
    rng = random.Random(1)
    for cert in certs.values():
        for _ in range(200 // len(certs)):
            w = words.random_reduced(rng.randint(1, 6), rng)
            g = word_matrix(w, cert.X, cert.Y)
            assert classify_vertex(cert, act(g, cert.anchor)) is FIRST_LETTER[w[0]]


def test_ping_pong_containments(certs):
    cert = certs["family_p3_r1"]
    rng = random.Random(2)
    movers = [(cert.X, Region.U_MINUS, Region.U_PLUS), (cert.X.inv(), Region.U_PLUS, Region.U_MINUS),
              (cert.Y, Region.V_MINUS, Region.V_PLUS), (cert.Y.inv(), Region.V_PLUS, Region.V_MINUS)]
    checked = 0
    while checked < 100:
        z = cert.anchor
        for _ in range(rng.randint(0, 8)):
            z = rng.choice(neighbors(z))
        for g, avoid, target in movers:
            if classify_vertex(cert, z) is not avoid:
                assert classify_vertex(cert, act(g, z)) is target
        checked += 1


def test_regions_partition_ball():
    """Exhaustive check on a radius-6 ball with p = 2: every vertex gets exactly one region."""
    cert = build_certificate(decide(*one_iteration_pair(2)))
    counts = {r: 0 for r in Region}
    for z in ball(cert.anchor, 6):
        counts[classify_vertex(cert, z)] += 1
    assert sum(counts.values()) == 1 + 3 * (2 ** 6 - 1)
    assert all(counts.values())


def test_every_vertex_pulls_back_to_domain(certs):
    """D is a fundamental domain for the whole tree, not only for the orbit of z'."""
    step = {Region.U_PLUS: ("X", -1), Region.U_MINUS: ("X", 1),
            Region.V_PLUS: ("Y", -1), Region.V_MINUS: ("Y", 1)}
    for cert in certs.values():
        movers = {("X", 1): cert.X, ("X", -1): cert.X.inv(),
                  ("Y", 1): cert.Y, ("Y", -1): cert.Y.inv()}
        for z in ball(cert.anchor, 4):
            cap = distance(cert.anchor, z) + 4
            for _ in range(cap + 1):
                region = classify_vertex(cert, z)
                if region is Region.D:
                    break
                z = act(movers[step[region]], z)
            assert classify_vertex(cert, z) is Region.D


def test_membership_round_trip(certs):
    rng = random.Random(3)
    for name, cert in certs.items():
        gens = _original_generators(name)
        for _ in range(50):
            w = words.random_reduced(rng.randint(0, 10), rng)
            C = word_matrix(w, *gens)
            ans = membership(cert, C)
            assert ans.member and words.reduce(ans.word) == w
            assert word_matrix(ans.word, *gens) == C


def _original_generators(name):
    return {
        "one_iteration_p7": one_iteration_pair(7),
        "family_p3_r1": iteration_family_pair(3, 1),
        "disjoint_p3": disjoint_pair(3),
        "one_iteration_p2": one_iteration_pair(2),
    }[name]


def test_membership_rejections(certs):
    cert = certs["one_iteration_p7"]
    F = cert.X.field
    I = Mat2.identity(F)
    ans = membership(cert, I)
    assert ans.member and ans.word == ()
    assert not membership(cert, -I).member
    assert not membership(cert, qp_mat(7, [[1, 1], [0, 1]])).member
    assert not membership(cert, qp_mat(7, [[0, -1], [1, 0]])).member
    # a hyperbolic element outside the group
    assert not membership(cert, qp_mat(7, [[7, 0], [0, Fraction(1, 7)]])).member


def test_psl_mode(certs):
    cert = certs["family_p3_r1"]
    A, B = iteration_family_pair(3, 1)
    C = word_matrix(words.parse("abAB"), A, B)
    assert not membership(cert, -C).member
    ans = membership(cert, -C, psl=True)
    assert ans.member and ans.word == words.parse("abAB")


def test_json_round_trip(certs):
    for cert in certs.values():
        doc = cert.dumps()
        again = load_certificate(doc)
        assert again.dumps() == doc
        assert again.anchor == cert.anchor


def test_rejects_uncertified_pair():
    X, Y = counterexample_seeds(7)
    with pytest.raises(CertificateError):
        build_certificate(X @ Y, (X ** 3) @ (Y ** 3))
    with pytest.raises(CertificateError):
        build_certificate(decide(*counterexample_seeds(2)))
    with pytest.raises(CertificateError):
        load_certificate({"version": 99})


def test_conjugated_certificate_still_works():
    rng = random.Random(5)
    A, B = one_iteration_pair(5)
    g = random_sl2(rng, 5)
    A2, B2 = g @ A @ g.inv(), g @ B @ g.inv()
    cert = build_certificate(decide(A2, B2))
    w = words.parse("abbA")
    ans = membership(cert, word_matrix(w, A2, B2))
    assert ans.member and words.reduce(ans.word) == w
