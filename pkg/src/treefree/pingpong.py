"""Ping-pong certificates on the Bruhat-Tits tree and constructive membership.

Given a certified pair ``(X, Y)`` we pick points ``p`` on the axis of ``X``
and ``q`` on the axis of ``Y`` so that the open segments ``(p, Xp)`` and
``(q, Yq)`` both contain the common path of the axes (or the ends of the
bridge between them).  The four subtrees

* ``U+``: vertices whose projection to ``Axis(X)`` lies at or beyond ``Xp``
* ``U-``: vertices whose projection to ``Axis(X)`` lies strictly before ``p``
* ``V+``, ``V-``: the same for ``Y`` with ``q`` and ``Yq``

are pairwise disjoint, and their complement ``D`` meets every vertex orbit
exactly once.  The minus regions are half-open so that a subtree hanging
off ``p`` belongs to ``D`` while its image hanging off ``Xp`` belongs to
``U+``.  ``p`` and ``q`` may be edge midpoints, so they are kept as doubled
axis positions.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from . import words
from .bt_tree import Axis, Disjoint, Overlap, TreeVertex, act, axes_relation, distance
from .reduction import DiscreteFree, NotDiscreteFree, certifies
from .sl2 import Mat2, format_matrix, normalize_psl, parse_matrix, translation_length
from .valued_field import make_field

CERTIFICATE_VERSION = 1


class CertificateError(ValueError):
    """The pair does not satisfy the ping-pong hypotheses."""


class MembershipError(RuntimeError):
    """The pull-back loop failed to reach the fundamental domain."""


class Region(enum.Enum):
    D = "D"
    U_PLUS = "U+"
    U_MINUS = "U-"
    V_PLUS = "V+"
    V_MINUS = "V-"


@dataclass(frozen=True)
class PingPongCertificate:
    X: Mat2
    Y: Mat2
    word_x: words.Word
    word_y: words.Word
    axis_x: Axis
    axis_y: Axis
    p2: int  # doubled position of p on Axis(X); X p is at p2 + 2 l(X)
    q2: int  # doubled position of q on Axis(Y)
    anchor: TreeVertex  # z', a vertex of D
    bridge: tuple[TreeVertex, TreeVertex] | None  # (p', q') for disjoint axes
    relation: Disjoint | Overlap

    @property
    def lx(self) -> int:
        return self.axis_x.length

    @property
    def ly(self) -> int:
        return self.axis_y.length

    def point(self, which: str) -> dict:
        """``p``, ``Xp``, ``q`` or ``Yq`` as a vertex, or the edge whose midpoint it is."""
        axis, pos2 = {
            "p": (self.axis_x, self.p2), "Xp": (self.axis_x, self.p2 + 2 * self.lx),
            "q": (self.axis_y, self.q2), "Yq": (self.axis_y, self.q2 + 2 * self.ly),
        }[which]
        if pos2 % 2 == 0:
            return {"vertex": axis.vertex_at(pos2 // 2).to_json()}
        lo = axis.vertex_at((pos2 - 1) // 2)
        hi = axis.vertex_at((pos2 + 1) // 2)
        return {"edge_midpoint": [lo.to_json(), hi.to_json()]}

    def to_json(self) -> dict:
        rel = self.relation
        if isinstance(rel, Disjoint):
            axes = {"kind": "disjoint", "k": rel.k}
        else:
            axes = {"kind": "overlap", "delta": rel.delta, "same_direction": rel.same_direction}
        return {
            "version": CERTIFICATE_VERSION,
            "field": self.X.field.descriptor,
            "X": format_matrix(self.X),
            "Y": format_matrix(self.Y),
            "word_x": words.to_str(self.word_x),
            "word_y": words.to_str(self.word_y),
            "lX": self.lx,
            "lY": self.ly,
            "axes": axes,
            "axis_x_anchor": self.axis_x.anchor.to_json(),
            "axis_y_anchor": self.axis_y.anchor.to_json(),
            "p2": self.p2,
            "q2": self.q2,
            "points": {k: self.point(k) for k in ("p", "Xp", "q", "Yq")},
            "z_anchor": self.anchor.to_json(),
            "bridge": None if self.bridge is None else [v.to_json() for v in self.bridge],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def load_certificate(doc: dict | str) -> PingPongCertificate:
    """Rebuild a certificate from its JSON form (geometry is recomputed and checked)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("version") != CERTIFICATE_VERSION:
        raise CertificateError(f"unsupported certificate version {doc.get('version')!r}")
    field = make_field(doc["field"])
    X, Y = parse_matrix(doc["X"], field), parse_matrix(doc["Y"], field)
    cert = build_certificate(X, Y, words.parse(doc["word_x"]), words.parse(doc["word_y"]))
    if (cert.p2, cert.q2, cert.anchor.to_json()) != (doc["p2"], doc["q2"], doc["z_anchor"]):
        raise CertificateError("stored geometry does not match the generators")
    return cert


def build_certificate(X: Mat2 | DiscreteFree, Y: Mat2 | None = None,
                      word_x: words.Word = words.A,
                      word_y: words.Word = words.B) -> PingPongCertificate:
    """Ping-pong data for a pair passing the length comparison.

    Also accepts a :class:`DiscreteFree` verdict, whose Nielsen words are kept.
    """
    if isinstance(X, NotDiscreteFree):
        raise CertificateError("the verdict is negative; there is nothing to certify")
    if isinstance(X, DiscreteFree):
        verdict = X
        X, Y, word_x, word_y = verdict.X, verdict.Y, verdict.word_x, verdict.word_y
    lx, ly = translation_length(X), translation_length(Y)
    lxy, lxinvy = translation_length(X @ Y), translation_length(X.inv() @ Y)
    if not certifies(lx, ly, lxy, lxinvy):
        raise CertificateError(
            f"lengths {(lx, ly, lxy, lxinvy)} fail |l(X)-l(Y)| < min(l(XY), l(X^-1Y))")
    ax, ay = Axis(X), Axis(Y)
    rel = axes_relation(X, Y, axes=(ax, ay))
    if isinstance(rel, Disjoint):
        p_foot, q_foot = rel.p_foot, rel.q_foot
        # p' and q' sit at the centres of (p, Xp) and (q, Yq)
        p2 = 2 * ax.position(p_foot) - lx
        q2 = 2 * ay.position(q_foot) - ly
        anchor = p_foot
        bridge = (p_foot, q_foot)
    else:
        if not rel.delta < min(lx, ly):
            raise CertificateError(f"axis overlap {rel.delta} is not shorter than both lengths")
        s, e = int(rel.start), int(rel.end)
        p2 = s + e - lx
        ys = sorted((ay.position(ax.vertex_at(s)), ay.position(ax.vertex_at(e))))
        q2 = ys[0] + ys[1] - ly
        if (s + e) % 2 == 0:
            anchor = ax.vertex_at((s + e) // 2)
        else:
            anchor = min(ax.vertex_at((s + e - 1) // 2), ax.vertex_at((s + e + 1) // 2),
                         key=TreeVertex.sort_key)
        bridge = None
    cert = PingPongCertificate(X, Y, tuple(word_x), tuple(word_y), ax, ay, p2, q2,
                               anchor, bridge, rel)
    if classify_vertex(cert, anchor) is not Region.D:
        raise CertificateError("anchor vertex is not in the fundamental domain")
    return cert


def classify_vertex(cert: PingPongCertificate, z: TreeVertex) -> Region:
    """Which of ``D, U+, U-, V+, V-`` contains ``z``, via projections to both axes."""
    fx, _ = cert.axis_x.project(z)
    tx2 = 2 * cert.axis_x.position(fx)
    fy, _ = cert.axis_y.project(z)
    ty2 = 2 * cert.axis_y.position(fy)
    region = Region.D
    if tx2 >= cert.p2 + 2 * cert.lx:
        region = Region.U_PLUS
    elif tx2 < cert.p2:
        region = Region.U_MINUS
    if ty2 >= cert.q2 + 2 * cert.ly or ty2 < cert.q2:
        if region is not Region.D:
            raise CertificateError(f"vertex {z} lies in both an X- and a Y-region")
        region = Region.V_PLUS if ty2 >= cert.q2 + 2 * cert.ly else Region.V_MINUS
    return region


@dataclass(frozen=True)
class MembershipAnswer:
    member: bool
    word: words.Word | None = None  # in the original generators a, b
    word_xy: words.Word | None = None  # in a = X, b = Y
    steps: int = 0


_PULL_BACK = {
    Region.U_PLUS: (1, "x_inv"),
    Region.U_MINUS: (-1, "x"),
    Region.V_PLUS: (2, "y_inv"),
    Region.V_MINUS: (-2, "y"),
}


def membership(cert: PingPongCertificate, C: Mat2, psl: bool = False) -> MembershipAnswer:
    """Decide ``C in <X, Y>`` and recover a word by pulling ``C z'`` back into ``D``.

    With ``psl=True`` the final comparison is made up to sign.
    """
    if C.field != cert.X.field:
        raise ValueError("query matrix over a different field")
    movers = {"x": cert.X, "x_inv": cert.X.inv(), "y": cert.Y, "y_inv": cert.Y.inv()}
    z = act(C, cert.anchor)
    cap = distance(cert.anchor, z) + 4
    w: list[int] = []
    steps = 0
    while True:
        region = classify_vertex(cert, z)
        if region is Region.D:
            break
        steps += 1
        if steps > cap:
            raise MembershipError(f"no return to D within {cap} steps")
        letter, mover = _PULL_BACK[region]
        z = act(movers[mover], z)
        w.append(letter)
    word_xy = tuple(w)
    image = words.evaluate(word_xy, cert.X, cert.Y, Mat2.__matmul__, Mat2.inv,
                           Mat2.identity(cert.X.field))
    same = normalize_psl(image) == normalize_psl(C) if psl else image == C
    if not (same and z == cert.anchor):
        return MembershipAnswer(False, steps=steps)
    word = words.substitute(word_xy, cert.word_x, cert.word_y)
    return MembershipAnswer(True, word, word_xy, steps)
