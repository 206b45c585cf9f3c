"""Geometry of the Bruhat-Tits tree of SL2 over a discretely valued field.

A vertex is the homothety class of the lattice spanned by the columns of
``[[pi^n, b], [0, 1]]``; it is stored as ``(n, b)`` with ``b`` reduced to
the finite digit sum ``sum_{i<n} a_i pi^i``.  Equivalently ``(n, b)`` is the
closed ball ``{x : v(x - b) >= n}`` of the field, and adjacency is
inclusion of balls whose radii differ by one.

Distances are reported in doubled units (one edge = 2) so that edge
midpoints have integer coordinates; positions along an axis are reported
in edge units and doubled explicitly where midpoints matter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Any, Iterator

from .sl2 import Mat2, translation_length
from .valued_field import Field


class EllipticError(ValueError):
    """A hyperbolic element was required."""


@dataclass(frozen=True)
class TreeVertex:
    n: int
    b: Any
    field: Field = dc_field(compare=False, repr=False)

    def lattice(self) -> tuple:
        """Basis matrix entries ``(a, b, c, d)`` of a representative lattice."""
        f = self.field
        return (f.pi_power(self.n), self.b, f.zero, f.one)

    def sort_key(self):
        return (self.n, self.field.sort_key(self.b))

    def __str__(self):
        ds = ""
        if self.b:
            N, digits = self.field.digits(self.b, self.n - 1)
            ds = f"{N}:" + "".join(map(str, digits))
        return f"({self.n}; {ds or '0'})"

    def to_json(self) -> dict:
        return {"n": self.n, "b": self.field.format(self.b)}


def base_vertex(field: Field) -> TreeVertex:
    """The class of the standard lattice ``O^2``."""
    return TreeVertex(0, field.zero, field)


def vertex(field: Field, n: int, b=0) -> TreeVertex:
    return TreeVertex(n, field.reduce_mod(field(b), n), field)


def canonical_vertex(field: Field, a, b, c, d) -> TreeVertex:
    """Vertex of the lattice spanned by the columns ``(a, c)`` and ``(b, d)``.

    Column operations over ``O`` bring the basis to upper-triangular form:
    the column whose bottom entry has least valuation clears the other one.
    """
    return _canonical(field, field(a), field(b), field(c), field(d))


def _canonical(field: Field, a, b, c, d) -> TreeVertex:
    v = field.valuation
    if not (a * d - b * c):
        raise ValueError("singular basis")
    if c:
        if not d or v(c) < v(d):
            a, b, c, d = b, a, d, c
        # now v(d) <= v(c): subtract (c/d) * second column from the first
        r = c / d
        a, c = a - r * b, field.zero
    # [[a, b], [0, d]] ~ [[a/d, b/d], [0, 1]]
    n = v(a) - v(d)
    return TreeVertex(n, field.reduce_mod(b / d, n), field)


def act(g: Mat2, u: TreeVertex) -> TreeVertex:
    x, y, _, w = u.lattice()
    # g @ [[x, y], [0, 1]]
    return _canonical(g.field, g.a * x, g.a * y + g.b, g.c * x, g.c * y + g.d)


def _meet(u: TreeVertex, w: TreeVertex) -> int:
    """Level of the smallest ball containing both (the geodesic's top vertex)."""
    f = u.field
    return min(u.n, w.n, f.valuation(u.b - w.b))


def distance(u: TreeVertex, w: TreeVertex) -> int:
    """Doubled distance: twice the gap between the elementary divisors of the transition matrix.

    For bases ``M_u``, ``M_w`` the transition ``M_u^-1 M_w`` is
    ``[[pi^(n_w - n_u), (b_w - b_u) pi^(-n_u)], [0, 1]]``; its elementary
    divisors have valuations ``e1 = min(entry valuations)`` and
    ``e2 = v(det) - e1``.
    """
    f = u.field
    e1 = min(w.n - u.n, f.valuation(w.b - u.b) - u.n, 0)
    e2 = (w.n - u.n) - e1
    return 2 * (e2 - e1)


def ancestor(u: TreeVertex, level: int) -> TreeVertex:
    """The vertex at level ``level <= u.n`` on the ray from ``u`` to the end at infinity."""
    return TreeVertex(level, u.field.reduce_mod(u.b, level), u.field)


def geodesic_point(u: TreeVertex, w: TreeVertex, i: int) -> TreeVertex:
    """The ``i``-th vertex (in edge units) on the geodesic from ``u`` to ``w``."""
    top = _meet(u, w)
    up = u.n - top
    if i <= up:
        return ancestor(u, u.n - i)
    return ancestor(w, top + (i - up))


def geodesic(u: TreeVertex, w: TreeVertex) -> list[TreeVertex]:
    top = _meet(u, w)
    path = [ancestor(u, n) for n in range(u.n, top - 1, -1)]
    path += [ancestor(w, n) for n in range(top + 1, w.n + 1)]
    return path


def neighbors(u: TreeVertex) -> list[TreeVertex]:
    f = u.field
    step = f.pi_power(u.n)
    out = [TreeVertex(u.n + 1, u.b + f(a) * step, f) for a in range(f.p)]
    out.append(ancestor(u, u.n - 1))
    return out


def ball(center: TreeVertex, radius: int) -> list[TreeVertex]:
    """All vertices within ``radius`` edges, breadth first."""
    seen = {center}
    frontier = [center]
    out = [center]
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for w in neighbors(u):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        out += nxt
        frontier = nxt
    return out


def displacement(g: Mat2, u: TreeVertex) -> int:
    """Doubled ``d(u, g u)``."""
    return distance(u, act(g, u))


class Axis:
    """The translation axis of a hyperbolic element, with integer coordinates.

    ``anchor`` sits at position 0 and ``A`` moves position ``t`` to
    ``t + length``.
    """

    def __init__(self, A: Mat2):
        self.A = A
        self.length = translation_length(A)
        if not self.length:
            raise EllipticError("elliptic element has no axis")
        self.A_inv = A.inv()
        self.anchor = axis_vertex(A)
        self._segment = geodesic(self.anchor, act(A, self.anchor))
        self._behind = act(self.A_inv, self.anchor)
        # A^(2^i) and A^-(2^i), for jumping along the axis
        self._powers = {1: [A], -1: [self.A_inv]}

    def _power(self, sign: int, i: int) -> Mat2:
        table = self._powers[sign]
        while len(table) <= i:
            table.append(table[-1] @ table[-1])
        return table[i]

    def contains(self, u: TreeVertex) -> bool:
        return displacement(self.A, u) == 2 * self.length

    def vertex_at(self, t: int) -> TreeVertex:
        q, r = divmod(t, self.length)
        u = self._segment[r]
        sign, q = (1, q) if q >= 0 else (-1, -q)
        i = 0
        while q:
            if q & 1:
                u = act(self._power(sign, i), u)
            q >>= 1
            i += 1
        return u

    def position(self, u: TreeVertex) -> int:
        """Signed position of an axis vertex."""
        d = distance(self.anchor, u)
        if distance(self._behind, u) == d + 2 * self.length:
            return d // 2
        return -(d // 2)

    def project(self, z: TreeVertex) -> tuple[TreeVertex, int]:
        """Nearest axis vertex and its distance ``k`` in edges."""
        image = act(self.A, z)
        k = (distance(z, image) // 2 - self.length) // 2
        return geodesic_point(z, image, k), k

    def step(self, u: TreeVertex, direction: int = 1) -> TreeVertex:
        """Neighbour of the axis vertex ``u`` in the given direction."""
        g = self.A if direction > 0 else self.A_inv
        return geodesic_point(u, act(g, u), 1)


def axis_vertex(A: Mat2) -> TreeVertex:
    """A vertex on the axis of ``A``: the midpoint of ``[x, A x]`` for the base vertex ``x``."""
    if not translation_length(A):
        raise EllipticError("elliptic element has no axis")
    x = base_vertex(A.field)
    y = act(A, x)
    return geodesic_point(x, y, distance(x, y) // 4)


def project_to_axis(A: Mat2, z: TreeVertex) -> tuple[TreeVertex, int]:
    if not translation_length(A):
        raise EllipticError("elliptic element has no axis")
    return Axis(A).project(z)


@dataclass(frozen=True)
class Disjoint:
    """Axes at distance ``k`` edges; ``p_foot``/``q_foot`` are the bridge ends."""

    k: int
    p_foot: TreeVertex
    q_foot: TreeVertex


@dataclass(frozen=True)
class Overlap:
    """Axes meet along a path of ``delta`` edges (``math.inf`` past the window).

    ``start`` and ``end`` are the positions of the common path on the first
    axis; ``same_direction`` is ``None`` when the axes meet in one vertex.
    """

    delta: float
    same_direction: bool | None
    start: float
    end: float


def axes_relation(A: Mat2, B: Mat2, window: int | None = None,
                  axes: tuple[Axis, Axis] | None = None) -> Disjoint | Overlap:
    """How the axes of two hyperbolic elements meet.

    A point of the second axis is projected onto the first; the foot lies on
    the second axis exactly when the axes intersect.  The common path is then
    walked in both directions, at most ``window`` edges each way (default
    ``4 (l(A) + l(B))``).
    """
    ax_a, ax_b = axes or (Axis(A), Axis(B))
    if window is None:
        window = 4 * (ax_a.length + ax_b.length)
    foot, _ = ax_a.project(ax_b.anchor)
    if not ax_b.contains(foot):
        q_foot, k = ax_b.project(foot)
        return Disjoint(k, foot, q_foot)

    t0 = ax_a.position(foot)
    # the common path is an interval of positions around t0
    fwd = _extent(lambda j: ax_b.contains(ax_a.vertex_at(t0 + j)), window)
    back = _extent(lambda j: ax_b.contains(ax_a.vertex_at(t0 - j)), window)
    delta = fwd + back
    same = None
    if delta:
        j = 1 if fwd else -1
        s0, s1 = ax_b.position(foot), ax_b.position(ax_a.vertex_at(t0 + j))
        same = (s1 > s0) == (j > 0)
    return Overlap(delta, same, t0 - back, t0 + fwd)


def _extent(inside, window: int) -> float:
    """Largest ``j <= window`` with ``inside(1..j)`` all true (``inf`` if it reaches the window).

    ``inside`` must be monotone: true up to some point, false after.
    """
    lo, hi = 0, 1
    while hi <= window and inside(hi):
        lo, hi = hi, 2 * hi
    if hi > window:
        if inside(window):
            return math.inf
        hi = window
    # inside(lo) holds (or lo == 0), inside(hi) fails
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if inside(mid):
            lo = mid
        else:
            hi = mid
    return lo


def overlap_length(A: Mat2, B: Mat2, window: int | None = None) -> float:
    """Length of the common path of two axes; ``-1`` when disjoint."""
    rel = axes_relation(A, B, window)
    return -1 if isinstance(rel, Disjoint) else rel.delta
