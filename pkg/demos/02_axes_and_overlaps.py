"""Axis geometry on the Bruhat-Tits tree and the four product-length cases.

A short-overlap pair shows why lengths alone cannot tell every configuration
apart: for A = XY and B = X^3 Y^3 the length tuple (8, 32, 40, 16) is
explained only after measuring a second overlap on the tree.
"""

from fractions import Fraction

from treefree import QpField, axes_relation, parse_matrix, translation_length
from treefree.bt_tree import Axis, overlap_length
from treefree.reduction import overlap_from_lengths
from treefree.sl2 import Mat2

F = QpField(7)
X = parse_matrix("[[343, 0], [0, 1/343]]", F)
Y = parse_matrix("[[2/7^7, 343], [1/343, 7^7]]", F)
A, B = X @ Y, (X ** 3) @ (Y ** 3)

lengths = [translation_length(m) for m in (A, B, A @ B, A.inv() @ B)]
print("l(A), l(B), l(AB), l(A^-1 B) =", lengths)
print("read off the lengths:", overlap_from_lengths(*lengths))
print("axes of A^-1 and B:", axes_relation(A.inv(), B))
second = overlap_length(B, A.inv() @ B @ A)
print(f"overlap of Axis(B) with its image under A^-1: {second}")
print(f"|l(A) - l(B)| - 2 * {second} = {abs(lengths[0] - lengths[1]) - 2 * second}")

ax = Axis(A)
print("\nfirst vertices on the axis of A:", [str(ax.vertex_at(t)) for t in range(5)])

# disjoint axes: the product length picks up twice the gap
P = parse_matrix("[[49, 0], [0, 1/49]]", F)
g = Mat2.of(F, [[1 + Fraction(7**3), 1], [Fraction(1, 7**3), Fraction(1, 7**3)]])
Q = g @ parse_matrix("[[343, 0], [0, 1/343]]", F) @ g.inv()
rel = axes_relation(P, Q)
print(f"\ndisjoint pair: {rel.__class__.__name__} at distance {rel.k}; "
      f"l(PQ) = {translation_length(P @ Q)} = {translation_length(P)} + "
      f"{translation_length(Q)} + 2*{rel.k}")
