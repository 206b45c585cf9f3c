"""Decide whether two matrices generate a discrete free group.

Three pairs over the 7-adic rationals: one certified immediately, one that
needs several Nielsen moves, and one made of unipotents (rejected at once).
The same question is then asked over F_3(t).
"""

from treefree import FpTField, QpField, decide, parse_matrix, translation_length
from treefree.words import to_str

F = QpField(7)
pairs = {
    "one move": ("[[7, 6], [-1/7, 1/49]]", "[[2/7^4, 343], [1/343, 7^4]]"),
    "several moves": ("[[343, 0], [0, 1/343]]", "[[2/7^10, 343], [1/343, 7^10]]"),
    "unipotent": ("[[1, 2], [0, 1]]", "[[1, 0], [2, 1]]"),
}

for name, (a, b) in pairs.items():
    A, B = parse_matrix(a, F), parse_matrix(b, F)
    v = decide(A, B)
    print(f"{name}: l(A)={translation_length(A)} l(B)={translation_length(B)}")
    for step in v.trace:
        print("   ", step.to_json())
    if v.discrete_free:
        print(f"  -> discrete and free after {v.iterations} iteration(s); "
              f"X = {to_str(v.word_x)}, Y = {to_str(v.word_y)}")
    else:
        print(f"  -> not discrete-free: {to_str(v.witness_word)} is elliptic ({v.witness_kind})")

G = FpTField(3)
A = parse_matrix("[[t^2, 0], [0, 1/t^2]]", G)
B = parse_matrix("[[2/t^4, t^2], [1/t^2, t^4]]", G)
v = decide(A, B)
print(f"\nover F_3(t): discrete_free={v.discrete_free}, iterations={v.iterations}")
