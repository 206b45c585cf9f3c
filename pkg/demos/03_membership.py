"""Build a ping-pong certificate and use it to solve the membership problem.

Each query is pushed back into the fundamental domain one letter at a time.
The letters read along the way spell the word, which is rewritten into the
original generators.
"""

import random

from treefree import QpField, build_certificate, decide, membership, parse_matrix
from treefree.sl2 import Mat2
from treefree import words

F = QpField(3)
A = parse_matrix("[[27, 0], [0, 1/27]]", F)
B = parse_matrix("[[2/3^4, 27], [1/27, 3^4]]", F)
verdict = decide(A, B)
cert = build_certificate(verdict)
print("certified generators:", words.to_str(cert.word_x), words.to_str(cert.word_y))
print("axes:", cert.relation)
print("points:", {k: cert.point(k) for k in ("p", "Xp", "q", "Yq")})


def evaluate(w):
    return words.evaluate(w, A, B, Mat2.__matmul__, Mat2.inv, Mat2.identity(F))


rng = random.Random(0)
for _ in range(5):
    w = words.random_reduced(rng.randint(1, 8), rng)
    ans = membership(cert, evaluate(w))
    print(f"{words.to_str(w):>10} -> member={ans.member}, recovered {words.to_str(ans.word)} "
          f"in {ans.steps} steps")

minus_one = -Mat2.identity(F)
print("-I strict:", membership(cert, minus_one).member,
      "| up to sign:", membership(cert, minus_one, psl=True).member)
print("[[1,1],[0,1]]:", membership(cert, parse_matrix("[[1,1],[0,1]]", F)).member)

print("\ncertificate JSON (truncated):")
print(cert.dumps()[:400], "...")
