"""Running the decision with finitely many digits per entry.

Starting from a deliberately small precision, the truncated run loses the
sign of some trace valuation, raises, and restarts with more digits.  The
verdict always matches the exact computation.
"""

from treefree import QpField, decide, decide_with_restarts, parse_matrix, truncate
from treefree.reduction import storage_bound

F = QpField(5)
x = truncate(F, F.parse("2/125"), 0)
print("2/125 to exponent 0:", x)
print("its inverse:", x.inverse())

for r in (1, 3, 5):
    A = parse_matrix("[[125, 0], [0, 1/125]]", F)
    B = parse_matrix(f"[[2/5^{3 * r + 1}, 125], [1/125, 5^{3 * r + 1}]]", F)
    exact = decide(A, B)
    rr = decide_with_restarts(A, B, 0)
    print(f"r={r}: exact {exact.iterations} iterations; truncated {rr.verdict.iterations} "
          f"iterations after {rr.restarts} restart(s) {list(rr.attempts)}; "
          f"digits consumed {rr.consumed}, a priori bound {storage_bound(A, B, exact.iterations)}")
