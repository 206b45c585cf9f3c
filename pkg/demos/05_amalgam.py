"""The same decision loop over an amalgamated free product of finite groups.

Z/4 *_{Z/2} Z/6 is SL2(Z).  Translation lengths on its Bass-Serre tree come
from cyclically reduced normal forms.
"""

from treefree import decide_amalgam
from treefree.amalgam import z4_z2_z6

spec = z4_z2_z6()
for text in ["H.s1", "H.s1 K.u1", "K.u2 H.s1 K.u4", "H.s1 K.u1 H.s1 K.u2"]:
    g = spec.parse_word(text)
    print(f"{text:>22}: normal form {spec.format(g):>22}, length {spec.translation_length(g)}")

A = spec.parse_word("H.s1 K.u1 H.s1 K.u2")
w = spec.parse_word("K.u2 H.s1 K.u1 H.s1")
B = spec.mul(spec.mul(w, A), spec.inv(w))
v = decide_amalgam(spec, A, B)
print("\nA and a far conjugate of A:", "discrete and free" if v.discrete_free else "rejected",
      f"after {v.iterations} iteration(s)")
v = decide_amalgam(spec, "H.s1", "K.u1")
print("the two vertex-group generators:", v.witness_kind)
