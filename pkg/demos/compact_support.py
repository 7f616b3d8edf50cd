"""Compactly supported factorisation homology and the duality kernel.

On an open interval the compactly supported value of A is the Koszul dual;
on k disjoint intervals it is the k-fold tensor power, so Betti numbers
convolve.  The duality check compares the glued value with the cotensor of
the pieces over the Koszul dual of the cut.
"""

from koszulfh import (compact_support, convolve, exterior, poincare_check, square_zero,
                      truncated_polynomial)

for a in (exterior(["x"], [1]), square_zero([("x", 1), ("y", 1)])):
    print("A =", a.name)
    one = compact_support(a, ["interval"], 0, 6).betti
    power = {0: 1}
    for k in (1, 2, 3):
        power = convolve(power, one)
        comps = [(f"in{i}", f"out{i}") for i in range(k)]
        got = compact_support(a, comps, 0, 6).betti
        want = [power.get(n, 0) for n in range(7)]
        print(f"  {k} intervals: {list(got.values())}  convolution {want}")

print()
for a in (exterior(["x"], [1]), truncated_polynomial("x", 2, 3)):
    v = poincare_check(a, None, 0, 5)
    print(f"duality kernel for {a.name}: {v.ok}, glued {list(v.details['glued_betti'].values())}")
