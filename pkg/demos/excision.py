"""Factorisation homology on the interval and the circle.

A gluing diagram cuts a 1-manifold at random points; pieces longer than
average are replaced by bar resolutions, so each diagram gives a different
complex.  Excision says that the homology does not depend on the choice.
"""

import random

from koszulfh import (GluingDiagram, IntervalAlgebra, circle_homology, exterior, global_value,
                      truncated_tensor)
from koszulfh.interval import glued_complex

rng = random.Random(1)
a = exterior(["x", "y"], [1, 1])
ia = IntervalAlgebra.compact(a)

print("interval with trivial endpoint modules, A =", a.name)
for cuts in (0, 1, 2, 3):
    g = GluingDiagram.random("interval", cuts, ia, rng)
    cx = glued_complex(g)
    dims = cx.complex(0, 6).dims()
    print(f"  cuts {g.positions}  chain dims {[dims.get(n, 0) for n in range(7)]}  "
          f"H = {list(global_value(g, 0, 6).values())}")

print("\ncircle, A =", a.name, "(Hochschild homology)")
print("  direct:", list(circle_homology(a, 0, 6).values()))
for cuts in (1, 2, 3):
    g = GluingDiagram.random("circle", cuts, a, rng)
    print(f"  cuts {g.positions}  resolved {g.resolved()}  "
          f"H = {list(global_value(g, 0, 6).values())}")

# a monodromy twists the circle; x -> -x, y -> y is an automorphism once
# it is extended multiplicatively to the words containing one x
b = truncated_tensor(["x", "y"], [1, 2], 2)
phi = {"x": {"x": -1}, "x*y": {"x*y": -1}, "y*x": {"y*x": -1}}
print("\ncircle with monodromy x -> -x, A =", b.name)
for cuts in (1, 2):
    g = GluingDiagram.evenly("circle", cuts, b, monodromy=phi)
    print(f"  {cuts} cuts: H = {list(global_value(g, 0, 6).values())}")
print(f"  untwisted: H = {list(circle_homology(b, 0, 6).values())}")
