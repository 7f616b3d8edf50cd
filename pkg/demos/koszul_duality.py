"""Koszul duality for small augmented dg algebras.

For each algebra A we print the homology of A, of its Koszul dual
coalgebra A^! = B(1, A, 1) and of the cobar construction of A^!, and we
check that the last agrees with the first through an explicit chain map.
"""

from koszulfh import (completeness_map, exterior, graded_betti, koszul_dual, regular_module,
                      roundtrip_check, square_zero, trivial_module, truncated_polynomial,
                      truncated_tensor)


def row(b):
    return " ".join(f"{b[n]:2d}" for n in sorted(b))


catalog = [exterior(["x"], [1]), exterior(["x", "y"], [1, 1]), truncated_polynomial("x", 2, 3),
           square_zero([("x", 1), ("y", 1)]), truncated_tensor(["x", "y"], [1, 2], 2)]

print("degrees              " + " ".join(f"{n:2d}" for n in range(9)))
for a in catalog:
    dual = graded_betti(koszul_dual(a), 0, 8)
    v = roundtrip_check(a, 0, 8)
    print(f"{a.name:14s} H(A)   {row(v.details['source_betti'])}")
    print(f"{'':14s} H(A^!) {row(dual)}")
    print(f"{'':14s} roundtrip chain map {v.details['chain_map']}, verdict {v.ok}")

# the exterior algebra on one odd class is dual to a polynomial coalgebra on a
# class of degree 2; the dual of k[x]/x^3 with |x| = 2 has classes in degrees
# 0, 3, 8, 11, ... (one odd generator in degree 3, one even in degree 8)
a = truncated_polynomial("x", 2, 3)
print("\ncompleteness of K = A and K = 1 over", a.name)
for k in (regular_module(a, "right"), trivial_module(a, "right")):
    _, v = completeness_map(k, a, 0, 6)
    print(f"  {k.name or 'module':10s} quasi-iso {v.ok}  H = {row(v.details['target_betti'])}")
