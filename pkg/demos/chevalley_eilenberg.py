"""The Chevalley-Eilenberg complex and its weight filtration.

C(g) = Sym(sg) with the internal and Chevalley-Eilenberg differentials.
The filtration by symmetric weight has layers with zero CE part, the
product map C(g) (x) C(h) -> C(g + h) is a signed bijection on each layer,
and the graded coalgebra satisfies excision on the interval and circle.
"""

from koszulfh import (abelian, ce_complex, ce_homology, heisenberg, layer, lie_cone,
                      lie_excision_check, monoidality_check)
from koszulfh.chain import betti_table

h3 = heisenberg()
print("Heisenberg algebra: H_CE =", ce_homology(h3, 3, 0, 3).betti)
c = ce_complex(h3, 3)
for r in range(4):
    q = layer(c, r)
    print(f"  layer {r}: dims {q.dims()}  homology {betti_table(q, 0, 4)}")

cone = lie_cone(h3)
h = ce_homology(cone, 5, 0, 4)
print("\ncone on the Heisenberg algebra:", h.betti, "certified" if h.certified else "truncated")

print("\nmonoidality, weight cap 3")
for g, k in [(abelian(2), abelian(1, 1)), (h3, abelian(1))]:
    v = monoidality_check(g, k, 3, 0, 6)
    dims = {r: d["dims"] for r, d in v.details["layers"].items()}
    print(f"  {g.name} + {k.name}: {v.ok}; layer dims {dims}")

print("\nexcision for the graded CE coalgebra")
for g in (abelian(2), h3):
    for m in ("interval", "circle"):
        v = lie_excision_check(g, m, 3, 0, 4)
        print(f"  {g.name} on the {m}: {v.ok}")
