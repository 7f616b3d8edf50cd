from math import comb

import pytest

from koszulfh.chain import validate
from koszulfh.errors import MalformedInputError
from koszulfh.field import GF
from koszulfh.lie import (DGLie, abelian, ce_coalgebra, ce_complex, ce_filtration_ok,
                          ce_homology, direct_sum, heisenberg, layer, lie_cone, lie_excision_check,
                          lie_from_tables, monoidality_check, monoidality_map, sym_dims,
                          validate_lie)
from koszulfh.dg import validate_coalgebra

import oracles


def zero_lie():
    return DGLie([], {}, name="0")


def bad_jacobi():
    # antisymmetric, but [x,[y,z]] + cyclic != 0
    t = {("x", "y"): {"y": 1}, ("y", "x"): {"y": -1},
         ("y", "z"): {"x": 1}, ("z", "y"): {"x": -1}}
    return lie_from_tables([("x", 0), ("y", 0), ("z", 0)], t)


# validation


def test_standard_tables_validate():
    for g in [abelian(3), abelian(2, 1), heisenberg(), zero_lie(), lie_cone(heisenberg()),
              direct_sum(heisenberg(), abelian(1, 1))]:
        assert validate_lie(g).ok, g


def test_jacobi_failure_has_triple_witness():
    rep = validate_lie(bad_jacobi())
    assert not rep.ok
    jac = [f for f in rep.failures if f["axiom"] == "Jacobi"]
    assert jac and all(len(f["witness"]) == 3 for f in jac)


def test_antisymmetry_failure():
    t = {("x", "y"): {"z": 1}, ("y", "x"): {"z": 1}}
    rep = validate_lie(lie_from_tables([("x", 0), ("y", 0), ("z", 0)], t))
    assert any(f["axiom"] == "antisymmetry" for f in rep.failures)


def test_leibniz_failure():
    # d[x, z] = d w = y but [dx, z] = [x, dz] = 0
    basis = [("x", 1), ("y", 0), ("z", 0), ("w", 1)]
    t = {("x", "z"): {"w": 1}, ("z", "x"): {"w": -1}}
    rep = validate_lie(lie_from_tables(basis, t, d={"w": {"y": 1}}))
    assert any(f["axiom"] == "Leibniz" for f in rep.failures)


def test_rejects_prime_field():
    with pytest.raises(MalformedInputError):
        DGLie([("x", 0)], {}, field=GF(7))


def test_rejects_unknown_labels():
    with pytest.raises(MalformedInputError):
        DGLie([("x", 0)], {("x", "q"): {"x": 1}})


# the complex


def test_abelian_degree_zero_dims():
    c = ce_complex(abelian(1), 3)
    assert c.total.dims() == {0: 1, 1: 1}


def test_abelian_degree_one_dims():
    R = 4
    c = ce_complex(abelian(1, 1), R)
    assert c.total.dims() == {2 * k: 1 for k in range(R + 1)}


def test_ce_complex_squares_to_zero_and_respects_weight():
    for g in [heisenberg(), lie_cone(heisenberg()), direct_sum(heisenberg(), abelian(1, 1))]:
        c = ce_complex(g, 4)
        assert validate(c.total).ok
        assert ce_filtration_ok(c)
        assert c.filtration.validate().ok


def test_heisenberg_matrices_match_dense_oracle():
    g = heisenberg()
    idx = {x: i for i, x in enumerate(g.labels)}
    bracket = {(idx[x], idx[y]): {idx[z]: c for z, c in v.items()}
               for (x, y), v in g.table.items()}
    dims, mats, basis = oracles.ce_dense(3, bracket)
    c = ce_complex(g, 3)
    for k in range(4):
        ours = [tuple(idx[x] for x in m) for m in c.total.basis[k]]
        assert sorted(ours) == basis[k]
    for k, dense in mats.items():
        rows = [tuple(idx[x] for x in m) for m in c.total.basis[k - 1]]
        cols = [tuple(idx[x] for x in m) for m in c.total.basis[k]]
        d = c.total.d(k)
        for i, r in enumerate(rows):
            for j, s in enumerate(cols):
                assert d[i, j] == dense[basis[k - 1].index(r)][basis[k].index(s)]


def test_heisenberg_homology():
    h = ce_homology(heisenberg(), 3, 0, 3)
    dims, mats, _ = oracles.ce_dense(3, {(0, 1): {2: 1}, (1, 0): {2: -1}})
    assert h.betti == oracles.betti(dims, mats)
    assert h.betti == {0: 1, 1: 2, 2: 2, 3: 1}
    assert h.certified


def test_abelian_dim_two():
    h = ce_homology(abelian(2), 2, 0, 2)
    assert h.betti == {0: 1, 1: 2, 2: 1}


def test_weight_cap_zero_is_unit():
    assert ce_homology(abelian(1), 0, 0, 2).betti == {0: 1, 1: 0, 2: 0}


@pytest.mark.parametrize("dim", [1, 2, 3])
@pytest.mark.parametrize("degree", [0, 1, 2])
def test_abelian_homology_is_free_graded_commutative(dim, degree):
    R = 4
    h = ce_homology(abelian(dim, degree), R, 0, 8)
    s = degree + 1
    want = {n: 0 for n in range(9)}
    for r in range(R + 1):
        # monomials of weight r in dim letters of degree s
        count = comb(dim, r) if s % 2 else comb(dim + r - 1, r)
        if r * s <= 8:
            want[r * s] += count
    assert h.betti == want


def test_certificate_flags_truncation():
    assert not ce_homology(abelian(1, 1), 2, 0, 8).certified
    assert ce_homology(abelian(1, 1), 5, 0, 8).certified
    assert ce_homology(abelian(2), 2, 0, 5).certified
    assert not ce_homology(abelian(2), 1, 0, 5).certified


def test_cone_is_acyclic():
    h = ce_homology(lie_cone(heisenberg()), 5, 0, 4)
    assert h.betti == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}


# layers


def test_layer_zero_is_unit():
    q = layer(ce_complex(heisenberg(), 3), 0)
    assert q.dims() == {0: 1}


def test_layer_one_is_suspension():
    g = lie_cone(heisenberg())
    q = layer(ce_complex(g, 3), 1)
    assert q.dims() == {n + 1: sum(1 for x in g.labels if g.degree(x) == n) for n in (0, 1)}
    assert validate(q).ok


def test_layer_two_heisenberg_has_zero_differential():
    q = layer(ce_complex(heisenberg(), 3), 2)
    assert q.dims() == {2: 3}
    assert all(q.d(n).is_zero() for n in q.degrees)


def test_layer_out_of_cap():
    with pytest.raises(MalformedInputError):
        layer(ce_complex(heisenberg(), 2), 3)


def test_sym_dims_counts():
    g = direct_sum(abelian(2), abelian(1, 1, prefix="b"))
    # odd letters of degree 1 (two), even letter of degree 2
    assert sym_dims(g, 2) == {2: 1, 3: 2, 4: 1}


# monoidality


def test_monoidality_zero():
    assert monoidality_check(zero_lie(), zero_lie(), 3, 0, 4).ok


def test_monoidality_abelian_layers_are_bijections():
    v = monoidality_check(abelian(2), abelian(1, 1), 3, 0, 6)
    assert v.ok
    assert all(layer["bijective"] for layer in v.details["layers"].values())
    # the binomial count: sum_{i+j=2} Sym^i Sym^j
    assert v.details["layers"][2]["dims"] == {2: 1, 3: 2, 4: 1}


def test_monoidality_heisenberg_abelian():
    v = monoidality_check(heisenberg(), abelian(1), 3, 0, 4)
    assert v.ok and v.details["chain_map"]


def test_monoidality_map_multiplies():
    source, target, m, f = monoidality_map(abelian(1), abelian(1), 2)
    assert f((("a0",), ("a0",))) == {((0, "a0"), (1, "a0")): 1}


# excision


def test_ce_coalgebra_validates():
    for graded in (True, False):
        assert validate_coalgebra(ce_coalgebra(heisenberg(), 3, graded)).ok


def test_lie_excision_zero():
    assert lie_excision_check(zero_lie(), "interval", 3, 0, 4).ok
    assert lie_excision_check(zero_lie(), "circle", 3, 0, 4).ok


def test_lie_excision_interval_abelian():
    v = lie_excision_check(abelian(1), "interval", 3, 0, 4)
    assert v.ok and v.details["status"] == "exact"
    assert sorted(v.details["layers"]) == [0, 1, 2, 3]


def test_lie_excision_interval_heisenberg():
    assert lie_excision_check(heisenberg(), "interval", 2, 0, 3).ok


def test_lie_excision_circle():
    for g in [abelian(1), heisenberg(), abelian(1, 1)]:
        assert lie_excision_check(g, "circle", 2, 0, 4).ok


def test_lie_excision_manifold_name():
    with pytest.raises(MalformedInputError):
        lie_excision_check(abelian(1), "sphere", 2, 0, 3)


def test_direct_sum_labels():
    g = direct_sum(heisenberg(), abelian(1))
    assert g.labels == [(0, "e"), (0, "f"), (0, "c"), (1, "a0")]
    assert validate_lie(g).ok
