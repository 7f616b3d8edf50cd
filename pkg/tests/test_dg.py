import pytest

from koszulfh.bar import koszul_dual
from koszulfh.chain import betti_table
from koszulfh.dg import (DGAlgebra, DGCoalgebra, add_acyclic_summand, bimodule_as_left_module,
                         bimodule_as_right_module, enveloping, exterior, free_module,
                         ideal_module, is_conegative, is_copositive, is_positive, opposite,
                         regular_comodule, regular_module, square_zero, tensor_algebra,
                         trivial_comodule, trivial_module, truncated_polynomial,
                         truncated_tensor, unit_algebra, unit_coalgebra, validate_algebra,
                         validate_coalgebra, validate_comodule, validate_module)
from koszulfh.errors import MalformedInputError
from koszulfh.field import GF, QQ

CATALOG = [
    lambda F=QQ: exterior(["x"], [1], F),
    lambda F=QQ: exterior(["x", "y"], [1, 1], F),
    lambda F=QQ: truncated_polynomial("x", 2, 3, F),
    lambda F=QQ: square_zero([("x", 1), ("y", 1)], field=F),
    lambda F=QQ: truncated_tensor(["x", "y"], [1, 2], 2, F),
]


def dims(a, lo, hi):
    return [a.dim(n) if hasattr(a, "dim") else len(a.basis(n)) for n in range(lo, hi + 1)]


@pytest.mark.parametrize("F", [QQ, GF(32003)])
@pytest.mark.parametrize("make", CATALOG)
def test_catalog_validates(make, F):
    a = make(F)
    assert validate_algebra(a).ok
    assert is_positive(a)
    for side in ("left", "right", "bimodule"):
        assert validate_module(regular_module(a, side)).ok
        assert validate_module(trivial_module(a, side)).ok
        assert validate_module(ideal_module(a, side)).ok


def test_exterior_builder():
    a = exterior(["x"], [1])
    assert [len(a.basis(n)) for n in (0, 1, 2)] == [1, 1, 0]
    assert a.mul("x", "x") == {}
    assert validate_algebra(a, commutative=True).ok


def test_truncated_polynomial_builder():
    a = truncated_polynomial("x", 2, 3)
    assert [len(a.basis(n)) for n in range(5)] == [1, 0, 1, 0, 1]
    with pytest.raises(MalformedInputError):
        truncated_polynomial("x", 2, 1)
    with pytest.raises(MalformedInputError):
        exterior(["x", "x"], [1, 1])


def test_trivial_module_action_is_zero():
    a = exterior(["x"], [1])
    k = trivial_module(a, "right")
    assert k.right("1", "x") == {}
    assert k.right("1", a.unit) == {"1": 1}


def test_free_module():
    a = exterior(["x"], [1])
    m = free_module(a, [0, 2], "right")
    assert validate_module(m).ok
    assert [len(m.basis(n)) for n in range(4)] == [1, 1, 1, 1]
    with pytest.raises(MalformedInputError):
        free_module(a, [0, 1], names=["g", "g"])


def test_validate_detects_commutativity_and_leibniz():
    # x*y = y*x with |x| = |y| = 1 violates graded commutativity
    a = DGAlgebra.from_tables(QQ, [("1", 0), ("x", 1), ("y", 1), ("z", 2)], "1",
                              {("x", "y"): {"z": 1}, ("y", "x"): {"z": 1}})
    assert validate_algebra(a).ok
    rep = validate_algebra(a, commutative=True)
    assert any(f["axiom"] == "graded commutativity" for f in rep.failures)
    # d x = y, x * y = x breaks Leibniz on (x, y)
    b = DGAlgebra.from_tables(QQ, [("1", 0), ("y", 0), ("x", 1)], "1",
                              {("x", "y"): {"x": 1}, ("y", "x"): {"x": 1}}, d={"x": {"y": 1}})
    rep = validate_algebra(b)
    assert any(f["axiom"] == "Leibniz" and f["witness"] == ("x", "y") for f in rep.failures)


def test_positivity_predicates():
    assert is_positive(exterior(["x"], [1]))
    assert not is_positive(truncated_polynomial("x", 0, 3))
    assert is_positive(unit_algebra())
    assert is_conegative(exterior(["x"], [-2]))
    assert not is_conegative(exterior(["x"], [1]))
    assert is_conegative(unit_algebra())


def test_copositivity():
    assert is_copositive(koszul_dual(exterior(["x"], [1])), 2)
    t = DGCoalgebra.from_tables(QQ, [("1", 0), ("u", 0), ("uu", 0)], "1",
                                {"uu": {("u", "u"): 1}})
    assert validate_coalgebra(t).ok
    assert not is_copositive(t)
    assert is_copositive(unit_coalgebra())


def test_opposite():
    a = exterior(["x", "y"], [1, 1])
    op = opposite(a)
    assert validate_algebra(op).ok
    assert op.mul("y", "x") == {k: -v for k, v in a.mul("x", "y").items()}
    assert op.mul("y", "x") == a.mul("y", "x")  # graded commutative: a copy
    oo = opposite(op)
    assert oo.product_table() == a.product_table()
    t = truncated_tensor(["x", "y"], [1, 2], 2)
    assert opposite(t).mul("x", "y") == {k: (-1) ** 2 * v for k, v in t.mul("y", "x").items()}


def test_enveloping():
    one = enveloping(unit_algebra())
    assert [len(one.basis(n)) for n in (0, 1)] == [1, 0]
    a = exterior(["x"], [1])
    e = enveloping(a)
    assert validate_algebra(e).ok
    assert [len(e.basis(n)) for n in range(4)] == [1, 2, 1, 0]
    r = regular_module(a, "bimodule")
    assert validate_module(bimodule_as_left_module(r, e)).ok
    assert validate_module(bimodule_as_right_module(r, e)).ok


def test_tensor_algebra_and_acyclic_summand():
    a = exterior(["x"], [1])
    b = truncated_polynomial("y", 2, 2)
    assert validate_algebra(tensor_algebra(a, b)).ok
    c = add_acyclic_summand(a, 3)
    assert validate_algebra(c).ok
    assert betti_table(c.complex(0, 4), 0, 4) == betti_table(a.complex(0, 4), 0, 4)


def test_comodules():
    c = koszul_dual(exterior(["x"], [1]))
    assert validate_coalgebra(c, 8).ok
    for side in ("left", "right"):
        assert validate_comodule(trivial_comodule(c, side), 6).ok
        assert validate_comodule(regular_comodule(c, side), 6).ok
