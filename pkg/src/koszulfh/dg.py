"""Augmented dg algebras, coalgebras, and their (co)modules.

Every structure here is *degreewise finite* but may be unbounded above:
the basis in each degree is produced on demand by a callable, which lets
bar constructions, Koszul duals and cobar algebras be used as inputs to
further constructions without fixing a truncation in advance.  Finite
objects given by structure-constant tables are the special case with a
bounded support.

Bases are augmentation adapted: the unit (resp. counit) is a basis element
and every other basis element spans the augmentation ideal (resp. coideal).
Products, actions and coproducts are stored with their Koszul signs already
applied; the validators check the axioms numerically on basis tuples.
"""

from __future__ import annotations

from itertools import product as iproduct
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .chain import ChainComplex, ValidationReport, label_name, vadd
from .errors import MalformedInputError
from .field import Field, QQ

Label = Hashable

# Positivity constants at desk scale: loops shift degree by exactly -1 and
# the degree filtration has monoidal upper bound 0.
LOOP_BOUND = 1
MONOIDAL_UPPER_BOUND = 0


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class Graded:
    """A degreewise-finite graded vector space with a differential.

    ``basis_fn(n)`` lists the basis in degree ``n``; ``d_fn(x)`` returns the
    boundary of a basis label as ``label -> coeff``.  ``lo`` is a lower bound
    for the support; ``hi`` an upper bound or ``None`` when unbounded.
    """

    def __init__(self, field: Field, basis_fn: Callable[[int], Sequence[Label]],
                 degree_fn: Callable[[Label], int], d_fn: Callable[[Label], Mapping],
                 lo: int, hi: int | None = None, name: str | None = None):
        self.field = field
        self._basis_fn = basis_fn
        self._degree_fn = degree_fn
        self._d_fn = d_fn
        self.lo = lo
        self.hi = hi
        self.name = name
        self._basis_cache: dict[int, tuple] = {}
        self._d_cache: dict = {}

    def _adopt(self, carrier: "Graded"):
        Graded.__init__(self, carrier.field, carrier._basis_fn, carrier._degree_fn,
                        carrier._d_fn, carrier.lo, carrier.hi, carrier.name)
        self._basis_cache = carrier._basis_cache
        self._d_cache = carrier._d_cache

    @classmethod
    def from_table(cls, field: Field, basis: Sequence[tuple[Label, int]],
                   d: Mapping[Label, Mapping[Label, object]] | None = None, name=None):
        """Finite graded space from ``(label, degree)`` pairs and a sparse ``d``."""
        deg: dict = {}
        by_deg: dict[int, list] = {}
        for x, n in basis:
            if x in deg:
                raise MalformedInputError(f"repeated basis label {label_name(x)}")
            deg[x] = n
            by_deg.setdefault(n, []).append(x)
        dd = {x: {y: field(c) for y, c in v.items() if c} for x, v in (d or {}).items()}
        for x, v in dd.items():
            if x not in deg:
                raise MalformedInputError(f"differential given on unknown label {label_name(x)}")
            for y in v:
                if y not in deg:
                    raise MalformedInputError(f"differential of {label_name(x)} hits unknown {label_name(y)}")
                if deg[y] != deg[x] - 1:
                    raise MalformedInputError(f"differential of {label_name(x)} is not of degree -1")
        lo = min(by_deg) if by_deg else 0
        hi = max(by_deg) if by_deg else -1
        g = cls.__new__(cls)
        Graded.__init__(g, field, lambda n: by_deg.get(n, ()), deg.__getitem__,
                        lambda x: dd.get(x, {}), lo, hi, name)
        g._table_d = dd
        return g

    # -- access --------------------------------------------------------------

    @property
    def finite(self) -> bool:
        return self.hi is not None

    def basis(self, n: int) -> tuple:
        if n < self.lo or (self.hi is not None and n > self.hi):
            return ()
        b = self._basis_cache.get(n)
        if b is None:
            b = tuple(self._basis_fn(n))
            self._basis_cache[n] = b
        return b

    def degree(self, x: Label) -> int:
        return self._degree_fn(x)

    def d(self, x: Label) -> dict:
        v = self._d_cache.get(x)
        if v is None:
            v = {y: c for y, c in self._d_fn(x).items() if c}
            self._d_cache[x] = v
        return v

    def d_vec(self, vec: Mapping) -> dict:
        out: dict = {}
        for x, c in vec.items():
            vadd(out, self.d(x), c)
        return out

    def degrees(self, hi: int | None = None) -> range:
        top = self.hi if self.hi is not None else hi
        if top is None:
            raise MalformedInputError(f"{self!r} is unbounded; give an upper degree")
        if hi is not None:
            top = min(top, hi)
        return range(self.lo, top + 1)

    def all_labels(self, hi: int | None = None) -> list:
        return [x for n in self.degrees(hi) for x in self.basis(n)]

    def dims(self, lo: int, hi: int) -> dict[int, int]:
        return {n: len(self.basis(n)) for n in range(lo, hi + 1)}

    def complex(self, lo: int | None = None, hi: int | None = None) -> ChainComplex:
        """Materialise degrees ``lo..hi``; ``d_lo`` into degree ``lo - 1`` is dropped."""
        lo = self.lo if lo is None else lo
        top = self.hi if hi is None else hi
        if top is None:
            raise MalformedInputError(f"{self!r} is unbounded; give an upper degree")
        basis = {n: self.basis(n) for n in range(lo, top + 1)}
        return ChainComplex.from_function(self.field, basis, self.d, lo=lo)

    def __repr__(self):
        kind = type(self).__name__
        top = "inf" if self.hi is None else self.hi
        return f"<{kind} {self.name or ''} degrees {self.lo}..{top}>"


# ---------------------------------------------------------------------------
# algebras


class DGAlgebra(Graded):
    """Augmented dg algebra.  ``mul(x, y)`` returns the product of basis labels."""

    def __init__(self, carrier: Graded, unit: Label, mul: Callable[[Label, Label], Mapping],
                 ideal_lo: int | None = None, ideal_hi: int | None = None,
                 table: Mapping | None = None):
        self._adopt(carrier)
        self.unit = unit
        self._mul_fn = mul
        self._mul_cache: dict = {}
        self.table = table
        if ideal_lo is None or (ideal_hi is None and self.finite):
            degs = [self.degree(x) for x in self.all_labels() if x != unit] if self.finite else []
            if ideal_lo is None:
                if not self.finite:
                    raise MalformedInputError("lazy algebra needs an explicit ideal_lo")
                ideal_lo = min(degs) if degs else None
            if ideal_hi is None and self.finite:
                ideal_hi = max(degs) if degs else None
        self.ideal_lo = ideal_lo
        self.ideal_hi = ideal_hi

    @classmethod
    def from_tables(cls, field: Field, basis: Sequence[tuple[Label, int]], unit: Label,
                    product: Mapping[tuple[Label, Label], Mapping[Label, object]],
                    d: Mapping | None = None, name=None, fill_unit: bool = True):
        """Finite algebra from structure constants; omitted products are zero.

        With ``fill_unit`` the products ``1*x = x*1 = x`` are implied.
        """
        carrier = Graded.from_table(field, basis, d, name)
        if unit not in {x for x, _ in basis}:
            raise MalformedInputError(f"unit {label_name(unit)} is not a basis element")
        tab = {}
        for (x, y), v in product.items():
            for z in (x, y):
                if z not in {b for b, _ in basis}:
                    raise MalformedInputError(f"product mentions unknown label {label_name(z)}")
            tab[(x, y)] = {z: field(c) for z, c in v.items() if c}
        if fill_unit:
            for x, _ in basis:
                tab.setdefault((unit, x), {x: field.one})
                tab.setdefault((x, unit), {x: field.one})
        return cls(carrier, unit, lambda x, y: tab.get((x, y), {}), table=tab)

    def mul(self, x: Label, y: Label) -> dict:
        key = (x, y)
        v = self._mul_cache.get(key)
        if v is None:
            v = {z: c for z, c in self._mul_fn(x, y).items() if c}
            self._mul_cache[key] = v
        return v

    def mul_vec(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for x, a in u.items():
            for y, b in v.items():
                vadd(out, self.mul(x, y), a * b)
        return out

    def ideal_basis(self, n: int) -> tuple:
        return tuple(x for x in self.basis(n) if x != self.unit)

    def product_table(self) -> dict:
        """All nonzero products of basis pairs (finite algebras only)."""
        labels = self.all_labels()
        return {(x, y): self.mul(x, y) for x in labels for y in labels if self.mul(x, y)}


def _labels_upto(g: Graded, upto: int | None):
    top = g.hi if g.hi is not None else upto
    if top is None:
        raise MalformedInputError(f"{g!r} is unbounded; validation needs a degree bound")
    if upto is not None:
        top = min(top, upto)
    return [(x, n) for n in range(g.lo, top + 1) for x in g.basis(n)]


def _check_homogeneous(rep, g: Graded, vec: Mapping, n: int, what: str, witness):
    for z in vec:
        if z not in set(g.basis(n)):
            rep.fail(axiom=f"{what} degree", witness=witness)
            return False
    return True


def validate_carrier(g: Graded, upto: int | None = None) -> ValidationReport:
    rep = ValidationReport("d^2 = 0")
    for x, n in _labels_upto(g, upto):
        if not _check_homogeneous(rep, g, g.d(x), n - 1, "differential", label_name(x)):
            continue
        if g.d_vec(g.d(x)):
            rep.fail(axiom="d^2 = 0", witness=label_name(x), degree=n)
    return rep


def validate_algebra(a: DGAlgebra, upto: int | None = None,
                     commutative: bool = False) -> ValidationReport:
    """Associativity, unit, Leibniz and augmentation on basis tuples.

    Checks involving products of total degree above ``upto`` are skipped
    (needed for truncated lazy algebras).  ``commutative`` also checks
    graded commutativity ``xy = (-1)^{|x||y|} yx``.
    """
    rep = validate_carrier(a, upto)
    rep.checked = "dg algebra axioms"
    if a.degree(a.unit) != 0:
        rep.fail(axiom="unit degree", witness=label_name(a.unit))
    if a.d(a.unit):
        rep.fail(axiom="d(1) = 0", witness=label_name(a.unit))
    labels = _labels_upto(a, upto)
    bound = upto if upto is not None else (a.hi if a.hi is not None else 0)
    one = a.field.one
    for x, n in labels:
        if a.mul(a.unit, x) != {x: one} or a.mul(x, a.unit) != {x: one}:
            rep.fail(axiom="unit", witness=label_name(x))
        if x != a.unit and a.unit in a.d(x):
            rep.fail(axiom="augmentation kills d", witness=label_name(x))
    for (x, n), (y, m) in iproduct(labels, labels):
        if n + m > bound and upto is not None:
            continue
        xy = a.mul(x, y)
        _check_homogeneous(rep, a, xy, n + m, "product", (label_name(x), label_name(y)))
        if x != a.unit and y != a.unit and a.unit in xy:
            rep.fail(axiom="augmentation multiplicative", witness=(label_name(x), label_name(y)))
        lhs = a.d_vec(xy)
        rhs = a.mul_vec(a.d(x), {y: 1})
        vadd(rhs, a.mul_vec({x: 1}, a.d(y)), _sign(n))
        if lhs != rhs:
            rep.fail(axiom="Leibniz", witness=(label_name(x), label_name(y)))
        if commutative:
            yx = a.mul(y, x)
            if xy != {z: _sign(n * m) * c for z, c in yx.items()}:
                rep.fail(axiom="graded commutativity", witness=(label_name(x), label_name(y)))
    for (x, n), (y, m), (z, k) in iproduct(labels, labels, labels):
        if upto is not None and n + m + k > upto:
            continue
        if a.unit in (x, y, z):
            continue
        if a.mul_vec(a.mul(x, y), {z: 1}) != a.mul_vec({x: 1}, a.mul(y, z)):
            rep.fail(axiom="associativity", witness=(label_name(x), label_name(y), label_name(z)))
    return rep


def is_positive(a: DGAlgebra) -> bool:
    """Augmentation ideal concentrated in degrees >= 1."""
    return a.ideal_lo is None or a.ideal_lo >= 1


def is_conegative(a: DGAlgebra) -> bool:
    """Augmentation ideal in degrees < -(loop bound) - (monoidal bound)."""
    if a.ideal_lo is None:
        return True
    if a.ideal_hi is None:
        return False
    return a.ideal_hi < -LOOP_BOUND - MONOIDAL_UPPER_BOUND


def positivity_failures(a: DGAlgebra) -> list[int]:
    if not a.finite:
        return [] if is_positive(a) else [a.ideal_lo]
    return sorted({a.degree(x) for x in a.all_labels() if x != a.unit and a.degree(x) < 1})


def opposite(a: DGAlgebra) -> DGAlgebra:
    """Same carrier, product ``x *op y = (-1)^{|x||y|} y x``."""
    def mul(x, y):
        s = _sign(a.degree(x) * a.degree(y))
        return {z: s * c for z, c in a.mul(y, x).items()}
    op = DGAlgebra(a, a.unit, mul, a.ideal_lo, a.ideal_hi)
    op.name = f"{a.name}^op" if a.name else None
    op.opposite_of = a
    if a.finite:
        op.table = op.product_table()
    return op


def tensor_algebra(a: DGAlgebra, b: DGAlgebra) -> DGAlgebra:
    """``A (x) B`` with ``(x (x) y)(x' (x) y') = (-1)^{|y||x'|} xx' (x) yy'``."""
    if a.field != b.field:
        raise MalformedInputError("tensor of algebras over different fields")

    def basis(n):
        out = []
        for i in range(a.lo, n - b.lo + 1):
            for x in a.basis(i):
                for y in b.basis(n - i):
                    out.append((x, y))
        return out

    def degree(xy):
        return a.degree(xy[0]) + b.degree(xy[1])

    def d(xy):
        x, y = xy
        out = {(x2, y): c for x2, c in a.d(x).items()}
        s = _sign(a.degree(x))
        for y2, c in b.d(y).items():
            out[(x, y2)] = out.get((x, y2), 0) + s * c
        return out

    def mul(p, q):
        x, y = p
        x2, y2 = q
        s = _sign(b.degree(y) * a.degree(x2))
        out = {}
        for u, c in a.mul(x, x2).items():
            for v, e in b.mul(y, y2).items():
                out[(u, v)] = s * c * e
        return out

    hi = a.hi + b.hi if a.finite and b.finite else None
    carrier = Graded(a.field, basis, degree, d, a.lo + b.lo, hi,
                     f"{a.name}(x){b.name}" if a.name and b.name else None)
    lows = [v for v in (a.ideal_lo, b.ideal_lo) if v is not None]
    highs = [v for v in (a.ideal_hi, b.ideal_hi) if v is not None]
    ideal_lo = min(lows) if lows else None
    ideal_hi = (a.ideal_hi or 0) + (b.ideal_hi or 0) if highs and hi is not None else None
    out = DGAlgebra(carrier, (a.unit, b.unit), mul, ideal_lo, ideal_hi)
    out.factors = (a, b)
    return out


def enveloping(a: DGAlgebra) -> DGAlgebra:
    """``A (x) A^op``; bimodules over ``A`` are left modules over it."""
    e = tensor_algebra(a, opposite(a))
    e.name = f"{a.name}^e" if a.name else None
    e.enveloped = a
    return e


def tensor_power(a: DGAlgebra, k: int) -> DGAlgebra:
    if k < 1:
        return unit_algebra(a.field)
    out = a
    for _ in range(k - 1):
        out = tensor_algebra(out, a)
    return out


# ---------------------------------------------------------------------------
# coalgebras


class DGCoalgebra(Graded):
    """Coaugmented dg coalgebra with coproduct on basis labels."""

    def __init__(self, carrier: Graded, counit: Label,
                 coproduct: Callable[[Label], Mapping[tuple, object]],
                 coideal_lo: int | None = None):
        self._adopt(carrier)
        self.counit = counit
        self._cop_fn = coproduct
        self._cop_cache: dict = {}
        if coideal_lo is None:
            if not self.finite:
                raise MalformedInputError("lazy coalgebra needs an explicit coideal_lo")
            degs = [self.degree(x) for x in self.all_labels() if x != counit]
            coideal_lo = min(degs) if degs else None
        self.coideal_lo = coideal_lo

    @classmethod
    def from_tables(cls, field: Field, basis: Sequence[tuple[Label, int]], counit: Label,
                    coproduct: Mapping[Label, Mapping[tuple, object]], d=None, name=None,
                    fill_counit: bool = True):
        """Finite coalgebra; with ``fill_counit`` the primitive part
        ``1 (x) x + x (x) 1`` is added to every listed coproduct."""
        carrier = Graded.from_table(field, basis, d, name)
        tab = {}
        for x, _ in basis:
            v = {tuple(k): field(c) for k, c in coproduct.get(x, {}).items() if c}
            if fill_counit:
                if x == counit:
                    v.setdefault((counit, counit), field.one)
                else:
                    v.setdefault((counit, x), field.one)
                    v.setdefault((x, counit), field.one)
            tab[x] = v
        return cls(carrier, counit, lambda x: tab.get(x, {}))

    def coproduct(self, x: Label) -> dict:
        v = self._cop_cache.get(x)
        if v is None:
            v = {k: c for k, c in self._cop_fn(x).items() if c}
            self._cop_cache[x] = v
        return v

    def reduced_coproduct(self, x: Label) -> dict:
        e = self.counit
        return {k: c for k, c in self.coproduct(x).items() if k[0] != e and k[1] != e}

    def coideal_basis(self, n: int) -> tuple:
        return tuple(x for x in self.basis(n) if x != self.counit)


def validate_coalgebra(c: DGCoalgebra, upto: int | None = None) -> ValidationReport:
    rep = validate_carrier(c, upto)
    rep.checked = "dg coalgebra axioms"
    e = c.counit
    if c.degree(e) != 0 or c.d(e):
        rep.fail(axiom="counit is a degree-0 cycle", witness=label_name(e))
    one = c.field.one
    for x, n in _labels_upto(c, upto):
        cop = c.coproduct(x)
        for (u, v) in cop:
            if c.degree(u) + c.degree(v) != n:
                rep.fail(axiom="coproduct degree", witness=label_name(x))
                break
        left = {v: k for (u, v), k in cop.items() if u == e}
        right = {u: k for (u, v), k in cop.items() if v == e}
        if left != {x: one} or right != {x: one}:
            rep.fail(axiom="counit", witness=label_name(x))
        if x != e and e in c.d(x):
            rep.fail(axiom="coaugmentation kills d", witness=label_name(x))
        # coassociativity
        lhs: dict = {}
        rhs: dict = {}
        for (u, v), k in cop.items():
            for (u1, u2), k1 in c.coproduct(u).items():
                lhs[(u1, u2, v)] = lhs.get((u1, u2, v), 0) + k * k1
            for (v1, v2), k2 in c.coproduct(v).items():
                rhs[(u, v1, v2)] = rhs.get((u, v1, v2), 0) + k * k2
        if {t: k for t, k in lhs.items() if k} != {t: k for t, k in rhs.items() if k}:
            rep.fail(axiom="coassociativity", witness=label_name(x))
        # co-Leibniz: Delta d = (d (x) 1 + 1 (x) d) Delta
        a: dict = {}
        for y, k in c.d(x).items():
            vadd(a, c.coproduct(y), k)
        b: dict = {}
        for (u, v), k in cop.items():
            for u2, k2 in c.d(u).items():
                vadd(b, {(u2, v): 1}, k * k2)
            s = _sign(c.degree(u))
            for v2, k2 in c.d(v).items():
                vadd(b, {(u, v2): 1}, s * k * k2)
        if a != b:
            rep.fail(axiom="co-Leibniz", witness=label_name(x))
    return rep


def is_copositive(c: DGCoalgebra, floor: int = 1) -> bool:
    """Coideal concentrated in degrees >= ``floor``."""
    return c.coideal_lo is None or c.coideal_lo >= floor


# ---------------------------------------------------------------------------
# modules and comodules


class DGModule(Graded):
    """Left, right or bimodule over a dg algebra.

    ``left(a, m)`` and ``right(m, a)`` return actions of basis labels.  The
    unit of the algebra always acts as the identity.  ``coaction`` optionally
    records a compatible comodule structure on the same carrier (used for
    algebra--coalgebra bimodules).
    """

    def __init__(self, carrier: Graded, algebra: DGAlgebra, side: str,
                 left: Callable | None = None, right: Callable | None = None,
                 coaction: "DGComodule | None" = None):
        if side not in ("left", "right", "bimodule"):
            raise MalformedInputError(f"unknown module side {side!r}")
        if carrier.field != algebra.field:
            raise MalformedInputError("module and algebra over different fields")
        if side in ("left", "bimodule") and left is None:
            raise MalformedInputError("left action missing")
        if side in ("right", "bimodule") and right is None:
            raise MalformedInputError("right action missing")
        self._adopt(carrier)
        self.algebra = algebra
        self.side = side
        self._left = left
        self._right = right
        self._lc: dict = {}
        self._rc: dict = {}
        self.coaction = coaction

    @property
    def is_left(self):
        return self.side in ("left", "bimodule")

    def _adopted_from(self, a: Graded) -> bool:
        """The carrier is that of ``a`` itself (a regular module)."""
        return self._basis_fn is a._basis_fn and self._degree_fn is a._degree_fn

    @property
    def is_right(self):
        return self.side in ("right", "bimodule")

    def left(self, a: Label, m: Label) -> dict:
        if a == self.algebra.unit:
            return {m: self.field.one}
        key = (a, m)
        v = self._lc.get(key)
        if v is None:
            v = {z: c for z, c in self._left(a, m).items() if c}
            self._lc[key] = v
        return v

    def right(self, m: Label, a: Label) -> dict:
        if a == self.algebra.unit:
            return {m: self.field.one}
        key = (m, a)
        v = self._rc.get(key)
        if v is None:
            v = {z: c for z, c in self._right(m, a).items() if c}
            self._rc[key] = v
        return v

    def left_vec(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for a, x in u.items():
            for m, y in v.items():
                vadd(out, self.left(a, m), x * y)
        return out

    def right_vec(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for m, x in u.items():
            for a, y in v.items():
                vadd(out, self.right(m, a), x * y)
        return out

    @classmethod
    def from_tables(cls, field: Field, basis, algebra: DGAlgebra, side: str,
                    action: Mapping[tuple, Mapping] | None = None,
                    left_action: Mapping | None = None, right_action: Mapping | None = None,
                    d=None, name=None):
        """Finite module.  ``action`` keys are ``(a, m)`` for left and
        ``(m, a)`` for right modules; bimodules pass both dictionaries."""
        carrier = Graded.from_table(field, basis, d, name)
        if side == "left":
            left_action = action if left_action is None else left_action
        elif side == "right":
            right_action = action if right_action is None else right_action
        lt = {k: {z: field(c) for z, c in v.items()} for k, v in (left_action or {}).items()}
        rt = {k: {z: field(c) for z, c in v.items()} for k, v in (right_action or {}).items()}
        return cls(carrier, algebra, side,
                   left=(lambda a, m: lt.get((a, m), {})) if side != "right" else None,
                   right=(lambda m, a: rt.get((m, a), {})) if side != "left" else None)


class DGComodule(Graded):
    """Left or right comodule; ``coact(m)`` returns ``{(c, m'): k}`` (left)
    or ``{(m', c): k}`` (right), including the counit term."""

    def __init__(self, carrier: Graded, coalgebra: DGCoalgebra, side: str,
                 coact: Callable[[Label], Mapping[tuple, object]]):
        if side not in ("left", "right"):
            raise MalformedInputError(f"unknown comodule side {side!r}")
        self._adopt(carrier)
        self.coalgebra = coalgebra
        self.side = side
        self._coact = coact
        self._cc: dict = {}

    def coact(self, m: Label) -> dict:
        v = self._cc.get(m)
        if v is None:
            v = {k: c for k, c in self._coact(m).items() if c}
            self._cc[m] = v
        return v

    def reduced_coact(self, m: Label) -> dict:
        e = self.coalgebra.counit
        i = 0 if self.side == "left" else 1
        return {k: c for k, c in self.coact(m).items() if k[i] != e}

    @classmethod
    def from_tables(cls, field, basis, coalgebra: DGCoalgebra, side: str,
                    coaction: Mapping[Label, Mapping[tuple, object]], d=None, name=None,
                    fill_counit: bool = True):
        carrier = Graded.from_table(field, basis, d, name)
        e = coalgebra.counit
        tab = {}
        for m, _ in basis:
            v = {tuple(k): field(c) for k, c in coaction.get(m, {}).items() if c}
            if fill_counit:
                v.setdefault((e, m) if side == "left" else (m, e), field.one)
            tab[m] = v
        return cls(carrier, coalgebra, side, lambda m: tab.get(m, {}))


def validate_module(m: DGModule, upto: int | None = None) -> ValidationReport:
    """Action associativity, Leibniz and (for bimodules) compatibility."""
    rep = validate_carrier(m, upto)
    rep.checked = f"dg {m.side} module axioms"
    A = m.algebra
    top = upto if upto is not None else None
    alabels = _labels_upto(A, top if top is not None else (A.hi if A.finite else None))
    mlabels = _labels_upto(m, upto)
    bound = upto

    def ok_deg(*ds):
        return bound is None or sum(ds) <= bound

    for (x, n) in mlabels:
        for (a, i) in alabels:
            if m.is_left and ok_deg(n, i):
                am = m.left(a, x)
                _check_homogeneous(rep, m, am, n + i, "left action", (label_name(a), label_name(x)))
                lhs = m.d_vec(am)
                rhs = m.left_vec(A.d(a), {x: 1})
                vadd(rhs, m.left_vec({a: 1}, m.d(x)), _sign(i))
                if lhs != rhs:
                    rep.fail(axiom="left Leibniz", witness=(label_name(a), label_name(x)))
                for (b, j) in alabels:
                    if a == A.unit or b == A.unit or not ok_deg(n, i, j):
                        continue
                    if m.left_vec({a: 1}, m.left(b, x)) != m.left_vec(A.mul(a, b), {x: 1}):
                        rep.fail(axiom="left associativity",
                                 witness=(label_name(a), label_name(b), label_name(x)))
            if m.is_right and ok_deg(n, i):
                ma = m.right(x, a)
                _check_homogeneous(rep, m, ma, n + i, "right action", (label_name(x), label_name(a)))
                lhs = m.d_vec(ma)
                rhs = m.right_vec(m.d(x), {a: 1})
                vadd(rhs, m.right_vec({x: 1}, A.d(a)), _sign(n))
                if lhs != rhs:
                    rep.fail(axiom="right Leibniz", witness=(label_name(x), label_name(a)))
                for (b, j) in alabels:
                    if a == A.unit or b == A.unit or not ok_deg(n, i, j):
                        continue
                    if m.right_vec(m.right(x, a), {b: 1}) != m.right_vec({x: 1}, A.mul(a, b)):
                        rep.fail(axiom="right associativity",
                                 witness=(label_name(x), label_name(a), label_name(b)))
            if m.side == "bimodule":
                for (b, j) in alabels:
                    if not ok_deg(n, i, j):
                        continue
                    if m.right_vec(m.left(a, x), {b: 1}) != m.left_vec({a: 1}, m.right(x, b)):
                        rep.fail(axiom="bimodule compatibility",
                                 witness=(label_name(a), label_name(x), label_name(b)))
    return rep


def validate_comodule(m: DGComodule, upto: int | None = None) -> ValidationReport:
    rep = validate_carrier(m, upto)
    rep.checked = f"dg {m.side} comodule axioms"
    C = m.coalgebra
    e = C.counit
    one = m.field.one
    for x, n in _labels_upto(m, upto):
        co = m.coact(x)
        if m.side == "left":
            unitpart = {y: k for (c, y), k in co.items() if c == e}
        else:
            unitpart = {y: k for (y, c), k in co.items() if c == e}
        if unitpart != {x: one}:
            rep.fail(axiom="counit", witness=label_name(x))
        lhs: dict = {}
        rhs: dict = {}
        for key, k in co.items():
            if m.side == "left":
                c, y = key
                for (c1, c2), k1 in C.coproduct(c).items():
                    vadd(lhs, {(c1, c2, y): 1}, k * k1)
                for (c2, y2), k2 in m.coact(y).items():
                    vadd(rhs, {(c, c2, y2): 1}, k * k2)
            else:
                y, c = key
                for (y2, c2), k1 in m.coact(y).items():
                    vadd(lhs, {(y2, c2, c): 1}, k * k1)
                for (c1, c2), k2 in C.coproduct(c).items():
                    vadd(rhs, {(y, c1, c2): 1}, k * k2)
        if lhs != rhs:
            rep.fail(axiom="coassociativity", witness=label_name(x))
        # co-Leibniz
        a: dict = {}
        for y, k in m.d(x).items():
            vadd(a, m.coact(y), k)
        b: dict = {}
        for (u, v), k in co.items():
            du = C.d(u) if m.side == "left" else m.d(u)
            dv = m.d(v) if m.side == "left" else C.d(v)
            for u2, k2 in du.items():
                vadd(b, {(u2, v): 1}, k * k2)
            s = _sign(C.degree(u) if m.side == "left" else m.degree(u))
            for v2, k2 in dv.items():
                vadd(b, {(u, v2): 1}, s * k * k2)
        if a != b:
            rep.fail(axiom="co-Leibniz", witness=label_name(x))
    return rep


def validate_bicomodule_action(m: DGModule, upto: int | None = None) -> ValidationReport:
    """For an algebra--coalgebra bimodule: the right coaction is A-linear."""
    rep = ValidationReport("action/coaction compatibility")
    co = m.coaction
    if co is None:
        rep.fail(axiom="no coaction attached")
        return rep
    A = m.algebra
    alabels = _labels_upto(A, upto if not A.finite else A.hi)
    for x, n in _labels_upto(m, upto):
        for a, i in alabels:
            if upto is not None and n + i > upto:
                continue
            lhs: dict = {}
            for y, k in m.left(a, x).items():
                vadd(lhs, co.coact(y), k)
            rhs: dict = {}
            for (y, c), k in co.coact(x).items():
                for z, k2 in m.left(a, y).items():
                    vadd(rhs, {(z, c): 1}, k * k2)
            if lhs != rhs:
                rep.fail(axiom="coaction is A-linear", witness=(label_name(a), label_name(x)))
    return rep


# ---------------------------------------------------------------------------
# builders


def unit_algebra(field: Field = QQ) -> DGAlgebra:
    a = DGAlgebra.from_tables(field, [("1", 0)], "1", {}, name="1")
    return a


def unit_coalgebra(field: Field = QQ) -> DGCoalgebra:
    return DGCoalgebra.from_tables(field, [("1", 0)], "1", {}, name="1")


def _check_gens(gens: Sequence[str], degrees: Sequence[int]):
    if len(gens) != len(degrees):
        raise MalformedInputError("generator and degree lists differ in length")
    if len(set(gens)) != len(gens):
        raise MalformedInputError("repeated generator names")
    if "1" in gens:
        raise MalformedInputError("'1' is reserved for the unit")


def exterior(gens: Sequence[str], degrees: Sequence[int], field: Field = QQ) -> DGAlgebra:
    """Exterior algebra: monomials are subsets, generators anticommute.

    Odd generators make this the free graded-commutative algebra; even
    generators give the same associative algebra with anticommuting letters.
    """
    _check_gens(gens, degrees)
    k = len(gens)
    subsets = []
    for mask in range(1 << k):
        subsets.append(tuple(i for i in range(k) if mask >> i & 1))
    subsets.sort(key=lambda s: (len(s), s))

    def name(s):
        return "1" if not s else "*".join(gens[i] for i in s)

    basis = [(name(s), sum(degrees[i] for i in s)) for s in subsets]
    product = {}
    for s in subsets:
        for t in subsets:
            if set(s) & set(t):
                continue
            seq = list(s) + list(t)
            inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
            product[(name(s), name(t))] = {name(tuple(sorted(seq))): _sign(inv)}
    a = DGAlgebra.from_tables(field, basis, "1", product,
                              name="L[" + ",".join(gens) + "]", fill_unit=False)
    return a


def truncated_polynomial(x: str, degree: int, nilpotency: int, field: Field = QQ) -> DGAlgebra:
    """``k[x]/x^nilpotency`` with ``|x| = degree``."""
    if nilpotency < 2:
        raise MalformedInputError("nilpotency must be at least 2")
    if x == "1":
        raise MalformedInputError("'1' is reserved for the unit")

    def name(i):
        return "1" if i == 0 else (x if i == 1 else f"{x}^{i}")

    basis = [(name(i), i * degree) for i in range(nilpotency)]
    product = {(name(i), name(j)): {name(i + j): 1}
               for i in range(nilpotency) for j in range(nilpotency) if i + j < nilpotency}
    return DGAlgebra.from_tables(field, basis, "1", product,
                                 name=f"k[{x}]/{x}^{nilpotency}", fill_unit=False)


def square_zero(space: Sequence[tuple[str, int]], d: Mapping | None = None,
                field: Field = QQ) -> DGAlgebra:
    """``1 + V`` with all products of ideal elements zero; ``d`` acts on ``V``."""
    _check_gens([n for n, _ in space], [k for _, k in space])
    basis = [("1", 0)] + list(space)
    return DGAlgebra.from_tables(field, basis, "1", {}, d=d,
                                 name="sqz[" + ",".join(n for n, _ in space) + "]")


def truncated_tensor(gens: Sequence[str], degrees: Sequence[int], max_length: int,
                     field: Field = QQ) -> DGAlgebra:
    """Free associative algebra modulo words longer than ``max_length``."""
    _check_gens(gens, degrees)
    words = [()]
    frontier = [()]
    for _ in range(max_length):
        frontier = [w + (i,) for w in frontier for i in range(len(gens))]
        words.extend(frontier)

    def name(w):
        return "1" if not w else "*".join(gens[i] for i in w)

    basis = [(name(w), sum(degrees[i] for i in w)) for w in words]
    product = {}
    for u in words:
        for v in words:
            if len(u) + len(v) <= max_length:
                product[(name(u), name(v))] = {name(u + v): 1}
    return DGAlgebra.from_tables(field, basis, "1", product,
                                 name="T[" + ",".join(gens) + f"]/len>{max_length}",
                                 fill_unit=False)


def add_acyclic_summand(a: DGAlgebra, degree: int, names=("u", "v")) -> DGAlgebra:
    """Square-zero extension of a finite ``a`` by ``u -> v`` with ``|u| = degree``.

    The result is quasi-isomorphic to ``a``; ``u`` and ``v`` multiply to zero
    with every ideal element.
    """
    u, v = names
    labels = a.all_labels()
    if u in labels or v in labels:
        raise MalformedInputError("acyclic summand names clash with the algebra basis")
    basis = [(x, a.degree(x)) for x in labels] + [(u, degree), (v, degree - 1)]
    d = {x: a.d(x) for x in labels if a.d(x)}
    d[u] = {v: 1}
    product = {k: val for k, val in a.product_table().items()}
    out = DGAlgebra.from_tables(a.field, basis, a.unit, product, d=d,
                                name=f"{a.name}+acyclic")
    return out


def regular_module(a: DGAlgebra, side: str = "right") -> DGModule:
    """``A`` as a module over itself (``side`` may be ``"bimodule"``)."""
    left = (lambda x, m: a.mul(x, m)) if side in ("left", "bimodule") else None
    right = (lambda m, x: a.mul(m, x)) if side in ("right", "bimodule") else None
    mod = DGModule(a, a, side, left=left, right=right)
    mod.name = f"{a.name}" if a.name else "A"
    return mod


def trivial_module(a: DGAlgebra, side: str = "right", label: Label = "1") -> DGModule:
    """The ground field with the ideal acting by zero (augmentation action)."""
    carrier = Graded.from_table(a.field, [(label, 0)], name="1")
    zero = lambda *args: {}
    mod = DGModule(carrier, a, side,
                   left=zero if side in ("left", "bimodule") else None,
                   right=zero if side in ("right", "bimodule") else None)
    mod.trivial = True
    return mod


def ideal_module(a: DGAlgebra, side: str = "right") -> DGModule:
    """The augmentation ideal as a submodule of the regular module."""
    def basis(n):
        return a.ideal_basis(n)
    lo = a.ideal_lo if a.ideal_lo is not None else 0
    hi = a.ideal_hi if a.finite else None
    if a.finite and a.ideal_hi is None:
        hi = -1
    carrier = Graded(a.field, basis, a.degree, a.d, lo, hi, f"I({a.name})")
    mod = DGModule(carrier, a, side,
                   left=(lambda x, m: a.mul(x, m)) if side in ("left", "bimodule") else None,
                   right=(lambda m, x: a.mul(m, x)) if side in ("right", "bimodule") else None)
    return mod


def free_module(a: DGAlgebra, generator_degrees: Sequence[int], side: str = "right",
                names: Sequence[str] | None = None) -> DGModule:
    """Free module on cycle generators of the given degrees.

    Right modules have basis ``(g, x)`` = ``g (x) x``; left modules ``(x, g)``.
    """
    names = list(names) if names is not None else [f"g{i}" for i in range(len(generator_degrees))]
    if len(set(names)) != len(names):
        raise MalformedInputError("repeated generator names")
    gdeg = dict(zip(names, generator_degrees))
    if side not in ("left", "right"):
        raise MalformedInputError("free modules are one-sided")

    def basis(n):
        out = []
        for g in names:
            for x in a.basis(n - gdeg[g]):
                out.append((g, x) if side == "right" else (x, g))
        return out

    def degree(p):
        g, x = p if side == "right" else (p[1], p[0])
        return gdeg[g] + a.degree(x)

    def d(p):
        if side == "right":
            g, x = p
            s = _sign(gdeg[g])
            return {(g, y): s * c for y, c in a.d(x).items()}
        x, g = p
        return {(y, g): c for y, c in a.d(x).items()}

    lo = min(generator_degrees) + a.lo if names else 0
    hi = (max(generator_degrees) + a.hi) if (a.finite and names) else (None if names else -1)
    carrier = Graded(a.field, basis, degree, d, lo, hi, f"free({a.name})")
    if side == "right":
        right = lambda p, y: {(p[0], z): c for z, c in a.mul(p[1], y).items()}
        return DGModule(carrier, a, "right", right=right)
    left = lambda y, p: {(z, p[1]): c for z, c in a.mul(y, p[0]).items()}
    return DGModule(carrier, a, "left", left=left)


def bimodule_as_left_module(m: DGModule, env: DGAlgebra) -> DGModule:
    """A bimodule over ``A`` as a left ``A (x) A^op`` module:
    ``(a (x) b) . m = (-1)^{|b||m|} a m b``."""
    if m.side != "bimodule":
        raise MalformedInputError("need a bimodule")

    def left(ab, x):
        a, b = ab
        s = _sign(env.factors[1].degree(b) * m.degree(x))
        return {z: s * c for z, c in m.left_vec({a: 1}, m.right(x, b)).items()}

    return DGModule(m, env, "left", left=left)


def bimodule_as_right_module(m: DGModule, env: DGAlgebra) -> DGModule:
    """A bimodule over ``A`` as a right ``A (x) A^op`` module:
    ``m . (a (x) b) = (-1)^{|b|(|m| + |a|)} b m a``."""
    if m.side != "bimodule":
        raise MalformedInputError("need a bimodule")
    A = env.factors[0]

    def right(x, ab):
        a, b = ab
        s = _sign(A.degree(b) * (m.degree(x) + A.degree(a)))
        return {z: s * c for z, c in m.right_vec(m.left(b, x), {a: 1}).items()}

    return DGModule(m, env, "right", right=right)


def trivial_comodule(c: DGCoalgebra, side: str = "left", label: Label = "1") -> DGComodule:
    carrier = Graded.from_table(c.field, [(label, 0)], name="1")
    e = c.counit
    co = (lambda m: {(e, m): 1}) if side == "left" else (lambda m: {(m, e): 1})
    return DGComodule(carrier, c, side, co)


def regular_comodule(c: DGCoalgebra, side: str = "left") -> DGComodule:
    """``C`` as a comodule over itself via the coproduct."""
    return DGComodule(c, c, side, c.coproduct)


def trivial_coaction(m: DGModule, c: DGCoalgebra) -> DGModule:
    """Attach the coaction ``m -> m (x) 1`` making ``m`` an A--C bimodule."""
    e = c.counit
    co = DGComodule(m, c, "right", lambda x: {(x, e): 1})
    out = DGModule(m, m.algebra, m.side, left=m._left, right=m._right, coaction=co)
    return out
