"""Bar and cobar constructions, Koszul duals, cotensor products.

Conventions.  A bar word ``k [a1|...|ap] l`` is the sequence of items
``k, s a1, ..., s ap, l`` where ``s`` raises degree by one; a cobar word
``k <j1|...|jp> l`` uses the desuspension ``s^-1`` instead.  Every term of a
differential is a degree -1 operator applied to one item or to a pair of
adjacent items; it picks up the sign ``(-1)^(sum of degrees before it)``.
The local rules are

* ``d(s a) = -s(da)`` and ``d(s^-1 j) = -s^-1(dj)``;
* contracting ``(x, y)`` by a product or a right action carries
  ``(-1)^|x|``; a letter acting on a module from the left carries ``-1``;
* splitting an item into ``(x, y)`` by a coproduct or a right coaction
  carries ``(-1)^|x|``; a left coaction carries ``-1``,

with degrees of suspended items taken after the shift.  The left-action
sign makes ``k [] l -> k l`` a map of bimodules, so ``B(A, A, A)`` resolves
``A`` itself rather than a parity twist of it.  Every complex built
here is checked for ``d^2 = 0`` in the tests rather than trusted.

Bar complexes are lazy :class:`~koszulfh.dg.Graded` objects, so a bar
complex can itself be used as a module or comodule in a further
construction.  When the algebra is positive (ideal in degrees >= 1) each
letter contributes at least 2 to the degree and every degree is finite; the
complex is then exact in every degree with no truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Hashable, Mapping, Sequence

from .chain import (ChainComplex, ChainMap, FilteredComplex, betti_table, homology,
                    is_quasi_iso, label_name, validate_map, vadd)
from .dg import (DGAlgebra, DGCoalgebra, DGComodule, DGModule, Graded, is_copositive,
                 is_positive, positivity_failures, trivial_comodule, trivial_module,
                 unit_algebra)
from .errors import MalformedInputError, PositivityError

Label = Hashable


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# words


class Alphabet:
    """Letters of a (co)augmentation (co)ideal with shifted degrees.

    ``letters(s)`` lists letters of shifted degree ``s``; ``min_s``/``max_s``
    bound the shifted degrees (``max_s`` is ``None`` when unbounded).
    """

    def __init__(self, letters, degree, min_s: int | None, max_s: int | None):
        self._letters = letters
        self._degree = degree
        self.min_s = min_s
        self.max_s = max_s
        self._cache: dict = {}

    @classmethod
    def of_algebra(cls, a: DGAlgebra) -> "Alphabet":
        lo = None if a.ideal_lo is None else a.ideal_lo + 1
        hi = None if a.ideal_hi is None else a.ideal_hi + 1
        if a.ideal_lo is None:
            hi = lo = None
        return cls(lambda s: a.ideal_basis(s - 1), lambda x: a.degree(x) + 1,
                   lo, hi if a.finite else None)

    @classmethod
    def of_coalgebra(cls, c: DGCoalgebra) -> "Alphabet":
        if c.coideal_lo is None:
            return cls(lambda s: (), None, None, None)
        hi = None
        if c.finite:
            degs = [c.degree(x) for x in c.all_labels() if x != c.counit]
            hi = max(degs) - 1
        return cls(lambda s: c.coideal_basis(s + 1), lambda x: c.degree(x) - 1,
                   c.coideal_lo - 1, hi)

    @property
    def empty(self) -> bool:
        return self.min_s is None

    def letters(self, s: int) -> tuple:
        if self.empty or s < self.min_s or (self.max_s is not None and s > self.max_s):
            return ()
        return tuple(self._letters(s))

    def bounds(self, budget: int | None) -> tuple[int, int | None]:
        """Range of degrees of words with at most ``budget`` letters."""
        if self.empty or budget == 0:
            return 0, 0
        if budget is None:
            if self.min_s < 1:
                raise MalformedInputError(
                    "letters of degree <= 0 make the complex infinite in each degree; "
                    "a maximal word length is required")
            return 0, None
        lo = min(0, budget * self.min_s)
        hi = None if self.max_s is None else max(0, budget * self.max_s)
        return lo, hi

    def _reachable(self, n: int, budget: int | None) -> bool:
        lo, hi = self.bounds(budget)
        return n >= lo and (hi is None or n <= hi)

    def words(self, n: int, budget: int | None) -> tuple:
        """All words of shifted degree ``n`` with at most ``budget`` letters."""
        key = (n, budget)
        got = self._cache.get(key)
        if got is not None:
            return got
        out = []
        if n == 0:
            out.append(())
        if not self.empty and budget != 0:
            nb = None if budget is None else budget - 1
            rest_lo, _ = self.bounds(nb)
            s_lo = self.min_s
            s_hi = n - rest_lo
            if self.max_s is not None:
                s_hi = min(s_hi, self.max_s)
            for s in range(s_lo, s_hi + 1):
                letters = self.letters(s)
                if not letters or not self._reachable(n - s, nb):
                    continue
                tails = self.words(n - s, nb)
                for a in letters:
                    for t in tails:
                        out.append((a,) + t)
        got = tuple(out)
        self._cache[key] = got
        return got

    def word_degree(self, w) -> int:
        return sum(self._degree(a) for a in w)


def _slot_bounds(slot, budget):
    kind, obj = slot
    if kind == "M":
        return obj.lo, obj.hi
    return obj.bounds(budget)


def _enumerate(slots: Sequence, n: int, budget: int | None):
    """Labels ``(x0, x1, ...)`` with one entry per slot and total degree ``n``."""
    out: list = []
    k = len(slots)
    los = [None] * k
    # lower bounds of the remaining slots assuming the full budget
    for i, s in enumerate(slots):
        los[i] = _slot_bounds(s, budget)[0]
    suffix = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix[i] = suffix[i + 1] + los[i]

    def rec(i, remaining, budget_left, acc):
        if i == k:
            if remaining == 0:
                out.append(tuple(acc))
            return
        kind, obj = slots[i]
        lo, hi = _slot_bounds(slots[i], budget_left)
        top = remaining - suffix[i + 1]
        if hi is not None:
            top = min(top, hi)
        if i == k - 1:
            lo = max(lo, remaining)
            top = min(top, remaining)
        for d in range(lo, top + 1):
            if kind == "M":
                for x in obj.basis(d):
                    acc.append(x)
                    rec(i + 1, remaining - d, budget_left, acc)
                    acc.pop()
            else:
                for w in obj.words(d, budget_left):
                    acc.append(w)
                    rec(i + 1, remaining - d,
                        None if budget_left is None else budget_left - len(w), acc)
                    acc.pop()

    rec(0, n, budget, [])
    return out


def _same_algebra(x, y) -> bool:
    if x is y:
        return True
    for attr in ("opposite_of", "enveloped"):
        if getattr(x, attr, None) is not None and getattr(x, attr) is getattr(y, attr, None):
            return True
    if isinstance(x, Graded) and isinstance(y, Graded) and x.finite and y.finite:
        try:
            return (x.field == y.field and x.all_labels() == y.all_labels()
                    and all(x.degree(z) == y.degree(z) for z in x.all_labels())
                    and x.product_table() == y.product_table())
        except AttributeError:
            return False
    return False


# ---------------------------------------------------------------------------
# bar complexes


class BarComplex(Graded):
    """Totalised bar complex of a chain of modules over one algebra.

    ``modules = [K, M1, ..., L]`` gives ``K (x)_A M1 (x)_A ... (x)_A L`` with
    basis ``(k, w0, m1, w1, ..., l)``; the two-module case is the two-sided
    bar construction ``B(K, A, L)`` with labels ``(k, w, l)``.  With
    ``cyclic=True`` every module is a bimodule, there is a word after the last
    module, and its last letter acts on the first module from the left; one
    module gives the Hochschild complex.
    """

    def __init__(self, modules: Sequence[DGModule], algebra: DGAlgebra, cyclic: bool = False,
                 max_word_length: int | None = None):
        modules = list(modules)
        if not modules or (not cyclic and len(modules) < 2):
            raise MalformedInputError("a bar complex needs at least two modules (one if cyclic)")
        for i, m in enumerate(modules):
            if m.field != algebra.field:
                raise MalformedInputError("modules and algebra over different fields")
            if not _same_algebra(m.algebra, algebra):
                raise MalformedInputError(f"module {i} is not over the given algebra")
            need_right = cyclic or i < len(modules) - 1
            need_left = cyclic or i > 0
            if need_right and not m.is_right:
                raise MalformedInputError(f"module {i} must carry a right action")
            if need_left and not m.is_left:
                raise MalformedInputError(f"module {i} must carry a left action")
        if max_word_length is not None and max_word_length < 0:
            raise MalformedInputError("max_word_length must be nonnegative")
        self.modules = modules
        self.algebra = algebra
        self.cyclic = cyclic
        self.max_word_length = max_word_length
        self.positive = is_positive(algebra)
        if not self.positive and max_word_length is None:
            raise PositivityError(
                "algebra is not positive; give max_word_length",
                positivity_failures(algebra))
        self.alphabet = Alphabet.of_algebra(algebra)
        slots = []
        for i, m in enumerate(modules):
            slots.append(("M", m))
            if cyclic or i < len(modules) - 1:
                slots.append(("W", self.alphabet))
        self.slots = slots
        lo = sum(_slot_bounds(s, max_word_length)[0] for s in slots)
        his = [_slot_bounds(s, max_word_length)[1] for s in slots]
        hi = None if any(h is None for h in his) else sum(his)
        Graded.__init__(self, algebra.field, self._basis, self._degree, self._d, lo, hi,
                        "B(" + ",".join(m.name or "M" for m in modules) + ")")

    # -- structure -----------------------------------------------------------

    def _basis(self, n):
        return _enumerate(self.slots, n, self.max_word_length)

    def _degree(self, x):
        deg = 0
        for (kind, obj), part in zip(self.slots, x):
            deg += obj.degree(part) if kind == "M" else self.alphabet.word_degree(part)
        return deg

    def word_length(self, x) -> int:
        return sum(len(part) for (kind, _), part in zip(self.slots, x) if kind == "W")

    def _flatten(self, x):
        items = []
        mi = 0
        for (kind, obj), part in zip(self.slots, x):
            if kind == "M":
                items.append(("M", mi, part, obj.degree(part)))
                mi += 1
            else:
                for a in part:
                    items.append(("L", None, a, self.algebra.degree(a) + 1))
        return items

    def _assemble(self, items):
        out = []
        word: list = []
        first = True
        for kind, _, v, _ in items:
            if kind == "M":
                if not first:
                    out.append(tuple(word))
                    word = []
                out.append(v)
                first = False
            else:
                word.append(v)
        if self.cyclic:
            out.append(tuple(word))
        return tuple(out)

    def _d(self, x):
        A = self.algebra
        items = self._flatten(x)
        out: dict = {}
        prefix = 0
        n = len(items)
        for j, (kind, mi, v, deg) in enumerate(items):
            s = _sign(prefix)
            if kind == "M":
                for y, c in self.modules[mi].d(v).items():
                    new = items[:j] + [("M", mi, y, deg - 1)] + items[j + 1:]
                    vadd(out, {self._assemble(new): 1}, s * c)
            else:
                for y, c in A.d(v).items():
                    new = items[:j] + [("L", None, y, deg - 1)] + items[j + 1:]
                    vadd(out, {self._assemble(new): 1}, -s * c)
            if j + 1 < n:
                kind2, mi2, v2, deg2 = items[j + 1]
                t = _sign(prefix + deg)
                if kind == "M" and kind2 == "L":
                    res = self.modules[mi].right(v, v2)
                    for y, c in res.items():
                        new = items[:j] + [("M", mi, y, deg + deg2 - 1)] + items[j + 2:]
                        vadd(out, {self._assemble(new): 1}, t * c)
                elif kind == "L" and kind2 == "L":
                    for y, c in A.mul(v, v2).items():
                        new = items[:j] + [("L", None, y, deg + deg2 - 1)] + items[j + 2:]
                        vadd(out, {self._assemble(new): 1}, t * c)
                elif kind == "L" and kind2 == "M":
                    for y, c in self.modules[mi2].left(v, v2).items():
                        new = items[:j] + [("M", mi2, y, deg + deg2 - 1)] + items[j + 2:]
                        vadd(out, {self._assemble(new): 1}, -s * c)
            prefix += deg
        if self.cyclic and items[-1][0] == "L":
            _, _, a, da = items[-1]
            total = prefix
            rot = -_sign(da * (total - da))
            _, mi0, m0, dm0 = items[0]
            for y, c in self.modules[0].left(a, m0).items():
                new = [("M", 0, y, da + dm0 - 1)] + items[1:-1]
                vadd(out, {self._assemble(new): 1}, rot * c)
        return out

    # -- certification ---------------------------------------------------------

    def min_module_degree(self) -> int:
        return sum(m.lo for m in self.modules)

    def word_bound(self, n: int) -> int | None:
        """Longest word that can occur in degree ``n`` (``None`` if unbounded)."""
        if self.positive:
            step = self.alphabet.min_s if not self.alphabet.empty else 2
            return max(0, (n - self.min_module_degree()) // step)
        return self.max_word_length

    def exact_on(self, hi: int) -> bool:
        """True when no word was cut off in degrees ``<= hi + 1``."""
        if not self.positive:
            return False
        if self.max_word_length is None:
            return True
        return self.max_word_length >= (self.word_bound(hi + 1) or 0)

    def filtration(self, lo: int, hi: int) -> FilteredComplex:
        """Word-length filtration ``F_{-p}`` = span of words with at most ``p`` letters."""
        c = self.complex(lo, hi)
        top = max((self.word_length(x) for n in range(lo, hi + 1) for x in self.basis(n)),
                  default=0)
        return FilteredComplex.from_weight(c, lambda n, x: -self.word_length(x), -top, 1)

    def betti(self, lo: int, hi: int) -> dict[int, int]:
        return betti_table(self.complex(min(lo, self.lo), hi + 1), lo, hi)

    # -- induced module and comodule structures ----------------------------------

    def as_left_module(self) -> DGModule:
        """Left action of the algebra acting on the first module."""
        if self.cyclic or not self.modules[0].is_left:
            raise MalformedInputError("first module carries no left action")
        m0 = self.modules[0]

        def left(a, x):
            return {(y,) + x[1:]: c for y, c in m0.left(a, x[0]).items()}

        mod = DGModule(self, m0.algebra, "left", left=left)
        mod.name = self.name
        return mod

    def as_right_module(self) -> DGModule:
        if self.cyclic or not self.modules[-1].is_right:
            raise MalformedInputError("last module carries no right action")
        ml = self.modules[-1]

        def right(x, a):
            return {x[:-1] + (y,): c for y, c in ml.right(x[-1], a).items()}

        mod = DGModule(self, ml.algebra, "right", right=right)
        mod.name = self.name
        return mod

    def as_bimodule(self) -> DGModule:
        left = self.as_left_module()._left
        right = self.as_right_module()._right
        return DGModule(self, self.modules[0].algebra, "bimodule", left=left, right=right)

    def as_right_comodule(self, dual: DGCoalgebra) -> DGComodule:
        """``B(K, A, 1)`` is a right comodule over ``A^!`` by deconcatenating
        the last word."""
        if self.cyclic or not getattr(self.modules[-1], "trivial", False):
            raise MalformedInputError("the last module must be the trivial module")

        def coact(x):
            w = x[-2]
            return {(x[:-2] + (w[:i], x[-1]), w[i:]): 1 for i in range(len(w) + 1)}

        return DGComodule(self, dual, "right", coact)

    def as_left_comodule(self, dual: DGCoalgebra) -> DGComodule:
        if self.cyclic or not getattr(self.modules[0], "trivial", False):
            raise MalformedInputError("the first module must be the trivial module")

        def coact(x):
            w = x[1]
            return {(w[:i], (x[0], w[i:]) + x[2:]): 1 for i in range(len(w) + 1)}

        return DGComodule(self, dual, "left", coact)


def bar(k: DGModule, a: DGAlgebra, l: DGModule,
        max_word_length: int | None = None) -> BarComplex:
    """Two-sided bar construction ``B(K, A, L)`` computing ``K (x)^L_A L``."""
    return BarComplex([k, l], a, max_word_length=max_word_length)


@dataclass
class TensorResult:
    betti: dict
    representatives: dict
    exact: bool
    complex: BarComplex = dc_field(repr=False)


def tensor_over(k: DGModule, a: DGAlgebra, l: DGModule, lo: int, hi: int,
                max_word_length: int | None = None, representatives: bool = True) -> TensorResult:
    """Homology of ``B(K, A, L)`` in degrees ``lo..hi``."""
    b = bar(k, a, l, max_word_length)
    c = b.complex(min(lo, b.lo), hi + 1)
    betti = {}
    reps = {}
    for n in range(lo, hi + 1):
        h = homology(c, n, representatives=representatives)
        betti[n] = h.betti
        if representatives:
            reps[n] = h.representatives
    return TensorResult(betti, reps, b.exact_on(hi), b)


def hochschild(a: DGAlgebra, max_word_length: int | None = None, cuts: int = 1) -> BarComplex:
    """Cyclic bar complex with ``cuts`` copies of ``A`` as coefficient bimodules."""
    from .dg import regular_module
    if cuts < 1:
        raise MalformedInputError("the cyclic bar complex needs at least one module")
    mods = [regular_module(a, "bimodule") for _ in range(cuts)]
    return BarComplex(mods, a, cyclic=True, max_word_length=max_word_length)


# ---------------------------------------------------------------------------
# Koszul dual coalgebra


def _require_positive(a: DGAlgebra):
    if not is_positive(a):
        bad = positivity_failures(a)
        raise PositivityError(
            "augmentation ideal is not concentrated in degrees >= 1 "
            f"(offending degrees {bad})", bad)


def koszul_dual(a: DGAlgebra, max_word_length: int | None = None) -> DGCoalgebra:
    """``A^! = B(1, A, 1)``: words in the suspended ideal, deconcatenation coproduct.

    Labels are tuples of ideal basis labels; ``()`` is the counit.
    """
    if max_word_length is None:
        _require_positive(a)
    one_r = trivial_module(a, "right")
    one_l = trivial_module(a, "left")
    b = BarComplex([one_r, one_l], a, max_word_length=max_word_length)
    alph = b.alphabet

    def basis(n):
        return alph.words(n, max_word_length)

    def d(w):
        return {y[1]: c for y, c in b.d(("1", w, "1")).items()}

    carrier = Graded(a.field, basis, alph.word_degree, d, b.lo, b.hi,
                     f"{a.name}^!" if a.name else None)

    def cop(w):
        return {(w[:i], w[i:]): 1 for i in range(len(w) + 1)}

    lo = None if alph.empty else alph.min_s
    c = DGCoalgebra(carrier, (), cop, coideal_lo=lo)
    c.bar = b
    c.source = a
    c.exact = max_word_length is None
    return c


def word_length_filtration_ok(c: DGCoalgebra, hi: int) -> bool:
    """Deconcatenation preserves total word length on every basis word."""
    for n in range(c.lo, hi + 1):
        for w in c.basis(n):
            for (u, v) in c.coproduct(w):
                if len(u) + len(v) != len(w):
                    return False
    return True


# ---------------------------------------------------------------------------
# cobar complexes


def _right_coaction(obj, x) -> dict:
    """Reduced right coaction ``x -> sum x' (x) j`` with ``j`` in the coideal."""
    if isinstance(obj, DGModule):
        obj = obj.coaction
        if obj is None:
            raise MalformedInputError("module carries no coaction")
    if isinstance(obj, DGCoalgebra):
        e = obj.counit
        return {k: c for k, c in obj.coproduct(x).items() if k[1] != e}
    if obj.side != "right":
        raise MalformedInputError("comodule must be a right comodule here")
    return obj.reduced_coact(x)


def _left_coaction(obj, x) -> dict:
    if isinstance(obj, DGCoalgebra):
        e = obj.counit
        return {k: c for k, c in obj.coproduct(x).items() if k[0] != e}
    if isinstance(obj, DGModule):
        raise MalformedInputError("module carries no left coaction")
    if obj.side != "left":
        raise MalformedInputError("comodule must be a left comodule here")
    return obj.reduced_coact(x)


def _coalgebra_of(obj):
    if isinstance(obj, DGCoalgebra):
        return obj
    if isinstance(obj, DGModule):
        return obj.coaction.coalgebra if obj.coaction is not None else None
    return obj.coalgebra


class CobarComplex(Graded):
    """Totalised cobar complex of a chain of comodules over one coalgebra.

    ``comodules = [K, C, ..., C, L]`` computes ``K box_C C box_C ... box_C L``
    (middle entries are the coalgebra itself as a bicomodule); labels are
    ``(k, w0, m1, ..., l)`` with words of coideal labels.  ``K`` may also be a
    module with an attached coaction.
    """

    def __init__(self, comodules: Sequence, coalgebra: DGCoalgebra,
                 max_word_length: int | None = None):
        comodules = list(comodules)
        if len(comodules) < 2:
            raise MalformedInputError("a cotensor complex needs at least two comodules")
        for i, m in enumerate(comodules):
            if m.field != coalgebra.field:
                raise MalformedInputError("comodules and coalgebra over different fields")
            co = _coalgebra_of(m)
            if co is not coalgebra and not (isinstance(m, DGCoalgebra) and m is coalgebra):
                raise MalformedInputError(f"comodule {i} is not over the given coalgebra")
        if isinstance(comodules[0], DGComodule) and comodules[0].side != "right":
            raise MalformedInputError("first comodule must be a right comodule")
        if isinstance(comodules[-1], DGComodule) and comodules[-1].side != "left":
            raise MalformedInputError("last comodule must be a left comodule")
        if isinstance(comodules[-1], DGModule):
            raise MalformedInputError("last comodule must be a left comodule")
        for m in comodules[1:-1]:
            if m is not coalgebra:
                raise MalformedInputError("middle entries must be the coalgebra itself")
        self.comodules = comodules
        self.coalgebra = coalgebra
        self.max_word_length = max_word_length
        self.certified = is_copositive(coalgebra, 2)
        if not self.certified and max_word_length is None:
            raise PositivityError(
                "coideal is not concentrated in degrees >= 2; "
                "use a truncation policy",
                [coalgebra.coideal_lo])
        self.alphabet = Alphabet.of_coalgebra(coalgebra)
        slots = []
        for i, m in enumerate(comodules):
            slots.append(("M", m))
            if i < len(comodules) - 1:
                slots.append(("W", self.alphabet))
        self.slots = slots
        lo = sum(_slot_bounds(s, max_word_length)[0] for s in slots)
        his = [_slot_bounds(s, max_word_length)[1] for s in slots]
        hi = None if any(h is None for h in his) else sum(his)
        Graded.__init__(self, coalgebra.field, self._basis, self._degree, self._d, lo, hi,
                        "cotensor")

    def _basis(self, n):
        return _enumerate(self.slots, n, self.max_word_length)

    def _degree(self, x):
        deg = 0
        for (kind, obj), part in zip(self.slots, x):
            deg += obj.degree(part) if kind == "M" else self.alphabet.word_degree(part)
        return deg

    def word_length(self, x) -> int:
        return sum(len(part) for (kind, _), part in zip(self.slots, x) if kind == "W")

    def _flatten(self, x):
        items = []
        mi = 0
        for (kind, obj), part in zip(self.slots, x):
            if kind == "M":
                items.append(("M", mi, part, obj.degree(part)))
                mi += 1
            else:
                for j in part:
                    items.append(("L", None, j, self.coalgebra.degree(j) - 1))
        return items

    def _assemble(self, items):
        out = []
        word: list = []
        first = True
        for kind, _, v, _ in items:
            if kind == "M":
                if not first:
                    out.append(tuple(word))
                    word = []
                out.append(v)
                first = False
            else:
                word.append(v)
        return tuple(out)

    def _d(self, x):
        C = self.coalgebra
        items = self._flatten(x)
        out: dict = {}
        prefix = 0
        last = len(self.comodules) - 1
        for j, (kind, mi, v, deg) in enumerate(items):
            s = _sign(prefix)
            if kind == "M":
                obj = self.comodules[mi]
                for y, c in obj.d(v).items():
                    new = items[:j] + [("M", mi, y, deg - 1)] + items[j + 1:]
                    vadd(out, {self._assemble(new): 1}, s * c)
                if mi < last:
                    for (y, jj), c in _right_coaction(obj, v).items():
                        dy = obj.degree(y)
                        new = (items[:j] + [("M", mi, y, dy), ("L", None, jj, C.degree(jj) - 1)]
                               + items[j + 1:])
                        vadd(out, {self._assemble(new): 1}, s * _sign(dy) * c)
                if mi > 0:
                    for (jj, y), c in _left_coaction(obj, v).items():
                        dj = C.degree(jj) - 1
                        new = (items[:j] + [("L", None, jj, dj), ("M", mi, y, obj.degree(y))]
                               + items[j + 1:])
                        vadd(out, {self._assemble(new): 1}, -s * c)
            else:
                for y, c in C.d(v).items():
                    new = items[:j] + [("L", None, y, deg - 1)] + items[j + 1:]
                    vadd(out, {self._assemble(new): 1}, -s * c)
                e = C.counit
                for (u, w), c in C.coproduct(v).items():
                    if u == e or w == e:
                        continue
                    du = C.degree(u) - 1
                    new = (items[:j] + [("L", None, u, du), ("L", None, w, C.degree(w) - 1)]
                           + items[j + 1:])
                    vadd(out, {self._assemble(new): 1}, s * _sign(du) * c)
            prefix += deg
        return self._cap(out)

    def _cap(self, out: dict) -> dict:
        # d never shortens words, so longer words span a subcomplex and the
        # truncation is the quotient by it
        p = self.max_word_length
        if p is None:
            return out
        return {y: c for y, c in out.items() if self.word_length(y) <= p}

    def min_module_degree(self) -> int:
        return sum(m.lo for m in self.comodules)

    def word_bound(self, n: int) -> int | None:
        if self.certified:
            step = self.alphabet.min_s if not self.alphabet.empty else 1
            return max(0, (n - self.min_module_degree()) // step)
        return self.max_word_length

    def exact_on(self, hi: int) -> bool:
        if not self.certified:
            return False
        if self.max_word_length is None:
            return True
        return self.max_word_length >= (self.word_bound(hi + 1) or 0)

    def filtration(self, lo: int, hi: int) -> FilteredComplex:
        c = self.complex(lo, hi)
        top = max((self.word_length(x) for n in range(lo, hi + 1) for x in self.basis(n)),
                  default=0)
        # coproducts raise word length, so F_p = span of words with >= p letters
        return FilteredComplex.from_weight(c, lambda n, x: self.word_length(x), 0, top + 1)

    def betti(self, lo: int, hi: int) -> dict[int, int]:
        return betti_table(self.complex(min(lo, self.lo), hi + 1), lo, hi)

    def as_left_module(self) -> DGModule:
        """For ``L box_C X`` with ``L`` an A-module: the action on ``L``."""
        m0 = self.comodules[0]
        if not isinstance(m0, DGModule) or not m0.is_left:
            raise MalformedInputError("first entry carries no left action")

        def left(a, x):
            return {(y,) + x[1:]: c for y, c in m0.left(a, x[0]).items()}

        mod = DGModule(self, m0.algebra, "left", left=left)
        mod.name = "cotensor"
        return mod


# ---------------------------------------------------------------------------
# truncation policies and cotensor products


@dataclass(frozen=True)
class Policy:
    """``exact`` needs a coideal in degrees >= 2; ``truncate`` caps word length
    at ``maxp`` and certifies by stabilisation over ``window`` increments."""

    mode: str = "exact"
    maxp: int | None = None
    window: int = 2

    def __post_init__(self):
        if self.mode not in ("exact", "truncate"):
            raise MalformedInputError(f"unknown truncation policy {self.mode!r}")
        if self.mode == "truncate":
            if self.maxp is None or self.maxp < 0:
                raise MalformedInputError("truncate policy needs maxp >= 0")
            if self.window < 2:
                raise MalformedInputError("stabilisation window must be at least 2")

    @classmethod
    def truncate(cls, maxp: int, window: int = 2) -> "Policy":
        return cls("truncate", maxp, window)


@dataclass
class CotensorResult:
    betti: dict
    status: str  # "exact", "stabilized" or "truncated-uncertified"
    history: list
    complex: CobarComplex = dc_field(repr=False)

    @property
    def certified(self) -> bool:
        return self.status in ("exact", "stabilized")


def _cotensor_chain(comodules, c, lo, hi, policy: Policy) -> CotensorResult:
    if policy.mode == "exact":
        if not is_copositive(c, 2):
            raise PositivityError("exact cotensor needs a coideal in degrees >= 2",
                                  [c.coideal_lo])
        cx = CobarComplex(comodules, c)
        return CotensorResult(cx.betti(lo, hi), "exact", [], cx)
    history = []
    cx = None
    for p in range(policy.maxp, policy.maxp + policy.window + 1):
        cx = CobarComplex(comodules, c, max_word_length=p)
        history.append((p, cx.betti(lo, hi)))
    stable = all(h == history[0][1] for _, h in history)
    if is_copositive(c, 2) and cx.exact_on(hi):
        status = "exact"
    else:
        status = "stabilized" if stable else "truncated-uncertified"
    return CotensorResult(history[-1][1], status, history, cx)


def cotensor(k, c: DGCoalgebra, l, lo: int, hi: int,
             policy: Policy = Policy()) -> CotensorResult:
    """Homology of the cotensor product ``K box_C L`` in degrees ``lo..hi``."""
    return _cotensor_chain([k, l], c, lo, hi, policy)


# ---------------------------------------------------------------------------
# cobar algebra


def cobar(c: DGCoalgebra, max_word_length: int | None = None) -> DGAlgebra:
    """``Omega(C)``: words in the desuspended coideal, concatenation product.

    Labels are tuples of coideal labels and ``()`` is the unit.  Without a
    word-length cap the coideal must sit in degrees >= 2.
    """
    if max_word_length is None and not is_copositive(c, 2):
        raise PositivityError("cobar needs a coideal in degrees >= 2 (or a word cap)",
                              [c.coideal_lo])
    one_r = trivial_comodule(c, "right")
    one_l = trivial_comodule(c, "left")
    cx = CobarComplex([one_r, one_l], c, max_word_length=max_word_length)
    alph = cx.alphabet

    def basis(n):
        return alph.words(n, max_word_length)

    def d(w):
        return {y[1]: k for y, k in cx.d(("1", w, "1")).items()}

    carrier = Graded(c.field, basis, alph.word_degree, d, cx.lo, cx.hi,
                     f"Omega({c.name})" if c.name else None)

    def mul(u, v):
        if max_word_length is not None and len(u) + len(v) > max_word_length:
            return {}
        return {u + v: 1}

    lo = None if alph.empty else alph.min_s
    out = DGAlgebra(carrier, (), mul, ideal_lo=lo,
                    ideal_hi=None if not carrier.finite else carrier.hi)
    out.cobar_of = c
    out.cotensor = cx
    return out


# ---------------------------------------------------------------------------
# canonical comparison maps


@dataclass
class Verdict:
    ok: bool
    lo: int
    hi: int
    details: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return bool(self.ok)


def _map_on(source: Graded, target: Graded, lo: int, hi: int, f) -> ChainMap:
    s = source.complex(min(lo, source.lo), hi + 1)
    t = target.complex(min(lo, target.lo), hi + 1)
    return ChainMap.from_function(s, t, f)


def _certify_map(m: ChainMap, lo: int, hi: int) -> dict:
    rep = validate_map(m)
    src = betti_table(m.source, lo, hi)
    tgt = betti_table(m.target, lo, hi)
    return {
        "chain_map": rep.ok,
        "quasi_iso": rep.ok and is_quasi_iso(m, lo, hi),
        "source_betti": src,
        "target_betti": tgt,
        "witnesses": rep.failures[:5],
    }


def bar_bimodule(a: DGAlgebra) -> DGModule:
    """``B(A, A, 1)``: a left A-module with the right ``A^!``-coaction that
    deconcatenates the word.  It resolves the trivial module."""
    from .dg import regular_module
    dual = koszul_dual(a)
    b = bar(regular_module(a, "bimodule"), a, trivial_module(a, "left"))
    co = b.as_right_comodule(dual)
    mod = b.as_left_module()
    out = DGModule(b, a, "left", left=mod._left, coaction=co)
    out.name = "B(A,A,1)"
    out.dual = dual
    return out


def completeness_map(k: DGModule, a: DGAlgebra, lo: int, hi: int) -> tuple[ChainMap, Verdict]:
    """``K -> (K (x)_A 1) box_{A^!} 1`` as the inclusion of word-length zero."""
    _require_positive(a)
    if not k.is_right:
        raise MalformedInputError("completeness map needs a right module")
    dual = koszul_dual(a)
    bk = bar(k, a, trivial_module(a, "left"))
    target = CobarComplex([bk.as_right_comodule(dual), trivial_comodule(dual, "left")], dual)
    m = _map_on(k, target, lo, hi, lambda x: {((x, (), "1"), (), "1"): 1})
    det = _certify_map(m, lo, hi)
    return m, Verdict(det["chain_map"] and det["quasi_iso"], lo, hi, det)


def roundtrip_map(a: DGAlgebra, lo: int, hi: int) -> tuple[DGAlgebra, ChainMap]:
    """The counit ``Omega(A^!) -> A``: a one-letter word ``<[a]>`` goes to
    ``-a`` (the sign the conventions force), longer words to zero, extended
    multiplicatively."""
    _require_positive(a)
    om = cobar(koszul_dual(a))

    def f(ws):
        vec = {a.unit: 1}
        for w in ws:
            if len(w) != 1:
                return {}
            vec = a.mul_vec(vec, {w[0]: -1})
            if not vec:
                return {}
        return vec

    return om, _map_on(om, a, lo, hi, f)


def roundtrip_check(a: DGAlgebra, lo: int, hi: int) -> Verdict:
    """``H(Omega(A^!)) = H(A)`` via the counit, plus a multiplicativity check
    on products of homology representatives."""
    om, m = roundtrip_map(a, lo, hi)
    det = _certify_map(m, lo, hi)
    ok = det["chain_map"] and det["quasi_iso"] and det["source_betti"] == det["target_betti"]
    # products of representatives map to products of images
    reps = {n: homology(m.source, n).representatives for n in range(lo, hi + 1)}
    checked = 0
    mult_ok = True
    for i in range(lo, hi + 1):
        for j in range(lo, hi + 1 - i):
            for u in reps.get(i, [])[:3]:
                for v in reps.get(j, [])[:3]:
                    prod = om.mul_vec(u, v)
                    lhs = m(i + j, prod) if i + j <= hi + 1 else {}
                    rhs = a.mul_vec(m(i, u), m(j, v))
                    checked += 1
                    if lhs != rhs:
                        mult_ok = False
    det["multiplicative"] = mult_ok
    det["products_checked"] = checked
    return Verdict(ok and mult_ok, lo, hi, det)


def interchange_complexes(k: DGModule, a: DGAlgebra, l: DGModule, c: DGCoalgebra, x):
    """Both totalisations ``K (x)_A (L box_C X)`` and ``(K (x)_A L) box_C X``."""
    _require_positive(a)
    if not is_copositive(c, 2):
        raise PositivityError("interchange needs a coideal in degrees >= 2", [c.coideal_lo])
    if l.coaction is None or l.coaction.coalgebra is not c:
        raise MalformedInputError("L must carry a right coaction of the given coalgebra")
    inner = CobarComplex([l, x], c).as_left_module()
    left_side = bar(k, a, inner)
    bkl = bar(k, a, l)
    co = DGComodule(bkl, c, "right",
                    lambda y: {(y[:-1] + (z,), j): v for (z, j), v in l.coaction.coact(y[-1]).items()})
    right_side = CobarComplex([co, x], c)
    return left_side, right_side


def interchange_check(k: DGModule, a: DGAlgebra, l: DGModule, c: DGCoalgebra, x,
                      lo: int, hi: int) -> Verdict:
    left_side, right_side = interchange_complexes(k, a, l, c, x)

    def f(y):
        kk, w, (ll, v, xx) = y
        return {((kk, w, ll), v, xx): 1}

    m = _map_on(left_side, right_side, lo, hi, f)
    det = _certify_map(m, lo, hi)
    ok = det["chain_map"] and det["quasi_iso"] and det["source_betti"] == det["target_betti"]
    return Verdict(ok, lo, hi, det)


def poincare_map(k: DGModule, a: DGAlgebra, l: DGModule, lo: int, hi: int) -> ChainMap:
    """``B(K, A, L) -> B(K, A, 1) box_{A^!} B(1, A, L)`` by deconcatenating
    the word into the zeroth cotensor column."""
    _require_positive(a)
    dual = koszul_dual(a)
    src = bar(k, a, l)
    bk = bar(k, a, trivial_module(a, "left")).as_right_comodule(dual)
    bl = bar(trivial_module(a, "right"), a, l).as_left_comodule(dual)
    target = CobarComplex([bk, bl], dual)

    def f(y):
        kk, w, ll = y
        return {((kk, w[:i], "1"), (), ("1", w[i:], ll)): 1 for i in range(len(w) + 1)}

    return _map_on(src, target, lo, hi, f)
