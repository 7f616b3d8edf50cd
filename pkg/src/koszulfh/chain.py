"""Bounded chain complexes over an exact field.

Grading is homological: the differential ``d_n: C_n -> C_{n-1}`` lowers
degree by one.  Basis elements are arbitrary hashable labels, unique within
a degree.  Vectors are dictionaries ``label -> scalar``.

Sign conventions (Koszul rule):

* ``tensor``: ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``
* ``shift`` by ``k``: degrees raised by ``k``, differential times ``(-1)^k``
* ``dualize``: ``(d phi)(x) = -(-1)^|phi| phi(dx)``
* ``cone(f)``: ``Cone_n = T_n + S_{n-1}``, ``d(t, s) = (dt + f s, -ds)``
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import MalformedInputError
from .field import Field, QQ
from .linalg import Echelon, SparseMatrix, kernel_basis, rank

Label = Hashable
Vector = dict


def vadd(acc: dict, vec: Mapping, c=1) -> dict:
    """``acc += c * vec`` in place, dropping zeros."""
    for k, v in vec.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def label_name(x) -> str:
    """Human readable rendering of a (possibly nested) basis label."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(label_name(y) for y in x) + ")"
    return str(x)


@dataclass
class ValidationReport:
    """Outcome of an axiom check.  Truthy iff every check passed."""

    checked: str
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def fail(self, **witness):
        self.failures.append(witness)

    def extend(self, other: "ValidationReport"):
        self.failures.extend(other.failures)
        return self

    def __repr__(self):
        status = "pass" if self.ok else f"fail ({len(self.failures)} witnesses)"
        return f"<ValidationReport {self.checked}: {status}>"


class GradedSpace:
    """A graded vector space with a named basis in each degree."""

    def __init__(self, basis: Mapping[int, Sequence[Label]]):
        self.basis: dict[int, tuple] = {}
        self.index: dict[int, dict] = {}
        for n in sorted(basis):
            b = tuple(basis[n])
            if not b:
                continue
            idx = {x: i for i, x in enumerate(b)}
            if len(idx) != len(b):
                raise MalformedInputError(f"repeated basis label in degree {n}")
            self.basis[n] = b
            self.index[n] = idx

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    @property
    def degrees(self) -> list[int]:
        return sorted(self.basis)

    @property
    def support(self) -> tuple[int, int] | None:
        if not self.basis:
            return None
        return min(self.basis), max(self.basis)

    def dims(self) -> dict[int, int]:
        return {n: len(b) for n, b in self.basis.items()}

    def contains(self, n: int, x: Label) -> bool:
        return x in self.index.get(n, {})

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.basis == other.basis


class ChainComplex:
    """Finite-dimensional chain complex with explicit sparse differentials."""

    def __init__(self, space: GradedSpace, diff: Mapping[int, SparseMatrix], field: Field = QQ):
        self.space = space
        self.field = field
        self.diff: dict[int, SparseMatrix] = {}
        for n, m in diff.items():
            if m.field != field:
                raise MalformedInputError(f"differential in degree {n} is over {m.field!r}")
            if m.shape != (space.dim(n - 1), space.dim(n)):
                raise MalformedInputError(
                    f"d_{n} has shape {m.shape}, expected {(space.dim(n - 1), space.dim(n))}")
            if m.nnz:
                self.diff[n] = m
        self._ranks: dict[int, int] = {}

    # -- construction -------------------------------------------------------

    @classmethod
    def from_function(cls, field: Field, basis: Mapping[int, Sequence[Label]],
                      d: Callable[[Label], Mapping[Label, object]], lo: int | None = None):
        """Build from a differential given on basis labels.

        ``d(x)`` returns the boundary of ``x`` as ``label -> coeff`` in the
        degree below.  Terms landing below ``lo`` (the bottom of a truncation
        window) are discarded; any other unknown label is an error.
        """
        space = GradedSpace(basis)
        if lo is None:
            lo = min(space.basis) if space.basis else 0
        diffs = {}
        for n, b in space.basis.items():
            if n - 1 < lo:
                continue
            target = space.index.get(n - 1, {})
            cols = []
            for x in b:
                col = {}
                for y, c in d(x).items():
                    if not c:
                        continue
                    j = target.get(y)
                    if j is None:
                        raise MalformedInputError(
                            f"boundary of {label_name(x)} (degree {n}) has term "
                            f"{label_name(y)} outside degree {n - 1}")
                    col[j] = col.get(j, 0) + field(c)
                cols.append(col)
            diffs[n] = SparseMatrix.from_columns(space.dim(n - 1), cols, field)
        return cls(space, diffs, field)

    @classmethod
    def unit(cls, field: Field = QQ, label: Label = "1"):
        """The monoidal unit: one basis vector in degree 0."""
        return cls(GradedSpace({0: [label]}), {}, field)

    @classmethod
    def zero(cls, field: Field = QQ):
        return cls(GradedSpace({}), {}, field)

    # -- accessors ----------------------------------------------------------

    @property
    def basis(self):
        return self.space.basis

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def dims(self) -> dict[int, int]:
        return self.space.dims()

    def d(self, n: int) -> SparseMatrix:
        m = self.diff.get(n)
        if m is None:
            return SparseMatrix.zero(self.dim(n - 1), self.dim(n), self.field)
        return m

    @property
    def degrees(self):
        return self.space.degrees

    @property
    def support(self):
        return self.space.support

    def boundary(self, n: int, vec: Mapping[Label, object]) -> dict:
        """Apply ``d_n`` to a vector given by labels."""
        idx = self.space.index.get(n, {})
        img = self.d(n).apply({idx[x]: c for x, c in vec.items()})
        b = self.basis.get(n - 1, ())
        return {b[i]: c for i, c in img.items()}

    def rank_d(self, n: int) -> int:
        if n not in self._ranks:
            m = self.diff.get(n)
            self._ranks[n] = rank(m) if m is not None else 0
        return self._ranks[n]

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * k for n, k in self.space.dims().items())

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        if self.field != other.field or self.space != other.space:
            return False
        return all(self.d(n) == other.d(n) for n in set(self.diff) | set(other.diff))

    def __repr__(self):
        dims = ", ".join(f"{n}:{k}" for n, k in sorted(self.space.dims().items()))
        return f"ChainComplex({{{dims}}}, {self.field!r})"


@dataclass
class Homology:
    degree: int
    betti: int
    representatives: list


def validate(c: ChainComplex) -> ValidationReport:
    """Check ``d_{n-1} d_n = 0`` in every degree, reporting a witness column."""
    rep = ValidationReport("d^2 = 0")
    for n in sorted(c.diff):
        if n - 1 not in c.diff:
            continue
        prod = c.d(n - 1) @ c.d(n)
        for j, col in enumerate(prod.columns()):
            if col:
                rep.fail(degree=n, basis=label_name(c.basis[n][j]))
                break
    return rep


def homology(c: ChainComplex, n: int, representatives: bool = True) -> Homology:
    """Betti number of ``H_n`` and, optionally, cycles projecting to a basis."""
    dim = c.dim(n)
    if dim == 0:
        return Homology(n, 0, [])
    betti = dim - c.rank_d(n) - c.rank_d(n + 1)
    reps: list = []
    if representatives and betti:
        basis = c.basis[n]
        ech = Echelon(c.field)
        for col in c.d(n + 1).columns():
            ech.add(col)
        ker = kernel_basis(c.d(n))
        for col in ker.columns():
            if ech.add(col):
                reps.append({basis[i]: v for i, v in col.items()})
                if len(reps) == betti:
                    break
    return Homology(n, betti, reps)


def betti(c: ChainComplex, n: int) -> int:
    return homology(c, n, representatives=False).betti


def betti_table(c: ChainComplex, lo: int, hi: int) -> dict[int, int]:
    return {n: betti(c, n) for n in range(lo, hi + 1)}


def betti_vector(c: ChainComplex, lo: int, hi: int) -> tuple[int, ...]:
    return tuple(betti(c, n) for n in range(lo, hi + 1))


def convolve(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    """Graded convolution of Betti tables (Kunneth over a field)."""
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            if x and y:
                out[i + j] = out.get(i + j, 0) + x * y
    return out


# ---------------------------------------------------------------------------
# chain maps


class ChainMap:
    """Degree-preserving linear map between complexes given per degree."""

    def __init__(self, source: ChainComplex, target: ChainComplex,
                 maps: Mapping[int, SparseMatrix]):
        if source.field != target.field:
            raise MalformedInputError("chain map between complexes over different fields")
        self.source = source
        self.target = target
        self.field = source.field
        self.maps = {}
        for n, m in maps.items():
            if m.shape != (target.dim(n), source.dim(n)):
                raise MalformedInputError(f"f_{n} has shape {m.shape}")
            if m.nnz:
                self.maps[n] = m

    @classmethod
    def from_function(cls, source: ChainComplex, target: ChainComplex,
                      f: Callable[[Label], Mapping[Label, object]], strict: bool = True):
        """``f(x)`` gives the image of a source basis label as target labels.

        With ``strict=False`` terms in degrees missing from the target window
        are discarded instead of raising.
        """
        maps = {}
        F = source.field
        for n, b in source.basis.items():
            idx = target.space.index.get(n, {})
            cols = []
            for x in b:
                col = {}
                for y, c in f(x).items():
                    if not c:
                        continue
                    j = idx.get(y)
                    if j is None:
                        if strict or target.dim(n):
                            raise MalformedInputError(
                                f"image of {label_name(x)} has term {label_name(y)} "
                                f"outside target degree {n}")
                        continue
                    col[j] = col.get(j, 0) + F(c)
                cols.append(col)
            maps[n] = SparseMatrix.from_columns(target.dim(n), cols, F)
        return cls(source, target, maps)

    @classmethod
    def identity(cls, c: ChainComplex):
        return cls(c, c, {n: SparseMatrix.identity(c.dim(n), c.field) for n in c.basis})

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex):
        return cls(source, target, {})

    def f(self, n: int) -> SparseMatrix:
        m = self.maps.get(n)
        if m is None:
            return SparseMatrix.zero(self.target.dim(n), self.source.dim(n), self.field)
        return m

    def __call__(self, n: int, vec: Mapping[Label, object]) -> dict:
        idx = self.source.space.index.get(n, {})
        img = self.f(n).apply({idx[x]: c for x, c in vec.items()})
        b = self.target.basis.get(n, ())
        return {b[i]: c for i, c in img.items()}

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self o other``."""
        return ChainMap(other.source, self.target,
                        {n: self.f(n) @ other.f(n) for n in other.source.basis})


def validate_map(f: ChainMap, lo: int | None = None, hi: int | None = None) -> ValidationReport:
    """Check ``d f = f d`` on source degrees in ``[lo, hi]``."""
    rep = ValidationReport("chain map")
    degs = sorted(set(f.source.basis) | set(f.target.basis))
    for n in degs:
        if (lo is not None and n < lo) or (hi is not None and n > hi):
            continue
        lhs = f.target.d(n) @ f.f(n)
        rhs = f.f(n - 1) @ f.source.d(n)
        diff = lhs - rhs
        for j, col in enumerate(diff.columns()):
            if col:
                rep.fail(degree=n, basis=label_name(f.source.basis[n][j]))
                break
    return rep


def cone(f: ChainMap) -> ChainComplex:
    S, T = f.source, f.target
    degs = set(T.basis) | {n + 1 for n in S.basis}
    basis = {n: [("T", t) for t in T.basis.get(n, ())] + [("S", s) for s in S.basis.get(n - 1, ())]
             for n in degs}
    cols_by_deg = {}
    F = f.field
    for n in sorted(degs):
        nt = T.dim(n - 1)
        cols = []
        dT = T.d(n)
        for j in range(T.dim(n)):
            cols.append(dict(dT.columns()[j]))
        fm = f.f(n - 1)
        dS = S.d(n - 1)
        for j in range(S.dim(n - 1)):
            col = dict(fm.columns()[j])
            for i, v in dS.columns()[j].items():
                col[nt + i] = col.get(nt + i, 0) - v
            cols.append(col)
        cols_by_deg[n] = SparseMatrix.from_columns(T.dim(n - 1) + S.dim(n - 2), cols, F)
    return ChainComplex(GradedSpace(basis), cols_by_deg, F)


def is_quasi_iso(f: ChainMap, lo: int, hi: int) -> bool:
    """True iff the cone of ``f`` is acyclic in degrees ``lo..hi``."""
    c = cone(f)
    return all(betti(c, n) == 0 for n in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# monoidal structure and duality


def tensor(c: ChainComplex, d: ChainComplex) -> ChainComplex:
    if c.field != d.field:
        raise MalformedInputError(f"tensor of complexes over {c.field!r} and {d.field!r}")
    basis: dict[int, list] = {}
    for i, bi in c.basis.items():
        for j, bj in d.basis.items():
            basis.setdefault(i + j, []).extend((x, y) for x in bi for y in bj)

    def dfun(xy):
        x, y = xy
        return _tensor_d(c, d, x, y, cdeg[x], ddeg[y])

    cdeg = {x: n for n, b in c.basis.items() for x in b}
    ddeg = {y: n for n, b in d.basis.items() for y in b}
    return ChainComplex.from_function(c.field, basis, dfun)


def _tensor_d(c, d, x, y, i, j):
    out = {}
    for x2, v in c.boundary(i, {x: 1}).items():
        out[(x2, y)] = v
    s = -1 if i % 2 else 1
    for y2, v in d.boundary(j, {y: 1}).items():
        out[(x, y2)] = out.get((x, y2), 0) + s * v
    return out


def shift(c: ChainComplex, k: int) -> ChainComplex:
    space = GradedSpace({n + k: b for n, b in c.basis.items()})
    s = -1 if k % 2 else 1
    return ChainComplex(space, {n + k: m.scale(s) for n, m in c.diff.items()}, c.field)


def _dual_label(x):
    if isinstance(x, tuple) and len(x) == 2 and x[0] == "*":
        return x[1]
    return ("*", x)


def dualize(c: ChainComplex) -> ChainComplex:
    """Linear dual, ``(C^*)_{-n} = (C_n)^*`` with the Koszul-signed transpose."""
    space = GradedSpace({-n: [_dual_label(x) for x in b] for n, b in c.basis.items()})
    diffs = {}
    for n, m in c.diff.items():
        # d*: (C*)_{-(n-1)} -> (C*)_{-n} is the signed transpose of d_n
        phi_deg = -(n - 1)
        s = -1 if phi_deg % 2 == 0 else 1
        diffs[-(n - 1)] = m.transpose().scale(s)
    return ChainComplex(space, diffs, c.field)


# ---------------------------------------------------------------------------
# filtrations


class FilteredComplex:
    """Decreasing filtration ``F_r`` (``rmin <= r <= rmax``) by basis subsets.

    ``masks[r]`` is the set of ``(degree, label)`` pairs spanning ``F_r``.
    """

    def __init__(self, total: ChainComplex, masks: Mapping[int, Iterable[tuple[int, Label]]]):
        if not masks:
            raise MalformedInputError("empty filtration")
        self.total = total
        self.masks = {r: frozenset(m) for r, m in masks.items()}
        self.rmin, self.rmax = min(self.masks), max(self.masks)
        if sorted(self.masks) != list(range(self.rmin, self.rmax + 1)):
            raise MalformedInputError("filtration indices must be contiguous")
        everything = {(n, x) for n, b in total.basis.items() for x in b}
        for r in range(self.rmin, self.rmax):
            if not self.masks[r + 1] <= self.masks[r]:
                raise MalformedInputError(f"F_{r + 1} is not contained in F_{r}")
        if not self.masks[self.rmax] <= everything or self.masks[self.rmin] != everything:
            raise MalformedInputError("filtration is not exhaustive on the stored range")

    @classmethod
    def from_weight(cls, total: ChainComplex, weight: Callable[[int, Label], int],
                    rmin: int, rmax: int):
        """``F_r`` spanned by basis elements of weight ``>= r``."""
        w = {(n, x): weight(n, x) for n, b in total.basis.items() for x in b}
        masks = {r: {k for k, v in w.items() if v >= r} for r in range(rmin, rmax + 1)}
        return cls(total, masks)

    def is_subcomplex(self, r: int) -> bool:
        mask = self.masks[r]
        for (n, x) in mask:
            for y in self.total.boundary(n, {x: 1}):
                if (n - 1, y) not in mask:
                    return False
        return True

    def validate(self) -> ValidationReport:
        rep = ValidationReport("filtration by subcomplexes")
        for r in range(self.rmin, self.rmax + 1):
            mask = self.masks[r]
            for (n, x) in sorted(mask, key=lambda t: (t[0], label_name(t[1]))):
                bad = [y for y in self.total.boundary(n, {x: 1}) if (n - 1, y) not in mask]
                if bad:
                    rep.fail(index=r, degree=n, basis=label_name(x))
                    break
        return rep

    def piece(self, r: int) -> ChainComplex:
        return _restrict(self.total, self.masks.get(r, frozenset()), frozenset())


def _restrict(c: ChainComplex, keep: frozenset, drop: frozenset) -> ChainComplex:
    """Subquotient spanned by ``keep - drop`` with the projected differential."""
    basis = {n: [x for x in b if (n, x) in keep and (n, x) not in drop]
             for n, b in c.basis.items()}
    members = {(n, x) for n, b in basis.items() for x in b}

    def dfun(x, n):
        return {y: v for y, v in c.boundary(n, {x: 1}).items() if (n - 1, y) in members}

    degree = {x: n for n, b in basis.items() for x in b}
    lo = min(c.basis) if c.basis else 0
    return ChainComplex.from_function(c.field, basis, lambda x: dfun(x, degree[x]), lo=lo)


def associated_graded(f: FilteredComplex) -> list[ChainComplex]:
    """Layers ``F_r / F_{r+1}`` for ``r = rmin .. rmax`` (``F_{rmax+1} = 0``)."""
    rep = f.validate()
    if not rep:
        raise MalformedInputError(f"filtration is not by subcomplexes: {rep.failures[0]}")
    out = []
    for r in range(f.rmin, f.rmax + 1):
        nxt = f.masks.get(r + 1, frozenset())
        out.append(_restrict(f.total, f.masks[r], nxt))
    return out


def completion_check(f: FilteredComplex) -> bool:
    """True iff the filtration reaches zero inside the stored range."""
    return not f.masks[f.rmax]
