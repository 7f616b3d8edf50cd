"""Exact sparse linear algebra over Q and GF(p).

Matrices are stored column-wise as dictionaries ``row -> nonzero scalar``.
Elimination over Q picks pivots by a Markowitz-style cost to keep fill-in
and coefficient growth down; over GF(p) it uses plain column-order pivoting.
The dense routines at the bottom of the module are the brute-force oracle
used by the test-suite and are deliberately independent of the sparse path.
"""

from __future__ import annotations

import heapq

from typing import Mapping, Sequence

from .errors import MalformedInputError
from .field import Field, QQ


class SparseMatrix:
    """An immutable ``nrows x ncols`` matrix over an exact field."""

    __slots__ = ("nrows", "ncols", "field", "_cols")

    def __init__(self, nrows: int, ncols: int, entries=(), field: Field = QQ):
        if nrows < 0 or ncols < 0:
            raise MalformedInputError("negative matrix dimension")
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        cols: list[dict] = [dict() for _ in range(ncols)]
        items = entries.items() if isinstance(entries, Mapping) else entries
        for item in items:
            if isinstance(entries, Mapping):
                (r, c), v = item
            else:
                r, c, v = item
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise MalformedInputError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
            if r in cols[c]:
                raise MalformedInputError(f"duplicate entry ({r}, {c})")
            v = field(v)
            if v:
                cols[c][r] = v
        self._cols = tuple(cols)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, object]], field: Field):
        """Build from column dictionaries whose values already lie in ``field``."""
        m = cls.__new__(cls)
        m.nrows = nrows
        m.ncols = len(columns)
        m.field = field
        m._cols = tuple({r: v for r, v in col.items() if v} for col in columns)
        return m

    @classmethod
    def zero(cls, nrows: int, ncols: int, field: Field = QQ):
        return cls.from_columns(nrows, [{} for _ in range(ncols)], field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ):
        one = field.one
        return cls.from_columns(n, [{i: one} for i in range(n)], field)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], field: Field = QQ):
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        return cls(nrows, ncols, [(i, j, x) for i, row in enumerate(rows)
                                  for j, x in enumerate(row) if x], field)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> list[tuple[int, int, object]]:
        """Sorted ``(row, col, value)`` triples of the nonzero entries."""
        return sorted((r, c, v) for c, col in enumerate(self._cols) for r, v in col.items())

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def column(self, j: int) -> dict:
        return dict(self._cols[j])

    def columns(self):
        return self._cols

    def rows(self) -> list[dict]:
        out: list[dict] = [dict() for _ in range(self.nrows)]
        for c, col in enumerate(self._cols):
            for r, v in col.items():
                out[r][c] = v
        return out

    def __getitem__(self, rc):
        r, c = rc
        return self._cols[c].get(r, self.field.zero)

    def to_dense(self) -> list[list]:
        z = self.field.zero
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for c, col in enumerate(self._cols):
            for r, v in col.items():
                out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix.from_columns(self.ncols, self.rows(), self.field)

    def scale(self, s) -> "SparseMatrix":
        s = self.field(s)
        return SparseMatrix.from_columns(
            self.nrows, [{r: v * s for r, v in col.items()} for col in self._cols], self.field)

    def apply(self, vec: Mapping[int, object]) -> dict:
        """Multiply by a sparse column vector given as ``index -> value``."""
        out: dict = {}
        for j, x in vec.items():
            if not x:
                continue
            for r, v in self._cols[j].items():
                out[r] = out.get(r, 0) + v * x
        return {r: v for r, v in out.items() if v}

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        _check_same_field(self, other)
        if self.ncols != other.nrows:
            raise MalformedInputError(f"cannot multiply {self.shape} by {other.shape}")
        return SparseMatrix.from_columns(
            self.nrows, [self.apply(col) for col in other._cols], self.field)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        _check_same_field(self, other)
        if self.shape != other.shape:
            raise MalformedInputError(f"cannot add {self.shape} and {other.shape}")
        cols = []
        for a, b in zip(self._cols, other._cols):
            c = dict(a)
            for r, v in b.items():
                c[r] = c.get(r, 0) + v
            cols.append(c)
        return SparseMatrix.from_columns(self.nrows, cols, self.field)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return all(not c for c in self._cols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self._cols == other._cols)

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz}, {self.field!r})"


def _check_same_field(a: SparseMatrix, b: SparseMatrix):
    if a.field != b.field:
        raise MalformedInputError(f"mixed fields {a.field!r} and {b.field!r}")


def _check_entries(m: SparseMatrix):
    for col in m.columns():
        for v in col.values():
            if not m.field.contains(v):
                raise MalformedInputError(f"entry {v!r} does not lie in {m.field!r}")


# ---------------------------------------------------------------------------
# sparse elimination


def _eliminate(rows: list[dict], field: Field, pivot_limit: int, jordan: bool):
    """Row-reduce ``rows`` in place; return ``[(pivot_col, row_index)]``.

    Only columns ``< pivot_limit`` are eligible as pivots.  Pivot rows are
    normalised to a leading 1.  With ``jordan`` the pivot columns are cleared
    from every other row (reduced echelon form).
    """
    col_rows: dict[int, set] = {}
    for i, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, set()).add(i)
    # number of eligible entries per row, kept current during elimination
    count = {}
    for i, row in enumerate(rows):
        n = sum(1 for c in row if c < pivot_limit)
        if n:
            count[i] = n
    active = set(count)
    pivots = []
    markowitz = field.is_rational
    heap = [(n, i) for i, n in count.items()]
    heapq.heapify(heap)
    # column-order queue for the prime-field strategy
    order = sorted(c for c in col_rows if c < pivot_limit)
    next_col = 0
    while active:
        if markowitz:
            pr = None
            while heap:
                n, i = heapq.heappop(heap)
                if i in active and count[i] == n:
                    pr = i
                    break
            if pr is None:
                break
            pc = min((c for c in rows[pr] if c < pivot_limit),
                     key=lambda c: (len(col_rows[c]), c))
        else:
            pr = pc = None
            while next_col < len(order):
                c = order[next_col]
                next_col += 1
                cand = [i for i in col_rows.get(c, ()) if i in active]
                if cand:
                    pr, pc = min(cand), c
                    break
            if pr is None:
                break
        prow = rows[pr]
        inv = field.one / prow[pc]
        if inv != 1:
            for c in prow:
                prow[c] = prow[c] * inv
        active.discard(pr)
        pivots.append((pc, pr))
        targets = [i for i in col_rows[pc] if i != pr and (jordan or i in active)]
        for i in targets:
            row = rows[i]
            f = row[pc]
            n = count.get(i, 0)
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    if c not in row:
                        col_rows.setdefault(c, set()).add(i)
                        if c < pivot_limit:
                            n += 1
                    row[c] = nv
                elif c in row:
                    del row[c]
                    col_rows[c].discard(i)
                    if c < pivot_limit:
                        n -= 1
            count[i] = n
            if i in active:
                if n == 0:
                    active.discard(i)
                elif markowitz:
                    heapq.heappush(heap, (n, i))
    return pivots


def rank(m: SparseMatrix) -> int:
    """Rank of ``m`` over its field."""
    _check_entries(m)
    if m.nrows == 0 or m.ncols == 0:
        return 0
    # eliminate along the shorter dimension
    rows = m.rows() if m.nrows <= m.ncols else [dict(c) for c in m.columns()]
    limit = m.ncols if m.nrows <= m.ncols else m.nrows
    return len(_eliminate(rows, m.field, limit, jordan=False))


def kernel_basis(m: SparseMatrix) -> SparseMatrix:
    """Columns spanning the null space of ``m`` (``ncols x nullity``)."""
    _check_entries(m)
    rows = m.rows()
    pivots = _eliminate(rows, m.field, m.ncols, jordan=True)
    pivot_cols = {c for c, _ in pivots}
    one = m.field.one
    basis = []
    for f in range(m.ncols):
        if f in pivot_cols:
            continue
        vec = {f: one}
        for c, r in pivots:
            v = rows[r].get(f)
            if v:
                vec[c] = -v
        basis.append(vec)
    return SparseMatrix.from_columns(m.ncols, basis, m.field)


def solve(m: SparseMatrix, b: Sequence) -> list | None:
    """Return some ``x`` with ``m x = b``, or ``None`` when inconsistent."""
    _check_entries(m)
    if len(b) != m.nrows:
        raise MalformedInputError(f"right-hand side has length {len(b)}, expected {m.nrows}")
    field = m.field
    rows = m.rows()
    bcol = m.ncols
    for i, x in enumerate(b):
        x = field(x)
        if x:
            rows[i][bcol] = x
    pivots = _eliminate(rows, field, m.ncols, jordan=True)
    used = {r for _, r in pivots}
    for i, row in enumerate(rows):
        if i not in used and row.get(bcol):
            return None
    x = [field.zero] * m.ncols
    for c, r in pivots:
        x[c] = field(rows[r].get(bcol, 0))
    return x


class Echelon:
    """Incrementally maintained echelon basis of a subspace of sparse vectors.

    Each stored row has its pivot at its smallest index, which makes
    reduction of a new vector terminate after one left-to-right sweep.
    """

    def __init__(self, field: Field):
        self.field = field
        self.rows: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping[int, object]) -> dict:
        v = {k: x for k, x in vec.items() if x}
        while True:
            hits = [c for c in v if c in self.rows]
            if not hits:
                return v
            c = min(hits)
            f = v[c]
            for k, x in self.rows[c].items():
                nv = v.get(k, 0) - f * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)

    def add(self, vec: Mapping[int, object]) -> bool:
        """Insert ``vec``; return False when it already lies in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        inv = self.field.one / v[c] if not self.field.is_rational else 1 / v[c]
        self.rows[c] = {k: x * inv for k, x in v.items()}
        return True


# ---------------------------------------------------------------------------
# dense brute-force oracle


def dense_rank(rows: Sequence[Sequence], field: Field = QQ) -> int:
    """Textbook Gaussian elimination on a dense list-of-lists matrix."""
    a = [[field(x) for x in row] for row in rows]
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nr):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nr:
            break
    return r


def dense_betti(dims: Mapping[int, int], diffs: Mapping[int, Sequence[Sequence]],
                field: Field = QQ) -> dict[int, int]:
    """Betti numbers from dense differentials ``diffs[n]: C_n -> C_{n-1}``."""
    ranks = {n: dense_rank(m, field) if len(m) and len(m[0]) else 0 for n, m in diffs.items()}
    return {n: dims[n] - ranks.get(n, 0) - ranks.get(n + 1, 0) for n in dims}

