"""Independent brute-force oracles for the test suite.

Nothing here calls into the package's linear algebra, chain complexes or
constructions; inputs are plain lists and structure constants.
"""

from fractions import Fraction
from itertools import combinations
import random


def rank(rows, p=None):
    """Rank of a dense matrix over Q (``p=None``) or GF(p) by row reduction."""
    m = [[(Fraction(x) if p is None else int(x) % p) for x in r] for r in rows]
    if not m or not m[0]:
        return 0
    nr, nc = len(m), len(m[0])
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if p is None else pow(m[r][c], -1, p)
        m[r] = [x * inv if p is None else x * inv % p for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b if p is None else (a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
        if r == nr:
            break
    return r


def betti(dims, mats, p=None):
    """``mats[n]`` is the dense matrix of ``d_n: C_n -> C_{n-1}``."""
    rk = {n: rank(m, p) for n, m in mats.items()}
    return {n: dims[n] - rk.get(n, 0) - rk.get(n + 1, 0) for n in dims}


def matmul(a, b, p=None):
    out = [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
           for i in range(len(a))]
    return [[x % p for x in r] for r in out] if p else out


def random_complex(rng: random.Random, degrees, max_dim=20, p=None):
    """Random complex with prescribed homology ranks, hidden by random
    changes of basis.  Returns ``(dims, mats, betti)``."""
    # split each degree into cycles-not-boundaries, boundaries and non-cycles
    lo, hi = degrees
    h = {n: rng.randint(0, 3) for n in range(lo, hi + 1)}
    e = {n: rng.randint(0, 4) for n in range(lo, hi + 1)}  # rank of d_n, n > lo
    e[lo] = 0
    dims = {}
    for n in range(lo, hi + 1):
        dims[n] = h[n] + e[n] + e.get(n + 1, 0)
        if dims[n] > max_dim:
            e[n] = 0
            dims[n] = h[n] + e.get(n + 1, 0)
    # canonical d_n maps the last e[n] basis vectors of C_n onto the first
    # e[n] vectors of C_{n-1} (which are boundaries)
    mats = {}
    for n in range(lo + 1, hi + 1):
        m = [[0] * dims[n] for _ in range(dims[n - 1])]
        for k in range(e[n]):
            m[k][dims[n] - e[n] + k] = 1
        mats[n] = m
    # conjugate by random invertible (unitriangular times permutation) matrices
    gs, ginv = {}, {}
    for n in range(lo, hi + 1):
        gs[n], ginv[n] = _random_invertible(rng, dims[n], p)
    out = {}
    for n, m in mats.items():
        if dims[n] and dims[n - 1]:
            out[n] = matmul(matmul(gs[n - 1], m, p), ginv[n], p)
    return dims, out, dict(h)


def _random_invertible(rng, n, p):
    if n == 0:
        return [], []
    lower = [[(1 if i == j else (rng.randint(-2, 2) if i > j else 0)) for j in range(n)]
             for i in range(n)]
    upper = [[(1 if i == j else (rng.randint(-2, 2) if i < j else 0)) for j in range(n)]
             for i in range(n)]
    g = matmul(lower, upper)
    # inverse by Gauss-Jordan over Q, then reduce mod p when needed
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(g)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        f = aug[c][c]
        aug[c] = [x / f for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                k = aug[i][c]
                aug[i] = [a - k * b for a, b in zip(aug[i], aug[c])]
    inv = [[int(x) for x in row[n:]] for row in aug]
    if p:
        g = [[x % p for x in r] for r in g]
        inv = [[x % p for x in r] for r in inv]
    return g, inv


# ---------------------------------------------------------------------------
# Chevalley--Eilenberg complex of an ordinary Lie algebra, classical formula


def ce_dense(dim, bracket):
    """``bracket[(i, j)] = {k: c}`` on basis indices.  Returns dims, dense
    matrices indexed by exterior degree, and the basis (sorted index tuples)."""
    basis = {k: list(combinations(range(dim), k)) for k in range(dim + 1)}
    index = {k: {m: i for i, m in enumerate(b)} for k, b in basis.items()}
    mats = {}
    for k in range(2, dim + 1):
        m = [[Fraction(0)] * len(basis[k]) for _ in basis[k - 1]]
        for col, mono in enumerate(basis[k]):
            for a, b in combinations(range(k), 2):
                rest = [x for t, x in enumerate(mono) if t not in (a, b)]
                # positions a, b counted from 1 in the classical sign
                sign = (-1) ** (a + b + 2)
                for z, c in bracket.get((mono[a], mono[b]), {}).items():
                    if z in rest:
                        continue
                    # z ^ rest, sorted: sign of moving z past smaller letters
                    pos = sum(1 for x in rest if x < z)
                    new = tuple(sorted(rest + [z]))
                    m[index[k - 1][new]][col] += sign * (-1) ** pos * Fraction(c)
        mats[k] = m
    dims = {k: len(b) for k, b in basis.items()}
    return dims, mats, basis


# ---------------------------------------------------------------------------
# reduced bar construction B(k, A, k) of a finite algebra with zero differential


def bar_dense(ideal, degree, mul, max_degree):
    """Betti numbers of ``B(k, A, k)`` in degrees ``0..max_degree``.

    ``ideal`` lists augmentation-ideal basis labels of positive degree,
    ``mul(x, y)`` returns ``{z: c}`` within the ideal.  Words ``[a1|...|an]``
    have degree ``sum(|ai| + 1)`` and
    ``d[a1|...|an] = sum_i (-1)^{e_i} [...|ai ai+1|...]`` with
    ``e_i = sum_{j <= i} (|aj| + 1)``.
    """
    words = {0: [()]}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            dw = sum(degree[a] + 1 for a in w)
            for a in ideal:
                n = dw + degree[a] + 1
                if n <= max_degree + 1:
                    words.setdefault(n, []).append(w + (a,))
                    nxt.append(w + (a,))
        frontier = nxt
    index = {n: {w: i for i, w in enumerate(ws)} for n, ws in words.items()}
    mats = {}
    for n, ws in words.items():
        if n - 1 not in words:
            continue
        m = [[Fraction(0)] * len(ws) for _ in words[n - 1]]
        for col, w in enumerate(ws):
            e = 0
            for i in range(len(w) - 1):
                e += degree[w[i]] + 1
                for z, c in mul(w[i], w[i + 1]).items():
                    new = w[:i] + (z,) + w[i + 2:]
                    m[index[n - 1][new]][col] += (-1) ** e * Fraction(c)
        mats[n] = m
    for n in mats:
        if n - 1 in mats:
            prod = matmul(mats[n - 1], mats[n])
            assert all(x == 0 for r in prod for x in r), "oracle d^2 != 0"
    dims = {n: len(ws) for n, ws in words.items()}
    b = betti(dims, mats)
    return {n: b.get(n, 0) for n in range(max_degree + 1)}


def convolve(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


# ---------------------------------------------------------------------------
# normalised cyclic bar (Hochschild) complex of a finite algebra with d = 0


def hochschild_dense(basis, ideal, degree, mul, max_degree):
    """Betti numbers of ``A (x)_{A^e} A`` in degrees ``0..max_degree``.

    Elements ``a0[a1|...|an]`` with ``a0`` in ``basis`` and ``ai`` in
    ``ideal`` have degree ``|a0| + sum(|ai| + 1)``.  With
    ``e_i = |a0| + sum_{j <= i}(|aj| + 1)`` the differential is
    ``(-1)^{|a0|} a0 a1[a2|...] + sum_i (-1)^{e_i} a0[...|ai ai+1|...]
    - (-1)^{(|an|+1) e_{n-1}} an a0[a1|...|an-1]``.
    """
    cells = {}
    for a0 in basis:
        frontier = [()]
        while frontier:
            nxt = []
            for w in frontier:
                n = degree[a0] + sum(degree[a] + 1 for a in w)
                if n > max_degree + 1:
                    continue
                cells.setdefault(n, []).append((a0, w))
                nxt.extend(w + (a,) for a in ideal)
            frontier = nxt
    index = {n: {c: i for i, c in enumerate(cs)} for n, cs in cells.items()}

    def add(m, n, cell, col, c):
        if cell[1] and any(a not in ideal for a in cell[1]):
            return
        m[index[n][cell]][col] += c

    mats = {}
    for n, cs in cells.items():
        if n - 1 not in cells:
            continue
        m = [[Fraction(0)] * len(cs) for _ in cells[n - 1]]
        for col, (a0, w) in enumerate(cs):
            if not w:
                continue
            for z, c in mul(a0, w[0]).items():
                add(m, n - 1, (z, w[1:]), col, (-1) ** degree[a0] * Fraction(c))
            e = degree[a0]
            for i in range(len(w) - 1):
                e += degree[w[i]] + 1
                for z, c in mul(w[i], w[i + 1]).items():
                    if z in ideal:
                        add(m, n - 1, (a0, w[:i] + (z,) + w[i + 2:]), col,
                            (-1) ** e * Fraction(c))
            last = w[-1]
            e = degree[a0] + sum(degree[a] + 1 for a in w[:-1])
            s = -(-1) ** ((degree[last] + 1) * e)
            for z, c in mul(last, a0).items():
                add(m, n - 1, (z, w[:-1]), col, s * Fraction(c))
        mats[n] = m
    for n in mats:
        if n - 1 in mats:
            prod = matmul(mats[n - 1], mats[n])
            assert all(x == 0 for r in prod for x in r), "oracle d^2 != 0"
    dims = {n: len(cs) for n, cs in cells.items()}
    b = betti(dims, mats)
    return {n: b.get(n, 0) for n in range(max_degree + 1)}
