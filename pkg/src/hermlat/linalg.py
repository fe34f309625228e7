"""Exact integer and rational linear algebra on small matrices.

Plain lists of lists with int or Fraction entries throughout.  Matrices
here never exceed a handful of rows (rank <= 6 plus generator stacks),
so the simple cubic algorithms are the right tool; nothing in this
module may touch floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt, lcm


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    assert len(a[0]) == inner
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(rows)]


def mat_vec(a, v):
    return [sum(row[k] * v[k] for k in range(len(v))) for row in a]


def vec_mat(v, a):
    cols = len(a[0])
    return [sum(v[k] * a[k][j] for k in range(len(v))) for j in range(cols)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def det_fraction(a) -> Fraction:
    """Determinant by fraction-preserving Gaussian elimination."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def det_int(a) -> int:
    d = det_fraction(a)
    assert d.denominator == 1
    return d.numerator


def mat_inverse_fraction(a):
    """Inverse of a square matrix, entries returned as Fractions."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def hnf_with_transform(rows: list[list[int]]):
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular, U * rows == H, pivots positive,
    entries above each pivot reduced into [0, pivot).  Zero rows of H
    sink to the bottom.
    """
    h = [list(map(int, r)) for r in rows]
    m = len(h)
    ncols = len(h[0]) if m else 0
    u = identity_matrix(m)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = [i for i in range(r, m) if h[i][c] != 0]
        if not nz:
            continue
        while True:
            nz = [i for i in range(r, m) if h[i][c] != 0]
            if len(nz) == 1:
                break
            nz.sort(key=lambda i: abs(h[i][c]))
            p = nz[0]
            for i in nz[1:]:
                q = h[i][c] // h[p][c]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[p])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[p])]
        p = nz[0]
        if p != r:
            h[r], h[p] = h[p], h[r]
            u[r], u[p] = u[p], u[r]
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return h, u


def hnf(rows):
    h, _ = hnf_with_transform(rows)
    return [r for r in h if any(r)]


def solve_left_int(a: list[list[int]], target: list[int]):
    """Integer solution x of x * a == target, or None."""
    h, u = hnf_with_transform(a)
    ncols = len(target)
    t = list(map(int, target))
    x = [0] * len(a)
    coeff = [0] * len(h)
    for i, row in enumerate(h):
        piv = next((j for j in range(ncols) if row[j] != 0), None)
        if piv is None:
            break
        q, rem = divmod(t[piv], row[piv])
        if rem:
            # pivot does not divide: retry after full reduction below
            return None
        if q:
            coeff[i] = q
            t = [tv - q * rv for tv, rv in zip(t, row)]
    if any(t):
        return None
    for i, ci in enumerate(coeff):
        if ci:
            x = [xv + ci * uv for xv, uv in zip(x, u[i])]
    return x


def snf_with_transform(a: list[list[int]]):
    """Smith normal form: returns (D, U, V) with U*a*V == D diagonal."""
    d = [list(map(int, row)) for row in a]
    m, n = len(d), len(d[0])
    u = identity_matrix(m)
    v = identity_matrix(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):  # row i -= q * row j
        d[i] = [x - q * y for x, y in zip(d[i], d[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def add_col(i, j, q):  # col i -= q * col j
        for row in d:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(d[i][j]), i, j) for i in range(t, m)
                       for j in range(t, n) if d[i][j] != 0]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            done = True
            for i in range(t + 1, m):
                q = d[i][t] // d[t][t]
                if q:
                    add_row(i, t, q)
                if d[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = d[t][j] // d[t][t]
                if q:
                    add_col(j, t, q)
                if d[t][j]:
                    done = False
            if done:
                # divisibility condition d[t][t] | d[i][j]
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if d[i][j] % d[t][t] != 0), None)
                if bad is None:
                    break
                add_row(bad[0], t, -1)
        if t < min(m, n) and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return d, u, v


def floor_sqrt_fraction(x: Fraction) -> int:
    """floor(sqrt(x)) for a nonnegative Fraction, exactly."""
    assert x >= 0
    return isqrt(x.numerator * x.denominator) // x.denominator


# ---------------------------------------------------------------------------
# Z-modules inside Q^n


class ZModule:
    """A finitely generated Z-module in Q^n, kept in canonical HNF.

    Stored as an integer row-HNF together with one positive denominator,
    so equality of modules is equality of representations.
    """

    __slots__ = ("den", "rows", "ncols")

    def __init__(self, den: int, rows: list[list[int]], ncols: int):
        self.den = den
        self.rows = rows
        self.ncols = ncols

    @classmethod
    def from_rows(cls, rows) -> "ZModule":
        assert rows
        ncols = len(rows[0])
        den = 1
        for row in rows:
            for x in row:
                den = lcm(den, Fraction(x).denominator)
        int_rows = [[int(Fraction(x) * den) for x in row] for row in rows]
        h = hnf(int_rows)
        g = 0
        for row in h:
            for x in row:
                g = gcd(g, x)
        g = gcd(g, den)
        if g > 1:
            den //= g
            h = [[x // g for x in row] for row in h]
        return cls(den, h, ncols)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def key(self):
        return (self.den, tuple(tuple(r) for r in self.rows))

    def __eq__(self, other):
        return isinstance(other, ZModule) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def _solve(self, vec):
        """Rational coefficients expressing vec over self.rows, or None."""
        t = [Fraction(x) * self.den for x in vec]
        coeffs = []
        for row in self.rows:
            piv = next(j for j in range(self.ncols) if row[j] != 0)
            c = t[piv] / row[piv]
            coeffs.append(c)
            t = [tv - c * rv for tv, rv in zip(t, row)]
        if any(t):
            return None
        return coeffs

    def contains(self, vec) -> bool:
        coeffs = self._solve(vec)
        return coeffs is not None and all(c.denominator == 1 for c in coeffs)

    def contains_module(self, other: "ZModule") -> bool:
        return all(self.contains([Fraction(x, other.den) for x in row])
                   for row in other.rows)

    def index_in(self, other: "ZModule") -> int:
        """[other : self] for equal-rank self <= other."""
        assert self.rank == other.rank
        mat = []
        for row in self.rows:
            coeffs = other._solve([Fraction(x, self.den) for x in row])
            assert coeffs is not None and all(c.denominator == 1 for c in coeffs), \
                "index_in requires containment"
            mat.append([int(c) for c in coeffs])
        d = det_int(mat)
        assert d != 0
        return abs(d)


# ---------------------------------------------------------------------------
# Lattice reduction and short vector enumeration (exact rational)


def lll_reduce_gram(gram, delta=Fraction(3, 4)):
    """Exact LLL on a positive definite rational Gram matrix.

    Returns (reduced_gram, U) with U unimodular and
    reduced = U * gram * U^T.  Works on the Gram matrix only.
    """
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]
    u = identity_matrix(n)

    def gso():
        # mu and squared norms of the Gram-Schmidt vectors, from g alone
        mu = [[Fraction(0)] * n for _ in range(n)]
        b2 = [Fraction(0)] * n
        for i in range(n):
            b2[i] = g[i][i]
            for j in range(i):
                mu[i][j] = (g[i][j] - sum(mu[i][k] * mu[j][k] * b2[k]
                                          for k in range(j))) / b2[j]
                b2[i] -= mu[i][j] ** 2 * b2[j]
        return mu, b2

    def row_op(i, j, q):  # basis_i -= q * basis_j, updates g symmetrically
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]
        for k in range(n):
            g[i][k] -= q * g[j][k]
        for k in range(n):
            g[k][i] -= q * g[k][j]

    def swap(i, j):
        u[i], u[j] = u[j], u[i]
        g[i], g[j] = g[j], g[i]
        for row in g:
            row[i], row[j] = row[j], row[i]

    k = 1
    while k < n:
        mu, b2 = gso()
        for j in range(k - 1, -1, -1):
            q = (mu[k][j] + Fraction(1, 2)).__floor__()
            if q:
                row_op(k, j, q)
                mu, b2 = gso()
        if b2[k] >= (delta - mu[k][k - 1] ** 2) * b2[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            k = max(k - 1, 1)
    return g, u


def _cholesky(gram):
    """q[i][i] = d_i, q[i][j] (j>i) = mu coefficients, exact Fractions."""
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        assert q[i][i] > 0, "form is not positive definite"
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors_gram(gram, bound):
    """All nonzero v with v*gram*v^T <= bound, one of each +-pair.

    Fincke-Pohst with an exact rational Cholesky, after an LLL step to
    keep the enumeration tree small.  Yields (vector, norm) pairs; the
    representative of each pair has positive first nonzero coordinate.
    """
    bound = Fraction(bound)
    if bound <= 0:
        return
    n = len(gram)
    red, u = lll_reduce_gram(gram)
    q = _cholesky(red)
    x = [0] * n
    # t[i]: remaining bound at level i;  c[i]: center sum_{j>i} mu_ij x_j
    t = [Fraction(0)] * (n + 1)
    c = [Fraction(0)] * n
    t[n - 1] = bound

    def center(i):
        return sum(q[i][j] * x[j] for j in range(i + 1, n))

    i = n - 1
    c[i] = Fraction(0)
    lo = [0] * n
    hi = [0] * n
    rad = floor_sqrt_fraction(t[i] / q[i][i])
    # radius bound is exact: |x_i + c_i| <= sqrt(t_i / q_ii)
    lo[i] = -rad
    hi[i] = rad
    x[i] = lo[i]
    while True:
        if x[i] > hi[i]:
            i += 1
            if i == n:
                return
            x[i] += 1
            continue
        val = q[i][i] * (x[i] + c[i]) ** 2
        if val > t[i]:
            x[i] += 1
            continue
        if i == 0:
            if any(x):
                # one representative per +-pair: highest nonzero coordinate
                # of the enumeration variables must be positive
                k = next(j for j in range(n - 1, -1, -1) if x[j])
                if x[k] > 0:
                    v = vec_mat(x, u)
                    k = next(j for j in range(n) if v[j])
                    if v[k] < 0:
                        v = [-a for a in v]
                    yield v, bound - t[0] + val
            x[i] += 1
            continue
        t[i - 1] = t[i] - val
        i -= 1
        c[i] = center(i)
        # exact integer window: ceil(-c - r) .. floor(-c + r), r = sqrt(t/q)
        ti, qi = t[i], q[i][i]
        r2 = ti / qi
        s = floor_sqrt_fraction(r2)
        lo_f = -c[i] - s - 1
        hi_f = -c[i] + s + 1
        lo[i] = lo_f.__ceil__()
        hi[i] = hi_f.__floor__()
        x[i] = lo[i]


def minimum_norm_gram(gram):
    """Smallest nonzero value of the quadratic form (positive definite)."""
    red, _ = lll_reduce_gram(gram)
    best = min(red[i][i] for i in range(len(red)))
    for _, norm in short_vectors_gram(gram, best):
        if norm < best:
            best = norm
    return best
