"""Small dense matrices over the quadratic field K, as tuples of rows."""
from __future__ import annotations

from fractions import Fraction

from .orders import KNumber, Order


def kmat(rows) -> tuple[tuple[KNumber, ...], ...]:
    return tuple(tuple(row) for row in rows)


def kmat_identity(order: Order, n: int):
    return kmat([[order.k(int(i == j)) for j in range(n)] for i in range(n)])


def kmat_mul(a, b):
    inner, cols = len(b), len(b[0])
    return kmat([[sum((a[i][k] * b[k][j] for k in range(inner)),
                      start=a[i][0].order.k(0)) for j in range(cols)]
                 for i in range(len(a))])


def kvec_mat(v, a):
    cols = len(a[0])
    zero = v[0].order.k(0)
    return tuple(sum((v[k] * a[k][j] for k in range(len(v))), start=zero)
                 for j in range(cols))


def kmat_conj_transpose(a):
    return kmat([[a[j][i].conj() for j in range(len(a))]
                 for i in range(len(a[0]))])


def kmat_conj(a):
    return kmat([[x.conj() for x in row] for row in a])


def kmat_det(a) -> KNumber:
    n = len(a)
    m = [list(row) for row in a]
    order = a[0][0].order
    det = order.k(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return order.k(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def kmat_inverse(a):
    n = len(a)
    order = a[0][0].order
    m = [list(row) + [order.k(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular K-matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return kmat([row[n:] for row in m])


def is_hermitian(g) -> bool:
    n = len(g)
    return all(g[i][j] == g[j][i].conj() for i in range(n) for j in range(i, n))


def leading_minors(g) -> list[Fraction]:
    """Leading principal minors of a hermitian matrix (rationals)."""
    out = []
    for k in range(1, len(g) + 1):
        d = kmat_det(kmat([row[:k] for row in g[:k]]))
        assert d.is_rational()
        out.append(d.a)
    return out


def is_positive_definite(g) -> bool:
    return is_hermitian(g) and all(m > 0 for m in leading_minors(g))
