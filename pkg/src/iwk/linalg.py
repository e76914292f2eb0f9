"""Determinants over arbitrary commutative rings."""

from functools import reduce
from operator import add


def _dot(xs, ys, zero):
    return reduce(add, (x * y for x, y in zip(xs, ys)), zero)


def det_division_free(A, one):
    """Berkowitz determinant: only ring operations, no division.

    Works for any elements supporting +, -, * (power series, polynomials,
    p-adic scalars).  ``one`` is the ring's unit element.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return one
    zero = one - one
    # coefficients of the characteristic polynomial of the leading block
    C = [one, -A[0][0]]
    for r in range(1, n):
        R = [A[i][r] for i in range(r)]
        S = A[r][:r]
        col = [one, -A[r][r]]
        vec = R
        for _ in range(r):
            col.append(-_dot(S, vec, zero))
            vec = [_dot(A[i][:r], vec, zero) for i in range(r)]
        C = [reduce(add, (col[i - j] * C[j] for j in range(len(C)) if 0 <= i - j < len(col)), zero)
             for i in range(r + 2)]
    return C[n] if n % 2 == 0 else -C[n]


def block_matrix(blocks):
    """Flatten a matrix of equally sized square blocks."""
    out = []
    for brow in blocks:
        k = len(brow[0])
        for i in range(k):
            out.append([x for b in brow for x in b[i]])
    return out
