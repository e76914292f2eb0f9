"""Polynomials and rational functions over F_p, and exact linear algebra over F_p(T)."""

from __future__ import annotations

from functools import reduce

from .errors import ValidationError


class FpPoly:
    """Dense polynomial over F_p, lowest coefficient first, no trailing zeros."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs=()):
        cs = [int(c) % p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, key, value):
        raise AttributeError("FpPoly is immutable")

    @classmethod
    def const(cls, p, c):
        return cls(p, (c,))

    @classmethod
    def gen(cls, p):
        return cls(p, (0, 1))

    def _lift(self, other) -> "FpPoly":
        if isinstance(other, FpPoly):
            if other.p != self.p:
                raise ValueError("polynomials over different primes")
            return other
        return FpPoly(self.p, (other,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (FpPoly, int)):
            o = self._lift(other)
            return self.p == o.p and self.coeffs == o.coeffs
        if isinstance(other, FpRational):
            return other == self
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else (f"{c if c != 1 else ''}T" + (f"^{i}" if i > 1 else "")))
        return " + ".join(terms)

    def __add__(self, other):
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        return FpPoly(self.p, [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return FpPoly(self.p, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, FpRational):
            return other * self
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return FpPoly(self.p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return FpPoly(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result, base = FpPoly(self.p, (1,)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.coeffs)
        db = o.degree
        inv = pow(o.coeffs[-1], -1, p)
        q = [0] * max(0, len(r) - db)
        while len(r) - 1 >= db and r:
            k = len(r) - 1 - db
            c = r[-1] * inv % p
            q[k] = c
            for i, bi in enumerate(o.coeffs):
                r[k + i] = (r[k + i] - c * bi) % p
            while r and r[-1] == 0:
                r.pop()
        return FpPoly(p, q), FpPoly(p, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "FpPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def __truediv__(self, other):
        return FpRational(self, self._lift(other) if not isinstance(other, FpRational) else other)

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def monic(self) -> "FpPoly":
        if not self.coeffs:
            return self
        inv = pow(self.lead(), -1, self.p)
        return FpPoly(self.p, [c * inv for c in self.coeffs])

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc


def poly_gcd(a: FpPoly, b: FpPoly) -> FpPoly:
    while b:
        a, b = b, a % b
    return a.monic()


class FpRational:
    """Element of F_p(T) in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, FpPoly):
            raise TypeError("numerator must be an FpPoly")
        p = num.p
        den = FpPoly(p, (1,)) if den is None else (den if isinstance(den, FpPoly) else FpPoly(p, (den,)))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        inv = pow(den.lead(), -1, p)
        object.__setattr__(self, "num", num * inv)
        object.__setattr__(self, "den", den * inv)

    def __setattr__(self, key, value):
        raise AttributeError("FpRational is immutable")

    @property
    def p(self):
        return self.num.p

    def _lift(self, other) -> "FpRational":
        if isinstance(other, FpRational):
            return other
        if isinstance(other, FpPoly):
            return FpRational(other)
        return FpRational(FpPoly(self.p, (other,)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (FpRational, FpPoly, int)):
            o = self._lift(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.degree == 0:
            return f"({self.num})"
        return f"({self.num})/({self.den})"

    def __add__(self, other):
        o = self._lift(other)
        return FpRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FpRational(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return FpRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "FpRational":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return FpRational(self.den, self.num)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpRational(self.num ** k, self.den ** k)


def _as_rational(x, p) -> FpRational:
    if isinstance(x, FpRational):
        return x
    if isinstance(x, FpPoly):
        return FpRational(x)
    return FpRational(FpPoly(p, (x,)))


def _clear_denominators(A, p):
    """Scale each row to polynomials; returns (poly matrix, product of row scales)."""
    rows, scale = [], FpPoly(p, (1,))
    for row in A:
        rr = [_as_rational(x, p) for x in row]
        lcm = FpPoly(p, (1,))
        for x in rr:
            lcm = (lcm * x.den).exact_div(poly_gcd(lcm, x.den))
        rows.append([x.num * lcm.exact_div(x.den) for x in rr])
        scale = scale * lcm
    return rows, scale


def _bareiss(M, p, want_det=True):
    """Fraction-free elimination over F_p[T]; returns (rank, det or None).

    Pivots are chosen with minimal degree among the remaining non-zero entries.
    """
    n_rows = len(M)
    n_cols = len(M[0]) if M else 0
    M = [list(r) for r in M]
    prev = FpPoly(p, (1,))
    sign = 1
    rank = 0
    col_order = list(range(n_cols))
    for k in range(min(n_rows, n_cols)):
        best = None
        for i in range(k, n_rows):
            for j in range(k, n_cols):
                x = M[i][j]
                if x and (best is None or x.degree < best[0]):
                    best = (x.degree, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != k:
            M[k], M[bi] = M[bi], M[k]
            sign = -sign
        if bj != k:
            for row in M:
                row[k], row[bj] = row[bj], row[k]
            col_order[k], col_order[bj] = col_order[bj], col_order[k]
            sign = -sign
        piv = M[k][k]
        for i in range(k + 1, n_rows):
            for j in range(k + 1, n_cols):
                M[i][j] = (M[i][j] * piv - M[i][k] * M[k][j]).exact_div(prev)
            M[i][k] = FpPoly(p)
        prev = piv
        rank += 1
    if not want_det:
        return rank, None
    if rank < n_rows:
        return rank, FpPoly(p)
    det = M[n_rows - 1][n_rows - 1] if n_rows else FpPoly(p, (1,))
    return rank, det * sign


def _prime_of(A):
    for row in A:
        for x in row:
            if isinstance(x, (FpPoly, FpRational)):
                return x.p
    raise ValidationError("cannot infer p from a matrix without FpPoly/FpRational entries")


def ff_det(A, p=None) -> FpRational:
    """Exact determinant over F_p(T)."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValidationError("ff_det: matrix is not square")
    if n == 0:
        return FpRational(FpPoly(p or 2, (1,)))
    p = p or _prime_of(A)
    M, scale = _clear_denominators(A, p)
    _, det = _bareiss(M, p)
    return FpRational(det, scale)


def ff_rank(A, p=None) -> int:
    """Exact rank over F_p(T)."""
    if not A or not A[0]:
        return 0
    p = p or _prime_of(A)
    M, _ = _clear_denominators(A, p)
    rank, _ = _bareiss(M, p, want_det=False)
    return rank


def identity(n, p):
    return [[FpRational(FpPoly(p, (1 if i == j else 0,))) for j in range(n)] for i in range(n)]


def matmul(A, B):
    zero = A[0][0] * 0
    return [[reduce(lambda s, t: s + t, (A[i][k] * B[k][j] for k in range(len(B))), zero)
             for j in range(len(B[0]))] for i in range(len(A))]
