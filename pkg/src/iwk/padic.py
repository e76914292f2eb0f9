"""Fixed-precision p-adic scalars over Z_p and small extensions O of Z_p.

Two element types live here:

* ``PadicScalar`` -- an element of O / p^N O, stored as integer coordinates
  mod p^N in the power basis 1, x, ..., x^(m-1) of O = Z_p[x]/(modulus).
* ``AlgebraicNumber`` -- an exact element of the number field Q[x]/(modulus),
  used by the exact ("rational") backend when m > 1.  For m = 1 the exact
  backend simply uses ``fractions.Fraction``.

Valuations are normalized so that val(p) = 1 and are exact ``Fraction``s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import sympy

from .errors import PrecisionError

INF = math.inf


def v_p(x, p: int):
    """Valuation of an integer or Fraction at p; INF for zero."""
    if isinstance(x, Fraction):
        if x == 0:
            return INF
        return v_p(x.numerator, p) - v_p(x.denominator, p)
    x = int(x)
    if x == 0:
        return INF
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicContext:
    p: int
    precision: int

    def __post_init__(self):
        if self.p < 3 or not sympy.isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")

    @property
    def modulus(self) -> int:
        return self.p ** self.precision


def _polymul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


class ExtensionRing:
    """O = Z_p[x]/(modulus), either unramified or totally ramified (Eisenstein).

    ``modulus`` is a monic integer polynomial, lowest coefficient first.
    """

    def __init__(self, ctx: PadicContext, modulus: Sequence[int] = (0, 1), kind: str = "unramified"):
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.ctx = ctx
        self.p = ctx.p
        self.N = ctx.precision
        self.modulus = modulus
        self.m = len(modulus) - 1
        self.kind = kind
        p = self.p
        if kind == "unramified":
            x = sympy.Symbol("x")
            poly = sympy.Poly(list(reversed(modulus)), x, modulus=p)
            if self.m > 1 and not poly.is_irreducible:
                raise ValueError(f"modulus {modulus} is not irreducible mod {p}")
            self.e, self.f = 1, self.m
        elif kind == "eisenstein":
            low = modulus[:-1]
            if any(c % p for c in low) or modulus[0] % (p * p) == 0:
                raise ValueError(f"modulus {modulus} is not Eisenstein at {p}")
            self.e, self.f = self.m, 1
        else:
            raise ValueError(f"unknown extension kind {kind!r}")

    @classmethod
    def zp(cls, p: int, precision: int = 20) -> "ExtensionRing":
        return cls(PadicContext(p, precision))

    def __eq__(self, other):
        return (isinstance(other, ExtensionRing) and self.ctx == other.ctx
                and self.modulus == other.modulus and self.kind == other.kind)

    def __hash__(self):
        return hash((self.ctx, self.modulus, self.kind))

    def __repr__(self):
        if self.m == 1:
            return f"Z_{self.p} (N={self.N})"
        return f"O[{self.kind}, modulus={list(self.modulus)}, p={self.p}, N={self.N}]"

    @property
    def is_prime_ring(self) -> bool:
        return self.m == 1

    @cached_property
    def base(self) -> "ExtensionRing":
        """The prime ring Z_p sharing this ring's context."""
        return self if self.m == 1 else ExtensionRing(self.ctx)

    def with_precision(self, N: int) -> "ExtensionRing":
        return ExtensionRing(PadicContext(self.p, N), self.modulus, self.kind)

    def reduce(self, coeffs) -> list:
        """Reduce a polynomial in x (any numeric coefficients) modulo the modulus."""
        c = list(coeffs)
        m = self.m
        mod = self.modulus
        for top in range(len(c) - 1, m - 1, -1):
            lead = c[top]
            if lead:
                for i in range(m):
                    c[top - m + i] -= lead * mod[i]
        c = c[:m]
        zero = c[0] * 0 if c else 0
        return c + [zero] * (m - len(c))

    def mul_coords(self, a, b) -> list:
        return self.reduce(_polymul(a, b))

    def mult_matrix(self, coords) -> list:
        """Matrix (columns = images of basis vectors) of multiplication by an element."""
        cols = []
        basis_elt = [0] * self.m
        for j in range(self.m):
            e_j = list(basis_elt)
            e_j[j] = 1
            cols.append(self.mul_coords(coords, e_j))
        return [[cols[j][i] for j in range(self.m)] for i in range(self.m)]

    def coords_valuation(self, coords):
        p, e = self.p, self.e
        best = INF
        for i, c in enumerate(coords):
            v = v_p(c, p)
            if v == INF:
                continue
            v = Fraction(v) + (Fraction(i, e) if e > 1 else 0)
            best = min(best, v)
        return best

    # element constructors -------------------------------------------------

    def exact(self, x):
        """Exact element: Fraction when m == 1, AlgebraicNumber otherwise."""
        if isinstance(x, AlgebraicNumber):
            return x
        if isinstance(x, PadicScalar):
            x = x.to_exact()
            return x
        if isinstance(x, (list, tuple)) and not (self.m == 1 and len(x) == 2):
            coords = [_to_fraction(c) for c in x]
            if self.m == 1:
                if len(coords) != 1:
                    raise ValueError("coordinate vector length must equal ring degree")
                return coords[0]
            return AlgebraicNumber(self, self.reduce(coords))
        q = _to_fraction(x)
        if self.m == 1:
            return q
        return AlgebraicNumber(self, [q] + [Fraction(0)] * (self.m - 1))

    def padic(self, x) -> "PadicScalar":
        if isinstance(x, PadicScalar):
            if x.ring != self:
                raise ValueError("scalar belongs to a different ring")
            return x
        if isinstance(x, AlgebraicNumber):
            return PadicScalar(self, [_frac_mod(c, self.p, self.ctx.modulus) for c in x.coords])
        if isinstance(x, (list, tuple)) and not (self.m == 1 and len(x) == 2):
            coords = self.reduce([_to_fraction(c) for c in x])
            return PadicScalar(self, [_frac_mod(c, self.p, self.ctx.modulus) for c in coords])
        return PadicScalar(self, [_frac_mod(_to_fraction(x), self.p, self.ctx.modulus)] + [0] * (self.m - 1))

    def coerce(self, x, backend: str):
        return self.exact(x) if backend == "rational" else self.padic(x)

    def gen(self, backend: str = "padic"):
        """The generator x of O over Z_p."""
        coords = [0] * self.m
        coords[min(1, self.m - 1)] = 1
        if self.m == 1:
            coords = [0]
        return self.coerce(coords, backend)

    def uniformizer(self, backend: str = "padic"):
        if self.kind == "eisenstein":
            return self.gen(backend)
        return self.coerce(self.p, backend)

    def val(self, x):
        """Normalized valuation (val(p) = 1) of any supported scalar."""
        if isinstance(x, (PadicScalar, AlgebraicNumber)):
            return x.val()
        return v_p(x, self.p)

    def to_json(self) -> dict:
        return {"p": self.p, "N": self.N, "modulus": list(self.modulus), "kind": self.kind}

    @classmethod
    def from_json(cls, obj, default_p=None, default_N=20) -> "ExtensionRing":
        obj = obj or {}
        p = obj.get("p", default_p)
        if p is None:
            raise ValueError("ring: field 'p' is required")
        N = obj.get("N", obj.get("precision", default_N))
        return cls(PadicContext(int(p), int(N)), obj.get("modulus", (0, 1)), obj.get("kind", "unramified"))


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _frac_mod(q: Fraction, p: int, pn: int) -> int:
    q = _to_fraction(q)
    if q.denominator % p == 0:
        raise ValueError(f"{q} is not p-integral (p={p})")
    return q.numerator * pow(q.denominator, -1, pn) % pn


def _solve_mod(M, b, p: int, pn: int):
    """Solve M y = b mod p^N when M is invertible mod p."""
    n = len(M)
    A = [[M[i][j] % pn for j in range(n)] + [b[i] % pn] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] % p), None)
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible mod p")
        A[col], A[piv] = A[piv], A[col]
        inv = pow(A[col][col], -1, pn)
        A[col] = [a * inv % pn for a in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [(a - f * c) % pn for a, c in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def solve_exact(M, b):
    """Gauss-Jordan over Q (or any exact field with ==, /)."""
    n = len(M)
    A = [list(M[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [a * inv for a in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * c for a, c in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


class _RingElement:
    __slots__ = ()

    def _lift(self, other):
        raise NotImplementedError

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return -self + other

    def __rmul__(self, other):
        return self * other

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        result = self._lift(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


class PadicScalar(_RingElement):
    """Element of O / p^N, immutable."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: ExtensionRing, coords):
        pn = ring.ctx.modulus
        coords = tuple(int(c) % pn for c in coords)
        if len(coords) != ring.m:
            raise ValueError("coordinate vector length must equal ring degree")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, key, value):
        raise AttributeError("PadicScalar is immutable")

    def _lift(self, other):
        if isinstance(other, PadicScalar):
            if other.ring != self.ring:
                raise ValueError("scalars from different rings")
            return other
        return self.ring.padic(other)

    def __add__(self, other):
        o = self._lift(other)
        return PadicScalar(self.ring, [a + b for a, b in zip(self.coords, o.coords)])

    def __sub__(self, other):
        o = self._lift(other)
        return PadicScalar(self.ring, [a - b for a, b in zip(self.coords, o.coords)])

    def __neg__(self):
        return PadicScalar(self.ring, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, int):
            return PadicScalar(self.ring, [a * other for a in self.coords])
        o = self._lift(other)
        if self.ring.m == 1:
            return PadicScalar(self.ring, [self.coords[0] * o.coords[0]])
        return PadicScalar(self.ring, self.ring.mul_coords(self.coords, o.coords))

    def __truediv__(self, other):
        o = self._lift(other)
        return self * o.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar, AlgebraicNumber)):
            try:
                o = self._lift(other)
            except ValueError:
                return False
            return self.coords == o.coords
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.coords))

    def __repr__(self):
        if self.ring.m == 1:
            return f"{self.coords[0]} + O({self.ring.p}^{self.ring.N})"
        return f"{list(self.coords)} + O({self.ring.p}^{self.ring.N})"

    def is_zero(self) -> bool:
        return not any(self.coords)

    def val(self):
        """Valuation, or INF when the element is zero to the working precision."""
        return self.ring.coords_valuation(self.coords)

    def is_unit(self) -> bool:
        return self.val() == 0

    def inverse(self) -> "PadicScalar":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self!r} is not a unit")
        r = self.ring
        if r.m == 1:
            return PadicScalar(r, [pow(self.coords[0], -1, r.ctx.modulus)])
        e0 = [1] + [0] * (r.m - 1)
        return PadicScalar(r, _solve_mod(r.mult_matrix(self.coords), e0, r.p, r.ctx.modulus))

    def divide_by_p(self, k: int) -> "PadicScalar":
        """Exact division by p^k; the top k digits of the result are unknown (set to 0)."""
        if k == 0:
            return self
        pk = self.ring.p ** k
        if any(c % pk for c in self.coords):
            raise ArithmeticError("element is not divisible by p^%d" % k)
        return PadicScalar(self.ring, [c // pk for c in self.coords])

    def to_exact(self):
        """The integer representative (coordinates in [0, p^N)) as an exact element."""
        return self.ring.exact(list(self.coords))

    def centered(self) -> list:
        pn = self.ring.ctx.modulus
        return [c - pn if c > pn // 2 else c for c in self.coords]

    def digits(self) -> list:
        p = self.ring.p
        out = []
        for c in self.coords:
            d = []
            for _ in range(self.ring.N):
                c, r = divmod(c, p)
                d.append(r)
            out.append(d)
        return out

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "digits": self.digits()}

    @classmethod
    def from_json(cls, obj) -> "PadicScalar":
        ring = ExtensionRing.from_json(obj["ring"])
        p = ring.p
        coords = [sum(d * p ** i for i, d in enumerate(ds)) for ds in obj["digits"]]
        return cls(ring, coords)


class AlgebraicNumber(_RingElement):
    """Exact element of Q[x]/(modulus) with Fraction coordinates."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: ExtensionRing, coords):
        coords = tuple(_to_fraction(c) for c in coords)
        if len(coords) != ring.m:
            raise ValueError("coordinate vector length must equal ring degree")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, key, value):
        raise AttributeError("AlgebraicNumber is immutable")

    def _lift(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.ring != self.ring:
                raise ValueError("numbers from different fields")
            return other
        return self.ring.exact(other)

    def __add__(self, other):
        o = self._lift(other)
        return AlgebraicNumber(self.ring, [a + b for a, b in zip(self.coords, o.coords)])

    def __sub__(self, other):
        o = self._lift(other)
        return AlgebraicNumber(self.ring, [a - b for a, b in zip(self.coords, o.coords)])

    def __neg__(self):
        return AlgebraicNumber(self.ring, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.ring, [a * other for a in self.coords])
        o = self._lift(other)
        return AlgebraicNumber(self.ring, self.ring.mul_coords(self.coords, o.coords))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.ring, [a / other for a in self.coords])
        return self * self._lift(other).inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return self.coords == self._lift(other).coords
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.coords))

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*x^{i}")
        return "(" + (" + ".join(terms) or "0") + ")"

    def is_zero(self) -> bool:
        return not any(self.coords)

    def val(self):
        return self.ring.coords_valuation(self.coords)

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        e0 = [Fraction(1)] + [Fraction(0)] * (self.ring.m - 1)
        return AlgebraicNumber(self.ring, solve_exact(self.ring.mult_matrix(self.coords), e0))

    def norm(self) -> Fraction:
        from .linalg import det_division_free
        return det_division_free(self.ring.mult_matrix(self.coords), Fraction(1))


def hensel_unit_root(p: int, a_p: int, N: int):
    """Unit root u of X^2 - a_p X + p in Z_p, mod p^N, together with w = p/u.

    Newton iteration started from u = a_p; the derivative 2u - a_p is a unit
    because u = a_p mod p.
    """
    if a_p % p == 0:
        raise ValueError(f"a_p = {a_p} is divisible by p = {p}: supersingular, no unit root")
    ring = ExtensionRing.zp(p, N)
    pn = ring.ctx.modulus
    u = a_p % pn
    for _ in range(N.bit_length() + 1):
        fu = (u * u - a_p * u + p) % pn
        if fu == 0:
            break
        u = (u - fu * pow(2 * u - a_p, -1, pn)) % pn
    if (u * u - a_p * u + p) % pn:
        raise PrecisionError("Hensel iteration did not converge")
    u = PadicScalar(ring, [u])
    return u, u.inverse() * p


@dataclass(frozen=True)
class SNFResult:
    valuations: tuple
    residue_degree: int = 1

    @property
    def singular(self) -> bool:
        return any(v == INF for v in self.valuations)

    @property
    def chi_exponent(self):
        """log_p(#coker / #ker) for a nonsingular matrix, else None."""
        if self.singular:
            return None
        return self.residue_degree * sum(self.valuations)


def padic_snf(A, strict: bool = False) -> SNFResult:
    """Elementary-divisor valuations of a square matrix of PadicScalars (e = 1).

    Pivots are chosen with minimal valuation, so Schur complements stay known
    to full precision.  A block that is zero mod p^N is reported as INF; with
    ``strict=True`` this raises ``PrecisionError`` instead.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("padic_snf expects a square matrix")
    if n == 0:
        return SNFResult(())
    ring = A[0][0].ring
    if ring.e != 1:
        raise ValueError("padic_snf requires an unramified ring (e = 1)")
    M = [[ring.padic(x) for x in row] for row in A]
    vals = []
    size = n
    for k in range(n):
        best, bi, bj = INF, None, None
        for i in range(k, size):
            for j in range(k, size):
                v = M[i][j].val()
                if v < best:
                    best, bi, bj = v, i, j
        if best == INF:
            if strict:
                raise PrecisionError("precision exhausted: remaining block is zero mod p^N")
            vals.extend([INF] * (n - k))
            break
        M[k], M[bi] = M[bi], M[k]
        for row in M:
            row[k], row[bj] = row[bj], row[k]
        v = int(best)
        piv = M[k][k]
        unit_inv = piv.divide_by_p(v).inverse()
        for i in range(k + 1, n):
            a = M[i][k]
            if a.is_zero():
                continue
            factor = a * unit_inv
            for j in range(k + 1, n):
                # a * c / piv with c = p^v c': exact mod p^N since val(a) >= v
                c = M[k][j].divide_by_p(v)
                M[i][j] = M[i][j] - factor * c
            M[i][k] = ring.padic(0)
        vals.append(v)
    return SNFResult(tuple(vals), ring.f)
