"""The Iwasawa algebra O[[T]] (gamma_0 <-> 1 + T), truncated at T-degree D.

Two coefficient backends share one class:

``"rational"``
    exact coefficients (Fraction, or AlgebraicNumber when [O:Z_p] > 1).  With
    ``D=None`` the series is an honest polynomial and is never truncated; this
    is the mode used for every zero/non-zero decision.
``"padic"``
    PadicScalar coefficients, exact mod p^N.

Coefficients are stored trimmed (no trailing zeros).  ``exact`` records
whether the stored coefficients are the whole series, i.e. no non-zero term
was ever dropped by truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (ExactBackendRequired, LambdaExceedsTruncation, PrecisionError,
                     ValidationError, ZeroWithinPrecision)
from .linalg import det_division_free
from .padic import INF, ExtensionRing, PadicScalar

DEFAULT_TRUNCATION = 32
BACKENDS = ("rational", "padic")


def _is_zero(c) -> bool:
    return c == 0


class IwasawaSeries:
    __slots__ = ("ring", "D", "backend", "coeffs", "exact")

    def __init__(self, ring: ExtensionRing, coeffs=(), D=DEFAULT_TRUNCATION, backend="rational",
                 exact=True):
        if backend not in BACKENDS:
            raise ValidationError(f"backend must be one of {BACKENDS}, got {backend!r}")
        if D is not None and D < 0:
            raise ValidationError("truncation D must be non-negative")
        if D is None and backend != "rational":
            raise ValidationError("untruncated (D=None) series need the rational backend")
        cs = [ring.coerce(c, backend) for c in coeffs]
        if D is not None and len(cs) > D + 1:
            if any(not _is_zero(c) for c in cs[D + 1:]):
                exact = False
            cs = cs[:D + 1]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "backend", backend)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "exact", bool(exact))

    def __setattr__(self, key, value):
        raise AttributeError("IwasawaSeries is immutable")

    # construction helpers --------------------------------------------------

    def _new(self, coeffs, exact=True):
        return IwasawaSeries(self.ring, coeffs, self.D, self.backend, exact)

    @classmethod
    def constant(cls, ring, c, D=DEFAULT_TRUNCATION, backend="rational"):
        return cls(ring, [c], D, backend)

    @classmethod
    def gen(cls, ring, D=DEFAULT_TRUNCATION, backend="rational"):
        """The variable T."""
        return cls(ring, [0, 1], D, backend)

    def zero(self):
        return self._new(())

    def one(self):
        return self._new((1,))

    def like(self, coeffs):
        return self._new(coeffs)

    @property
    def is_polynomial(self) -> bool:
        return self.exact

    def scalar(self, c):
        return self.ring.coerce(c, self.backend)

    # comparison / inspection ----------------------------------------------

    def _check(self, other: "IwasawaSeries"):
        if (other.ring != self.ring or other.D != self.D or other.backend != self.backend):
            raise ValidationError(
                f"incompatible series: ({self.ring}, D={self.D}, {self.backend}) vs "
                f"({other.ring}, D={other.D}, {other.backend})")

    def _lift(self, other) -> "IwasawaSeries":
        if isinstance(other, IwasawaSeries):
            self._check(other)
            return other
        return self._new((other,))

    def __eq__(self, other):
        if isinstance(other, IwasawaSeries):
            return (self.ring == other.ring and self.D == other.D and self.backend == other.backend
                    and self.coeffs == other.coeffs)
        try:
            return self.coeffs == self._lift(other).coeffs
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.D, self.backend, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            cs = repr(c) if not isinstance(c, Fraction) else str(c)
            terms.append(cs if i == 0 else f"{cs}*T" + (f"^{i}" if i > 1 else ""))
        body = " + ".join(terms) or "0"
        tail = "" if self.D is None else f" + O(T^{self.D + 1})"
        return f"<{body}{tail} [{self.backend}]>"

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        """Index of the last non-zero stored coefficient (None for zero)."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.scalar(0)

    def coefficient_list(self, length=None) -> list:
        n = len(self.coeffs) if length is None else length
        return [self[i] for i in range(n)]

    # arithmetic --------------------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return self._new([self[i] + o[i] for i in range(n)], self.exact and o.exact)

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs], self.exact)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, IwasawaSeries):
            c = self.scalar(other)
            return self._new([a * c for a in self.coeffs], self.exact)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return self.zero()
        full = len(a) + len(b) - 1
        n = full if self.D is None else min(full, self.D + 1)
        out = [None] * n
        for i, x in enumerate(a):
            if i >= n or _is_zero(x):
                continue
            for j in range(min(len(b), n - i)):
                y = b[j]
                t = x * y
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = self.scalar(0)
        out = [zero if c is None else c for c in out]
        exact = self.exact and other.exact
        if exact and n < full:
            # the product of the full polynomials has terms past D
            dropped = self._new_untruncated_tail(a, b, n)
            exact = not dropped
        return self._new(out, exact)

    def _new_untruncated_tail(self, a, b, n):
        for k in range(n, len(a) + len(b) - 1):
            s = self.scalar(0)
            for i in range(max(0, k - len(b) + 1), min(len(a), k + 1)):
                s = s + a[i] * b[k - i]
            if not _is_zero(s):
                return True
        return False

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "IwasawaSeries":
        """Inverse of a series with unit constant term (truncated at D)."""
        if self.D is None:
            if self.degree == 0 and self.backend == "rational":
                return self._new((1 / self.coeffs[0],))
            raise ExactBackendRequired("inverse of a non-constant polynomial needs a truncation")
        c0 = self[0]
        if self.ring.val(c0) != 0:
            raise ZeroDivisionError("constant term is not a unit")
        return self._new(series_inverse(self.coefficient_list(self.D + 1), self.D), self.degree == 0)

    # evaluation and substitution -------------------------------------------

    def __call__(self, x):
        """Evaluate at a scalar (Horner).  Truncated series need val(x) > 0."""
        if not self.exact and self.ring.val(x) <= 0:
            raise ValueError("evaluating a truncated series off the open unit disc")
        acc = self.scalar(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "IwasawaSeries") -> "IwasawaSeries":
        """self(inner) by Horner's rule, truncated at D."""
        self._check(inner)
        acc = self.zero()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        exact = self.exact and acc.exact
        return self._new(acc.coeffs, exact)

    def to_backend(self, backend: str, D="same") -> "IwasawaSeries":
        D = self.D if D == "same" else D
        if backend == "padic" and D is None:
            D = max(DEFAULT_TRUNCATION, self.degree or 0)
        return IwasawaSeries(self.ring, self.coeffs, D, backend, self.exact)

    def with_truncation(self, D) -> "IwasawaSeries":
        return IwasawaSeries(self.ring, self.coeffs, D, self.backend, self.exact)

    def with_ring(self, ring: ExtensionRing) -> "IwasawaSeries":
        """Coerce coefficients into another ring (e.g. Z_p -> O)."""
        coeffs = self.coeffs
        if self.backend == "padic":
            coeffs = [c.to_exact() for c in coeffs]
        return IwasawaSeries(ring, coeffs, self.D, self.backend, self.exact)

    # valuation data ------------------------------------------------------------

    def min_valuation(self):
        return min((self.ring.val(c) for c in self.coeffs), default=INF)

    def mu_lambda(self):
        """(mu in units of the uniformizer, lambda) read off the coefficient valuations."""
        vals = [self.ring.val(c) for c in self.coeffs]
        vmin = min(vals, default=INF)
        if vmin == INF:
            raise ZeroWithinPrecision("series is zero within precision")
        mu = vmin * self.ring.e
        if Fraction(mu).denominator != 1:
            raise PrecisionError("content valuation is not a power of the uniformizer")
        return int(mu), vals.index(vmin)

    # exact polynomial operations (rational backend) ------------------------------

    def _require_poly(self):
        if self.backend != "rational" or not self.exact:
            raise ExactBackendRequired("exact polynomial arithmetic needs rational, untruncated input")

    def poly_divmod(self, other: "IwasawaSeries"):
        """Euclidean division of polynomials over the fraction field of O."""
        self._require_poly()
        other._require_poly()
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        lead_inv = 1 / b[-1]
        q = [self.scalar(0)] * max(0, len(r) - db)
        while len(r) - 1 >= db and r:
            k = len(r) - 1 - db
            c = r[-1] * lead_inv
            q[k] = c
            for i in range(db + 1):
                r[k + i] = r[k + i] - c * b[i]
            r.pop()
            while r and _is_zero(r[-1]):
                r.pop()
        return (IwasawaSeries(self.ring, q, None, "rational"),
                IwasawaSeries(self.ring, r, None, "rational"))

    def monic(self) -> "IwasawaSeries":
        self._require_poly()
        if self.is_zero():
            return self
        inv = 1 / self.coeffs[-1]
        return IwasawaSeries(self.ring, [c * inv for c in self.coeffs], self.D, "rational")

    def poly_gcd(self, other: "IwasawaSeries") -> "IwasawaSeries":
        a = self.with_truncation(None)
        b = other.with_truncation(None)
        a._require_poly()
        b._require_poly()
        while not b.is_zero():
            a, b = b, a.poly_divmod(b)[1]
        return a.monic()

    # serialization --------------------------------------------------------------

    def to_json(self) -> dict:
        out = {"backend": self.backend, "D": self.D, "coeffs": [_scalar_json(c) for c in self.coeffs]}
        if not self.ring.is_prime_ring:
            out["ring"] = self.ring.to_json()
        if not self.exact:
            out["exact"] = False
        return out

    @classmethod
    def from_json(cls, obj, ring: ExtensionRing = None, D=DEFAULT_TRUNCATION, backend=None):
        if isinstance(obj, list):
            obj = {"coeffs": obj}
        if "ring" in obj:
            ring = ExtensionRing.from_json(obj["ring"])
        if ring is None:
            raise ValidationError("series: a ring is required")
        backend = obj.get("backend", backend or "rational")
        if backend == "padic" and obj.get("digits") is not None:
            coeffs = [PadicScalar.from_json({"ring": ring.to_json(), "digits": d}) for d in obj["digits"]]
        else:
            coeffs = [_parse_scalar(c, ring) for c in obj.get("coeffs", [])]
        D = obj.get("D", D)
        return cls(ring, coeffs, D, backend, obj.get("exact", True))


def _parse_scalar(c, ring):
    if ring.m == 1:
        return c if not isinstance(c, list) else Fraction(int(c[0]), int(c[1]))
    if not isinstance(c, list) or len(c) != ring.m:
        raise ValidationError(f"coefficient {c!r} must be a list of {ring.m} coordinates")
    return [x if not isinstance(x, list) else Fraction(int(x[0]), int(x[1])) for x in c]


def _frac_json(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else [q.numerator, q.denominator]


def _scalar_json(c):
    if isinstance(c, PadicScalar):
        if c.ring.m == 1:
            return c.coords[0]
        return list(c.coords)
    if hasattr(c, "coords"):
        return [_frac_json(x) for x in c.coords]
    return _frac_json(c)


def series_inverse(b, n):
    """First n+1 coefficients of 1/b for b with unit constant term."""
    c0 = 1 / b[0]
    out = [c0]
    for k in range(1, n + 1):
        s = b[1] * out[k - 1] if len(b) > 1 else b[0] * 0
        for j in range(2, min(k, len(b) - 1) + 1):
            s = s + b[j] * out[k - j]
        out.append(-(c0 * s))
    return out


def _mul_trunc(a, b, n, zero):
    out = [zero] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if x == 0:
            continue
        for j in range(min(len(b), n + 1 - i)):
            out[i + j] = out[i + j] + x * b[j]
    return out


# --------------------------------------------------------------------------------
# Weierstrass preparation and division
# --------------------------------------------------------------------------------

@dataclass(frozen=True)
class WeierstrassData:
    """f = pi^mu * unit * distinguished, within precision."""

    mu: int
    lam: int
    distinguished: IwasawaSeries
    unit: IwasawaSeries
    precision_loss: int = 0

    def reconstruct(self) -> IwasawaSeries:
        pi = self.unit.ring.uniformizer("padic")
        return self.unit * self.distinguished * (pi ** self.mu)

    def to_json(self) -> dict:
        return {"mu": self.mu, "lambda": self.lam,
                "distinguished": self.distinguished.to_json(),
                "unit": self.unit.to_json(),
                "precision_loss": self.precision_loss}


def _divide_by_uniformizer_power(x: PadicScalar, k: int):
    """x / pi^k (val(x) >= k/e), plus the number of p-adic digits lost."""
    ring = x.ring
    if k == 0:
        return x, 0
    if ring.e == 1:
        return x.divide_by_p(k), k
    e = ring.e
    j = -(-k // e)
    pi = ring.uniformizer("padic")
    eps = (pi ** e).divide_by_p(1)  # pi^e / p, a unit for Eisenstein moduli
    y = (x * pi ** (j * e - k)).divide_by_p(j)
    return y * eps.inverse() ** j, j


def _prime_backend_copy(f: IwasawaSeries, D) -> list:
    ring = f.ring
    return [ring.padic(c) for c in f.coefficient_list(D + 1)]


def _int_inverse(b, n, pn):
    c0 = pow(b[0], -1, pn)
    out = [c0]
    for k in range(1, n + 1):
        s = sum(b[j] * out[k - j] for j in range(1, min(k, len(b) - 1) + 1))
        out.append(-c0 * s % pn)
    return out


def _int_mul_trunc(a, b, n, pn):
    out = [0] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if x:
            for j in range(min(len(b), n + 1 - i)):
                out[i + j] += x * b[j]
    return [c % pn for c in out]


def _int_weierstrass_division(f, g, lam, W, pn, rounds):
    """Integer (Z/p^N) version of the division loop below."""
    B = g[lam:] + [0] * lam
    Binv = _int_inverse(B, W, pn)
    h = list(f) + [0] * (W + 1 - len(f))
    q = [0] * (W + 1)
    for _ in range(rounds):
        high = h[lam:]
        if not any(high):
            return q[:W - lam + 1], h[:lam]
        step = _int_mul_trunc(high, Binv, W - lam, pn)
        q = [(a + b) % pn for a, b in zip(q, step + [0] * lam)]
        prod = _int_mul_trunc(step, g, W, pn)
        h = [(a - b) % pn for a, b in zip(h, prod)]
    raise PrecisionError("Weierstrass division did not converge")


def _weierstrass_division(fc, g, lam, W, ring):
    """Solve f = q g + r (deg r < lam) mod T^(W+1), g[lam] a unit, p-adic coefficients."""
    if ring.m == 1:
        pn = ring.ctx.modulus
        q, r = _int_weierstrass_division([c.coords[0] for c in fc], [c.coords[0] for c in g],
                                         lam, W, pn, ring.N + 2)
        return [ring.padic(c) for c in q], [ring.padic(c) for c in r]
    zero = ring.padic(0)
    B = g[lam:] + [zero] * lam
    Binv = series_inverse(B, W)
    h = list(fc) + [zero] * (W + 1 - len(fc))
    q = [zero] * (W + 1)
    for _ in range(ring.e * ring.N + 2):
        high = h[lam:]
        if all(c.is_zero() for c in high):
            break
        step = _mul_trunc(high, Binv, W - lam, zero)
        q = [a + b for a, b in zip(q, step + [zero] * lam)]
        prod = _mul_trunc(step, g, W, zero)
        h = [a - b for a, b in zip(h, prod)]
    else:
        raise PrecisionError("Weierstrass division did not converge")
    return q[:W - lam + 1], h[:lam]


def _unit_index(vals):
    for i, v in enumerate(vals):
        if v == 0:
            return i
    return None


def weierstrass_prepare(f: IwasawaSeries) -> WeierstrassData:
    """Write f = pi^mu * U * P with U a unit and P distinguished of degree lambda.

    The stored coefficients of f are read as a polynomial (higher terms zero),
    so the identity pi^mu U P = f holds mod (p^N, T^(D+1)) for the output
    truncation D.  Exact inputs are peeled exactly before switching to p-adic
    coefficients; p-adic inputs lose ``precision_loss`` digits in the peel.
    """
    ring = f.ring
    if f.is_zero():
        raise ZeroWithinPrecision("cannot prepare a series that is zero within precision")
    mu, lam = f.mu_lambda()
    D = f.D if f.D is not None else max(DEFAULT_TRUNCATION, f.degree)
    if f.D is not None and lam >= f.D:
        raise LambdaExceedsTruncation(f"lambda = {lam} is not below the truncation D = {f.D}")
    loss = 0
    if f.backend == "rational":
        pi = ring.uniformizer("rational")
        scale = pi ** (-mu)
        g = [ring.padic(c * scale) for c in f.coeffs]
    else:
        g = []
        for c in f.coeffs:
            y, loss = _divide_by_uniformizer_power(c, mu)
            g.append(y)
    W = D + lam
    zero = ring.padic(0)
    g = g + [zero] * (W + 1 - len(g))
    target = [zero] * lam + [ring.padic(1)]
    q, r = _weierstrass_division(target, g[:W + 1], lam, W, ring)
    distinguished = IwasawaSeries(ring, [-c for c in r] + [1], D, "padic")
    if ring.m == 1:
        inv = [ring.padic(c) for c in _int_inverse([c.coords[0] for c in q], D, ring.ctx.modulus)]
    else:
        inv = series_inverse(q, D)
    unit = IwasawaSeries(ring, inv, D, "padic", exact=False)
    return WeierstrassData(mu, lam, distinguished, unit, loss)


def divide(f: IwasawaSeries, g: IwasawaSeries):
    """Weierstrass division f = q g + r with deg r < lambda(g).

    lambda(g) is the index of the first unit coefficient of g.  Exact
    polynomial inputs whose unit coefficient is the leading one are divided
    exactly; everything else is done with p-adic coefficients.  For truncated
    f, coefficients of q above D - lambda(g) depend on terms of f beyond the
    window.
    """
    f._check(g)
    ring = f.ring
    if g.is_zero():
        raise ZeroWithinPrecision("divisor is zero within precision")
    lam = _unit_index([ring.val(c) for c in g.coeffs])
    if lam is None:
        raise ZeroWithinPrecision("divisor has no unit coefficient within the truncation window")
    if f.backend == "rational" and f.exact and g.exact and lam == g.degree:
        q, r = f.with_truncation(None).poly_divmod(g.with_truncation(None))
        return q.with_truncation(f.D), r.with_truncation(f.D)
    D = f.D if f.D is not None else max(DEFAULT_TRUNCATION, f.degree or 0, g.degree)
    W = D + lam
    fc = [ring.padic(c) for c in f.coefficient_list(min(len(f.coeffs), W + 1))]
    gc = [ring.padic(c) for c in g.coefficient_list(W + 1)]
    q, r = _weierstrass_division(fc, gc, lam, W, ring)
    return (IwasawaSeries(ring, q, D, "padic", exact=False),
            IwasawaSeries(ring, r, D, "padic"))


def augment(f: IwasawaSeries):
    """Image under T -> 0 (gamma_0 -> 1)."""
    c = f[0]
    return f.scalar(0) if c is None else c


def twist_substitute(f: IwasawaSeries, c) -> IwasawaSeries:
    """f(c(1+T) - 1) for a unit c.

    Truncated series additionally need c = 1 mod the maximal ideal, so that
    the substitution converges.
    """
    ring = f.ring
    c = f.scalar(c)
    if ring.val(c) != 0:
        raise ValidationError("twist constant must be a unit")
    if not f.exact and ring.val(c - 1) <= 0:
        raise ValidationError("twisting a truncated series needs c = 1 mod the maximal ideal")
    inner = f.like([c - 1, c])
    return f.compose(inner)


def norm_to_base(g: IwasawaSeries) -> IwasawaSeries:
    """Norm O[[T]] -> Z_p[[T]]: determinant of multiplication by g on the basis 1, x, ..., x^(m-1)."""
    ring = g.ring
    base = ring.base
    m = ring.m
    if m == 1:
        return g
    coords = []
    for c in g.coeffs:
        if g.backend == "padic":
            coords.append(ring.mult_matrix(list(c.coords)))
        else:
            coords.append(ring.mult_matrix(list(c.coords)))
    entries = [[IwasawaSeries(base, [M[i][j] for M in coords], g.D, g.backend, g.exact)
                for j in range(m)] for i in range(m)]
    one = IwasawaSeries(base, [1], g.D, g.backend)
    return det_division_free(entries, one)


def cyclotomic_shift(ring: ExtensionRing, k: int, D=None, backend="rational") -> IwasawaSeries:
    """Phi_{p^k}(1+T) (k >= 1), or T for k = 0."""
    p = ring.p
    if k == 0:
        return IwasawaSeries.gen(ring, D, backend)
    # Phi_{p^k}(X) = sum_{i<p} X^(i p^(k-1)), expanded at X = 1 + T
    step = p ** (k - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for i in range(p):
        n = i * step
        for j in range(n + 1):
            coeffs[j] += math.comb(n, j)
    return IwasawaSeries(ring, coeffs, D, backend)
