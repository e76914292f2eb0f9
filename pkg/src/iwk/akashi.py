"""Torsion Lambda_O(Gamma)-modules, Akashi series and Euler characteristics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .crossed_product import (ArtinRep, CrossedElement, LocalizedElement, _as_matrix,
                              evaluate_xi, is_torsion_presentation, phi_rho_matrix)
from .errors import ExactBackendRequired, NotTorsion, PrecisionError, ValidationError
from .iwasawa_series import (IwasawaSeries, cyclotomic_shift, norm_to_base, twist_substitute,
                             weierstrass_prepare)
from .linalg import det_division_free
from .padic import INF, ExtensionRing, padic_snf

NOT_FINITE = "not-finite"


def char_series(P) -> IwasawaSeries:
    """Determinant of a square presentation matrix (a generator of the characteristic ideal)."""
    if isinstance(P, IwasawaSeries):
        P = [[P]]
    n = len(P)
    if n == 0 or any(len(row) != n for row in P):
        raise ValidationError("presentation matrix must be square and non-empty")
    d = det_division_free(P, P[0][0].one())
    if d.is_zero():
        raise NotTorsion("presentation has zero determinant: module is not torsion")
    return d


class TorsionModuleData:
    """H_i(H, M) for i = 0, 1, ..., each given by a series or a square presentation."""

    def __init__(self, degrees, ring: ExtensionRing = None):
        if not degrees:
            raise ValidationError("module needs at least one homology degree")
        self.degrees = []
        for d in degrees:
            if isinstance(d, IwasawaSeries):
                if d.is_zero():
                    raise NotTorsion("characteristic series is zero")
                self.degrees.append(d)
            else:
                char_series(d)
                self.degrees.append([list(r) for r in d])
        self.ring = ring or self.series(0).ring

    def series(self, i: int) -> IwasawaSeries:
        d = self.degrees[i]
        return d if isinstance(d, IwasawaSeries) else char_series(d)

    def __len__(self):
        return len(self.degrees)

    def all_series(self):
        return [self.series(i) for i in range(len(self))]

    @classmethod
    def direct_sum(cls, A: "TorsionModuleData", B: "TorsionModuleData"):
        n = max(len(A), len(B))
        out = []
        for i in range(n):
            fa = A.series(i) if i < len(A) else None
            fb = B.series(i) if i < len(B) else None
            out.append(fa * fb if fa is not None and fb is not None else (fa or fb))
        return cls(out, A.ring)

    def to_json(self) -> dict:
        degs = []
        for d in self.degrees:
            if isinstance(d, IwasawaSeries):
                degs.append({"series": d.to_json()})
            else:
                degs.append({"matrix": [[x.to_json() for x in row] for row in d]})
        return {"degrees": degs}

    @classmethod
    def from_json(cls, obj, ring: ExtensionRing, D=None, backend="rational"):
        if "degrees" not in obj:
            raise ValidationError("module: missing field 'degrees'")
        degs = []
        for i, d in enumerate(obj["degrees"]):
            if "series" in d:
                degs.append(IwasawaSeries.from_json(d["series"], ring, D, backend))
            elif "matrix" in d:
                degs.append([[IwasawaSeries.from_json(x, ring, D, backend) for x in row]
                             for row in d["matrix"]])
            else:
                raise ValidationError(f"module: degree {i} needs 'series' or 'matrix'")
        return cls(degs, ring)


@dataclass(frozen=True)
class CanonicalForm:
    """pi^mu * P_num / P_den with coprime distinguished polynomials (p-adic coefficients)."""

    mu: int
    numerator: IwasawaSeries
    denominator: IwasawaSeries

    @property
    def lam(self) -> int:
        return (self.numerator.degree or 0) - (self.denominator.degree or 0)

    def to_json(self) -> dict:
        return {"mu": self.mu, "lambda": self.lam,
                "numerator": self.numerator.to_json(), "denominator": self.denominator.to_json()}


def _reduce_fraction(num: IwasawaSeries, den: IwasawaSeries):
    g = num.poly_gcd(den)
    return num.poly_divmod(g)[0], den.poly_divmod(g)[0]


def _distinguished(f: IwasawaSeries):
    """(mu, distinguished part) of a non-zero series."""
    if f.degree == 0 or f.is_zero():
        return f.mu_lambda()[0], None
    w = weierstrass_prepare(f)
    return w.mu, w.distinguished


class AkashiSeries:
    """prod_i f_i^(sign_i), considered modulo units of Lambda_O(Gamma)."""

    def __init__(self, factors):
        self.factors = [(f, 1 if s > 0 else -1) for f, s in factors]
        if not self.factors:
            raise ValidationError("Akashi series needs at least one factor")
        for f, _ in self.factors:
            if f.is_zero():
                raise NotTorsion("zero factor in Akashi series")
        self.ring = self.factors[0][0].ring

    @classmethod
    def of_module(cls, M: TorsionModuleData) -> "AkashiSeries":
        return cls([(f, (-1) ** i) for i, f in enumerate(M.all_series())])

    @property
    def exact(self) -> bool:
        return all(f.backend == "rational" and f.exact for f, _ in self.factors)

    def __mul__(self, other: "AkashiSeries") -> "AkashiSeries":
        return AkashiSeries(self.factors + other.factors)

    def inverse(self) -> "AkashiSeries":
        return AkashiSeries([(f, -s) for f, s in self.factors])

    def rational_function(self):
        """(num, den) exact polynomials in lowest terms."""
        if not self.exact:
            raise ExactBackendRequired("cancellation of factors needs exact polynomial factors")
        one = self.factors[0][0].with_truncation(None).one()
        num, den = one, one
        for f, s in self.factors:
            f = f.with_truncation(None)
            if s > 0:
                num = num * f
            else:
                den = den * f
        return _reduce_fraction(num, den)

    def mu(self) -> int:
        return sum(s * f.mu_lambda()[0] for f, s in self.factors)

    def lam(self) -> int:
        return sum(s * f.mu_lambda()[1] for f, s in self.factors)

    def canonical(self) -> CanonicalForm:
        """Total mu and distinguished numerator/denominator.

        Exact factors are cancelled first; p-adic factors are combined without
        cancellation (common distinguished factors may then remain on both sides).
        """
        if self.exact:
            num, den = self.rational_function()
            pieces = [(num, 1), (den, -1)]
        else:
            pieces = self.factors
        mu = 0
        top, bottom = None, None
        for f, s in pieces:
            m, d = _distinguished(f)
            mu += s * m
            if d is None:
                continue
            if s > 0:
                top = d if top is None else top * d
            else:
                bottom = d if bottom is None else bottom * d
        proto = _padic_one(self.ring, self.factors[0][0])
        return CanonicalForm(mu, top if top is not None else proto, bottom if bottom is not None else proto)

    def __eq__(self, other):
        """Equality modulo Lambda_O(Gamma)^x."""
        if not isinstance(other, AkashiSeries):
            return NotImplemented
        if self.exact and other.exact:
            num, den = (self * other.inverse()).rational_function()
            return _is_unit_ratio(num, den)
        a, b = self.canonical(), other.canonical()
        return (a.mu == b.mu and a.numerator.coeffs == b.numerator.coeffs
                and a.denominator.coeffs == b.denominator.coeffs)

    __hash__ = None

    def norm(self) -> "AkashiSeries":
        """Factorwise norm down to Z_p[[T]]."""
        return AkashiSeries([(norm_to_base(f), s) for f, s in self.factors])

    def twist(self, c) -> "AkashiSeries":
        return AkashiSeries([(twist_substitute(f, c), s) for f, s in self.factors])

    def to_json(self) -> dict:
        out = {"factors": [{"series": f.to_json(), "sign": s} for f, s in self.factors]}
        out["canonical"] = self.canonical().to_json()
        return out


def _padic_one(ring, f: IwasawaSeries) -> IwasawaSeries:
    D = f.D if f.D is not None else max(32, f.degree or 0)
    return IwasawaSeries(ring, [1], D, "padic")


def _is_unit_ratio(num: IwasawaSeries, den: IwasawaSeries) -> bool:
    """num/den (coprime polynomials) is a unit of O[[T]] iff both have lambda = 0 and equal content."""
    mn, ln = num.mu_lambda()
    md, ld = den.mu_lambda()
    return ln == 0 and ld == 0 and mn == md


def akashi_series(M: TorsionModuleData) -> AkashiSeries:
    return AkashiSeries.of_module(M)


@dataclass(frozen=True)
class EulerCharacteristic:
    """chi = p^exponent, or not finite."""

    finite: bool
    exponent: int = None

    def to_json(self):
        return {"finite": self.finite, "chi_exponent": self.exponent} if self.finite else \
            {"finite": False, "chi": NOT_FINITE}


def euler_characteristic(ak: AkashiSeries, m: int = None) -> EulerCharacteristic:
    """|phi(Ak)|_p^(-m) as a power of p (m defaults to [O:Z_p])."""
    ring = ak.ring
    m = ring.m if m is None else m
    if ak.exact:
        num, den = ak.rational_function()
        n0, d0 = num[0], den[0]
        if n0 is None or n0 == 0 or d0 is None or d0 == 0:
            return EulerCharacteristic(False)
        v = ring.val(n0) - ring.val(d0)
    else:
        v = Fraction(0)
        for f, s in ak.factors:
            c = f[0]
            if c is None or c == 0:
                return EulerCharacteristic(False)
            vc = ring.val(c)
            if vc == INF:
                raise PrecisionError("value at T = 0 is zero within precision")
            v += s * vc
    e = Fraction(m) * v
    if e.denominator != 1:
        raise PrecisionError(f"Euler characteristic exponent {e} is not an integer")
    return EulerCharacteristic(True, int(e))


def twist_module(M: TorsionModuleData, c) -> TorsionModuleData:
    """Degreewise f_i(T) -> f_i(c(1+T) - 1)."""
    degs = []
    for d in M.degrees:
        if isinstance(d, IwasawaSeries):
            degs.append(twist_substitute(d, c))
        else:
            degs.append([[twist_substitute(x, c) for x in row] for row in d])
    return TorsionModuleData(degs, M.ring)


def bad_twist_scan(M: TorsionModuleData, k_max: int) -> set:
    """Orders p^k (k <= k_max) of characters eta of Gamma for which some f_i(eta(gamma_0)^(-1) - 1) = 0."""
    series = M.all_series()
    for f in series:
        if f.backend != "rational" or not f.exact:
            raise ExactBackendRequired("divisibility by cyclotomic polynomials needs exact polynomials")
    ring = M.ring
    p = ring.p
    bad = set()
    for k in range(k_max + 1):
        phi = cyclotomic_shift(ring, k)
        for f in series:
            g = f.with_truncation(None).poly_gcd(phi)
            if (g.degree or 0) > 0:
                bad.add(p ** k)
                break
    return bad


# ------------------------------------------------------------------------------
# Characteristic elements: three routes to chi(G, tw(M))
# ------------------------------------------------------------------------------

@dataclass
class CharElementReport:
    xi_kind: str
    xi_exponent: object
    akashi_exponent: object
    snf_exponent: object
    higher_correction: int

    @property
    def xi_not_infinite(self) -> bool:
        return self.xi_kind != "infinity"

    @property
    def consistent(self) -> bool:
        non_finite = [self.xi_kind == "zero", self.akashi_exponent is None, self.snf_exponent is None]
        if any(non_finite):
            return all(non_finite)
        if self.xi_kind != "finite":
            return False
        c = self.higher_correction
        return self.xi_exponent + c == self.akashi_exponent == self.snf_exponent + c

    def to_json(self) -> dict:
        def show(x):
            return NOT_FINITE if x is None else x
        return {"xi": self.xi_kind, "xi_exponent": show(self.xi_exponent),
                "akashi_exponent": show(self.akashi_exponent), "snf_exponent": show(self.snf_exponent),
                "higher_correction": self.higher_correction, "xi_not_infinite": self.xi_not_infinite,
                "agree": self.consistent}


def verify_char_element(F, rho: ArtinRep, higher=None) -> CharElementReport:
    """Compare three computations of chi(G, tw(M)) for M = A^r / A^r F.

    The twisted module's H-coinvariants are presented over Lambda_O(Gamma) by
    the blockwise image Phi_rho(F); ``higher`` lists exponents mu_i for
    H_i = O[[T]] / pi^mu_i, i = 1, 2, ...

    1. m * val(xi_M(rho)), xi_M the class of F;
    2. the Euler characteristic of the Akashi series det Phi_rho(F) * prod pi^(-+mu_i);
    3. log_p(#coker / #ker) of Phi_rho(F) at T = 0 by Smith normal form.
    """
    F = _as_matrix(F)
    if not is_torsion_presentation(F):
        raise NotTorsion("presentation does not define an S-torsion module")
    ring = rho.ring
    m = ring.m
    higher = list(higher or [])
    correction = Fraction(0)
    for i, mu_i in enumerate(higher, start=1):
        correction += (-1) ** i * Fraction(mu_i, ring.e)
    correction *= m
    if correction.denominator != 1:
        raise ValidationError("higher pi-powers give a non-integral exponent")

    xi = evaluate_xi(LocalizedElement(F), rho)
    xi_exp = None
    if xi.kind == "finite":
        e = xi.chi_exponent(m)
        if Fraction(e).denominator != 1:
            raise PrecisionError("xi(rho) has non-integral exponent")
        xi_exp = int(e)

    image = phi_rho_matrix(F, rho)
    f0 = det_division_free(image, image[0][0].one())
    factors = [(f0, 1)] if not f0.is_zero() else []
    if f0.is_zero():
        ak_exp = None
    else:
        pi = ring.uniformizer("rational")
        for i, mu_i in enumerate(higher, start=1):
            factors.append((f0.like([pi ** mu_i]), (-1) ** i))
        chi = euler_characteristic(AkashiSeries(factors), m)
        ak_exp = chi.exponent if chi.finite else None

    at_zero = [[ring.padic(x[0] if x[0] is not None else 0) for x in row] for row in image]
    snf = padic_snf(at_zero)
    return CharElementReport(xi.kind, xi_exp, ak_exp, snf.chi_exponent, int(correction))
