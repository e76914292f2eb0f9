"""p-adic valuation of the interpolated L-value and the finiteness/size checks it predicts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonIntegralTotal, PrecisionError, ValidationError
from .padic import INF, ExtensionRing, PadicScalar, hensel_unit_root

VANISHING = "vanishing-L-value"


@dataclass(frozen=True)
class UnitRootData:
    """1 - a_p X + p X^2 = (1 - uX)(1 - wX) with u a unit."""

    u: PadicScalar
    w: PadicScalar
    a_p: int

    def expansion(self):
        """Coefficients of (1 - uX)(1 - wX)."""
        one = self.u.ring.padic(1)
        return [one, -(self.u + self.w), self.u * self.w]

    def check(self) -> bool:
        p = self.u.ring.p
        c = self.expansion()
        return c[1] == self.u.ring.padic(-self.a_p) and c[2] == self.u.ring.padic(p)

    def to_json(self) -> dict:
        N = self.u.ring.N
        return {"u": self.u.coords[0], "w": self.w.coords[0], "modulus": f"{self.u.ring.p}^{N}",
                "val_u": 0, "val_w": int(self.w.val())}


def factor_hecke(p: int, a_p: int, N: int = 20) -> UnitRootData:
    if p < 5:
        raise ValidationError("p >= 5 is required")
    if a_p % p == 0:
        raise ValidationError(f"a_p = {a_p} is not a p-adic unit (reduction is not ordinary)")
    u, w = hensel_unit_root(p, a_p, N)
    data = UnitRootData(u, w, a_p)
    if not data.check():
        raise PrecisionError("unit-root factorization failed to hold mod p^N")
    return data


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (list, tuple)):
        return Fraction(int(x[0]), int(x[1]))
    return Fraction(x)


@dataclass(frozen=True)
class InterpolationInput:
    """Data of the interpolation formula for one Artin representation rho.

    ``lvalue_valuation`` is val_p of L(E, rho, 1) / (Omega_+^d+ Omega_-^d-), or None
    when the L-value vanishes.  ``P_rho`` and ``P_rho_hat`` are coefficient
    lists (constant term first) of the Euler-factor polynomials P_p(rho, X) and
    P_p(rho^, X).
    """

    p: int
    a_p: int
    f_rho: int
    lvalue_valuation: object
    epsilon_valuation: Fraction
    P_rho: tuple = (1,)
    P_rho_hat: tuple = (1,)
    m_rho: int = 1
    d_plus: int = 0
    d_minus: int = 0
    dim: int = None
    name: str = ""

    def __post_init__(self):
        for name in ("lvalue_valuation", "epsilon_valuation"):
            v = getattr(self, name)
            if v is None:
                continue
            if Fraction(v).denominator not in (1, 2):
                raise ValidationError(f"{name} must have denominator dividing 2, got {v}")
        if self.f_rho < 0 or self.d_plus < 0 or self.d_minus < 0:
            raise ValidationError("f_rho, d_plus, d_minus must be non-negative")
        if self.dim is not None and self.d_plus + self.d_minus != self.dim:
            raise ValidationError("d_plus + d_minus must equal dim rho")

    @classmethod
    def from_json(cls, obj) -> "InterpolationInput":
        for key in ("p", "a_p", "f_rho", "lvalue_valuation", "epsilon_valuation"):
            if key not in obj:
                raise ValidationError(f"interpolation input: missing field {key!r}")
        lv = obj["lvalue_valuation"]
        return cls(int(obj["p"]), int(obj["a_p"]), int(obj["f_rho"]),
                   None if lv is None else _frac(lv), _frac(obj["epsilon_valuation"]),
                   tuple(_frac(c) for c in obj.get("P_rho", [1])),
                   tuple(_frac(c) for c in obj.get("P_rho_hat", [1])),
                   int(obj.get("m_rho", 1)), int(obj.get("d_plus", 0)), int(obj.get("d_minus", 0)),
                   obj.get("dim"), obj.get("name", ""))


@dataclass(frozen=True)
class InterpolationResult:
    total: object
    vanishing: bool
    parts: dict
    m_rho: int

    @property
    def chi_exponent(self):
        """Predicted log_p chi(G, tw(X)), None when chi is predicted not finite."""
        return None if self.vanishing else self.m_rho * self.total

    def to_json(self) -> dict:
        if self.vanishing:
            return {"flag": VANISHING, "chi": "not-finite", "parts": self.parts}
        return {"total_valuation": self.total, "chi_exponent": self.chi_exponent,
                "parts": self.parts}


def _val_at_inverse(P, x: PadicScalar) -> Fraction:
    """val of P(1/x) = x^(-d) * sum_i c_i x^(d-i)."""
    ring = x.ring
    d = len(P) - 1
    acc = ring.padic(0)
    for i, c in enumerate(P):
        acc = acc + ring.padic(c) * x ** (d - i)
    v = acc.val()
    if v == INF:
        raise PrecisionError("Euler-factor value is zero within precision")
    # the evaluation loses d * val(x) digits of certainty when val(x) > 0
    if v + d * x.val() >= ring.N:
        raise PrecisionError("Euler-factor value is not determined at this precision")
    return Fraction(v) - d * Fraction(x.val())


def _show(q: Fraction):
    return q.numerator if q.denominator == 1 else str(q)


def interpolate_valuation(data: InterpolationInput, N: int = 20) -> InterpolationResult:
    """val_p of L(rho) = L-value * e_p(rho) * P_p(rho^, u^-1) / P_p(rho, w^-1) * u^(-f_rho)."""
    roots = factor_hecke(data.p, data.a_p, N)
    v_hat = _val_at_inverse(data.P_rho_hat, roots.u)
    v_rho = _val_at_inverse(data.P_rho, roots.w)
    parts = {"epsilon": _show(Fraction(data.epsilon_valuation)),
             "P_rho_hat_at_u_inverse": _show(v_hat), "P_rho_at_w_inverse": _show(v_rho),
             "u_power": 0}
    if data.lvalue_valuation is None:
        return InterpolationResult(None, True, parts, data.m_rho)
    parts["lvalue"] = _show(Fraction(data.lvalue_valuation))
    total = Fraction(data.lvalue_valuation) + Fraction(data.epsilon_valuation) + v_hat - v_rho
    if total.denominator != 1:
        raise NonIntegralTotal(f"total valuation {total} is not an integer")
    return InterpolationResult(int(total), False, parts, data.m_rho)


@dataclass(frozen=True)
class CorollaryReport:
    passed: bool
    predicted: object
    claimed: object
    reason: str

    def to_json(self) -> dict:
        return {"pass": self.passed, "predicted": self.predicted, "claimed": self.claimed,
                "reason": self.reason}


def check_corollaries(data: InterpolationInput, chi_claim) -> CorollaryReport:
    """``chi_claim``: exponent k of a claimed chi = p^k, or "not-finite"."""
    res = interpolate_valuation(data)
    claim_finite = chi_claim != "not-finite"
    if res.vanishing or not claim_finite:
        ok = res.vanishing and not claim_finite
        why = "finiteness agrees with the L-value" if ok else "finiteness disagrees with the L-value"
        return CorollaryReport(ok, "not-finite" if res.vanishing else res.chi_exponent, chi_claim, why)
    ok = int(chi_claim) == res.chi_exponent
    return CorollaryReport(ok, res.chi_exponent, int(chi_claim),
                           "exponents agree" if ok else "exponents differ")
