"""Arithmetic Euler-characteristic formula and Artin formalism, on exponents of p."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NoConsistentSolution, ValidationError
from .padic import v_p


def p_power_exponent(n: int, p: int, what: str = "value") -> int:
    """k with n = p^k; raises ValidationError if n is not a power of p."""
    n = int(n)
    if n <= 0:
        raise ValidationError(f"{what} must be a positive integer, got {n}")
    k = v_p(n, p)
    if p ** k != n:
        raise ValidationError(f"{what} = {n} is not a power of p = {p}")
    return k


@dataclass(frozen=True)
class FieldArithmeticData:
    """Orders entering the Euler characteristic of the Selmer dual over K.

    ``bad_places`` holds the local degrees d_v at places of bad reduction;
    ``good_places`` holds #E~_v(k_v)(p) at the places above p.
    """

    p: int
    torsion_order: int
    sha_order: int
    bad_places: tuple = ()
    good_places: tuple = ()
    name: str = ""

    def __post_init__(self):
        if self.p < 5:
            raise ValidationError("the arithmetic formula needs p >= 5")
        if self.torsion_order <= 0:
            raise ValidationError("torsion_order must be positive")
        for d in self.bad_places:
            if int(d) <= 0:
                raise ValidationError(f"bad_places: local degree {d} must be positive")

    @classmethod
    def from_json(cls, obj) -> "FieldArithmeticData":
        for key in ("p", "torsion_order", "sha_order"):
            if key not in obj:
                raise ValidationError(f"field data: missing field {key!r}")
        return cls(int(obj["p"]), int(obj["torsion_order"]), int(obj["sha_order"]),
                   tuple(int(d) for d in obj.get("bad_places", ())),
                   tuple(int(c) for c in obj.get("good_places", ())), obj.get("name", ""))

    def to_json(self) -> dict:
        return {"p": self.p, "torsion_order": self.torsion_order, "sha_order": self.sha_order,
                "bad_places": list(self.bad_places), "good_places": list(self.good_places),
                "name": self.name}


def chi_formula(data: FieldArithmeticData) -> int:
    """Exponent k of chi = p^k = #Sha(p) / #E(K)(p)^2 * prod_bad p |d_v|_p^-1 * prod_{v|p} #E~_v(k_v)(p)^2."""
    p = data.p
    k = p_power_exponent(data.sha_order, p, "sha_order")
    k -= 2 * p_power_exponent(data.torsion_order, p, "torsion_order")
    for d in data.bad_places:
        k += 1 + v_p(int(d), p)
    for c in data.good_places:
        k += 2 * p_power_exponent(c, p, "good_places entry")
    return k


@dataclass(frozen=True)
class Irreducible:
    """``count`` irreducible twists of dimension ``dim`` whose chi-exponents sum to ``chi_exponent``.

    ``count > 1`` lets a block of characters be given by the product of their
    Euler characteristics when only that product is known.  ``chi_exponent``
    is None for the unknown.
    """

    dim: int
    chi_exponent: object = None
    count: int = 1
    label: str = ""


@dataclass(frozen=True)
class ArtinDecomposition:
    subgroup_chi: int
    base_field_degree: int = 1
    irreducibles: tuple = field(default_factory=tuple)
    group_order: int = None

    def __post_init__(self):
        if self.base_field_degree < 1:
            raise ValidationError("base_field_degree must be positive")
        for r in self.irreducibles:
            if r.dim < 1 or r.count < 1:
                raise ValidationError("irreducible dimensions and counts must be positive")
        if self.group_order is not None:
            total = sum(r.count * r.dim ** 2 for r in self.irreducibles)
            if total != self.group_order:
                raise ValidationError(
                    f"sum of n_rho^2 = {total} does not equal the group order {self.group_order}")

    @classmethod
    def from_json(cls, obj) -> "ArtinDecomposition":
        if "subgroup_chi" not in obj:
            raise ValidationError("decomposition: missing field 'subgroup_chi'")
        irr = []
        for i, r in enumerate(obj.get("irreducibles", [])):
            if "dim" not in r:
                raise ValidationError(f"irreducibles[{i}]: missing field 'dim'")
            irr.append(Irreducible(int(r["dim"]), r.get("chi_exponent"), int(r.get("count", 1)),
                                   r.get("label", "")))
        return cls(int(obj["subgroup_chi"]), int(obj.get("base_field_degree", 1)), tuple(irr),
                   obj.get("group_order"))

    def _sides(self):
        lhs = self.subgroup_chi * self.base_field_degree
        known = sum(r.dim * r.chi_exponent for r in self.irreducibles if r.chi_exponent is not None)
        unknown = [r for r in self.irreducibles if r.chi_exponent is None]
        return lhs, known, unknown


def artin_check(decomp: ArtinDecomposition) -> bool:
    """chi(G', M)^[L:Q_p] == prod chi(G, tw_rho M)^n_rho, compared on exponents."""
    lhs, known, unknown = decomp._sides()
    if unknown:
        raise ValidationError("artin_check needs every twisted Euler characteristic")
    return lhs == known


def artin_solve(decomp: ArtinDecomposition) -> int:
    """Exponent of the single unknown twisted Euler characteristic."""
    lhs, known, unknown = decomp._sides()
    if len(unknown) != 1:
        raise ValidationError(f"artin_solve needs exactly one unknown, found {len(unknown)}")
    r = unknown[0]
    residual = lhs - known
    if residual % r.dim:
        raise NoConsistentSolution(
            f"residual exponent {residual} is not divisible by n_rho = {r.dim}")
    # a block of count > 1 only determines the total exponent
    return residual // r.dim
