"""Finite-level model of Lambda(G): a cocycle-twisted group algebra of Q = (G/J)/Pi.

G/J contains a central Pi = Z_p (generator pi_0 <-> 1 + T0) with finite
quotient Q.  Every element is sum_q a_q(T0) s(q), and

    s(q) s(q') = (1 + T0)^tau(q, q') s(qq').

Pi maps onto p^k Z_p inside Gamma = Z_p.  ``weight`` records the image of
s(q) in Gamma / Pi = Z/p^k; with lifts w(q) in [0, p^k) the section sends s(q)
to gamma_0^w(q), which forces tau(q, q') = (w(q) + w(q') - w(qq')) / p^k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import ExactBackendRequired, NotInS, ValidationError
from .function_field import FpPoly, FpRational, ff_det
from .iwasawa_series import DEFAULT_TRUNCATION, IwasawaSeries
from .linalg import block_matrix, det_division_free
from .padic import INF, ExtensionRing, PadicContext, PadicScalar


class FiniteLevelGroup:
    """Q with its multiplication table, Gamma-weights and the induced cocycle."""

    def __init__(self, p: int, pk: int, elements, table, weight=None, cocycle=None):
        self.p = int(p)
        self.pk = int(pk)
        if self.pk < 1 or not _is_power(self.pk, self.p):
            raise ValidationError(f"pk must be a power of p = {p}, got {pk}")
        self.elements = [str(e) for e in elements]
        n = len(self.elements)
        if n == 0:
            raise ValidationError("group has no elements")
        if len(set(self.elements)) != n:
            raise ValidationError("group element labels are not distinct")
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.mul = self._parse_table(table)
        self._validate_group()
        w = weight or {}
        self.weight = [int(w.get(e, 0)) % self.pk for e in self.elements]
        for a in range(n):
            for b in range(n):
                if (self.weight[a] + self.weight[b] - self.weight[self.mul[a][b]]) % self.pk:
                    raise ValidationError(
                        f"weight is not a homomorphism to Z/{self.pk}: "
                        f"w({self.elements[a]}) + w({self.elements[b]}) != w({self.elements[self.mul[a][b]]})")
        carry = [[(self.weight[a] + self.weight[b] - self.weight[self.mul[a][b]]) // self.pk
                  for b in range(n)] for a in range(n)]
        if cocycle is None:
            self.tau = carry
        else:
            self.tau = [[0] * n for _ in range(n)]
            for key, v in cocycle.items():
                a, b = (self.index[x.strip()] for x in key.split(","))
                self.tau[a][b] = int(v)
            for a, b in itertools.product(range(n), repeat=2):
                if self.tau[a][b] != carry[a][b]:
                    raise ValidationError(
                        f"cocycle value tau({self.elements[a]},{self.elements[b]}) = {self.tau[a][b]} "
                        f"differs from the Gamma-carry {carry[a][b]} of the weights")
        self._validate_cocycle()

    def _parse_table(self, table):
        n = len(self.elements)
        if len(table) != n or any(len(row) != n for row in table):
            raise ValidationError(f"multiplication table must be {n}x{n}")
        out = []
        for row in table:
            r = []
            for x in row:
                key = x if isinstance(x, str) else None
                if key is None:
                    if not 0 <= int(x) < n:
                        raise ValidationError(f"table entry {x} out of range (closure)")
                    r.append(int(x))
                else:
                    if key not in self.index:
                        raise ValidationError(f"table entry {key!r} is not an element (closure)")
                    r.append(self.index[key])
            out.append(r)
        return out

    def _validate_group(self):
        n = len(self.elements)
        mul = self.mul
        ids = [e for e in range(n) if all(mul[e][x] == x and mul[x][e] == x for x in range(n))]
        if not ids:
            raise ValidationError("group axiom violated: no identity element")
        self.identity = ids[0]
        self.inv = []
        for a in range(n):
            inv = [b for b in range(n) if mul[a][b] == self.identity and mul[b][a] == self.identity]
            if not inv:
                raise ValidationError(f"group axiom violated: {self.elements[a]} has no inverse")
            self.inv.append(inv[0])
        for a, b, c in itertools.product(range(n), repeat=3):
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                raise ValidationError(
                    f"group axiom violated: associativity fails for "
                    f"({self.elements[a]}, {self.elements[b]}, {self.elements[c]})")

    def _validate_cocycle(self):
        n = len(self.elements)
        t, mul = self.tau, self.mul
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[a][b] + t[mul[a][b]][c] != t[b][c] + t[a][mul[b][c]]:
                raise ValidationError("cocycle condition fails for "
                                      f"({self.elements[a]}, {self.elements[b]}, {self.elements[c]})")

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (isinstance(other, FiniteLevelGroup) and self.p == other.p and self.pk == other.pk
                and self.elements == other.elements and self.mul == other.mul
                and self.weight == other.weight)

    def __hash__(self):
        return hash((self.p, self.pk, tuple(self.elements)))

    def __repr__(self):
        return f"FiniteLevelGroup(p={self.p}, pk={self.pk}, |Q|={len(self)})"

    @property
    def k(self) -> int:
        k, x = 0, self.pk
        while x > 1:
            x //= self.p
            k += 1
        return k

    def to_json(self) -> dict:
        n = len(self)
        cocycle = {f"{self.elements[a]},{self.elements[b]}": self.tau[a][b]
                   for a in range(n) for b in range(n) if self.tau[a][b]}
        return {"p": self.p, "pk": self.pk, "elements": list(self.elements),
                "table": [[self.elements[x] for x in row] for row in self.mul],
                "weight": {e: w for e, w in zip(self.elements, self.weight) if w},
                "cocycle": cocycle}

    @classmethod
    def from_json(cls, obj) -> "FiniteLevelGroup":
        for key in ("p", "elements", "table"):
            if key not in obj:
                raise ValidationError(f"group: missing field {key!r}")
        return cls(obj["p"], obj.get("pk", 1), obj["elements"], obj["table"],
                   obj.get("weight"), obj.get("cocycle"))

    # standard examples ---------------------------------------------------------

    @classmethod
    def trivial(cls, p):
        return cls(p, 1, ["1"], [["1"]])

    @classmethod
    def cyclic(cls, n: int, p: int, pk: int = 1, weights=False):
        """Z/n; with ``weights=True`` (n = pk) the generator has weight 1, so G/J = Z_p."""
        els = ["1"] + [f"g{i}" if i > 1 else "g" for i in range(1, n)]
        table = [[els[(i + j) % n] for j in range(n)] for i in range(n)]
        weight = {els[i]: i for i in range(n)} if weights else None
        return cls(p, pk, els, table, weight)

    @classmethod
    def symmetric3(cls, p: int):
        perms = list(itertools.permutations(range(3)))
        perms.sort(key=lambda s: (s != (0, 1, 2), s))
        labels = ["".join(map(str, s)) for s in perms]
        idx = {s: i for i, s in enumerate(perms)}
        table = [[labels[idx[tuple(a[b[i]] for i in range(3))]] for b in perms] for a in perms]
        return cls(p, 1, labels, table)

    @classmethod
    def product(cls, A: "FiniteLevelGroup", B: "FiniteLevelGroup"):
        """A x B with weights added (B must have pk = 1 or A trivial weights)."""
        if A.p != B.p:
            raise ValidationError("product of groups over different primes")
        pk = max(A.pk, B.pk)
        els = [f"{a}*{b}" for a in A.elements for b in B.elements]
        nb = len(B)
        table = [[els[A.mul[i // nb][j // nb] * nb + B.mul[i % nb][j % nb]] for j in range(len(els))]
                 for i in range(len(els))]
        weight = {els[i * nb + j]: A.weight[i] * (pk // A.pk) + B.weight[j] * (pk // B.pk)
                  for i in range(len(A)) for j in range(nb)}
        return cls(A.p, pk, els, table, weight)


def _is_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _base_ring(p, N=20) -> ExtensionRing:
    return ExtensionRing(PadicContext(p, N))


class CrossedElement:
    """sum_q a_q(T0) s(q) with coefficients in Lambda(Pi) = Z_p[[T0]]."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteLevelGroup, coeffs):
        """``coeffs``: sequence (one IwasawaSeries per element) or dict label -> IwasawaSeries."""
        if isinstance(coeffs, dict):
            unknown = set(coeffs) - set(group.index)
            if unknown:
                raise ValidationError(f"element coefficients name unknown group elements {sorted(unknown)}")
            series = [s for s in coeffs.values() if isinstance(s, IwasawaSeries)]
            proto = series[0] if series else IwasawaSeries(_base_ring(group.p), (), None)
            coeffs = [_as_series(coeffs.get(e, 0), proto) for e in group.elements]
        else:
            coeffs = list(coeffs)
            if len(coeffs) != len(group):
                raise ValidationError("one coefficient per group element is required")
            proto = next((s for s in coeffs if isinstance(s, IwasawaSeries)), None) \
                or IwasawaSeries(_base_ring(group.p), (), None)
            coeffs = [_as_series(c, proto) for c in coeffs]
        ring = coeffs[0].ring
        if not ring.is_prime_ring or ring.p != group.p:
            raise ValidationError("crossed-product coefficients must lie in Z_p[[T0]] for the group's p")
        for c in coeffs[1:]:
            coeffs[0]._check(c)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, key, value):
        raise AttributeError("CrossedElement is immutable")

    @classmethod
    def basis(cls, group, label, proto: IwasawaSeries = None):
        """The group-like element s(label)."""
        proto = proto or IwasawaSeries(_base_ring(group.p), (), None)
        return cls(group, {label: proto.one()})

    @classmethod
    def scalar(cls, group, c, proto: IwasawaSeries = None):
        proto = proto or IwasawaSeries(_base_ring(group.p), (), None)
        return cls(group, {group.elements[group.identity]: proto.like((c,)) if not isinstance(c, IwasawaSeries) else c})

    @property
    def proto(self) -> IwasawaSeries:
        return self.coeffs[0]

    @property
    def backend(self):
        return self.proto.backend

    @property
    def ring(self):
        return self.proto.ring

    def _lift(self, other) -> "CrossedElement":
        if isinstance(other, CrossedElement):
            if other.group != self.group:
                raise ValidationError("elements of different finite-level algebras")
            return other
        return CrossedElement.scalar(self.group, other, self.proto)

    def __add__(self, other):
        o = self._lift(other)
        return CrossedElement(self.group, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CrossedElement(self.group, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, CrossedElement):
            if isinstance(other, IwasawaSeries):
                return CrossedElement(self.group, [a * other for a in self.coeffs])
            return CrossedElement(self.group, [a * other for a in self.coeffs])
        o = self._lift(other)
        G = self.group
        out = [self.proto.zero() for _ in range(len(G))]
        shifts = {}
        for a, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for b, y in enumerate(o.coeffs):
                if y.is_zero():
                    continue
                t = G.tau[a][b]
                term = x * y
                if t:
                    if t not in shifts:
                        shifts[t] = _one_plus_T(self.proto) ** t
                    term = term * shifts[t]
                c = G.mul[a][b]
                out[c] = out[c] + term
        return CrossedElement(G, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined in Lambda(G/J)")
        result = CrossedElement.scalar(self.group, 1, self.proto)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, CrossedElement):
            return self.group == other.group and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"{c!r}*s({e})" for e, c in zip(self.group.elements, self.coeffs) if not c.is_zero()]
        return " + ".join(terms) or "0"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    @property
    def is_exact_polynomial(self) -> bool:
        return all(c.exact for c in self.coeffs)

    def p_content(self):
        """Minimal valuation over all coefficients (INF for zero)."""
        return min((c.min_valuation() for c in self.coeffs), default=INF)

    def to_json(self) -> dict:
        return {"coeffs": {e: c.to_json() for e, c in zip(self.group.elements, self.coeffs)
                           if not c.is_zero()}}

    @classmethod
    def from_json(cls, obj, group: FiniteLevelGroup, D=None, backend="rational", precision=20):
        coeffs = obj.get("coeffs", obj) if isinstance(obj, dict) else obj
        if not isinstance(coeffs, dict):
            raise ValidationError("element: 'coeffs' must map group labels to series")
        ring = _base_ring(group.p, precision)
        out = {}
        for label, s in coeffs.items():
            if label not in group.index:
                raise ValidationError(f"element: unknown group label {label!r}")
            out[label] = IwasawaSeries.from_json(s, ring, D, backend)
        if not out:
            out[group.elements[group.identity]] = IwasawaSeries(ring, (), D, backend)
        return cls(group, out)


def _as_series(c, proto: IwasawaSeries) -> IwasawaSeries:
    if isinstance(c, IwasawaSeries):
        return c
    if isinstance(c, (list, tuple)):
        return proto.like(c)
    return proto.like((c,))


def _one_plus_T(proto: IwasawaSeries) -> IwasawaSeries:
    return proto.like((1, 1))


def crossed_basis(group, label, proto=None) -> CrossedElement:
    return CrossedElement.basis(group, label, proto)


# ------------------------------------------------------------------------------
# Ore-set tests over V(G/J) = F_p(T0) (x) Omega(G/J)
# ------------------------------------------------------------------------------

class OreWitness(NamedTuple):
    in_S: bool
    det: FpRational


def _reduce_mod_p(s: IwasawaSeries) -> FpPoly:
    p = s.ring.p
    if not s.exact:
        raise ExactBackendRequired("Ore tests need polynomial (untruncated) coefficients")
    cs = []
    for c in s.coeffs:
        if isinstance(c, PadicScalar):
            cs.append(c.coords[0])
        else:
            q = Fraction(c)
            if q.denominator % p == 0:
                raise ValidationError(f"coefficient {q} is not p-integral; elements must lie in Lambda(G)")
            cs.append(q.numerator * pow(q.denominator, -1, p))
    return FpPoly(p, cs)


def multiplication_matrix(f: CrossedElement, side: str = "right"):
    """Matrix over F_p(T0) of x -> x f (side='right') or x -> f x on the basis s(q).

    Rows are indexed by the input basis vector, columns by output coordinates.
    """
    G = f.group
    p = G.p
    n = len(G)
    red = [_reduce_mod_p(c) for c in f.coeffs]
    shift = FpPoly(p, (1, 1))
    zero = FpRational(FpPoly(p))
    M = [[zero] * n for _ in range(n)]
    for b in range(n):  # input basis s(b)
        for a, coef in enumerate(red):
            if coef.is_zero():
                continue
            if side == "right":
                t, c = G.tau[b][a], G.mul[b][a]
            else:
                t, c = G.tau[a][b], G.mul[a][b]
            M[b][c] = M[b][c] + FpRational(coef * shift ** t)
    return M


def ore_s_test(f: CrossedElement) -> OreWitness:
    """f in S iff right multiplication by f mod p is injective on Omega(G/J)."""
    d = ff_det(multiplication_matrix(f, "right"), f.group.p)
    return OreWitness(not d.is_zero(), d)


def ore_left_test(f: CrossedElement) -> OreWitness:
    d = ff_det(multiplication_matrix(f, "left"), f.group.p)
    return OreWitness(not d.is_zero(), d)


def peel_p(f: CrossedElement):
    """f = p^n f' with f' having a p-unit coefficient; returns (n, f')."""
    if f.is_zero():
        raise ValidationError("the zero element is not in S*")
    v = f.p_content()
    if v < 0 or Fraction(v).denominator != 1:
        raise ValidationError("element is not p-integral")
    n = int(v)
    if n == 0:
        return 0, f
    scale = Fraction(1, f.group.p ** n)
    if f.backend == "padic":
        return n, CrossedElement(f.group, [c.like([x.divide_by_p(n) for x in c.coeffs]) for c in f.coeffs])
    return n, f * scale


def ore_sstar_test(f: CrossedElement):
    """(f in S*, number of p-factors peeled)."""
    n, g = peel_p(f)
    return ore_s_test(g).in_S, n


def presentation_matrix(F, side="right"):
    """Block matrix over F_p(T0) of x -> x F on A^r (rows = input blocks)."""
    r = len(F)
    if any(len(row) != r for row in F):
        raise ValidationError("presentation matrix must be square")
    return block_matrix([[multiplication_matrix(F[i][j], side) for j in range(r)] for i in range(r)])


def is_torsion_presentation(F) -> bool:
    """True iff coker(x -> x F) on A^r is S-torsion (full rank over V(G/J))."""
    if not F:
        return True
    p = F[0][0].group.p
    return not ff_det(presentation_matrix(F), p).is_zero()


# ------------------------------------------------------------------------------
# Base change to Lambda(Gamma) and the maps Phi_rho
# ------------------------------------------------------------------------------

def _pi_image(proto: IwasawaSeries, pk: int, c=None) -> IwasawaSeries:
    """Image of T0 = pi_0 - 1, i.e. (c(1+T))^pk - 1."""
    base = proto.like((1, 1)) if c is None else proto.like((c, c))
    return base ** pk - 1


def gamma_pushforward(x: CrossedElement, D="same") -> IwasawaSeries:
    """H-coinvariant base change Lambda(G/J) -> Lambda(Gamma)."""
    G = x.group
    proto = x.proto if D == "same" else x.proto.with_truncation(D)
    inner = _pi_image(proto, G.pk)
    gamma = proto.like((1, 1))
    out = proto.zero()
    for q, a in enumerate(x.coeffs):
        if a.is_zero():
            continue
        a = a if D == "same" else a.with_truncation(D)
        out = out + a.compose(inner) * gamma ** G.weight[q]
    return out


def _matrix_ring_elements(rows, ring: ExtensionRing):
    return [[ring.exact(v) for v in row] for row in rows]


def _mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(k)), A[0][0] * 0) for j in range(m)] for i in range(n)]


@dataclass
class ArtinRep:
    """rho: Q -> GL_n(O), trivial on Pi, optionally times a character eta of Gamma.

    ``gamma_character`` is the value eta(gamma_0) (None for the trivial character).
    """

    group: FiniteLevelGroup
    ring: ExtensionRing
    matrices: dict
    gamma_character: object = None
    dim: int = field(init=False)

    def __post_init__(self):
        G = self.group
        missing = [e for e in G.elements if e not in self.matrices]
        if missing:
            raise ValidationError(f"representation: no matrix for elements {missing}")
        mats = {e: _matrix_ring_elements(self.matrices[e], self.ring) for e in G.elements}
        dims = {len(m) for m in mats.values()} | {len(r) for m in mats.values() for r in m}
        if len(dims) != 1:
            raise ValidationError("representation: matrices must be square of one common size")
        self.dim = dims.pop()
        self.matrices = mats
        n = self.dim
        ident = mats[G.elements[G.identity]]
        for i in range(n):
            for j in range(n):
                if ident[i][j] != (1 if i == j else 0):
                    raise ValidationError("representation: rho(identity) is not the identity matrix")
        for m in mats.values():
            for row in m:
                for v in row:
                    if self.ring.val(v) < 0:
                        raise ValidationError("representation: matrix entries must be integral over O")
        for a in range(len(G)):
            for b in range(len(G)):
                lhs = _mat_mul(mats[G.elements[a]], mats[G.elements[b]])
                rhs = mats[G.elements[G.mul[a][b]]]
                if lhs != rhs:
                    raise ValidationError(
                        f"representation: homomorphism fails for ({G.elements[a]}, {G.elements[b]}) "
                        "(matrices must factor through Q, i.e. be trivial on Pi)")
        if self.gamma_character is not None:
            c = self.ring.exact(self.gamma_character)
            if self.ring.val(c) != 0:
                raise ValidationError("gamma_character must be a unit of O")
            self.gamma_character = c

    def __call__(self, label):
        return self.matrices[label]

    @property
    def m(self) -> int:
        return self.ring.m

    def contragredient(self) -> "ArtinRep":
        G = self.group
        mats = {}
        for e in G.elements:
            inv = self.matrices[G.elements[G.inv[G.index[e]]]]
            mats[e] = [[inv[j][i] for j in range(self.dim)] for i in range(self.dim)]
        c = None if self.gamma_character is None else 1 / self.gamma_character
        return ArtinRep(G, self.ring, mats, c)

    def twisted(self, c) -> "ArtinRep":
        """rho * eta with eta(gamma_0) = c (composed with any existing character)."""
        c = self.ring.exact(c)
        if self.gamma_character is not None:
            c = c * self.gamma_character
        return ArtinRep(self.group, self.ring, self.matrices, c)

    @classmethod
    def trivial(cls, group, ring=None):
        ring = ring or _base_ring(group.p)
        return cls(group, ring, {e: [[1]] for e in group.elements})

    @classmethod
    def character(cls, group, values: dict, ring=None):
        ring = ring or _base_ring(group.p)
        return cls(group, ring, {e: [[values[e]]] for e in group.elements})

    def to_json(self) -> dict:
        from .iwasawa_series import _scalar_json
        out = {"dim": self.dim,
               "matrices": {e: [[_scalar_json(v) for v in row] for row in m] for e, m in self.matrices.items()},
               "gamma_character": None if self.gamma_character is None else _scalar_json(self.gamma_character)}
        if not self.ring.is_prime_ring:
            out["ring"] = self.ring.to_json()
        return out

    @classmethod
    def from_json(cls, obj, group, ring=None):
        from .iwasawa_series import _parse_scalar
        if "ring" in obj:
            ring = ExtensionRing.from_json(obj["ring"], default_p=group.p)
        ring = ring or _base_ring(group.p)
        if "matrices" not in obj:
            raise ValidationError("representation: missing field 'matrices'")
        mats = {e: [[_parse_scalar(v, ring) for v in row] for row in m] for e, m in obj["matrices"].items()}
        rep = cls(group, ring, mats, None if obj.get("gamma_character") is None
                  else _parse_scalar(obj["gamma_character"], ring))
        if "dim" in obj and obj["dim"] != rep.dim:
            raise ValidationError(f"representation: declared dim {obj['dim']} != matrix size {rep.dim}")
        return rep


def phi_rho(x: CrossedElement, rho: ArtinRep):
    """Phi_rho(x) in M_n(O[[T]]): s(q) -> rho(q) eta(gamma_0)^w(q) (1+T)^w(q), 1+T0 -> (eta(gamma_0)(1+T))^pk."""
    G = x.group
    if rho.group != G:
        raise ValidationError("phi_rho: representation is defined on a different group")
    O = rho.ring
    proto = x.proto.with_ring(O)
    c = rho.gamma_character
    one_plus = proto.like((1, 1)) if c is None else proto.like((c, c))
    inner = one_plus ** G.pk - 1
    n = rho.dim
    out = [[proto.zero() for _ in range(n)] for _ in range(n)]
    for q, a in enumerate(x.coeffs):
        if a.is_zero():
            continue
        image = a.with_ring(O).compose(inner) * one_plus ** G.weight[q]
        mat = rho.matrices[G.elements[q]]
        for i in range(n):
            for j in range(n):
                if mat[i][j] != 0:
                    out[i][j] = out[i][j] + image * mat[i][j]
    return out


def phi_rho_matrix(F, rho: ArtinRep):
    """Blockwise Phi_rho of a square matrix of crossed elements."""
    if isinstance(F, CrossedElement):
        return phi_rho(F, rho)
    return block_matrix([[phi_rho(x, rho) for x in row] for row in F])


# ------------------------------------------------------------------------------
# K_1 representatives and their evaluation
# ------------------------------------------------------------------------------

def _as_matrix(x):
    return [[x]] if isinstance(x, CrossedElement) else [list(r) for r in x]


def _first(x) -> CrossedElement:
    return x if isinstance(x, CrossedElement) else x[0][0]


class LocalizedElement:
    """p^(-p_exponent) * num * den^(-1), a representative of a class in K_1(Lambda(G)_{S*}).

    ``numerator``/``denominator`` are crossed elements or square matrices of them
    (a matrix stands for its class in K_1).
    """

    def __init__(self, numerator, denominator=None, p_exponent: int = 0, check=True):
        num = _as_matrix(numerator)
        G = _first(numerator).group
        if denominator is None:
            one = CrossedElement.scalar(G, 1, _first(numerator).proto)
            r = len(num)
            denominator = [[one if i == j else one * 0 for j in range(r)] for i in range(r)]
        den = _as_matrix(denominator)
        self.numerator = num
        self.denominator = den
        self.p_exponent = int(p_exponent)
        self.group = G
        if check and all(x.is_exact_polynomial for row in den for x in row):
            if not is_torsion_presentation(den):
                raise NotInS("denominator does not pass the Ore-set test")

    def __repr__(self):
        return f"LocalizedElement(num={self.numerator}, den={self.denominator}, p^-{self.p_exponent})"

    @classmethod
    def of(cls, x, p_exponent=0):
        return cls(x, None, p_exponent)


@dataclass(frozen=True)
class PhiDet:
    """Phi'_rho(xi) = p^(-p_shift) * num / den."""

    num: IwasawaSeries
    den: IwasawaSeries
    p_shift: int

    @property
    def exact(self) -> bool:
        return self.num.backend == "rational" and self.num.exact and self.den.exact

    def reduced(self):
        """(num, den) with common polynomial factors cancelled (exact backend only)."""
        if not self.exact:
            raise ExactBackendRequired("cancellation needs exact polynomial determinants")
        g = self.num.with_truncation(None).poly_gcd(self.den.with_truncation(None))
        n, _ = self.num.with_truncation(None).poly_divmod(g)
        d, _ = self.den.with_truncation(None).poly_divmod(g)
        return n, d

    def twisted(self, c) -> "PhiDet":
        from .iwasawa_series import twist_substitute
        return PhiDet(twist_substitute(self.num, c), twist_substitute(self.den, c), self.p_shift)


def phi_rho_det(xi: LocalizedElement, rho: ArtinRep) -> PhiDet:
    num = det_division_free(phi_rho_matrix(xi.numerator, rho), _one_like(xi.numerator, rho))
    den = det_division_free(phi_rho_matrix(xi.denominator, rho), _one_like(xi.denominator, rho))
    if den.is_zero():
        raise NotInS("Phi_rho of the denominator is singular: denominator is not in S")
    return PhiDet(num, den, rho.dim * xi.p_exponent)


def _one_like(mat, rho):
    return _first(mat).proto.with_ring(rho.ring).one()


@dataclass(frozen=True)
class XiValue:
    """xi(rho): kind is 'finite', 'zero' or 'infinity'."""

    kind: str
    value: object = None
    valuation: object = None

    def chi_exponent(self, m: int):
        """log_p of |xi(rho)|_p^(-m), or None when xi(rho) is 0 or infinity."""
        if self.kind != "finite":
            return None
        return m * self.valuation

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "finite":
            v = Fraction(self.valuation)
            out["valuation"] = v.numerator if v.denominator == 1 else str(v)
            out["value"] = str(self.value)
        return out


def evaluate_phi(phi: PhiDet, ring: ExtensionRing) -> XiValue:
    p = ring.p
    if phi.exact:
        num, den = phi.reduced()
        d0, n0 = den[0], num[0]
        if d0 == 0:
            return XiValue("infinity")
        if n0 == 0:
            return XiValue("zero")
        value = n0 / d0 * Fraction(1, p ** phi.p_shift) if phi.p_shift >= 0 else \
            n0 / d0 * p ** (-phi.p_shift)
        return XiValue("finite", value, ring.val(value))
    n0, d0 = phi.num[0], phi.den[0]
    vd, vn = ring.val(d0), ring.val(n0)
    if vd == INF or vn == INF:
        raise ExactBackendRequired("deciding xi(rho) needs cancellation; use the rational backend")
    val = vn - vd - phi.p_shift
    return XiValue("finite", (n0, d0, phi.p_shift), val)


def evaluate_xi(xi: LocalizedElement, rho: ArtinRep) -> XiValue:
    """xi(rho) = augmentation of Phi'_rho(xi), or 0 / infinity."""
    return evaluate_phi(phi_rho_det(xi, rho), rho.ring)


def _content_and_lambda(f: IwasawaSeries):
    vals = [f.ring.val(c) for c in f.coeffs]
    vmin = min(vals)
    return vmin, vals.index(vmin)


def integrality_of(num: IwasawaSeries, den: IwasawaSeries, p_shift: int = 0) -> dict:
    """Membership of p^(-p_shift) num/den in A1 = O[[T]], A2 = O[[T]][1/p] and their unit groups."""
    phi = PhiDet(num, den, p_shift)
    n, d = phi.reduced()
    vn, lam_n = _content_and_lambda(n)
    vd, lam_d = _content_and_lambda(d)
    total = vn - vd - p_shift
    in_a2 = lam_d == 0
    in_a1 = in_a2 and total >= 0
    unit_a2 = in_a2 and lam_n == 0
    unit_a1 = unit_a2 and total == 0
    t = Fraction(total)
    return {"A1": in_a1, "A2": in_a2, "A1_units": unit_a1, "A2_units": unit_a2,
            "p_exponent": t.numerator if t.denominator == 1 else str(t),
            "lambda_num": lam_n, "lambda_den": lam_d}


def integrality_check(xi: LocalizedElement, rho: ArtinRep) -> dict:
    phi = phi_rho_det(xi, rho)
    return integrality_of(phi.num, phi.den, phi.p_shift)
