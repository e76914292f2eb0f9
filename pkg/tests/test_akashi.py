import random

import pytest

from iwk.akashi import (AkashiSeries, TorsionModuleData, akashi_series, bad_twist_scan, char_series,
                        euler_characteristic, twist_module, verify_char_element)
from iwk.crossed_product import ArtinRep, CrossedElement, FiniteLevelGroup
from iwk.errors import ExactBackendRequired, NotTorsion
from iwk.iwasawa_series import IwasawaSeries, cyclotomic_shift
from iwk.padic import ExtensionRing
from iwk.sampling import random_poly

P = 5
ZP = ExtensionRing.zp(P)


def s(*c):
    return IwasawaSeries(ZP, c, None)


T = s(0, 1)


def module(*fs):
    return TorsionModuleData(list(fs), ZP)


def chi(*fs):
    return euler_characteristic(akashi_series(module(*fs)))


def canon(fs):
    c = akashi_series(module(*fs)).canonical().to_json()
    return c["mu"], c["numerator"]["coeffs"], c["denominator"]["coeffs"]


def cofactor_det(M):
    if len(M) == 1:
        return M[0][0]
    acc = M[0][0].zero()
    for j in range(len(M)):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * cofactor_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


class TestCharSeries:
    def test_diagonal(self):
        f = char_series([[T, s()], [s(), s(5)]])
        assert f == s(0, 5)
        assert canon([f]) == (1, [0, 1], [1])

    def test_triangular(self):
        assert char_series([[T, s(1)], [s(), T]]) == s(0, 0, 1)

    def test_zero_rejected(self):
        with pytest.raises(NotTorsion):
            char_series([[T, T], [T, T]])

    def test_random_against_cofactor_and_unimodular_ops(self):
        rng = random.Random(7)
        for _ in range(20):
            n = rng.randint(2, 3)
            M = [[random_poly(rng, ZP) for _ in range(n)] for _ in range(n)]
            if cofactor_det(M).is_zero():
                continue
            d = char_series(M)
            assert d == cofactor_det(M)
            i, j = rng.sample(range(n), 2)
            k = random_poly(rng, ZP)
            M[i] = [a + k * b for a, b in zip(M[i], M[j])]
            assert char_series(M) == d


class TestAkashi:
    def test_canonical_examples(self):
        assert canon([s(5, 1)]) == (0, [5, 1], [1])
        assert canon([s(0, 0, 1), T]) == (0, [0, 1], [1])
        assert canon([s(0, 5), s(5)]) == (0, [0, 1], [1])

    def test_equality_modulo_units(self):
        a = akashi_series(module(s(0, 5), s(5)))
        assert a == akashi_series(module(T))
        assert a == akashi_series(module(T * s(3, 1)))
        assert a != akashi_series(module(s(5, 1)))

    def test_multiplicative_in_direct_sums(self):
        rng = random.Random(8)
        for _ in range(20):
            degs = [random_poly(rng, ZP) for _ in range(rng.randint(1, 3))]
            degs = [d if not d.is_zero() else s(1) for d in degs]
            B = module(*degs)
            A = module(*[f if not f.is_zero() else s(1) for f in (random_poly(rng, ZP),)])
            both = akashi_series(TorsionModuleData.direct_sum(A, B))
            assert both == akashi_series(A) * akashi_series(B)

    def test_inverse(self):
        a = akashi_series(module(s(5, 1), s(2, 0, 1)))
        assert a * a.inverse() == akashi_series(module(s(1)))


class TestEulerCharacteristic:
    def test_examples(self):
        assert chi(s(5, 1)).exponent == 1
        assert chi(s(3, 1)).exponent == 0
        assert not chi(T).finite

    def test_alternating(self):
        assert chi(s(25, 1), s(5, 1)).exponent == 1
        assert not chi(s(5), T).finite

    def test_extension_degree_scales(self):
        ak = akashi_series(module(s(5, 1)))
        assert euler_characteristic(ak, 2).exponent == 2


class TestTwist:
    def test_identity(self):
        M = module(s(5, 1), s(2, 3, 1))
        assert twist_module(M, 1).all_series() == M.all_series()

    def test_linear(self):
        f = twist_module(module(T), 6).series(0)
        assert f == s(5, 6)
        assert euler_characteristic(akashi_series(module(f))).exponent == 1

    def test_double_twist_is_identity(self):
        rng = random.Random(9)
        R = ExtensionRing.zp(P)
        for c in (2, 3, 6, -1):
            cinv = R.padic(c).inverse()
            f = IwasawaSeries(R, [rng.randint(-9, 9) for _ in range(4)], 32, "padic")
            back = twist_module(twist_module(module(f), R.padic(c)), cinv).series(0)
            assert back == f


class TestBadTwistScan:
    def test_examples(self):
        assert bad_twist_scan(module(T), 3) == {1}
        assert bad_twist_scan(module(cyclotomic_shift(ZP, 1)), 3) == {5}
        assert bad_twist_scan(module(s(5, 1)), 3) == set()

    def test_fixture_series(self):
        assert bad_twist_scan(module(s(5, 10, 10, 5, 1)), 3) == {5}

    def test_monotone_in_k_max(self):
        M = module(T * cyclotomic_shift(ZP, 2))
        assert bad_twist_scan(M, 1) == {1}
        assert bad_twist_scan(M, 3) == {1, 25}

    def test_requires_exact(self):
        f = IwasawaSeries(ZP, [1, 1], 8, "padic")
        with pytest.raises(ExactBackendRequired):
            bad_twist_scan(module(f), 2)

    def test_finite_on_random_modules(self):
        rng = random.Random(10)
        for _ in range(20):
            f = random_poly(rng, ZP, max_deg=6)
            if f.is_zero():
                continue
            bad = bad_twist_scan(module(f), 4)
            # a polynomial of degree d can only vanish on roots of unity of order <= p^k with
            # (p - 1) p^(k-1) <= d, plus the trivial character
            assert all(k == 1 or (P - 1) * k // P <= (f.degree or 0) for k in bad)


class TestVerify:
    def test_trivial_group(self):
        G = FiniteLevelGroup.trivial(P)
        r = verify_char_element([[CrossedElement(G, {"1": [5, 1]})]], ArtinRep.trivial(G))
        assert (r.xi_exponent, r.akashi_exponent, r.snf_exponent) == (1, 1, 1)
        assert r.consistent

    def test_sign_character(self):
        G = FiniteLevelGroup.cyclic(2, P)
        F = [[CrossedElement(G, {"g": [1], "1": [-1, -1]})]]
        rho = ArtinRep.character(G, {"1": 1, "g": -1})
        r = verify_char_element(F, rho)
        assert r.xi_kind == "finite"
        assert (r.xi_exponent, r.akashi_exponent, r.snf_exponent) == (0, 0, 0)
        assert r.consistent

    def test_not_finite(self):
        G = FiniteLevelGroup.trivial(P)
        r = verify_char_element([[CrossedElement(G, {"1": [0, 1]})]], ArtinRep.trivial(G))
        assert r.xi_kind == "zero" and r.akashi_exponent is None and r.snf_exponent is None
        assert r.consistent and r.xi_not_infinite

    def test_higher_homology_shifts_akashi_path(self):
        G = FiniteLevelGroup.trivial(P)
        r = verify_char_element([[CrossedElement(G, {"1": [5, 1]})]], ArtinRep.trivial(G), higher=[2])
        assert r.akashi_exponent == -1 and r.consistent

    def test_non_torsion_rejected(self):
        G = FiniteLevelGroup.cyclic(2, P)
        with pytest.raises(NotTorsion):
            verify_char_element([[CrossedElement(G, {"1": [1], "g": [-1]})]], ArtinRep.trivial(G))
