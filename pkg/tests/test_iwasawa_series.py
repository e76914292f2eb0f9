import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from iwk.errors import LambdaExceedsTruncation, ValidationError, ZeroWithinPrecision
from iwk.iwasawa_series import (IwasawaSeries, augment, cyclotomic_shift, divide, norm_to_base,
                                twist_substitute, weierstrass_prepare)
from iwk.padic import ExtensionRing, PadicContext

P, N, D = 5, 20, 32
ZP = ExtensionRing.zp(P, N)
UNRAM = ExtensionRing(PadicContext(P, N), (-2, 0, 1))
ETA = ExtensionRing(PadicContext(P, N), (5, 10, 10, 5, 1), "eisenstein")  # Phi_5(x + 1)
T_ = sympy.Symbol("T")


def poly(*c, ring=ZP, D=None, backend="rational"):
    return IwasawaSeries(ring, c, D, backend)


def sym(f):
    return sum(sympy.Rational(c.numerator, c.denominator) * T_ ** i
               for i, c in enumerate(Fraction(x) for x in f.coeffs))


small_polys = st.lists(st.integers(-30, 30), min_size=1, max_size=6)


class TestArithmetic:
    @settings(max_examples=100, deadline=None)
    @given(small_polys, small_polys)
    def test_exact_product_matches_sympy(self, a, b):
        f, g = poly(*a), poly(*b)
        assert sympy.expand(sym(f * g) - sym(f) * sym(g)) == 0
        assert sympy.expand(sym(f + g) - sym(f) - sym(g)) == 0

    def test_truncation_marks_inexact(self):
        f = poly(1, 1, D=3)
        g = f ** 5
        assert g.degree == 3 and not g.exact
        assert g.coeffs == tuple(Fraction(c) for c in (1, 5, 10, 10))

    def test_inverse_of_unit_series(self):
        f = poly(3, 1, 7, D=12, backend="padic")
        assert (f * f.inverse()) == f.one()

    def test_mixing_backends_is_rejected(self):
        with pytest.raises(ValidationError):
            poly(1, D=4) + poly(1, D=4, backend="padic")

    def test_json_round_trip(self):
        f = IwasawaSeries(ZP, [Fraction(1, 3), 0, 5], None)
        assert IwasawaSeries.from_json(f.to_json(), ZP, None) == f
        g = IwasawaSeries(UNRAM, [[1, 2], [0, 5]], D)
        assert IwasawaSeries.from_json(g.to_json(), D=D) == g


class TestWeierstrass:
    def test_already_distinguished(self):
        w = weierstrass_prepare(poly(5, 1))
        assert (w.mu, w.lam) == (0, 1)
        assert [c.coords[0] for c in w.distinguished.coeffs] == [5, 1]
        assert w.unit == w.unit.one()

    def test_pure_p_power_times_unit(self):
        w = weierstrass_prepare(poly(5, 5))
        assert (w.mu, w.lam) == (1, 0)
        assert w.distinguished == w.distinguished.one()
        assert [c.coords[0] for c in w.unit.coeffs] == [1, 1]

    def test_cubic_reconstructs(self):
        f = poly(25, 5, 1, 1, D=D, backend="padic")
        w = weierstrass_prepare(f)
        assert (w.mu, w.lam) == (0, 2)
        assert w.reconstruct() == f
        assert all(c.val() > 0 for c in w.distinguished.coeffs[:-1])

    def test_lambda_beyond_window(self):
        with pytest.raises(LambdaExceedsTruncation):
            weierstrass_prepare(poly(5, 5, 5, 1, D=3, backend="padic"))

    def test_zero(self):
        with pytest.raises(ZeroWithinPrecision):
            weierstrass_prepare(poly(5 ** N, D=D, backend="padic"))

    def test_eisenstein_ring_counts_mu_in_uniformizer_units(self):
        w = weierstrass_prepare(IwasawaSeries(ETA, [5, 0, 1], 8, "padic"))
        assert (w.mu, w.lam) == (0, 2)
        w = weierstrass_prepare(IwasawaSeries(ETA, [5, 5], 8, "padic"))
        assert w.mu == 4 and w.lam == 0


class TestDivide:
    def test_monomials(self):
        q, r = divide(poly(0, 0, 1), poly(0, 1))
        assert q == poly(0, 1) and r.is_zero()

    def test_unit_divisor(self):
        f = poly(3, 1, 4, 1, 5)
        q, r = divide(f, poly(1))
        assert q == f and r.is_zero()

    def test_reconstruction_with_non_monic_lambda(self):
        rng = random.Random(4)
        for _ in range(30):
            f = poly(*[rng.randint(-50, 50) for _ in range(8)], D=10, backend="padic")
            g = poly(5 * rng.randint(1, 9), 5 * rng.randint(-9, 9), 1, 5, D=10, backend="padic")
            q, r = divide(f, g)
            assert r.degree is None or r.degree < 2
            assert q * g + r == f

    def test_one_by_T_plus_5(self):
        q, r = divide(poly(1, D=6, backend="padic"), poly(5, 1, D=6, backend="padic"))
        assert r.degree == 0 and q * poly(5, 1, D=6, backend="padic") + r == poly(1, D=6, backend="padic")


class TestAugmentAndTwist:
    def test_augment(self):
        assert augment(poly(0, 1)) == 0
        assert augment(poly(3, 1)) == 3
        assert augment(poly(5, 1)) == 5

    def test_linear_twist(self):
        assert twist_substitute(poly(0, 1), 7) == poly(6, 7)

    def test_trivial_twist(self):
        f = poly(1, 2, 3, 4)
        assert twist_substitute(f, 1) == f

    def test_twist_matches_sympy_substitution(self):
        rng = random.Random(8)
        for _ in range(30):
            f = poly(*[rng.randint(-9, 9) for _ in range(5)])
            c = rng.choice([2, 3, -1, 7, Fraction(1, 3)])
            expected = sympy.expand(sym(f).subs(T_, c * (1 + T_) - 1))
            assert sympy.expand(sym(twist_substitute(f, c)) - expected) == 0

    def test_twist_is_a_ring_homomorphism_and_invertible(self):
        rng = random.Random(9)
        for _ in range(30):
            f = poly(*[rng.randint(-9, 9) for _ in range(4)])
            g = poly(*[rng.randint(-9, 9) for _ in range(4)])
            c = rng.choice([2, 3, 4, 6])
            assert twist_substitute(f * g, c) == twist_substitute(f, c) * twist_substitute(g, c)
            assert twist_substitute(f + g, c) == twist_substitute(f, c) + twist_substitute(g, c)
            assert twist_substitute(twist_substitute(f, c), Fraction(1, c)) == f
            assert augment(twist_substitute(f, c)) == f(c - 1)

    def test_zeta_twist_fixes_cyclotomic_series(self):
        # in O = Z_5[zeta_5], (1+T)^5 - 1 is unchanged by T -> zeta^-1 (1+T) - 1
        zeta = ETA.exact([1, 1])  # x = zeta - 1
        f = IwasawaSeries(ETA, [0, 5, 10, 10, 5, 1], None)
        assert twist_substitute(f, 1 / zeta) == f

    def test_non_unit_rejected(self):
        with pytest.raises(ValidationError):
            twist_substitute(poly(0, 1), 5)


class TestNorm:
    def test_generator(self):
        assert norm_to_base(IwasawaSeries(UNRAM, [[0, 1]], None)) == poly(-2)

    def test_base_constant_and_T(self):
        assert norm_to_base(IwasawaSeries(UNRAM, [3], None)) == poly(9)
        assert norm_to_base(IwasawaSeries(UNRAM, [0, 1], None)) == poly(0, 0, 1)

    def test_matches_resultant_and_is_multiplicative(self):
        x = sympy.Symbol("x")
        rng = random.Random(10)
        for _ in range(20):
            g = IwasawaSeries(UNRAM, [[rng.randint(-5, 5), rng.randint(-5, 5)] for _ in range(3)], None)
            h = IwasawaSeries(UNRAM, [[rng.randint(-5, 5), rng.randint(-5, 5)] for _ in range(2)], None)
            gx = sum((int(c.coords[0]) + int(c.coords[1]) * x) * T_ ** i for i, c in enumerate(g.coeffs))
            res = sympy.resultant(x ** 2 - 2, gx, x)
            assert sympy.expand(sym(norm_to_base(g)) - res) == 0
            assert norm_to_base(g * h) == norm_to_base(g) * norm_to_base(h)


class TestCyclotomicShift:
    @pytest.mark.parametrize("k", [1, 2])
    def test_matches_sympy(self, k):
        expected = sympy.expand(sympy.cyclotomic_poly(P ** k, T_).subs(T_, 1 + T_))
        assert sympy.expand(sym(cyclotomic_shift(ZP, k)) - expected) == 0

    def test_k_zero_is_T(self):
        assert cyclotomic_shift(ZP, 0) == poly(0, 1)
