import random

from hypothesis import given, settings, strategies as st

from iwk.function_field import FpPoly, FpRational, ff_det, ff_rank, identity, matmul

P = 5


def T():
    return FpPoly.gen(P)


def rat(*c):
    return FpRational(FpPoly(P, c))


def laplace_det(A):
    """Cofactor expansion along the first row: independent of the elimination code."""
    n = len(A)
    if n == 1:
        return A[0][0]
    total = FpRational(FpPoly(P))
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = A[0][j] * laplace_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def random_poly(rng, deg=2):
    return FpPoly(P, [rng.randrange(P) for _ in range(rng.randint(0, deg) + 1)])


def random_matrix(rng, n, deg=2, rational=False):
    def entry():
        x = FpRational(random_poly(rng, deg))
        if rational and rng.random() < 0.3:
            d = random_poly(rng, 1)
            if d:
                x = x / FpRational(d)
        return x
    return [[entry() for _ in range(n)] for _ in range(n)]


class TestPolynomials:
    def test_divmod_reconstructs(self):
        rng = random.Random(1)
        for _ in range(100):
            a, b = random_poly(rng, 6), random_poly(rng, 3)
            if not b:
                continue
            q, r = divmod(a, b)
            assert q * b + r == a and (not r or r.degree < b.degree)

    def test_rational_lowest_terms(self):
        x = FpRational(T() * (T() + 1), T() * 2)
        assert x.num == (T() + 1) * 3 and x.den == FpPoly(P, (1,))


class TestFieldAxioms:
    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(0, 4), min_size=1, max_size=4),
           st.lists(st.integers(0, 4), min_size=1, max_size=4),
           st.lists(st.integers(1, 4), min_size=1, max_size=3))
    def test_axioms(self, a, b, c):
        x, y = rat(*a), rat(*b)
        z = FpRational(FpPoly(P, [1] + c))
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert z * z.inverse() == 1


class TestDeterminant:
    def test_identity(self):
        assert ff_det(identity(3, P)) == 1

    def test_two_by_two(self):
        t = FpRational(T())
        assert ff_det([[rat(1), t], [t, rat(1)]]) == rat(1, 0, -1)

    def test_matches_cofactor_oracle(self):
        rng = random.Random(2)
        for n in (2, 3, 4):
            for _ in range(15):
                A = random_matrix(rng, n, rational=True)
                assert ff_det(A) == laplace_det(A)

    def test_multiplicative(self):
        rng = random.Random(3)
        for _ in range(20):
            A, B = random_matrix(rng, 3), random_matrix(rng, 3)
            assert ff_det(matmul(A, B)) == ff_det(A) * ff_det(B)

    def test_nonzero_iff_full_rank(self):
        rng = random.Random(4)
        for _ in range(40):
            n = rng.randint(1, 4)
            A = random_matrix(rng, n, deg=1)
            if rng.random() < 0.4 and n > 1:
                A[-1] = [x + y for x, y in zip(A[0], A[1 % n])] if n > 2 else list(A[0])
            assert (not ff_det(A).is_zero()) == (ff_rank(A) == n)


class TestRank:
    def test_zero_and_identity(self):
        z = FpRational(FpPoly(P))
        assert ff_rank([[z, z], [z, z]]) == 0
        assert ff_rank(identity(4, P)) == 4

    def test_outer_product_has_rank_one(self):
        rng = random.Random(5)
        for _ in range(20):
            u = [FpRational(random_poly(rng) + 1) for _ in range(3)]
            v = [FpRational(random_poly(rng) + 1) for _ in range(4)]
            if all(x.is_zero() for x in u) or all(x.is_zero() for x in v):
                continue
            assert ff_rank([[a * b for b in v] for a in u]) == 1
