"""Unit tests for Novikov polynomials and matrix rank."""

import random
from fractions import Fraction

import pytest

from app.algebra.gf2bar import make_field
from app.algebra.novikov import (
    INFINITY,
    NovikovMatrix,
    NovikovPoly,
    evaluation_field,
    exact_div,
    rank,
)
from app.core.exceptions import InexactDivisionError, MixedFieldError, NovikovError
from app.toric.corpus import regression_corpus
from app.toric.floer import build_complex

F2 = make_field(1)
F8 = make_field(3)
F16 = make_field(4)


def poly(field, *terms):
    return NovikovPoly.from_terms(field, terms)


def random_poly(rng, field=F16, max_terms=4):
    """Nonzero polynomial with exponents in (1/6)Z, 0 <= exp <= 3."""
    terms = [
        (Fraction(rng.randint(0, 18), 6), rng.randrange(1, field.order))
        for _ in range(rng.randint(1, max_terms))
    ]
    p = NovikovPoly.from_terms(field, terms)
    return p if not p.is_zero() else NovikovPoly.one(field)


@pytest.fixture(scope="module")
def corpus_deltas():
    return [
        build_complex(inst.polytope, inst.point, inst.rho).delta
        for inst in regression_corpus(12, seed=4)
    ]


class TestNovikovPoly:
    """Tests for sums of coefficient * T^exponent."""

    def test_characteristic_two_cancellation(self):
        """T + T = 0."""
        assert poly(F2, (1, 1), (1, 1)).is_zero()

    def test_valuation(self):
        """Valuation is the least exponent, infinity for zero."""
        assert poly(F2, ("3/2", 1), ("1/2", 1)).valuation() == Fraction(1, 2)
        assert NovikovPoly.zero(F2).valuation() == INFINITY

    def test_product_frobenius(self):
        """(1 + T^(1/2))^2 = 1 + T."""
        p = poly(F2, (0, 1), ("1/2", 1))
        assert p * p == poly(F2, (0, 1), (1, 1))

    def test_terms_sorted(self):
        """Terms are kept with increasing exponents."""
        p = poly(F8, (2, 3), (0, 1), ("1/3", 5))
        assert [e for e, _ in p.terms] == [0, Fraction(1, 3), 2]

    def test_ring_axioms_random(self):
        """Associativity, commutativity and distributivity on random samples."""
        rng = random.Random(21)
        for _ in range(60):
            a, b, c = random_poly(rng), random_poly(rng), random_poly(rng)
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            assert (a * b) * c == a * (b * c)
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c
            assert a + a == NovikovPoly.zero(F16)
            assert a * NovikovPoly.one(F16) == a

    def test_no_zero_divisors(self):
        """A product of nonzero polynomials is nonzero with added valuations."""
        rng = random.Random(22)
        for _ in range(60):
            a, b = random_poly(rng), random_poly(rng)
            product = a * b
            assert not product.is_zero()
            assert product.valuation() == a.valuation() + b.valuation()

    def test_mixed_fields(self):
        """Sums across fields raise."""
        with pytest.raises(MixedFieldError):
            NovikovPoly.one(F2) + NovikovPoly.one(F8)

    def test_rescale(self):
        """Rescaling substitutes T -> T^factor."""
        assert poly(F2, (1, 1)).rescale(3) == poly(F2, (3, 1))
        with pytest.raises(NovikovError):
            poly(F2, (1, 1)).rescale(0)


class TestExactDivision:
    """Tests for exact quotients."""

    def test_exact_quotient(self):
        """(1 + T^2) / (1 + T) = 1 + T over GF(2)."""
        q = exact_div(poly(F2, (0, 1), (2, 1)), poly(F2, (0, 1), (1, 1)))
        assert q == poly(F2, (0, 1), (1, 1))

    def test_fractional_exponents(self):
        """(T^(1/2) + T^(3/2)) / (1 + T) = T^(1/2)."""
        q = exact_div(poly(F2, ("1/2", 1), ("3/2", 1)), poly(F2, (0, 1), (1, 1)))
        assert q == poly(F2, ("1/2", 1))

    def test_round_trip_random(self):
        """(a * b) / b = a on random samples."""
        rng = random.Random(23)
        for _ in range(40):
            a, b = random_poly(rng), random_poly(rng)
            assert exact_div(a * b, b) == a

    def test_inexact(self):
        """1 / (1 + T) is not a polynomial."""
        with pytest.raises(InexactDivisionError):
            exact_div(NovikovPoly.one(F2), poly(F2, (0, 1), (1, 1)))

    def test_division_by_zero(self):
        with pytest.raises(NovikovError):
            exact_div(NovikovPoly.one(F2), NovikovPoly.zero(F2))


class TestRank:
    """Tests for exact and probabilistic rank."""

    def test_identity(self):
        """The identity has full rank."""
        assert rank(NovikovMatrix.identity(F8, 5)) == 5

    def test_zero_matrix(self):
        assert rank(NovikovMatrix.zeros(F8, 3, 4)) == 0

    def test_singular_in_characteristic_two(self):
        """det [[T, T^(1/2)], [T^(1/2), 1]] = T + T = 0."""
        half = poly(F2, ("1/2", 1))
        m = NovikovMatrix.from_rows(F2, [[poly(F2, (1, 1)), half], [half, NovikovPoly.one(F2)]])
        assert rank(m) == 1

    def test_nonsingular_mixed_valuations(self):
        """[[1, T], [T, 1]] has determinant 1 + T^2 != 0."""
        t = poly(F2, (1, 1))
        m = NovikovMatrix.from_rows(F2, [[NovikovPoly.one(F2), t], [t, NovikovPoly.one(F2)]])
        assert rank(m) == 2

    def test_rectangular(self):
        """A 2x3 matrix with proportional rows has rank 1."""
        a, b, c = poly(F8, (0, 1)), poly(F8, ("1/3", 2)), poly(F8, (1, 5))
        t = poly(F8, ("1/2", 3))
        m = NovikovMatrix.from_rows(F8, [[a, b, c], [a * t, b * t, c * t]])
        assert rank(m) == 1

    @pytest.mark.parametrize("seed", range(5))
    def test_probabilistic_agrees(self, seed):
        """Probabilistic rank matches exact rank on a structured matrix."""
        t = poly(F8, ("1/2", 1))
        one = NovikovPoly.one(F8)
        zero = NovikovPoly.zero(F8)
        m = NovikovMatrix.from_rows(
            F8,
            [[one, t, zero], [t, t * t, zero], [zero, one, t]],
        )
        assert rank(m) == 2
        assert rank(m, method="probabilistic", seed=seed) == 2

    def test_unknown_method(self):
        with pytest.raises(NovikovError):
            rank(NovikovMatrix.identity(F2, 1), method="guess")

    def test_tensor_and_product(self):
        """(A (x) B)(C (x) D) = AC (x) BD on small matrices."""
        t = poly(F2, (1, 1))
        a = NovikovMatrix.from_rows(F2, [[NovikovPoly.zero(F2), t], [t, NovikovPoly.one(F2)]])
        i2 = NovikovMatrix.identity(F2, 2)
        assert (a.tensor(i2) @ i2.tensor(a)) == (a.tensor(a))


class TestEvaluationField:
    """Tests for the probabilistic evaluation field choice."""

    @pytest.mark.parametrize(
        "degree,expected", [(1, 12), (2, 12), (3, 12), (5, 15), (7, 14), (8, 16), (13, 13)]
    )
    def test_smallest_multiple_in_range(self, degree, expected):
        assert evaluation_field(degree, 12).degree == expected

    def test_fallback_to_coefficient_field(self):
        """No multiple of 9 lies in [12, 16]."""
        assert evaluation_field(9, 12).degree == 9


class TestRankInvariants:
    """Rank invariances on Floer differentials of the regression corpus."""

    def test_transpose(self, corpus_deltas):
        for delta in corpus_deltas:
            assert rank(delta.transpose()) == rank(delta)

    def test_row_scaling(self, corpus_deltas):
        """Scaling a row by a nonzero polynomial keeps the rank."""
        for delta in corpus_deltas:
            unit = NovikovPoly.from_terms(delta.field, [(0, 1), ("1/2", 1)])
            for index in (0, delta.rows - 1):
                assert rank(delta.with_row_scaled(index, unit)) == rank(delta)

    @pytest.mark.parametrize("factor", [3, "1/2"])
    def test_exponent_rescaling(self, corpus_deltas, factor):
        """T -> T^factor keeps the rank."""
        for delta in corpus_deltas:
            assert rank(delta.rescale_exponents(factor)) == rank(delta)
