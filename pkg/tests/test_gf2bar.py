"""Unit tests for the GF(2^m) tower."""

import pytest

from app.algebra.gf2bar import (
    CONWAY_MODULI,
    FieldElement,
    element_degree,
    embed,
    find_roots,
    gf2_polynomial,
    is_irreducible,
    make_field,
    power,
    sqrt,
)
from app.core.exceptions import FieldArithmeticError, MixedFieldError


class TestFieldTable:
    """Tests for the canonical moduli and field construction."""

    def test_all_table_moduli_irreducible(self):
        """Every modulus in the table is irreducible."""
        for m, modulus in CONWAY_MODULI.items():
            assert is_irreducible(modulus), m

    def test_reducible_polynomial_detected(self):
        """x^4 + x^2 + 1 = (x^2 + x + 1)^2 is reducible."""
        assert is_irreducible(0b10101) is False

    def test_make_field_is_cached(self):
        """The same descriptor is returned for the same degree."""
        assert make_field(5) is make_field(5)

    @pytest.mark.parametrize("m", [0, 17, -1])
    def test_make_field_out_of_range(self, m):
        """Degrees outside 1..16 are rejected."""
        with pytest.raises(FieldArithmeticError):
            make_field(m)

    def test_generator_is_primitive(self):
        """x generates the unit group of GF(2^8)."""
        field = make_field(8)
        g = field.generator
        seen = {(g ** k).value for k in range(field.unit_order)}
        assert len(seen) == field.unit_order


class TestArithmetic:
    """Tests for element arithmetic."""

    @pytest.mark.parametrize("m", range(1, 9))
    def test_frobenius_and_sqrt_exhaustive(self, m):
        """a^(2^m) = a and sqrt(a)^2 = a for every element."""
        field = make_field(m)
        for a in field.elements():
            assert a ** field.order == a
            assert sqrt(a) * sqrt(a) == a
            assert sqrt(a * a) == a

    def test_inverse(self):
        """a * a^-1 = 1 for all units of GF(16)."""
        field = make_field(4)
        for a in field.units():
            assert a * a.inverse() == field.one

    def test_inverse_of_zero(self):
        """Inverting zero raises."""
        with pytest.raises(FieldArithmeticError):
            make_field(3).zero.inverse()

    def test_negative_power(self):
        """power(a, -3) is the inverse of a^3."""
        field = make_field(3)
        xi = field.generator
        assert power(xi, -3) == (xi ** 3).inverse()

    def test_characteristic_two(self):
        """a + a = 0."""
        field = make_field(6)
        for a in field.elements():
            assert (a + a).is_zero()

    def test_mixed_fields_rejected(self):
        """Operands from different layers need an explicit embed."""
        with pytest.raises(MixedFieldError):
            make_field(2).one + make_field(4).one

    def test_bits_round_trip(self):
        """from_bits inverts to_bits."""
        field = make_field(5)
        for a in field.elements():
            assert field.from_bits(a.to_bits()) == a

    def test_bits_wrong_length(self):
        """Bit strings must have exactly m characters."""
        with pytest.raises(FieldArithmeticError):
            make_field(3).from_bits("10")

    def test_value_out_of_range(self):
        """Raw values must fit the field."""
        with pytest.raises(FieldArithmeticError):
            FieldElement(make_field(2), 4)


class TestEmbedding:
    """Tests for the compatible tower embeddings."""

    @pytest.mark.parametrize("m,target", [(1, 4), (2, 4), (2, 8), (3, 6), (4, 8), (3, 12)])
    def test_embedding_is_homomorphism(self, m, target):
        """embed preserves sums and products."""
        source, big = make_field(m), make_field(target)
        elements = list(source.elements())
        for a in elements:
            for b in elements[:8]:
                assert embed(a + b, big) == embed(a, big) + embed(b, big)
                assert embed(a * b, big) == embed(a, big) * embed(b, big)

    def test_embedding_non_divisible(self):
        """GF(8) is not a subfield of GF(16)."""
        with pytest.raises(FieldArithmeticError):
            embed(make_field(3).one, make_field(4))

    def test_embedding_composes(self):
        """GF(4) -> GF(256) equals GF(4) -> GF(16) -> GF(256)."""
        f2, f4, f8 = make_field(2), make_field(4), make_field(8)
        for a in f2.elements():
            assert embed(a, f8) == embed(embed(a, f4), f8)

    def test_embedded_generator_order(self):
        """The generator of GF(4) has multiplicative order 3 inside GF(16)."""
        f16 = make_field(4)
        g = embed(make_field(2).generator, f16)
        assert g != f16.one
        assert g ** 3 == f16.one
        assert g * g != f16.one

    def test_element_degree(self):
        """Subfield elements of GF(64) report their smallest layer."""
        f6 = make_field(6)
        assert element_degree(f6.one) == 1
        assert element_degree(embed(make_field(2).generator, f6)) == 2
        assert element_degree(embed(make_field(3).generator, f6)) == 3
        assert element_degree(f6.generator) == 6


class TestRoots:
    """Tests for exhaustive root search."""

    def test_roots_of_cubic_in_gf8(self):
        """x^3 + x^2 + 1 has three roots in GF(8), none in GF(2)."""
        poly = gf2_polynomial((3, 2, 0))
        assert find_roots(poly, make_field(1)) == []
        roots = find_roots(poly, make_field(3))
        assert len(roots) == 3
        for xi in roots:
            assert xi ** 3 + xi ** 2 + make_field(3).one == make_field(3).zero

    def test_roots_sorted_canonically(self):
        """Roots come back ordered by their bit strings."""
        roots = find_roots(gf2_polynomial((2, 1, 0)), make_field(2))
        assert [r.to_bits() for r in roots] == sorted(r.to_bits() for r in roots)
        assert len(roots) == 2

    def test_zero_polynomial_rejected(self):
        """Searching roots of 0 is an error."""
        with pytest.raises(FieldArithmeticError):
            find_roots([make_field(1).zero], make_field(2))
