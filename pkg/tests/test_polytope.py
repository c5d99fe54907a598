"""Unit tests for polytopes, energies and normalization."""

import random
from fractions import Fraction

import pytest

from app.core.exceptions import PolytopeError
from app.toric.polytope import (
    FanoPolytope,
    InteriorPoint,
    builtin,
    energies,
    find_unimodular_basis,
    integer_determinant,
    is_monotone,
    monotone_point,
    normalization_transform,
    normalize,
    parse_builtin,
    product,
    validate,
)
from app.toric.corpus import random_instance
from app.toric.floer import hf_rank
from app.toric.potential import RhoAssignment


def shuffled(polytope, rng):
    facets = list(polytope.facets)
    rng.shuffle(facets)
    return FanoPolytope(polytope.dimension, tuple(facets), "shuffled")


def shifted_cp1():
    """CP^1 as the segment 3 <= u <= 5 with c = 4."""
    return FanoPolytope.from_data([[1], [-1]], [3, -5], name="cp1-shifted"), InteriorPoint.of([4])


class TestValidate:
    """Tests for polytope validation diagnostics."""

    @pytest.mark.parametrize(
        "name,params", [("cpn", (1,)), ("cpn", (3,)), ("blowup_cp3", ()), ("rp_product", (1, 2))]
    )
    def test_builtins_valid(self, name, params):
        P, c = builtin(name, *params)
        d = validate(P, c)
        assert d.valid, d.messages

    def test_point_on_boundary(self):
        """c = (0,0,0) on the blow-up violates facet 5 among others."""
        P, _ = builtin("blowup_cp3")
        d = validate(P, InteriorPoint.of([0, 0, 0]))
        assert d.valid is False
        assert 5 in d.violated_facets
        assert 4 not in d.violated_facets
        assert d.first_violated_facet == 1

    def test_non_primitive_normal(self):
        P = FanoPolytope.from_data([[2, 0], [0, 1], [-1, -1]], [0, 0, -3])
        d = validate(P, InteriorPoint.of([1, 1]))
        assert d.valid is False
        assert 1 in d.violated_facets

    def test_too_few_facets(self):
        P = FanoPolytope.from_data([[1, 0], [0, 1]], [0, 0])
        assert validate(P, InteriorPoint.of([1, 1])).valid is False

    def test_energies_raise_on_invalid(self):
        P, _ = builtin("cpn", 2)
        with pytest.raises(PolytopeError):
            energies(P, InteriorPoint.of([3, 0]))

    def test_mismatched_lengths(self):
        with pytest.raises(PolytopeError):
            FanoPolytope.from_data([[1], [-1]], [0])


class TestEnergies:
    """Tests for facet energies and monotonicity."""

    def test_monotone_cpn(self):
        """Monotone CP^k has all energies 1 at c = (1, .., 1)."""
        P, c = builtin("cpn", 3)
        assert energies(P, c).values == (1, 1, 1, 1)
        assert is_monotone(P, c)

    def test_blowup_energies(self):
        P, c = builtin("blowup_cp3")
        assert energies(P, c).values == (1, 1, 1, 1, 1)

    def test_monotone_point(self):
        """The equal-energy point of the blow-up is (1, 1, 1)."""
        P, _ = builtin("blowup_cp3")
        assert monotone_point(P) == InteriorPoint.of([1, 1, 1])

    def test_non_monotone(self):
        P, _ = builtin("cpn", 2)
        assert not is_monotone(P, InteriorPoint.of(["1/2", 1]))


class TestNormalize:
    """Tests for the unimodular normalization."""

    def test_shifted_cp1(self):
        """3 <= u <= 5 normalizes to 0 <= u' <= 2 with c' = 1."""
        P, c = shifted_cp1()
        Q, d = normalize(P, c)
        assert Q.normals == [(1,), (-1,)]
        assert Q.constants == [0, -2]
        assert d == InteriorPoint.of([1])
        assert energies(Q, d) == energies(P, c)

    def test_identity_for_conventional(self):
        P, c = builtin("cpn", 2)
        assert normalization_transform(P).is_identity
        assert normalize(P, c) == (P, c)

    def test_reordered_blowup(self):
        """Reversed facet order picks a different basis; energies are preserved as a multiset."""
        P, c = builtin("blowup_cp3")
        R = FanoPolytope(P.dimension, tuple(reversed(P.facets)), "reversed")
        transform = normalization_transform(R)
        assert transform.basis == (0, 2, 3)
        Q, d = normalize(R, c)
        assert Q.normals[:3] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        assert Q.constants[:3] == [0, 0, 0]
        assert sorted(energies(Q, d).values) == sorted(energies(P, c).values)

    def test_idempotent(self):
        """Normalizing a normalized polytope changes nothing."""
        rng = random.Random(31)
        for _ in range(25):
            inst = random_instance(rng)
            Q, d = normalize(shuffled(inst.polytope, rng), inst.point)
            assert normalize(Q, d) == (Q, d)

    def test_energies_follow_facet_order(self):
        """Energies survive normalization, permuted by the facet order."""
        rng = random.Random(32)
        for _ in range(25):
            inst = random_instance(rng)
            R = shuffled(inst.polytope, rng)
            Q, d = normalize(R, inst.point)
            original = energies(R, inst.point).values
            order = normalization_transform(R).facet_order
            assert energies(Q, d).values == tuple(original[j] for j in order)

    def test_unimodular_basis_lexicographic(self):
        P, _ = builtin("blowup_cp3")
        assert find_unimodular_basis(P) == (0, 1, 2)

    def test_integer_determinant(self):
        assert integer_determinant([[1, 1, 1], [0, 0, 1], [0, 1, 0]]) == -1
        assert integer_determinant([[2, 1], [4, 2]]) == 0
        assert integer_determinant([[0, 1], [1, 0]]) == -1


class TestBuiltins:
    """Tests for builtin constructors and products."""

    def test_parse_builtin(self):
        assert parse_builtin("rp_product(1,2)") == ("rp_product", (1, 2))
        assert parse_builtin("blowup_cp3") == ("blowup_cp3", ())
        assert parse_builtin("cpn(3)") == ("cpn", (3,))

    def test_unknown_builtin(self):
        with pytest.raises(PolytopeError):
            builtin("cp_infinity")

    def test_wrong_arity(self):
        with pytest.raises(PolytopeError):
            builtin("cpn", 1, 2)

    def test_rp_product_shape(self):
        """CP^2 x CP^4: six coordinate facets and two block facets."""
        P, c = builtin("rp_product", 1, 2)
        assert P.dimension == 6
        assert P.facet_count == 8
        assert P.constants[-2:] == [Fraction(-3), Fraction(-5)]

    def test_product_energies_concatenate(self):
        rng = random.Random(33)
        for _ in range(20):
            a, b = random_instance(rng, max_n=2), random_instance(rng, max_n=2)
            Q, d = product(a.polytope, a.point, b.polytope, b.point)
            assert energies(Q, d).values == (
                energies(a.polytope, a.point).values + energies(b.polytope, b.point).values
            )

    def test_product_associative(self):
        """(P x P) x P and P x (P x P) agree in energies and HF rank."""
        P, c = builtin("cpn", 1)
        PP, cc = product(P, c, P, c)
        left = product(PP, cc, P, c)
        right = product(P, c, PP, cc)
        assert energies(*left) == energies(*right)
        rho = RhoAssignment.trivial(3)
        assert hf_rank(*left, rho).hf_rank == hf_rank(*right, rho).hf_rank == 8

    def test_product_block_embedding(self):
        P, c = builtin("cpn", 1)
        Q, d = product(P, c, P, c)
        assert Q.normals == [(1, 0), (-1, 0), (0, 1), (0, -1)]
        assert d == InteriorPoint.of([1, 1])
        assert validate(Q, d).valid
