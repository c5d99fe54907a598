"""Unit tests for the Floer complex, HF rank and the product bound."""

from collections import Counter

import pytest

from app.algebra.gf2bar import find_roots, gf2_polynomial, make_field
from app.algebra.novikov import NovikovPoly
from app.core.exceptions import NotCriticalError
from app.toric.corpus import regression_corpus
from app.toric.floer import (
    basis_index,
    basis_vectors,
    build_complex,
    build_general_complex,
    check_obstruction,
    check_product_structure,
    flip_mask,
    hf_rank,
    product_bound,
)
from app.toric.polytope import (
    FanoPolytope,
    InteriorPoint,
    builtin,
    normalization_transform,
    normalize,
)
from app.toric.potential import RhoAssignment, grad_components, transform_rho

F4 = make_field(2)
F8 = make_field(3)


def xi_rhos():
    return [RhoAssignment(F8, (xi,) * 3) for xi in find_roots(gf2_polynomial((3, 2, 0)), F8)]


def omega_rho():
    omega = find_roots(gf2_polynomial((2, 1, 0)), F4)[0]
    return RhoAssignment(F4, (omega, omega))


@pytest.fixture(scope="module")
def corpus():
    return regression_corpus(24, seed=11)


class TestBasis:
    """Tests for the basis order and the flip maps."""

    def test_lexicographic_order(self):
        assert basis_vectors(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert basis_index((1, 0, 0)) == 4

    def test_flips_commute_and_square_to_identity(self):
        normals = [(1, 0, 0), (0, 1, 0), (-1, -1, -1), (2, 1, -3)]
        for v in normals:
            for w in normals:
                for k in range(8):
                    assert k ^ flip_mask(v) ^ flip_mask(w) == k ^ flip_mask(w) ^ flip_mask(v)
                assert all(k ^ flip_mask(v) ^ flip_mask(v) == k for k in range(8))

    def test_mask_uses_parity(self):
        assert flip_mask((-1, 2, 3)) == basis_index((1, 0, 1))


class TestBuildComplex:
    """Tests for the differential and the obstruction identity."""

    def test_cp1_differential_cancels(self):
        P, c = builtin("cpn", 1)
        K = build_complex(P, c, RhoAssignment.trivial(1))
        assert K.delta.nonzero_count() == 0
        assert K.obstruction.is_zero()

    def test_blowup_matrix_pattern(self):
        """Every column has four entries eta T^(1/2), eta = sqrt(xi); eta^3 + eta^-3 = eta."""
        P, c = builtin("blowup_cp3")
        for rho in xi_rhos():
            eta = rho.values[0].sqrt()
            assert eta ** 3 + (eta ** 3).inverse() == eta
            K = build_complex(P, c, rho)
            expected = NovikovPoly.monomial(F8, eta, "1/2")
            for col in range(8):
                column = [K.delta[row, col] for row in range(8)]
                assert Counter(e for e in column if e) == Counter({expected: 4})
            rows = [[K.delta[row, col] for col in range(8)] for row in range(8)]
            assert all(sum(1 for e in row if e) == 4 for row in rows)
            assert K.delta[basis_index((1, 1, 1)), 0] == expected

    def test_obstruction_identity_cp2(self):
        """cpn(2), rho = 1: delta^2 = T id."""
        P, c = builtin("cpn", 2)
        K = build_complex(P, c, RhoAssignment.trivial(2))
        assert K.obstruction == NovikovPoly.from_terms(make_field(1), [(1, 1)])
        assert check_obstruction(K)

    def test_obstruction_identity_corpus(self, corpus):
        for inst in corpus:
            assert check_obstruction(build_complex(inst.polytope, inst.point, inst.rho)), inst.label

    def test_general_complex(self):
        """Arbitrary coefficients: delta^2 = sum a_j^2 T^(e_j) id."""
        P, c = builtin("blowup_cp3")
        coefficients = [F8.element(v) for v in (1, 2, 3, 5, 7)]
        K = build_general_complex(P, c, coefficients)
        expected = NovikovPoly.from_terms(F8, [(1, a * a) for a in coefficients])
        assert K.obstruction == expected
        assert check_obstruction(K)

    def test_product_structure(self):
        P, c = builtin("cpn", 2)
        assert check_product_structure(P, c, omega_rho())
        B, d = builtin("blowup_cp3")
        assert check_product_structure(B, d, xi_rhos()[0])


class TestHFRank:
    """Tests for Floer cohomology ranks."""

    def test_blowup(self):
        P, c = builtin("blowup_cp3")
        for rho in xi_rhos():
            r = hf_rank(P, c, rho)
            assert r.defined
            assert r.obstruction.is_zero()
            assert (r.delta_rank, r.hf_rank, r.bound) == (2, 4, 4)
            assert r.nondisplaceable

    @pytest.mark.parametrize("k,expected", [(1, 2), (3, 4)])
    def test_odd_projective_spaces(self, k, expected):
        P, c = builtin("cpn", k)
        assert hf_rank(P, c, RhoAssignment.trivial(k)).hf_rank == expected

    @pytest.mark.parametrize("k", [2, 4])
    def test_even_projective_spaces_undefined(self, k):
        P, c = builtin("cpn", k)
        r = hf_rank(P, c, RhoAssignment.trivial(k))
        assert r.defined is False
        assert r.obstruction == NovikovPoly.from_terms(make_field(1), [(1, 1)])
        assert r.hf_rank is None and r.delta_rank is None
        assert not r.nondisplaceable

    def test_rp_product_base(self):
        P, c = builtin("rp_product", 1, 1)
        rho = RhoAssignment.trivial(4)
        assert all(z.is_zero() for z in grad_components(P, c, rho))
        K = build_complex(P, c, rho)
        assert K.delta.rows == 16
        r = hf_rank(P, c, rho)
        assert (r.delta_rank, r.hf_rank) == (6, 4)

    def test_rp_product_step(self):
        P, c = builtin("rp_product", 1, 2)
        assert hf_rank(P, c, RhoAssignment.trivial(6)).hf_rank == 8

    def test_probabilistic_method(self):
        P, c = builtin("blowup_cp3")
        r = hf_rank(P, c, xi_rhos()[0], method="probabilistic", seed=3)
        assert r.hf_rank == 4

    def test_rescale_invariance(self):
        """Scaling every energy by 3 keeps the rank."""
        P, c = builtin("blowup_cp3")
        scaled = FanoPolytope.from_data(P.normals, [3 * x for x in P.constants], "scaled")
        point = InteriorPoint(tuple(3 * x for x in c.coords))
        assert hf_rank(scaled, point, xi_rhos()[1]).hf_rank == 4

    def test_renormalization_and_permutation_invariance(self):
        P, c = builtin("blowup_cp3")
        R = FanoPolytope(P.dimension, tuple(reversed(P.facets)), "reversed")
        rho = xi_rhos()[2]
        assert hf_rank(R, c, rho).hf_rank == 4
        Q, d = normalize(R, c)
        assert hf_rank(Q, d, transform_rho(rho, normalization_transform(R))).hf_rank == 4

    def test_nonvanishing_criterion_corpus(self, corpus):
        """On defined instances, HF != 0 exactly at critical points."""
        defined = 0
        for inst in corpus:
            r = hf_rank(inst.polytope, inst.point, inst.rho)
            if not r.defined:
                continue
            defined += 1
            critical = all(
                z.is_zero() for z in grad_components(inst.polytope, inst.point, inst.rho)
            )
            assert (r.hf_rank > 0) == critical, inst.label
            assert r.hf_rank >= 0
        assert defined >= 12


class TestProductBound:
    """Tests for the square-root intersection bound."""

    def test_cp2_omega(self):
        P, c = builtin("cpn", 2)
        result, bound = product_bound(P, c, omega_rho())
        assert result.defined
        assert result.hf_rank == 4
        assert bound == 2 == result.bound

    def test_cp1(self):
        P, c = builtin("cpn", 1)
        result, bound = product_bound(P, c, RhoAssignment.trivial(1))
        assert result.hf_rank == 4
        assert bound == 2

    def test_not_critical(self):
        P, c = builtin("cpn", 2)
        rho = RhoAssignment(F4, (F4.one, omega_rho().values[0]))
        with pytest.raises(NotCriticalError) as info:
            product_bound(P, c, rho)
        assert info.value.nonzero_components
