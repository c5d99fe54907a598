"""Combinatorial Floer complex of a torus fiber paired with the real Lagrangian.

The complex has basis eps in {0,1}^n (index sum eps_i 2^(n-i), eps_1 most
significant) and differential

    delta = sum_j a_j T^(e_j / 2) f_j,    f_j(eps) = eps + (v_j mod 2)

with a_j = sqrt(rho^(v_j)). The f_j commute and square to the identity, so
delta^2 = sum_j a_j^2 T^(e_j) id, which is the potential value W_c(rho).
"""

from dataclasses import dataclass, replace
from math import isqrt
from typing import List, Optional, Sequence, Tuple

from app.algebra.gf2bar import FieldElement
from app.algebra.novikov import NovikovMatrix, NovikovPoly, rank
from app.core.constants import RANK_EXACT
from app.core.exceptions import ComplexIdentityError, LocalSystemError, NotCriticalError
from app.core.logging import get_logger
from app.settings import settings
from app.toric.polytope import FanoPolytope, InteriorPoint, energies, product
from app.toric.potential import (
    RhoAssignment,
    grad_components,
    monomial_power,
    potential_value,
)

logger = get_logger("toric.floer")


# ============================================================
# Data Classes
# ============================================================


@dataclass(frozen=True)
class FloerComplex:
    """(C, delta) with its obstruction o; delta @ delta == o * id."""

    n: int
    delta: NovikovMatrix
    obstruction: NovikovPoly

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def basis(self) -> List[Tuple[int, ...]]:
        return basis_vectors(self.n)


@dataclass(frozen=True)
class HFResult:
    """Floer cohomology of (R, (L_c, rho)).

    delta_rank, hf_rank and bound are set only when the obstruction vanishes.
    bound is the intersection lower bound: hf_rank directly, or the rounded-up
    square root of the product rank for product_bound.
    """

    dimension: int
    defined: bool
    obstruction: NovikovPoly
    delta_rank: Optional[int] = None
    hf_rank: Optional[int] = None
    bound: Optional[int] = None

    @property
    def nondisplaceable(self) -> bool:
        return self.defined and bool(self.hf_rank)


# ============================================================
# Basis helpers
# ============================================================


def basis_vectors(n: int) -> List[Tuple[int, ...]]:
    """All eps in {0,1}^n, lexicographic with eps_1 most significant."""
    return [tuple((k >> (n - 1 - i)) & 1 for i in range(n)) for k in range(1 << n)]


def basis_index(eps: Sequence[int]) -> int:
    index = 0
    for bit in eps:
        index = (index << 1) | (bit & 1)
    return index


def flip_mask(v: Sequence[int]) -> int:
    """Index mask of f_v: eps -> eps + (v mod 2)."""
    return basis_index([x % 2 for x in v])


# ============================================================
# Construction
# ============================================================


def _assemble(
    polytope: FanoPolytope,
    point: InteriorPoint,
    coefficients: Sequence[FieldElement],
    obstruction: NovikovPoly,
) -> FloerComplex:
    n = polytope.dimension
    size = 1 << n
    field = obstruction.field
    e = energies(polytope, point)
    # column eps -> {row: [(exponent, coeff)]}
    cells: List[dict] = [{} for _ in range(size)]
    for j, (facet, a) in enumerate(zip(polytope.facets, coefficients)):
        mask = flip_mask(facet.normal)
        half = e[j] / 2
        for col in range(size):
            cells[col].setdefault(col ^ mask, []).append((half, a))
    zero = NovikovPoly.zero(field)
    rows = [[zero] * size for _ in range(size)]
    for col, targets in enumerate(cells):
        for row, terms in targets.items():
            rows[row][col] = NovikovPoly.from_terms(field, terms)
    delta = NovikovMatrix.from_rows(field, rows)
    logger.debug(
        "Complex for %s: %dx%d, %d nonzero entries",
        polytope.name,
        size,
        size,
        delta.nonzero_count(),
    )
    return FloerComplex(n=n, delta=delta, obstruction=obstruction)


def build_general_complex(
    polytope: FanoPolytope,
    point: InteriorPoint,
    coefficients: Sequence[FieldElement],
) -> FloerComplex:
    """delta = sum_j a_j T^(e_j/2) f_j for arbitrary nonzero a_j in one field.

    The obstruction is sum_j a_j^2 T^(e_j).
    """
    if len(coefficients) != polytope.facet_count:
        raise LocalSystemError(
            f"{len(coefficients)} coefficients for {polytope.facet_count} facets"
        )
    field = coefficients[0].field
    e = energies(polytope, point)
    obstruction = NovikovPoly.from_terms(
        field, ((e[j], a * a) for j, a in enumerate(coefficients))
    )
    return _assemble(polytope, point, coefficients, obstruction)


def build_complex(
    polytope: FanoPolytope, point: InteriorPoint, rho: RhoAssignment
) -> FloerComplex:
    """Complex of L_c with the local system rho, coefficients sqrt(rho^(v_j)).

    rho is read in the coordinates the polytope is given in.
    """
    coefficients = [monomial_power(rho, f.normal).sqrt() for f in polytope.facets]
    return _assemble(polytope, point, coefficients, potential_value(polytope, point, rho))


def check_obstruction(K: FloerComplex) -> bool:
    """delta @ delta equals obstruction * id entrywise."""
    square = K.delta @ K.delta
    return square == NovikovMatrix.identity(K.delta.field, K.size, K.obstruction)


# ============================================================
# Cohomology
# ============================================================


def _hf_of_complex(
    K: FloerComplex, method: str, seed: Optional[int], label: Optional[str]
) -> HFResult:
    if settings.verify_obstruction and not check_obstruction(K):
        raise ComplexIdentityError(
            f"delta^2 != o * id for {label}", details={"obstruction": repr(K.obstruction)}
        )
    if not K.obstruction.is_zero():
        logger.info("HF of %s undefined: obstruction %r", label, K.obstruction)
        return HFResult(dimension=K.n, defined=False, obstruction=K.obstruction)
    delta_rank = rank(K.delta, method=method, seed=seed)
    hf = K.size - 2 * delta_rank
    if hf < 0:
        raise ComplexIdentityError(
            f"rank {delta_rank} exceeds half of {K.size} although delta^2 = 0",
            details={"complex": label},
        )
    logger.info("HF of %s: delta rank %d, HF rank %d", label, delta_rank, hf)
    return HFResult(
        dimension=K.n,
        defined=True,
        obstruction=K.obstruction,
        delta_rank=delta_rank,
        hf_rank=hf,
        bound=hf,
    )


def hf_rank(
    polytope: FanoPolytope,
    point: InteriorPoint,
    rho: RhoAssignment,
    method: str = RANK_EXACT,
    seed: Optional[int] = None,
) -> HFResult:
    """Rank of HF(R, (L_c, rho)) = 2^n - 2 rank(delta) when the obstruction vanishes.

    Raises:
        PolytopeError: Invalid polytope or point
        LocalSystemError: rho of the wrong length
        ComplexIdentityError: delta^2 != o * id or a negative HF rank
    """
    K = build_complex(polytope, point, rho)
    return _hf_of_complex(K, method, seed, polytope.name)


def _ceil_sqrt(value: int) -> int:
    root = isqrt(value)
    return root if root * root == value else root + 1


def product_bound(
    polytope: FanoPolytope,
    point: InteriorPoint,
    rho: RhoAssignment,
    method: str = RANK_EXACT,
    seed: Optional[int] = None,
) -> Tuple[HFResult, int]:
    """Intersection bound from (P x P, c x c, (rho, rho)).

    The doubled obstruction 2 W_c(rho) vanishes in characteristic 2, so HF of
    the product is always defined; bound = ceil(sqrt(rank HF)).

    Raises:
        NotCriticalError: Some Z_i(rho) is nonzero
    """
    z = grad_components(polytope, point, rho)
    nonzero = [i for i, zi in enumerate(z, start=1) if not zi.is_zero()]
    if nonzero:
        raise NotCriticalError(
            f"rho is not a critical point of W (Z_{nonzero[0]} != 0)",
            nonzero_components=nonzero,
        )
    square, square_point = product(polytope, point, polytope, point)
    result = hf_rank(square, square_point, rho.doubled(), method=method, seed=seed)
    if not result.defined:
        raise ComplexIdentityError(
            f"doubled obstruction is {result.obstruction!r}, expected 0",
            details={"polytope": square.name},
        )
    bound = _ceil_sqrt(result.hf_rank)
    logger.info("Product bound for %s: rank %d, bound %d", polytope.name, result.hf_rank, bound)
    return replace(result, bound=bound), bound


def check_product_structure(
    polytope: FanoPolytope, point: InteriorPoint, rho: RhoAssignment
) -> bool:
    """delta(P x P) == delta(P) (x) I + I (x) delta(P) in the lexicographic basis."""
    K = build_complex(polytope, point, rho)
    square, square_point = product(polytope, point, polytope, point)
    KK = build_complex(square, square_point, rho.doubled())
    identity = NovikovMatrix.identity(K.delta.field, K.size)
    expected = K.delta.tensor(identity) + identity.tensor(K.delta)
    return KK.delta == expected
