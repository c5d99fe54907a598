"""Moment polytopes, interior points and energies.

A polytope is given by facets <u, v_j> >= lambda_j with primitive integer
normals v_j and rational constants lambda_j. The energy of facet j at an
interior point c is <c, v_j> - lambda_j (the 2*pi area factor is dropped
everywhere). Fano-ness and smoothness of the toric manifold are asserted by
the caller, not verified here.
"""

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational

from app.core.exceptions import PolytopeError
from app.core.logging import get_logger

logger = get_logger("toric.polytope")

RationalLike = Union[Fraction, int, str]


# ============================================================
# Data Classes
# ============================================================


@dataclass(frozen=True)
class Facet:
    """One defining inequality <u, normal> >= constant."""

    normal: Tuple[int, ...]
    constant: Fraction


@dataclass(frozen=True)
class FanoPolytope:
    """Polytope data (n, facets, optional label)."""

    dimension: int
    facets: Tuple[Facet, ...]
    name: Optional[str] = None

    @classmethod
    def from_data(
        cls,
        normals: Sequence[Sequence[int]],
        constants: Sequence[RationalLike],
        name: Optional[str] = None,
    ) -> "FanoPolytope":
        if len(normals) != len(constants):
            raise PolytopeError(
                f"{len(normals)} normals but {len(constants)} constants", polytope=name
            )
        if not normals:
            raise PolytopeError("polytope without facets", polytope=name)
        facets = tuple(
            Facet(tuple(int(x) for x in v), Fraction(lam))
            for v, lam in zip(normals, constants)
        )
        return cls(dimension=len(facets[0].normal), facets=facets, name=name)

    @property
    def normals(self) -> List[Tuple[int, ...]]:
        return [f.normal for f in self.facets]

    @property
    def constants(self) -> List[Fraction]:
        return [f.constant for f in self.facets]

    @property
    def facet_count(self) -> int:
        return len(self.facets)


@dataclass(frozen=True)
class InteriorPoint:
    """Rational point c of the polytope's interior."""

    coords: Tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Sequence[RationalLike]) -> "InteriorPoint":
        return cls(tuple(Fraction(v) for v in values))

    @property
    def dimension(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class EnergyVector:
    """Facet energies e_j = <c, v_j> - lambda_j, all positive."""

    values: Tuple[Fraction, ...]

    def __post_init__(self):
        for j, e in enumerate(self.values, start=1):
            if e <= 0:
                raise PolytopeError(f"energy of facet {j} is {e}, not positive", facet=j)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, index: int) -> Fraction:
        return self.values[index]


@dataclass
class ValidationDiagnostics:
    """Result of validate(); violated facets are 1-based."""

    valid: bool
    messages: List[str] = field(default_factory=list)
    violated_facets: List[int] = field(default_factory=list)
    unimodular_basis: Optional[Tuple[int, ...]] = None

    @property
    def first_violated_facet(self) -> Optional[int]:
        return min(self.violated_facets) if self.violated_facets else None


@dataclass(frozen=True)
class NormalizationTransform:
    """Affine unimodular change u' = B u - offset.

    basis holds the 0-based facet indices whose normals are the rows of B;
    facet_order lists the original facet index of each normalized facet.
    """

    basis: Tuple[int, ...]
    matrix: Tuple[Tuple[int, ...], ...]
    offset: Tuple[Fraction, ...]
    facet_order: Tuple[int, ...]

    @property
    def is_identity(self) -> bool:
        n = len(self.matrix)
        return (
            all(
                self.matrix[i][j] == (1 if i == j else 0)
                for i in range(n)
                for j in range(n)
            )
            and all(o == 0 for o in self.offset)
            and self.facet_order == tuple(range(len(self.facet_order)))
        )

    def apply_point(self, c: InteriorPoint) -> InteriorPoint:
        return InteriorPoint(
            tuple(
                sum((Fraction(b) * x for b, x in zip(row, c.coords)), Fraction(0)) - o
                for row, o in zip(self.matrix, self.offset)
            )
        )

    def apply_normal(self, v: Sequence[int]) -> Tuple[int, ...]:
        """v' = B^(-T) v."""
        transposed = [list(col) for col in zip(*self.matrix)]
        solution = _solve_linear_system(transposed, list(v))
        if solution is None or any(x.denominator != 1 for x in solution):
            raise PolytopeError(f"normal {tuple(v)} is not integral after normalization")
        return tuple(int(x) for x in solution)


# ============================================================
# Exact linear algebra helpers
# ============================================================


def _dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def _rational(x: RationalLike) -> Rational:
    value = Fraction(x)
    return Rational(value.numerator, value.denominator)


def integer_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    if not rows:
        return 1
    return int(Matrix([list(r) for r in rows]).det(method="bareiss"))


def _solve_linear_system(
    a: Sequence[Sequence[RationalLike]], b: Sequence[RationalLike]
) -> Optional[List[Fraction]]:
    """Unique solution of a x = b over Q, or None if inconsistent or underdetermined."""
    lhs = Matrix([[_rational(x) for x in row] for row in a])
    rhs = Matrix([_rational(y) for y in b])
    try:
        solution, free = lhs.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    if free.rows:
        return None
    return [Fraction(int(x.p), int(x.q)) for x in solution]


# ============================================================
# Operations
# ============================================================


def find_unimodular_basis(polytope: FanoPolytope) -> Optional[Tuple[int, ...]]:
    """Lexicographically first n-subset of facets whose normals have det +-1."""
    n = polytope.dimension
    normals = polytope.normals
    for subset in itertools.combinations(range(len(normals)), n):
        if abs(integer_determinant([normals[i] for i in subset])) == 1:
            return subset
    return None


def validate(polytope: FanoPolytope, point: InteriorPoint) -> ValidationDiagnostics:
    """Check the polytope invariants and strict interiority of the point.

    Never raises; every problem is reported in the diagnostics.
    """
    n = polytope.dimension
    messages: List[str] = []
    violated: List[int] = []

    if n < 1:
        messages.append(f"dimension must be positive, got {n}")
    shape_ok = True
    for j, f in enumerate(polytope.facets, start=1):
        if len(f.normal) != n:
            messages.append(f"facet {j}: normal has length {len(f.normal)}, expected {n}")
            violated.append(j)
            shape_ok = False
    if point.dimension != n:
        messages.append(f"interior point has length {point.dimension}, expected {n}")
        shape_ok = False

    if polytope.facet_count < n + 1:
        messages.append(f"need at least {n + 1} facets, got {polytope.facet_count}")

    for j, f in enumerate(polytope.facets, start=1):
        g = 0
        for x in f.normal:
            g = gcd(g, abs(x))
        if g != 1:
            messages.append(f"facet {j}: normal {f.normal} is not primitive")
            violated.append(j)

    basis = None
    if shape_ok and n >= 1:
        basis = find_unimodular_basis(polytope)
        if basis is None:
            messages.append("no n-subset of normals forms a unimodular basis")

        for j, f in enumerate(polytope.facets, start=1):
            pairing = _dot(point.coords, f.normal)
            if not pairing > f.constant:
                messages.append(
                    f"facet {j}: <c, v> = {pairing} is not > lambda = {f.constant}"
                )
                violated.append(j)

    diagnostics = ValidationDiagnostics(
        valid=not messages,
        messages=messages,
        violated_facets=sorted(set(violated)),
        unimodular_basis=basis,
    )
    if not diagnostics.valid:
        logger.debug("Validation of %s failed: %s", polytope.name, messages[0])
    return diagnostics


def ensure_valid(polytope: FanoPolytope, point: InteriorPoint) -> ValidationDiagnostics:
    """validate() that raises PolytopeError on the first problem."""
    diagnostics = validate(polytope, point)
    if not diagnostics.valid:
        raise PolytopeError(
            diagnostics.messages[0],
            facet=diagnostics.first_violated_facet,
            polytope=polytope.name,
            details={"messages": diagnostics.messages},
        )
    return diagnostics


def energies(polytope: FanoPolytope, point: InteriorPoint) -> EnergyVector:
    """e_j = <c, v_j> - lambda_j for every facet.

    Raises:
        PolytopeError: Invalid polytope or point
    """
    ensure_valid(polytope, point)
    return EnergyVector(
        tuple(_dot(point.coords, f.normal) - f.constant for f in polytope.facets)
    )


def normalization_transform(polytope: FanoPolytope) -> NormalizationTransform:
    """Unimodular transform moving the first unimodular subset to v_j = e_j, lambda_j = 0.

    Raises:
        PolytopeError: No unimodular n-subset exists (non-Delzant input)
    """
    basis = find_unimodular_basis(polytope)
    if basis is None:
        raise PolytopeError(
            "no unimodular n-subset of normals; input is not Delzant",
            polytope=polytope.name,
        )
    matrix = tuple(polytope.facets[i].normal for i in basis)
    offset = tuple(polytope.facets[i].constant for i in basis)
    rest = tuple(j for j in range(polytope.facet_count) if j not in basis)
    return NormalizationTransform(
        basis=basis, matrix=matrix, offset=offset, facet_order=basis + rest
    )


def normalize(
    polytope: FanoPolytope, point: InteriorPoint
) -> Tuple[FanoPolytope, InteriorPoint]:
    """Bring (P, c) into the convention v_j = e_j, lambda_j = 0 for j <= n.

    Energies are unchanged. A polytope already in convention is returned as is.
    """
    ensure_valid(polytope, point)
    transform = normalization_transform(polytope)
    if transform.is_identity:
        return polytope, point
    logger.debug(
        "Normalizing %s with basis facets %s", polytope.name, [i + 1 for i in transform.basis]
    )
    facets = []
    for j in transform.facet_order:
        f = polytope.facets[j]
        normal = transform.apply_normal(f.normal)
        facets.append(Facet(normal, f.constant - _dot(transform.offset, normal)))
    return (
        FanoPolytope(polytope.dimension, tuple(facets), polytope.name),
        transform.apply_point(point),
    )


def product(
    p1: FanoPolytope, c1: InteriorPoint, p2: FanoPolytope, c2: InteriorPoint
) -> Tuple[FanoPolytope, InteriorPoint]:
    """Product polytope with block-embedded normals, facets of p1 first."""
    ensure_valid(p1, c1)
    ensure_valid(p2, c2)
    n1, n2 = p1.dimension, p2.dimension
    facets = [Facet(f.normal + (0,) * n2, f.constant) for f in p1.facets]
    facets += [Facet((0,) * n1 + f.normal, f.constant) for f in p2.facets]
    name = f"{p1.name or 'P'}x{p2.name or 'P'}"
    return (
        FanoPolytope(n1 + n2, tuple(facets), name),
        InteriorPoint(c1.coords + c2.coords),
    )


def is_monotone(polytope: FanoPolytope, point: InteriorPoint) -> bool:
    """All facet energies equal at the point."""
    return len(set(energies(polytope, point).values)) == 1


def monotone_point(polytope: FanoPolytope) -> Optional[InteriorPoint]:
    """The unique point with all energies equal and positive, if there is one."""
    n = polytope.dimension
    a = [list(f.normal) + [-1] for f in polytope.facets]
    b = [f.constant for f in polytope.facets]
    solution = _solve_linear_system(a, b)
    if solution is None or solution[n] <= 0:
        return None
    return InteriorPoint(tuple(solution[:n]))


# ============================================================
# Builtins
# ============================================================


def _unit(n: int, i: int) -> List[int]:
    return [1 if k == i else 0 for k in range(n)]


def cpn(k: int) -> Tuple[FanoPolytope, InteriorPoint]:
    """Monotone CP^k: e_1..e_k and -sum e_i, lambda = (0, .., 0, -k-1), c = (1, .., 1)."""
    if k < 1:
        raise PolytopeError(f"cpn needs k >= 1, got {k}")
    normals = [_unit(k, i) for i in range(k)] + [[-1] * k]
    constants = [0] * k + [-k - 1]
    return (
        FanoPolytope.from_data(normals, constants, name=f"cpn({k})"),
        InteriorPoint.of([1] * k),
    )


def blowup_cp3() -> Tuple[FanoPolytope, InteriorPoint]:
    """Monotone blow-up of CP^3 at a point, c = (1, 1, 1)."""
    normals = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1], [1, 1, 1]]
    constants = [0, 0, 0, -4, 2]
    return (
        FanoPolytope.from_data(normals, constants, name="blowup_cp3"),
        InteriorPoint.of([1, 1, 1]),
    )


def rp_product(k: int, j: int) -> Tuple[FanoPolytope, InteriorPoint]:
    """Monotone CP^2k x CP^2j with c = (1, .., 1)."""
    if k < 1 or j < 1:
        raise PolytopeError(f"rp_product needs k, j >= 1, got ({k}, {j})")
    n = 2 * k + 2 * j
    normals = [_unit(n, i) for i in range(n)]
    normals.append([-1] * (2 * k) + [0] * (2 * j))
    normals.append([0] * (2 * k) + [-1] * (2 * j))
    constants = [0] * n + [-2 * k - 1, -2 * j - 1]
    return (
        FanoPolytope.from_data(normals, constants, name=f"rp_product({k},{j})"),
        InteriorPoint.of([1] * n),
    )


BUILTINS = {
    "cpn": (cpn, 1),
    "blowup_cp3": (blowup_cp3, 0),
    "rp_product": (rp_product, 2),
}

_BUILTIN_PATTERN = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\(([^)]*)\))?\s*$")


def builtin(name: str, *params: int) -> Tuple[FanoPolytope, InteriorPoint]:
    """Builtin polytope by name with its monotone interior point.

    Raises:
        PolytopeError: Unknown name or wrong parameter count
    """
    if name not in BUILTINS:
        raise PolytopeError(
            f"unknown builtin {name!r}; known: {', '.join(sorted(BUILTINS))}",
            polytope=name,
        )
    constructor, arity = BUILTINS[name]
    if len(params) != arity:
        raise PolytopeError(
            f"builtin {name!r} takes {arity} parameter(s), got {len(params)}",
            polytope=name,
        )
    return constructor(*params)


def parse_builtin(text: str) -> Tuple[str, Tuple[int, ...]]:
    """Split "rp_product(1,2)" into ("rp_product", (1, 2))."""
    match = _BUILTIN_PATTERN.match(text)
    if not match:
        raise PolytopeError(f"cannot parse builtin name {text!r}", polytope=text)
    name, args = match.group(1), match.group(2)
    params: Tuple[int, ...] = ()
    if args is not None and args.strip():
        try:
            params = tuple(int(a) for a in args.split(","))
        except ValueError as e:
            raise PolytopeError(f"non-integer builtin parameter in {text!r}", polytope=text) from e
    return name, params
