"""Novikov polynomials over GF(2^m) and exact matrix rank over their fraction field.

A NovikovPoly is a finite sum a_1 T^l_1 + ... + a_k T^l_k with rational
exponents l_i (stored without the global 2*pi area factor) and coefficients
in one layer GF(2^m). Rank over the Novikov field is computed in the
polynomial subring after clearing exponent denominators: with D the common
denominator of all exponents, S = T^(1/D) turns every entry into an ordinary
polynomial in S, and fraction-free elimination runs over GF(2^m)[S].

Inside the elimination, polynomials are sparse dicts {exponent: raw coeff}.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from app.algebra.gf2bar import FieldDescriptor, FieldElement, embed_raw, make_field
from app.core.constants import MAX_FIELD_DEGREE, RANK_EXACT, RANK_METHODS, RANK_PROBABILISTIC
from app.core.exceptions import InexactDivisionError, MixedFieldError, NovikovError
from app.core.logging import get_logger
from app.settings import settings

logger = get_logger("algebra.novikov")

INFINITY = float("inf")

ExponentLike = Union[Fraction, int, str]
SparsePoly = Dict[int, int]


# ============================================================
# Novikov polynomials
# ============================================================


@dataclass(frozen=True)
class NovikovPoly:
    """Finite Novikov sum with strictly increasing exponents and no zero coefficients.

    terms holds (exponent, raw coefficient int); items() gives FieldElement
    coefficients.
    """

    field: FieldDescriptor
    terms: Tuple[Tuple[Fraction, int], ...] = ()

    @classmethod
    def from_terms(
        cls,
        field: FieldDescriptor,
        terms: Iterable[Tuple[ExponentLike, Union[int, FieldElement]]],
    ) -> "NovikovPoly":
        """Merge terms, cancelling equal exponents in characteristic 2."""
        acc: Dict[Fraction, int] = {}
        for exponent, coeff in terms:
            if isinstance(coeff, FieldElement):
                if coeff.field != field:
                    raise MixedFieldError(
                        "coefficient from a different field",
                        left_degree=field.degree,
                        right_degree=coeff.field.degree,
                    )
                coeff = coeff.value
            if not coeff:
                continue
            e = Fraction(exponent)
            value = acc.get(e, 0) ^ coeff
            if value:
                acc[e] = value
            else:
                acc.pop(e, None)
        return cls(field, tuple(sorted(acc.items())))

    @classmethod
    def zero(cls, field: FieldDescriptor) -> "NovikovPoly":
        return cls(field, ())

    @classmethod
    def one(cls, field: FieldDescriptor) -> "NovikovPoly":
        return cls(field, ((Fraction(0), 1),))

    @classmethod
    def monomial(
        cls,
        field: FieldDescriptor,
        coeff: Union[int, FieldElement],
        exponent: ExponentLike = 0,
    ) -> "NovikovPoly":
        return cls.from_terms(field, [(exponent, coeff)])

    def items(self) -> List[Tuple[Fraction, FieldElement]]:
        return [(e, self.field.element(c)) for e, c in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def valuation(self) -> Union[Fraction, float]:
        """Minimum exponent; +inf for zero."""
        return self.terms[0][0] if self.terms else INFINITY

    def _check(self, other: "NovikovPoly") -> None:
        if other.field != self.field:
            raise MixedFieldError(
                "Novikov operands from different fields",
                left_degree=self.field.degree,
                right_degree=other.field.degree,
            )

    def __add__(self, other: "NovikovPoly") -> "NovikovPoly":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        return NovikovPoly.from_terms(self.field, list(self.terms) + list(other.terms))

    __sub__ = __add__

    def __mul__(self, other: "NovikovPoly") -> "NovikovPoly":
        self._check(other)
        if not self.terms or not other.terms:
            return NovikovPoly.zero(self.field)
        f = self.field
        acc: Dict[Fraction, int] = {}
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                e = ea + eb
                value = acc.get(e, 0) ^ f.mul(ca, cb)
                if value:
                    acc[e] = value
                else:
                    acc.pop(e, None)
        return NovikovPoly(f, tuple(sorted(acc.items())))

    def scale(self, coeff: Union[int, FieldElement]) -> "NovikovPoly":
        if isinstance(coeff, FieldElement):
            coeff = coeff.value
        if not coeff:
            return NovikovPoly.zero(self.field)
        return NovikovPoly(
            self.field, tuple((e, self.field.mul(c, coeff)) for e, c in self.terms)
        )

    def shift(self, exponent: ExponentLike) -> "NovikovPoly":
        """Multiply by T^exponent."""
        s = Fraction(exponent)
        return NovikovPoly(self.field, tuple((e + s, c) for e, c in self.terms))

    def rescale(self, factor: ExponentLike) -> "NovikovPoly":
        """Substitute T -> T^factor for a positive rational factor."""
        factor = Fraction(factor)
        if factor <= 0:
            raise NovikovError(f"exponent rescale factor must be positive, got {factor}")
        return NovikovPoly(self.field, tuple((e * factor, c) for e, c in self.terms))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            parts.append(f"[{self.field.element(c).to_bits()}]T^({e})")
        return " + ".join(parts)


def nv_add(a: NovikovPoly, b: NovikovPoly) -> NovikovPoly:
    return a + b


def nv_mul(a: NovikovPoly, b: NovikovPoly) -> NovikovPoly:
    return a * b


def valuation(a: NovikovPoly) -> Union[Fraction, float]:
    return a.valuation()


# ============================================================
# Exponent lattice and sparse polynomials in S = T^(1/D)
# ============================================================


def common_denominator(polys: Iterable[NovikovPoly]) -> int:
    """Least common denominator of all exponents (1 when there are none)."""
    denominator = 1
    for p in polys:
        for e, _ in p.terms:
            denominator = lcm(denominator, e.denominator)
    return denominator


def _to_lattice(poly: NovikovPoly, denominator: int, base: Fraction) -> SparsePoly:
    out: SparsePoly = {}
    for e, c in poly.terms:
        k = (e - base) * denominator
        if k.denominator != 1:
            raise NovikovError(f"exponent {e} is off the lattice 1/{denominator}")
        out[int(k)] = c
    return out


def _sp_add(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    if not b:
        return a
    if not a:
        return b
    out = dict(a)
    for e, c in b.items():
        value = out.get(e, 0) ^ c
        if value:
            out[e] = value
        else:
            del out[e]
    return out


def _sp_mul(a: SparsePoly, b: SparsePoly, field: FieldDescriptor) -> SparsePoly:
    if not a or not b:
        return {}
    out: SparsePoly = {}
    mul = field.mul
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            value = out.get(e, 0) ^ mul(ca, cb)
            if value:
                out[e] = value
            else:
                out.pop(e, None)
    return out


def _sp_exact_div(a: SparsePoly, b: SparsePoly, field: FieldDescriptor) -> SparsePoly:
    """Quotient a / b for polynomials with nonnegative exponents.

    Raises:
        InexactDivisionError: b does not divide a
    """
    if not b:
        raise NovikovError("division by the zero polynomial")
    if not a:
        return {}
    top_b = max(b)
    lead_inv = field.inv(b[top_b])
    if len(b) == 1:
        if min(a) < top_b:
            raise InexactDivisionError(
                "monomial divisor does not divide", dividend=str(a), divisor=str(b)
            )
        return {e - top_b: field.mul(c, lead_inv) for e, c in a.items()}
    remainder = dict(a)
    quotient: SparsePoly = {}
    while remainder:
        top_r = max(remainder)
        shift = top_r - top_b
        if shift < 0:
            raise InexactDivisionError(
                "polynomial division left a remainder",
                dividend=str(a),
                divisor=str(b),
            )
        factor = field.mul(remainder[top_r], lead_inv)
        quotient[shift] = factor
        for e, c in b.items():
            key = e + shift
            value = remainder.get(key, 0) ^ field.mul(c, factor)
            if value:
                remainder[key] = value
            else:
                remainder.pop(key, None)
    return quotient


def exact_div(a: NovikovPoly, b: NovikovPoly) -> NovikovPoly:
    """Exact quotient a / b in the ring of Novikov polynomials.

    Exponents are cleared to a common lattice, both operands are shifted to
    valuation zero and univariate long division runs in S = T^(1/D).

    Raises:
        NovikovError: b is zero
        InexactDivisionError: b does not divide a
    """
    a._check(b)
    if b.is_zero():
        raise NovikovError("division by zero")
    if a.is_zero():
        return NovikovPoly.zero(a.field)
    denominator = common_denominator([a, b])
    va, vb = a.terms[0][0], b.terms[0][0]
    quotient = _sp_exact_div(
        _to_lattice(a, denominator, va), _to_lattice(b, denominator, vb), a.field
    )
    offset = va - vb
    return NovikovPoly.from_terms(
        a.field,
        ((Fraction(k, denominator) + offset, c) for k, c in quotient.items()),
    )


# ============================================================
# Matrices
# ============================================================


@dataclass(frozen=True)
class NovikovMatrix:
    """Dense rows x cols grid of Novikov polynomials over one field."""

    field: FieldDescriptor
    rows: int
    cols: int
    entries: Tuple[Tuple[NovikovPoly, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise NovikovError(
                f"matrix entries do not match shape {self.rows}x{self.cols}"
            )
        for row in self.entries:
            for entry in row:
                if entry.field != self.field:
                    raise MixedFieldError(
                        "matrix entries from different fields",
                        left_degree=self.field.degree,
                        right_degree=entry.field.degree,
                    )

    @classmethod
    def from_rows(
        cls, field: FieldDescriptor, rows: Sequence[Sequence[NovikovPoly]]
    ) -> "NovikovMatrix":
        grid = tuple(tuple(r) for r in rows)
        return cls(field, len(grid), len(grid[0]) if grid else 0, grid)

    @classmethod
    def zeros(cls, field: FieldDescriptor, rows: int, cols: int) -> "NovikovMatrix":
        zero = NovikovPoly.zero(field)
        return cls(field, rows, cols, tuple((zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(
        cls, field: FieldDescriptor, size: int, scalar: Optional[NovikovPoly] = None
    ) -> "NovikovMatrix":
        zero = NovikovPoly.zero(field)
        diagonal = scalar if scalar is not None else NovikovPoly.one(field)
        return cls(
            field,
            size,
            size,
            tuple(
                tuple(diagonal if i == j else zero for j in range(size))
                for i in range(size)
            ),
        )

    def __getitem__(self, index: Tuple[int, int]) -> NovikovPoly:
        i, j = index
        return self.entries[i][j]

    def __add__(self, other: "NovikovMatrix") -> "NovikovMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise NovikovError("shape mismatch in matrix sum")
        return NovikovMatrix.from_rows(
            self.field,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
        )

    def __matmul__(self, other: "NovikovMatrix") -> "NovikovMatrix":
        if self.cols != other.rows:
            raise NovikovError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        if other.field != self.field:
            raise MixedFieldError(
                "matrix product across fields",
                left_degree=self.field.degree,
                right_degree=other.field.degree,
            )
        # Skip zeros: Floer differentials have at most one term per facet and column.
        other_nonzero = [
            [(j, entry) for j, entry in enumerate(row) if entry] for row in other.entries
        ]
        zero = NovikovPoly.zero(self.field)
        out = []
        for row in self.entries:
            acc: Dict[int, NovikovPoly] = {}
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in other_nonzero[k]:
                    acc[j] = acc.get(j, zero) + a * b
            out.append([acc.get(j, zero) for j in range(other.cols)])
        return NovikovMatrix.from_rows(self.field, out) if out else NovikovMatrix.zeros(
            self.field, 0, other.cols
        )

    def transpose(self) -> "NovikovMatrix":
        return NovikovMatrix(
            self.field,
            self.cols,
            self.rows,
            tuple(
                tuple(self.entries[i][j] for i in range(self.rows))
                for j in range(self.cols)
            ),
        )

    def scaled(self, poly: NovikovPoly) -> "NovikovMatrix":
        return NovikovMatrix(
            self.field,
            self.rows,
            self.cols,
            tuple(tuple(e * poly for e in row) for row in self.entries),
        )

    def with_row_scaled(self, index: int, poly: NovikovPoly) -> "NovikovMatrix":
        return NovikovMatrix(
            self.field,
            self.rows,
            self.cols,
            tuple(
                tuple(e * poly for e in row) if i == index else row
                for i, row in enumerate(self.entries)
            ),
        )

    def rescale_exponents(self, factor: ExponentLike) -> "NovikovMatrix":
        return NovikovMatrix(
            self.field,
            self.rows,
            self.cols,
            tuple(tuple(e.rescale(factor) for e in row) for row in self.entries),
        )

    def tensor(self, other: "NovikovMatrix") -> "NovikovMatrix":
        """Kronecker product, self's index most significant."""
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                out.append(
                    [
                        self.entries[i][j] * other.entries[k][l]
                        for j in range(self.cols)
                        for l in range(other.cols)
                    ]
                )
        return NovikovMatrix.from_rows(self.field, out)

    def nonzero_count(self) -> int:
        return sum(1 for row in self.entries for e in row if e)

    def all_entries(self) -> Iterable[NovikovPoly]:
        for row in self.entries:
            yield from row


# ============================================================
# Rank
# ============================================================


def _lattice_grid(matrix: NovikovMatrix) -> List[List[SparsePoly]]:
    """Entries as sparse polynomials in S = T^(1/D), shifted to nonnegative exponents."""
    denominator = common_denominator(matrix.all_entries())
    base = min(
        (e.terms[0][0] for e in matrix.all_entries() if e.terms), default=Fraction(0)
    )
    return [[_to_lattice(e, denominator, base) for e in row] for row in matrix.entries]


def _bareiss_rank(grid: List[List[SparsePoly]], field: FieldDescriptor) -> int:
    """Fraction-free elimination with full pivoting over GF(2^m)[S].

    Pivot: nonzero entry of minimal valuation, ties broken in row-major order.
    """
    rows = len(grid)
    cols = len(grid[0]) if rows else 0
    previous: SparsePoly = {0: 1}
    rank = 0
    for k in range(min(rows, cols)):
        pivot = None
        for i in range(k, rows):
            row = grid[i]
            for j in range(k, cols):
                entry = row[j]
                if entry:
                    v = min(entry)
                    if pivot is None or v < pivot[0]:
                        pivot = (v, i, j)
        if pivot is None:
            break
        _, pi, pj = pivot
        grid[k], grid[pi] = grid[pi], grid[k]
        if pj != k:
            for row in grid:
                row[k], row[pj] = row[pj], row[k]
        pivot_row = grid[k]
        p = pivot_row[k]
        for i in range(k + 1, rows):
            row = grid[i]
            lead = row[k]
            for j in range(k + 1, cols):
                value = _sp_mul(p, row[j], field)
                if lead and pivot_row[j]:
                    value = _sp_add(value, _sp_mul(lead, pivot_row[j], field))
                row[j] = _sp_exact_div(value, previous, field) if value else {}
            row[k] = {}
        previous = p
        rank += 1
    return rank


def evaluation_field(degree: int, min_degree: Optional[int] = None) -> FieldDescriptor:
    """Field for probabilistic rank: smallest multiple of degree in [min_degree, 16].

    Falls back to the coefficient field itself when no such multiple exists.
    """
    if min_degree is None:
        min_degree = settings.probabilistic_min_degree
    for multiple in range(degree, MAX_FIELD_DEGREE + 1, degree):
        if multiple >= min_degree:
            return make_field(multiple)
    logger.warning(
        "No multiple of %d in [%d, %d]; probabilistic rank evaluates in GF(2^%d)",
        degree,
        min_degree,
        MAX_FIELD_DEGREE,
        degree,
    )
    return make_field(degree)


def _field_rank(grid: List[List[int]], field: FieldDescriptor) -> int:
    rows = len(grid)
    cols = len(grid[0]) if rows else 0
    rank = 0
    for col in range(cols):
        pivot = next((i for i in range(rank, rows) if grid[i][col]), None)
        if pivot is None:
            continue
        grid[rank], grid[pivot] = grid[pivot], grid[rank]
        pivot_row = grid[rank]
        pivot_inv = field.inv(pivot_row[col])
        for i in range(rank + 1, rows):
            row = grid[i]
            if row[col]:
                factor = field.mul(row[col], pivot_inv)
                for j in range(col, cols):
                    if pivot_row[j]:
                        row[j] ^= field.mul(factor, pivot_row[j])
        rank += 1
        if rank == rows:
            break
    return rank


def _probabilistic_rank(
    matrix: NovikovMatrix, seed: Optional[int], min_degree: Optional[int]
) -> int:
    source = matrix.field
    target = evaluation_field(source.degree, min_degree)
    rng = random.Random(settings.default_seed if seed is None else seed)
    point = rng.randrange(1, target.order)
    powers: Dict[int, int] = {}

    def evaluate(poly: SparsePoly) -> int:
        acc = 0
        for k, c in poly.items():
            if k not in powers:
                powers[k] = target.pow(point, k)
            acc ^= target.mul(embed_raw(c, source, target), powers[k])
        return acc

    grid = [[evaluate(p) for p in row] for row in _lattice_grid(matrix)]
    logger.debug(
        "Probabilistic rank in GF(2^%d) at point %d (seed %s)", target.degree, point, seed
    )
    return _field_rank(grid, target)


def rank(
    matrix: NovikovMatrix,
    method: str = RANK_EXACT,
    seed: Optional[int] = None,
    min_degree: Optional[int] = None,
) -> int:
    """Rank over the fraction field of the Novikov polynomial ring.

    Args:
        matrix: Matrix to rank
        method: "exact" (fraction-free elimination) or "probabilistic"
            (evaluation of S at a random point of GF(2^m'), cross-check only)
        seed: Seed of the evaluation point for the probabilistic method
            (settings.default_seed when None)
        min_degree: Override for the minimum evaluation field degree

    Returns:
        Rank as a nonnegative int
    """
    if method not in RANK_METHODS:
        raise NovikovError(f"unknown rank method {method!r}")
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    if method == RANK_PROBABILISTIC:
        return _probabilistic_rank(matrix, seed, min_degree)
    result = _bareiss_rank(_lattice_grid(matrix), matrix.field)
    logger.debug("Exact rank of %dx%d matrix: %d", matrix.rows, matrix.cols, result)
    return result
