"""Exact arithmetic in the finite fields GF(2^m), 1 <= m <= 16.

The algebraic closure of GF(2) is approximated by the tower of finite layers
GF(2^m). Every layer uses the Conway polynomial of its degree as modulus, so
the generator x of GF(2^m) is primitive and maps to the fixed power
g^((2^lm - 1)/(2^m - 1)) of the generator of GF(2^lm); embeddings between
layers are therefore compatible and all outputs are reproducible.

Elements are plain ints internally (bit i is the coefficient of x^i), with
the field descriptor passed alongside. FieldElement wraps both for the public
API.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

from app.core.constants import MAX_FIELD_DEGREE
from app.core.exceptions import FieldArithmeticError, MixedFieldError
from app.core.logging import get_logger

logger = get_logger("algebra.gf2bar")


# Conway polynomials over GF(2), listed by the exponents of their nonzero terms.
CONWAY_EXPONENTS: Dict[int, Tuple[int, ...]] = {
    1: (1, 0),
    2: (2, 1, 0),
    3: (3, 1, 0),
    4: (4, 1, 0),
    5: (5, 2, 0),
    6: (6, 4, 3, 1, 0),
    7: (7, 1, 0),
    8: (8, 4, 3, 2, 0),
    9: (9, 4, 0),
    10: (10, 6, 5, 3, 2, 1, 0),
    11: (11, 2, 0),
    12: (12, 7, 6, 5, 3, 1, 0),
    13: (13, 4, 3, 1, 0),
    14: (14, 7, 5, 3, 0),
    15: (15, 5, 4, 2, 0),
    16: (16, 5, 3, 2, 0),
}


def _bits_from_exponents(exponents: Sequence[int]) -> int:
    value = 0
    for e in exponents:
        value ^= 1 << e
    return value


CONWAY_MODULI: Dict[int, int] = {
    m: _bits_from_exponents(exps) for m, exps in CONWAY_EXPONENTS.items()
}


# ============================================================
# GF(2)[x] helpers (polynomials as ints)
# ============================================================


def _gf2_mod(a: int, modulus: int) -> int:
    """Remainder of a modulo modulus in GF(2)[x]."""
    deg = modulus.bit_length() - 1
    while a and a.bit_length() - 1 >= deg:
        a ^= modulus << (a.bit_length() - 1 - deg)
    return a


def is_irreducible(modulus: int) -> bool:
    """Check irreducibility over GF(2) by trial division up to degree m/2.

    Args:
        modulus: Polynomial as int, bit i = coefficient of x^i

    Returns:
        True if the polynomial has degree >= 1 and no factor of degree <= m/2
    """
    degree = modulus.bit_length() - 1
    if degree < 1:
        return False
    # every polynomial of degree 1 .. degree // 2
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if _gf2_mod(modulus, divisor) == 0:
            return False
    return True


# ============================================================
# Field descriptors
# ============================================================


@dataclass(frozen=True)
class _Tables:
    exp: Tuple[int, ...]  # exp[i] = x^i, doubled length so exp[a + b] needs no reduction
    log: Tuple[int, ...]  # log[0] = -1


@lru_cache(maxsize=None)
def _build_tables(degree: int, modulus: int) -> _Tables:
    unit_order = (1 << degree) - 1
    exp = [0] * (2 * unit_order)
    log = [-1] * (unit_order + 1)
    value = 1
    for i in range(unit_order):
        if log[value] != -1:
            raise FieldArithmeticError(
                f"modulus of degree {degree} is not primitive", degree=degree
            )
        exp[i] = value
        log[value] = i
        value <<= 1
        if value & (1 << degree):
            value ^= modulus
    if value != 1:
        raise FieldArithmeticError(
            f"generator of degree {degree} has wrong order", degree=degree
        )
    exp[unit_order:] = exp[:unit_order]
    logger.debug("Built log tables for GF(2^%d)", degree)
    return _Tables(exp=tuple(exp), log=tuple(log))


@dataclass(frozen=True)
class FieldDescriptor:
    """The layer GF(2^degree) with its canonical modulus.

    Arithmetic methods take and return raw ints; use element() to obtain
    FieldElement values.
    """

    degree: int
    modulus: int

    @property
    def order(self) -> int:
        return 1 << self.degree

    @property
    def unit_order(self) -> int:
        return (1 << self.degree) - 1

    @property
    def _tables(self) -> _Tables:
        return _build_tables(self.degree, self.modulus)

    # --- raw int arithmetic -------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        t = self._tables
        return t.exp[t.log[a] + t.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldArithmeticError("inversion of zero", degree=self.degree)
        t = self._tables
        return t.exp[(self.unit_order - t.log[a]) % self.unit_order]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k > 0:
                return 0
            if k == 0:
                return 1
            raise FieldArithmeticError("negative power of zero", degree=self.degree)
        t = self._tables
        return t.exp[(t.log[a] * k) % self.unit_order]

    def sqrt(self, a: int) -> int:
        """Inverse of Frobenius: a^(2^(m-1))."""
        return self.pow(a, 1 << (self.degree - 1))

    def log(self, a: int) -> int:
        if a == 0:
            raise FieldArithmeticError("logarithm of zero", degree=self.degree)
        return self._tables.log[a]

    def exp(self, k: int) -> int:
        return self._tables.exp[k % self.unit_order]

    def exp_table(self) -> Tuple[int, ...]:
        """x^0 .. x^(2^m - 2)."""
        return self._tables.exp[: self.unit_order]

    def evaluate(self, coefficients: Sequence[int], point: int) -> int:
        """Horner evaluation of a polynomial with ascending raw coefficients."""
        acc = 0
        for c in reversed(coefficients):
            acc = self.mul(acc, point) ^ c
        return acc

    # --- elements -----------------------------------------------------------

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def generator(self) -> "FieldElement":
        return FieldElement(self, self.exp(1))

    def elements(self) -> Iterator["FieldElement"]:
        for value in range(self.order):
            yield FieldElement(self, value)

    def units(self) -> Iterator["FieldElement"]:
        for value in range(1, self.order):
            yield FieldElement(self, value)

    def from_bits(self, bits: str) -> "FieldElement":
        """Parse a degree-ascending 0/1 string of length m."""
        if len(bits) != self.degree or any(b not in "01" for b in bits):
            raise FieldArithmeticError(
                f"expected {self.degree} bits, got {bits!r}", degree=self.degree
            )
        value = 0
        for i, b in enumerate(bits):
            if b == "1":
                value |= 1 << i
        return FieldElement(self, value)

    def __repr__(self) -> str:
        return f"GF(2^{self.degree})"


@lru_cache(maxsize=None)
def make_field(m: int) -> FieldDescriptor:
    """Return the canonical layer GF(2^m).

    Args:
        m: Field degree, 1 <= m <= 16

    Returns:
        FieldDescriptor with the Conway modulus of degree m

    Raises:
        FieldArithmeticError: m is outside the table
    """
    if not isinstance(m, int) or m < 1 or m > MAX_FIELD_DEGREE:
        raise FieldArithmeticError(
            f"field degree {m} outside table range 1..{MAX_FIELD_DEGREE}", degree=m
        )
    modulus = CONWAY_MODULI[m]
    if not is_irreducible(modulus):
        raise FieldArithmeticError(f"table modulus of degree {m} is reducible", degree=m)
    field = FieldDescriptor(degree=m, modulus=modulus)
    _build_tables(m, modulus)
    return field


# ============================================================
# Elements
# ============================================================


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(2^m) in polynomial basis."""

    field: FieldDescriptor
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.order:
            raise FieldArithmeticError(
                f"value {self.value} does not fit GF(2^{self.field.degree})",
                degree=self.field.degree,
            )

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return tuple(self.value >> i & 1 for i in range(self.field.degree))

    def to_bits(self) -> str:
        return "".join(str(b) for b in self.coeffs)

    def sort_key(self) -> str:
        """Canonical order: lexicographic on the coefficient bits."""
        return self.to_bits()

    def is_zero(self) -> bool:
        return self.value == 0

    def _check(self, other: "FieldElement") -> None:
        if other.field != self.field:
            raise MixedFieldError(
                "operands from different fields, embed first",
                left_degree=self.field.degree,
                right_degree=other.field.degree,
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.value ^ other.value)

    __sub__ = __add__

    def __neg__(self) -> "FieldElement":
        return self

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(
            self.field, self.field.mul(self.value, self.field.inv(other.value))
        )

    def __pow__(self, k: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow(self.value, k))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def sqrt(self) -> "FieldElement":
        return FieldElement(self.field, self.field.sqrt(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"GF(2^{self.field.degree})[{self.to_bits()}]"


# ============================================================
# Operations
# ============================================================


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, k: int) -> FieldElement:
    """a^k; negative k requires a != 0."""
    return a ** k


def sqrt(a: FieldElement) -> FieldElement:
    """The unique square root in characteristic 2."""
    return a.sqrt()


def element_degree(a: FieldElement) -> int:
    """Least d dividing m such that a lies in the subfield GF(2^d)."""
    m = a.field.degree
    for d in range(1, m + 1):
        if m % d == 0 and a.field.pow(a.value, 1 << d) == a.value:
            return d
    return m


def _check_divisible(source: FieldDescriptor, target: FieldDescriptor) -> None:
    if target.degree % source.degree:
        raise FieldArithmeticError(
            f"GF(2^{source.degree}) is not a subfield of GF(2^{target.degree})",
            degree=target.degree,
        )


@lru_cache(maxsize=None)
def _embedding_factor(source: FieldDescriptor, target: FieldDescriptor) -> int:
    """Exponent k with g_source -> g_target^k; verified against the source modulus."""
    _check_divisible(source, target)
    k = target.unit_order // source.unit_order
    image = target.exp(k)
    modulus_coeffs = [source.modulus >> i & 1 for i in range(source.degree + 1)]
    if target.evaluate(modulus_coeffs, image) != 0:
        raise FieldArithmeticError(
            f"moduli of degree {source.degree} and {target.degree} are not compatible",
            degree=target.degree,
        )
    return k


def embed(a: FieldElement, target: FieldDescriptor) -> FieldElement:
    """Embed a into a field whose degree is a multiple of a's.

    Raises:
        FieldArithmeticError: Degrees do not divide
    """
    source = a.field
    if source == target:
        return a
    k = _embedding_factor(source, target)
    if a.value == 0:
        return target.zero
    return target.element(target.exp(source.log(a.value) * k))


def embed_raw(value: int, source: FieldDescriptor, target: FieldDescriptor) -> int:
    """Raw-int form of embed for inner loops."""
    if source == target or value == 0:
        return value
    k = _embedding_factor(source, target)
    return target.exp(source.log(value) * k)


def gf2_polynomial(exponents: Sequence[int]) -> List[FieldElement]:
    """Ascending coefficient list over GF(2) of sum x^e, e.g. (3, 2, 0) for x^3 + x^2 + 1."""
    gf2 = make_field(1)
    degree = max(exponents)
    coeffs = [0] * (degree + 1)
    for e in exponents:
        coeffs[e] ^= 1
    return [gf2.element(c) for c in coeffs]


def find_roots(
    poly: Sequence[FieldElement], search: FieldDescriptor
) -> List[FieldElement]:
    """All roots of poly lying in the search field, by exhaustive evaluation.

    Args:
        poly: Ascending coefficients over a common field GF(2^m)
        search: Field to search, degree a multiple of m

    Returns:
        Roots sorted canonically by coefficient bits

    Raises:
        FieldArithmeticError: Zero polynomial or non-divisible degrees
    """
    if not poly or all(c.is_zero() for c in poly):
        raise FieldArithmeticError("root search on the zero polynomial")
    source = poly[0].field
    for c in poly:
        if c.field != source:
            raise MixedFieldError(
                "polynomial coefficients from different fields",
                left_degree=source.degree,
                right_degree=c.field.degree,
            )
    _check_divisible(source, search)
    coeffs = [embed_raw(c.value, source, search) for c in poly]
    roots = [
        search.element(r)
        for r in range(search.order)
        if search.evaluate(coeffs, r) == 0
    ]
    return sorted(roots, key=FieldElement.sort_key)
