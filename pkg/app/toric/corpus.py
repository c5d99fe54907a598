"""Random (P, c, rho) instances for the property checks.

Instances are built in the convention v_j = e_j, lambda_j = 0 for j <= n, so
the interior point is the vector of the first n energies and the remaining
constants follow from the chosen energies. Fano-ness is not enforced; the
complex and its identities are defined for any valid polytope.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional

from app.algebra.gf2bar import make_field
from app.core.exceptions import SearchBudgetExceeded
from app.core.logging import get_logger
from app.toric.polytope import FanoPolytope, InteriorPoint, product
from app.toric.potential import RhoAssignment, find_critical

logger = get_logger("toric.corpus")

MAX_DIMENSION = 4
MAX_FACETS = 8
MAX_FIELD_DEGREE = 6
NORMAL_ENTRY_RANGE = 2

# Doubled instances start from a base with n <= 2 and at most 4 facets
DOUBLED_BASE_DIMENSION = 2
DOUBLED_BASE_FACETS = 4
DOUBLED_SEARCH_DEGREE = 4


@dataclass(frozen=True)
class CorpusInstance:
    label: str
    polytope: FanoPolytope
    point: InteriorPoint
    rho: RhoAssignment
    doubled: bool = False


def _random_energy(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 6), rng.randint(1, 2))


def _random_normal(rng: random.Random, n: int) -> Optional[tuple]:
    v = tuple(rng.randint(-NORMAL_ENTRY_RANGE, NORMAL_ENTRY_RANGE) for _ in range(n))
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return v if g == 1 else None


def random_polytope(
    rng: random.Random,
    max_n: int = MAX_DIMENSION,
    max_facets: int = MAX_FACETS,
    name: Optional[str] = None,
) -> tuple:
    """Valid (P, c): e_1..e_n, -sum e_i and random primitive extra normals."""
    n = rng.randint(1, max_n)
    normals = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    normals.append(tuple(-1 for _ in range(n)))
    extra = rng.randint(0, max(0, max_facets - n - 1))
    attempts = 0
    while len(normals) < n + 1 + extra and attempts < 50:
        attempts += 1
        v = _random_normal(rng, n)
        if v is not None and v not in normals:
            normals.append(v)

    coords = [_random_energy(rng) for _ in range(n)]
    constants: List[Fraction] = [Fraction(0)] * n
    for v in normals[n:]:
        pairing = sum((c * x for c, x in zip(coords, v)), Fraction(0))
        constants.append(pairing - _random_energy(rng))
    polytope = FanoPolytope.from_data(normals, constants, name=name)
    return polytope, InteriorPoint(tuple(coords))


def random_rho(rng: random.Random, n: int, max_field_degree: int = MAX_FIELD_DEGREE) -> RhoAssignment:
    field = make_field(rng.randint(1, max_field_degree))
    return RhoAssignment(
        field, tuple(field.element(rng.randrange(1, field.order)) for _ in range(n))
    )


def random_instance(
    rng: random.Random,
    max_n: int = MAX_DIMENSION,
    max_facets: int = MAX_FACETS,
    max_field_degree: int = MAX_FIELD_DEGREE,
    label: str = "random",
) -> CorpusInstance:
    polytope, point = random_polytope(rng, max_n, max_facets, name=label)
    rho = random_rho(rng, polytope.dimension, max_field_degree)
    return CorpusInstance(label, polytope, point, rho)


def doubled_instance(
    rng: random.Random, at_critical_point: bool, label: str = "doubled"
) -> CorpusInstance:
    """(P x P, c x c, (rho, rho)) for a small random P; the obstruction is always 0."""
    base, point = random_polytope(
        rng, DOUBLED_BASE_DIMENSION, DOUBLED_BASE_FACETS, name=f"{label}-base"
    )
    rho = None
    if at_critical_point:
        try:
            reports = find_critical(base, point, max_degree=DOUBLED_SEARCH_DEGREE, workers=1)
        except SearchBudgetExceeded as e:
            reports = e.reports
        if reports:
            rho = rng.choice(reports).rho
    if rho is None:
        rho = random_rho(rng, base.dimension)
    square, square_point = product(base, point, base, point)
    return CorpusInstance(label, square, square_point, rho.doubled(), doubled=True)


def regression_corpus(size: int, seed: int) -> List[CorpusInstance]:
    """Deterministic corpus: half random triples, a quarter doubled at critical
    points and a quarter doubled at random rho."""
    rng = random.Random(seed)
    corpus = []
    for i in range(size):
        kind = i % 4
        label = f"instance-{i:04d}"
        if kind < 2:
            corpus.append(random_instance(rng, label=label))
        else:
            corpus.append(doubled_instance(rng, at_critical_point=kind == 2, label=label))
    logger.info(
        "Built regression corpus: %d instances (seed %d, %d doubled)",
        len(corpus),
        seed,
        sum(1 for inst in corpus if inst.doubled),
    )
    return corpus
