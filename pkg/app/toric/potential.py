"""Potential function W_c, its logarithmic gradient Z and critical point search.

For a local system rho = (rho_1, .., rho_n) of nonzero GF(2^m) values,

    W_c(rho) = sum_j rho^(v_j) T^(e_j)         (the obstruction o(L_c, rho))
    Z_i      = sum_j (v^i_j mod 2) rho^(v_j) T^(e_j)

The critical point search walks the layers GF(2^1), GF(2^2), .. and reports
each critical rho only in the smallest layer containing all its values.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.algebra.gf2bar import FieldDescriptor, FieldElement, element_degree, make_field
from app.algebra.novikov import NovikovPoly
from app.core.constants import MAX_FIELD_DEGREE
from app.core.exceptions import (
    LocalSystemError,
    PolytopeError,
    SearchBudgetExceeded,
    SearchConsistencyError,
)
from app.core.logging import get_logger
from app.settings import settings
from app.toric.polytope import (
    FanoPolytope,
    InteriorPoint,
    NormalizationTransform,
    energies,
)

logger = get_logger("toric.potential")


# ============================================================
# Data Classes
# ============================================================


@dataclass(frozen=True)
class RhoAssignment:
    """Nonzero values rho_i = rho(l_i) in one field."""

    field: FieldDescriptor
    values: Tuple[FieldElement, ...]

    def __post_init__(self):
        for i, v in enumerate(self.values, start=1):
            if v.field != self.field:
                raise LocalSystemError(
                    f"rho_{i} lives in GF(2^{v.field.degree}), expected GF(2^{self.field.degree})"
                )
            if v.is_zero():
                raise LocalSystemError(f"rho_{i} is zero; local system values must be units")

    @classmethod
    def of(cls, values: Sequence[FieldElement]) -> "RhoAssignment":
        if not values:
            raise LocalSystemError("empty rho assignment")
        return cls(values[0].field, tuple(values))

    @classmethod
    def trivial(cls, n: int, field: Optional[FieldDescriptor] = None) -> "RhoAssignment":
        """rho = (1, .., 1)."""
        field = field or make_field(1)
        return cls(field, (field.one,) * n)

    @property
    def raw(self) -> Tuple[int, ...]:
        return tuple(v.value for v in self.values)

    def __len__(self) -> int:
        return len(self.values)

    def doubled(self) -> "RhoAssignment":
        """(rho, rho) on the product of a polytope with itself."""
        return RhoAssignment(self.field, self.values + self.values)

    def sort_key(self) -> Tuple[str, ...]:
        return tuple(v.sort_key() for v in self.values)


@dataclass(frozen=True)
class CriticalReport:
    """W value and gradient components at one rho; flags derive from the values."""

    rho: RhoAssignment
    w_value: NovikovPoly
    z_values: Tuple[NovikovPoly, ...]

    @property
    def defined(self) -> bool:
        return self.w_value.is_zero()

    @property
    def nonvanishing(self) -> bool:
        return all(z.is_zero() for z in self.z_values)


# ============================================================
# Operations
# ============================================================


def _check_rho(polytope: FanoPolytope, rho: RhoAssignment) -> None:
    if len(rho) != polytope.dimension:
        raise LocalSystemError(
            f"rho has {len(rho)} values but the polytope has dimension {polytope.dimension}"
        )


def monomial_power(rho: RhoAssignment, v: Sequence[int]) -> FieldElement:
    """rho^v = rho_1^(v^1) .. rho_n^(v^n); negative exponents allowed."""
    if len(v) != len(rho):
        raise LocalSystemError(f"vector of length {len(v)} for rho of length {len(rho)}")
    f = rho.field
    log_sum = sum(f.log(r) * k for r, k in zip(rho.raw, v))
    return f.element(f.exp(log_sum))


def potential_value(
    polytope: FanoPolytope, point: InteriorPoint, rho: RhoAssignment
) -> NovikovPoly:
    """W_c(rho) = sum_j rho^(v_j) T^(e_j); equal to the obstruction o(L_c, rho)."""
    _check_rho(polytope, rho)
    e = energies(polytope, point)
    return NovikovPoly.from_terms(
        rho.field,
        ((e[j], monomial_power(rho, f.normal)) for j, f in enumerate(polytope.facets)),
    )


def grad_components(
    polytope: FanoPolytope, point: InteriorPoint, rho: RhoAssignment
) -> Tuple[NovikovPoly, ...]:
    """Z_i = sum_j v^i_j rho^(v_j) T^(e_j), integers v^i_j reduced mod 2."""
    _check_rho(polytope, rho)
    e = energies(polytope, point)
    monomials = [monomial_power(rho, f.normal) for f in polytope.facets]
    return tuple(
        NovikovPoly.from_terms(
            rho.field,
            (
                (e[j], monomials[j])
                for j, f in enumerate(polytope.facets)
                if f.normal[i] % 2
            ),
        )
        for i in range(polytope.dimension)
    )


def critical_report(
    polytope: FanoPolytope, point: InteriorPoint, rho: RhoAssignment
) -> CriticalReport:
    return CriticalReport(
        rho=rho,
        w_value=potential_value(polytope, point, rho),
        z_values=grad_components(polytope, point, rho),
    )


def transform_rho(rho: RhoAssignment, transform: NormalizationTransform) -> RhoAssignment:
    """Express rho in normalized coordinates: rho'_k = rho^(v_(i_k)).

    With v_j = B^T v'_j this gives rho'^(v'_j) = rho^(v_j) for every facet.
    """
    return RhoAssignment(
        rho.field, tuple(monomial_power(rho, row) for row in transform.matrix)
    )


# ============================================================
# Critical point search
# ============================================================


@dataclass
class _LayerPlan:
    """Precomputed per-layer data for the vectorized candidate test."""

    field: FieldDescriptor
    exp_table: np.ndarray
    # (facet normal as int64 row, energy class index) for each facet
    normals: np.ndarray
    # For each (component i, energy class): facet indices with odd v^i_j
    groups: List[List[int]]
    subfield_degree: np.ndarray


def _element_degrees_by_log(field: FieldDescriptor) -> np.ndarray:
    """Degree of the smallest subfield containing g^l, indexed by l."""
    m = field.degree
    q1 = field.unit_order
    logs = np.arange(q1, dtype=np.int64)
    degrees = np.full(q1, m, dtype=np.int64)
    for d in sorted((d for d in range(1, m + 1) if m % d == 0), reverse=True):
        # g^l lies in GF(2^d) iff l is a multiple of (2^m - 1) / (2^d - 1)
        step = q1 // ((1 << d) - 1)
        degrees[logs % step == 0] = d
    return degrees


def _plan_layer(polytope: FanoPolytope, energy_values: Sequence, m: int) -> _LayerPlan:
    field = make_field(m)
    classes: Dict = {}
    for e in energy_values:
        classes.setdefault(e, len(classes))
    groups = []
    for i in range(polytope.dimension):
        for e, _ in sorted(classes.items()):
            members = [
                j
                for j, f in enumerate(polytope.facets)
                if f.normal[i] % 2 and energy_values[j] == e
            ]
            if members:
                groups.append(members)
    return _LayerPlan(
        field=field,
        exp_table=np.array(field.exp_table(), dtype=np.int64),
        normals=np.array(polytope.normals, dtype=np.int64),
        groups=groups,
        subfield_degree=_element_degrees_by_log(field),
    )


def _scan_chunk(plan: _LayerPlan, n: int, start: int, stop: int) -> List[Tuple[int, ...]]:
    """Log-coordinate tuples in [start, stop) with Z = 0 and field degree exactly m."""
    q1 = plan.field.unit_order
    index = np.arange(start, stop, dtype=np.int64)
    logs = np.empty((n, stop - start), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        logs[i] = index % q1
        index //= q1
    # log of rho^(v_j) for every facet and candidate
    monomial_logs = (plan.normals @ logs) % q1
    coefficients = plan.exp_table[monomial_logs]
    mask = np.ones(stop - start, dtype=bool)
    for members in plan.groups:
        acc = np.bitwise_xor.reduce(coefficients[members], axis=0)
        mask &= acc == 0
    if plan.field.degree > 1:
        degree = np.lcm.reduce(plan.subfield_degree[logs], axis=0)
        mask &= degree == plan.field.degree
    hits = np.nonzero(mask)[0]
    return [tuple(int(x) for x in logs[:, h]) for h in hits]


def find_critical(
    polytope: FanoPolytope,
    point: InteriorPoint,
    max_degree: Optional[int] = None,
    budget: Optional[int] = None,
    limit: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[CriticalReport]:
    """Enumerate rho over (GF(2^m)*)^n for m = 1..max_degree and keep those with Z = 0.

    Args:
        polytope: Valid polytope
        point: Interior point
        max_degree: Highest layer searched (default from settings)
        budget: Cumulative candidate budget (default from settings)
        limit: Stop after the first layer in which at least this many
            reports have been collected
        workers: Threads evaluating candidate chunks

    Returns:
        CriticalReports ordered by layer, then canonically by rho

    Raises:
        SearchBudgetExceeded: The next layer would exceed the budget; carries
            the reports collected so far
    """
    if max_degree is None:
        max_degree = settings.default_max_degree
    if not 1 <= max_degree <= MAX_FIELD_DEGREE:
        raise PolytopeError(f"max_degree must be in 1..{MAX_FIELD_DEGREE}, got {max_degree}")
    budget = budget if budget is not None else settings.critical_search_budget
    workers = workers or settings.search_workers
    chunk_size = settings.search_chunk_size

    n = polytope.dimension
    energy_values = energies(polytope, point).values
    reports: List[CriticalReport] = []
    spent = 0

    for m in range(1, max_degree + 1):
        field = make_field(m)
        candidates = field.unit_order ** n
        if spent + candidates > budget:
            logger.warning(
                "Critical search on %s stopped before layer %d (%d + %d > budget %d)",
                polytope.name,
                m,
                spent,
                candidates,
                budget,
            )
            raise SearchBudgetExceeded(
                f"search budget {budget} exceeded at layer {m}",
                layer=m,
                reports=reports,
                details={"candidates_evaluated": spent},
            )
        spent += candidates

        plan = _plan_layer(polytope, energy_values, m)
        bounds = [
            (start, min(start + chunk_size, candidates))
            for start in range(0, candidates, chunk_size)
        ]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunk_hits = pool.map(lambda b: _scan_chunk(plan, n, b[0], b[1]), bounds)
            hits = [h for chunk in chunk_hits for h in chunk]

        layer_reports = []
        for log_tuple in hits:
            rho = RhoAssignment(field, tuple(field.element(field.exp(l)) for l in log_tuple))
            report = critical_report(polytope, point, rho)
            if not report.nonvanishing:
                raise SearchConsistencyError(
                    f"vectorized scan on {polytope.name} kept a rho with nonzero gradient",
                    rho=repr(rho.raw),
                )
            layer_reports.append(report)
        layer_reports.sort(key=lambda r: r.rho.sort_key())
        reports.extend(layer_reports)
        logger.info(
            "Layer GF(2^%d): %d candidates, %d new critical points", m, candidates, len(layer_reports)
        )
        if limit is not None and len(reports) >= limit:
            break

    return reports


def rho_field_degree(rho: RhoAssignment) -> int:
    """Degree of the smallest layer containing every value of rho."""
    return lcm(*(element_degree(v) for v in rho.values))
