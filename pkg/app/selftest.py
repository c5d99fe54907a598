"""Reproductions of the worked examples and the randomized property suites.

Each check returns a SelftestItem; a failing check never raises, so one run
reports every item. The `example` command runs the reproductions only, the
`selftest` command runs everything.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from app.algebra.gf2bar import find_roots, gf2_polynomial, make_field
from app.algebra.novikov import rank
from app.core.constants import RANK_EXACT, RANK_PROBABILISTIC, SEPARATOR_LINE
from app.core.exceptions import FanoFloerError
from app.core.logging import get_logger
from app.settings import settings
from app.toric.corpus import CorpusInstance, regression_corpus
from app.toric.floer import build_complex, check_obstruction, hf_rank, product_bound
from app.toric.polytope import builtin
from app.toric.potential import RhoAssignment, find_critical, grad_components

logger = get_logger("selftest")

EXISTENCE_SEARCH_DEGREE = 8
FIELD_CHECK_DEGREE = 8


@dataclass
class SelftestItem:
    name: str
    passed: bool
    detail: str = ""


def _item(name: str, check: Callable[[], Tuple[bool, str]]) -> SelftestItem:
    try:
        passed, detail = check()
    except FanoFloerError as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
    logger.info("%-28s %s  %s", name, "PASS" if passed else "FAIL", detail)
    return SelftestItem(name, passed, detail)


def example_rho(exponents: Tuple[int, ...], degree: int, n: int) -> List[RhoAssignment]:
    """Diagonal assignments (xi, .., xi) over the roots of a GF(2) polynomial."""
    field = make_field(degree)
    roots = find_roots(gf2_polynomial(exponents), field)
    return [RhoAssignment(field, (xi,) * n) for xi in roots]


# ============================================================
# Reproductions
# ============================================================


def check_blowup_example() -> Tuple[bool, str]:
    """Blow-up of CP^3 at the roots of x^3 + x^2 + 1: rank 2, HF rank 4."""
    P, c = builtin("blowup_cp3")
    found = []
    for rho in example_rho((3, 2, 0), 3, 3):
        r = hf_rank(P, c, rho)
        found.append((r.defined, r.delta_rank, r.hf_rank))
    passed = len(found) == 3 and all(f == (True, 2, 4) for f in found)
    return passed, f"(defined, delta_rank, hf_rank) = {found}"


def check_odd_projective() -> Tuple[bool, str]:
    ranks = []
    for k in (1, 3):
        P, c = builtin("cpn", k)
        ranks.append(hf_rank(P, c, RhoAssignment.trivial(k)).hf_rank)
    return ranks == [2, 4], f"hf_rank(cpn(1), cpn(3)) = {ranks}"


def check_even_obstruction() -> Tuple[bool, str]:
    details = []
    passed = True
    for k in (2, 4):
        P, c = builtin("cpn", k)
        r = hf_rank(P, c, RhoAssignment.trivial(k))
        single = r.obstruction.terms == ((1, 1),)
        passed &= (not r.defined) and single
        details.append(f"cpn({k}): defined={r.defined}, o={r.obstruction!r}")
    return passed, "; ".join(details)


def check_rp_products() -> Tuple[bool, str]:
    P, c = builtin("rp_product", 1, 1)
    rho = RhoAssignment.trivial(P.dimension)
    K = build_complex(P, c, rho)
    base = hf_rank(P, c, rho)
    P2, c2 = builtin("rp_product", 1, 2)
    step = hf_rank(P2, c2, RhoAssignment.trivial(P2.dimension))
    passed = (
        K.delta.rows == 16
        and base.delta_rank == 6
        and base.hf_rank == 4
        and step.hf_rank == 8
    )
    return passed, (
        f"rp_product(1,1): size {K.delta.rows}, delta_rank {base.delta_rank}, "
        f"hf_rank {base.hf_rank}; rp_product(1,2): hf_rank {step.hf_rank}"
    )


def check_product_bounds() -> Tuple[bool, str]:
    P, c = builtin("cpn", 2)
    omega = example_rho((2, 1, 0), 2, 2)[0]
    _, bound_cp2 = product_bound(P, c, omega)
    P1, c1 = builtin("cpn", 1)
    trivial = RhoAssignment.trivial(1)
    _, bound_cp1 = product_bound(P1, c1, trivial)
    direct = hf_rank(P1, c1, trivial).hf_rank
    passed = bound_cp2 == 2 and bound_cp1 == 2 and direct == 2
    return passed, f"bound cpn(2) = {bound_cp2}, bound cpn(1) = {bound_cp1}, hf cpn(1) = {direct}"


# name, builtins it concerns, check
REPRODUCTIONS: List[Tuple[str, Tuple[str, ...], Callable[[], Tuple[bool, str]]]] = [
    ("blowup_example", ("blowup_cp3",), check_blowup_example),
    ("odd_projective_spaces", ("cpn",), check_odd_projective),
    ("even_obstruction", ("cpn",), check_even_obstruction),
    ("rp_products", ("rp_product",), check_rp_products),
    ("product_bounds", ("cpn",), check_product_bounds),
]


def run_examples(builtin_name: Optional[str] = None) -> List[SelftestItem]:
    """Run the reproductions, optionally only those concerning one builtin."""
    return [
        _item(name, check)
        for name, builtins, check in REPRODUCTIONS
        if builtin_name is None or builtin_name in builtins
    ]


# ============================================================
# Property suites
# ============================================================


def check_obstruction_identity(corpus: List[CorpusInstance]) -> Tuple[bool, str]:
    failures = [
        inst.label
        for inst in corpus
        if not check_obstruction(build_complex(inst.polytope, inst.point, inst.rho))
    ]
    return not failures, f"{len(corpus)} instances, failures: {failures[:5]}"


def check_nonvanishing_criterion(corpus: List[CorpusInstance]) -> Tuple[bool, str]:
    defined = 0
    failures = []
    for inst in corpus:
        r = hf_rank(inst.polytope, inst.point, inst.rho)
        if not r.defined:
            continue
        defined += 1
        critical = all(z.is_zero() for z in grad_components(inst.polytope, inst.point, inst.rho))
        if (r.hf_rank > 0) != critical:
            failures.append(inst.label)
    return not failures, f"{defined} defined instances, failures: {failures[:5]}"


def check_critical_points_exist() -> Tuple[bool, str]:
    cases = [("cpn", (k,)) for k in range(1, 5)] + [("rp_product", (1, 1))]
    missing = []
    for name, params in cases:
        P, c = builtin(name, *params)
        reports = find_critical(P, c, max_degree=EXISTENCE_SEARCH_DEGREE, limit=1)
        if not any(r.nonvanishing for r in reports):
            missing.append(P.name)
    return not missing, f"{len(cases)} builtins, none found for: {missing}"


def check_rank_methods(corpus: List[CorpusInstance]) -> Tuple[bool, str]:
    disagreements = []
    for inst in corpus:
        delta = build_complex(inst.polytope, inst.point, inst.rho).delta
        exact = rank(delta, method=RANK_EXACT)
        for seed in range(settings.cross_check_rounds):
            if rank(delta, method=RANK_PROBABILISTIC, seed=seed) != exact:
                disagreements.append((inst.label, seed))
    return not disagreements, (
        f"{len(corpus)} instances x {settings.cross_check_rounds} seeds, "
        f"disagreements: {disagreements[:5]}"
    )


def check_field_invariants() -> Tuple[bool, str]:
    bad = []
    for m in range(1, FIELD_CHECK_DEGREE + 1):
        field = make_field(m)
        for a in field.elements():
            if a ** field.order != a or a.sqrt() * a.sqrt() != a or (a * a).sqrt() != a:
                bad.append((m, a.to_bits()))
    return not bad, f"GF(2^1)..GF(2^{FIELD_CHECK_DEGREE}) exhaustive, failures: {bad[:5]}"


def run_selftest(
    corpus_size: Optional[int] = None, seed: Optional[int] = None
) -> List[SelftestItem]:
    """Every reproduction plus the property suites over a seeded corpus."""
    corpus_size = corpus_size or settings.selftest_corpus_size
    seed = seed if seed is not None else settings.selftest_seed
    logger.info(SEPARATOR_LINE)
    logger.info("Selftest (corpus size %d, seed %d)", corpus_size, seed)
    logger.info(SEPARATOR_LINE)

    items = run_examples()
    corpus = regression_corpus(corpus_size, seed)
    items.append(_item("obstruction_identity", lambda: check_obstruction_identity(corpus)))
    items.append(_item("nonvanishing_criterion", lambda: check_nonvanishing_criterion(corpus)))
    items.append(_item("critical_points_exist", check_critical_points_exist))

    def rank_and_field() -> Tuple[bool, str]:
        ranks_ok, rank_detail = check_rank_methods(corpus)
        fields_ok, field_detail = check_field_invariants()
        return ranks_ok and fields_ok, f"{rank_detail}; {field_detail}"

    items.append(_item("rank_cross_validation", rank_and_field))
    failed = sum(1 for i in items if not i.passed)
    logger.info("Selftest finished: %d passed, %d failed", len(items) - failed, failed)
    return items
