"""Orchestrator - one job from parsed options to a Report.

Flow:
1. Load polytope (file or builtin) -> 2. Load rho (file, trivial or search)
-> 3. Dispatch to the command -> 4. Assemble the Report payload
"""

import json
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from app import __version__
from app.core.constants import (
    BUILTIN_PREFIX,
    COMMAND_CRITICAL_POINTS,
    COMMAND_ENERGIES,
    COMMAND_EXAMPLE,
    COMMAND_HF,
    COMMAND_PRODUCT_BOUND,
    COMMAND_SELFTEST,
    COMMAND_VALIDATE,
    RHO_SEARCH,
    RHO_TRIVIAL,
    SEPARATOR_LINE_THIN,
)
from app.core.exceptions import InputParseError
from app.core.logging import get_logger, job_context
from app.schemas import (
    CriticalReportModel,
    DiagnosticsModel,
    EnergiesModel,
    HFResultModel,
    JobSpecModel,
    PolytopeFile,
    Report,
    RhoFile,
    SelftestItemModel,
)
from app.selftest import run_examples, run_selftest
from app.settings import settings
from app.toric.floer import hf_rank, product_bound
from app.toric.polytope import (
    FanoPolytope,
    InteriorPoint,
    builtin,
    parse_builtin,
    validate,
)
from app.toric.potential import CriticalReport, RhoAssignment, find_critical

TOOL_NAME = "fanofloer"

logger = get_logger("orchestrator")


# ============================================================
# Input loading
# ============================================================


def _line_of(text: str, key: str) -> Optional[int]:
    position = text.find(f'"{key}"')
    return text.count("\n", 0, position) + 1 if position >= 0 else None


def _read_model(path: str, model):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputParseError(f"cannot read file: {e.strerror}", path=path) from e
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        error = e.errors()[0]
        if error["type"] == "json_invalid":
            raise InputParseError(
                f"invalid JSON: {error['msg']}", path=path, line=_json_error_line(text)
            ) from e
        loc = [str(part) for part in error["loc"]]
        keys = [part for part in loc if not part.isdigit()]
        raise InputParseError(
            error["msg"],
            path=path,
            line=_line_of(text, keys[-1]) if keys else None,
            field=".".join(loc) or None,
        ) from e


def _json_error_line(text: str) -> Optional[int]:
    try:
        json.loads(text)
    except json.JSONDecodeError as e:
        return e.lineno
    return None


def load_polytope(source: str) -> Tuple[FanoPolytope, InteriorPoint]:
    """Polytope from "builtin:NAME(params)" or a JSON file path."""
    if source.startswith(BUILTIN_PREFIX):
        name, params = parse_builtin(source[len(BUILTIN_PREFIX):])
        return builtin(name, *params)
    return _read_model(source, PolytopeFile).to_domain()


def load_rho(source: str, n: int) -> RhoAssignment:
    """rho from "trivial" or a JSON file path ("search" is handled by the caller)."""
    if source == RHO_TRIVIAL:
        return RhoAssignment.trivial(n)
    return _read_model(source, RhoFile).to_rho()


def _require(job: JobSpecModel, field: str) -> str:
    value = getattr(job, field)
    if value is None:
        raise InputParseError(f"command '{job.command}' needs --{field}", field=field)
    return value


def _dump(model) -> Dict[str, Any]:
    return model.model_dump(mode="json", exclude_none=True)


# ============================================================
# Commands
# ============================================================


def _critical_points(job: JobSpecModel, P: FanoPolytope, c: InteriorPoint) -> List[CriticalReport]:
    return find_critical(P, c, max_degree=job.max_degree)


def _run_validate(job: JobSpecModel) -> Tuple[str, Dict[str, Any]]:
    P, c = load_polytope(_require(job, "polytope"))
    diagnostics = validate(P, c)
    return ("ok" if diagnostics.valid else "failed"), {
        "diagnostics": _dump(DiagnosticsModel.from_diagnostics(diagnostics))
    }


def _run_energies(job: JobSpecModel) -> Tuple[str, Dict[str, Any]]:
    P, c = load_polytope(_require(job, "polytope"))
    return "ok", {"energies": _dump(EnergiesModel.from_polytope(P, c))}


def _run_critical_points(job: JobSpecModel) -> Tuple[str, Dict[str, Any]]:
    P, c = load_polytope(_require(job, "polytope"))
    reports = _critical_points(job, P, c)
    return "ok", {
        "critical_points": [_dump(CriticalReportModel.from_report(r)) for r in reports]
    }


def _run_hf(job: JobSpecModel) -> Tuple[str, Dict[str, Any]]:
    P, c = load_polytope(_require(job, "polytope"))
    source = _require(job, "rho")
    if source == RHO_SEARCH:
        rhos = [r.rho for r in _critical_points(job, P, c) if r.defined]
        logger.info("%d defined critical points on %s", len(rhos), P.name)
    else:
        rhos = [load_rho(source, P.dimension)]
    results = [
        _dump(HFResultModel.from_result(hf_rank(P, c, rho, job.method, job.seed), rho))
        for rho in rhos
    ]
    return "ok", {"hf": results}


def _run_product_bound(job: JobSpecModel) -> Tuple[str, Dict[str, Any]]:
    P, c = load_polytope(_require(job, "polytope"))
    source = _require(job, "rho")
    if source == RHO_SEARCH:
        rhos = [r.rho for r in _critical_points(job, P, c)]
    else:
        rhos = [load_rho(source, P.dimension)]
    results = []
    for rho in rhos:
        result, _ = product_bound(P, c, rho, job.method, job.seed)
        results.append(_dump(HFResultModel.from_result(result, rho)))
    return "ok", {"product_bound": results}


def _selftest_payload(items) -> Tuple[str, Dict[str, Any]]:
    models = [SelftestItemModel(name=i.name, passed=i.passed, detail=i.detail) for i in items]
    status = "ok" if all(i.passed for i in items) else "failed"
    return status, {"items": [_dump(m) for m in models]}


def _run_example(job: JobSpecModel) -> Tuple[str, Dict[str, Any]]:
    name = None
    if job.polytope is not None:
        if not job.polytope.startswith(BUILTIN_PREFIX):
            raise InputParseError(
                "example takes --polytope builtin:NAME", field="polytope"
            )
        name, params = parse_builtin(job.polytope[len(BUILTIN_PREFIX):])
        builtin(name, *params)
    return _selftest_payload(run_examples(name))


def _run_selftest(job: JobSpecModel) -> Tuple[str, Dict[str, Any]]:
    return _selftest_payload(run_selftest(seed=job.seed))


COMMAND_HANDLERS = {
    COMMAND_VALIDATE: _run_validate,
    COMMAND_ENERGIES: _run_energies,
    COMMAND_CRITICAL_POINTS: _run_critical_points,
    COMMAND_HF: _run_hf,
    COMMAND_PRODUCT_BOUND: _run_product_bound,
    COMMAND_EXAMPLE: _run_example,
    COMMAND_SELFTEST: _run_selftest,
}


def run(job: JobSpecModel) -> Report:
    """Execute one job.

    Returns:
        Report with status "ok", or "failed" for an invalid polytope or a
        failing selftest item

    Raises:
        FanoFloerError: Parse, domain and budget errors propagate to the caller
    """
    with job_context(job.command):
        logger.info(SEPARATOR_LINE_THIN)
        logger.info(
            "Job %s (polytope=%s, rho=%s, seed=%d)", job.command, job.polytope, job.rho, job.seed
        )
        started = time.perf_counter()
        status, results = COMMAND_HANDLERS[job.command](job)
        elapsed = time.perf_counter() - started
        logger.info("Job %s finished: %s in %.3f s", job.command, status, elapsed)
    return Report(
        tool=TOOL_NAME,
        version=__version__,
        job=job,
        status=status,
        results=results,
        timing_seconds=round(elapsed, 6) if settings.report_timing else None,
    )
