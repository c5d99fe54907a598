"""Command-line interface: parse options, run one job, emit the report.

Usage:
    python -m app hf --polytope builtin:blowup_cp3 --rho search
    python -m app validate --polytope polytope.json --format table
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from app import __version__
from app.core.constants import (
    COMMANDS,
    EXIT_BUDGET_EXCEEDED,
    EXIT_DOMAIN_ERROR,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    FORMAT_JSON,
    FORMAT_TABLE,
    RANK_EXACT,
    RANK_METHODS,
)
from app.core.exceptions import FanoFloerError, InputParseError, SearchBudgetExceeded
from app.core.logging import get_logger, setup_logging
from app.orchestrator import TOOL_NAME, run
from app.schemas import CriticalReportModel, JobSpecModel, Report
from app.settings import settings

logger = get_logger("cli")


# ============================================================
# Emission
# ============================================================


def emit(report: Report, fmt: str = FORMAT_JSON) -> str:
    """Canonical JSON (sorted keys) or an aligned, lossy table."""
    if fmt == FORMAT_TABLE:
        return _emit_table(report)
    payload = report.model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def parse_report(text: str) -> Report:
    return Report.model_validate_json(text)


def _poly_text(terms: List[Dict[str, Any]]) -> str:
    if not terms:
        return "0"
    return " + ".join(f"[{t['coeff']['bits']}]T^({t['exp']})" for t in terms)


def _rho_text(rho: Optional[Dict[str, Any]]) -> str:
    if not rho:
        return "-"
    return "(" + ", ".join(v["bits"] for v in rho["values"]) + ")"


def _table(headers: List[str], rows: List[List[Any]]) -> List[str]:
    cells = [[str(x) for x in row] for row in rows]
    widths = [
        max([len(h)] + [len(row[i]) for row in cells]) for i, h in enumerate(headers)
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
    return lines


def _opt(value: Any) -> str:
    return "-" if value is None else str(value)


def _emit_table(report: Report) -> str:
    job = report.job
    lines = [
        f"{report.tool} {report.version}  {job.command}  status={report.status}",
        f"polytope={_opt(job.polytope)}  rho={_opt(job.rho)}  method={job.method}  "
        f"seed={_opt(job.seed)}",
    ]
    if report.error:
        lines.append(f"error: {report.error}")
    results = report.results

    if "diagnostics" in results:
        d = results["diagnostics"]
        lines.append(f"valid: {d['valid']}")
        if d.get("violated_facets"):
            lines.append("violated facets: " + ", ".join(map(str, d["violated_facets"])))
        lines.extend(f"  {m}" for m in d.get("messages", []))

    if "energies" in results:
        e = results["energies"]
        lines.extend(
            _table(["facet", "energy"], [[j, x] for j, x in enumerate(e["energies"], start=1)])
        )
        lines.append(f"monotone: {e['monotone']}")

    if "critical_points" in results:
        lines.extend(
            _table(
                ["rho", "W", "defined", "nonvanishing"],
                [
                    [_rho_text(r["rho"]), _poly_text(r["w_value"]), r["defined"], r["nonvanishing"]]
                    for r in results["critical_points"]
                ],
            )
        )

    for key in ("hf", "product_bound"):
        if key in results:
            lines.extend(
                _table(
                    ["rho", "defined", "obstruction", "delta_rank", "hf_rank", "bound"],
                    [
                        [
                            _rho_text(r.get("rho")),
                            r["defined"],
                            _poly_text(r["obstruction"]),
                            _opt(r.get("delta_rank")),
                            _opt(r.get("hf_rank")),
                            _opt(r.get("bound")),
                        ]
                        for r in results[key]
                    ],
                )
            )

    if "items" in results:
        lines.extend(
            _table(
                ["item", "result", "detail"],
                [
                    [i["name"], "PASS" if i["passed"] else "FAIL", i.get("detail", "")]
                    for i in results["items"]
                ],
            )
        )
    return "\n".join(lines) + "\n"


# ============================================================
# Entry point
# ============================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Floer cohomology of the real Lagrangian against torus fibers of toric Fano manifolds.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--polytope", help="JSON file or builtin:NAME, e.g. builtin:cpn(3)")
    parser.add_argument("--rho", help="JSON file, 'trivial' or 'search'")
    parser.add_argument(
        "--max-degree",
        dest="max_degree",
        type=int,
        default=settings.default_max_degree,
        help="highest field degree m searched for critical points",
    )
    parser.add_argument("--method", choices=RANK_METHODS, default=RANK_EXACT)
    parser.add_argument("--format", choices=[FORMAT_JSON, FORMAT_TABLE], default=FORMAT_JSON)
    parser.add_argument(
        "--seed",
        type=int,
        default=settings.default_seed,
        help="seed of the probabilistic rank evaluation point, echoed in the report",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    return parser


def _error_report(job: JobSpecModel, error: FanoFloerError) -> Report:
    results: Dict[str, Any] = {}
    if isinstance(error, SearchBudgetExceeded):
        results["layer"] = error.layer
        results["critical_points"] = [
            CriticalReportModel.from_report(r).model_dump(mode="json", exclude_none=True)
            for r in error.reports
        ]
    return Report(
        tool=TOOL_NAME,
        version=__version__,
        job=job,
        status="error",
        results=results,
        error=str(error),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one job; returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(settings)

    try:
        job = JobSpecModel(
            command=args.command,
            polytope=args.polytope,
            rho=args.rho,
            max_degree=args.max_degree,
            method=args.method,
            format=args.format,
            seed=args.seed,
        )
    except ValidationError as e:
        error = e.errors()[0]
        print(f"{TOOL_NAME}: {'.'.join(map(str, error['loc']))}: {error['msg']}", file=sys.stderr)
        return EXIT_PARSE_ERROR

    try:
        report = run(job)
        code = EXIT_OK if report.status == "ok" else EXIT_DOMAIN_ERROR
    except InputParseError as e:
        logger.error("Parse error: %s", e)
        report, code = _error_report(job, e), EXIT_PARSE_ERROR
    except SearchBudgetExceeded as e:
        logger.error("Search budget exceeded at layer %d", e.layer)
        report, code = _error_report(job, e), EXIT_BUDGET_EXCEEDED
    except FanoFloerError as e:
        logger.error("%s: %s", type(e).__name__, e)
        report, code = _error_report(job, e), EXIT_DOMAIN_ERROR

    sys.stdout.write(emit(report, job.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
