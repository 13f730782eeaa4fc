from typing import Dict, List, Tuple

from exceptions import MalformedIndexError
from models import NormalOrderReport, RunConfig, Species, Statistics
from verification_service import verification_service

NAME = "normal-order"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Rewrite an operator expression into normal order")
    parser.add_argument("expr", help='DSL text, e.g. "b(1,1) b+(1,1)"')
    parser.add_argument(
        "--stats",
        action="append",
        default=None,
        metavar="SPECIES=STATS",
        help="statistics override such as u=parabose:2 (repeatable)",
    )
    parser.add_argument("--expand-green", action="store_true", default=None, help="expand bare u factors into Green components")
    parser.add_argument("--check-numeric", action="store_true", default=None, help="report the numeric cross-check residual")
    parser.set_defaults(handler=handle, summarize=summarize)


def parse_overrides(items: List[str]) -> Dict[Species, Statistics]:
    overrides = {}
    for item in items or []:
        name, _, text = item.partition("=")
        try:
            overrides[Species(name.strip())] = Statistics.parse(text)
        except ValueError as exc:
            raise MalformedIndexError(f"bad statistics override '{item}': {exc}")
    return overrides


def handle(run: RunConfig) -> Tuple[NormalOrderReport, int]:
    report = verification_service.normal_order_report(
        run.get("expr"),
        overrides=parse_overrides(run.get("stats", [])),
        expand=bool(run.get("expand_green", False)),
        check_numeric=bool(run.get("check_numeric", False)),
    )
    failed = report.numeric_residual is not None and report.numeric_residual > run.tolerance
    return report, 1 if failed else 0


def summarize(report: NormalOrderReport) -> str:
    lines = [report.canonical]
    if report.numeric_residual is not None:
        lines.append(f"numeric residual: {report.numeric_residual:.3e}")
    return "\n".join(lines)
