from typing import Tuple

from config import settings
from models import ParaboseReport, RunConfig
from verification_service import verification_service

NAME = "parabose"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Verify the Green-ansatz parabose relations")
    parser.add_argument("--order", type=int, default=None, help="parabose order p (default 2)")
    parser.add_argument("--modes", type=int, default=None, help="number of modes d (default 2)")
    parser.add_argument("--cutoff", type=int, default=None, help="total occupation cutoff")
    parser.set_defaults(handler=handle, summarize=summarize)


def handle(run: RunConfig) -> Tuple[ParaboseReport, int]:
    report = verification_service.parabose(
        run.get("order", 2), run.get("modes", 2), run.get("cutoff", settings.default_bose_cutoff)
    )
    ok = report.trilinear_residual <= run.tolerance and abs(report.vacuum_pairing - report.p) <= run.tolerance
    if report.bose_reduction_defect is not None:
        ok = ok and report.bose_reduction_defect <= run.tolerance
    return report, 0 if ok else 1


def summarize(report: ParaboseReport) -> str:
    lines = [
        f"parabose p={report.p}, d={report.d}, cutoff={report.cutoff}",
        f"trilinear residual: {report.trilinear_residual:.3e}",
        f"<0|A A+|0>:         {report.vacuum_pairing:g}",
    ]
    if report.bose_reduction_defect is not None:
        lines.append(f"Bose reduction:     {report.bose_reduction_defect:.3e}")
    return "\n".join(lines)
