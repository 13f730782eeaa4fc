from typing import Tuple, Union

from config import settings
from models import RunConfig, TowerReport, UrTowerReport
from verification_service import parse_lifts, verification_service

NAME = "tower"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Build a quantization tower and check every lift")
    parser.add_argument("--lifts", default=None, help='statistics per lift, default "fermi,bose:2"')
    parser.add_argument("--alternative", type=int, default=None, help="outcomes of the base alternative (default 2)")
    parser.add_argument("--draws", type=int, default=None, help="random truth vectors per level")
    parser.add_argument("--plain", action="store_true", default=None, help="generic level report instead of ur level names")
    parser.add_argument("--parabose-order", type=int, default=None, help="order of the attached parabose check (default 2)")
    parser.set_defaults(handler=handle, summarize=summarize)


def _worst(report: Union[TowerReport, UrTowerReport]) -> float:
    return max((level.eq11_max_deviation or 0.0) for level in report.levels)


def handle(run: RunConfig) -> Tuple[Union[TowerReport, UrTowerReport], int]:
    lifts = parse_lifts(run.get("lifts", "fermi,bose:2"))
    draws = run.get("draws", settings.default_draws)
    alternative = run.get("alternative", 2)
    if run.get("plain", False) or alternative != 2:
        report = verification_service.tower(lifts, alternative, draws, run.seed)
        return report, 0 if _worst(report) <= run.tolerance else 1
    report = verification_service.ur_tower(lifts, draws, run.seed, run.get("parabose_order", 2))
    ok = _worst(report) <= run.tolerance and report.parabose.trilinear_residual <= run.tolerance
    return report, 0 if ok else 1


def summarize(report: Union[TowerReport, UrTowerReport]) -> str:
    lines = []
    for level in report.levels:
        name = getattr(level, "name", None) or f"level {level.level}"
        deviation = "-" if level.eq11_max_deviation is None else f"{level.eq11_max_deviation:.3e}"
        lines.append(f"{name:<16} dim {level.dim:>6}  {level.statistics:<14} max |E(f) - p| {deviation}")
    if isinstance(report, UrTowerReport):
        lines.append(
            f"parabose p={report.parabose.p}: <0|A A+|0> = {report.parabose.vacuum_pairing:g}, "
            f"trilinear residual {report.parabose.trilinear_residual:.3e}"
        )
    else:
        lines.append(report.note)
        if report.series is not None:
            s = report.series
            counts = " ".join(f"{q:.3f}" for q in s.distribution)
            lines.append(
                f"level {s.level}: f_{s.outcome} = {s.frequency} over {s.runs} runs has p = {s.probability:.3f}; "
                f"hits in {s.series} series: {counts}"
            )
    return "\n".join(lines)
