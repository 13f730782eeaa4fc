from typing import Tuple

from config import settings
from models import FrequencyCheckReport, RunConfig
from verification_service import verification_service

NAME = "eq11"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Check that probabilities are expectations of relative frequencies")
    parser.add_argument("--modes", type=int, default=None, help="outcomes of the alternative (default 2)")
    parser.add_argument("--cutoff", type=int, default=None, help="Bose cutoff of the lifted space (default 6)")
    parser.add_argument("--sector", type=int, default=None, help="particle number n of the runs (default 4)")
    parser.add_argument("--draws", type=int, default=None, help=f"random truth vectors (default {settings.default_draws})")
    parser.set_defaults(handler=handle, summarize=summarize)


def handle(run: RunConfig) -> Tuple[FrequencyCheckReport, int]:
    report = verification_service.frequency_check(
        modes=run.get("modes", 2),
        cutoff=run.get("cutoff", 6),
        sector=run.get("sector", 4),
        draws=run.get("draws", settings.default_draws),
        seed=run.seed,
        tolerance=run.tolerance,
    )
    return report, 0 if report.passed else 1


def summarize(report: FrequencyCheckReport) -> str:
    verdict = "PASS" if report.passed else "FAIL"
    return (
        f"{verdict}: max |E(f_k) - p_k| = {report.max_deviation:.3e} "
        f"over {report.draws} draws (modes={report.modes}, cutoff={report.cutoff}, n={report.sector}, seed={report.seed})"
    )
