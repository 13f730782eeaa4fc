from typing import List, Optional, Tuple

from config import settings
from exceptions import LatticeError
from models import ContrastReport, RunConfig
from verification_service import parse_momenta, verification_service

NAME = "contrast"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Contrast the free Dirac and photon fields on a momentum lattice")
    parser.add_argument("--momenta", default=None, help='semicolon-separated 3-vectors, default "0,0,1"')
    parser.add_argument("--mass", type=float, default=None, help="electron mass (default 1)")
    parser.add_argument("--cutoff", type=int, default=None, help="photon Bose cutoff")
    parser.add_argument("--point", default=None, help='spacetime point "t,x,y,z"')
    parser.add_argument("--off-shell", default=None, help='off-shell 4-momentum for the mode current, e.g. "2,0,0,1"')
    parser.set_defaults(handler=handle, summarize=summarize)


def _vector(text: Optional[str], size: int) -> Optional[List[float]]:
    if text is None:
        return None
    values = [float(c) for c in str(text).split(",")]
    if len(values) != size:
        raise LatticeError(f"expected {size} comma-separated numbers, got '{text}'")
    return values


def passes(report: ContrastReport) -> bool:
    return (
        report.hermiticity_defect_photon <= settings.strict_tolerance
        and report.hermiticity_defect_photon_symbolic == 0
        and report.hermiticity_defect_dirac > 0.1
        and report.charge_commutator_norm == 0
        and report.photon_number_field_commutator_norm > 0
        and report.on_shell_current_max_abs == 0
    )


def handle(run: RunConfig) -> Tuple[ContrastReport, int]:
    momenta = run.get("momenta", "0,0,1")
    report = verification_service.contrast(
        parse_momenta(momenta) if isinstance(momenta, str) else momenta,
        mass=run.get("mass", 1.0),
        cutoff=run.get("cutoff", settings.default_bose_cutoff),
        x=_vector(run.get("point"), 4),
        off_shell=_vector(run.get("off_shell"), 4),
    )
    return report, 0 if passes(report) else 1


def summarize(report: ContrastReport) -> str:
    lines = [
        f"Dirac field Hermiticity defect:   {report.hermiticity_defect_dirac:.3e} (not Hermitian)",
        f"photon field Hermiticity defect:  {report.hermiticity_defect_photon:.3e} numeric, "
        f"{report.hermiticity_defect_photon_symbolic:.3e} symbolic",
        f"||[Q, H]||:                       {report.charge_commutator_norm:.3e}",
        f"||[N_photon, A(x)]||:             {report.photon_number_field_commutator_norm:.3e}",
        f"on-shell mode current max |c|:    {report.on_shell_current_max_abs:.3e}",
    ]
    if report.off_shell_current is not None:
        coefficient = ", ".join(f"{re:g}{im:+g}i" for re, im in report.off_shell_current)
        lines.append(f"off-shell mode current:           ({coefficient})")
    return "\n".join(lines)
