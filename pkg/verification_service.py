"""
Verification service: randomized suites and report assembly behind the CLI.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from exceptions import ResourceGuardError, StatisticsMismatchError
from fields import contrast_suite
from fock import FockSpace, build_fock, materialize
from models import (
    ContrastReport,
    FrequencyCheckReport,
    Kind,
    NormalOrderReport,
    ParaboseReport,
    Species,
    Statistics,
    StatisticsConfig,
    StatisticsKind,
    TowerReport,
    UrTowerReport,
)
from multiquant import Alternative, build_tower, frequency_suite, lift, tower_report
from opalg import (
    LadderSymbol,
    ModeLabel,
    OperatorExpr,
    coefficient,
    expand_green,
    format_expr,
    modes_of,
    normal_order,
    parse_expr,
    to_complex,
    vacuum_expectation,
)
from urtheory import green_parabose, ur_tower_demo

logger = logging.getLogger(__name__)

CORPUS_FAMILIES = ("fermi", "bose", "parabose")


class VerificationService:
    """Runs the engine's checks and returns report models"""

    def __init__(self):
        self.tolerance = settings.tolerance

    # Randomized expressions

    def random_expr(
        self,
        rng: np.random.Generator,
        family: str = "fermi",
        max_factors: int = 6,
        modes: int = 2,
        max_terms: int = 2,
        order: int = 2,
    ) -> OperatorExpr:
        """Random sum of monomials over concrete modes of one statistics family"""
        if family == "fermi":
            species = [Species.ELECTRON, Species.POSITRON]
        elif family == "bose":
            species = [Species.PHOTON]
        else:
            species = [Species.UR]
        terms = OperatorExpr()
        for _ in range(int(rng.integers(1, max_terms + 1))):
            length = int(rng.integers(0, max_factors + 1))
            factors = []
            for _ in range(length):
                green = int(rng.integers(1, order + 1)) if family == "parabose" else None
                factors.append(
                    LadderSymbol(
                        species[int(rng.integers(len(species)))],
                        Kind.CREATE if rng.random() < 0.5 else Kind.ANNIHILATE,
                        ModeLabel(indices=(int(rng.integers(1, modes + 1)),)),
                        green,
                    )
                )
            monomial = OperatorExpr.scalar(coefficient(int(rng.integers(-3, 4)), int(rng.integers(-2, 3))))
            for f in factors:
                monomial = monomial * OperatorExpr.symbol(f)
            terms = terms + monomial
        return terms

    def family_setup(self, family: str, modes: int = 2, order: int = 2, cutoff: int = 6) -> Tuple[FockSpace, StatisticsConfig]:
        labels = [ModeLabel(indices=(r,)) for r in range(1, modes + 1)]
        if family == "fermi":
            space = build_fock(labels, Statistics.fermi(), (Species.ELECTRON, Species.POSITRON))
            return space, StatisticsConfig()
        if family == "bose":
            return build_fock(labels, Statistics.bose(cutoff), (Species.PHOTON,)), StatisticsConfig()
        stats = StatisticsConfig().with_override(Species.UR, Statistics.parabose(order))
        return build_fock(labels, Statistics.parabose(order, cutoff // 2), (Species.UR,)), stats

    def backend_equivalence(self, count: int = 500, seed: Optional[int] = None) -> float:
        """Max |symbolic vacuum expectation - numeric vacuum element| over a random corpus"""
        seed = settings.default_seed if seed is None else seed
        rng = np.random.default_rng(seed)
        setups = {family: self.family_setup(family) for family in CORPUS_FAMILIES}
        worst = 0.0
        for i in range(count):
            family = CORPUS_FAMILIES[i % len(CORPUS_FAMILIES)]
            space, stats = setups[family]
            expr = self.random_expr(rng, family)
            symbolic = vacuum_expectation(expr, stats)
            numeric = materialize(expr, space, stats).vacuum_element()
            worst = max(worst, abs(symbolic - numeric))
        logger.info(f"✅ Backend equivalence over {count} expressions: max deviation {worst:.3e}")
        return worst

    # Normal ordering

    def numeric_residual(self, expr: OperatorExpr, canonical: OperatorExpr, stats: StatisticsConfig) -> float:
        """Operator-norm gap between input and canonical form on an adapted space"""
        pairs = modes_of(expr) or modes_of(canonical)
        if not pairs:
            return abs(to_complex(expr.identity_coefficient()) - to_complex(canonical.identity_coefficient()))
        kinds = {stats.for_species(sp).kind for sp, _ in pairs}
        if len(kinds) > 1:
            raise StatisticsMismatchError("a numeric check needs one statistics family per expression")
        statistics = stats.for_species(pairs[0][0])
        species = tuple(dict.fromkeys(sp for sp, _ in pairs))
        modes = list(dict.fromkeys(mode for _, mode in pairs))
        longest = max((len(t.factors) for t in expr.terms), default=0)
        if statistics.kind == StatisticsKind.FERMI:
            space = build_fock(modes, statistics, species)
            return (materialize(expr, space, stats) - materialize(canonical, space, stats)).norm()
        cutoff = longest + 2
        space = build_fock(modes, Statistics(kind=statistics.kind, order=statistics.order, cutoff=cutoff), species)
        gap = materialize(expr, space, stats) - materialize(canonical, space, stats)
        return float(np.linalg.norm(gap.columns(cutoff - longest), 2))

    def normal_order_report(
        self,
        text: str,
        overrides: Optional[Dict[Species, Statistics]] = None,
        expand: bool = False,
        check_numeric: bool = False,
    ) -> NormalOrderReport:
        stats = StatisticsConfig()
        for species, statistics in (overrides or {}).items():
            stats = stats.with_override(species, statistics)
        expr = parse_expr(text)
        if expand:
            expr = expand_green(expr, stats.for_species(Species.UR).order)
        canonical = normal_order(expr, stats)
        residual = self.numeric_residual(expr, canonical, stats) if check_numeric else None
        return NormalOrderReport(
            input=text,
            canonical=format_expr(canonical),
            term_count=len(canonical.terms),
            numeric_residual=residual,
        )

    # Frequency check

    def frequency_check(
        self,
        modes: int,
        cutoff: int,
        sector: int,
        draws: Optional[int] = None,
        seed: Optional[int] = None,
        tolerance: Optional[float] = None,
    ) -> FrequencyCheckReport:
        draws = settings.default_draws if draws is None else draws
        seed = settings.default_seed if seed is None else seed
        tolerance = self.tolerance if tolerance is None else tolerance
        if sector > cutoff:
            raise ResourceGuardError(f"sector {sector} exceeds the Bose cutoff {cutoff}")
        space = lift(Alternative.of_size(modes), Statistics.bose(cutoff))
        deviation, marginal = frequency_suite(space, draws, seed, [sector])
        return FrequencyCheckReport(
            modes=modes,
            cutoff=cutoff,
            sector=sector,
            draws=draws,
            seed=seed,
            tolerance=tolerance,
            max_deviation=deviation,
            marginal_max_deviation=marginal,
            passed=deviation <= tolerance and marginal <= tolerance,
        )

    # Towers

    def tower(
        self,
        lifts: Sequence[Statistics],
        alternative: int = 2,
        draws: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> TowerReport:
        built = build_tower(Alternative.of_size(alternative), lifts)
        if not built.dimension_law_holds():
            logger.warning(f"⚠️ Tower dimensions {built.dimensions} break the lift rule")
        return tower_report(built, draws, seed)

    def ur_tower(
        self,
        lifts: Optional[Sequence[Statistics]] = None,
        draws: Optional[int] = None,
        seed: Optional[int] = None,
        parabose_order: int = 2,
    ) -> UrTowerReport:
        return ur_tower_demo(lifts, draws, seed, parabose_order)

    # Fields and parabose

    def contrast(
        self,
        momenta: Sequence[Sequence[int]],
        mass: float = 1.0,
        cutoff: Optional[int] = None,
        x: Optional[Sequence[float]] = None,
        off_shell: Optional[Sequence[float]] = None,
    ) -> ContrastReport:
        return contrast_suite(momenta, mass, cutoff, x, off_shell)

    def parabose(self, p: int, d: int, cutoff: int) -> ParaboseReport:
        return green_parabose(p, d, cutoff).report()


def parse_momenta(text: str) -> List[List[int]]:
    """`0,0,1;1,0,0` -> [[0, 0, 1], [1, 0, 0]]"""
    return [[int(c) for c in chunk.split(",")] for chunk in text.split(";") if chunk.strip()]


def parse_lifts(text: str) -> List[Statistics]:
    """`fermi,bose:2` -> [Fermi, Bose(2)]"""
    return [Statistics.parse(chunk) for chunk in text.split(",") if chunk.strip()]


# Global verification service instance
verification_service = VerificationService()
