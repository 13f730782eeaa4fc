"""
Iterated quantization of a finite alternative.

Level 1 is the space of truth vectors over an n-fold alternative; every
further level is a Fock space with one mode per basis state of the level
below. The probability of an outcome at one level is recovered as the
expectation of its relative frequency in the n-particle sector of the next.
"""

import logging
from fractions import Fraction
from math import factorial, log2, prod
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, model_validator
from scipy.stats import binom

from config import settings
from exceptions import (
    NormalizationError,
    ResourceGuardError,
    SectorLeakError,
    SpaceConfigurationError,
    SpaceMismatchError,
    StatisticsMismatchError,
)
from fock import FockSpace, StateVector, build_fock, fock_dimension
from models import LevelReport, SeriesReport, Species, Statistics, StatisticsKind, TowerReport
from opalg import ModeLabel

logger = logging.getLogger(__name__)

TOWER_NOTE = (
    "p(f_k) at one level is itself a probability of the next level up; "
    "each level reports the scalar p(f_k) only, and `series` shows the binomial "
    "count of series that reach the likeliest frequency"
)
SERIES_COUNT = 4


class Alternative(BaseModel):
    """A question with n mutually exclusive answers"""

    n: int
    labels: Tuple[str, ...]

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_labels(self):
        if self.n < 2:
            raise SpaceConfigurationError("an alternative needs at least two outcomes")
        if len(self.labels) != self.n:
            raise SpaceConfigurationError(f"expected {self.n} labels, got {len(self.labels)}")
        if len(set(self.labels)) != self.n:
            raise SpaceConfigurationError("outcome labels must be distinct")
        return self

    @classmethod
    def of_size(cls, n: int, prefix: str = "a") -> "Alternative":
        return cls(n=n, labels=tuple(f"{prefix}{k}" for k in range(1, n + 1)))

    @classmethod
    def binary(cls) -> "Alternative":
        return cls.of_size(2)

    @property
    def dimension(self) -> int:
        return self.n

    def modes(self) -> List[ModeLabel]:
        return [ModeLabel(label) for label in self.labels]


class TruthVector(BaseModel):
    alternative: Alternative
    psi: Tuple[complex, ...]

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @model_validator(mode="after")
    def check_normalized(self):
        if len(self.psi) != self.alternative.n:
            raise SpaceMismatchError(f"truth vector of length {len(self.psi)} for a {self.alternative.n}-fold alternative")
        norm = float(np.linalg.norm(np.asarray(self.psi, dtype=complex)))
        if abs(norm - 1.0) > settings.strict_tolerance:
            raise NormalizationError(f"truth vector norm {norm} is not 1")
        return self

    @classmethod
    def normalized(cls, alternative: Alternative, values: Sequence[complex]) -> "TruthVector":
        vector = np.asarray(values, dtype=complex)
        vector = vector / np.linalg.norm(vector)
        return cls(alternative=alternative, psi=tuple(complex(v) for v in vector))

    @classmethod
    def random(cls, alternative: Alternative, rng: np.random.Generator) -> "TruthVector":
        values = rng.normal(size=alternative.n) + 1j * rng.normal(size=alternative.n)
        return cls.normalized(alternative, values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.psi, dtype=complex)


def probability(state: TruthVector, k: int) -> float:
    """|psi_k|^2 for the 1-based outcome k"""
    if not 1 <= k <= state.alternative.n:
        raise SpaceConfigurationError(f"outcome {k} outside 1..{state.alternative.n}")
    amplitude = state.psi[k - 1]
    return float((amplitude.conjugate() * amplitude).real)


class TruthVectorSpace(BaseModel):
    """Level 1: the vector space of truth vectors over an alternative"""

    alternative: Alternative

    model_config = {"frozen": True}

    @property
    def dimension(self) -> int:
        return self.alternative.n

    def modes(self) -> List[ModeLabel]:
        return self.alternative.modes()


Level = Union[TruthVectorSpace, FockSpace]


def _modes_of(space: Union[Alternative, Level]) -> List[ModeLabel]:
    if isinstance(space, FockSpace):
        return [ModeLabel("s", occ) for occ in space.basis]
    return space.modes()


def lift(
    space: Union[Alternative, Level],
    statistics: Statistics,
    cutoff: Optional[int] = None,
    max_dimension: Optional[int] = None,
) -> FockSpace:
    """Fock space with one mode per basis element of `space`"""
    if cutoff is not None:
        statistics = Statistics(kind=statistics.kind, order=statistics.order, cutoff=cutoff)
    modes = _modes_of(space)
    species = {
        StatisticsKind.FERMI: Species.ELECTRON,
        StatisticsKind.BOSE: Species.PHOTON,
        StatisticsKind.PARABOSE: Species.UR,
    }[statistics.kind]
    lifted = build_fock(modes, statistics, (species,), max_dimension=max_dimension)
    logger.info(f"⬆️  Lifted {len(modes)} basis states with {statistics.label}: dim {lifted.dimension}")
    return lifted


def expected_dimension(below: int, statistics: Statistics) -> int:
    return fock_dimension(below, statistics)


class QuantizationTower(BaseModel):
    alternative: Alternative
    levels: Tuple[Level, ...]
    lifts: Tuple[Statistics, ...]

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @property
    def dimensions(self) -> List[int]:
        return [level.dimension for level in self.levels]

    def dimension_law_holds(self) -> bool:
        return all(
            self.levels[i + 1].dimension == expected_dimension(self.levels[i].dimension, stats)
            for i, stats in enumerate(self.lifts)
        )


def build_tower(
    alternative: Alternative,
    lifts: Sequence[Statistics],
    max_dimension: Optional[int] = None,
) -> QuantizationTower:
    levels: List[Level] = [TruthVectorSpace(alternative=alternative)]
    for statistics in lifts:
        levels.append(lift(levels[-1], statistics, max_dimension=max_dimension))
    return QuantizationTower(alternative=alternative, levels=tuple(levels), lifts=tuple(lifts))


def _psi_array(space: FockSpace, psi: Union[TruthVector, Sequence[complex]]) -> np.ndarray:
    vector = psi.as_array() if isinstance(psi, TruthVector) else np.asarray(psi, dtype=complex)
    if vector.shape != (len(space.slots),):
        raise SpaceMismatchError(f"truth vector of length {vector.shape[0]} for {len(space.slots)} modes")
    if abs(np.linalg.norm(vector) - 1.0) > settings.strict_tolerance:
        raise NormalizationError("truth vector is not normalized")
    return vector


def symmetric_product_state(space: FockSpace, psi: Union[TruthVector, Sequence[complex]], n: int) -> StateVector:
    """(sum_k psi_k a_k^+)^n |0> / sqrt(n!) on a Bose space"""
    if space.statistics.kind != StatisticsKind.BOSE:
        raise StatisticsMismatchError("symmetric product states need a Bose space")
    if n > space.cutoff:
        raise ResourceGuardError(f"sector {n} exceeds cutoff {space.cutoff}")
    vector = _psi_array(space, psi)
    amplitudes = np.zeros(space.dimension, dtype=complex)
    for i, occ in enumerate(space.basis):
        if space.totals[i] != n:
            continue
        multinomial = factorial(n) / prod(factorial(m) for m in occ)
        amplitudes[i] = np.sqrt(multinomial) * prod(vector[k] ** m for k, m in enumerate(occ))
    return StateVector(space, amplitudes)


def one_particle_state(space: FockSpace, psi: Union[TruthVector, Sequence[complex]]) -> StateVector:
    """sum_k psi_k c_k^+ |0>, valid for every statistics"""
    vector = _psi_array(space, psi)
    amplitudes = np.zeros(space.dimension, dtype=complex)
    width = len(space.slots) * space.green_order
    for k in range(len(space.slots)):
        occ = tuple(1 if i == k else 0 for i in range(width))
        amplitudes[space.index[occ]] = vector[k]
    return StateVector(space, amplitudes)


class FrequencySpectrum(BaseModel):
    outcome: int
    n: int
    support: Tuple[Tuple[Fraction, float], ...]

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @model_validator(mode="after")
    def check_distribution(self):
        total = sum(p for _, p in self.support)
        if abs(total - 1.0) > settings.tolerance:
            raise NormalizationError(f"frequency probabilities sum to {total}")
        if any(not 0 <= f <= 1 for f, _ in self.support):
            raise SpaceConfigurationError("relative frequencies must lie in [0, 1]")
        return self

    @property
    def expectation(self) -> float:
        return float(sum(float(f) * p for f, p in self.support))

    def probability_of(self, f: Fraction) -> float:
        for value, p in self.support:
            if value == f:
                return p
        return 0.0

    @property
    def is_point_mass(self) -> bool:
        return sum(1 for _, p in self.support if p > settings.tolerance) == 1


def frequency_spectrum(state: StateVector, k: int, n: int) -> FrequencySpectrum:
    """Distribution of f_k = n_k / n in the n-particle sector of `state`"""
    space = state.space
    if n < 1:
        raise SpaceConfigurationError("a frequency needs at least one run (n >= 1)")
    if not 1 <= k <= len(space.slots):
        raise SpaceConfigurationError(f"outcome {k} outside 1..{len(space.slots)}")
    weights = state.probabilities()
    leak = float(weights[space.totals != n].sum())
    if leak > settings.tolerance:
        raise SectorLeakError(f"state carries weight {leak:.3g} outside the {n}-particle sector")
    buckets = np.zeros(n + 1)
    for i, occ in enumerate(space.basis):
        if space.totals[i] == n:
            buckets[space.slot_occupation(occ, k - 1)] += weights[i]
    support = tuple((Fraction(m, n), float(buckets[m])) for m in range(n + 1))
    return FrequencySpectrum(outcome=k, n=n, support=support)


def series_spectrum(spectrum: FrequencySpectrum, f: Fraction, series: int) -> List[Tuple[int, float]]:
    """How many of `series` independent series show frequency f; binomial in p(f)"""
    p = spectrum.probability_of(f)
    return [(j, float(binom.pmf(j, series, p))) for j in range(series + 1)]


def series_report(
    space: FockSpace,
    level: int,
    seed: int,
    series: int = SERIES_COUNT,
    max_sector: Optional[int] = None,
) -> SeriesReport:
    """Distribution of how many of `series` series hit the likeliest frequency of outcome 1"""
    rng = np.random.default_rng(seed)
    values = rng.normal(size=len(space.slots)) + 1j * rng.normal(size=len(space.slots))
    psi = values / np.linalg.norm(values)
    n = sectors_for(space, max_sector)[-1]
    if space.statistics.is_fermionic:
        state = one_particle_state(space, psi)
    else:
        state = symmetric_product_state(space, psi, n)
    spectrum = frequency_spectrum(state, 1, n)
    f, p = max(spectrum.support, key=lambda item: item[1])
    return SeriesReport(
        level=level,
        outcome=1,
        runs=n,
        frequency=str(f),
        probability=p,
        series=series,
        distribution=[q for _, q in series_spectrum(spectrum, f, series)],
    )


def frequency_deviation(state: StateVector, psi: np.ndarray, n: int) -> Tuple[float, float]:
    """Max |E(f_k) - |psi_k|^2| over k, and |sum_k E(f_k) - 1|"""
    expectations = [frequency_spectrum(state, k, n).expectation for k in range(1, len(psi) + 1)]
    deviation = max(abs(e - abs(a) ** 2) for e, a in zip(expectations, psi))
    marginal = abs(sum(expectations) - 1.0)
    return deviation, marginal


def sectors_for(space: FockSpace, max_sector: Optional[int] = None) -> List[int]:
    if space.statistics.is_fermionic:
        return [1]
    top = min(space.cutoff, max_sector if max_sector is not None else settings.max_sector)
    return list(range(1, top + 1))


def frequency_suite(
    space: FockSpace,
    draws: int,
    seed: int,
    sectors: Optional[Sequence[int]] = None,
) -> Tuple[float, float]:
    """Randomized check of E(f_k) = p_k; returns (max deviation, max marginal deviation)"""
    if space.statistics.kind == StatisticsKind.PARABOSE:
        raise StatisticsMismatchError("frequency checks are defined for Fermi and Bose lifts")
    sectors = list(sectors) if sectors is not None else sectors_for(space)
    worst, worst_marginal = 0.0, 0.0
    children = np.random.SeedSequence(seed).spawn(draws)
    for child in children:
        rng = np.random.default_rng(child)
        values = rng.normal(size=len(space.slots)) + 1j * rng.normal(size=len(space.slots))
        psi = values / np.linalg.norm(values)
        for n in sectors:
            if n == 0:
                continue
            if space.statistics.is_fermionic:
                if n != 1:
                    raise StatisticsMismatchError("fermionic product states exist only in the one-particle sector")
                state = one_particle_state(space, psi)
            else:
                state = symmetric_product_state(space, psi, n)
            deviation, marginal = frequency_deviation(state, psi, n)
            worst = max(worst, deviation)
            worst_marginal = max(worst_marginal, marginal)
    logger.info(f"✅ Frequency check on {space!r}: max deviation {worst:.3e} over {draws} draws")
    return worst, worst_marginal


def tower_report(
    tower: QuantizationTower,
    draws: Optional[int] = None,
    seed: Optional[int] = None,
    max_sector: Optional[int] = None,
) -> TowerReport:
    if len(tower.levels) < 2:
        raise SpaceConfigurationError("a tower report needs at least two levels")
    draws = draws if draws is not None else settings.default_draws
    seed = seed if seed is not None else settings.default_seed
    levels = [
        LevelReport(
            level=1,
            dim=tower.levels[0].dimension,
            statistics="truth vectors",
            interpretation=f"truth vectors over the {tower.alternative.n}-fold alternative",
            information_bits=log2(tower.levels[0].dimension),
        )
    ]
    for position, (space, statistics) in enumerate(zip(tower.levels[1:], tower.lifts), start=2):
        deviation = None
        if statistics.kind != StatisticsKind.PARABOSE:
            deviation, _ = frequency_suite(space, draws, seed + position, sectors_for(space, max_sector))
        levels.append(
            LevelReport(
                level=position,
                dim=space.dimension,
                statistics=statistics.label,
                cutoff=statistics.cutoff,
                interpretation=f"objects of level {position} are collectives of level {position - 1} quanta",
                information_bits=log2(space.dimension),
                eq11_max_deviation=deviation,
            )
        )
    series = None
    if tower.lifts[0].kind != StatisticsKind.PARABOSE:
        series = series_report(tower.levels[1], 2, seed, max_sector=max_sector)
    return TowerReport(levels=levels, seed=seed, note=TOWER_NOTE, series=series)
