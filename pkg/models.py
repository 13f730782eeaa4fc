from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Optional, List, Dict, Any
from enum import Enum


class Species(str, Enum):
    ELECTRON = "b"
    POSITRON = "d"
    PHOTON = "a"
    UR = "u"


class Kind(str, Enum):
    CREATE = "create"
    ANNIHILATE = "annihilate"


class StatisticsKind(str, Enum):
    FERMI = "fermi"
    BOSE = "bose"
    PARABOSE = "parabose"


class OutputFormat(str, Enum):
    JSON = "json"
    PRETTY = "pretty"


SPECIES_ORDER = {species: rank for rank, species in enumerate(Species)}


class Statistics(BaseModel):
    """Statistics tag; the cutoff is only meaningful for Fock spaces"""

    kind: StatisticsKind
    order: int = Field(1, ge=1)
    cutoff: Optional[int] = None

    model_config = {"frozen": True}

    @field_validator("cutoff")
    @classmethod
    def cutoff_positive(cls, v):
        if v is not None and v < 1:
            raise ValueError("cutoff must be at least 1")
        return v

    @model_validator(mode="after")
    def fermi_has_no_order(self):
        if self.kind != StatisticsKind.PARABOSE and self.order != 1:
            raise ValueError("only parabose statistics carry an order")
        return self

    @classmethod
    def fermi(cls) -> "Statistics":
        return cls(kind=StatisticsKind.FERMI)

    @classmethod
    def bose(cls, cutoff: Optional[int] = None) -> "Statistics":
        return cls(kind=StatisticsKind.BOSE, cutoff=cutoff)

    @classmethod
    def parabose(cls, order: int, cutoff: Optional[int] = None) -> "Statistics":
        return cls(kind=StatisticsKind.PARABOSE, order=order, cutoff=cutoff)

    @classmethod
    def parse(cls, text: str) -> "Statistics":
        """Parse `fermi`, `bose`, `bose:3`, `parabose:2` or `parabose:2:3`"""
        parts = text.strip().lower().split(":")
        kind = StatisticsKind(parts[0])
        numbers = [int(p) for p in parts[1:]]
        if kind == StatisticsKind.FERMI:
            if numbers:
                raise ValueError("fermi statistics take no parameters")
            return cls.fermi()
        if kind == StatisticsKind.BOSE:
            return cls.bose(numbers[0] if numbers else None)
        if not numbers:
            raise ValueError("parabose statistics need an order")
        return cls.parabose(numbers[0], numbers[1] if len(numbers) > 1 else None)

    @property
    def is_fermionic(self) -> bool:
        return self.kind == StatisticsKind.FERMI

    @property
    def green_order(self) -> int:
        return self.order if self.kind == StatisticsKind.PARABOSE else 1

    @property
    def label(self) -> str:
        if self.kind == StatisticsKind.FERMI:
            return "Fermi"
        if self.kind == StatisticsKind.BOSE:
            return "Bose" if self.cutoff is None else f"Bose({self.cutoff})"
        if self.cutoff is None:
            return f"Parabose({self.order})"
        return f"Parabose({self.order}, {self.cutoff})"


def default_statistics() -> Dict[Species, Statistics]:
    return {
        Species.ELECTRON: Statistics.fermi(),
        Species.POSITRON: Statistics.fermi(),
        Species.PHOTON: Statistics.bose(),
        Species.UR: Statistics.parabose(1),
    }


class StatisticsConfig(BaseModel):
    species: Dict[Species, Statistics] = Field(default_factory=default_statistics)

    model_config = {"frozen": True}

    def for_species(self, species: Species) -> Statistics:
        return self.species[species]

    def with_override(self, species: Species, statistics: Statistics) -> "StatisticsConfig":
        updated = dict(self.species)
        updated[species] = statistics
        return StatisticsConfig(species=updated)


# Report models
class NormalOrderReport(BaseModel):
    input: str
    canonical: str
    term_count: int
    numeric_residual: Optional[float] = None


class FrequencyCheckReport(BaseModel):
    modes: int
    cutoff: int
    sector: int
    draws: int
    seed: int
    tolerance: float
    max_deviation: float
    marginal_max_deviation: float
    passed: bool


class LevelReport(BaseModel):
    level: int
    dim: int
    statistics: str
    cutoff: Optional[int] = None
    interpretation: str
    information_bits: float
    eq11_max_deviation: Optional[float] = None


class SeriesReport(BaseModel):
    level: int
    outcome: int
    runs: int
    frequency: str
    probability: float
    series: int
    distribution: List[float]


class TowerReport(BaseModel):
    levels: List[LevelReport]
    seed: int
    note: str
    series: Optional[SeriesReport] = None


class ParaboseReport(BaseModel):
    p: int
    d: int
    cutoff: int
    trilinear_residual: float
    vacuum_pairing: float
    bose_reduction_defect: Optional[float] = None


class UrLevelReport(BaseModel):
    name: str
    dim: int
    statistics: str
    eq11_max_deviation: Optional[float] = None


class UrTowerReport(BaseModel):
    levels: List[UrLevelReport]
    parabose: ParaboseReport
    seed: int


class PhotonNumberStatistics(BaseModel):
    mean: float
    variance: float
    number_field_commutator_norm: Optional[float] = None


class ContrastReport(BaseModel):
    momenta: List[List[int]]
    mass: float
    cutoff: int
    x: List[float]
    hermiticity_defect_dirac: float
    hermiticity_defect_photon: float
    hermiticity_defect_photon_symbolic: float
    charge_commutator_norm: float
    photon_number_field_commutator_norm: float
    on_shell_current_max_abs: float
    off_shell_current: Optional[List[List[float]]] = None


class RunConfig(BaseModel):
    """Merged parameters of one command invocation"""

    seed: int
    tolerance: float
    out: Optional[str] = None
    format: OutputFormat = OutputFormat.JSON
    params: Dict[str, Any] = Field(default_factory=dict)

    def get(self, key: str, default: Any = None) -> Any:
        value = self.params.get(key)
        return default if value is None else value
