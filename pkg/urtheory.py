"""
The ur: a quantized binary alternative with SU(2) symmetry.

Holds spinor states of single urs and of ur tensor products, the isometric
embedding of finite state spaces into ur registers, parabose ur operators
realized by the Green ansatz, and the three-level ur tower report.
"""

import logging
from functools import reduce
from math import ceil, log2
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, model_validator

from config import settings
from exceptions import NonUnitaryError, NormalizationError, SpaceConfigurationError
from fock import FockSpace, SparseOperator, build_fock, green_ladder, identity, ladder
from models import Kind, ParaboseReport, Species, Statistics, StatisticsKind, UrLevelReport, UrTowerReport
from multiquant import Alternative, build_tower, frequency_suite, sectors_for
from opalg import ModeLabel

logger = logging.getLogger(__name__)

LEVEL_NAMES = ("ur", "particle", "quantized field")


def _check_normalized(vector: np.ndarray) -> None:
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > settings.strict_tolerance:
        raise NormalizationError(f"state norm {norm} is not 1")


class UrState(BaseModel):
    spinor: Tuple[complex, ...]

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @model_validator(mode="after")
    def check_spinor(self):
        if len(self.spinor) != 2:
            raise SpaceConfigurationError("an ur spinor has two components")
        _check_normalized(self.as_array())
        return self

    @classmethod
    def of(cls, values: Sequence[complex]) -> "UrState":
        vector = np.asarray(values, dtype=complex)
        vector = vector / np.linalg.norm(vector)
        return cls(spinor=(complex(vector[0]), complex(vector[1])))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.spinor, dtype=complex)

    def to_tensor(self) -> "UrTensorState":
        return UrTensorState(m=1, amplitudes=tuple(self.spinor))


class UrTensorState(BaseModel):
    m: int
    amplitudes: Tuple[complex, ...]

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @model_validator(mode="after")
    def check_register(self):
        if self.m < 1:
            raise SpaceConfigurationError("a ur register holds at least one ur")
        if len(self.amplitudes) != 2 ** self.m:
            raise SpaceConfigurationError(f"{self.m} urs need {2 ** self.m} amplitudes, got {len(self.amplitudes)}")
        _check_normalized(self.as_array())
        return self

    @classmethod
    def product(cls, *states: UrState) -> "UrTensorState":
        if not states:
            raise SpaceConfigurationError("a product needs at least one ur")
        vector = reduce(np.kron, (s.as_array() for s in states))
        return cls(m=len(states), amplitudes=tuple(complex(v) for v in vector))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.amplitudes, dtype=complex)

    def inner(self, other: "UrTensorState") -> complex:
        if other.m != self.m:
            raise SpaceConfigurationError("inner product of registers of different size")
        return complex(np.vdot(self.as_array(), other.as_array()))


def check_su2(g: np.ndarray) -> np.ndarray:
    g = np.asarray(g, dtype=complex)
    tol = settings.strict_tolerance
    if g.shape != (2, 2):
        raise NonUnitaryError(f"expected a 2x2 matrix, got shape {g.shape}")
    if np.abs(g.conj().T @ g - np.eye(2)).max() > tol:
        raise NonUnitaryError("matrix is not unitary")
    if abs(np.linalg.det(g) - 1.0) > tol:
        raise NonUnitaryError("matrix does not have unit determinant")
    return g


def su2_act(g: np.ndarray, state: Union[UrState, UrTensorState]) -> Union[UrState, UrTensorState]:
    """g on one ur, g x ... x g on a register"""
    g = check_su2(g)
    if isinstance(state, UrState):
        out = g @ state.as_array()
        return UrState(spinor=(complex(out[0]), complex(out[1])))
    vector = state.as_array().reshape((2,) * state.m)
    for axis in range(state.m):
        vector = np.moveaxis(np.tensordot(g, vector, axes=([1], [axis])), 0, axis)
    return UrTensorState(m=state.m, amplitudes=tuple(complex(v) for v in vector.reshape(-1)))


def random_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random SU(2) element from ZYZ Euler angles"""
    alpha = rng.uniform(0.0, 2 * np.pi)
    beta = np.arccos(rng.uniform(-1.0, 1.0))
    gamma = rng.uniform(0.0, 4 * np.pi)
    rz = lambda theta: np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    ry = np.array([[np.cos(beta / 2), -np.sin(beta / 2)], [np.sin(beta / 2), np.cos(beta / 2)]], dtype=complex)
    return rz(alpha) @ ry @ rz(gamma)


def embed(state: Sequence[complex]) -> UrTensorState:
    """Pad an n-vector onto the first n basis states of ceil(log2 n) urs"""
    vector = np.asarray(state, dtype=complex)
    n = vector.shape[0]
    if n < 2:
        raise SpaceConfigurationError("only states of dimension >= 2 embed into urs")
    _check_normalized(vector)
    m = ceil(log2(n))
    padded = np.zeros(2 ** m, dtype=complex)
    padded[:n] = vector
    return UrTensorState(m=m, amplitudes=tuple(complex(v) for v in padded))


class GreenParaboseSet:
    """Composite ur operators A_r = sum over Green components of a_r^(alpha)"""

    def __init__(self, p: int, d: int, cutoff: int, max_dimension: Optional[int] = None):
        if p < 1 or d < 1:
            raise SpaceConfigurationError("parabose order and mode count must be positive")
        self.p = p
        self.d = d
        self.cutoff = cutoff
        self.modes = [ModeLabel(indices=(r,)) for r in range(1, d + 1)]
        self.space: FockSpace = build_fock(
            self.modes, Statistics.parabose(p, cutoff), species=(Species.UR,), max_dimension=max_dimension
        )
        logger.info(f"✅ Green parabose set p={p}, d={d}, cutoff={cutoff}: dim {self.space.dimension}")

    def annihilator(self, r: int) -> SparseOperator:
        return ladder(self.space, self.modes[r - 1], Kind.ANNIHILATE)

    def creator(self, r: int) -> SparseOperator:
        return ladder(self.space, self.modes[r - 1], Kind.CREATE)

    def component(self, r: int, alpha: int, kind: Kind) -> SparseOperator:
        return green_ladder(self.space, self.modes[r - 1], alpha, kind)

    def _safe_columns(self, op: SparseOperator) -> float:
        return float(np.abs(op.columns(self.cutoff - 1)).max(initial=0.0))

    def trilinear_residual(self) -> float:
        """Max over k, l, m of the parabose triple relations on sub-cutoff columns"""
        worst = 0.0
        rng = range(1, self.d + 1)
        for k in rng:
            a_k = self.annihilator(k)
            for l in rng:
                for m in rng:
                    mixed = a_k.commutator(self.creator(l).anticommutator(self.annihilator(m)))
                    if k == l:
                        mixed = mixed - self.annihilator(m) * 2
                    pure = a_k.commutator(self.annihilator(l).anticommutator(self.annihilator(m)))
                    worst = max(worst, self._safe_columns(mixed), pure.max_abs())
        return worst

    def vacuum_pairing(self, r: int = 1) -> float:
        """<0| A_r A_r^+ |0>, equal to the order p"""
        return float((self.annihilator(r) @ self.creator(r)).vacuum_element().real)

    def bose_reduction_defect(self) -> Optional[float]:
        """For p = 1, distance to plain Bose ladders plus the CCR defect below cutoff"""
        if self.p != 1:
            return None
        bose = build_fock(self.modes, Statistics.bose(self.cutoff), species=(Species.UR,))
        unit = identity(self.space)
        worst = 0.0
        for r, mode in enumerate(self.modes, start=1):
            plain = ladder(bose, mode, Kind.ANNIHILATE).to_dense()
            worst = max(worst, float(np.abs(self.annihilator(r).to_dense() - plain).max()))
            for s in range(1, self.d + 1):
                ccr = self.annihilator(r).commutator(self.creator(s))
                if r == s:
                    ccr = ccr - unit
                worst = max(worst, self._safe_columns(ccr))
        return worst

    def report(self) -> ParaboseReport:
        return ParaboseReport(
            p=self.p,
            d=self.d,
            cutoff=self.cutoff,
            trilinear_residual=self.trilinear_residual(),
            vacuum_pairing=self.vacuum_pairing(),
            bose_reduction_defect=self.bose_reduction_defect(),
        )


def green_parabose(p: int, d: int, cutoff: int, max_dimension: Optional[int] = None) -> GreenParaboseSet:
    return GreenParaboseSet(p, d, cutoff, max_dimension)


def level_name(position: int) -> str:
    return LEVEL_NAMES[position] if position < len(LEVEL_NAMES) else f"level {position + 1}"


def ur_tower_demo(
    lifts: Optional[Sequence[Statistics]] = None,
    draws: Optional[int] = None,
    seed: Optional[int] = None,
    parabose_order: int = 2,
    max_dimension: Optional[int] = None,
) -> UrTowerReport:
    """Binary alternative lifted step by step; frequency checks at every Fermi or Bose lift"""
    lifts = list(lifts) if lifts is not None else [Statistics.fermi(), Statistics.bose(2)]
    draws = draws if draws is not None else settings.default_draws
    seed = seed if seed is not None else settings.default_seed
    tower = build_tower(Alternative.binary(), lifts, max_dimension=max_dimension)

    levels: List[UrLevelReport] = [
        UrLevelReport(name=level_name(0), dim=tower.levels[0].dimension, statistics="truth vectors")
    ]
    for position, (space, statistics) in enumerate(zip(tower.levels[1:], lifts), start=1):
        deviation = None
        if statistics.kind != StatisticsKind.PARABOSE:
            deviation, _ = frequency_suite(space, draws, seed + position, sectors_for(space))
        levels.append(
            UrLevelReport(
                name=level_name(position),
                dim=space.dimension,
                statistics=statistics.label,
                eq11_max_deviation=deviation,
            )
        )

    parabose = green_parabose(parabose_order, 1, settings.default_bose_cutoff).report()
    logger.info(f"✅ Ur tower dims {tower.dimensions}, parabose pairing {parabose.vacuum_pairing:.3g}")
    return UrTowerReport(levels=levels, parabose=parabose, seed=seed)
