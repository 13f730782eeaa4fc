"""
Truncated Fock spaces and sparse ladder-operator matrices.

Basis ordering is graded lexicographic: total occupation 0, 1, 2, ... and,
within a grade, descending lexicographic occupation vectors, so the vacuum
is always basis element 0. Fermionic signs follow the Jordan-Wigner
convention in slot order (species-major, then mode order). Parabose spaces
hold p Bose copies of every slot, Green index major, and attach the Klein
factor (-1)^(N^(1) + ... + N^(alpha-1)) to component alpha.
"""

import logging
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sps
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, svds

from config import settings
from exceptions import (
    NormalizationError,
    ResourceGuardError,
    SpaceConfigurationError,
    SpaceMismatchError,
    StatisticsMismatchError,
    UnknownModeError,
)
from models import Kind, Species, Statistics, StatisticsConfig, StatisticsKind
from opalg import LadderSymbol, ModeLabel, OperatorExpr, to_complex

logger = logging.getLogger(__name__)

Occupation = Tuple[int, ...]

_DEFAULT_SPECIES = {
    StatisticsKind.FERMI: (Species.ELECTRON,),
    StatisticsKind.BOSE: (Species.PHOTON,),
    StatisticsKind.PARABOSE: (Species.UR,),
}


def _compositions(total: int, parts: int, cap: int) -> Iterator[Occupation]:
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    for first in range(min(total, cap), -1, -1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def fock_dimension(slots: int, statistics: Statistics) -> int:
    if statistics.kind == StatisticsKind.FERMI:
        return 2 ** slots
    components = slots * statistics.green_order
    return comb(components + statistics.cutoff, statistics.cutoff)


class FockSpace:
    """Occupation-number basis over species x modes; immutable once built.

    Ladder matrices are memoized in `_cache` on first use. An entry depends
    only on its key, so a concurrent reader can at worst build it twice and
    store an equal value.
    """

    def __init__(
        self,
        modes: Sequence[ModeLabel],
        statistics: Statistics,
        species: Optional[Sequence[Species]] = None,
        max_dimension: Optional[int] = None,
    ):
        if not modes:
            raise SpaceConfigurationError("a Fock space needs at least one mode")
        if len(set(modes)) != len(modes):
            raise SpaceConfigurationError("mode labels must be distinct")
        if statistics.kind != StatisticsKind.FERMI and (statistics.cutoff is None or statistics.cutoff < 1):
            raise SpaceConfigurationError(f"{statistics.kind.value} space needs a cutoff >= 1")

        self.modes: Tuple[ModeLabel, ...] = tuple(modes)
        self.statistics = statistics
        self.species: Tuple[Species, ...] = tuple(species or _DEFAULT_SPECIES[statistics.kind])
        self.slots: Tuple[Tuple[Species, ModeLabel], ...] = tuple(
            (sp, mode) for sp in self.species for mode in self.modes
        )
        self._slot_index = {slot: i for i, slot in enumerate(self.slots)}

        limit = max_dimension or settings.max_dimension
        dimension = fock_dimension(len(self.slots), statistics)
        if dimension > limit:
            raise ResourceGuardError(
                f"Fock space of dimension {dimension} exceeds the bound {limit}"
            )

        width = len(self.slots) * statistics.green_order
        if statistics.is_fermionic:
            cap, top = 1, width
        else:
            cap, top = statistics.cutoff, statistics.cutoff
        self.basis: Tuple[Occupation, ...] = tuple(
            occ for total in range(top + 1) for occ in _compositions(total, width, cap)
        )
        self.index: Dict[Occupation, int] = {occ: i for i, occ in enumerate(self.basis)}
        self.totals = np.array([sum(occ) for occ in self.basis], dtype=int)
        self._cache: Dict[tuple, "SparseOperator"] = {}
        logger.debug(f"Built {statistics.label} Fock space over {len(self.slots)} slots, dim {self.dimension}")

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def green_order(self) -> int:
        return self.statistics.green_order

    @property
    def cutoff(self) -> Optional[int]:
        return self.statistics.cutoff

    def slot(self, mode: ModeLabel, species: Optional[Species] = None) -> int:
        key = (species or self.species[0], mode)
        if key not in self._slot_index:
            raise UnknownModeError(f"mode {key[0].value}({mode}) is not part of this space")
        return self._slot_index[key]

    def slot_occupation(self, occ: Occupation, slot: int) -> int:
        n = len(self.slots)
        return sum(occ[alpha * n + slot] for alpha in range(self.green_order))

    def __repr__(self):
        return f"FockSpace({self.statistics.label}, slots={len(self.slots)}, dim={self.dimension})"


def build_fock(
    modes: Sequence[ModeLabel],
    statistics: Statistics,
    species: Optional[Sequence[Species]] = None,
    max_dimension: Optional[int] = None,
) -> FockSpace:
    return FockSpace(modes, statistics, species, max_dimension)


class StateVector:
    __slots__ = ("space", "amplitudes")

    def __init__(self, space: FockSpace, amplitudes, normalized: bool = False):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (space.dimension,):
            raise SpaceMismatchError(
                f"state of length {amplitudes.shape[0]} does not fit dimension {space.dimension}"
            )
        if normalized and abs(np.linalg.norm(amplitudes) - 1.0) > settings.strict_tolerance:
            raise NormalizationError(f"state norm {np.linalg.norm(amplitudes)} is not 1")
        self.space = space
        self.amplitudes = amplitudes

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        norm = self.norm()
        if norm == 0.0:
            raise NormalizationError("cannot normalize the zero vector")
        return StateVector(self.space, self.amplitudes / norm)

    def expectation(self, op: "SparseOperator") -> complex:
        return op.expectation(self)

    def variance(self, op: "SparseOperator") -> float:
        mean = op.expectation(self)
        second = (op @ op).expectation(self)
        return float((second - mean * mean).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


class SparseOperator:
    """A sparse complex matrix bound to one FockSpace"""

    __slots__ = ("space", "matrix")

    def __init__(self, space: FockSpace, matrix):
        matrix = sps.csr_matrix(matrix, dtype=complex)
        if matrix.shape != (space.dimension, space.dimension):
            raise SpaceMismatchError(
                f"matrix shape {matrix.shape} does not match dimension {space.dimension}"
            )
        matrix.sum_duplicates()
        matrix.sort_indices()
        self.space = space
        self.matrix = matrix

    def _check(self, other: "SparseOperator") -> None:
        if other.space is not self.space:
            raise SpaceMismatchError("operators act on different Fock spaces")

    def __add__(self, other):
        self._check(other)
        return SparseOperator(self.space, self.matrix + other.matrix)

    def __sub__(self, other):
        self._check(other)
        return SparseOperator(self.space, self.matrix - other.matrix)

    def __neg__(self):
        return SparseOperator(self.space, -self.matrix)

    def __mul__(self, scalar):
        return SparseOperator(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        return SparseOperator(self.space, self.matrix @ other.matrix)

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(self.space, self.matrix.conj().T)

    def commutator(self, other: "SparseOperator") -> "SparseOperator":
        return self @ other - other @ self

    def anticommutator(self, other: "SparseOperator") -> "SparseOperator":
        return self @ other + other @ self

    def apply(self, state: StateVector) -> StateVector:
        if state.space is not self.space:
            raise SpaceMismatchError("state and operator live on different spaces")
        return StateVector(self.space, self.matrix @ state.amplitudes)

    def expectation(self, state: StateVector) -> complex:
        if state.space is not self.space:
            raise SpaceMismatchError("state and operator live on different spaces")
        return complex(np.vdot(state.amplitudes, self.matrix @ state.amplitudes))

    def vacuum_element(self) -> complex:
        return complex(self.matrix[0, 0])

    def max_abs(self) -> float:
        if self.matrix.nnz == 0:
            return 0.0
        return float(np.max(np.abs(self.matrix.data)))

    def norm(self) -> float:
        """Spectral norm.

        Dense up to `dense_norm_limit`. Above it the matrix is rescaled to unit
        max entry and handed to ARPACK with a wide Krylov space and a fixed
        start vector; if ARPACK still fails the dense SVD is used, which the
        space's dimension guard keeps affordable.
        """
        scale = self.max_abs() if self.matrix.nnz else 0.0
        if scale == 0.0:
            return 0.0
        dim = self.space.dimension
        if dim <= settings.dense_norm_limit:
            return float(np.linalg.norm(self.matrix.toarray(), 2))
        scaled = (self.matrix / scale).tocsr()
        try:
            top = svds(
                scaled,
                k=1,
                ncv=min(dim - 1, 64),
                v0=np.full(dim, 1.0 / np.sqrt(dim), dtype=complex),
                maxiter=20 * dim,
                return_singular_vectors=False,
            )
            return float(top[0]) * scale
        except (ArpackError, ArpackNoConvergence) as e:
            logger.warning(f"⚠️ ARPACK norm failed on dim {dim} ({e}); retrying dense")
        if dim > settings.max_dimension:
            raise ResourceGuardError(f"dense norm of dimension {dim} exceeds the bound {settings.max_dimension}")
        return float(np.linalg.norm(scaled.toarray(), 2)) * scale

    def hermiticity_defect(self) -> float:
        return (self - self.adjoint()).norm()

    def block_indices(self, max_total: int) -> np.ndarray:
        return np.flatnonzero(self.space.totals <= max_total)

    def columns(self, max_total: int) -> np.ndarray:
        """Dense image of the basis states with total occupation <= max_total"""
        idx = self.block_indices(max_total)
        return self.matrix[:, idx].toarray()

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def to_text(self) -> str:
        """One `row col re im` line per stored entry, row-major"""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        lines = [
            f"{coo.row[k]} {coo.col[k]} {coo.data[k].real!r} {coo.data[k].imag!r}"
            for k in order
        ]
        return "\n".join(lines)


def identity(space: FockSpace) -> SparseOperator:
    return SparseOperator(space, sps.identity(space.dimension, dtype=complex, format="csr"))


def zero_operator(space: FockSpace) -> SparseOperator:
    return SparseOperator(space, sps.csr_matrix((space.dimension, space.dimension), dtype=complex))


def vacuum(space: FockSpace) -> StateVector:
    amplitudes = np.zeros(space.dimension, dtype=complex)
    amplitudes[0] = 1.0
    return StateVector(space, amplitudes, normalized=True)


def basis_state(space: FockSpace, occupation: Sequence[int]) -> StateVector:
    occ = tuple(occupation)
    if occ not in space.index:
        raise UnknownModeError(f"occupation {occ} is not a basis state of {space!r}")
    amplitudes = np.zeros(space.dimension, dtype=complex)
    amplitudes[space.index[occ]] = 1.0
    return StateVector(space, amplitudes, normalized=True)


def _component_ladder(space: FockSpace, position: int, kind: Kind) -> SparseOperator:
    """Ladder on one component mode, including Jordan-Wigner or Klein signs"""
    rows: List[int] = []
    cols: List[int] = []
    values: List[float] = []
    fermionic = space.statistics.is_fermionic
    n = len(space.slots)
    sign_end = position if fermionic else (position // n) * n
    top = space.cutoff
    for col, occ in enumerate(space.basis):
        current = occ[position]
        if kind == Kind.ANNIHILATE:
            if current == 0:
                continue
            target = occ[:position] + (current - 1,) + occ[position + 1:]
            amplitude = np.sqrt(current)
        else:
            if fermionic and current == 1:
                continue
            if not fermionic and space.totals[col] >= top:
                continue
            target = occ[:position] + (current + 1,) + occ[position + 1:]
            amplitude = np.sqrt(current + 1)
        sign = -1.0 if sum(occ[:sign_end]) % 2 else 1.0
        rows.append(space.index[target])
        cols.append(col)
        values.append(sign * amplitude)
    matrix = sps.csr_matrix((values, (rows, cols)), shape=(space.dimension, space.dimension), dtype=complex)
    return SparseOperator(space, matrix)


def green_ladder(
    space: FockSpace,
    mode: ModeLabel,
    component: int,
    kind: Kind,
    species: Optional[Species] = None,
) -> SparseOperator:
    """Ladder for Green component `component` (1-based) of a parabose mode"""
    if not 1 <= component <= space.green_order:
        raise UnknownModeError(f"Green component {component} outside 1..{space.green_order}")
    slot = space.slot(mode, species)
    key = ("green", slot, component, kind)
    if key not in space._cache:
        position = (component - 1) * len(space.slots) + slot
        space._cache[key] = _component_ladder(space, position, kind)
    return space._cache[key]


def ladder(space: FockSpace, mode: ModeLabel, kind: Kind, species: Optional[Species] = None) -> SparseOperator:
    slot = space.slot(mode, species)
    key = ("ladder", slot, kind)
    if key not in space._cache:
        op = green_ladder(space, mode, 1, kind, species)
        for alpha in range(2, space.green_order + 1):
            op = op + green_ladder(space, mode, alpha, kind, species)
        space._cache[key] = op
    return space._cache[key]


def number_op(space: FockSpace, mode: ModeLabel, species: Optional[Species] = None) -> SparseOperator:
    slot = space.slot(mode, species)
    diagonal = [space.slot_occupation(occ, slot) for occ in space.basis]
    return SparseOperator(space, sps.diags(np.array(diagonal, dtype=complex), format="csr"))


def total_number(space: FockSpace) -> SparseOperator:
    return SparseOperator(space, sps.diags(space.totals.astype(complex), format="csr"))


def _space_statistics(space: FockSpace) -> StatisticsConfig:
    config = StatisticsConfig()
    symbolic = Statistics(kind=space.statistics.kind, order=space.statistics.order)
    for sp in space.species:
        config = config.with_override(sp, symbolic)
    return config


def materialize(
    expr: OperatorExpr,
    space: FockSpace,
    stats: Optional[StatisticsConfig] = None,
) -> SparseOperator:
    """Matrix image of a symbolic expression on a Fock space"""
    stats = stats or _space_statistics(space)
    result = zero_operator(space)
    unit = identity(space)
    for term in expr.terms:
        for f in term.factors:
            _check_factor(f, space, stats)
        if term.deltas:
            # surviving deltas join distinct labels, which are distinct modes here
            continue
        op = unit
        for f in term.factors:
            op = op @ _factor_matrix(f, space)
        result = result + op * to_complex(term.coefficient)
    return result


def _algebra_of(statistics: Statistics) -> Tuple[StatisticsKind, int]:
    """Parabose(1) and Bose share one algebra"""
    if statistics.kind == StatisticsKind.PARABOSE and statistics.green_order == 1:
        return StatisticsKind.BOSE, 1
    return statistics.kind, statistics.green_order


def _check_factor(f: LadderSymbol, space: FockSpace, stats: StatisticsConfig) -> None:
    if f.species not in space.species:
        raise StatisticsMismatchError(
            f"species '{f.species.value}' is not hosted by {space!r}"
        )
    wanted = stats.for_species(f.species)
    if _algebra_of(wanted) != _algebra_of(space.statistics):
        raise StatisticsMismatchError(
            f"species '{f.species.value}' is {wanted.label} but the space is {space.statistics.label}"
        )
    space.slot(f.mode, f.species)


def _factor_matrix(f: LadderSymbol, space: FockSpace) -> SparseOperator:
    if f.green is not None:
        return green_ladder(space, f.mode, f.green, f.kind, f.species)
    return ladder(space, f.mode, f.kind, f.species)


def coherent_state(
    space: FockSpace,
    mode: ModeLabel,
    alpha: complex,
    species: Optional[Species] = None,
) -> StateVector:
    """Truncated coherent state in one mode, all other modes empty"""
    if space.statistics.kind != StatisticsKind.BOSE:
        raise StatisticsMismatchError("coherent states need a Bose space")
    if abs(alpha) ** 2 > space.cutoff / 4:
        raise ResourceGuardError(
            f"|alpha|^2 = {abs(alpha) ** 2:.3g} is too large for cutoff {space.cutoff} (limit N/4)"
        )
    slot = space.slot(mode, species)
    amplitudes = np.zeros(space.dimension, dtype=complex)
    weight = 1.0 + 0.0j
    for n in range(space.cutoff + 1):
        if n > 0:
            weight *= alpha / np.sqrt(n)
        occ = tuple(n if i == slot else 0 for i in range(len(space.slots)))
        amplitudes[space.index[occ]] = weight
    return StateVector(space, amplitudes).normalized()
