"""
Free Dirac and photon fields on a small momentum lattice.

Conventions: metric (+,-,-,-), Dirac representation of the gamma matrices,
lattice volume 1 so mode integrals become plain sums, radiation gauge for
the photon (A^0 = 0, two transverse polarizations). Every field operator is
kept twice: symbolically, as float-weighted ladder monomials, and
numerically, assembled directly from the ladder matrices of the Fock space.
"""

import cmath
import logging
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh

from config import settings
from exceptions import LatticeError, OffShellModeError, PolarizationError
from fock import (
    FockSpace,
    SparseOperator,
    StateVector,
    build_fock,
    identity,
    ladder,
    materialize,
    number_op,
    total_number,
    zero_operator,
)
from models import ContrastReport, Kind, PhotonNumberStatistics, Species, Statistics, StatisticsConfig
from opalg import (
    ONE,
    LadderSymbol,
    ModeLabel,
    OperatorExpr,
    Term,
    normal_order,
    to_complex,
    vacuum_expectation,
)

logger = logging.getLogger(__name__)

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _gamma_matrices() -> Tuple[np.ndarray, ...]:
    zero = np.zeros((2, 2), dtype=complex)
    unit = np.eye(2, dtype=complex)
    gamma0 = np.block([[unit, zero], [zero, -unit]])
    spatial = tuple(np.block([[zero, s], [-s, zero]]) for s in _SIGMA)
    return (gamma0,) + spatial


GAMMA = _gamma_matrices()

SAMPLE_POINT = (0.3, 0.1, -0.2, 0.5)


def minkowski(a: Sequence[complex], b: Sequence[complex]) -> complex:
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]


# Lattices and mode bases

class MomentumLattice:
    def __init__(self, momenta: Iterable[Sequence[int]], mass: float = 0.0):
        self.momenta: Tuple[Tuple[int, int, int], ...] = tuple(tuple(int(c) for c in p) for p in momenta)
        if not self.momenta:
            raise LatticeError("a lattice needs at least one momentum")
        if any(len(p) != 3 for p in self.momenta):
            raise LatticeError("momenta are 3-vectors")
        if len(set(self.momenta)) != len(self.momenta):
            raise LatticeError("lattice momenta must be distinct")
        if mass < 0:
            raise LatticeError("mass must be nonnegative")
        if mass == 0 and (0, 0, 0) in self.momenta:
            raise LatticeError("a massless mode needs nonzero momentum")
        self.mass = float(mass)

    @cached_property
    def energies(self) -> Tuple[float, ...]:
        return tuple(float(np.sqrt(sum(c * c for c in p) + self.mass ** 2)) for p in self.momenta)

    def four_momentum(self, i: int) -> np.ndarray:
        return np.array([self.energies[i], *self.momenta[i]], dtype=float)

    def phase(self, i: int, x: Sequence[float]) -> complex:
        """e^{-ipx} with px = E t - p.x"""
        return cmath.exp(-1j * float(minkowski(self.four_momentum(i), x)))

    def __len__(self):
        return len(self.momenta)


class DiracModeBasis:
    """Spinors u(p,s), v(p,s) with u-bar u = 1, v-bar v = -1"""

    spins = (1, 2)

    def __init__(self, lattice: MomentumLattice, max_dimension: Optional[int] = None):
        if lattice.mass <= 0:
            raise LatticeError("the Dirac mode measure sqrt(m/E) needs a positive mass")
        self.lattice = lattice
        self.max_dimension = max_dimension

    def _norm_and_slash(self, i: int) -> Tuple[float, np.ndarray]:
        energy, mass = self.lattice.energies[i], self.lattice.mass
        p = self.lattice.momenta[i]
        sigma_p = sum(c * s for c, s in zip(p, _SIGMA))
        return np.sqrt((energy + mass) / (2 * mass)), sigma_p / (energy + mass)

    def u(self, i: int, s: int) -> np.ndarray:
        scale, slash = self._norm_and_slash(i)
        chi = np.eye(2, dtype=complex)[s - 1]
        return scale * np.concatenate([chi, slash @ chi])

    def v(self, i: int, s: int) -> np.ndarray:
        scale, slash = self._norm_and_slash(i)
        eta = np.eye(2, dtype=complex)[s - 1]
        return scale * np.concatenate([slash @ eta, eta])

    def dirac_residuals(self) -> float:
        worst = 0.0
        for i, p in enumerate(self.lattice.momenta):
            energy, mass = self.lattice.energies[i], self.lattice.mass
            slash = GAMMA[0] * energy - sum(c * g for c, g in zip(p, GAMMA[1:]))
            for s in self.spins:
                worst = max(worst, np.abs((slash - mass * np.eye(4)) @ self.u(i, s)).max())
                worst = max(worst, np.abs((slash + mass * np.eye(4)) @ self.v(i, s)).max())
        return float(worst)

    def mode(self, i: int, s: int) -> ModeLabel:
        return ModeLabel("p", (*self.lattice.momenta[i], s))

    def modes(self) -> List[ModeLabel]:
        return [self.mode(i, s) for i in range(len(self.lattice)) for s in self.spins]

    def weight(self, i: int) -> float:
        return float(np.sqrt(self.lattice.mass / self.lattice.energies[i]))

    @cached_property
    def space(self) -> FockSpace:
        return build_fock(
            self.modes(),
            Statistics.fermi(),
            species=(Species.ELECTRON, Species.POSITRON),
            max_dimension=self.max_dimension,
        )


def polarization_vectors(k: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Two real transverse unit vectors; e1 from Gram-Schmidt on x (or y), e2 = k-hat x e1"""
    k_hat = np.asarray(k, dtype=float) / np.linalg.norm(k)
    reference = np.array([1.0, 0.0, 0.0])
    if abs(k_hat @ reference) > 0.9:
        reference = np.array([0.0, 1.0, 0.0])
    e1 = reference - (reference @ k_hat) * k_hat
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(k_hat, e1)
    return e1, e2


class PhotonModeBasis:
    polarizations_per_mode = (1, 2)

    def __init__(
        self,
        lattice: MomentumLattice,
        cutoff: Optional[int] = None,
        polarizations: Optional[Sequence[Tuple[Sequence[float], Sequence[float]]]] = None,
        max_dimension: Optional[int] = None,
    ):
        if lattice.mass != 0:
            raise LatticeError("the photon lattice must be massless")
        self.lattice = lattice
        self.cutoff = cutoff or settings.default_bose_cutoff
        self.max_dimension = max_dimension
        if polarizations is None:
            polarizations = [polarization_vectors(p) for p in lattice.momenta]
        if len(polarizations) != len(lattice):
            raise PolarizationError("one polarization pair per momentum is required")
        self.polarizations = tuple(
            (np.asarray(e1, dtype=float), np.asarray(e2, dtype=float)) for e1, e2 in polarizations
        )
        self._validate()

    def _validate(self) -> None:
        tol = settings.strict_tolerance
        for p, (e1, e2) in zip(self.lattice.momenta, self.polarizations):
            k = np.asarray(p, dtype=float)
            if abs(e1 @ k) > tol or abs(e2 @ k) > tol:
                raise PolarizationError(f"polarization not transverse to k = {p}")
            if abs(e1 @ e1 - 1) > tol or abs(e2 @ e2 - 1) > tol or abs(e1 @ e2) > tol:
                raise PolarizationError(f"polarizations for k = {p} are not orthonormal")

    def epsilon(self, i: int, polarization: int) -> np.ndarray:
        return self.polarizations[i][polarization - 1]

    def epsilon4(self, i: int, polarization: int) -> np.ndarray:
        return np.concatenate([[0.0], self.epsilon(i, polarization)])

    def mode(self, i: int, polarization: int) -> ModeLabel:
        return ModeLabel("k", (*self.lattice.momenta[i], polarization))

    def modes(self) -> List[ModeLabel]:
        return [self.mode(i, lam) for i in range(len(self.lattice)) for lam in self.polarizations_per_mode]

    def weight(self, i: int) -> float:
        return float(1.0 / np.sqrt(2.0 * self.lattice.energies[i]))

    @cached_property
    def space(self) -> FockSpace:
        return build_fock(
            self.modes(),
            Statistics.bose(self.cutoff),
            species=(Species.PHOTON,),
            max_dimension=self.max_dimension,
        )


# Symbolic field components

TermKey = Tuple[tuple, tuple]


class FieldComponent:
    """Sum of float-weighted ladder monomials; exact algebra happens on the monomials"""

    __slots__ = ("weights",)

    def __init__(self, weights: Optional[Dict[TermKey, complex]] = None):
        self.weights: Dict[TermKey, complex] = {
            key: w for key, w in (weights or {}).items() if w != 0
        }

    @classmethod
    def from_pieces(cls, pieces: Iterable[Tuple[complex, OperatorExpr]]) -> "FieldComponent":
        weights: Dict[TermKey, complex] = {}
        for weight, expr in pieces:
            for term in expr.terms:
                weights[term.key] = weights.get(term.key, 0) + weight * to_complex(term.coefficient)
        return cls(weights)

    @classmethod
    def monomial(cls, weight: complex, *factors: LadderSymbol) -> "FieldComponent":
        return cls({((), tuple(factors)): complex(weight)})

    @staticmethod
    def _unit(key: TermKey) -> OperatorExpr:
        return OperatorExpr([Term(ONE, key[0], key[1])])

    def __add__(self, other: "FieldComponent") -> "FieldComponent":
        merged = dict(self.weights)
        for key, w in other.weights.items():
            merged[key] = merged.get(key, 0) + w
        return FieldComponent(merged)

    def __neg__(self) -> "FieldComponent":
        return FieldComponent({key: -w for key, w in self.weights.items()})

    def __sub__(self, other: "FieldComponent") -> "FieldComponent":
        return self + (-other)

    def scale(self, c: complex) -> "FieldComponent":
        return FieldComponent({key: w * c for key, w in self.weights.items()})

    def __mul__(self, other: "FieldComponent") -> "FieldComponent":
        product: Dict[TermKey, complex] = {}
        for (d1, f1), w1 in self.weights.items():
            for (d2, f2), w2 in other.weights.items():
                key = (d1 + d2, f1 + f2)
                product[key] = product.get(key, 0) + w1 * w2
        return FieldComponent(product)

    def adjoint(self) -> "FieldComponent":
        return FieldComponent(
            {
                (deltas, tuple(f.dagger() for f in reversed(factors))): w.conjugate()
                for (deltas, factors), w in self.weights.items()
            }
        )

    def normal_ordered(self, stats: Optional[StatisticsConfig] = None, drop_vacuum: bool = False) -> "FieldComponent":
        pieces = [(w, normal_order(self._unit(key), stats)) for key, w in self.weights.items()]
        ordered = FieldComponent.from_pieces(pieces)
        if drop_vacuum:
            ordered.weights.pop(((), ()), None)
        return ordered

    def distance(self, other: "FieldComponent") -> float:
        keys = set(self.weights) | set(other.weights)
        return max((abs(self.weights.get(k, 0) - other.weights.get(k, 0)) for k in keys), default=0.0)

    def hermiticity_defect(self, stats: Optional[StatisticsConfig] = None) -> float:
        """Largest coefficient mismatch between the component and its adjoint, both normal-ordered"""
        if all(len(factors) <= 1 for _, factors in self.weights):
            return self.distance(self.adjoint())
        return self.normal_ordered(stats).distance(self.adjoint().normal_ordered(stats))

    def vacuum_expectation(self, stats: Optional[StatisticsConfig] = None) -> complex:
        return sum(
            (w * vacuum_expectation(self._unit(key), stats) for key, w in self.weights.items()),
            0j,
        )

    def materialize(self, space: FockSpace) -> SparseOperator:
        result = zero_operator(space)
        for key, w in self.weights.items():
            result = result + materialize(self._unit(key), space) * w
        return result

    def __len__(self):
        return len(self.weights)


class FieldOperator:
    """Symbolic and numeric forms of a multi-component field at one point"""

    def __init__(
        self,
        name: str,
        space: FockSpace,
        x: Sequence[float],
        symbolic: Sequence[FieldComponent],
        numeric: Sequence[SparseOperator],
    ):
        self.name = name
        self.space = space
        self.x = tuple(float(c) for c in x)
        self.symbolic = tuple(symbolic)
        self.numeric = tuple(numeric)

    def __len__(self):
        return len(self.symbolic)

    def __getitem__(self, index: int) -> SparseOperator:
        return self.numeric[index]

    def agreement(self) -> float:
        """Max spectral-norm gap between materialized symbolic and direct numeric forms"""
        return max((c.materialize(self.space) - n).norm() for c, n in zip(self.symbolic, self.numeric))

    def hermiticity_defect(self) -> float:
        return max(n.hermiticity_defect() for n in self.numeric)

    def symbolic_hermiticity_defect(self, stats: Optional[StatisticsConfig] = None) -> float:
        return max(c.hermiticity_defect(stats) for c in self.symbolic)


# Dirac field

def _check_point(x: Sequence[float]) -> Tuple[float, ...]:
    if len(x) != 4:
        raise LatticeError("a spacetime point has four coordinates (t, x, y, z)")
    return tuple(float(c) for c in x)


def dirac_field(basis: DiracModeBasis, x: Sequence[float]) -> FieldOperator:
    """psi_alpha(x) = sum sqrt(m/E) (b u e^{-ipx} + d^+ v e^{ipx})"""
    x = _check_point(x)
    space = basis.space
    symbolic, numeric = [], []
    for alpha in range(4):
        component = FieldComponent()
        matrix = zero_operator(space)
        for i in range(len(basis.lattice)):
            phase = basis.lattice.phase(i, x)
            for s in basis.spins:
                mode = basis.mode(i, s)
                w_b = basis.weight(i) * basis.u(i, s)[alpha] * phase
                w_d = basis.weight(i) * basis.v(i, s)[alpha] * phase.conjugate()
                component = component + FieldComponent.monomial(w_b, LadderSymbol(Species.ELECTRON, Kind.ANNIHILATE, mode))
                component = component + FieldComponent.monomial(w_d, LadderSymbol(Species.POSITRON, Kind.CREATE, mode))
                matrix = matrix + ladder(space, mode, Kind.ANNIHILATE, Species.ELECTRON) * w_b
                matrix = matrix + ladder(space, mode, Kind.CREATE, Species.POSITRON) * w_d
        symbolic.append(component)
        numeric.append(matrix)
    return FieldOperator("psi", space, x, symbolic, numeric)


def dirac_adjoint_field(basis: DiracModeBasis, x: Sequence[float], psi: Optional[FieldOperator] = None) -> FieldOperator:
    """psi-bar = psi^+ gamma^0"""
    psi = psi or dirac_field(basis, x)
    signs = np.real(np.diag(GAMMA[0]))
    symbolic = [psi.symbolic[a].adjoint().scale(signs[a]) for a in range(4)]
    numeric = [psi.numeric[a].adjoint() * signs[a] for a in range(4)]
    return FieldOperator("psi_bar", psi.space, psi.x, symbolic, numeric)


def probability_current(basis: DiracModeBasis, x: Sequence[float]) -> FieldOperator:
    """:j^mu: = :psi-bar gamma^mu psi:, vacuum constant subtracted"""
    psi = dirac_field(basis, x)
    psi_bar = dirac_adjoint_field(basis, x, psi)
    space = psi.space
    unit = identity(space)
    symbolic, numeric = [], []
    for mu in range(4):
        component = FieldComponent()
        matrix = zero_operator(space)
        for a in range(4):
            for b in range(4):
                g = GAMMA[mu][a, b]
                if g == 0:
                    continue
                component = component + (psi_bar.symbolic[a] * psi.symbolic[b]).scale(g)
                matrix = matrix + (psi_bar.numeric[a] @ psi.numeric[b]) * g
        symbolic.append(component.normal_ordered(drop_vacuum=True))
        numeric.append(matrix - unit * matrix.vacuum_element())
    return FieldOperator("j", space, psi.x, symbolic, numeric)


def global_charge(basis: DiracModeBasis) -> OperatorExpr:
    """Q = sum (b^+ b - d^+ d), the normal-ordered spatial integral of j^0"""
    q = OperatorExpr()
    for mode in basis.modes():
        for species, sign in ((Species.ELECTRON, 1), (Species.POSITRON, -1)):
            q = q + OperatorExpr.symbol(LadderSymbol(species, Kind.CREATE, mode)) * OperatorExpr.symbol(
                LadderSymbol(species, Kind.ANNIHILATE, mode)
            ) * sign
    return q


def free_hamiltonian(basis: DiracModeBasis) -> FieldOperator:
    """H = sum E (b^+ b + d^+ d)"""
    space = basis.space
    component = FieldComponent()
    matrix = zero_operator(space)
    for i in range(len(basis.lattice)):
        energy = basis.lattice.energies[i]
        for s in basis.spins:
            mode = basis.mode(i, s)
            for species in (Species.ELECTRON, Species.POSITRON):
                component = component + FieldComponent.monomial(
                    energy,
                    LadderSymbol(species, Kind.CREATE, mode),
                    LadderSymbol(species, Kind.ANNIHILATE, mode),
                )
                matrix = matrix + number_op(space, mode, species) * energy
    return FieldOperator("H", space, (0.0, 0.0, 0.0, 0.0), [component], [matrix])


def charge_commutator_norm(basis: DiracModeBasis) -> float:
    charge = materialize(global_charge(basis), basis.space)
    hamiltonian = free_hamiltonian(basis).numeric[0]
    return charge.commutator(hamiltonian).norm()


def dirac_vacuum_correlator(
    basis: DiracModeBasis, x: Sequence[float], y: Sequence[float]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """<0| psi_a(x) psi-bar_b(y) |0>: symbolic, numeric and closed-form 4x4 matrices"""
    psi = dirac_field(basis, x)
    psi_bar = dirac_adjoint_field(basis, y)
    symbolic = np.zeros((4, 4), dtype=complex)
    numeric = np.zeros((4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            symbolic[a, b] = (psi.symbolic[a] * psi_bar.symbolic[b]).vacuum_expectation()
            numeric[a, b] = (psi.numeric[a] @ psi_bar.numeric[b]).vacuum_element()
    closed = np.zeros((4, 4), dtype=complex)
    separation = np.asarray(_check_point(x)) - np.asarray(_check_point(y))
    for i in range(len(basis.lattice)):
        phase = basis.lattice.phase(i, separation)
        ratio = basis.lattice.mass / basis.lattice.energies[i]
        for s in basis.spins:
            u = basis.u(i, s)
            closed += ratio * np.outer(u, u.conj() @ GAMMA[0]) * phase
    return symbolic, numeric, closed


# Photon field

def _photon_component(basis: PhotonModeBasis, coefficient) -> Tuple[FieldComponent, SparseOperator]:
    """sum over modes of c a + conj(c) a^+ with c = coefficient(i, polarization)"""
    space = basis.space
    component = FieldComponent()
    matrix = zero_operator(space)
    for i in range(len(basis.lattice)):
        for lam in basis.polarizations_per_mode:
            mode = basis.mode(i, lam)
            c = complex(coefficient(i, lam))
            if c == 0:
                continue
            component = component + FieldComponent.monomial(c, LadderSymbol(Species.PHOTON, Kind.ANNIHILATE, mode))
            component = component + FieldComponent.monomial(c.conjugate(), LadderSymbol(Species.PHOTON, Kind.CREATE, mode))
            matrix = matrix + ladder(space, mode, Kind.ANNIHILATE) * c
            matrix = matrix + ladder(space, mode, Kind.CREATE) * c.conjugate()
    return component, matrix


def photon_field(basis: PhotonModeBasis, x: Sequence[float]) -> FieldOperator:
    """Spatial components A^i(x) = sum (1/sqrt(2k0)) (a eps^i e^{-ikx} + h.c.)"""
    x = _check_point(x)
    symbolic, numeric = [], []
    for i_axis in range(3):
        component, matrix = _photon_component(
            basis,
            lambda i, lam: basis.weight(i) * basis.epsilon(i, lam)[i_axis] * basis.lattice.phase(i, x),
        )
        symbolic.append(component)
        numeric.append(matrix)
    return FieldOperator("A", basis.space, x, symbolic, numeric)


def field_tensor(basis: PhotonModeBasis, x: Sequence[float]) -> FieldOperator:
    """F^{mu nu} = d^mu A^nu - d^nu A^mu with d^mu -> -i k^mu on e^{-ikx}; row-major 4x4"""
    x = _check_point(x)
    symbolic, numeric = [], []
    for mu in range(4):
        for nu in range(4):
            def coefficient(i, lam, mu=mu, nu=nu):
                k = basis.lattice.four_momentum(i)
                eps = basis.epsilon4(i, lam)
                antisym = k[mu] * eps[nu] - k[nu] * eps[mu]
                return -1j * antisym * basis.weight(i) * basis.lattice.phase(i, x)

            component, matrix = _photon_component(basis, coefficient)
            symbolic.append(component)
            numeric.append(matrix)
    return FieldOperator("F", basis.space, x, symbolic, numeric)


def _tensor_slice(tensor: FieldOperator, name: str, entries: Sequence[Tuple[int, int, float]]) -> FieldOperator:
    symbolic = [tensor.symbolic[4 * mu + nu].scale(sign) for mu, nu, sign in entries]
    numeric = [tensor.numeric[4 * mu + nu] * sign for mu, nu, sign in entries]
    return FieldOperator(name, tensor.space, tensor.x, symbolic, numeric)


def electric_field(basis: PhotonModeBasis, x: Sequence[float], tensor: Optional[FieldOperator] = None) -> FieldOperator:
    """E^i = F^{i0}"""
    tensor = tensor or field_tensor(basis, x)
    return _tensor_slice(tensor, "E", [(1, 0, 1.0), (2, 0, 1.0), (3, 0, 1.0)])


def magnetic_field(basis: PhotonModeBasis, x: Sequence[float], tensor: Optional[FieldOperator] = None) -> FieldOperator:
    """B^i = -F^{jk} for cyclic (i, j, k)"""
    tensor = tensor or field_tensor(basis, x)
    return _tensor_slice(tensor, "B", [(2, 3, -1.0), (3, 1, -1.0), (1, 2, -1.0)])


def classical_electric_field(basis: PhotonModeBasis, i: int, polarization: int, alpha: complex, x: Sequence[float]) -> np.ndarray:
    """Mode field 2 Re(i k0 alpha eps e^{-ikx}) / sqrt(2 k0) of a coherent amplitude"""
    k0 = basis.lattice.energies[i]
    amplitude = 1j * k0 * alpha * basis.weight(i) * basis.lattice.phase(i, x)
    return 2.0 * np.real(amplitude) * basis.epsilon(i, polarization)


def photon_total_number(basis: PhotonModeBasis) -> FieldOperator:
    """N = sum a^+ a over every momentum and polarization"""
    component = FieldComponent()
    for i in range(len(basis.lattice)):
        for lam in basis.polarizations_per_mode:
            mode = basis.mode(i, lam)
            component = component + FieldComponent.monomial(
                1.0,
                LadderSymbol(Species.PHOTON, Kind.CREATE, mode),
                LadderSymbol(Species.PHOTON, Kind.ANNIHILATE, mode),
            )
    return FieldOperator("N", basis.space, (0.0, 0.0, 0.0, 0.0), [component], [total_number(basis.space)])


def photon_mode_current(k: Sequence[float], epsilon: Sequence[float], strict: bool = False) -> np.ndarray:
    """Per-mode coefficient -k^2 eps^nu + k^nu (k.eps) of j^nu = d_mu F^{mu nu}"""
    k = np.asarray(k, dtype=complex)
    epsilon = np.asarray(epsilon, dtype=complex)
    k_squared = minkowski(k, k)
    k_dot_eps = minkowski(k, epsilon)
    tol = settings.strict_tolerance
    if abs(k_squared) <= tol and abs(k_dot_eps) <= tol:
        return np.zeros(4, dtype=complex)
    coefficient = -k_squared * epsilon + k * k_dot_eps
    logger.warning(f"⚠️ Photon mode k = {k.real.tolist()} is off-shell or longitudinal: k^2 = {k_squared.real:.3g}")
    if strict:
        raise OffShellModeError(f"off-shell photon mode, k^2 = {k_squared.real:.6g}", coefficient)
    return coefficient


def photon_number_statistics(
    state: StateVector,
    basis: Optional[PhotonModeBasis] = None,
    x: Optional[Sequence[float]] = None,
) -> PhotonNumberStatistics:
    number = total_number(state.space)
    mean = float(number.expectation(state).real)
    variance = state.variance(number)
    witness = None
    if basis is not None:
        field = photon_field(basis, x if x is not None else SAMPLE_POINT)
        witness = max(number.commutator(a).norm() for a in field.numeric)
    return PhotonNumberStatistics(mean=mean, variance=variance, number_field_commutator_norm=witness)


def quadrature_eigenstate(space: FockSpace, mode: ModeLabel, target: float = 0.0) -> StateVector:
    """Eigenvector of X = (a + a^+)/sqrt(2) on the cutoff space closest to eigenvalue `target`"""
    a = ladder(space, mode, Kind.ANNIHILATE)
    quadrature = (a + a.adjoint()) * (1 / np.sqrt(2))
    values, vectors = eigh(quadrature.to_dense())
    pick = int(np.argmin(np.abs(values - target)))
    return StateVector(space, vectors[:, pick]).normalized()


def contrast_suite(
    momenta: Sequence[Sequence[int]],
    mass: float = 1.0,
    cutoff: Optional[int] = None,
    x: Optional[Sequence[float]] = None,
    off_shell: Optional[Sequence[float]] = None,
) -> ContrastReport:
    """Dirac versus photon field properties on one lattice"""
    x = _check_point(x if x is not None else SAMPLE_POINT)
    cutoff = cutoff or settings.default_bose_cutoff

    dirac = DiracModeBasis(MomentumLattice(momenta, mass))
    psi = dirac_field(dirac, x)
    photons = PhotonModeBasis(MomentumLattice(momenta, 0.0), cutoff)
    field = photon_field(photons, x)
    number = photon_total_number(photons).numeric[0]

    currents = [
        np.abs(photon_mode_current(photons.lattice.four_momentum(i), photons.epsilon4(i, lam))).max()
        for i in range(len(photons.lattice))
        for lam in photons.polarizations_per_mode
    ]
    off_shell_current = None
    if off_shell is not None:
        k = np.asarray(off_shell, dtype=float)
        eps = np.concatenate([[0.0], polarization_vectors(k[1:])[0]])
        coefficient = photon_mode_current(k, eps)
        off_shell_current = [[float(c.real), float(c.imag)] for c in coefficient]

    report = ContrastReport(
        momenta=[list(p) for p in dirac.lattice.momenta],
        mass=mass,
        cutoff=cutoff,
        x=list(x),
        hermiticity_defect_dirac=psi.hermiticity_defect(),
        hermiticity_defect_photon=field.hermiticity_defect(),
        hermiticity_defect_photon_symbolic=field.symbolic_hermiticity_defect(),
        charge_commutator_norm=charge_commutator_norm(dirac),
        photon_number_field_commutator_norm=max(number.commutator(a).norm() for a in field.numeric),
        on_shell_current_max_abs=float(max(currents)),
        off_shell_current=off_shell_current,
    )
    logger.info(f"✅ Contrast suite on {len(momenta)} momenta finished")
    return report
