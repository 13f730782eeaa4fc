import numpy as np
import pytest

from exceptions import LatticeError, OffShellModeError, PolarizationError
from fields import (
    GAMMA,
    DiracModeBasis,
    MomentumLattice,
    PhotonModeBasis,
    charge_commutator_norm,
    classical_electric_field,
    contrast_suite,
    dirac_adjoint_field,
    dirac_field,
    dirac_vacuum_correlator,
    electric_field,
    field_tensor,
    global_charge,
    magnetic_field,
    photon_field,
    photon_mode_current,
    photon_number_statistics,
    photon_total_number,
    polarization_vectors,
    probability_current,
    quadrature_eigenstate,
)
from fock import basis_state, build_fock, coherent_state, materialize, vacuum
from models import Statistics
from opalg import ModeLabel, parse_expr


@pytest.fixture
def dirac():
    return DiracModeBasis(MomentumLattice([(0, 0, 1)], mass=1.0))


@pytest.fixture
def photons():
    return PhotonModeBasis(MomentumLattice([(0, 0, 1)]), cutoff=3)


def random_points(count=5, seed=11):
    rng = np.random.default_rng(seed)
    return [tuple(rng.uniform(-1, 1, size=4)) for _ in range(count)]


def bar(spinor):
    return spinor.conj() @ GAMMA[0]


# Dirac side

def test_spinors_solve_dirac_equation():
    basis = DiracModeBasis(MomentumLattice([(0, 0, 1), (1, -1, 0), (0, 0, 0)], mass=1.0))
    assert basis.dirac_residuals() <= 1e-12
    for i in range(3):
        for s in basis.spins:
            assert bar(basis.u(i, s)) @ basis.u(i, s) == pytest.approx(1.0, abs=1e-12)
            assert bar(basis.v(i, s)) @ basis.v(i, s) == pytest.approx(-1.0, abs=1e-12)


def test_massless_dirac_rejected():
    with pytest.raises(LatticeError):
        DiracModeBasis(MomentumLattice([(0, 0, 1)], mass=0.0))


def test_lattice_rejects_duplicates():
    with pytest.raises(LatticeError):
        MomentumLattice([(0, 0, 1), (0, 0, 1)], mass=1.0)


def test_dirac_field_is_not_hermitian(dirac):
    psi = dirac_field(dirac, (0.0, 0.0, 0.0, 0.0))
    assert psi.hermiticity_defect() > 0.1


@pytest.mark.parametrize("x", random_points())
def test_dirac_field_backends_agree(dirac, x):
    assert dirac_field(dirac, x).agreement() <= 1e-10


def test_adjoint_field_is_dagger_times_gamma0(dirac):
    x = (0.2, 0.1, 0.0, -0.3)
    psi = dirac_field(dirac, x)
    psi_bar = dirac_adjoint_field(dirac, x, psi)
    for b in range(4):
        expected = psi.numeric[0].adjoint() * 0
        for a in range(4):
            expected = expected + psi.numeric[a].adjoint() * GAMMA[0][a, b]
        assert (psi_bar.numeric[b] - expected).max_abs() <= 1e-12
    assert psi_bar.agreement() <= 1e-10


def test_vacuum_correlator_three_ways(dirac):
    symbolic, numeric, closed = dirac_vacuum_correlator(dirac, (0.3, 0.0, 0.1, 0.2), (-0.1, 0.4, 0.0, 0.0))
    assert np.abs(symbolic - numeric).max() <= 1e-10
    assert np.abs(symbolic - closed).max() <= 1e-10


def test_current_is_hermitian_and_normal_ordered(dirac):
    current = probability_current(dirac, (0.1, 0.2, -0.1, 0.3))
    assert current.hermiticity_defect() <= 1e-10
    assert current.agreement() <= 1e-10
    assert current.symbolic_hermiticity_defect() <= 1e-10
    assert abs(current.numeric[0].vacuum_element()) <= 1e-12


@pytest.mark.parametrize("x", random_points(seed=23))
def test_current_backends_agree(dirac, x):
    current = probability_current(dirac, x)
    assert current.agreement() <= 1e-10
    assert current.hermiticity_defect() <= 1e-10


def test_charge_is_conserved_exactly(dirac):
    assert charge_commutator_norm(dirac) == 0


def test_charge_counts_electrons_minus_positrons():
    basis = DiracModeBasis(MomentumLattice([(0, 0, 1), (1, 0, 0)], mass=1.0))
    space = basis.space
    charge = materialize(global_charge(basis), space)
    cases = {
        "b+(p,0,0,1,1)": 1,
        "d+(p,0,0,1,2)": -1,
        "b+(p,0,0,1,1) b+(p,1,0,0,2) d+(p,0,0,1,1)": 1,
        "b+(p,0,0,1,1) d+(p,0,0,1,1) d+(p,1,0,0,1) d+(p,1,0,0,2)": -2,
    }
    for text, expected in cases.items():
        state = materialize(parse_expr(text), space).apply(vacuum(space)).normalized()
        assert charge.expectation(state) == expected


# Photon side

def test_default_polarizations_for_z_axis():
    e1, e2 = polarization_vectors((0, 0, 1))
    assert np.allclose(e1, [1, 0, 0]) and np.allclose(e2, [0, 1, 0])


def test_non_transverse_polarization_rejected():
    with pytest.raises(PolarizationError):
        PhotonModeBasis(MomentumLattice([(0, 0, 1)]), polarizations=[((0, 0, 1), (0, 1, 0))])


def test_photon_lattice_must_be_massless():
    with pytest.raises(LatticeError):
        PhotonModeBasis(MomentumLattice([(0, 0, 1)], mass=1.0))


def test_photon_field_is_hermitian():
    basis = PhotonModeBasis(MomentumLattice([(0, 0, 1), (1, 1, 0)]), cutoff=2)
    field = photon_field(basis, (0.3, -0.2, 0.5, 0.1))
    assert field.symbolic_hermiticity_defect() == 0
    assert field.hermiticity_defect() <= 1e-12


@pytest.mark.parametrize("x", random_points(seed=5))
def test_photon_field_backends_agree(photons, x):
    assert photon_field(photons, x).agreement() <= 1e-10


@pytest.mark.parametrize(
    "k, epsilon",
    [((1, 0, 0, 1), (0, 1, 0, 0)), ((1, 0, 0, 1), (0, 0, 1, 0))],
)
def test_on_shell_mode_current_vanishes(k, epsilon):
    assert np.all(photon_mode_current(k, epsilon) == 0)


def test_off_shell_mode_current():
    current = photon_mode_current((2, 0, 0, 1), (0, 1, 0, 0))
    assert np.allclose(current, [0, -3, 0, 0], atol=0)
    with pytest.raises(OffShellModeError) as err:
        photon_mode_current((2, 0, 0, 1), (0, 1, 0, 0), strict=True)
    assert np.allclose(err.value.coefficient, [0, -3, 0, 0])


def test_field_tensor_is_antisymmetric(photons):
    tensor = field_tensor(photons, (0.1, 0.2, 0.3, 0.4))
    for mu in range(4):
        for nu in range(4):
            forward, backward = tensor.numeric[4 * mu + nu], tensor.numeric[4 * nu + mu]
            assert (forward + backward).max_abs() == 0
            assert tensor.symbolic[4 * mu + nu].distance(-tensor.symbolic[4 * nu + mu]) == 0
    assert tensor.hermiticity_defect() <= 1e-12


@pytest.mark.parametrize("x", random_points(seed=31))
def test_field_tensor_backends_agree(photons, x):
    assert field_tensor(photons, x).agreement() <= 1e-10


def test_plane_wave_fields_are_perpendicular():
    basis = PhotonModeBasis(MomentumLattice([(0, 0, 1)]), cutoff=20)
    x = (0.4, 0.0, 0.0, 0.1)
    tensor = field_tensor(basis, x)
    e_field, b_field = electric_field(basis, x, tensor), magnetic_field(basis, x, tensor)
    state = coherent_state(basis.space, basis.mode(0, 1), 1.0)
    e_mean = np.array([op.expectation(state).real for op in e_field.numeric])
    b_mean = np.array([op.expectation(state).real for op in b_field.numeric])
    assert np.allclose(e_mean, classical_electric_field(basis, 0, 1, 1.0, x), atol=1e-8)
    assert abs(e_mean[1]) <= 1e-12 and abs(e_mean[2]) <= 1e-12
    assert abs(b_mean[0]) <= 1e-12 and abs(b_mean[2]) <= 1e-12
    assert abs(b_mean[1]) == pytest.approx(abs(e_mean[0]), abs=1e-12)


def test_vacuum_field_fluctuates(photons):
    e_field = electric_field(photons, (0.0, 0.0, 0.0, 0.0))
    ground = vacuum(photons.space)
    assert abs(e_field.numeric[0].expectation(ground)) <= 1e-12
    assert ground.variance(e_field.numeric[0]) > 0


def test_photon_number_statistics(photons):
    fock = basis_state(photons.space, (2, 0))
    stats = photon_number_statistics(fock)
    assert stats.mean == pytest.approx(2.0)
    assert stats.variance == pytest.approx(0.0, abs=1e-12)

    rich = PhotonModeBasis(MomentumLattice([(0, 0, 1)]), cutoff=20)
    coherent = coherent_state(rich.space, rich.mode(0, 1), 1.0)
    stats = photon_number_statistics(coherent, rich)
    assert stats.mean == pytest.approx(1.0, abs=1e-6)
    assert stats.variance == pytest.approx(1.0, abs=1e-6)
    assert stats.number_field_commutator_norm > 0


def test_quadrature_eigenstate_has_uncertain_number():
    mode = ModeLabel(indices=(1,))
    space = build_fock([mode], Statistics.bose(8))
    state = quadrature_eigenstate(space, mode)
    assert photon_number_statistics(state).variance > 0


# Contrast suite

def test_contrast_suite_single_momentum():
    report = contrast_suite([(0, 0, 1)], mass=1.0, cutoff=2, off_shell=(2, 0, 0, 1))
    assert report.hermiticity_defect_photon <= 1e-12
    assert report.hermiticity_defect_photon_symbolic == 0
    assert report.hermiticity_defect_dirac > 0.1
    assert report.charge_commutator_norm == 0
    assert report.photon_number_field_commutator_norm > 0
    assert report.on_shell_current_max_abs == 0
    assert report.off_shell_current == [[0.0, 0.0], [-3.0, 0.0], [0.0, 0.0], [0.0, 0.0]]


def test_contrast_suite_two_momenta():
    report = contrast_suite([(0, 0, 1), (1, 0, 0)], mass=1.0, cutoff=2)
    assert report.charge_commutator_norm == 0
    assert report.on_shell_current_max_abs == 0
    assert report.off_shell_current is None


def test_contrast_suite_three_momenta():
    report = contrast_suite([(0, 0, 1), (1, 0, 0), (0, 1, 0)], mass=1.0, cutoff=2)
    assert report.hermiticity_defect_dirac > 0.1
    assert report.hermiticity_defect_photon <= 1e-12
    assert report.charge_commutator_norm == 0
    assert report.on_shell_current_max_abs == 0


def test_dirac_hermiticity_defect_on_largest_lattice():
    basis = DiracModeBasis(MomentumLattice([(0, 0, 1), (1, 0, 0), (0, 1, 0)], mass=1.0))
    assert basis.space.dimension == 4096
    psi = dirac_field(basis, (0.0, 0.1, 0.2, 0.3))
    gap = psi.numeric[0] - psi.numeric[0].adjoint()
    assert psi.hermiticity_defect() > 0.1
    assert gap.norm() <= psi.hermiticity_defect() + 1e-9


def test_photon_number_operator(photons):
    number = photon_total_number(photons)
    assert number.agreement() <= 1e-12
    assert number.symbolic_hermiticity_defect() == 0
    assert number.numeric[0].expectation(basis_state(photons.space, (1, 2))) == 3
