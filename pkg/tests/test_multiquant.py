from fractions import Fraction
from math import log2

import numpy as np
import pytest
from pydantic import ValidationError

from exceptions import (
    NormalizationError,
    ResourceGuardError,
    SectorLeakError,
    SpaceConfigurationError,
    StatisticsMismatchError,
)
from fock import StateVector, basis_state
from models import Statistics
from multiquant import (
    Alternative,
    FrequencySpectrum,
    TruthVector,
    build_tower,
    frequency_suite,
    expected_dimension,
    frequency_spectrum,
    lift,
    one_particle_state,
    probability,
    series_spectrum,
    symmetric_product_state,
    tower_report,
)


def test_binary_truth_vector_probability():
    state = TruthVector.normalized(Alternative.binary(), [1, 1j])
    assert probability(state, 1) == pytest.approx(0.5, abs=1e-12)
    assert probability(state, 2) == pytest.approx(0.5, abs=1e-12)


def test_truth_vector_must_be_normalized():
    with pytest.raises(NormalizationError):
        TruthVector(alternative=Alternative.binary(), psi=(1 + 0j, 1 + 0j))


def test_probability_index_checked():
    with pytest.raises(SpaceConfigurationError):
        probability(TruthVector.normalized(Alternative.binary(), [1, 0]), 3)


def test_alternative_needs_two_outcomes():
    with pytest.raises(SpaceConfigurationError):
        Alternative.of_size(1)


def test_value_records_are_frozen_and_validated():
    alternative = Alternative.binary()
    with pytest.raises(ValidationError):
        alternative.n = 3
    with pytest.raises(SpaceConfigurationError):
        Alternative(n=2, labels=("a", "a"))
    with pytest.raises(NormalizationError):
        FrequencySpectrum(outcome=1, n=1, support=((Fraction(0), 0.5), (Fraction(1), 0.2)))


@pytest.mark.parametrize(
    "lifts, dims",
    [
        ([Statistics.fermi()], [2, 4]),
        ([Statistics.fermi(), Statistics.fermi()], [2, 4, 16]),
        ([Statistics.fermi(), Statistics.bose(4)], [2, 4, 70]),
        ([Statistics.fermi(), Statistics.bose(2)], [2, 4, 15]),
        ([Statistics.bose(2)], [2, 6]),
        ([Statistics.bose(1), Statistics.fermi()], [2, 3, 8]),
    ],
)
def test_tower_dimension_laws(lifts, dims):
    tower = build_tower(Alternative.binary(), lifts)
    assert tower.dimensions == dims
    assert tower.dimension_law_holds()


def test_expected_dimension_matches_lift():
    space = lift(Alternative.of_size(3), Statistics.bose(3))
    assert space.dimension == expected_dimension(3, Statistics.bose(3)) == 20


def test_lift_overflow_guard():
    with pytest.raises(ResourceGuardError):
        build_tower(Alternative.binary(), [Statistics.fermi(), Statistics.fermi(), Statistics.fermi()])


def test_symmetric_state_two_runs():
    space = lift(Alternative.binary(), Statistics.bose(2))
    psi = np.array([1, 1]) / np.sqrt(2)
    state = symmetric_product_state(space, psi, 2)
    spectrum = frequency_spectrum(state, 1, 2)
    assert spectrum.probability_of(Fraction(0)) == pytest.approx(0.25, abs=1e-12)
    assert spectrum.probability_of(Fraction(1, 2)) == pytest.approx(0.5, abs=1e-12)
    assert spectrum.probability_of(Fraction(1)) == pytest.approx(0.25, abs=1e-12)
    assert spectrum.expectation == pytest.approx(0.5, abs=1e-12)


def test_certain_outcome_is_point_mass():
    space = lift(Alternative.binary(), Statistics.bose(4))
    state = symmetric_product_state(space, [1.0, 0.0], 4)
    spectrum = frequency_spectrum(state, 1, 4)
    assert spectrum.is_point_mass
    assert spectrum.probability_of(Fraction(1)) == pytest.approx(1.0, abs=1e-12)


def test_frequency_spectrum_rejects_sector_leak():
    space = lift(Alternative.binary(), Statistics.bose(3))
    mixed = basis_state(space, (1, 0)).amplitudes + basis_state(space, (1, 1)).amplitudes
    with pytest.raises(SectorLeakError):
        frequency_spectrum(StateVector(space, mixed).normalized(), 1, 2)


def test_frequency_needs_a_run():
    space = lift(Alternative.binary(), Statistics.bose(2))
    with pytest.raises(SpaceConfigurationError):
        frequency_spectrum(symmetric_product_state(space, [1.0, 0.0], 1), 1, 0)


def test_symmetric_state_needs_bose():
    space = lift(Alternative.binary(), Statistics.fermi())
    with pytest.raises(StatisticsMismatchError):
        symmetric_product_state(space, [1.0, 0.0], 1)


def test_fermi_lift_uses_one_particle_sector():
    space = lift(Alternative.of_size(3), Statistics.fermi())
    psi = np.array([0.6, 0.0, 0.8j])
    state = one_particle_state(space, psi)
    for k, amplitude in enumerate(psi, start=1):
        assert frequency_spectrum(state, k, 1).expectation == pytest.approx(abs(amplitude) ** 2, abs=1e-12)


@pytest.mark.parametrize("modes", [2, 3, 4])
def test_expected_frequency_is_probability(modes):
    space = lift(Alternative.of_size(modes), Statistics.bose(6))
    deviation, marginal = frequency_suite(space, draws=200, seed=1995)
    assert deviation <= 1e-10
    assert marginal <= 1e-10


def test_sector_zero_is_trivial():
    space = lift(Alternative.binary(), Statistics.bose(2))
    assert frequency_suite(space, draws=5, seed=0, sectors=[0]) == (0.0, 0.0)


def test_frequency_suite_is_deterministic():
    space = lift(Alternative.binary(), Statistics.bose(3))
    assert frequency_suite(space, 20, 42) == frequency_suite(space, 20, 42)


def test_series_spectrum_is_binomial():
    space = lift(Alternative.binary(), Statistics.bose(2))
    state = symmetric_product_state(space, np.array([1, 1]) / np.sqrt(2), 2)
    spectrum = frequency_spectrum(state, 1, 2)
    series = series_spectrum(spectrum, Fraction(1, 2), 4)
    assert sum(p for _, p in series) == pytest.approx(1.0, abs=1e-12)
    assert sum(j * p for j, p in series) == pytest.approx(4 * 0.5, abs=1e-12)


def test_tower_report_levels():
    tower = build_tower(Alternative.binary(), [Statistics.fermi(), Statistics.bose(4)])
    report = tower_report(tower, draws=20, seed=3)
    assert [level.dim for level in report.levels] == [2, 4, 70]
    assert report.levels[0].information_bits == 1
    assert report.levels[2].information_bits == pytest.approx(log2(70))
    assert all(level.eq11_max_deviation <= 1e-10 for level in report.levels[1:])
    series = report.series
    assert series.level == 2 and series.runs == 1
    assert sum(series.distribution) == pytest.approx(1.0, abs=1e-12)
    mean = sum(j * q for j, q in enumerate(series.distribution))
    assert mean == pytest.approx(series.series * series.probability, abs=1e-12)


def test_tower_report_single_lift():
    report = tower_report(build_tower(Alternative.binary(), [Statistics.fermi()]), draws=5, seed=0)
    assert len(report.levels) == 2


def test_tower_report_needs_a_lift():
    with pytest.raises(SpaceConfigurationError):
        tower_report(build_tower(Alternative.binary(), []))


def test_unbalanced_two_run_spectrum():
    space = lift(Alternative.binary(), Statistics.bose(2))
    state = symmetric_product_state(space, [np.sqrt(0.25), np.sqrt(0.75)], 2)
    spectrum = frequency_spectrum(state, 1, 2)
    assert spectrum.probability_of(Fraction(0)) == pytest.approx(0.5625, abs=1e-12)
    assert spectrum.probability_of(Fraction(1, 2)) == pytest.approx(0.375, abs=1e-12)
    assert spectrum.probability_of(Fraction(1)) == pytest.approx(0.0625, abs=1e-12)
    assert spectrum.expectation == pytest.approx(0.25, abs=1e-12)
