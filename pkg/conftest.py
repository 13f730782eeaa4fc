import numpy as np
import pytest

from config import settings
from fock import build_fock
from models import Species, Statistics
from opalg import ModeLabel


@pytest.fixture
def rng():
    return np.random.default_rng(settings.default_seed)


@pytest.fixture
def modes():
    return [ModeLabel(indices=(1,)), ModeLabel(indices=(2,))]


@pytest.fixture
def fermi_space(modes):
    return build_fock(modes, Statistics.fermi(), (Species.ELECTRON, Species.POSITRON))


@pytest.fixture
def bose_space(modes):
    return build_fock(modes, Statistics.bose(4), (Species.PHOTON,))


@pytest.fixture
def parabose_space(modes):
    return build_fock(modes, Statistics.parabose(2, 3), (Species.UR,))
