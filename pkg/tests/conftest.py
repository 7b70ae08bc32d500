from pathlib import Path

import pytest

from casimag.casimir import MirrorPair
from casimag.materials import DrudeParams, MaterialModel, OscillatorParams, PerfectMirror, Vacuum
from casimag.tools.quadrature import QuadratureConfig

DATA_DIR = Path(__file__).resolve().parent.parent / "casimag" / "data"

OMEGA_P = 1.4e16


def drude_model(omega_p=OMEGA_P, omega_p_tau=1e3, omega_c_tau=1e-3, sign=1, name="metal"):
    tau = omega_p_tau / omega_p
    params = DrudeParams(omega_p=omega_p, omega_c=omega_c_tau / tau, tau=tau)
    return MaterialModel(params, magnetization_sign=sign, name=name)


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def cfg():
    return QuadratureConfig(rel_tol=1e-8)


@pytest.fixture
def drude_metal():
    """omega_p tau = 1e3, omega_c tau = 1e-3."""
    return drude_model()


@pytest.fixture
def clean_metal():
    """omega_p tau = 1e6: a wide intermediate window."""
    return drude_model(omega_p_tau=1e6)


@pytest.fixture
def drude_pair(drude_metal):
    return MirrorPair(drude_metal, drude_metal)


@pytest.fixture
def perfect_pair():
    mirror = MaterialModel(PerfectMirror(), name="perfect")
    return MirrorPair(mirror, mirror)


@pytest.fixture
def vacuum_pair():
    empty = MaterialModel(Vacuum(), name="vacuum")
    return MirrorPair(empty, empty)


@pytest.fixture
def film():
    return OscillatorParams(omega_0=6e15, eps_xx_eff=10.0, eps_xy_eff=1.5e-2)


@pytest.fixture
def film_pair(film):
    model = MaterialModel(film, name="film")
    return MirrorPair(model, model)
