import pytest

from mcbiofet import LinkModel, default_params


@pytest.fixture
def params():
    return default_params()


@pytest.fixture
def link(params):
    return LinkModel(params)


@pytest.fixture
def quiet_params():
    """Defaults with a Coulomb scattering coefficient of 1.9e4 Vs/C and the
    single-g^2 flatband PSD; flicker noise then sits comparable to binding
    noise (L ~ 0.62) instead of swamping it."""
    return default_params().with_values(**{"noise.alpha_s": 1.9e4,
                                           "noise.flatband_literal": False})


@pytest.fixture
def quiet_link(quiet_params):
    return LinkModel(quiet_params)
