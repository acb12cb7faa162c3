import math

import pytest

from bosonspin import ModelParams, OscillatorInit, ThermalEnv

# Figure-family baseline: M=1, Omega=5, r=1, theta=0, |alpha|=1, g~=1/2,
# Delta=1, beta=10, phi=pi/3 unless a test varies one of them.


@pytest.fixture
def fig_params():
    return ModelParams.with_g_tilde(M=1.0, Omega=5.0, Delta=1.0, g_tilde=0.5)


@pytest.fixture
def fig_init():
    return OscillatorInit(alpha_abs=1.0, phi=math.pi / 3, r=1.0, theta=0.0)


@pytest.fixture
def fig_env(fig_params):
    return ThermalEnv.for_model(10.0, fig_params)


def make_init(phi, alpha_abs=1.0, r=1.0, theta=0.0):
    return OscillatorInit(alpha_abs=alpha_abs, phi=phi, r=r, theta=theta)
