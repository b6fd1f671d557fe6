import math

import pytest

from jumppde import (
    DoubleExponential,
    Gaussian,
    GridSpec,
    ModelParams,
    OptionSpec,
)


@pytest.fixture
def kou_model():
    """Double-exponential benchmark parameters (strike-100 American put case)."""
    return ModelParams(r=0.05, sigma=0.2, lam=3.0, jump=DoubleExponential(0.6, 25.0, 25.0))


@pytest.fixture
def kou_put():
    return OptionSpec("american", "put", 100.0, 0.25)


@pytest.fixture
def merton_model():
    """Lognormal-jump benchmark parameters shared by the put/call table cases."""
    return ModelParams(r=0.05, sigma=0.15, lam=0.1, jump=Gaussian(-0.9, 0.45))


def small_grid_spec(K=100.0, half=0.7, L=32, M=8, alpha=1, z_margin=4.0):
    """Symmetric log-domain around the strike for unit-level grids."""
    return GridSpec(
        L=L, x_min=math.log(K) - half, x_max=math.log(K) + half, M=M, alpha=alpha, z_margin=z_margin
    )
