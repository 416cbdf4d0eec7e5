import numpy as np
import pytest

from shellwave import CauchySignal, ShellSpec, SmoothstepProfile, SourceConfig, WaveletParams, quintic


@pytest.fixture
def cfg():
    return SourceConfig((0.0, 0.0, 1.0), 2.0)


@pytest.fixture
def params(cfg):
    return WaveletParams(cfg, CauchySignal(1))


@pytest.fixture
def shell():
    return ShellSpec(0.5, quintic(0.2))


@pytest.fixture
def smooth_shell():
    # C5 profile: keeps FD convergence second order through third derivatives
    return ShellSpec(0.5, SmoothstepProfile(0.2, 5))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def shell_points(cfg, rng, n, lo, hi):
    from shellwave import SpheroidalPoint, cartesian

    a = cfg.a_norm
    pt = SpheroidalPoint(rng.uniform(lo, hi, n), 0.98 * rng.uniform(-a, a, n), rng.uniform(0, 2 * np.pi, n))
    return cartesian(pt, cfg)
