"""Parity between the compiled solver kernels and their pure-Python twins."""

import os
import subprocess
import sys

import numpy as np
import pytest

from jumppde import _backend, _kernels_py

try:
    from jumppde import _kernels as _compiled
except ImportError:
    _compiled = None

needs_compiled = pytest.mark.skipif(_compiled is None, reason="compiled kernels not built")


def random_m_matrix_system(rng, n):
    p = rng.uniform(0.2, 4.0)
    drift = rng.uniform(-0.3, 0.3) * p
    sub = np.full(n, -(p - drift))
    sup = np.full(n, -(p + drift))
    diag = np.full(n, 1.0 + 2.0 * p + rng.uniform(0.001, 0.1))
    rhs = rng.uniform(-50.0, 50.0, n)
    obstacle = rng.uniform(-60.0, 40.0, n)
    return sub, diag, sup, rhs, obstacle


@needs_compiled
class TestBackendParity:
    def test_psor_matches(self):
        rng = np.random.default_rng(42)
        for n in (1, 2, 17, 120):
            sub, diag, sup, rhs, obstacle = random_m_matrix_system(rng, n)
            x_c = rhs.copy()
            x_p = rhs.copy()
            it_c, ok_c = _compiled.psor_solve(sub, diag, sup, rhs, obstacle, x_c, 1.2, 1e-11, 5000, True)
            it_p, ok_p = _kernels_py.psor_solve(sub, diag, sup, rhs, obstacle, x_p, 1.2, 1e-11, 5000, True)
            assert ok_c and ok_p
            assert it_c == it_p
            assert np.abs(x_c - x_p).max() <= 1e-12 * max(1.0, np.abs(x_c).max())

    def test_brennan_schwartz_matches(self):
        rng = np.random.default_rng(43)
        for n in (1, 2, 17, 120):
            sub, diag, sup, rhs, obstacle = random_m_matrix_system(rng, n)
            x_c = np.empty(n)
            x_p = np.empty(n)
            assert _compiled.brennan_schwartz_solve(sub, diag, sup, rhs, obstacle, x_c, True) == 0
            assert _kernels_py.brennan_schwartz_solve(sub, diag, sup, rhs, obstacle, x_p, True) == 0
            assert np.abs(x_c - x_p).max() <= 1e-12 * max(1.0, np.abs(x_c).max())

    def test_thomas_matches(self):
        rng = np.random.default_rng(44)
        for n in (1, 2, 17, 120):
            sub, diag, sup, rhs, _ = random_m_matrix_system(rng, n)
            x_c = np.empty(n)
            x_p = np.empty(n)
            assert _compiled.thomas_solve(sub, diag, sup, rhs, x_c) == 0
            assert _kernels_py.thomas_solve(sub, diag, sup, rhs, x_p) == 0
            assert np.abs(x_c - x_p).max() <= 1e-12 * max(1.0, np.abs(x_c).max())

    def test_singular_flags_agree(self):
        z = np.zeros(3)
        x = np.empty(3)
        assert _compiled.thomas_solve(z, z, z, np.ones(3), x) == 1
        assert _kernels_py.thomas_solve(z, z, z, np.ones(3), x) == 1


def test_env_override_selects_pure_python():
    code = (
        "import jumppde, math\n"
        "from jumppde import *\n"
        "assert jumppde.BACKEND == 'python', jumppde.BACKEND\n"
        "m = ModelParams(r=0.05, sigma=0.2, lam=3.0, jump=DoubleExponential(0.6, 25.0, 25.0))\n"
        "opt = OptionSpec('american', 'put', 100.0, 0.25)\n"
        "spec = GridSpec(L=32, x_min=math.log(100)-0.7, x_max=math.log(100)+0.7, M=8, alpha=8, z_margin=10.0)\n"
        "grid = build_grid(spec, opt, m.jump)\n"
        "res = iterate_to_fixed_point(m, opt, grid, EngineConfig(theta=0.5), spots=[100.0])\n"
        "print(f'{res.price:.14f}')\n"
    )
    env = dict(os.environ, JUMPPDE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert out.returncode == 0, out.stderr
    pure_price = float(out.stdout.strip())

    import math

    from jumppde import (
        DoubleExponential,
        EngineConfig,
        GridSpec,
        ModelParams,
        OptionSpec,
        build_grid,
        iterate_to_fixed_point,
    )

    m = ModelParams(r=0.05, sigma=0.2, lam=3.0, jump=DoubleExponential(0.6, 25.0, 25.0))
    opt = OptionSpec("american", "put", 100.0, 0.25)
    spec = GridSpec(L=32, x_min=math.log(100) - 0.7, x_max=math.log(100) + 0.7, M=8, alpha=8, z_margin=10.0)
    grid = build_grid(spec, opt, m.jump)
    res = iterate_to_fixed_point(m, opt, grid, EngineConfig(theta=0.5), spots=[100.0])
    assert pure_price == pytest.approx(res.price, abs=1e-11)


def test_selected_backend_reported():
    assert _backend.BACKEND in ("compiled", "python")
