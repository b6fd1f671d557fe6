import math

import numpy as np
import pytest

from jumppde import (
    DoubleExponential,
    Gaussian,
    GridSpec,
    ModelParams,
    OptionSpec,
    SchemeCoefficients,
    TridiagonalLCP,
    assemble_coefficients,
    build_grid,
    optimal_relaxation,
    solve_lcp_brennan_schwartz,
    solve_lcp_psor,
    solve_linear,
)
from jumppde.errors import InvalidStructure, MeshTooCoarse, SingularMatrix


def grid_with(dt, dx, L=16, K=100.0):
    """Grid carrying prescribed spacings (domain centered on the strike)."""
    opt = OptionSpec("american", "put", K, dt * 4)
    spec = GridSpec(L=L, x_min=math.log(K) - L / 2 * dx, x_max=math.log(K) + L / 2 * dx, M=4)
    return build_grid(spec, opt, Gaussian(0.0, 0.3))


KOU = ModelParams(r=0.05, sigma=0.2, lam=3.0, jump=DoubleExponential(0.6, 25.0, 25.0))


class TestCoefficients:
    def test_reference_values(self):
        c = assemble_coefficients(KOU, grid_with(0.1, 0.1), theta=1.0)
        assert c.p_minus == pytest.approx(0.1994231, abs=1e-7)
        assert c.p_plus == pytest.approx(0.2005769, abs=1e-7)
        assert c.p_zero == pytest.approx(0.705, abs=1e-7)
        assert c.p_zero == pytest.approx(c.p_minus + c.p_plus + (0.05 + 3.0) * 0.1, rel=1e-14)

    def test_zero_log_drift_symmetry(self):
        grid = grid_with(0.05, 0.02)
        m = ModelParams(r=0.03, sigma=0.2, lam=0.0, jump=Gaussian(0.0, 0.3))
        c = assemble_coefficients(m, grid, theta=0.5)
        assert c.p_minus != c.p_plus
        # without jumps mu = r, so r = sigma^2/2 kills the advection term exactly
        m_sym = ModelParams(r=0.2**2 / 2, sigma=0.2, lam=0.0, jump=Gaussian(0.0, 0.3))
        c_sym = assemble_coefficients(m_sym, grid, theta=0.5)
        assert c_sym.p_minus == c_sym.p_plus

    def test_mesh_too_coarse(self):
        # strong drift against a coarse space step flips a coefficient sign
        m = ModelParams(r=5.0, sigma=0.2, lam=0.0, jump=Gaussian(0.0, 0.3))
        with pytest.raises(MeshTooCoarse):
            assemble_coefficients(m, grid_with(0.1, 1.0), theta=0.5)


class TestOptimalRelaxation:
    def test_reference_value(self):
        c = SchemeCoefficients(p_minus=0.1994231, p_plus=0.2005769, p_zero=0.705, theta=1.0)
        j_norm = (0.1994231 + 0.2005769) / 1.705
        assert j_norm == pytest.approx(0.2346041, abs=1e-7)
        # frozen from direct evaluation of 2 / (1 + sqrt(1 - ||J||^2))
        assert optimal_relaxation(c) == pytest.approx(1.0141520, abs=1e-6)

    def test_diagonally_dominant_limit(self):
        c = SchemeCoefficients(p_minus=1e-9, p_plus=1e-9, p_zero=1.0, theta=1.0)
        assert optimal_relaxation(c) == pytest.approx(1.0, abs=1e-6)

    def test_monotone_increase_under_refinement(self):
        omegas = []
        for L in (64, 128, 256, 512):
            dx = 1.0 / L
            grid = grid_with(dx, dx, L=8)  # spacings are what matter here
            c = assemble_coefficients(KOU, grid, theta=0.5)
            omegas.append(optimal_relaxation(c))
        assert all(b > a for a, b in zip(omegas, omegas[1:]))
        assert omegas[-1] < 2.0


def put_type_system(rng, n=50):
    """Step-like system with a put obstacle; the rhs need not come from a
    value function, so the contact set may fragment (fine for residual and
    unconstrained checks)."""
    p = rng.uniform(0.2, 3.0)
    drift = rng.uniform(-0.2, 0.2) * p
    c = SchemeCoefficients(p_minus=p - drift, p_plus=p + drift,
                           p_zero=2 * p + rng.uniform(0.001, 0.05), theta=rng.choice([0.5, 1.0]))
    x = np.linspace(-0.5, 0.5, n)
    g = np.maximum(100.0 * (1.0 - np.exp(x)), 0.0)
    prior = g + rng.uniform(0.0, 1.5) * np.exp(-40 * x**2) + 1e-3 * rng.standard_normal(n)
    rhs = prior.copy()
    return TridiagonalLCP.from_coefficients(c, rhs, obstacle=g), c


def pricing_step_system(rng, n=50):
    """Genuine first backward step of a put run, where the contact set is a
    single low-x interval (the regime Brennan-Schwartz is exact in)."""
    from jumppde import payoff_vector

    K = 100.0
    sigma = rng.uniform(0.12, 0.35)
    r = rng.uniform(0.0, 0.08)
    m = ModelParams(r=r, sigma=sigma, lam=0.0, jump=Gaussian(0.0, 0.3))
    opt = OptionSpec("american", "put", K, rng.uniform(0.1, 1.0))
    half = 3.0 * sigma * math.sqrt(opt.maturity) + 0.15
    spec = GridSpec(L=n + 1, x_min=math.log(K) - half, x_max=math.log(K) + half,
                    M=int(rng.integers(4, 24)))
    grid = build_grid(spec, opt, m.jump)
    theta = float(rng.choice([0.5, 1.0]))
    c = assemble_coefficients(m, grid, theta=theta)
    g = payoff_vector(opt, grid)
    u_next = g
    L = grid.L
    b = ((1 - theta) * c.p_minus * u_next[0:L - 1]
         + (1 - (1 - theta) * c.p_zero) * u_next[1:L]
         + (1 - theta) * c.p_plus * u_next[2:L + 1])
    b[0] += theta * c.p_minus * (K - math.exp(grid.x_min))
    return TridiagonalLCP.from_coefficients(c, b, obstacle=g[1:L]), c


class TestPsor:
    def test_scalar_projection(self):
        sys = TridiagonalLCP(
            sub=np.zeros(1), diag=np.array([1.705]), sup=np.zeros(1),
            rhs=np.array([1.0]), obstacle=np.array([2.0]),
        )
        x, _ = solve_lcp_psor(sys, omega=1.0, tol=1e-12)
        assert x[0] == pytest.approx(2.0)
        sys.obstacle = np.array([-10.0])
        x, _ = solve_lcp_psor(sys, omega=1.0, tol=1e-12)
        assert x[0] == pytest.approx(1.0 / 1.705, rel=1e-10)

    def test_unconstrained_matches_linear_solve(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            sys, c = put_type_system(rng)
            free = TridiagonalLCP(sub=sys.sub, diag=sys.diag, sup=sys.sup, rhs=sys.rhs)
            x, _ = solve_lcp_psor(free, omega=optimal_relaxation(c), tol=1e-10)
            direct = solve_linear(sys.sub, sys.diag, sys.sup, sys.rhs)
            assert np.abs(x - direct).max() <= 1e-8

    def test_complementarity_residual_contract(self):
        rng = np.random.default_rng(77)
        tol = 1e-9
        for _ in range(10):
            sys, c = put_type_system(rng)
            x, sweeps = solve_lcp_psor(sys, omega=optimal_relaxation(c), tol=tol)
            assert sweeps >= 1
            ax = sys.diag * x
            ax[1:] += sys.sub[1:] * x[:-1]
            ax[:-1] += sys.sup[:-1] * x[1:]
            r = ax - sys.rhs
            assert np.all(x >= sys.obstacle)
            assert r.min() >= -tol
            assert np.abs(np.minimum(r, x - sys.obstacle)).max() <= tol


class TestBrennanSchwartz:
    def test_scalar_projection(self):
        sys = TridiagonalLCP(
            sub=np.zeros(1), diag=np.array([1.705]), sup=np.zeros(1),
            rhs=np.array([1.0]), obstacle=np.array([2.0]),
        )
        assert solve_lcp_brennan_schwartz(sys)[0] == pytest.approx(2.0)

    def test_agrees_with_psor_on_put_type_lcps(self):
        rng = np.random.default_rng(101)
        for _ in range(20):
            sys, c = pricing_step_system(rng)
            direct = solve_lcp_brennan_schwartz(sys)
            iterative, _ = solve_lcp_psor(sys, omega=optimal_relaxation(c), tol=1e-10)
            assert np.abs(direct - iterative).max() <= 1e-8

    def test_rejects_non_m_matrix(self):
        sys = TridiagonalLCP(
            sub=np.full(4, 0.3), diag=np.ones(4), sup=np.full(4, -0.2),
            rhs=np.ones(4), obstacle=np.zeros(4),
        )
        with pytest.raises(InvalidStructure):
            solve_lcp_brennan_schwartz(sys)


class TestSolveLinear:
    def test_identity(self):
        rhs = np.array([3.0, -1.0, 2.0, 0.5])
        x = solve_linear(np.zeros(4), np.ones(4), np.zeros(4), rhs)
        assert x == pytest.approx(rhs, rel=1e-15)

    def test_three_by_three_against_dense_inverse(self):
        sub = np.array([0.0, -0.5, -0.25])
        diag = np.array([2.0, 2.5, 3.0])
        sup = np.array([-1.0, -0.75, 0.0])
        rhs = np.array([1.0, 2.0, 3.0])
        a = np.diag(diag) + np.diag(sub[1:], -1) + np.diag(sup[:-1], 1)
        expected = np.linalg.solve(a, rhs)
        x = solve_linear(sub, diag, sup, rhs)
        assert np.abs(x - expected).max() <= 1e-14

    def test_residual_bound(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            sys, _ = put_type_system(rng)
            x = solve_linear(sys.sub, sys.diag, sys.sup, sys.rhs)
            ax = sys.diag * x
            ax[1:] += sys.sub[1:] * x[:-1]
            ax[:-1] += sys.sup[:-1] * x[1:]
            assert np.abs(ax - sys.rhs).max() <= 1e-12 * max(1.0, np.abs(sys.rhs).max())

    def test_singular_matrix(self):
        with pytest.raises(SingularMatrix):
            solve_linear(np.zeros(3), np.zeros(3), np.zeros(3), np.ones(3))
