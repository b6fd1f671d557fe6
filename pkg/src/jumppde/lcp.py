"""Theta-scheme coefficients and the tridiagonal LCP / linear solvers.

The per-step system has constant bands (-theta*p_minus, 1 + theta*p_zero,
-theta*p_plus), an M-matrix whenever p_minus and p_plus are positive, which
is what drives the monotonicity of the outer fixed-point iteration. Solvers
dispatch to the compiled kernels when available (see ``_backend``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import InvalidStructure, MeshTooCoarse, NoConvergence, SingularMatrix
from .grid import Grid
from .model import ModelParams, risk_neutral_drift

__all__ = [
    "SchemeCoefficients",
    "TridiagonalLCP",
    "assemble_coefficients",
    "optimal_relaxation",
    "solve_lcp_psor",
    "solve_lcp_brennan_schwartz",
    "solve_linear",
]


@dataclass(frozen=True)
class SchemeCoefficients:
    """Dimensionless finite-difference weights of the theta-scheme."""

    p_minus: float
    p_plus: float
    p_zero: float
    theta: float

    def __post_init__(self):
        if self.p_minus <= 0.0 or self.p_plus <= 0.0:
            raise MeshTooCoarse(
                f"p_minus={self.p_minus:.3e}, p_plus={self.p_plus:.3e}: "
                "refine dx or dt until both are positive"
            )
        if not 0.0 < self.theta <= 1.0:
            raise InvalidStructure(f"theta={self.theta} must lie in (0, 1]")


def assemble_coefficients(m: ModelParams, grid: Grid, theta: float = 0.5) -> SchemeCoefficients:
    """Weights p_minus/p_plus/p_zero from the model drift and mesh spacings."""
    mu = risk_neutral_drift(m)
    dt, dx = grid.dt, grid.dx
    diffusion = 0.5 * m.sigma**2 * dt / dx**2
    advection = 0.5 * (mu - 0.5 * m.sigma**2) * dt / dx
    p_minus = diffusion - advection
    p_plus = diffusion + advection
    p_zero = p_minus + p_plus + (m.r + m.lam) * dt
    return SchemeCoefficients(p_minus=p_minus, p_plus=p_plus, p_zero=p_zero, theta=theta)


def optimal_relaxation(c: SchemeCoefficients) -> float:
    """SOR relaxation parameter estimated from the Jacobi-matrix norm bound
    ||J|| = theta*(p_plus + p_minus) / (1 + theta*p_zero)."""
    j_norm = c.theta * (c.p_plus + c.p_minus) / (1.0 + c.theta * c.p_zero)
    return 2.0 / (1.0 + math.sqrt(1.0 - j_norm**2))


@dataclass
class TridiagonalLCP:
    """One time step's complementarity system: A u >= b, u >= g, (Au-b).(u-g) = 0.

    ``sub[i]`` multiplies u[i-1] and ``sup[i]`` multiplies u[i+1]; sub[0] and
    sup[-1] are ignored. ``obstacle`` may be None for an unconstrained solve.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray
    obstacle: np.ndarray | None = None

    @classmethod
    def from_coefficients(cls, c: SchemeCoefficients, rhs, obstacle=None) -> "TridiagonalLCP":
        n = len(rhs)
        return cls(
            sub=np.full(n, -c.theta * c.p_minus),
            diag=np.full(n, 1.0 + c.theta * c.p_zero),
            sup=np.full(n, -c.theta * c.p_plus),
            rhs=np.asarray(rhs, dtype=float),
            obstacle=None if obstacle is None else np.asarray(obstacle, dtype=float),
        )

    def validate_m_matrix(self):
        n = len(self.diag)
        if np.any(self.diag <= 0.0):
            raise InvalidStructure("diagonal must be positive")
        if np.any(self.sub[1:] > 0.0) or np.any(self.sup[: n - 1] > 0.0):
            raise InvalidStructure("off-diagonals must be non-positive")
        row_sums = self.diag.copy()
        row_sums[1:] += self.sub[1:]
        row_sums[: n - 1] += self.sup[: n - 1]
        if np.any(row_sums <= 0.0):
            raise InvalidStructure("row sums must be positive")


def _prepared(sys: TridiagonalLCP):
    x = np.array(sys.rhs, dtype=float)
    if sys.obstacle is None:
        g = np.zeros_like(x)
        project = False
    else:
        g = np.ascontiguousarray(sys.obstacle, dtype=float)
        project = True
    return x, g, project


def solve_lcp_psor(
    sys: TridiagonalLCP,
    omega: float,
    tol: float = 1e-8,
    max_iter: int = 20000,
    x0: np.ndarray | None = None,
) -> tuple[np.ndarray, int]:
    """Projected SOR solve; returns (solution, sweep count).

    The returned iterate satisfies u >= g exactly and the complementarity
    residual componentwise within ``tol``.
    """
    x, g, project = _prepared(sys)
    if x0 is not None:
        x[:] = x0
    if project:
        np.maximum(x, g, out=x)
    sweeps, converged = _backend.psor_solve(
        np.ascontiguousarray(sys.sub),
        np.ascontiguousarray(sys.diag),
        np.ascontiguousarray(sys.sup),
        np.ascontiguousarray(sys.rhs),
        g,
        x,
        float(omega),
        float(tol),
        int(max_iter),
        project,
    )
    if not converged:
        raise NoConvergence(f"PSOR failed to reach tol={tol} within {max_iter} sweeps")
    return x, sweeps


def solve_lcp_brennan_schwartz(sys: TridiagonalLCP) -> np.ndarray:
    """Direct two-sweep LCP solve, exact for put-type (low-x) contact sets."""
    sys.validate_m_matrix()
    x, g, project = _prepared(sys)
    status = _backend.brennan_schwartz_solve(
        np.ascontiguousarray(sys.sub),
        np.ascontiguousarray(sys.diag),
        np.ascontiguousarray(sys.sup),
        np.ascontiguousarray(sys.rhs),
        g,
        x,
        project,
    )
    if status != 0:
        raise InvalidStructure("elimination pivot vanished; bands are not M-matrix-like")
    return x


def solve_linear(sub, diag, sup, rhs) -> np.ndarray:
    """Thomas-algorithm solve of a tridiagonal system."""
    rhs = np.asarray(rhs, dtype=float)
    x = np.empty_like(rhs)
    status = _backend.thomas_solve(
        np.ascontiguousarray(sub, dtype=float),
        np.ascontiguousarray(diag, dtype=float),
        np.ascontiguousarray(sup, dtype=float),
        rhs,
        x,
    )
    if status != 0:
        raise SingularMatrix("tridiagonal elimination hit a vanishing pivot")
    return x
