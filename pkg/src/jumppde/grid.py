"""Coupled log-price / time / jump-variable meshes with payoff and boundary data.

The space mesh has L intervals on [x_min, x_max], the time mesh M steps on
[0, T], and the jump-quadrature mesh J intervals of width dz = dx / alpha
covering the jump law's effective support (mean +/- z_margin standard
deviations, rounded outward to whole dz cells). Linear interpolation of a
lattice slice at the shifted points x_l + z_j therefore always lands on the
dz sub-mesh, which is what makes the convolution a strided discrete
correlation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpec
from .model import JumpDistribution, ModelParams, OptionSpec

__all__ = ["GridSpec", "Grid", "build_grid", "payoff_function", "payoff_vector", "boundary_values"]


@dataclass(frozen=True)
class GridSpec:
    """Requested discretization. ``x_min``/``x_max`` default to
    [log(K/4), log(4K)]; ``M = None`` derives the step count from dt = dx."""

    L: int
    x_min: float | None = None
    x_max: float | None = None
    M: int | None = None
    alpha: int = 1
    z_margin: float = 4.0

    def __post_init__(self):
        if self.L < 4:
            raise InvalidSpec(f"L={self.L} must be at least 4")
        if self.M is not None and self.M < 1:
            raise InvalidSpec(f"M={self.M} must be at least 1")
        if int(self.alpha) != self.alpha or self.alpha < 1:
            raise InvalidSpec(f"alpha={self.alpha} must be a positive integer")
        if not self.z_margin > 0.0:
            raise InvalidSpec(f"z_margin={self.z_margin} must be positive")


@dataclass(frozen=True)
class Grid:
    """Realized meshes plus the terminal payoff vector for one contract."""

    x_min: float
    x_max: float
    L: int
    M: int
    alpha: int
    T: float
    dx: float
    dt: float
    dz: float
    z_offset: int  # z_min = z_offset * dz, an integer multiple so z = 0 is a node
    J: int
    opt: OptionSpec = field(repr=False)
    jump: JumpDistribution = field(repr=False)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.L + 1)

    @property
    def t(self) -> np.ndarray:
        return self.dt * np.arange(self.M + 1)

    @property
    def z(self) -> np.ndarray:
        return self.dz * (self.z_offset + np.arange(self.J + 1))

    @property
    def z_min(self) -> float:
        return self.z_offset * self.dz

    @property
    def z_max(self) -> float:
        return (self.z_offset + self.J) * self.dz

    @property
    def payoff(self) -> np.ndarray:
        return payoff_vector(self.opt, self)

    def spot_index(self, spot: float) -> tuple[int, float]:
        """Bracketing node index and interpolation weight for log(spot)."""
        x0 = math.log(spot)
        if not self.x_min - 1e-12 <= x0 <= self.x_max + 1e-12:
            raise InvalidSpec(f"spot {spot} lies outside the grid domain")
        pos = (x0 - self.x_min) / self.dx
        idx = min(int(pos), self.L - 1)
        return idx, pos - idx


def build_grid(spec: GridSpec, opt: OptionSpec, jump: JumpDistribution) -> Grid:
    """Realize the meshes for one contract.

    For barrier contracts x_min is snapped to log(barrier) exactly so the
    barrier sits on a node.
    """
    K = opt.strike
    x_min = spec.x_min if spec.x_min is not None else math.log(K / 4.0)
    x_max = spec.x_max if spec.x_max is not None else math.log(4.0 * K)
    if opt.barrier is not None:
        x_min = math.log(opt.barrier)
        if x_min >= x_max:
            raise InvalidSpec(f"barrier {opt.barrier} at or above the domain top {math.exp(x_max)}")
    if not x_min < x_max:
        raise InvalidSpec(f"empty domain: x_min={x_min} >= x_max={x_max}")
    log_k = math.log(K)
    if not x_min < log_k < x_max:
        raise InvalidSpec(f"strike {K} outside the price domain [{math.exp(x_min)}, {math.exp(x_max)}]")

    dx = (x_max - x_min) / spec.L
    M = spec.M if spec.M is not None else max(1, int(round(opt.maturity / dx)))
    dt = opt.maturity / M
    dz = dx / spec.alpha

    half = spec.z_margin * jump.std()
    lo = math.floor((jump.mean() - half) / dz)
    hi = math.ceil((jump.mean() + half) / dz)
    if hi <= lo:
        hi = lo + 1

    return Grid(
        x_min=x_min,
        x_max=x_max,
        L=spec.L,
        M=M,
        alpha=spec.alpha,
        T=opt.maturity,
        dx=dx,
        dt=dt,
        dz=dz,
        z_offset=lo,
        J=hi - lo,
        opt=opt,
        jump=jump,
    )


def payoff_function(opt: OptionSpec, x) -> np.ndarray:
    """Exercise value at arbitrary log-prices, including the rebate at and
    below a knock-out barrier."""
    x = np.asarray(x, dtype=float)
    s = np.exp(x)
    if opt.payoff == "put":
        g = np.maximum(opt.strike - s, 0.0)
    else:
        g = np.maximum(s - opt.strike, 0.0)
    if opt.barrier is not None:
        g = np.where(x <= math.log(opt.barrier) + 1e-14, opt.rebate, g)
    return g


def payoff_vector(opt: OptionSpec, grid: Grid) -> np.ndarray:
    return payoff_function(opt, grid.x)


def boundary_values(opt: OptionSpec, m: ModelParams, grid: Grid, t: float) -> tuple[float, float]:
    """Dirichlet values at x_min and x_max at calendar time t.

    American puts use the intrinsic value on the left (the node lies in the
    exercise region); European puts use the discounted strike. Calls carry the
    forward-intrinsic asymptote on the right, and barrier contracts pin the
    rebate at the barrier node.
    """
    disc = math.exp(-m.r * (opt.maturity - t))
    if opt.barrier is not None:
        left = opt.rebate
    elif opt.payoff == "put":
        left = (opt.strike if opt.is_american else opt.strike * disc) - math.exp(grid.x_min)
    else:
        left = 0.0
    if opt.payoff == "put":
        right = 0.0
    else:
        right = math.exp(grid.x_max) - opt.strike * disc
    return left, right
