"""Discretized jump density and the FFT evaluation of the convolution term.

The lattice slice is resampled (linear interpolation, boundary extension
outside the domain) onto the dz sub-mesh, giving one contiguous array E with
E[l*alpha + j] = u_interp(x_l + z_j). The convolution output for every node
is then the strided discrete correlation of E with the density weights,
computed with one zero-padded real FFT per slice. Padding to the next power
of two at or above the extended length leaves the needed entries free of
circular wraparound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, MassTooLow
from .grid import Grid, payoff_function
from .model import JumpDistribution, ModelParams, OptionSpec, jump_density

__all__ = [
    "DensityWeights",
    "BoundaryExtension",
    "discretize_density",
    "apply_jump_operator",
    "apply_jump_operator_to_slices",
]


class BoundaryExtension:
    """Out-of-domain values u(y, t) for y below x_min / above x_max.

    Continuous with the Dirichlet boundary data of the contract it was built
    for, so the resampled array E has no artificial jump at the domain edges.
    """

    def __init__(self, left, right):
        self._left = left
        self._right = right

    def left(self, y: np.ndarray, t: float) -> np.ndarray:
        return np.broadcast_to(np.asarray(self._left(y, t), dtype=float), np.shape(y)).copy()

    def right(self, y: np.ndarray, t: float) -> np.ndarray:
        return np.broadcast_to(np.asarray(self._right(y, t), dtype=float), np.shape(y)).copy()

    @classmethod
    def for_option(cls, opt: OptionSpec, m: ModelParams) -> "BoundaryExtension":
        K, T = opt.strike, opt.maturity

        if opt.barrier is not None:
            left = lambda y, t: np.full(np.shape(y), float(opt.rebate))
        elif opt.payoff == "put":
            if opt.is_american:
                left = lambda y, t: K - np.exp(y)
            else:
                left = lambda y, t: K * math.exp(-m.r * (T - t)) - np.exp(y)
        else:
            left = lambda y, t: np.zeros(np.shape(y))

        if opt.payoff == "put":
            right = lambda y, t: np.zeros(np.shape(y))
        else:
            right = lambda y, t: np.exp(y) - K * math.exp(-m.r * (T - t))
        return cls(left, right)

    @classmethod
    def constant(cls, value: float) -> "BoundaryExtension":
        return cls(lambda y, t: np.full(np.shape(y), float(value)),
                   lambda y, t: np.full(np.shape(y), float(value)))

    @classmethod
    def zero(cls) -> "BoundaryExtension":
        return cls.constant(0.0)

    @classmethod
    def payoff(cls, opt: OptionSpec) -> "BoundaryExtension":
        return cls(lambda y, t: payoff_function(opt, y), lambda y, t: payoff_function(opt, y))


@dataclass
class DensityWeights:
    """Sub-stochastic quadrature weights w_j = rho(z_j) * dz on the z mesh.

    ``scale`` records the factor (at most 1) applied when the raw
    left-endpoint sums exceeded one, so the weights stay sub-stochastic.
    """

    weights: np.ndarray
    grid: Grid
    scale: float = 1.0
    _plan: "_ConvolutionPlan | None" = field(default=None, repr=False, compare=False)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def plan(self) -> "_ConvolutionPlan":
        if self._plan is None:
            self._plan = _ConvolutionPlan(self.grid, self.weights)
        return self._plan


def discretize_density(
    jump: JumpDistribution, grid: Grid, min_mass: float = 1.0 - 1e-3
) -> DensityWeights:
    """Left-endpoint weights rho(z_j)*dz over the first J z-nodes.

    Raises MassTooLow when the truncated mesh captures less than ``min_mass``
    of the law. When the raw sum overshoots one (coarse mesh against a peaked
    density) the weights are scaled back onto total mass one.
    """
    z = grid.z[:-1]
    w = jump_density(jump, z) * grid.dz
    raw = float(w.sum())
    if raw < min_mass:
        raise MassTooLow(
            f"discretized jump density captures mass {raw:.6f} < {min_mass}; "
            "widen z_margin or refine dz"
        )
    scale = min(1.0, 1.0 / raw)
    return DensityWeights(weights=w * scale, grid=grid, scale=scale)


class _ConvolutionPlan:
    """Precomputed resampling indices and the density-weight spectrum."""

    def __init__(self, grid: Grid, weights: np.ndarray):
        if len(weights) != grid.J:
            raise DimensionMismatch(f"expected {grid.J} weights, got {len(weights)}")
        self.grid = grid
        la = grid.L * grid.alpha
        n_ext = la + grid.J
        # dz-mesh offsets k relative to x_min; in-domain for 0 <= k <= L*alpha
        k = grid.z_offset + np.arange(n_ext)
        self.inside = (k >= 0) & (k <= la)
        self.left_mask = k < 0
        self.right_mask = k > la
        kin = k[self.inside]
        idx = np.minimum(kin // grid.alpha, grid.L - 1)
        self.idx = idx.astype(np.int64)
        self.frac = kin / grid.alpha - idx
        self.y = grid.x_min + k * grid.dz
        self.n_ext = n_ext
        # padding strictly beyond the extended length keeps every used output
        # index clear of the circular wraparound
        self.n_fft = 1 << n_ext.bit_length()
        self.stride = grid.alpha
        self.out_len = grid.L + 1
        self.weight_spectrum = np.conj(np.fft.rfft(weights, self.n_fft))

    def extended(self, values: np.ndarray, extension: BoundaryExtension, t: float) -> np.ndarray:
        e = np.empty(self.n_ext)
        e[self.inside] = (1.0 - self.frac) * values[self.idx] + self.frac * values[self.idx + 1]
        if self.left_mask.any():
            e[self.left_mask] = extension.left(self.y[self.left_mask], t)
        if self.right_mask.any():
            e[self.right_mask] = extension.right(self.y[self.right_mask], t)
        return e

    def correlate(self, e: np.ndarray) -> np.ndarray:
        spec = np.fft.rfft(e, self.n_fft, axis=-1) * self.weight_spectrum
        full = np.fft.irfft(spec, self.n_fft, axis=-1)
        return full[..., 0 : self.stride * self.grid.L + 1 : self.stride]


def apply_jump_operator(
    values: np.ndarray,
    weights: DensityWeights,
    grid: Grid,
    extension: BoundaryExtension,
    t: float = 0.0,
) -> np.ndarray:
    """Convolution output at every x node for one lattice slice."""
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.L + 1,):
        raise DimensionMismatch(f"slice has shape {values.shape}, expected ({grid.L + 1},)")
    plan = weights.plan
    if plan.grid is not grid and (plan.grid.L, plan.grid.alpha, plan.grid.J) != (grid.L, grid.alpha, grid.J):
        raise DimensionMismatch("weights were discretized for an incompatible grid")
    return plan.correlate(plan.extended(values, extension, t))


def apply_jump_operator_to_slices(
    surface: np.ndarray,
    weights: DensityWeights,
    grid: Grid,
    extension: BoundaryExtension,
    times: np.ndarray,
) -> np.ndarray:
    """Convolution of every time slice of a (L+1, M+1) lattice in one batched FFT."""
    if surface.shape != (grid.L + 1, len(times)):
        raise DimensionMismatch(f"surface has shape {surface.shape}")
    plan = weights.plan
    e = np.empty((len(times), plan.n_ext))
    for m, t in enumerate(times):
        e[m] = plan.extended(surface[:, m], extension, float(t))
    return plan.correlate(e).T
