"""Jump-diffusion market model: jump laws, dynamics parameters, contracts.

The stock's log-return follows a Brownian motion with drift ``mu - sigma^2/2``
plus a compound Poisson process whose i.i.d. log-jumps come from one of two
supported laws (double-exponential or Gaussian). The risk-neutral drift is
``mu = r + lambda - lambda*xi`` with ``xi = E[exp(Z)]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import ConditionNotMet, InvalidSpec, WrongModel

__all__ = [
    "DoubleExponential",
    "Gaussian",
    "JumpDistribution",
    "ModelParams",
    "OptionSpec",
    "jump_mean_exp",
    "risk_neutral_drift",
    "boundary_jumps_at_maturity",
    "limit_boundary_s_star",
    "jump_density",
]


@dataclass(frozen=True)
class DoubleExponential:
    """Double-exponential (asymmetric Laplace) law for the log-jump size.

    ``p`` is the probability of an upward jump, ``eta1``/``eta2`` the decay
    rates of the up/down exponential tails. ``eta1 > 1`` is required so that
    ``E[exp(Z)]`` is finite.
    """

    p: float
    eta1: float
    eta2: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidSpec(f"jump up-probability p={self.p} must lie in [0, 1]")
        if not self.eta1 > 1.0:
            raise InvalidSpec(f"eta1={self.eta1} must exceed 1 so E[exp(Z)] is finite")
        if not self.eta2 > 0.0:
            raise InvalidSpec(f"eta2={self.eta2} must be positive")

    def mean(self) -> float:
        return self.p / self.eta1 - (1.0 - self.p) / self.eta2

    def variance(self) -> float:
        second = 2.0 * self.p / self.eta1**2 + 2.0 * (1.0 - self.p) / self.eta2**2
        return second - self.mean() ** 2

    def std(self) -> float:
        return math.sqrt(self.variance())


@dataclass(frozen=True)
class Gaussian:
    """Normal law for the log-jump size, mean ``mu_tilde``, std ``sigma_tilde``."""

    mu_tilde: float
    sigma_tilde: float

    def __post_init__(self):
        if not self.sigma_tilde > 0.0:
            raise InvalidSpec(f"sigma_tilde={self.sigma_tilde} must be positive")

    def mean(self) -> float:
        return self.mu_tilde

    def variance(self) -> float:
        return self.sigma_tilde**2

    def std(self) -> float:
        return self.sigma_tilde


JumpDistribution = DoubleExponential | Gaussian


@dataclass(frozen=True)
class ModelParams:
    """Risk-neutral dynamics: rate, diffusion volatility, jump intensity, jump law."""

    r: float
    sigma: float
    lam: float
    jump: JumpDistribution

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise InvalidSpec(f"sigma={self.sigma} must be strictly positive")
        if self.lam < 0.0:
            raise InvalidSpec(f"lambda={self.lam} must be nonnegative")
        if self.r < 0.0:
            raise InvalidSpec(f"r={self.r} must be nonnegative")


@dataclass(frozen=True)
class OptionSpec:
    """Contract terms.

    ``style`` is "american" or "european"; ``payoff`` is "put" or "call".
    A down-and-out barrier (level ``barrier``, rebate ``rebate`` paid at
    knock-out) is supported for European contracts only.
    """

    style: str
    payoff: str
    strike: float
    maturity: float
    barrier: float | None = None
    rebate: float = 0.0

    def __post_init__(self):
        if self.style not in ("american", "european"):
            raise InvalidSpec(f"unknown exercise style {self.style!r}")
        if self.payoff not in ("put", "call"):
            raise InvalidSpec(f"unknown payoff {self.payoff!r}")
        if not self.strike > 0.0:
            raise InvalidSpec(f"strike={self.strike} must be positive")
        if not self.maturity > 0.0:
            raise InvalidSpec(f"maturity={self.maturity} must be positive")
        if self.barrier is not None:
            if not self.barrier > 0.0:
                raise InvalidSpec(f"barrier={self.barrier} must be positive")
            if self.rebate < 0.0:
                raise InvalidSpec(f"rebate={self.rebate} must be nonnegative")
            if self.style == "american":
                raise InvalidSpec("American barrier contracts are not supported")

    @property
    def is_american(self) -> bool:
        return self.style == "american"


def jump_mean_exp(jump: JumpDistribution) -> float:
    """Mean of exp(Z) under the jump law (closed form for both laws)."""
    if isinstance(jump, DoubleExponential):
        up = jump.p * jump.eta1 / (jump.eta1 - 1.0)
        down = (1.0 - jump.p) * jump.eta2 / (jump.eta2 + 1.0)
        return up + down
    if isinstance(jump, Gaussian):
        return math.exp(jump.mu_tilde + 0.5 * jump.sigma_tilde**2)
    raise WrongModel(f"unsupported jump law {type(jump).__name__}")


def risk_neutral_drift(m: ModelParams) -> float:
    """Drift mu = r + lambda - lambda * E[exp(Z)] that makes exp(X) a martingale
    after discounting."""
    return m.r + m.lam - m.lam * jump_mean_exp(m.jump)


def jump_density(jump: JumpDistribution, z) -> float:
    """Pointwise density of the jump law. Accepts scalars or numpy arrays.

    The double-exponential density uses the right-limit convention at z = 0
    (the upward branch applies for z >= 0).
    """
    z = np.asarray(z, dtype=float)
    if isinstance(jump, DoubleExponential):
        up = jump.p * jump.eta1 * np.exp(-jump.eta1 * np.clip(z, 0.0, None))
        down = (1.0 - jump.p) * jump.eta2 * np.exp(jump.eta2 * np.clip(z, None, 0.0))
        out = np.where(z >= 0.0, up, down)
    elif isinstance(jump, Gaussian):
        s2 = jump.sigma_tilde**2
        out = np.exp(-((z - jump.mu_tilde) ** 2) / (2.0 * s2)) / math.sqrt(2.0 * math.pi * s2)
    else:
        raise WrongModel(f"unsupported jump law {type(jump).__name__}")
    return out if out.ndim else float(out)


def _upward_exp_gain(m: ModelParams) -> float:
    """lambda * integral over z > 0 of (exp(z) - 1) dF(z)."""
    jump = m.jump
    if isinstance(jump, DoubleExponential):
        integral = jump.p / (jump.eta1 - 1.0)
    else:
        hi = jump.mu_tilde + 8.0 * jump.sigma_tilde
        if hi <= 0.0:
            integral = 0.0
        else:
            integral, _ = quad(
                lambda z: (math.exp(z) - 1.0) * jump_density(jump, z), 0.0, hi
            )
    return m.lam * integral


def boundary_jumps_at_maturity(m: ModelParams) -> bool:
    """True when the exercise boundary is discontinuous at maturity, i.e. when
    r < lambda * E[(exp(Z) - 1)^+ restricted to Z > 0]."""
    if m.lam == 0.0:
        return False
    return m.r < _upward_exp_gain(m)


def _excess_jump_value(m: ModelParams, K: float, S: float) -> float:
    """-r*K + lambda * E[(S*exp(Z) - K)^+], the root function defining S*."""
    jump = m.jump
    z_star = math.log(K / S)
    if isinstance(jump, DoubleExponential):
        hi = z_star + 40.0 / jump.eta1
    else:
        hi = max(z_star, jump.mu_tilde) + 10.0 * jump.sigma_tilde
    if hi <= z_star:
        integral = 0.0
    else:
        integral, _ = quad(
            lambda z: (S * math.exp(z) - K) * jump_density(jump, z),
            z_star,
            hi,
            points=[z_star] if z_star < hi else None,
            limit=200,
        )
    return -m.r * K + m.lam * integral


def limit_boundary_s_star(m: ModelParams, K: float, method: str = "auto") -> float:
    """Pre-maturity limit S* of the exercise boundary, the unique root in (0, K)
    of -r*K + lambda * E[(S exp(Z) - K)^+] = 0.

    ``method``: "auto" (closed form for double-exponential jumps, bisection
    otherwise), "closed", or "bisect". Raises ConditionNotMet when the
    boundary does not detach from the strike.
    """
    if not boundary_jumps_at_maturity(m):
        raise ConditionNotMet(
            "r >= lambda * E[(exp(Z)-1)^+]: the exercise boundary reaches K at maturity"
        )
    if method == "auto":
        method = "closed" if isinstance(m.jump, DoubleExponential) else "bisect"
    if method == "closed":
        if not isinstance(m.jump, DoubleExponential):
            raise WrongModel("closed-form S* exists only for double-exponential jumps")
        jump = m.jump
        return ((jump.eta1 - 1.0) * m.r / (m.lam * jump.p)) ** (1.0 / jump.eta1) * K
    if method != "bisect":
        raise ValueError(f"unknown method {method!r}")

    lo, hi = 1e-12 * K, K * (1.0 - 1e-14)
    f_lo = _excess_jump_value(m, K, lo)
    f_hi = _excess_jump_value(m, K, hi)
    if not (f_lo < 0.0 < f_hi):
        raise ConditionNotMet("root of the limit-boundary equation is not bracketed in (0, K)")
    tol = 1e-10 * K
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _excess_jump_value(m, K, mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
