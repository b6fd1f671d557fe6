"""Independent reference computations: Black-Scholes closed form, the
lognormal-jump European series, and a direct-summation convolution.

These back the test suite and let the CLI report PDE-versus-closed-form gaps
for European contracts, so they ship with the library rather than living in
the tests.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import WrongModel
from .grid import Grid
from .jumpconv import BoundaryExtension, DensityWeights
from .model import Gaussian, ModelParams, OptionSpec, jump_mean_exp

__all__ = ["black_scholes", "merton_european_series", "direct_convolution", "norm_cdf"]


def norm_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def black_scholes(S0: float, K: float, r: float, sigma: float, T: float, payoff: str) -> float:
    """Closed-form European price under geometric Brownian motion."""
    if T <= 0.0 or sigma <= 0.0:
        fwd = S0 * math.exp(r * T) if T > 0 else S0
        disc = math.exp(-r * T)
        intrinsic = max(fwd - K, 0.0) if payoff == "call" else max(K - fwd, 0.0)
        return disc * intrinsic
    srt = sigma * math.sqrt(T)
    d1 = (math.log(S0 / K) + (r + 0.5 * sigma**2) * T) / srt
    d2 = d1 - srt
    if payoff == "call":
        return S0 * norm_cdf(d1) - K * math.exp(-r * T) * norm_cdf(d2)
    return K * math.exp(-r * T) * norm_cdf(-d2) - S0 * norm_cdf(-d1)


def merton_european_series(m: ModelParams, opt: OptionSpec, S0: float, tol: float = 1e-12):
    """European price under Gaussian log-jumps as the classical
    conditional-on-jump-count mixture.

    Poisson weights use the compensated intensity lambda' = lambda * xi; the
    k-jump term is Black-Scholes with variance sigma^2 + k*sigma_tilde^2/T and
    rate r - lambda*(xi - 1) + k*log(xi)/T. Terms are added until one falls
    below ``tol``; the last included term bounds the discarded tail.

    Returns (price, last_term).
    """
    if not isinstance(m.jump, Gaussian):
        raise WrongModel("the series oracle requires Gaussian log-jumps")
    if opt.style != "european" or opt.barrier is not None:
        raise WrongModel("the series oracle prices plain European contracts")
    K, T = opt.strike, opt.maturity
    xi = jump_mean_exp(m.jump)
    lam_prime_t = m.lam * xi * T
    log_weight = -lam_prime_t  # log of the k = 0 Poisson weight
    total = 0.0
    term = math.inf
    k = 0
    while term > tol or k <= lam_prime_t:
        sigma_k = math.sqrt(m.sigma**2 + k * m.jump.sigma_tilde**2 / T)
        r_k = m.r - m.lam * (xi - 1.0) + (k * math.log(xi) / T if k else 0.0)
        weight = math.exp(log_weight)
        term = weight * black_scholes(S0, K, r_k, sigma_k, T, opt.payoff)
        total += term
        k += 1
        log_weight += math.log(lam_prime_t) - math.log(k) if lam_prime_t > 0 else -math.inf
        if k > 400:
            break
    return total, term


def direct_convolution(
    values: np.ndarray,
    weights: DensityWeights,
    grid: Grid,
    extension: BoundaryExtension,
    t: float = 0.0,
) -> np.ndarray:
    """Literal O(L*J) evaluation of the discrete convolution.

    Shifted positions use the exact identity x_l + z_j = x_min +
    (z_offset + l*alpha + j)*dz, so this differs from the FFT path only in
    how the sum is carried out; their agreement is the FFT correctness check.
    """
    values = np.asarray(values, dtype=float)
    out = np.zeros(grid.L + 1)
    la = grid.L * grid.alpha
    w = weights.weights
    for l in range(grid.L + 1):
        acc = 0.0
        base = grid.z_offset + l * grid.alpha
        for j in range(grid.J):
            k = base + j
            y = grid.x_min + k * grid.dz
            if k < 0:
                u = float(extension.left(np.array([y]), t)[0])
            elif k > la:
                u = float(extension.right(np.array([y]), t)[0])
            else:
                idx = min(k // grid.alpha, grid.L - 1)
                frac = k / grid.alpha - idx
                u = (1.0 - frac) * values[idx] + frac * values[idx + 1]
            acc += u * w[j]
        out[l] = acc
    return out
