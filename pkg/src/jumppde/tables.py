"""Built-in parameter sets for the four reference tables.

Rows are plain data so new cases are added by editing the manifests below.
Grid geometry policy (chosen once, recorded per row): the space mesh anchors
the strike halfway between two nodes (the payoff kink at a cell center keeps
the Crank-Nicolson error clean), ``lo_w``/``hi_w`` give the log-price span
below/above the strike, and dz targets 2e-4 for the double-exponential law
(its density decays on the 1/eta scale, so the left-endpoint quadrature
needs a much finer z mesh than x mesh).
"""

from __future__ import annotations

import math

from .grid import GridSpec
from .model import DoubleExponential, Gaussian, ModelParams, OptionSpec

__all__ = [
    "TABLE1_ROWS",
    "TABLE2_ROWS",
    "TABLE3_ROWS",
    "TABLE4_SPOTS",
    "TABLE4_GRIDS",
    "table1_runs",
    "table2_runs",
    "table3_runs",
    "table4_runs",
    "boundary_demo_run",
    "anchored_spec",
]

#: reference rate and up-jump probability shared by every double-exponential row
TABLE1_R = 0.05
TABLE1_P = 0.6
TABLE1_SPOT = 100.0
TABLE1_L = 64
DE_DZ_TARGET = 2e-4

# K, T, sigma, lam, eta1, eta2, published value, half-width below strike
TABLE1_ROWS = [
    {"K": 90.0, "T": 0.25, "sigma": 0.2, "lam": 3.0, "eta1": 25.0, "eta2": 25.0, "published": 0.75, "lo_w": 0.45},
    {"K": 90.0, "T": 0.25, "sigma": 0.2, "lam": 3.0, "eta1": 25.0, "eta2": 50.0, "published": 0.66, "lo_w": 0.45},
    {"K": 90.0, "T": 0.25, "sigma": 0.2, "lam": 3.0, "eta1": 50.0, "eta2": 25.0, "published": 0.69, "lo_w": 0.45},
    {"K": 90.0, "T": 0.25, "sigma": 0.2, "lam": 3.0, "eta1": 50.0, "eta2": 50.0, "published": 0.59, "lo_w": 0.45},
    {"K": 90.0, "T": 0.25, "sigma": 0.3, "lam": 3.0, "eta1": 25.0, "eta2": 25.0, "published": 1.93, "lo_w": 0.62},
    {"K": 90.0, "T": 0.25, "sigma": 0.2, "lam": 7.0, "eta1": 25.0, "eta2": 25.0, "published": 1.03, "lo_w": 0.45},
    {"K": 90.0, "T": 0.25, "sigma": 0.3, "lam": 7.0, "eta1": 25.0, "eta2": 25.0, "published": 2.20, "lo_w": 0.62},
    {"K": 100.0, "T": 0.25, "sigma": 0.2, "lam": 3.0, "eta1": 25.0, "eta2": 25.0, "published": 3.78, "lo_w": 0.45},
    {"K": 100.0, "T": 0.25, "sigma": 0.2, "lam": 3.0, "eta1": 25.0, "eta2": 50.0, "published": 3.66, "lo_w": 0.45},
    {"K": 100.0, "T": 0.25, "sigma": 0.2, "lam": 3.0, "eta1": 50.0, "eta2": 25.0, "published": 3.63, "lo_w": 0.45},
    {"K": 100.0, "T": 0.25, "sigma": 0.2, "lam": 3.0, "eta1": 50.0, "eta2": 50.0, "published": 3.50, "lo_w": 0.45},
    {"K": 100.0, "T": 0.25, "sigma": 0.3, "lam": 3.0, "eta1": 25.0, "eta2": 25.0, "published": 5.63, "lo_w": 0.62},
    {"K": 100.0, "T": 0.25, "sigma": 0.2, "lam": 7.0, "eta1": 25.0, "eta2": 25.0, "published": 4.27, "lo_w": 0.45},
    {"K": 100.0, "T": 0.25, "sigma": 0.3, "lam": 7.0, "eta1": 25.0, "eta2": 25.0, "published": 6.00, "lo_w": 0.62},
    {"K": 90.0, "T": 1.0, "sigma": 0.2, "lam": 3.0, "eta1": 25.0, "eta2": 25.0, "published": 2.92, "lo_w": 1.00},
    {"K": 90.0, "T": 1.0, "sigma": 0.2, "lam": 3.0, "eta1": 25.0, "eta2": 50.0, "published": 2.70, "lo_w": 1.00},
    {"K": 90.0, "T": 1.0, "sigma": 0.2, "lam": 3.0, "eta1": 50.0, "eta2": 25.0, "published": 2.68, "lo_w": 1.00},
    {"K": 90.0, "T": 1.0, "sigma": 0.2, "lam": 3.0, "eta1": 50.0, "eta2": 50.0, "published": 2.45, "lo_w": 1.00},
    {"K": 90.0, "T": 1.0, "sigma": 0.3, "lam": 3.0, "eta1": 25.0, "eta2": 25.0, "published": 5.77, "lo_w": 1.35},
]

# Merton model shared by tables 2 and 4
TABLE2_MODEL = {"r": 0.05, "sigma": 0.15, "lam": 0.1, "mu_tilde": -0.9, "sigma_tilde": 0.45}
TABLE2_K = 100.0
TABLE2_T = 0.25
TABLE2_L = 128
TABLE2_GEOM = {"lo_w": 0.298, "hi_w": 0.422}

TABLE2_ROWS = [
    {"style": "american", "payoff": "put", "spots": [90.0, 100.0, 110.0], "published": [10.004, 3.242, 1.420]},
    {"style": "european", "payoff": "put", "spots": [100.0], "published": [3.150]},
    {"style": "european", "payoff": "call", "spots": [90.0, 100.0, 110.0], "published": [0.528, 4.392, 12.643]},
]

TABLE3_MODEL = {"r": 0.05, "sigma": 0.25, "lam": 2.0, "mu_tilde": 0.0, "sigma_tilde": 0.1}
TABLE3_ROWS = [
    {"K": 110.0, "T": 1.0, "spot": 100.0, "barrier": 85.0, "rebate": 1.0, "published": 8.988},
    {"K": 110.0, "T": 1.0, "spot": 100.0, "barrier": 95.0, "rebate": 1.0, "published": 5.290},
]
TABLE3_L = 64

TABLE4_SPOTS = [90.0, 100.0, 110.0]
TABLE4_GRIDS = [64, 128, 256, 512]
TABLE4_GEOM = {"lo_w": 0.26, "hi_w": 0.30}
# published per-(spot, L) reference values: (Brennan-Schwartz, PSOR)
TABLE4_PUBLISHED = {
    (90.0, 64): (10.00230, 10.00573), (90.0, 128): (10.00142, 10.00429),
    (90.0, 256): (10.00192, 10.00396), (90.0, 512): (10.00218, 10.00387),
    (100.0, 64): (3.24074, 3.24465), (100.0, 128): (3.24008, 3.24180),
    (100.0, 256): (3.24046, 3.24115), (100.0, 512): (3.24058, 3.24103),
    (110.0, 64): (1.42048, 1.42146), (110.0, 128): (1.41941, 1.41991),
    (110.0, 256): (1.41958, 1.41966), (110.0, 512): (1.41962, 1.41960),
}
TABLE4_PSOR_ITERS = {64: 16, 128: 21, 256: 28, 512: 39}


def anchored_spec(
    K: float,
    lo_w: float,
    hi_w: float,
    L: int,
    alpha: int = 1,
    z_margin: float = 4.0,
    M: int | None = None,
) -> GridSpec:
    """Grid spec spanning [log K - lo_w, log K + hi_w] with the strike pinned
    to the midpoint of a cell."""
    dx = (lo_w + hi_w) / L
    n = round(lo_w / dx - 0.5)
    x_min = math.log(K) - (n + 0.5) * dx
    return GridSpec(L=L, x_min=x_min, x_max=x_min + L * dx, M=M, alpha=alpha, z_margin=z_margin)


def _de_alpha(dx: float) -> int:
    return max(1, int(round(dx / DE_DZ_TARGET)))


def table1_runs():
    """(row, model, option, grid spec, spot) per double-exponential case."""
    runs = []
    for row in TABLE1_ROWS:
        model = ModelParams(
            r=TABLE1_R,
            sigma=row["sigma"],
            lam=row["lam"],
            jump=DoubleExponential(TABLE1_P, row["eta1"], row["eta2"]),
        )
        opt = OptionSpec("american", "put", row["K"], row["T"])
        hi_w = row["lo_w"] + max(0.0, math.log(TABLE1_SPOT / row["K"]))
        dx = (row["lo_w"] + hi_w) / TABLE1_L
        spec = anchored_spec(
            row["K"], row["lo_w"], hi_w, TABLE1_L, alpha=_de_alpha(dx), z_margin=10.0
        )
        runs.append((row, model, opt, spec, TABLE1_SPOT))
    return runs


def _merton_model(params: dict) -> ModelParams:
    return ModelParams(
        r=params["r"],
        sigma=params["sigma"],
        lam=params["lam"],
        jump=Gaussian(params["mu_tilde"], params["sigma_tilde"]),
    )


def table2_runs():
    model = _merton_model(TABLE2_MODEL)
    runs = []
    for row in TABLE2_ROWS:
        opt = OptionSpec(row["style"], row["payoff"], TABLE2_K, TABLE2_T)
        spec = anchored_spec(TABLE2_K, TABLE2_GEOM["lo_w"], TABLE2_GEOM["hi_w"], TABLE2_L)
        runs.append((row, model, opt, spec, list(row["spots"])))
    return runs


def table3_runs():
    model = _merton_model(TABLE3_MODEL)
    runs = []
    for row in TABLE3_ROWS:
        opt = OptionSpec(
            "european", "call", row["K"], row["T"], barrier=row["barrier"], rebate=row["rebate"]
        )
        spec = GridSpec(L=TABLE3_L, alpha=1, z_margin=4.0)
        runs.append((row, model, opt, spec, [row["spot"]]))
    return runs


def table4_runs():
    """One run per grid size; spots priced jointly from a single lattice."""
    model = _merton_model(TABLE2_MODEL)
    opt = OptionSpec("american", "put", TABLE2_K, TABLE2_T)
    runs = []
    for L in TABLE4_GRIDS:
        spec = anchored_spec(TABLE2_K, TABLE4_GEOM["lo_w"], TABLE4_GEOM["hi_w"], L)
        runs.append((L, model, opt, spec, list(TABLE4_SPOTS)))
    return runs


def boundary_demo_run():
    """Exercise-boundary illustration setup (row 8 parameters, refined dt so
    the near-maturity boundary resolves within a couple of space cells)."""
    row = TABLE1_ROWS[7]
    model = ModelParams(
        r=TABLE1_R,
        sigma=row["sigma"],
        lam=row["lam"],
        jump=DoubleExponential(TABLE1_P, row["eta1"], row["eta2"]),
    )
    opt = OptionSpec("american", "put", row["K"], row["T"])
    dx = 2 * row["lo_w"] / TABLE1_L
    M = 4 * int(round(row["T"] / dx))
    spec = anchored_spec(
        row["K"], row["lo_w"], row["lo_w"], TABLE1_L, alpha=_de_alpha(dx), z_margin=10.0, M=M
    )
    return model, opt, spec, TABLE1_SPOT
