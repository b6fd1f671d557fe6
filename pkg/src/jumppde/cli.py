"""Batch command-line front end.

Subcommands:
  price     price one contract from a config file, optionally dumping CSVs
  table     reproduce a built-in reference table (1-4) and report differences
  boundary  dump per-iterate exercise-boundary curves for an American put

Config files are INI-style with sections [model], [option], [grid], [scheme]
and [run]; see ``RunConfig``. Exit codes: 0 success, 2 config error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import io
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import tables
from .engine import EngineConfig, iterate_to_fixed_point
from .errors import ConfigError, InvalidSpec, JumpPDEError, NoConvergence
from .grid import GridSpec, build_grid
from .model import (
    DoubleExponential,
    Gaussian,
    ModelParams,
    OptionSpec,
    boundary_jumps_at_maturity,
    limit_boundary_s_star,
)
from .oracle import merton_european_series

__all__ = ["RunConfig", "cmd_price", "cmd_table", "cmd_boundary", "main"]

_OUTPUTS = ("price", "surface", "boundary", "convergence")

_SCHEMA = {
    "model": {"r", "sigma", "lambda", "jump", "p", "eta1", "eta2", "mu_tilde", "sigma_tilde"},
    "option": {"style", "payoff", "strike", "maturity", "barrier", "rebate"},
    "grid": {"x_min", "x_max", "l", "alpha", "z_margin", "dt_rule", "m"},
    "scheme": {"theta", "solver", "psor_tol", "global_tol", "max_global_iters", "omega"},
    "run": {"spots", "outputs"},
}


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


@dataclass
class RunConfig:
    """Validated, typed view of one pricing configuration file."""

    r: float
    sigma: float
    lam: float
    jump_kind: str
    jump_params: dict
    style: str
    payoff: str
    strike: float
    maturity: float
    barrier: float | None
    rebate: float
    x_min: float | None
    x_max: float | None
    L: int
    alpha: int
    z_margin: float
    dt_rule: str
    M: int | None
    theta: float
    solver: str
    psor_tol: float
    global_tol: float
    max_global_iters: int
    omega: float | None
    spots: list[float]
    outputs: list[str] = field(default_factory=lambda: ["price"])

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_ini(text)

    @classmethod
    def from_ini(cls, text: str) -> "RunConfig":
        parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"malformed config: {exc}") from exc

        for section in parser.sections():
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]")
            for key in parser[section]:
                if key not in _SCHEMA[section]:
                    raise ConfigError(f"unknown key {key!r} in section [{section}]")
        for required in ("model", "option", "grid", "run"):
            if required not in parser:
                raise ConfigError(f"missing section [{required}]")

        def get(section, key, conv, default=None, required=False):
            raw = parser.get(section, key, fallback=None)
            if raw is None or raw.strip() == "":
                if required:
                    raise ConfigError(f"missing required key {key!r} in [{section}]")
                return default
            try:
                return conv(raw.strip())
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {section}.{key}: {raw!r}") from exc

        jump_kind = get("model", "jump", str, required=True).lower()
        if jump_kind == "double-exponential":
            jump_params = {
                "p": get("model", "p", float, required=True),
                "eta1": get("model", "eta1", float, required=True),
                "eta2": get("model", "eta2", float, required=True),
            }
        elif jump_kind == "gaussian":
            jump_params = {
                "mu_tilde": get("model", "mu_tilde", float, required=True),
                "sigma_tilde": get("model", "sigma_tilde", float, required=True),
            }
        else:
            raise ConfigError(f"unknown jump law {jump_kind!r}")

        spots = get("run", "spots", lambda s: [float(v) for v in s.split(",")], required=True)
        outputs = get(
            "run", "outputs", lambda s: [v.strip() for v in s.split(",") if v.strip()], default=["price"]
        )
        for out in outputs:
            if out not in _OUTPUTS:
                raise ConfigError(f"unknown output kind {out!r} (choose from {_OUTPUTS})")

        dt_rule = get("grid", "dt_rule", str, default="equal-dx").lower()
        if dt_rule not in ("equal-dx", "explicit"):
            raise ConfigError(f"dt_rule must be 'equal-dx' or 'explicit', got {dt_rule!r}")
        M = get("grid", "m", int)
        if dt_rule == "explicit" and M is None:
            raise ConfigError("dt_rule = explicit requires grid.m")

        cfg = cls(
            r=get("model", "r", float, required=True),
            sigma=get("model", "sigma", float, required=True),
            lam=get("model", "lambda", float, required=True),
            jump_kind=jump_kind,
            jump_params=jump_params,
            style=get("option", "style", str, required=True).lower(),
            payoff=get("option", "payoff", str, required=True).lower(),
            strike=get("option", "strike", float, required=True),
            maturity=get("option", "maturity", float, required=True),
            barrier=get("option", "barrier", float),
            rebate=get("option", "rebate", float, default=0.0),
            x_min=get("grid", "x_min", float),
            x_max=get("grid", "x_max", float),
            L=get("grid", "l", int, required=True),
            alpha=get("grid", "alpha", int, default=1),
            z_margin=get("grid", "z_margin", float, default=4.0),
            dt_rule=dt_rule,
            M=M if dt_rule == "explicit" else None,
            theta=get("scheme", "theta", float, default=0.5),
            solver=get("scheme", "solver", str, default="psor").lower(),
            psor_tol=get("scheme", "psor_tol", float, default=1e-8),
            global_tol=get("scheme", "global_tol", float, default=1e-6),
            max_global_iters=get("scheme", "max_global_iters", int, default=50),
            omega=get("scheme", "omega", float),
            spots=spots,
            outputs=outputs,
        )
        cfg.validate()
        return cfg

    def validate(self):
        if self.solver not in ("psor", "brennan-schwartz"):
            raise ConfigError(f"solver must be psor or brennan-schwartz, got {self.solver!r}")
        if not 0.0 < self.theta <= 1.0:
            raise ConfigError(f"theta={self.theta} must lie in (0, 1]")
        try:
            self.build_model()
            self.build_option()
        except (InvalidSpec, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        if not self.spots:
            raise ConfigError("run.spots must list at least one spot")

    def to_ini(self) -> str:
        """Canonical serialization; parse(to_ini()) reproduces this config."""
        out = io.StringIO()
        out.write("[model]\n")
        out.write(f"r = {_fmt(self.r)}\nsigma = {_fmt(self.sigma)}\nlambda = {_fmt(self.lam)}\n")
        out.write(f"jump = {self.jump_kind}\n")
        for key in sorted(self.jump_params):
            out.write(f"{key} = {_fmt(self.jump_params[key])}\n")
        out.write("\n[option]\n")
        out.write(f"style = {self.style}\npayoff = {self.payoff}\n")
        out.write(f"strike = {_fmt(self.strike)}\nmaturity = {_fmt(self.maturity)}\n")
        if self.barrier is not None:
            out.write(f"barrier = {_fmt(self.barrier)}\nrebate = {_fmt(self.rebate)}\n")
        out.write("\n[grid]\n")
        if self.x_min is not None:
            out.write(f"x_min = {_fmt(self.x_min)}\n")
        if self.x_max is not None:
            out.write(f"x_max = {_fmt(self.x_max)}\n")
        out.write(f"l = {self.L}\nalpha = {self.alpha}\nz_margin = {_fmt(self.z_margin)}\n")
        out.write(f"dt_rule = {self.dt_rule}\n")
        if self.M is not None:
            out.write(f"m = {self.M}\n")
        out.write("\n[scheme]\n")
        out.write(f"theta = {_fmt(self.theta)}\nsolver = {self.solver}\n")
        out.write(f"psor_tol = {_fmt(self.psor_tol)}\nglobal_tol = {_fmt(self.global_tol)}\n")
        out.write(f"max_global_iters = {self.max_global_iters}\n")
        if self.omega is not None:
            out.write(f"omega = {_fmt(self.omega)}\n")
        out.write("\n[run]\n")
        out.write(f"spots = {', '.join(_fmt(s) for s in self.spots)}\n")
        out.write(f"outputs = {', '.join(self.outputs)}\n")
        return out.getvalue()

    def build_model(self) -> ModelParams:
        if self.jump_kind == "double-exponential":
            jump = DoubleExponential(
                self.jump_params["p"], self.jump_params["eta1"], self.jump_params["eta2"]
            )
        else:
            jump = Gaussian(self.jump_params["mu_tilde"], self.jump_params["sigma_tilde"])
        return ModelParams(r=self.r, sigma=self.sigma, lam=self.lam, jump=jump)

    def build_option(self) -> OptionSpec:
        return OptionSpec(
            self.style, self.payoff, self.strike, self.maturity, barrier=self.barrier, rebate=self.rebate
        )

    def build_grid_spec(self, L: int | None = None) -> GridSpec:
        return GridSpec(
            L=L if L is not None else self.L,
            x_min=self.x_min,
            x_max=self.x_max,
            M=self.M,
            alpha=self.alpha,
            z_margin=self.z_margin,
        )

    def build_engine_config(self, keep_iterates: bool = False) -> EngineConfig:
        return EngineConfig(
            theta=self.theta,
            solver=self.solver,
            psor_tol=self.psor_tol,
            global_tol=self.global_tol,
            max_global_iters=self.max_global_iters,
            omega=self.omega,
            keep_iterates=keep_iterates,
        )


def _write_csv(path: Path, header: list[str], rows, comments: list[str] = ()):
    with open(path, "w", newline="") as fh:
        for comment in comments:
            fh.write(f"# {comment}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join("" if v is None else v if isinstance(v, str) else _fmt(v) for v in row))
            fh.write("\n")


def _run_config(cfg: RunConfig, keep_iterates: bool = False):
    model = cfg.build_model()
    opt = cfg.build_option()
    grid = build_grid(cfg.build_grid_spec(), opt, model.jump)
    engine_cfg = cfg.build_engine_config(keep_iterates=keep_iterates)
    started = time.perf_counter()
    result = iterate_to_fixed_point(model, opt, grid, engine_cfg, spots=cfg.spots)
    elapsed = time.perf_counter() - started
    return model, opt, grid, result, elapsed


def cmd_price(config_path, out_dir=None, solver=None, theta=None) -> int:
    """Price the configured contract at each spot and print a report line per spot."""
    cfg = RunConfig.from_file(config_path)
    if solver:
        cfg.solver = solver
    if theta is not None:
        cfg.theta = theta
    cfg.validate()
    if "boundary" in cfg.outputs and not (cfg.style == "american" and cfg.payoff == "put"):
        raise ConfigError("boundary output requires an American put configuration")

    model, opt, grid, result, elapsed = _run_config(cfg)
    rep = result.report
    bound = rep.analytic_bounds[-1]

    print(f"{'spot':>10} {'price':>12} {'iters':>6} {'psor_max':>9} {'bound':>12} {'seconds':>9}")
    for spot, price in zip(result.spots, result.prices):
        print(f"{spot:>10.4f} {price:>12.6f} {rep.n_iterations:>6d} "
              f"{rep.psor_max_iterations:>9d} {bound:>12.6g} {elapsed:>9.3f}")

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if "price" in cfg.outputs:
            _write_csv(
                out / "price.csv",
                ["spot_currency", "price_currency", "iters_count", "psor_max_count",
                 "bound_currency", "seconds_wall"],
                [(s, p, rep.n_iterations, rep.psor_max_iterations, bound, elapsed)
                 for s, p in zip(result.spots, result.prices)],
            )
        if "surface" in cfg.outputs:
            x, t = grid.x, grid.t
            vals = result.surface.values
            rows = [(x[l], t[m], vals[l, m]) for l in range(grid.L + 1) for m in range(grid.M + 1)]
            _write_csv(out / "surface.csv", ["x_log_price", "t_years", "value_currency"], rows)
        if "boundary" in cfg.outputs and result.boundary is not None:
            _write_csv(
                out / "boundary.csv",
                ["t_years", "s_converged_currency"],
                list(zip(grid.t, result.boundary)),
            )
        if "convergence" in cfg.outputs:
            _write_convergence(cfg, out / "convergence.csv")
    return 0


def _write_convergence(cfg: RunConfig, path: Path):
    """Halving ladder L/4, L/2, L at the first spot (the declared convergence schema)."""
    ladder = [max(8, cfg.L // 4), max(8, cfg.L // 2), cfg.L]
    rows = []
    prev_value = None
    for L in ladder:
        model = cfg.build_model()
        opt = cfg.build_option()
        grid = build_grid(cfg.build_grid_spec(L=L), opt, model.jump)
        started = time.perf_counter()
        res = iterate_to_fixed_point(model, opt, grid, cfg.build_engine_config(), spots=[cfg.spots[0]])
        elapsed = time.perf_counter() - started
        diff = None if prev_value is None else res.price - prev_value
        rows.append((L, grid.M, res.price, diff, res.report.psor_max_iterations, elapsed))
        prev_value = res.price
    _write_csv(
        path,
        ["L_count", "M_count", "value_currency", "diff_currency", "psor_max_count", "seconds_wall"],
        rows,
    )


def _print_rows(header: list[str], rows):
    widths = [max(len(h), 12) for h in header]
    print("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    for row in rows:
        cells = ["" if v is None else v if isinstance(v, str) else _fmt(v) for v in row]
        print("  ".join(c.rjust(w) for c, w in zip(cells, widths)))


def _engine_cfg_for_table(solver, theta) -> EngineConfig:
    return EngineConfig(theta=0.5 if theta is None else theta,
                        solver=solver or "psor")


def cmd_table(table_id: int, out_dir=None, solver=None, theta=None) -> int:
    """Run one built-in table and print computed vs published values."""
    if table_id not in (1, 2, 3, 4):
        raise ConfigError(f"unknown table id {table_id}")
    out = None
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)

    if table_id == 1:
        header = ["K", "T_years", "sigma_per_sqrt_year", "lambda_per_year", "eta1", "eta2",
                  "computed_currency", "published_currency", "difference_currency", "seconds_wall"]
        rows = []
        for row, model, opt, spec, spot in tables.table1_runs():
            grid = build_grid(spec, opt, model.jump)
            started = time.perf_counter()
            res = iterate_to_fixed_point(model, opt, grid, _engine_cfg_for_table(solver, theta), spots=[spot])
            elapsed = time.perf_counter() - started
            rows.append((row["K"], row["T"], row["sigma"], row["lam"], row["eta1"], row["eta2"],
                         res.price, row["published"], res.price - row["published"], elapsed))
        _print_rows(header, rows)
        if out:
            _write_csv(out / "table1.csv", header, rows)

    elif table_id == 2:
        header = ["style", "payoff", "spot_currency", "computed_currency", "published_currency",
                  "difference_currency", "series_currency", "seconds_wall"]
        rows = []
        for row, model, opt, spec, spots in tables.table2_runs():
            grid = build_grid(spec, opt, model.jump)
            started = time.perf_counter()
            res = iterate_to_fixed_point(model, opt, grid, _engine_cfg_for_table(solver, theta), spots=spots)
            elapsed = time.perf_counter() - started
            for spot, price, published in zip(spots, res.prices, row["published"]):
                series = None
                if row["style"] == "european":
                    series = merton_european_series(model, opt, spot)[0]
                rows.append((row["style"], row["payoff"], spot, price, published, price - published,
                             series, elapsed))
        _print_rows(header, rows)
        if out:
            _write_csv(out / "table2.csv", header, rows)

    elif table_id == 3:
        header = ["barrier_currency", "rebate_currency", "spot_currency", "computed_currency",
                  "published_currency", "difference_currency", "seconds_wall"]
        rows = []
        for row, model, opt, spec, spots in tables.table3_runs():
            grid = build_grid(spec, opt, model.jump)
            started = time.perf_counter()
            res = iterate_to_fixed_point(model, opt, grid, _engine_cfg_for_table(solver, theta), spots=spots)
            elapsed = time.perf_counter() - started
            rows.append((row["barrier"], row["rebate"], spots[0], res.price, row["published"],
                         res.price - row["published"], elapsed))
        _print_rows(header, rows)
        if out:
            _write_csv(out / "table3.csv", header, rows)

    else:
        header = ["spot_currency", "L_count", "M_count", "bs_value_currency", "psor_value_currency",
                  "published_bs_currency", "published_psor_currency", "richardson_diff_currency",
                  "psor_max_count", "global_iters_count", "seconds_wall"]
        rows = []
        prev_psor: dict[float, float] = {}
        for L, model, opt, spec, spots in tables.table4_runs():
            grid = build_grid(spec, opt, model.jump)
            values = {}
            stats = {}
            for solver_name in ("brennan-schwartz", "psor"):
                cfg = EngineConfig(theta=0.5 if theta is None else theta, solver=solver_name)
                started = time.perf_counter()
                res = iterate_to_fixed_point(model, opt, grid, cfg, spots=spots)
                elapsed = time.perf_counter() - started
                values[solver_name] = res.prices.copy()
                stats[solver_name] = (res.report, elapsed)
            rep, elapsed = stats["psor"]
            for i, spot in enumerate(spots):
                pub_bs, pub_psor = tables.TABLE4_PUBLISHED[(spot, L)]
                psor_val = values["psor"][i]
                rich = psor_val - prev_psor[spot] if spot in prev_psor else None
                rows.append((spot, L, grid.M, values["brennan-schwartz"][i], psor_val,
                             pub_bs, pub_psor, rich, rep.psor_max_iterations,
                             rep.n_iterations, elapsed))
                prev_psor[spot] = psor_val
        _print_rows(header, rows)
        if out:
            _write_csv(out / "table4.csv", header, rows)

    return 0


def cmd_boundary(config_path, out_dir=None, solver=None, theta=None) -> int:
    """Per-iterate exercise boundaries for an American put configuration."""
    cfg = RunConfig.from_file(config_path)
    if solver:
        cfg.solver = solver
    if theta is not None:
        cfg.theta = theta
    cfg.validate()
    if not (cfg.style == "american" and cfg.payoff == "put"):
        raise ConfigError("the boundary command requires an American put configuration")

    model, opt, grid, result, elapsed = _run_config(cfg, keep_iterates=False)
    curves = result.iterate_boundaries
    n = len(curves)

    comments = []
    if boundary_jumps_at_maturity(model):
        s_star = limit_boundary_s_star(model, opt.strike)
        comments.append(f"s_star_currency = {_fmt(s_star)}")
        print(f"pre-maturity boundary limit: {s_star:.6f}")
    print(f"iterates: {n}, converged boundary at t=0: {result.boundary[0]:.6f} (in {elapsed:.3f}s)")

    header = ["t_years"] + [f"s_{k}_currency" for k in range(1, n + 1)] + ["s_converged_currency"]
    rows = []
    for m in range(grid.M + 1):
        rows.append(tuple([grid.t[m]] + [curves[k][m] for k in range(n)] + [result.boundary[m]]))
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "boundary_iterates.csv", header, rows, comments=comments)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="jumppde", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_price = sub.add_parser("price", help="price a contract from a config file")
    p_price.add_argument("--config", required=True)
    p_table = sub.add_parser("table", help="reproduce a built-in reference table")
    p_table.add_argument("table_id", type=int, choices=(1, 2, 3, 4))
    p_bound = sub.add_parser("boundary", help="exercise-boundary iterates for an American put")
    p_bound.add_argument("--config", required=True)

    for p in (p_price, p_table, p_bound):
        p.add_argument("--out-dir", default=None)
        p.add_argument("--solver", choices=("psor", "brennan-schwartz"), default=None)
        p.add_argument("--theta", type=float, default=None)

    args = parser.parse_args(argv)
    try:
        if args.command == "price":
            return cmd_price(args.config, args.out_dir, args.solver, args.theta)
        if args.command == "table":
            return cmd_table(args.table_id, args.out_dir, args.solver, args.theta)
        return cmd_boundary(args.config, args.out_dir, args.solver, args.theta)
    except (ConfigError, InvalidSpec) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NoConvergence as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(f"sup-diff trace: {[f'{d:.3e}' for d in exc.report.sup_diffs]}", file=sys.stderr)
        return 3
    except JumpPDEError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
