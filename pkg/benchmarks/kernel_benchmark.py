"""Compare the compiled solver kernels against the pure-Python fallback.

Micro-benchmarks call both kernel modules directly on identical step systems;
the end-to-end comparison times a full pricing run in subprocesses with the
backend forced through JUMPPDE_PURE_PYTHON.

Run:  python3 benchmarks/kernel_benchmark.py
"""

import os
import subprocess
import sys
import time

import numpy as np

from jumppde import _kernels_py

try:
    from jumppde import _kernels as _compiled
except ImportError:
    _compiled = None


def step_system(n, seed=0):
    rng = np.random.default_rng(seed)
    p = 8.0
    sub = np.full(n, -p)
    sup = np.full(n, -p)
    diag = np.full(n, 1.0 + 2 * p + 0.01)
    x = np.linspace(-0.3, 0.3, n)
    g = np.maximum(100.0 * (1.0 - np.exp(x)), 0.0)
    rhs = g + rng.uniform(0.0, 2.0, n)
    return sub, diag, sup, rhs, g


def time_call(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels():
    print(f"{'kernel':<22} {'n':>6} {'compiled':>12} {'python':>12} {'speedup':>9}")
    for n in (127, 511, 2047):
        sub, diag, sup, rhs, g = step_system(n)
        cases = {
            "psor (200 sweeps)": lambda mod: mod.psor_solve(
                sub, diag, sup, rhs, g, rhs.copy(), 1.4, 0.0, 200, True
            ),
            "brennan-schwartz": lambda mod: mod.brennan_schwartz_solve(
                sub, diag, sup, rhs, g, np.empty(n), True
            ),
            "thomas": lambda mod: mod.thomas_solve(sub, diag, sup, rhs, np.empty(n)),
        }
        for name, call in cases.items():
            t_py = time_call(lambda: call(_kernels_py))
            if _compiled is None:
                print(f"{name:<22} {n:>6} {'n/a':>12} {t_py * 1e3:>10.3f}ms {'':>9}")
            else:
                t_c = time_call(lambda: call(_compiled))
                print(f"{name:<22} {n:>6} {t_c * 1e3:>10.3f}ms {t_py * 1e3:>10.3f}ms {t_py / t_c:>8.1f}x")


PRICING_SNIPPET = """
import math, time
from jumppde import *
import jumppde
m = ModelParams(r=0.05, sigma=0.15, lam=0.1, jump=Gaussian(-0.9, 0.45))
opt = OptionSpec("american", "put", 100.0, 0.25)
spec = GridSpec(L=512, x_min=math.log(100)-0.26, x_max=math.log(100)+0.30)
grid = build_grid(spec, opt, m.jump)
t0 = time.perf_counter()
res = iterate_to_fixed_point(m, opt, grid, EngineConfig(theta=0.5), spots=[100.0])
print(f"{jumppde.BACKEND}: price={res.price:.6f} in {time.perf_counter()-t0:.3f}s "
      f"(psor_max={res.report.psor_max_iterations})")
"""


def bench_full_run():
    print("\nfull pricing run (L=512 American put, jump model):")
    for force_pure in (False, True):
        env = dict(os.environ)
        if force_pure:
            env["JUMPPDE_PURE_PYTHON"] = "1"
        else:
            env.pop("JUMPPDE_PURE_PYTHON", None)
        out = subprocess.run([sys.executable, "-c", PRICING_SNIPPET],
                             capture_output=True, text=True, env=env)
        print(" ", out.stdout.strip() or out.stderr.strip())


if __name__ == "__main__":
    if _compiled is None:
        print("note: compiled kernels unavailable; showing pure-Python timings only\n")
    bench_kernels()
    bench_full_run()
