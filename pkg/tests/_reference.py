"""Shared independent reference computations for the test suite."""

import numpy as np

from jumppde import boundary_values, payoff_vector, risk_neutral_drift


def reference_american_fd(model, opt, grid, theta):
    """Jump-free theta-scheme put valued with dense active-set iteration.

    Independent of the production solvers: assembles the step matrix densely
    and resolves each complementarity problem by policy iteration with
    numpy.linalg solves.
    """
    assert model.lam == 0.0
    L, M = grid.L, grid.M
    mu = risk_neutral_drift(model)
    dt, dx = grid.dt, grid.dx
    diff = 0.5 * model.sigma**2 * dt / dx**2
    adv = 0.5 * (mu - 0.5 * model.sigma**2) * dt / dx
    pm, pp = diff - adv, diff + adv
    p0 = pm + pp + model.r * dt
    n = L - 1
    a = np.zeros((n, n))
    for i in range(n):
        a[i, i] = 1.0 + theta * p0
        if i > 0:
            a[i, i - 1] = -theta * pm
        if i < n - 1:
            a[i, i + 1] = -theta * pp
    g = payoff_vector(opt, grid)
    values = np.empty((L + 1, M + 1))
    values[:, M] = g
    american = opt.is_american
    for m in range(M - 1, -1, -1):
        left, right = boundary_values(opt, model, grid, m * dt)
        u_next = values[:, m + 1]
        b = ((1 - theta) * pm * u_next[0:n] + (1 - (1 - theta) * p0) * u_next[1:L]
             + (1 - theta) * pp * u_next[2:L + 1])
        b[0] += theta * pm * left
        b[-1] += theta * pp * right
        if not american:
            x = np.linalg.solve(a, b)
        else:
            obstacle = g[1:L]
            active = np.zeros(n, dtype=bool)
            x = None
            for _ in range(n + 2):
                x = np.empty(n)
                x[active] = obstacle[active]
                free = ~active
                rhs = b[free] - a[np.ix_(free, active)] @ obstacle[active]
                x[free] = np.linalg.solve(a[np.ix_(free, free)], rhs)
                residual = a @ x - b
                new_active = active.copy()
                new_active[x < obstacle - 1e-14] = True
                new_active[active & (residual < -1e-12)] = False
                if np.array_equal(new_active, active):
                    break
                active = new_active
            x = np.maximum(x, obstacle)
        values[0, m] = left
        values[1:L, m] = x
        values[L, m] = right
    return values
