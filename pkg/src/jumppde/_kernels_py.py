"""Pure-Python twins of the compiled tridiagonal solver kernels.

Selected at import time by ``_backend`` when the extension is unavailable.
Bands follow the convention sub[i]*x[i-1] + diag[i]*x[i] + sup[i]*x[i+1];
sub[0] and sup[n-1] are ignored. All routines write the solution into ``x``
in place. The inner loops run over plain lists: element access on numpy
scalars is several times slower in the interpreter.
"""

__all__ = ["psor_solve", "brennan_schwartz_solve", "thomas_solve", "BACKEND_NAME"]

BACKEND_NAME = "python"

_TINY = 1e-300


def psor_solve(sub, diag, sup, rhs, obstacle, x, omega, tol, max_sweeps, project):
    """Projected SOR with ascending sweeps.

    Stops once the componentwise complementarity residual is within ``tol``:
    (Ax-b)_i >= -tol and |min((Ax-b)_i, x_i - g_i)| <= tol (plain residual
    |Ax-b| <= tol when ``project`` is false). Returns (sweeps, converged).
    """
    n = len(x)
    a = sub.tolist()
    d = diag.tolist()
    c = sup.tolist()
    b = rhs.tolist()
    g = obstacle.tolist()
    u = x.tolist()
    last = n - 1
    for sweep in range(1, max_sweeps + 1):
        for i in range(n):
            r = b[i] - d[i] * u[i]
            if i > 0:
                r -= a[i] * u[i - 1]
            if i < last:
                r -= c[i] * u[i + 1]
            ui = u[i] + omega * r / d[i]
            if project and ui < g[i]:
                ui = g[i]
            u[i] = ui
        worst = 0.0
        low = 0.0
        for i in range(n):
            r = d[i] * u[i] - b[i]
            if i > 0:
                r += a[i] * u[i - 1]
            if i < last:
                r += c[i] * u[i + 1]
            if project:
                if r < low:
                    low = r
                s = u[i] - g[i]
                if s < r:
                    r = s
                if r < 0.0:
                    r = -r
            elif r < 0.0:
                r = -r
            if r > worst:
                worst = r
        if worst <= tol and (not project or low >= -tol):
            x[:] = u
            return sweep, True
    x[:] = u
    return max_sweeps, False


def brennan_schwartz_solve(sub, diag, sup, rhs, obstacle, x, project):
    """Two-sweep direct LCP solve for put-type obstacles.

    Eliminates the superdiagonal from the top row of the domain downward, then
    substitutes upward while projecting onto the obstacle, which is exact when
    the contact set is a single low-x interval. Returns 0, or 1 on a vanishing
    pivot.
    """
    n = len(x)
    a = sub.tolist()
    d = diag.tolist()
    c = sup.tolist()
    bh = rhs.tolist()
    g = obstacle.tolist()
    dh = d[:]
    for i in range(n - 2, -1, -1):
        piv = dh[i + 1]
        if -_TINY < piv < _TINY:
            return 1
        mlt = c[i] / piv
        dh[i] = d[i] - mlt * a[i + 1]
        bh[i] = bh[i] - mlt * bh[i + 1]
    if -_TINY < dh[0] < _TINY:
        return 1
    out = [0.0] * n
    ui = bh[0] / dh[0]
    if project and ui < g[0]:
        ui = g[0]
    out[0] = ui
    for i in range(1, n):
        ui = (bh[i] - a[i] * out[i - 1]) / dh[i]
        if project and ui < g[i]:
            ui = g[i]
        out[i] = ui
    x[:] = out
    return 0


def thomas_solve(sub, diag, sup, rhs, x):
    """Classic tridiagonal elimination. Returns 0, or 1 on a vanishing pivot."""
    n = len(x)
    a = sub.tolist()
    d = diag.tolist()
    c = sup.tolist()
    b = rhs.tolist()
    cp = [0.0] * n
    dp = [0.0] * n
    piv = d[0]
    if -_TINY < piv < _TINY:
        return 1
    cp[0] = c[0] / piv
    dp[0] = b[0] / piv
    for i in range(1, n):
        piv = d[i] - a[i] * cp[i - 1]
        if -_TINY < piv < _TINY:
            return 1
        cp[i] = c[i] / piv
        dp[i] = (b[i] - a[i] * dp[i - 1]) / piv
    for i in range(n - 2, -1, -1):
        dp[i] -= cp[i] * dp[i + 1]
    x[:] = dp
    return 0
