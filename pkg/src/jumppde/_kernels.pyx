# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled tridiagonal solver kernels.

Same contracts and sweep/elimination order as ``_kernels_py`` so both
backends agree to floating-point noise. Bands follow the convention
sub[i]*x[i-1] + diag[i]*x[i] + sup[i]*x[i+1]; solutions land in ``x``.
"""

import numpy as np

__all__ = ["psor_solve", "brennan_schwartz_solve", "thomas_solve", "BACKEND_NAME"]

BACKEND_NAME = "compiled"

cdef double _TINY = 1e-300


def psor_solve(double[::1] sub, double[::1] diag, double[::1] sup,
               double[::1] rhs, double[::1] obstacle, double[::1] x,
               double omega, double tol, int max_sweeps, bint project):
    cdef Py_ssize_t n = x.shape[0], i, last = x.shape[0] - 1
    cdef int sweep
    cdef double r, ui, worst, low, s
    for sweep in range(1, max_sweeps + 1):
        for i in range(n):
            r = rhs[i] - diag[i] * x[i]
            if i > 0:
                r -= sub[i] * x[i - 1]
            if i < last:
                r -= sup[i] * x[i + 1]
            ui = x[i] + omega * r / diag[i]
            if project and ui < obstacle[i]:
                ui = obstacle[i]
            x[i] = ui
        worst = 0.0
        low = 0.0
        for i in range(n):
            r = diag[i] * x[i] - rhs[i]
            if i > 0:
                r += sub[i] * x[i - 1]
            if i < last:
                r += sup[i] * x[i + 1]
            if project:
                if r < low:
                    low = r
                s = x[i] - obstacle[i]
                if s < r:
                    r = s
                if r < 0.0:
                    r = -r
            elif r < 0.0:
                r = -r
            if r > worst:
                worst = r
        if worst <= tol and (not project or low >= -tol):
            return sweep, True
    return max_sweeps, False


def brennan_schwartz_solve(double[::1] sub, double[::1] diag, double[::1] sup,
                           double[::1] rhs, double[::1] obstacle, double[::1] x,
                           bint project):
    cdef Py_ssize_t n = x.shape[0], i
    cdef double piv, mlt, ui
    dh_arr = np.empty(n, dtype=np.float64)
    bh_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] dh = dh_arr
    cdef double[::1] bh = bh_arr
    dh[n - 1] = diag[n - 1]
    bh[n - 1] = rhs[n - 1]
    for i in range(n - 2, -1, -1):
        piv = dh[i + 1]
        if -_TINY < piv < _TINY:
            return 1
        mlt = sup[i] / piv
        dh[i] = diag[i] - mlt * sub[i + 1]
        bh[i] = rhs[i] - mlt * bh[i + 1]
    if -_TINY < dh[0] < _TINY:
        return 1
    ui = bh[0] / dh[0]
    if project and ui < obstacle[0]:
        ui = obstacle[0]
    x[0] = ui
    for i in range(1, n):
        ui = (bh[i] - sub[i] * x[i - 1]) / dh[i]
        if project and ui < obstacle[i]:
            ui = obstacle[i]
        x[i] = ui
    return 0


def thomas_solve(double[::1] sub, double[::1] diag, double[::1] sup,
                 double[::1] rhs, double[::1] x):
    cdef Py_ssize_t n = x.shape[0], i
    cdef double piv
    cp_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] cp = cp_arr
    piv = diag[0]
    if -_TINY < piv < _TINY:
        return 1
    cp[0] = sup[0] / piv
    x[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - sub[i] * cp[i - 1]
        if -_TINY < piv < _TINY:
            return 1
        cp[i] = sup[i] / piv
        x[i] = (rhs[i] - sub[i] * x[i - 1]) / piv
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return 0
