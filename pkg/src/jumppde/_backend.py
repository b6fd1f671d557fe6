"""Import-time selection of the solver-kernel backend.

Prefers the compiled extension; falls back to the pure-Python twins when the
extension was not built. Set ``JUMPPDE_PURE_PYTHON=1`` to force the fallback
(used by the benchmark and the backend-parity tests).
"""

import os

if os.environ.get("JUMPPDE_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND_NAME
psor_solve = _impl.psor_solve
brennan_schwartz_solve = _impl.brennan_schwartz_solve
thomas_solve = _impl.thomas_solve
