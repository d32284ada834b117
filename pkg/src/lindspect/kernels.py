"""Backend selection for the hot integration kernels.

The compiled extension ``lindspect._rk4`` is used when it was built; otherwise
the numpy implementation in ``lindspect._rk4_py`` takes over. Setting the
environment variable ``LINDSPECT_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _rk4_py

python_backend = _rk4_py
compiled_backend = None

if os.environ.get("LINDSPECT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _rk4 as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "compiled" if backend is compiled_backend else "python"

lindblad_rhs = backend.lindblad_rhs
rk4_propagate = backend.rk4_propagate
