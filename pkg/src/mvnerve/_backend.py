"""Pick the compiled kernels when available, the pure-Python ones otherwise.

Set ``MVNERVE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("MVNERVE_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _pykernels

reduce_columns = _impl.reduce_columns
rref_inplace = _impl.rref_inplace

__all__ = ["BACKEND", "reduce_columns", "rref_inplace"]
